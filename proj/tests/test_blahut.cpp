#include <doctest.h>

#include <cmath>

#include "twc/blahut.hpp"
#include "twc/rng.hpp"

using namespace twc;

namespace {

Kernel make_kernel(std::initializer_list<Vec> rows) {
  Mat m((int)rows.size(), (int)rows.begin()->size());
  int r = 0;
  for (const Vec& row : rows) m.set_row(r++, row);
  return Kernel(std::move(m));
}

// closed-form optimal input for a 2x2 channel [[1-a, a], [b, 1-b]]-style with
// rows r0, r1: the optimal output q* equalizes the two divergences
Vec binary_optimal_input(const Vec& r0, const Vec& r1) {
  double h0 = -r0[0] * std::log2(r0[0]) - r0[1] * std::log2(r0[1]);
  double h1 = -r1[0] * std::log2(r1[0]) - r1[1] * std::log2(r1[1]);
  double delta = r0[0] - r1[0];
  double t = std::exp2((h0 - h1) / delta);  // (1-q0)/q0
  double q0 = 1.0 / (1.0 + t);
  double p0 = (q0 - r1[0]) / delta;
  return {p0, 1.0 - p0};
}

}  // namespace

TEST_CASE("noiseless binary channel: capacity 1, uniform maximizer") {
  Kernel k = make_kernel({{1.0, 0.0}, {0.0, 1.0}});
  BAResult r = blahut_arimoto(k);
  CHECK(r.capacity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.maximizer[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.gap <= 1e-10);
}

TEST_CASE("the two reference kernels share a maximizer near 0.471/0.529") {
  Kernel k1 = make_kernel({{0.9, 0.1}, {0.3, 0.7}});
  Kernel k2 = make_kernel({{0.87, 0.13}, {0.417, 0.583}});
  BAResult r1 = blahut_arimoto(k1);
  BAResult r2 = blahut_arimoto(k2);
  // oracle: closed-form optimum from the divergence-equalizing output
  Vec o1 = binary_optimal_input({0.9, 0.1}, {0.3, 0.7});
  Vec o2 = binary_optimal_input({0.87, 0.13}, {0.417, 0.583});
  CHECK(r1.maximizer[0] == doctest::Approx(o1[0]).epsilon(1e-6));
  CHECK(r2.maximizer[0] == doctest::Approx(o2[0]).epsilon(1e-6));
  // both maximizers put ~0.471 on the second input symbol
  CHECK(std::abs(r1.maximizer[1] - 0.471) < 5e-3);
  CHECK(std::abs(r2.maximizer[1] - 0.471) < 5e-3);
  CHECK(total_variation(r1.maximizer.p, r2.maximizer.p) < 1e-3);
  // each maximizer achieves the other kernel's capacity
  CHECK(r2.capacity - mutual_information(r1.maximizer, k2) < 1e-8);
  CHECK(r1.capacity - mutual_information(r2.maximizer, k1) < 1e-8);
}

TEST_CASE("BSC capacity matches the closed form") {
  Kernel k = make_kernel({{0.9, 0.1}, {0.1, 0.9}});
  BAResult r = blahut_arimoto(k);
  CHECK(r.capacity == doctest::Approx(1.0 - binary_entropy(0.1)).epsilon(1e-9));
  CHECK(r.maximizer[0] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("iterates are monotone and at least the uniform-input value") {
  SplitMix64 rng(2024);
  for (int t = 0; t < 30; ++t) {
    Kernel k{stochastic_sample(rng, 3, 3)};
    Vec trace;
    BAOptions opts;
    opts.trace = &trace;
    BAResult r = blahut_arimoto(k, opts);
    for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-12);
    Vec u(3, 1.0 / 3.0);
    CHECK(r.capacity >= mutual_information(u, k.k) - opts.tol);
  }
}

TEST_CASE("non-convergence is reported with the residual gap") {
  Kernel k = make_kernel({{0.9, 0.1}, {0.3, 0.7}});
  BAOptions opts;
  opts.max_iter = 1;
  opts.tol = 1e-15;
  try {
    blahut_arimoto(k, opts);
    FAIL("expected NonConvergence");
  } catch (const TwcError& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
}

TEST_CASE("uniform KKT test") {
  CHECK(uniform_kkt_test(make_kernel({{0.9, 0.1}, {0.1, 0.9}})));
  // asymmetric channel: divergences differ (evaluated directly)
  Kernel k = make_kernel({{0.9, 0.1}, {0.3, 0.7}});
  Vec q = output_dist(Vec{0.5, 0.5}, k.k);
  CHECK(std::abs(kl_divergence(k.k.row(0), q) - kl_divergence(k.k.row(1), q)) > 1e-3);
  CHECK_FALSE(uniform_kkt_test(k));
  // additive noise-erasure slice is quasi-symmetric, so uniform is optimal
  CHECK(uniform_kkt_test(make_kernel({{0.7, 0.1, 0.2}, {0.1, 0.7, 0.2}})));
}
