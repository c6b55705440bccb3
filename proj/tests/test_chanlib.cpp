#include <doctest.h>

#include <cmath>

#include "twc/blahut.hpp"
#include "twc/chanlib.hpp"
#include "twc/rng.hpp"
#include "twc/symmetry.hpp"

using namespace twc;

namespace {

void check_row(const Vec& got, const Vec& want) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i)
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("additive noise-erasure generator reproduces the reference slices") {
  TwoWayChannel ch = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2);
  // toward user 2, state 0: rows (1-e2-a2, a2, e2) / (a2, 1-e2-a2, e2)
  Kernel k20 = marginal_kernel(ch, Direction::To2, 0);
  check_row(k20.k.row(0), {0.7, 0.1, 0.2});
  check_row(k20.k.row(1), {0.1, 0.7, 0.2});
  Kernel k21 = marginal_kernel(ch, Direction::To2, 1);
  check_row(k21.k.row(0), {0.1, 0.7, 0.2});
  check_row(k21.k.row(1), {0.7, 0.1, 0.2});
  // toward user 1, slices indexed by x1 with a1 = 0.05, e1 = 0.1
  Kernel k10 = marginal_kernel(ch, Direction::To1, 0);
  check_row(k10.k.row(0), {0.85, 0.05, 0.1});
  check_row(k10.k.row(1), {0.05, 0.85, 0.1});

  // zero erasure: rows follow the (0.9, 0.1, 0) pattern
  TwoWayChannel nz = gen_qary_noise_erasure(2, 0.0, 0.0, 0.1, 0.0);
  Kernel s = marginal_kernel(nz, Direction::To2, 0);
  check_row(s.k.row(0), {0.9, 0.1, 0.0});

  // full erasure: zero capacity in both directions
  TwoWayChannel dead = gen_qary_noise_erasure(2, 0.0, 1.0, 0.0, 1.0);
  for (int x2 = 0; x2 < 2; ++x2)
    CHECK(blahut_arimoto(marginal_kernel(dead, Direction::To2, x2)).capacity ==
          doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(gen_qary_noise_erasure(2, 0.8, 0.5, 0.0, 0.0), TwcError);
  CHECK_THROWS_AS(gen_qary_noise_erasure(1, 0.0, 0.0, 0.0, 0.0), TwcError);
}

TEST_CASE("data access channel") {
  // m = 1 with zero burst/erasure collapses to the plain additive channel
  TwoWayChannel da = gen_data_access(1, 0.0, 0.0, 0.0, 0.0);
  TwoWayChannel add = binary_additive();
  REQUIRE(da.p.a.size() == add.p.a.size());
  for (size_t i = 0; i < da.p.a.size(); ++i)
    CHECK(da.p.a[i] == doctest::Approx(add.p.a[i]).epsilon(1e-12));

  // m = 1 capacity corner: (1 - e2) (1 - Hb(a2 / (1 - e2)))
  TwoWayChannel da2 = gen_data_access(1, 0.0, 0.0, 0.1, 0.2);
  double want = 0.8 * (1.0 - binary_entropy(0.125));
  double got = blahut_arimoto(marginal_kernel(da2, Direction::To2, 0)).capacity;
  CHECK(got == doctest::Approx(want).epsilon(1e-8));

  // m = 2: column-permutation families in both directions
  TwoWayChannel da4 = gen_data_access(2, 0.1, 0.05, 0.2, 0.1);
  CHECK(check_column_permutation_family(state_kernels(da4, Direction::To2)).holds());
  CHECK(check_column_permutation_family(state_kernels(da4, Direction::To1)).holds());
}

TEST_CASE("injective semi-deterministic compositions") {
  // additive specialization: h = h~ = xor, Bernoulli noise
  IsdSpec s;
  s.ny1 = s.ny2 = 2;
  s.h1 = Mat(2, 2);
  s.h2 = Mat(2, 2);
  s.ht1 = Mat(2, 2);
  s.ht2 = Mat(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int t = 0; t < 2; ++t) {
      s.h1(x, t) = s.h2(x, t) = x ^ t;
      s.ht1(x, t) = s.ht2(x, t) = x ^ t;
    }
  s.pz1 = {0.9, 0.1};
  s.pz2 = {0.9, 0.1};
  TwoWayChannel isd = gen_isd(s);
  // oracle: the additive law P(y1,y2|x1,x2) = P(z1 = y1+x1+x2) P(z2 = y2+x1+x2)
  REQUIRE(isd.ny1 == 2);
  REQUIRE(isd.ny2 == 2);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
          double want = s.pz1[y1 ^ x1 ^ x2] * s.pz2[y2 ^ x1 ^ x2];
          CHECK(isd.prob(x1, x2, y1, y2) == doctest::Approx(want).epsilon(1e-12));
        }

  // any valid composition admits a two-sided common maximizer with equal
  // per-state values
  CHECK(check_two_sided_common_maximizer(gen_isd(ternary_isd_spec())).holds());
  SplitMix64 rng(17);
  for (int t = 0; t < 5; ++t) {
    IsdSpec r = ternary_isd_spec();
    // random per-input relabelings keep the tables injective
    for (Mat* table : {&r.h1, &r.h2, &r.ht1, &r.ht2})
      for (int row = 0; row < table->rows; ++row) {
        int shift = (int)(rng.next() % 3);
        for (int c = 0; c < 3; ++c) (*table)(row, c) = ((int)(*table)(row, c) + shift) % 3;
      }
    r.pz1 = simplex_sample(rng, 3);
    r.pz2 = simplex_sample(rng, 3);
    CHECK(check_two_sided_common_maximizer(gen_isd(r)).holds());
  }

  IsdSpec broken = ternary_isd_spec();
  broken.h1(0, 0) = broken.h1(0, 1);  // constant in t: not injective
  try {
    gen_isd(broken);
    FAIL("expected NotInjective");
  } catch (const TwcError& e) {
    CHECK(e.code() == ErrorCode::NotInjective);
  }
}

TEST_CASE("fixtures print the reference matrices") {
  TwoWayChannel mot = fixture("motivational");
  CHECK(mot.p.row(0) == Vec{0.783, 0.087, 0.117, 0.013});
  Kernel m20 = marginal_kernel(mot, Direction::To2, 0);
  CHECK(m20.k.row(0)[0] == doctest::Approx(0.9).epsilon(1e-12));
  Kernel m21 = marginal_kernel(mot, Direction::To2, 1);
  CHECK(m21.k.row(0)[0] == doctest::Approx(0.1).epsilon(1e-12));
  Kernel m10 = marginal_kernel(mot, Direction::To1, 0);
  Kernel m11 = marginal_kernel(mot, Direction::To1, 1);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      CHECK(m10.k(r, c) == doctest::Approx(m11.k(r, c)).epsilon(1e-12));
    }
  CHECK(m10.k(0, 0) == doctest::Approx(0.87).epsilon(1e-12));
  CHECK(m10.k(1, 0) == doctest::Approx(0.417).epsilon(1e-12));

  TwoWayChannel ex4 = fixture("example4");
  Kernel e421 = marginal_kernel(ex4, Direction::To2, 1);
  CHECK(e421.k.row(0)[0] == doctest::Approx(0.87).epsilon(1e-12));
  CHECK(e421.k.row(1)[0] == doctest::Approx(0.417).epsilon(1e-12));
  CHECK(e421.k.row(1)[1] == doctest::Approx(0.583).epsilon(1e-12));

  TwoWayChannel ex5 = fixture("example5");
  Mat m1 = marginal_matrix(ex5, 1);
  CHECK(m1.row(0) == Vec{0.75, 0.25});
  CHECK(m1.row(1) == Vec{0.75, 0.25});
  CHECK(m1.row(2) == Vec{0.25, 0.75});
  CHECK(m1.row(3) == Vec{0.25, 0.75});

  TwoWayChannel ex6 = fixture("example6");
  CHECK(ex6.nx1 == 3);
  CHECK(ex6.nx2 == 2);
  Kernel e6 = marginal_kernel(ex6, Direction::To2, 0);
  CHECK(e6.k.row(0) == Vec{0.3, 0.2, 0.5});
  CHECK(e6.k.row(1) == Vec{0.5, 0.3, 0.2});
  CHECK(e6.k.row(2) == Vec{0.2, 0.5, 0.3});

  try {
    fixture("nope");
    FAIL("expected UnknownFixture");
  } catch (const TwcError& e) {
    CHECK(e.code() == ErrorCode::UnknownFixture);
  }
}
