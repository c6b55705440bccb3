#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "twc/madb.hpp"
#include "twc/rng.hpp"

using namespace twc;

namespace {

MadbChannel example9_binary(double p_flip) {
  return gen_madb_additive(2, {0.9, 0.1}, {0.8, 0.2}, {1.0 - p_flip, p_flip});
}

// x3 = 0: Y3 = X1 through a clean channel; x3 = 1: Y3 = X1 through a Z channel.
// The two slices need conflicting inputs, so no single product dominates all
// conditional inputs.
MadbChannel conflicting_slices() {
  Mat m(8, 2);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      m.set_row((x1 * 2 + x2) * 2 + 0, x1 == 0 ? Vec{1.0, 0.0} : Vec{0.0, 1.0});
      m.set_row((x1 * 2 + x2) * 2 + 1, x1 == 0 ? Vec{1.0, 0.0} : Vec{0.5, 0.5});
    }
  return validate_madb(m, 2, 2, {0.9, 0.1}, {0.9, 0.1});
}

// brute-force oracle for the weighted polytope value: enumerate LP vertices
double polytope_oracle(const QuadBounds& b, const std::array<double, 4>& w) {
  std::vector<std::array<double, 2>> verts = {{0.0, 0.0}};
  double a = std::max(0.0, b.b13), c = std::max(0.0, b.b23), s = std::max(0.0, b.b_sum);
  verts.push_back({std::min(a, s), 0.0});
  verts.push_back({0.0, std::min(c, s)});
  if (s - a >= 0.0) verts.push_back({a, std::min(c, s - a)});
  if (s - c >= 0.0) verts.push_back({std::min(a, s - c), c});
  double best = 0.0;
  for (const auto& v : verts)
    best = std::max(best, w[0] * v[0] + w[1] * v[1]);
  return best + w[2] * std::max(0.0, b.b31) + w[3] * std::max(0.0, b.b32);
}

}  // namespace

TEST_CASE("rate bounds on the additive network") {
  MadbChannel ch = example9_binary(0.1);
  MadbInput in = uniform_madb_input(ch, 3);
  QuadBounds b = rate_quadruple_bounds(in, ch);
  double want = 1.0 - binary_entropy(0.1);
  CHECK(b.b_sum == doctest::Approx(want).epsilon(1e-12));
  CHECK(b.b13 == doctest::Approx(want).epsilon(1e-12));
  CHECK(b.b23 == doctest::Approx(want).epsilon(1e-12));

  // degenerate V with noiseless Z1: the state channel is perfect, so the
  // downlink rate toward user 1 is H(X3)
  MadbChannel clean = gen_madb_additive(2, {1.0, 0.0}, {0.9, 0.1}, {0.9, 0.1});
  MadbInput dv;
  dv.product = true;
  dv.nv = 1;
  dv.p_x1 = {0.5, 0.5};
  dv.p_x2 = {0.5, 0.5};
  dv.p_vx3 = Mat(1, 2);
  dv.p_vx3(0, 0) = 0.5;
  dv.p_vx3(0, 1) = 0.5;
  QuadBounds db = rate_quadruple_bounds(dv, clean);
  CHECK(db.b31 == doctest::Approx(1.0).epsilon(1e-12));

  // point masses on everything: all five bounds vanish
  MadbInput pm;
  pm.product = true;
  pm.nv = 1;
  pm.p_x1 = {1.0, 0.0};
  pm.p_x2 = {1.0, 0.0};
  pm.p_vx3 = Mat(1, 2);
  pm.p_vx3(0, 0) = 1.0;
  QuadBounds z = rate_quadruple_bounds(pm, ch);
  CHECK(z.b13 == doctest::Approx(0.0));
  CHECK(z.b23 == doctest::Approx(0.0));
  CHECK(z.b_sum == doctest::Approx(0.0));
  CHECK(z.b31 == doctest::Approx(0.0));
  CHECK(z.b32 == doctest::Approx(0.0));
}

TEST_CASE("bound structure on random inputs") {
  MadbChannel ch = gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3});
  SplitMix64 rng(5);
  for (int t = 0; t < 30; ++t) {
    MadbInput in;
    in.product = true;
    in.nv = 3;
    in.p_x1 = simplex_sample(rng, 2);
    in.p_x2 = simplex_sample(rng, 2);
    in.p_vx3 = Mat(3, 2);
    in.p_vx3.a = simplex_sample(rng, 6);
    QuadBounds b = rate_quadruple_bounds(in, ch);
    CHECK(b.b_sum >= std::max(b.b13, b.b23) - 1e-9);
    // downlink bounds ignore the uplink factors entirely
    MadbInput other = in;
    other.p_x1 = simplex_sample(rng, 2);
    other.p_x2 = simplex_sample(rng, 2);
    QuadBounds b2 = rate_quadruple_bounds(other, ch);
    CHECK(b.b31 == doctest::Approx(b2.b31).epsilon(1e-12));
    CHECK(b.b32 == doctest::Approx(b2.b32).epsilon(1e-12));
  }
}

TEST_CASE("weighted polytope value matches vertex enumeration") {
  SplitMix64 rng(11);
  for (int t = 0; t < 200; ++t) {
    QuadBounds b;
    b.b13 = rng.uniform01();
    b.b23 = rng.uniform01();
    b.b_sum = std::max(b.b13, b.b23) + rng.uniform01();
    b.b31 = rng.uniform01();
    b.b32 = rng.uniform01();
    std::array<double, 4> w = {rng.uniform01(), rng.uniform01(), rng.uniform01(),
                               rng.uniform01()};
    CHECK(weighted_polytope_value(b, w) ==
          doctest::Approx(polytope_oracle(b, w)).epsilon(1e-12));
  }
}

TEST_CASE("support values") {
  MadbOptions opts;
  opts.restarts = 5;
  MadbChannel ch = example9_binary(0.1);
  double want = 1.0 - binary_entropy(0.1);
  double inner = madb_support(ch, {1, 1, 0, 0}, BoundMode::Inner, opts).value;
  double outer = madb_support(ch, {1, 1, 0, 0}, BoundMode::Outer, opts).value;
  CHECK(inner == doctest::Approx(want).epsilon(5e-4));
  CHECK(outer == doctest::Approx(want).epsilon(5e-3));
  CHECK(inner <= outer + 1e-6);

  // downlink-only direction with noiseless Z1: max H(X3) = 1 at uniform
  MadbChannel clean = gen_madb_additive(2, {1.0, 0.0}, {0.9, 0.1}, {0.9, 0.1});
  double d = madb_support(clean, {0, 0, 1, 0}, BoundMode::Inner, opts).value;
  CHECK(d == doctest::Approx(1.0).epsilon(1e-4));

  CHECK(madb_support(ch, {0, 0, 0, 0}, BoundMode::Inner, opts).value ==
        doctest::Approx(0.0));

  // support optimization refuses oversized alphabets
  Vec u5(5, 0.2);
  MadbChannel big = gen_madb_additive(5, u5, u5, u5);
  try {
    madb_support(big, {1, 1, 0, 0}, BoundMode::Inner, opts);
    FAIL("expected UnsupportedScale");
  } catch (const TwcError& e) {
    CHECK(e.code() == ErrorCode::UnsupportedScale);
  }
  // while bound evaluation at fixed inputs still works
  QuadBounds qb = rate_quadruple_bounds(uniform_madb_input(big, 6), big);
  CHECK(qb.b_sum == doctest::Approx(std::log2(5.0) - entropy(u5)).epsilon(1e-9));
}

TEST_CASE("inner support never exceeds outer support") {
  MadbOptions opts;
  opts.restarts = 4;
  std::vector<MadbChannel> chans = {example9_binary(0.1),
                                    gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3}),
                                    gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1})};
  std::vector<std::array<double, 4>> dirs = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}, {0.3, 0.7, 0.2, 0.5}};
  for (size_t c = 0; c < chans.size(); ++c)
    for (const auto& w : dirs) {
      CAPTURE(c);
      double in = madb_support(chans[c], w, BoundMode::Inner, opts).value;
      double out = madb_support(chans[c], w, BoundMode::Outer, opts).value;
      CHECK(in <= out + 1e-6);
    }
}

TEST_CASE("product achievability checker") {
  MadbOptions opts;
  opts.trials = 400;

  ConditionReport ex9 = check_madb_product_achievability(example9_binary(0.1), opts);
  CHECK(ex9.verdict == Verdict::NotFalsified);
  CHECK(ex9.witness.value("candidate", std::string()) == "uniform-product");

  ConditionReport ex10 =
      check_madb_product_achievability(gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3}), opts);
  CHECK(ex10.verdict == Verdict::NotFalsified);

  MadbOptions hard;
  hard.trials = 4000;
  ConditionReport bad = check_madb_product_achievability(conflicting_slices(), hard);
  REQUIRE(bad.fails());
  CHECK(double(bad.counterexample.at("best_slack")) < -hard.tol);
  CHECK(verify_madb_report(conflicting_slices(), bad, hard));
}

TEST_CASE("three-user common maximizer checker") {
  MadbOptions opts;
  opts.trials = 400;

  MadbChannel ex10 = gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3});
  ConditionReport r10 = check_madb_common_maximizer(ex10, opts);
  CHECK(r10.holds());
  CHECK_FALSE(r10.exact);

  CHECK(check_madb_common_maximizer(example9_binary(0.1), opts).holds());
  CHECK(check_madb_common_maximizer(gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1}), opts)
            .holds());

  // one slice replaced by an asymmetric binary channel: the per-state optimal
  // value is no longer invariant over x2
  Mat m = ex10.p_y3;
  m.set_row((0 * 2 + 0) * 2 + 0, {0.7, 0.3, 0.0});
  m.set_row((1 * 2 + 0) * 2 + 0, {0.3, 0.7, 0.0});
  MadbChannel broken = validate_madb(m, 2, 3, {0.9, 0.1}, {0.7, 0.3});
  ConditionReport rb = check_madb_common_maximizer(broken, opts);
  REQUIRE(rb.fails());
  CHECK(rb.counterexample.at("condition") == "i");
}

TEST_CASE("three-user permutation symmetry checker") {
  MadbOptions opts;
  MadbChannel ex11 = gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1});
  ConditionReport r11 = check_madb_permutation_symmetry(ex11, opts);
  REQUIRE(r11.holds());
  CHECK(verify_madb_report(ex11, r11, opts));

  // q >= 3 additive law with asymmetric noise: transpositions are not shifts
  MadbChannel ex9 = gen_madb_additive(3, {0.8, 0.1, 0.1}, {0.8, 0.1, 0.1},
                                      {0.7, 0.2, 0.1});
  ConditionReport r9 = check_madb_permutation_symmetry(ex9, opts);
  CHECK(r9.fails());
  CHECK(verify_madb_report(ex9, r9, opts));

  // the noiseless binary sum channel carries the shift relabeling
  MadbChannel clean = gen_madb_additive(2, {0.9, 0.1}, {0.9, 0.1}, {1.0, 0.0});
  CHECK(check_madb_permutation_symmetry(clean, opts).holds());

  // the quasi-symmetric ternary-output law fails the X2-side equation
  CHECK(check_madb_permutation_symmetry(gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3}),
                                        opts)
            .fails());
}

TEST_CASE("generators print the reference rows") {
  MadbChannel er = gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1});
  CHECK(er.p_y3.row(er.row_index(0, 0, 0)) == Vec{0.9, 0.0, 0.1});
  CHECK(er.p_y3.row(er.row_index(1, 0, 0)) == Vec{0.0, 0.9, 0.1});

  MadbChannel ex10 = gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3});
  CHECK(ex10.p_y3.row(ex10.row_index(0, 1, 1)) == Vec{0.8, 0.2, 0.0});
  CHECK(ex10.p_y3.row(ex10.row_index(0, 0, 0)) == Vec{0.8, 0.0, 0.2});

  MadbChannel perm = gen_madb_additive(2, {0.9, 0.1}, {0.9, 0.1}, {1.0, 0.0});
  for (int r = 0; r < 8; ++r) {
    Vec row = perm.p_y3.row(r);
    CHECK(std::count(row.begin(), row.end(), 1.0) == 1);
    CHECK(std::count(row.begin(), row.end(), 0.0) == 1);
  }

  CHECK_THROWS_AS(gen_madb_erasure(1.5, {0.9, 0.1}, {0.9, 0.1}), TwcError);
  CHECK_THROWS_AS(gen_madb_additive(2, {0.9, 0.1}, {0.9, 0.1}, {0.9, 0.2}), TwcError);
}

TEST_CASE("erasure network: tight sum rate at 1 - eps") {
  MadbOptions opts;
  opts.restarts = 5;
  MadbChannel ch = gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1});
  double inner = madb_support(ch, {1, 1, 0, 0}, BoundMode::Inner, opts).value;
  double outer = madb_support(ch, {1, 1, 0, 0}, BoundMode::Outer, opts).value;
  CHECK(inner == doctest::Approx(0.9).epsilon(5e-3));
  CHECK(outer == doctest::Approx(0.9).epsilon(5e-3));
  CHECK(std::abs(inner - outer) < 5e-3);
}
