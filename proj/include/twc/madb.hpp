#pragma once
// Three-user networks: a multiple-access uplink toward user 3 combined with a
// degraded broadcast downlink over modulo-q additive noise. Rate bounds with
// the auxiliary variable V, inner/outer support values, tightness checkers,
// and the generators for the reference channels.

#include <array>
#include <cstdint>
#include <string>

#include "twc/prob.hpp"
#include "twc/region.hpp"
#include "twc/report.hpp"
#include "twc/symmetry.hpp"

namespace twc {

// Uplink law P(y3 | x1, x2, x3) with all inputs over Z_q; downlink fixed to
// Y1 = X1 + X3 + Z1 and Y2 = X2 + X3 + Z1 + Z2 (mod q) with independent
// additive noises.
struct MadbChannel {
  int q = 0;    // input modulus
  int ny3 = 0;  // uplink output alphabet
  Mat p_y3;     // rows (x1,x2,x3) x1-major, columns y3
  Vec pz1, pz2;

  int row_index(int x1, int x2, int x3) const { return (x1 * q + x2) * q + x3; }
  // uplink kernel x1 -> y3 at fixed (x2, x3)
  Kernel kernel_x1(int x2, int x3) const;
  // uplink kernel x2 -> y3 at fixed (x1, x3)
  Kernel kernel_x2(int x1, int x3) const;
  // uplink kernel (x1,x2) -> y3 at fixed x3, x1-major rows
  Kernel kernel_x12(int x3) const;
};

MadbChannel validate_madb(const Mat& p_y3, int q, int ny3, Vec pz1, Vec pz2);

// Input distributions. Product mode: P_X1 x P_X2 x P_{V,X3}. Joint mode: one
// distribution over (X1, X2, X3, V); the uplink terms read its (X1,X2,X3)
// marginal, the downlink terms its (V,X3) marginal.
struct MadbInput {
  bool product = true;
  int nv = 0;
  Vec p_x1, p_x2;  // product mode
  Mat p_vx3;       // product mode: rows v, cols x3
  Vec p_joint;     // joint mode, index ((x1*q + x2)*q + x3)*nv + v
};

MadbInput uniform_madb_input(const MadbChannel& ch, int nv);

struct QuadBounds {
  double b13 = 0.0;   // I(X1;Y3|X2,X3)
  double b23 = 0.0;   // I(X2;Y3|X1,X3)
  double b_sum = 0.0; // I(X1,X2;Y3|X3)
  double b31 = 0.0;   // I(X3; X3+Z1 | V)
  double b32 = 0.0;   // I(V; X3+Z1+Z2)
};

QuadBounds rate_quadruple_bounds(const MadbInput& input, const MadbChannel& ch);

// Max of w13*R13 + w23*R23 + w31*R31 + w32*R32 over the rate polytope cut out
// by one QuadBounds instance (closed form).
double weighted_polytope_value(const QuadBounds& b, const std::array<double, 4>& w);

struct MadbSupport {
  double value = 0.0;
  MadbInput argmax;
};

struct MadbOptions {
  long trials = 10000;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  double mat_tol = 1e-9;
  long perm_budget = 10000000;
  int nv = 0;          // 0: use q + 1
  int restarts = 8;
  int grid = 21;       // seeding resolution for the uplink product search
};

// Maximizes the weighted rate over product inputs (inner, a lower bound) or
// joint uplink inputs (outer). The downlink block separates from the uplink
// block, so the two are optimized independently.
MadbSupport madb_support(const MadbChannel& ch, const std::array<double, 4>& weights,
                         BoundMode mode, const MadbOptions& opts = {});

// For sampled conditional inputs P(x1,x2 | x3), searches for one product
// input whose rate bounds dominate them; Fails when the concave search
// certifies none exists above -tol. The fixed uniform-product candidate is
// tried first and reported when it always suffices.
ConditionReport check_madb_product_achievability(const MadbChannel& ch,
                                                 const MadbOptions& opts = {});

// Common maximizer over the (x2,x3)-sliced uplink kernels with value
// invariance over x2, structural/randomized invariance over (x1,x3), and the
// randomized dominance of P* x P_X2 over joint (X1,X2) inputs.
ConditionReport check_madb_common_maximizer(const MadbChannel& ch,
                                            const MadbOptions& opts = {});

// Exhaustive uplink relabeling symmetry: every transposition of X1 (and of
// X2) symbols must be undone by some output permutation of Y3.
ConditionReport check_madb_permutation_symmetry(const MadbChannel& ch,
                                                const MadbOptions& opts = {});

bool verify_madb_report(const MadbChannel& ch, const ConditionReport& report,
                        const MadbOptions& opts = {});

// Generators: "additive" (Y3 = X1+X2+X3+Z3 mod q), "example10" (the ternary
// output law with parameter eps), "erasure" (Y3 = X1+X2+X3 or E).
MadbChannel gen_madb_additive(int q, Vec pz1, Vec pz2, Vec pz3);
MadbChannel gen_madb_example10(double eps, Vec pz1, Vec pz2);
MadbChannel gen_madb_erasure(double eps, Vec pz1, Vec pz2);

}  // namespace twc
