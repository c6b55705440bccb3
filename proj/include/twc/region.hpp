#pragma once
// Achievable-rate regions in the (R1, R2) plane: support-function evaluation
// under independent (inner) or arbitrarily correlated (outer) inputs,
// half-plane reconstruction of the region, closed forms for the additive
// noise-erasure family, and polygon comparison utilities.

#include <array>
#include <cstdint>
#include <string>

#include "twc/prob.hpp"

namespace twc {

// Convex, down-closed region described by its upper-right boundary vertices,
// sorted by increasing R1. Closure toward the axes is implied.
struct RateRegion2D {
  std::vector<std::array<double, 2>> vertices;

  double max_r1() const;
  double max_r2() const;
  // max over the region of lambda*R1 + (1-lambda)*R2
  double support(double lambda) const;
  bool contains(double r1, double r2, double slack) const;
};

struct SupportSample {
  double lambda = 0.0;
  double value = 0.0;  // bits
  bool product = false;
  Vec p1, p2;  // inner mode argmax factors
  Mat joint;   // outer mode argmax
};

enum class BoundMode { Inner, Outer };

struct RegionOptions {
  int grid = 50;            // grid points per simplex dimension (inner seeding)
  int restarts = 8;         // ascent restarts (outer mode)
  double tol = 1e-6;        // restart agreement required for outer certification
  int max_iter = 20000;
  std::uint64_t seed = 42;
  long grid_budget = 20000; // cap on total inner-seed evaluations
};

// Maximizes lambda*I(X1;Y2|X2) + (1-lambda)*I(X2;Y1|X1). Outer mode optimizes
// over joint inputs by projected gradient ascent (the objective is concave);
// restarts must agree within opts.tol or NonConvergence is thrown. Inner mode
// optimizes over product inputs by grid seeding plus alternating ascent and is
// a certified lower bound.
SupportSample support_value(const TwoWayChannel& ch, double lambda, BoundMode mode,
                            const RegionOptions& opts = {});

// Region from support samples at n_directions equispaced lambdas in [0, 1].
// Inner-mode output is contained in the true independent-input region;
// outer-mode output covers the correlated-input region up to discretization.
RateRegion2D compute_region(const TwoWayChannel& ch, BoundMode mode, int n_directions,
                            const RegionOptions& opts = {});

// Hull of the rate rectangles swept over P_X2 with P_X1 fixed to p_star. When
// a common-maximizer condition holds this is the exact capacity region.
RateRegion2D capacity_under_common_maximizer(const TwoWayChannel& ch, const Dist& p_star,
                                             int sweep_resolution);

// Rectangle R1 = (1-eps2)(log2 q - Hq(alpha2 / ((q-1)(1-eps2)))), R2 symmetric.
RateRegion2D closed_form_qary_erasure(int q, double alpha1, double eps1, double alpha2,
                                      double eps2);

// Half-plane intersection of {lambda R1 + (1-lambda) R2 <= value} with the
// nonnegative quadrant.
RateRegion2D region_from_supports(const Vec& lambdas, const Vec& values);

bool region_contains(const RateRegion2D& outer, const RateRegion2D& inner, double slack);
// Symmetric Hausdorff distance between the two upper boundaries.
double region_hausdorff(const RateRegion2D& a, const RateRegion2D& b);

// CSV with header "R1,R2", one vertex per line, 9 significant digits.
std::string region_to_csv(const RateRegion2D& r);

}  // namespace twc
