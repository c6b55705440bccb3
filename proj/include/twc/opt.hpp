#pragma once
// Small optimization helpers shared by the region / condition solvers:
// Euclidean simplex projection, simplex grids, and projected gradient ascent
// for smooth concave objectives.

#include <functional>

#include "twc/prob.hpp"

namespace twc {

// Euclidean projection onto the probability simplex.
Vec project_to_simplex(Vec v);

// All points with coordinates k/res on the n-simplex (compositions of res).
std::vector<Vec> simplex_grid(int n, int res);

// Largest res with |simplex_grid(n, res)| <= budget (at least 1).
int simplex_grid_resolution(int n, long budget);

struct AscentOptions {
  int max_iter = 20000;
  double ftol = 1e-13;    // relative improvement threshold
  int patience = 6;       // consecutive small improvements before stopping
  double gap_tol = 3e-7;  // simplex KKT gap max(g) - <g,x> certifying optimality;
                          // the achievable floor is ~sqrt(machine eps)
};

struct AscentResult {
  Vec x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // stopped before exhausting max_iter
  bool certified = false;  // stopped with the KKT gap below gap_tol
};

// Mirror (multiplicative-weight) ascent with backtracking. For a concave
// objective the simplex KKT gap max(g) - <g, x> upper-bounds the remaining
// suboptimality, so termination at gap_tol certifies the value.
AscentResult maximize_concave_on_simplex(const std::function<double(const Vec&)>& f,
                                         const std::function<Vec(const Vec&)>& grad,
                                         Vec start, const AscentOptions& opts = {});

}  // namespace twc
