#include "twc/opt.hpp"

#include <algorithm>
#include <cmath>

namespace twc {

Vec project_to_simplex(Vec v) {
  Vec u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  int rho = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - 1.0) / double(i + 1);
    if (u[i] - t > 0.0) {
      rho = int(i + 1);
      theta = t;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(0.0, x - theta);
  // guard against accumulated rounding
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0)
    for (double& x : v) x /= s;
  else
    v.assign(v.size(), 1.0 / double(v.size()));
  return v;
}

static void grid_rec(int n, int res, int pos, int left, Vec& cur, std::vector<Vec>& out) {
  if (pos == n - 1) {
    cur[pos] = double(left) / res;
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    cur[pos] = double(k) / res;
    grid_rec(n, res, pos + 1, left - k, cur, out);
  }
}

std::vector<Vec> simplex_grid(int n, int res) {
  std::vector<Vec> out;
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(Vec{1.0});
    return out;
  }
  Vec cur(n, 0.0);
  grid_rec(n, res, 0, res, cur, out);
  return out;
}

static long grid_count(int n, int res) {
  // C(res + n - 1, n - 1), saturating
  long c = 1;
  for (int i = 1; i <= n - 1; ++i) {
    c = c * (res + i) / i;
    if (c > (1L << 40)) return c;
  }
  return c;
}

int simplex_grid_resolution(int n, long budget) {
  if (n <= 1) return 1;
  int res = 1;
  while (grid_count(n, res + 1) <= budget) ++res;
  return res;
}

AscentResult maximize_concave_on_simplex(const std::function<double(const Vec&)>& f,
                                         const std::function<Vec(const Vec&)>& grad,
                                         Vec start, const AscentOptions& opts) {
  AscentResult res;
  Vec x = project_to_simplex(std::move(start));
  // multiplicative updates need an interior start
  for (double& v : x) v = (1.0 - 1e-12) * v + 1e-12 / double(x.size());
  double fx = f(x);
  double step = 1.0;
  int calm = 0;
  int it = 0;
  bool certified = false;
  bool stalled = false;
  for (; it < opts.max_iter && !stalled; ++it) {
    Vec g = grad(x);
    double gmax = *std::max_element(g.begin(), g.end());
    double gdot = 0.0;
    for (size_t i = 0; i < x.size(); ++i) gdot += g[i] * x[i];
    double gap = gmax - gdot;
    if (gap <= opts.gap_tol * (1.0 + std::abs(fx))) {
      certified = true;
      break;
    }
    bool moved = false;
    while (step >= 1e-16) {
      Vec cand(x.size());
      double z = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        cand[i] = x[i] * std::exp2(std::max(step * (g[i] - gmax), -64.0));
        z += cand[i];
      }
      for (double& v : cand) v /= z;
      // keep every coordinate revivable; the floor is far below gap_tol
      double z2 = 0.0;
      for (double& v : cand) {
        v = std::max(v, 1e-18);
        z2 += v;
      }
      for (double& v : cand) v /= z2;
      double fc = f(cand);
      if (fc > fx) {
        double gain = fc - fx;
        x = std::move(cand);
        fx = fc;
        moved = true;
        step = std::min(step * 2.0, 256.0);
        if (gain <= opts.ftol * (1.0 + std::abs(fx))) {
          if (++calm >= opts.patience) stalled = true;
        } else {
          calm = 0;
        }
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  res.x = std::move(x);
  res.value = fx;
  res.iterations = it;
  res.certified = certified;
  res.converged = certified || it < opts.max_iter;
  return res;
}

}  // namespace twc
