#include "twc/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "twc/opt.hpp"
#include "twc/parallel.hpp"
#include "twc/rng.hpp"

namespace twc {

namespace {

double safe_log2(double x) { return std::log2(std::max(x, 1e-300)); }

// Objective and gradient for the correlated-input (outer) problem. The joint
// input is a point on the (nx1*nx2)-simplex, x1-major.
struct OuterObjective {
  const TwoWayChannel& ch;
  double lambda;
  std::vector<Mat> k2;  // to2 kernels per x2
  std::vector<Mat> k1;  // to1 kernels per x1

  explicit OuterObjective(const TwoWayChannel& c, double lam) : ch(c), lambda(lam) {
    for (const Kernel& k : state_kernels(c, Direction::To2)) k2.push_back(k.k);
    for (const Kernel& k : state_kernels(c, Direction::To1)) k1.push_back(k.k);
  }

  double value(const Vec& p) const {
    double i1 = 0.0, i2 = 0.0;
    for (int x2 = 0; x2 < ch.nx2; ++x2) {
      double w = 0.0;
      for (int x1 = 0; x1 < ch.nx1; ++x1) w += p[x1 * ch.nx2 + x2];
      if (w <= 0.0) continue;
      Vec cond(ch.nx1);
      for (int x1 = 0; x1 < ch.nx1; ++x1) cond[x1] = p[x1 * ch.nx2 + x2] / w;
      i1 += w * mutual_information(cond, k2[x2]);
    }
    for (int x1 = 0; x1 < ch.nx1; ++x1) {
      double w = 0.0;
      for (int x2 = 0; x2 < ch.nx2; ++x2) w += p[x1 * ch.nx2 + x2];
      if (w <= 0.0) continue;
      Vec cond(ch.nx2);
      for (int x2 = 0; x2 < ch.nx2; ++x2) cond[x2] = p[x1 * ch.nx2 + x2] / w;
      i2 += w * mutual_information(cond, k1[x1]);
    }
    return lambda * i1 + (1.0 - lambda) * i2;
  }

  // d/dp(x1,x2) of I(X1;Y2|X2) is D(K2(.|x1,x2) || Q2(.|x2)); analogously for
  // the reverse direction. Empty states fall back to the uniform-conditional
  // output, which keeps the ascent direction finite.
  Vec gradient(const Vec& p) const {
    Vec g(p.size(), 0.0);
    std::vector<Vec> q2(ch.nx2), q1(ch.nx1);
    for (int x2 = 0; x2 < ch.nx2; ++x2) {
      double w = 0.0;
      Vec q(k2[x2].cols, 0.0);
      for (int x1 = 0; x1 < ch.nx1; ++x1) {
        double m = p[x1 * ch.nx2 + x2];
        w += m;
        for (int y = 0; y < k2[x2].cols; ++y) q[y] += m * k2[x2](x1, y);
      }
      if (w > 0.0)
        for (double& v : q) v /= w;
      else
        for (int y = 0; y < k2[x2].cols; ++y) {
          q[y] = 0.0;
          for (int x1 = 0; x1 < ch.nx1; ++x1) q[y] += k2[x2](x1, y) / ch.nx1;
        }
      q2[x2] = std::move(q);
    }
    for (int x1 = 0; x1 < ch.nx1; ++x1) {
      double w = 0.0;
      Vec q(k1[x1].cols, 0.0);
      for (int x2 = 0; x2 < ch.nx2; ++x2) {
        double m = p[x1 * ch.nx2 + x2];
        w += m;
        for (int y = 0; y < k1[x1].cols; ++y) q[y] += m * k1[x1](x2, y);
      }
      if (w > 0.0)
        for (double& v : q) v /= w;
      else
        for (int y = 0; y < k1[x1].cols; ++y) {
          q[y] = 0.0;
          for (int x2 = 0; x2 < ch.nx2; ++x2) q[y] += k1[x1](x2, y) / ch.nx2;
        }
      q1[x1] = std::move(q);
    }
    for (int x1 = 0; x1 < ch.nx1; ++x1)
      for (int x2 = 0; x2 < ch.nx2; ++x2) {
        double d2 = 0.0, d1 = 0.0;
        for (int y = 0; y < k2[x2].cols; ++y) {
          double kv = k2[x2](x1, y);
          if (kv > 0.0) d2 += kv * (std::log2(kv) - safe_log2(q2[x2][y]));
        }
        for (int y = 0; y < k1[x1].cols; ++y) {
          double kv = k1[x1](x2, y);
          if (kv > 0.0) d1 += kv * (std::log2(kv) - safe_log2(q1[x1][y]));
        }
        g[x1 * ch.nx2 + x2] = lambda * d2 + (1.0 - lambda) * d1;
      }
    return g;
  }
};

// Product-input objective pieces for the inner problem.
struct InnerObjective {
  const TwoWayChannel& ch;
  double lambda;
  std::vector<Mat> k2, k1;

  explicit InnerObjective(const TwoWayChannel& c, double lam) : ch(c), lambda(lam) {
    for (const Kernel& k : state_kernels(c, Direction::To2)) k2.push_back(k.k);
    for (const Kernel& k : state_kernels(c, Direction::To1)) k1.push_back(k.k);
  }

  double value(const Vec& p1, const Vec& p2) const {
    double i1 = 0.0, i2 = 0.0;
    for (int x2 = 0; x2 < ch.nx2; ++x2)
      if (p2[x2] > 0.0) i1 += p2[x2] * mutual_information(p1, k2[x2]);
    for (int x1 = 0; x1 < ch.nx1; ++x1)
      if (p1[x1] > 0.0) i2 += p1[x1] * mutual_information(p2, k1[x1]);
    return lambda * i1 + (1.0 - lambda) * i2;
  }

  // Gradient in p1 with p2 fixed (concave block), up to an additive constant.
  Vec grad_p1(const Vec& p1, const Vec& p2) const {
    Vec g(ch.nx1, 0.0);
    std::vector<Vec> q(ch.nx2);
    for (int x2 = 0; x2 < ch.nx2; ++x2) q[x2] = output_dist(p1, k2[x2]);
    for (int x1 = 0; x1 < ch.nx1; ++x1) {
      double d = 0.0;
      for (int x2 = 0; x2 < ch.nx2; ++x2) {
        if (p2[x2] <= 0.0) continue;
        double acc = 0.0;
        for (int y = 0; y < k2[x2].cols; ++y) {
          double kv = k2[x2](x1, y);
          if (kv > 0.0) acc += kv * (std::log2(kv) - safe_log2(q[x2][y]));
        }
        d += p2[x2] * acc;
      }
      g[x1] = lambda * d + (1.0 - lambda) * mutual_information(p2, k1[x1]);
    }
    return g;
  }

  Vec grad_p2(const Vec& p1, const Vec& p2) const {
    Vec g(ch.nx2, 0.0);
    std::vector<Vec> q(ch.nx1);
    for (int x1 = 0; x1 < ch.nx1; ++x1) q[x1] = output_dist(p2, k1[x1]);
    for (int x2 = 0; x2 < ch.nx2; ++x2) {
      double d = 0.0;
      for (int x1 = 0; x1 < ch.nx1; ++x1) {
        if (p1[x1] <= 0.0) continue;
        double acc = 0.0;
        for (int y = 0; y < k1[x1].cols; ++y) {
          double kv = k1[x1](x2, y);
          if (kv > 0.0) acc += kv * (std::log2(kv) - safe_log2(q[x1][y]));
        }
        d += p1[x1] * acc;
      }
      g[x2] = (1.0 - lambda) * d + lambda * mutual_information(p1, k2[x2]);
    }
    return g;
  }
};

}  // namespace

double RateRegion2D::max_r1() const {
  double m = 0.0;
  for (const auto& v : vertices) m = std::max(m, v[0]);
  return m;
}

double RateRegion2D::max_r2() const {
  double m = 0.0;
  for (const auto& v : vertices) m = std::max(m, v[1]);
  return m;
}

double RateRegion2D::support(double lambda) const {
  double m = 0.0;  // (0,0) is always in the region
  for (const auto& v : vertices) m = std::max(m, lambda * v[0] + (1.0 - lambda) * v[1]);
  return m;
}

bool RateRegion2D::contains(double r1, double r2, double slack) const {
  if (r1 < -slack || r2 < -slack) return false;
  if (vertices.empty()) return r1 <= slack && r2 <= slack;
  if (r1 > max_r1() + slack) return false;
  if (r2 > max_r2() + slack) return false;
  // below the boundary polyline
  double x = std::min(std::max(r1, 0.0), max_r1());
  double y = 0.0;
  if (vertices.size() == 1) {
    y = vertices[0][1];
  } else {
    y = vertices.front()[1];
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
      double x0 = vertices[i][0], x1 = vertices[i + 1][0];
      if (x >= x0 - 1e-15 && x <= x1 + 1e-15) {
        double t = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
        y = vertices[i][1] + t * (vertices[i + 1][1] - vertices[i][1]);
        break;
      }
      y = vertices[i + 1][1];
    }
  }
  return r2 <= y + slack;
}

SupportSample support_value(const TwoWayChannel& ch, double lambda, BoundMode mode,
                            const RegionOptions& opts) {
  if (lambda < 0.0 || lambda > 1.0)
    throw TwcError(ErrorCode::OutOfRange, "lambda must lie in [0, 1]");
  SupportSample out;
  out.lambda = lambda;

  if (mode == BoundMode::Outer) {
    OuterObjective obj(ch, lambda);
    int n = ch.nx1 * ch.nx2;
    AscentOptions aopts;
    aopts.max_iter = opts.max_iter;
    double best = -1.0, worst = 1e300;
    Vec best_x;
    std::uint64_t salt = opts.seed ^ 0x5eedULL;
    bool any_certified = false;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
      Vec start;
      if (r == 0) {
        start.assign(n, 1.0 / n);
      } else {
        SplitMix64 rng = substream(salt, (std::uint64_t)r);
        start = simplex_sample(rng, n);
      }
      AscentResult res = maximize_concave_on_simplex(
          [&](const Vec& p) { return obj.value(p); },
          [&](const Vec& p) { return obj.gradient(p); }, std::move(start), aopts);
      any_certified = any_certified || res.certified;
      worst = std::min(worst, res.value);
      if (res.value > best) {
        best = res.value;
        best_x = res.x;
      }
    }
    // the objective is concave: a gap-certified restart pins the value, and
    // otherwise restart agreement within opts.tol is required
    if (!any_certified && best - worst > std::max(opts.tol, 1e-9))
      throw TwcError(ErrorCode::NonConvergence,
                     "outer support ascent restarts disagree by " +
                         std::to_string(best - worst));
    out.value = best;
    out.product = false;
    out.joint = Mat(ch.nx1, ch.nx2);
    out.joint.a = best_x;
    return out;
  }

  InnerObjective obj(ch, lambda);
  // grid seeding: grid points per simplex dimension, capped by total budget
  int res1 = std::min(opts.grid, simplex_grid_resolution(ch.nx1, opts.grid_budget));
  int res2 = std::min(opts.grid, simplex_grid_resolution(ch.nx2, opts.grid_budget));
  std::vector<Vec> g1 = simplex_grid(ch.nx1, std::max(1, res1));
  std::vector<Vec> g2 = simplex_grid(ch.nx2, std::max(1, res2));
  while ((long)g1.size() * (long)g2.size() > opts.grid_budget && (res1 > 4 || res2 > 4)) {
    if (res1 >= res2)
      g1 = simplex_grid(ch.nx1, --res1);
    else
      g2 = simplex_grid(ch.nx2, --res2);
  }
  double best = -1.0;
  Vec bp1, bp2;
  for (const Vec& p1 : g1)
    for (const Vec& p2 : g2) {
      double v = obj.value(p1, p2);
      if (v > best) {
        best = v;
        bp1 = p1;
        bp2 = p2;
      }
    }
  // alternating concave ascent from the best grid pair plus a uniform start
  AscentOptions aopts;
  aopts.max_iter = 4000;
  auto refine = [&](Vec p1, Vec p2) {
    double cur = obj.value(p1, p2);
    for (int round = 0; round < 60; ++round) {
      AscentResult r1 = maximize_concave_on_simplex(
          [&](const Vec& x) { return obj.value(x, p2); },
          [&](const Vec& x) { return obj.grad_p1(x, p2); }, p1, aopts);
      p1 = r1.x;
      AscentResult r2 = maximize_concave_on_simplex(
          [&](const Vec& x) { return obj.value(p1, x); },
          [&](const Vec& x) { return obj.grad_p2(p1, x); }, p2, aopts);
      p2 = r2.x;
      if (r2.value - cur <= 1e-13 * (1.0 + std::abs(r2.value))) {
        cur = r2.value;
        break;
      }
      cur = r2.value;
    }
    if (cur > best) {
      best = cur;
      bp1 = p1;
      bp2 = p2;
    }
  };
  refine(bp1, bp2);
  refine(Vec(ch.nx1, 1.0 / ch.nx1), Vec(ch.nx2, 1.0 / ch.nx2));
  out.value = best;
  out.product = true;
  out.p1 = bp1;
  out.p2 = bp2;
  return out;
}

RateRegion2D region_from_supports(const Vec& lambdas, const Vec& values) {
  // Candidate vertices: pairwise line intersections plus axis intercepts.
  // Every feasible candidate lies on the region boundary (it is tight for the
  // lines that produced it), so the chain is the Pareto-maximal candidate set
  // plus the two axis endpoints.
  size_t n = lambdas.size();
  std::vector<std::array<double, 2>> cand;
  for (size_t i = 0; i < n; ++i) {
    double li = lambdas[i], vi = values[i];
    if (li > 1e-12) cand.push_back({vi / li, 0.0});
    if (1.0 - li > 1e-12) cand.push_back({0.0, vi / (1.0 - li)});
    for (size_t j = i + 1; j < n; ++j) {
      double lj = lambdas[j], vj = values[j];
      double det = li * (1.0 - lj) - lj * (1.0 - li);
      if (std::abs(det) < 1e-12) continue;
      double r1 = (vi * (1.0 - lj) - vj * (1.0 - li)) / det;
      double r2 = (li * vj - lj * vi) / det;
      cand.push_back({r1, r2});
    }
  }
  std::vector<std::array<double, 2>> feas;
  for (const auto& p : cand) {
    if (p[0] < -1e-9 || p[1] < -1e-9) continue;
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i)
      if (lambdas[i] * p[0] + (1.0 - lambdas[i]) * p[1] > values[i] + 1e-9) ok = false;
    if (ok) feas.push_back({std::max(p[0], 0.0), std::max(p[1], 0.0)});
  }
  RateRegion2D out;
  if (feas.empty()) {
    out.vertices.push_back({0.0, 0.0});
    return out;
  }
  double r1max = 0.0, r2max = 0.0;
  for (const auto& p : feas) {
    r1max = std::max(r1max, p[0]);
    r2max = std::max(r2max, p[1]);
  }
  if (r1max <= 1e-12 && r2max <= 1e-12) {
    out.vertices.push_back({0.0, 0.0});
    return out;
  }
  std::vector<std::array<double, 2>> chain;
  for (const auto& p : feas) {
    bool dominated = false;
    for (const auto& q : feas)
      if (q[0] >= p[0] - 1e-12 && q[1] >= p[1] - 1e-12 &&
          (q[0] > p[0] + 1e-9 || q[1] > p[1] + 1e-9)) {
        dominated = true;
        break;
      }
    if (!dominated) chain.push_back(p);
  }
  chain.push_back({0.0, r2max});
  chain.push_back({r1max, 0.0});
  // cluster-dedupe, then order by increasing R1 (R2 decreasing breaks ties)
  std::vector<std::array<double, 2>> dedup;
  for (const auto& p : chain) {
    bool seen = false;
    for (const auto& q : dedup)
      if (std::abs(p[0] - q[0]) < 1e-9 && std::abs(p[1] - q[1]) < 1e-9) {
        seen = true;
        break;
      }
    if (!seen) dedup.push_back(p);
  }
  std::sort(dedup.begin(), dedup.end(), [](const auto& a, const auto& b) {
    if (std::abs(a[0] - b[0]) > 1e-12) return a[0] < b[0];
    return a[1] > b[1];
  });
  out.vertices = dedup;
  return out;
}

RateRegion2D compute_region(const TwoWayChannel& ch, BoundMode mode, int n_directions,
                            const RegionOptions& opts) {
  if (n_directions < 2)
    throw TwcError(ErrorCode::ParameterOutOfRange, "need at least 2 directions");
  Vec lambdas(n_directions), values(n_directions, 0.0);
  for (int i = 0; i < n_directions; ++i)
    lambdas[i] = double(i) / double(n_directions - 1);
  parallel_for(n_directions, [&](int i) {
    values[i] = support_value(ch, lambdas[i], mode, opts).value;
  });
  return region_from_supports(lambdas, values);
}

RateRegion2D capacity_under_common_maximizer(const TwoWayChannel& ch, const Dist& p_star,
                                             int sweep_resolution) {
  if (p_star.size() != ch.nx1)
    throw TwcError(ErrorCode::DimensionMismatch, "p_star vs X1 alphabet");
  if (sweep_resolution < 1)
    throw TwcError(ErrorCode::ParameterOutOfRange, "sweep resolution");
  std::vector<std::array<double, 2>> corners;
  for (const Vec& p2 : simplex_grid(ch.nx2, sweep_resolution)) {
    JointDist j = JointDist::product(p_star, Dist(p2));
    double r1 = conditional_mutual_information(j, ch, Direction::To2);
    double r2 = conditional_mutual_information(j, ch, Direction::To1);
    corners.push_back({r1, r2});
  }
  // hull of the union of anchored rectangles = hull of corners and their
  // axis projections
  Vec lambdas, values;
  // express as supports over a fine direction fan for reuse of the
  // intersection code
  const int fan = 181;
  lambdas.resize(fan);
  values.assign(fan, 0.0);
  for (int i = 0; i < fan; ++i) {
    double l = double(i) / double(fan - 1);
    lambdas[i] = l;
    double best = 0.0;
    for (const auto& c : corners)
      best = std::max(best, l * c[0] + (1.0 - l) * c[1]);
    values[i] = best;
  }
  return region_from_supports(lambdas, values);
}

RateRegion2D closed_form_qary_erasure(int q, double alpha1, double eps1, double alpha2,
                                      double eps2) {
  if (q < 2) throw TwcError(ErrorCode::ParameterOutOfRange, "q must be >= 2");
  auto rate = [&](double alpha, double eps) {
    if (alpha < 0.0 || eps < 0.0 || alpha + eps > 1.0 + 1e-12)
      throw TwcError(ErrorCode::ParameterOutOfRange, "alpha/eps out of range");
    if (1.0 - eps <= 0.0) return 0.0;
    // conditioned on no erasure the channel is q-ary symmetric with total
    // flip weight alpha/(1-eps), whose noise entropy is H_q at that argument
    double x = alpha / (1.0 - eps);
    return std::max(0.0, (1.0 - eps) * (std::log2(double(q)) - q_ary_entropy(x, q)));
  };
  double r1 = rate(alpha2, eps2);
  double r2 = rate(alpha1, eps1);
  RateRegion2D out;
  if (r1 <= 0.0 && r2 <= 0.0) {
    out.vertices.push_back({0.0, 0.0});
    return out;
  }
  if (r2 > 0.0) out.vertices.push_back({0.0, r2});
  if (r1 > 0.0 && r2 > 0.0) out.vertices.push_back({r1, r2});
  if (r1 > 0.0) out.vertices.push_back({r1, 0.0});
  return out;
}

bool region_contains(const RateRegion2D& outer, const RateRegion2D& inner, double slack) {
  for (const auto& v : inner.vertices)
    if (!outer.contains(v[0], v[1], slack)) return false;
  return true;
}

namespace {

double point_segment_distance(const std::array<double, 2>& p, const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
  double vx = b[0] - a[0], vy = b[1] - a[1];
  double wx = p[0] - a[0], wy = p[1] - a[1];
  double c1 = vx * wx + vy * wy;
  double c2 = vx * vx + vy * vy;
  double t = c2 > 0.0 ? std::min(1.0, std::max(0.0, c1 / c2)) : 0.0;
  double dx = p[0] - (a[0] + t * vx), dy = p[1] - (a[1] + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

double point_chain_distance(const std::array<double, 2>& p, const RateRegion2D& r) {
  if (r.vertices.empty()) return std::hypot(p[0], p[1]);
  if (r.vertices.size() == 1)
    return std::hypot(p[0] - r.vertices[0][0], p[1] - r.vertices[0][1]);
  double best = 1e300;
  for (size_t i = 0; i + 1 < r.vertices.size(); ++i)
    best = std::min(best, point_segment_distance(p, r.vertices[i], r.vertices[i + 1]));
  return best;
}

double directed_hausdorff(const RateRegion2D& a, const RateRegion2D& b) {
  // maximum over the boundary of a; subdivision keeps the estimate tight even
  // when the maximum falls inside a segment
  double worst = 0.0;
  auto consider = [&](double x, double y) {
    worst = std::max(worst, point_chain_distance({x, y}, b));
  };
  if (a.vertices.size() == 1) {
    consider(a.vertices[0][0], a.vertices[0][1]);
    return worst;
  }
  const int sub = 32;
  for (size_t i = 0; i + 1 < a.vertices.size(); ++i)
    for (int s = 0; s <= sub; ++s) {
      double t = double(s) / sub;
      consider(a.vertices[i][0] + t * (a.vertices[i + 1][0] - a.vertices[i][0]),
               a.vertices[i][1] + t * (a.vertices[i + 1][1] - a.vertices[i][1]));
    }
  return worst;
}

}  // namespace

double region_hausdorff(const RateRegion2D& a, const RateRegion2D& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::string region_to_csv(const RateRegion2D& r) {
  std::string out = "R1,R2\n";
  char buf[64];
  for (const auto& v : r.vertices) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", v[0], v[1]);
    out += buf;
  }
  return out;
}

}  // namespace twc
