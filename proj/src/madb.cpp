#include "twc/madb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twc/blahut.hpp"
#include "twc/opt.hpp"
#include "twc/rng.hpp"

namespace twc {

namespace {

using nlohmann::json;

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int transposed(int x, int a, int b) { return x == a ? b : (x == b ? a : x); }

Vec convolve_mod(const Vec& a, const Vec& b, int q) {
  Vec c(q, 0.0);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) c[(i + j) % q] += a[i] * b[j];
  return c;
}

// numeric gradient of f on the simplex via renormalized perturbations
Vec numeric_simplex_grad(const std::function<double(const Vec&)>& f, const Vec& x) {
  const double h = 1e-6;
  Vec g(x.size(), 0.0);
  double fx = f(x);
  for (size_t i = 0; i < x.size(); ++i) {
    Vec up = x;
    up[i] += h;
    double su = 1.0 + h;
    for (double& v : up) v /= su;
    g[i] = (f(up) - fx) / h;
  }
  return g;
}

// precomputed slice kernels for the uplink plus the downlink channel pieces
struct MadbKernels {
  int q = 0, ny3 = 0;
  std::vector<Mat> kx1;   // [x2 * q + x3]: x1 -> y3
  std::vector<Mat> kx2;   // [x1 * q + x3]: x2 -> y3
  std::vector<Mat> kx12;  // [x3]: (x1,x2) -> y3
  Mat w1;                 // x3 -> x3 + z1
  Vec c12;                // law of z1 + z2

  explicit MadbKernels(const MadbChannel& ch) : q(ch.q), ny3(ch.ny3) {
    for (int x2 = 0; x2 < q; ++x2)
      for (int x3 = 0; x3 < q; ++x3) kx1.push_back(ch.kernel_x1(x2, x3).k);
    for (int x1 = 0; x1 < q; ++x1)
      for (int x3 = 0; x3 < q; ++x3) kx2.push_back(ch.kernel_x2(x1, x3).k);
    for (int x3 = 0; x3 < q; ++x3) kx12.push_back(ch.kernel_x12(x3).k);
    w1 = Mat(q, q);
    for (int x3 = 0; x3 < q; ++x3)
      for (int u = 0; u < q; ++u) w1(x3, u) = ch.pz1[((u - x3) % q + q) % q];
    c12 = convolve_mod(ch.pz1, ch.pz2, q);
  }

  // uplink bounds from the (X1,X2,X3) distribution, rows (x1,x2) x1-major
  void ma_bounds(const Mat& pj, QuadBounds& b) const {
    b.b13 = b.b23 = b.b_sum = 0.0;
    for (int x3 = 0; x3 < q; ++x3) {
      double p3 = 0.0;
      for (int r = 0; r < q * q; ++r) p3 += pj(r, x3);
      if (p3 <= 0.0) continue;
      for (int x2 = 0; x2 < q; ++x2) {
        double w = 0.0;
        Vec cond(q, 0.0);
        for (int x1 = 0; x1 < q; ++x1) {
          double m = pj(x1 * q + x2, x3);
          w += m;
          cond[x1] = m;
        }
        if (w <= 0.0) continue;
        for (double& v : cond) v /= w;
        b.b13 += w * mutual_information(cond, kx1[x2 * q + x3]);
      }
      for (int x1 = 0; x1 < q; ++x1) {
        double w = 0.0;
        Vec cond(q, 0.0);
        for (int x2 = 0; x2 < q; ++x2) {
          double m = pj(x1 * q + x2, x3);
          w += m;
          cond[x2] = m;
        }
        if (w <= 0.0) continue;
        for (double& v : cond) v /= w;
        b.b23 += w * mutual_information(cond, kx2[x1 * q + x3]);
      }
      Vec cond(q * q);
      for (int r = 0; r < q * q; ++r) cond[r] = pj(r, x3) / p3;
      b.b_sum += p3 * mutual_information(cond, kx12[x3]);
    }
  }

  // downlink bounds from the (V, X3) distribution
  void db_bounds(const Mat& pv, QuadBounds& b) const {
    b.b31 = b.b32 = 0.0;
    int nv = pv.rows;
    Mat kv(nv, q, 0.0);
    Vec p_v(nv, 0.0);
    for (int v = 0; v < nv; ++v)
      for (int x3 = 0; x3 < q; ++x3) p_v[v] += pv(v, x3);
    for (int v = 0; v < nv; ++v) {
      if (p_v[v] <= 0.0) {
        for (int u = 0; u < q; ++u) kv(v, u) = 1.0 / q;  // unreachable letter
        continue;
      }
      Vec cond(q);
      for (int x3 = 0; x3 < q; ++x3) cond[x3] = pv(v, x3) / p_v[v];
      b.b31 += p_v[v] * mutual_information(cond, w1);
      for (int x3 = 0; x3 < q; ++x3) {
        if (cond[x3] <= 0.0) continue;
        for (int u = 0; u < q; ++u) kv(v, u) += cond[x3] * c12[((u - x3) % q + q) % q];
      }
    }
    b.b32 = mutual_information(p_v, kv);
  }
};

}  // namespace

Kernel MadbChannel::kernel_x1(int x2, int x3) const {
  Mat m(q, ny3);
  for (int x1 = 0; x1 < q; ++x1) m.set_row(x1, p_y3.row(row_index(x1, x2, x3)));
  return Kernel(std::move(m));
}

Kernel MadbChannel::kernel_x2(int x1, int x3) const {
  Mat m(q, ny3);
  for (int x2 = 0; x2 < q; ++x2) m.set_row(x2, p_y3.row(row_index(x1, x2, x3)));
  return Kernel(std::move(m));
}

Kernel MadbChannel::kernel_x12(int x3) const {
  Mat m(q * q, ny3);
  for (int x1 = 0; x1 < q; ++x1)
    for (int x2 = 0; x2 < q; ++x2)
      m.set_row(x1 * q + x2, p_y3.row(row_index(x1, x2, x3)));
  return Kernel(std::move(m));
}

MadbChannel validate_madb(const Mat& p_y3, int q, int ny3, Vec pz1, Vec pz2) {
  if (q < 2) throw TwcError(ErrorCode::ParameterOutOfRange, "q must be >= 2");
  if (p_y3.rows != q * q * q || p_y3.cols != ny3)
    throw TwcError(ErrorCode::DimensionMismatch, "uplink matrix shape");
  if ((int)pz1.size() != q || (int)pz2.size() != q)
    throw TwcError(ErrorCode::DimensionMismatch, "downlink noise pmfs must live on Z_q");
  Kernel check(p_y3);  // validates stochasticity
  Dist d1(pz1), d2(pz2);
  MadbChannel ch;
  ch.q = q;
  ch.ny3 = ny3;
  ch.p_y3 = p_y3;
  ch.pz1 = std::move(pz1);
  ch.pz2 = std::move(pz2);
  return ch;
}

MadbInput uniform_madb_input(const MadbChannel& ch, int nv) {
  MadbInput in;
  in.product = true;
  in.nv = nv;
  in.p_x1.assign(ch.q, 1.0 / ch.q);
  in.p_x2.assign(ch.q, 1.0 / ch.q);
  in.p_vx3 = Mat(nv, ch.q, 1.0 / double(nv * ch.q));
  return in;
}

QuadBounds rate_quadruple_bounds(const MadbInput& input, const MadbChannel& ch) {
  int q = ch.q;
  MadbKernels kern(ch);
  QuadBounds b;
  if (input.product) {
    if ((int)input.p_x1.size() != q || (int)input.p_x2.size() != q)
      throw TwcError(ErrorCode::DimensionMismatch, "product factors vs q");
    if (input.p_vx3.cols != q)
      throw TwcError(ErrorCode::DimensionMismatch, "p_vx3 columns vs q");
    Dist d1(input.p_x1), d2(input.p_x2);
    Vec p3(q, 0.0);
    for (int v = 0; v < input.p_vx3.rows; ++v)
      for (int x3 = 0; x3 < q; ++x3) p3[x3] += input.p_vx3(v, x3);
    Mat pj(q * q, q);
    for (int x1 = 0; x1 < q; ++x1)
      for (int x2 = 0; x2 < q; ++x2)
        for (int x3 = 0; x3 < q; ++x3)
          pj(x1 * q + x2, x3) = input.p_x1[x1] * input.p_x2[x2] * p3[x3];
    kern.ma_bounds(pj, b);
    kern.db_bounds(input.p_vx3, b);
    return b;
  }
  int nv = input.nv;
  if (nv < 1 || (int)input.p_joint.size() != q * q * q * nv)
    throw TwcError(ErrorCode::DimensionMismatch, "joint input size vs q^3 * nv");
  Mat pj(q * q, q, 0.0);
  Mat pv(nv, q, 0.0);
  for (int x1 = 0; x1 < q; ++x1)
    for (int x2 = 0; x2 < q; ++x2)
      for (int x3 = 0; x3 < q; ++x3)
        for (int v = 0; v < nv; ++v) {
          double m = input.p_joint[size_t(((x1 * q + x2) * q + x3)) * nv + v];
          pj(x1 * q + x2, x3) += m;
          pv(v, x3) += m;
        }
  kern.ma_bounds(pj, b);
  kern.db_bounds(pv, b);
  return b;
}

double weighted_polytope_value(const QuadBounds& b, const std::array<double, 4>& w) {
  for (double x : w)
    if (x < 0.0) throw TwcError(ErrorCode::ParameterOutOfRange, "negative weight");
  double hi_w = w[0], lo_w = w[1], hi_b = b.b13, lo_b = b.b23;
  if (w[1] > w[0]) {
    std::swap(hi_w, lo_w);
    std::swap(hi_b, lo_b);
  }
  double r_hi = std::max(0.0, std::min(hi_b, b.b_sum));
  double r_lo = std::max(0.0, std::min(lo_b, b.b_sum - r_hi));
  return hi_w * r_hi + lo_w * r_lo + w[2] * std::max(0.0, b.b31) +
         w[3] * std::max(0.0, b.b32);
}

MadbSupport madb_support(const MadbChannel& ch, const std::array<double, 4>& weights,
                         BoundMode mode, const MadbOptions& opts) {
  int q = ch.q;
  if (q > 4)
    throw TwcError(ErrorCode::UnsupportedScale,
                   "support optimization is limited to q <= 4; evaluate "
                   "rate_quadruple_bounds at fixed inputs instead");
  int nv = opts.nv > 0 ? opts.nv : q + 1;
  MadbKernels kern(ch);
  MadbSupport out;
  out.argmax.nv = nv;

  if (mode == BoundMode::Outer) {
    // one distribution over (x1, x2, x3, v)
    int dim = q * q * q * nv;
    auto f = [&](const Vec& flat) {
      QuadBounds b;
      Mat pj(q * q, q, 0.0);
      Mat pv(nv, q, 0.0);
      for (int r = 0; r < q * q; ++r)
        for (int x3 = 0; x3 < q; ++x3)
          for (int v = 0; v < nv; ++v) {
            double m = flat[size_t(r * q + x3) * nv + v];
            pj(r, x3) += m;
            pv(v, x3) += m;
          }
      kern.ma_bounds(pj, b);
      kern.db_bounds(pv, b);
      return weighted_polytope_value(b, weights);
    };
    double best = -1.0;
    Vec best_flat;
    std::uint64_t salt = opts.seed ^ 0x0a17ULL;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
      Vec start;
      if (r == 0) {
        start.assign(dim, 1.0 / dim);
      } else if (r == 1) {
        // product of uniforms with V = X3 embedded
        start.assign(dim, 1e-12);
        for (int rr = 0; rr < q * q; ++rr)
          for (int x3 = 0; x3 < q; ++x3)
            start[size_t(rr * q + x3) * nv + std::min(x3, nv - 1)] = 1.0;
        start = project_to_simplex(std::move(start));
      } else {
        SplitMix64 rng = substream(salt, (std::uint64_t)r);
        start = simplex_sample(rng, dim);
      }
      AscentOptions aopts;
      aopts.max_iter = 2500;
      AscentResult res = maximize_concave_on_simplex(
          f, [&](const Vec& x) { return numeric_simplex_grad(f, x); }, std::move(start),
          aopts);
      if (res.value > best) {
        best = res.value;
        best_flat = res.x;
      }
    }
    out.value = best;
    out.argmax.product = false;
    out.argmax.p_joint = best_flat;
    return out;
  }

  // Inner: block ascent over (p1, p2, p_vx3).
  auto value = [&](const Vec& p1, const Vec& p2, const Mat& pv) {
    QuadBounds b;
    Vec p3(q, 0.0);
    for (int v = 0; v < nv; ++v)
      for (int x3 = 0; x3 < q; ++x3) p3[x3] += pv(v, x3);
    Mat pj(q * q, q);
    for (int x1 = 0; x1 < q; ++x1)
      for (int x2 = 0; x2 < q; ++x2)
        for (int x3 = 0; x3 < q; ++x3)
          pj(x1 * q + x2, x3) = p1[x1] * p2[x2] * p3[x3];
    kern.ma_bounds(pj, b);
    kern.db_bounds(pv, b);
    return weighted_polytope_value(b, weights);
  };

  double best = -1.0;
  Vec bp1, bp2;
  Mat bpv;
  auto refine = [&](Vec p1, Vec p2, Mat pv) {
    double cur = value(p1, p2, pv);
    for (int round = 0; round < 25; ++round) {
      auto f1 = [&](const Vec& x) { return value(x, p2, pv); };
      p1 = maximize_concave_on_simplex(
               f1, [&](const Vec& x) { return numeric_simplex_grad(f1, x); }, p1, {})
               .x;
      auto f2 = [&](const Vec& x) { return value(p1, x, pv); };
      p2 = maximize_concave_on_simplex(
               f2, [&](const Vec& x) { return numeric_simplex_grad(f2, x); }, p2, {})
               .x;
      auto f3 = [&](const Vec& flat) {
        Mat m(nv, q);
        m.a = flat;
        return value(p1, p2, m);
      };
      AscentResult r3 = maximize_concave_on_simplex(
          f3, [&](const Vec& x) { return numeric_simplex_grad(f3, x); }, pv.a, {});
      pv.a = r3.x;
      if (r3.value - cur <= 1e-12 * (1.0 + std::abs(r3.value))) {
        cur = r3.value;
        break;
      }
      cur = r3.value;
    }
    if (cur > best) {
      best = cur;
      bp1 = p1;
      bp2 = p2;
      bpv = pv;
    }
  };

  Vec uni(q, 1.0 / q);
  Mat pv_uni(nv, q, 1.0 / double(nv * q));
  Mat pv_diag(nv, q, 1e-12);
  for (int x3 = 0; x3 < q; ++x3) pv_diag(std::min(x3, nv - 1), x3) = 1.0;
  pv_diag.a = project_to_simplex(pv_diag.a);
  // grid seeding over the product factors at the uniform/diagonal downlink
  int res = std::min(opts.grid, simplex_grid_resolution(q, 600));
  Vec gp1 = uni, gp2 = uni;
  double gbest = -1.0;
  for (const Vec& p1 : simplex_grid(q, res))
    for (const Vec& p2 : simplex_grid(q, res)) {
      double v = value(p1, p2, pv_diag);
      if (v > gbest) {
        gbest = v;
        gp1 = p1;
        gp2 = p2;
      }
    }
  refine(gp1, gp2, pv_diag);
  refine(uni, uni, pv_uni);
  refine(uni, uni, pv_diag);
  std::uint64_t salt = opts.seed ^ 0x133eULL;
  for (int r = 0; r < std::max(0, opts.restarts - 3); ++r) {
    SplitMix64 rng = substream(salt, (std::uint64_t)r);
    Mat pv(nv, q);
    pv.a = simplex_sample(rng, nv * q);
    refine(simplex_sample(rng, q), simplex_sample(rng, q), pv);
  }
  out.value = best;
  out.argmax.product = true;
  out.argmax.p_x1 = bp1;
  out.argmax.p_x2 = bp2;
  out.argmax.p_vx3 = bpv;
  return out;
}

namespace {

// slack of a product candidate against sampled per-state conditional targets
struct AchievabilityTrial {
  const MadbKernels& kern;
  int q;
  Vec t13, t23, tsum;  // targets per x3

  explicit AchievabilityTrial(const MadbKernels& k) : kern(k), q(k.q) {
    t13.assign(q, 0.0);
    t23.assign(q, 0.0);
    tsum.assign(q, 0.0);
  }

  void set_targets(const std::vector<Vec>& conds) {
    for (int x3 = 0; x3 < q; ++x3) {
      const Vec& c = conds[x3];
      t13[x3] = t23[x3] = 0.0;
      for (int x2 = 0; x2 < q; ++x2) {
        double w = 0.0;
        Vec cond(q, 0.0);
        for (int x1 = 0; x1 < q; ++x1) {
          w += c[x1 * q + x2];
          cond[x1] = c[x1 * q + x2];
        }
        if (w <= 0.0) continue;
        for (double& v : cond) v /= w;
        t13[x3] += w * mutual_information(cond, kern.kx1[x2 * q + x3]);
      }
      for (int x1 = 0; x1 < q; ++x1) {
        double w = 0.0;
        Vec cond(q, 0.0);
        for (int x2 = 0; x2 < q; ++x2) {
          w += c[x1 * q + x2];
          cond[x2] = c[x1 * q + x2];
        }
        if (w <= 0.0) continue;
        for (double& v : cond) v /= w;
        t23[x3] += w * mutual_information(cond, kern.kx2[x1 * q + x3]);
      }
      tsum[x3] = mutual_information(c, kern.kx12[x3]);
    }
  }

  double slack(const Vec& p1, const Vec& p2) const {
    Vec p12(q * q);
    for (int x1 = 0; x1 < q; ++x1)
      for (int x2 = 0; x2 < q; ++x2) p12[x1 * q + x2] = p1[x1] * p2[x2];
    double worst = 1e300;
    for (int x3 = 0; x3 < q; ++x3) {
      double i13 = 0.0, i23 = 0.0;
      for (int x2 = 0; x2 < q; ++x2)
        if (p2[x2] > 0.0)
          i13 += p2[x2] * mutual_information(p1, kern.kx1[x2 * q + x3]);
      for (int x1 = 0; x1 < q; ++x1)
        if (p1[x1] > 0.0)
          i23 += p1[x1] * mutual_information(p2, kern.kx2[x1 * q + x3]);
      double isum = mutual_information(p12, kern.kx12[x3]);
      worst = std::min(worst, i13 - t13[x3]);
      worst = std::min(worst, i23 - t23[x3]);
      worst = std::min(worst, isum - tsum[x3]);
    }
    return worst;
  }

  // deterministic alternating maximization of the slack
  double maximize(Vec& bp1, Vec& bp2) const {
    Vec uni(q, 1.0 / q);
    double best = slack(bp1, bp2);
    double u = slack(uni, uni);
    if (u > best) {
      best = u;
      bp1 = uni;
      bp2 = uni;
    }
    int res = simplex_grid_resolution(q, 300);
    auto polish = [&](bool first) {
      const std::vector<Vec> grid = simplex_grid(q, res);
      for (const Vec& cand : grid) {
        double v = first ? slack(cand, bp2) : slack(bp1, cand);
        if (v > best) {
          best = v;
          (first ? bp1 : bp2) = cand;
        }
      }
      Vec x = first ? bp1 : bp2;
      for (int it = 0; it < 60; ++it) {
        auto f = [&](const Vec& p) { return first ? slack(p, bp2) : slack(bp1, p); };
        Vec g = numeric_simplex_grad(f, x);
        double norm = 1e-12;
        for (double v : g) norm += v * v;
        norm = std::sqrt(norm);
        double step = 0.2 / std::sqrt(double(it + 1));
        for (size_t i = 0; i < x.size(); ++i) x[i] += step * g[i] / norm;
        x = project_to_simplex(std::move(x));
        double v = f(x);
        if (v > best) {
          best = v;
          (first ? bp1 : bp2) = x;
        }
      }
    };
    for (int round = 0; round < 8 && best < 0.0; ++round) {
      polish(true);
      polish(false);
    }
    return best;
  }
};

}  // namespace

ConditionReport check_madb_product_achievability(const MadbChannel& ch,
                                                 const MadbOptions& opts) {
  const std::string id = "madb-product-achievability";
  int q = ch.q;
  MadbKernels kern(ch);
  std::uint64_t salt = opts.seed ^ 0xab1eULL;
  bool uniform_always = true;
  Vec uni(q, 1.0 / q);
  for (long trial = 0; trial < opts.trials; ++trial) {
    SplitMix64 rng = substream(salt, (std::uint64_t)trial);
    std::vector<Vec> conds;
    for (int x3 = 0; x3 < q; ++x3) conds.push_back(simplex_sample(rng, q * q));
    AchievabilityTrial t(kern);
    t.set_targets(conds);
    if (t.slack(uni, uni) >= -opts.tol) continue;  // fixed-candidate fast path
    uniform_always = false;
    // start from the average sampled marginals
    Vec m1(q, 0.0), m2(q, 0.0);
    for (int x3 = 0; x3 < q; ++x3)
      for (int x1 = 0; x1 < q; ++x1)
        for (int x2 = 0; x2 < q; ++x2) {
          m1[x1] += conds[x3][x1 * q + x2] / q;
          m2[x2] += conds[x3][x1 * q + x2] / q;
        }
    Vec bp1 = m1, bp2 = m2;
    double best = t.maximize(bp1, bp2);
    if (best < -opts.tol) {
      json cx;
      cx["conditionals"] = conds;
      cx["best_p1"] = bp1;
      cx["best_p2"] = bp2;
      cx["best_slack"] = best;
      cx["trial"] = trial;
      ConditionReport r = make_fails(id, cx, /*exact=*/false);
      r.trials = trial + 1;
      r.seed = opts.seed;
      r.note = "no dominating product input found by alternating search";
      return r;
    }
  }
  ConditionReport r = make_not_falsified(id, opts.trials, opts.seed);
  if (uniform_always) {
    r.witness = json{{"candidate", "uniform-product"}};
    r.note = "the fixed uniform product input dominated every sampled conditional";
  }
  return r;
}

ConditionReport check_madb_common_maximizer(const MadbChannel& ch,
                                            const MadbOptions& opts) {
  const std::string id = "madb-common-maximizer";
  int q = ch.q;
  CheckOptions copts;
  copts.trials = opts.trials;
  copts.seed = opts.seed;
  copts.tol = opts.tol;
  copts.mat_tol = opts.mat_tol;

  // (i) common maximizer over all (x2, x3) slices + value invariance over x2
  std::vector<Kernel> k1_slices;
  for (int x2 = 0; x2 < q; ++x2)
    for (int x3 = 0; x3 < q; ++x3) k1_slices.push_back(ch.kernel_x1(x2, x3));
  ConditionReport cm = check_common_maximizer_kernels(k1_slices, copts, id);
  if (cm.fails()) {
    json cx;
    cx["condition"] = "i";
    cx["kind"] = "common-maximizer";
    cx["detail"] = cm.counterexample;
    return make_fails(id, cx);
  }
  Vec p_star = cm.witness.at("p_star").get<Vec>();
  for (int x3 = 0; x3 < q; ++x3) {
    double v0 = mutual_information(p_star, ch.kernel_x1(0, x3).k);
    for (int x2 = 1; x2 < q; ++x2) {
      double v = mutual_information(p_star, ch.kernel_x1(x2, x3).k);
      if (std::abs(v - v0) > opts.tol) {
        json cx;
        cx["condition"] = "i";
        cx["kind"] = "value-invariance";
        cx["x3"] = x3;
        cx["x2"] = x2;
        cx["value_0"] = v0;
        cx["value"] = v;
        return make_fails(id, cx);
      }
    }
  }

  // (ii) invariance of I(P_{X2}, .) over (x1, x3): structural, else randomized
  std::vector<Kernel> k2_slices;
  for (int x1 = 0; x1 < q; ++x1)
    for (int x3 = 0; x3 < q; ++x3) k2_slices.push_back(ch.kernel_x2(x1, x3));
  bool ii_structural = check_column_permutation_family(k2_slices, opts.mat_tol).holds();
  std::uint64_t salt = opts.seed ^ 0xe2a1ULL;
  if (!ii_structural) {
    for (long trial = 0; trial < opts.trials; ++trial) {
      SplitMix64 rng = substream(salt, (std::uint64_t)trial);
      Vec p2 = simplex_sample(rng, q);
      double lo = 1e300, hi = -1e300;
      for (const Kernel& k : k2_slices) {
        double v = mutual_information(p2, k.k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > opts.tol) {
        json cx;
        cx["condition"] = "ii";
        cx["p2"] = p2;
        cx["spread"] = hi - lo;
        cx["trial"] = trial;
        ConditionReport r = make_fails(id, cx, /*exact=*/false);
        r.trials = trial + 1;
        r.seed = opts.seed;
        return r;
      }
    }
  }

  // (iii) invariance of I(P_{X1,X2}, .) over x3, plus dominance of P* x P_X2
  std::vector<Kernel> k12_slices;
  for (int x3 = 0; x3 < q; ++x3) k12_slices.push_back(ch.kernel_x12(x3));
  bool iii_structural = check_column_permutation_family(k12_slices, opts.mat_tol).holds();
  std::uint64_t salt3 = opts.seed ^ 0xe2a3ULL;
  for (long trial = 0; trial < opts.trials; ++trial) {
    SplitMix64 rng = substream(salt3, (std::uint64_t)trial);
    Vec p12 = simplex_sample(rng, q * q);
    if (!iii_structural) {
      double lo = 1e300, hi = -1e300;
      for (const Kernel& k : k12_slices) {
        double v = mutual_information(p12, k.k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > opts.tol) {
        json cx;
        cx["condition"] = "iii";
        cx["kind"] = "state-invariance";
        cx["p12"] = p12;
        cx["spread"] = hi - lo;
        cx["trial"] = trial;
        ConditionReport r = make_fails(id, cx, /*exact=*/false);
        r.trials = trial + 1;
        r.seed = opts.seed;
        return r;
      }
    }
    // dominance of P* x P_{X2} per state
    Vec p2m(q, 0.0);
    for (int x1 = 0; x1 < q; ++x1)
      for (int x2 = 0; x2 < q; ++x2) p2m[x2] += p12[x1 * q + x2];
    Vec prod(q * q);
    for (int x1 = 0; x1 < q; ++x1)
      for (int x2 = 0; x2 < q; ++x2) prod[x1 * q + x2] = p_star[x1] * p2m[x2];
    for (int x3 = 0; x3 < q; ++x3) {
      double lhs = mutual_information(p12, k12_slices[x3].k);
      double rhs = mutual_information(prod, k12_slices[x3].k);
      if (lhs > rhs + opts.tol) {
        json cx;
        cx["condition"] = "iii";
        cx["kind"] = "dominance";
        cx["p12"] = p12;
        cx["x3"] = x3;
        cx["lhs"] = lhs;
        cx["rhs"] = rhs;
        cx["trial"] = trial;
        ConditionReport r = make_fails(id, cx, /*exact=*/false);
        r.trials = trial + 1;
        r.seed = opts.seed;
        return r;
      }
    }
  }

  json w;
  w["p_star"] = p_star;
  w["ii_structural"] = ii_structural;
  w["iii_structural"] = iii_structural;
  ConditionReport r = make_holds(id, w, /*exact=*/false);
  r.trials = opts.trials;
  r.seed = opts.seed;
  r.note = std::string("condition (i) exact") +
           (ii_structural ? ", (ii) structural" : ", (ii) sampled") +
           (iii_structural ? ", (iii) invariance structural" : ", (iii) sampled") +
           "; dominance survived sampling";
  return r;
}

ConditionReport check_madb_permutation_symmetry(const MadbChannel& ch,
                                                const MadbOptions& opts) {
  const std::string id = "madb-permutation-symmetry";
  int q = ch.q;
  if (factorial(ch.ny3) > opts.perm_budget)
    throw TwcError(ErrorCode::SearchBudgetExceeded,
                   std::to_string(factorial(ch.ny3)) + " output permutations exceed budget");
  auto violation = [&](int side, int a, int b, const std::vector<int>& pi, double cap) {
    double worst = 0.0;
    for (int x1 = 0; x1 < q; ++x1)
      for (int x2 = 0; x2 < q; ++x2)
        for (int x3 = 0; x3 < q; ++x3) {
          int tx1 = side == 1 ? transposed(x1, a, b) : x1;
          int tx2 = side == 2 ? transposed(x2, a, b) : x2;
          int r = ch.row_index(x1, x2, x3), tr = ch.row_index(tx1, tx2, x3);
          for (int y = 0; y < ch.ny3; ++y) {
            double d = std::abs(ch.p_y3(r, y) - ch.p_y3(tr, pi[y]));
            if (d > worst) {
              worst = d;
              if (worst > cap) return worst;
            }
          }
        }
    return worst;
  };
  json w;
  for (int side = 1; side <= 2; ++side) {
    json pairs = json::array();
    for (int a = 0; a < q; ++a)
      for (int b = a + 1; b < q; ++b) {
        std::vector<int> pi(ch.ny3);
        std::iota(pi.begin(), pi.end(), 0);
        bool found = false;
        double min_v = 1e300;
        do {
          double v = violation(side, a, b, pi, min_v);
          if (v <= opts.mat_tol) {
            found = true;
            break;
          }
          min_v = std::min(min_v, v);
        } while (std::next_permutation(pi.begin(), pi.end()));
        if (!found) {
          json cx;
          cx["side"] = side;
          cx["pair"] = {a, b};
          cx["min_max_violation"] = min_v;
          return make_fails(id, cx);
        }
        json e;
        e["a"] = a;
        e["b"] = b;
        e["pi_y3"] = pi;
        pairs.push_back(e);
      }
    w[side == 1 ? "x1_pairs" : "x2_pairs"] = pairs;
  }
  return make_holds(id, w);
}

bool verify_madb_report(const MadbChannel& ch, const ConditionReport& report,
                        const MadbOptions& opts) {
  const std::string& id = report.condition_id;
  int q = ch.q;
  if (id == "madb-permutation-symmetry") {
    if (report.holds()) {
      for (int side = 1; side <= 2; ++side) {
        const auto& pairs = report.witness.at(side == 1 ? "x1_pairs" : "x2_pairs");
        if ((int)pairs.size() != q * (q - 1) / 2) return false;
        for (const auto& e : pairs) {
          int a = e.at("a"), b = e.at("b");
          std::vector<int> pi = e.at("pi_y3").get<std::vector<int>>();
          for (int x1 = 0; x1 < q; ++x1)
            for (int x2 = 0; x2 < q; ++x2)
              for (int x3 = 0; x3 < q; ++x3) {
                int tx1 = side == 1 ? transposed(x1, a, b) : x1;
                int tx2 = side == 2 ? transposed(x2, a, b) : x2;
                for (int y = 0; y < ch.ny3; ++y)
                  if (std::abs(ch.p_y3(ch.row_index(x1, x2, x3), y) -
                               ch.p_y3(ch.row_index(tx1, tx2, x3), pi[y])) > opts.mat_tol)
                    return false;
              }
        }
      }
      return true;
    }
    if (report.fails()) return check_madb_permutation_symmetry(ch, opts).fails();
    return true;
  }
  if (id == "madb-common-maximizer") {
    if (report.holds()) {
      Vec p_star = report.witness.at("p_star").get<Vec>();
      BAOptions ba;
      ba.tol = std::min(1e-10, opts.tol / 10.0);
      for (int x2 = 0; x2 < q; ++x2)
        for (int x3 = 0; x3 < q; ++x3) {
          Kernel k = ch.kernel_x1(x2, x3);
          if (blahut_arimoto(k, ba).capacity - mutual_information(p_star, k.k) > opts.tol)
            return false;
        }
      return true;
    }
    if (report.fails()) {
      const auto& cx = report.counterexample;
      std::string kind = cx.value("kind", std::string());
      if (kind == "dominance") {
        Vec p12 = cx.at("p12").get<Vec>();
        int x3 = cx.at("x3");
        double lhs = cx.at("lhs"), rhs = cx.at("rhs");
        double lhs2 = mutual_information(p12, ch.kernel_x12(x3).k);
        return std::abs(lhs2 - lhs) < 1e-9 && lhs > rhs + opts.tol;
      }
      if (kind == "state-invariance") {
        Vec p12 = cx.at("p12").get<Vec>();
        double lo = 1e300, hi = -1e300;
        for (int x3 = 0; x3 < q; ++x3) {
          double v = mutual_information(p12, ch.kernel_x12(x3).k);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        return hi - lo > opts.tol;
      }
      return check_madb_common_maximizer(ch, opts).fails();
    }
    return true;
  }
  if (id == "madb-product-achievability") {
    if (report.fails()) {
      MadbKernels kern(ch);
      AchievabilityTrial t(kern);
      std::vector<Vec> conds;
      for (const auto& c : report.counterexample.at("conditionals"))
        conds.push_back(c.get<Vec>());
      t.set_targets(conds);
      Vec bp1 = report.counterexample.at("best_p1").get<Vec>();
      Vec bp2 = report.counterexample.at("best_p2").get<Vec>();
      double claimed = report.counterexample.at("best_slack");
      return std::abs(t.slack(bp1, bp2) - claimed) < 1e-9 && claimed < -opts.tol;
    }
    return true;
  }
  return true;
}

MadbChannel gen_madb_additive(int q, Vec pz1, Vec pz2, Vec pz3) {
  if (q < 2) throw TwcError(ErrorCode::ParameterOutOfRange, "q must be >= 2");
  if ((int)pz3.size() != q)
    throw TwcError(ErrorCode::DimensionMismatch, "pz3 must live on Z_q");
  Dist check(pz3);
  Mat m(q * q * q, q);
  for (int x1 = 0; x1 < q; ++x1)
    for (int x2 = 0; x2 < q; ++x2)
      for (int x3 = 0; x3 < q; ++x3) {
        int r = (x1 * q + x2) * q + x3;
        int s = (x1 + x2 + x3) % q;
        for (int y = 0; y < q; ++y) m(r, y) = pz3[((y - s) % q + q) % q];
      }
  return validate_madb(m, q, q, std::move(pz1), std::move(pz2));
}

MadbChannel gen_madb_example10(double eps, Vec pz1, Vec pz2) {
  if (eps < 0.0 || eps > 1.0)
    throw TwcError(ErrorCode::ParameterOutOfRange, "eps must lie in [0, 1]");
  Mat m(8, 3);
  auto row = [&](int x1, int x2, int x3, Vec v) { m.set_row((x1 * 2 + x2) * 2 + x3, v); };
  row(0, 0, 0, {1.0 - eps, 0.0, eps});
  row(1, 0, 0, {1.0 - eps, 0.0, eps});
  row(0, 1, 0, {0.0, 1.0 - eps, eps});
  row(1, 1, 0, {0.0, 1.0 - eps, eps});
  row(0, 0, 1, {0.0, eps, 1.0 - eps});
  row(1, 0, 1, {0.0, eps, 1.0 - eps});
  row(0, 1, 1, {1.0 - eps, eps, 0.0});
  row(1, 1, 1, {1.0 - eps, eps, 0.0});
  return validate_madb(m, 2, 3, std::move(pz1), std::move(pz2));
}

MadbChannel gen_madb_erasure(double eps, Vec pz1, Vec pz2) {
  if (eps < 0.0 || eps > 1.0)
    throw TwcError(ErrorCode::ParameterOutOfRange, "eps must lie in [0, 1]");
  Mat m(8, 3);  // outputs 0, 1, E
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int x3 = 0; x3 < 2; ++x3) {
        int r = (x1 * 2 + x2) * 2 + x3;
        int s = x1 ^ x2 ^ x3;
        m(r, s) = 1.0 - eps;
        m(r, 2) = eps;
      }
  return validate_madb(m, 2, 3, std::move(pz1), std::move(pz2));
}

}  // namespace twc
