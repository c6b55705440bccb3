#include "twc/blahut.hpp"

#include <algorithm>
#include <cmath>

namespace twc {

// D(K(.|x) || q) in bits for every input row.
static Vec row_divergences(const Mat& k, const Vec& q) {
  Vec d(k.rows, 0.0);
  for (int x = 0; x < k.rows; ++x) {
    double s = 0.0;
    for (int y = 0; y < k.cols; ++y) {
      double kv = k(x, y);
      if (kv > 0.0) s += kv * std::log2(kv / q[y]);
    }
    d[x] = s;
  }
  return d;
}

BAResult blahut_arimoto(const Kernel& kernel, const BAOptions& opts) {
  if (opts.tol <= 0.0) throw TwcError(ErrorCode::OutOfRange, "blahut_arimoto: tol <= 0");
  const Mat& k = kernel.k;
  int n = k.rows;
  Vec p(n, 1.0 / n);
  double gap = 0.0, info = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Vec q = output_dist(p, k);
    Vec d = row_divergences(k, q);
    info = 0.0;
    double dmax = -1.0;
    for (int x = 0; x < n; ++x) {
      info += p[x] * d[x];
      dmax = std::max(dmax, d[x]);
    }
    if (opts.trace) opts.trace->push_back(info);
    gap = dmax - info;
    if (gap <= opts.tol) {
      BAResult res;
      res.capacity = info;
      res.maximizer = Dist(p);
      res.iterations = it;
      res.gap = gap;
      return res;
    }
    // p <- p * 2^(eta (D - max D)), renormalized. eta = 1 is the classical
    // update and always improves; larger exponents are kept greedily while
    // they improve further, which restores fast convergence on channels where
    // the plain iteration crawls.
    auto relaxed = [&](double eta) {
      Vec c(n);
      double z = 0.0;
      for (int x = 0; x < n; ++x) {
        c[x] = p[x] * std::exp2(std::max(eta * (d[x] - dmax), -512.0));
        z += c[x];
      }
      for (int x = 0; x < n; ++x) c[x] /= z;
      return c;
    };
    Vec best = relaxed(1.0);
    double best_val = mutual_information(best, k);
    for (double eta = 2.0; eta <= 1024.0; eta *= 2.0) {
      Vec c = relaxed(eta);
      double v = mutual_information(c, k);
      if (v > best_val) {
        best_val = v;
        best = std::move(c);
      } else {
        break;
      }
    }
    p = std::move(best);
  }
  throw TwcError(ErrorCode::NonConvergence,
                 "blahut_arimoto: gap " + std::to_string(gap) + " after " +
                     std::to_string(opts.max_iter) + " iterations");
}

bool uniform_kkt_test(const Kernel& kernel, double tol) {
  const Mat& k = kernel.k;
  Vec u(k.rows, 1.0 / k.rows);
  Vec d = row_divergences(k, output_dist(u, k));
  double lo = d[0], hi = d[0];
  for (double x : d) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo <= tol;
}

}  // namespace twc
