#include "twc/memory.hpp"

#include <algorithm>
#include <cmath>

#include "twc/rng.hpp"

namespace twc {

namespace {

// strong connectivity of the positive-transition digraph
bool irreducible(const Mat& t) {
  int n = t.rows;
  auto reach = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        double w = transpose ? t(v, u) : t(u, v);
        if (w > 0.0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach(false) && reach(true);
}

// solve pi T = pi, sum pi = 1 by Gaussian elimination on (T^t - I) with the
// last equation replaced by the normalization
Vec stationary(const Mat& t) {
  int n = t.rows;
  std::vector<Vec> a(n, Vec(n + 1, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = t(j, i) - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (std::abs(a[col][col]) < 1e-14)
      throw TwcError(ErrorCode::NotIrreducible, "stationary distribution solve is singular");
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Vec pi(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    pi[i] = a[i][n] / a[i][i];
    if (pi[i] < 0.0 && pi[i] > -1e-12) pi[i] = 0.0;
    s += pi[i];
  }
  for (double& x : pi) x /= s;
  return pi;
}

}  // namespace

MarkovNoise MarkovNoise::make(const Mat& transition) {
  if (transition.rows != transition.cols)
    throw TwcError(ErrorCode::DimensionMismatch, "transition matrix must be square");
  Kernel check(transition);  // validates row stochasticity
  if (!irreducible(transition))
    throw TwcError(ErrorCode::NotIrreducible, "transition matrix is not irreducible");
  MarkovNoise m;
  m.T = transition;
  m.n = transition.rows;
  m.pi = stationary(transition);
  double resid = 0.0;
  Vec piT(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) piT[j] += m.pi[i] * m.T(i, j);
  for (int j = 0; j < m.n; ++j) resid = std::max(resid, std::abs(piT[j] - m.pi[j]));
  if (resid > 1e-10)
    throw TwcError(ErrorCode::NotIrreducible, "stationary residual " + std::to_string(resid));
  return m;
}

MarkovNoise MarkovNoise::iid(const Vec& marginal) {
  Dist d(marginal);
  Mat t((int)marginal.size(), (int)marginal.size());
  for (int r = 0; r < t.rows; ++r) t.set_row(r, marginal);
  return make(t);
}

double entropy_rate(const MarkovNoise& chain) {
  double h = 0.0;
  for (int s = 0; s < chain.n; ++s) h += chain.pi[s] * entropy(chain.T.row(s));
  return h;
}

JointMarkovNoise JointMarkovNoise::make(const Mat& transition, int n1, int n2) {
  if (transition.rows != n1 * n2)
    throw TwcError(ErrorCode::DimensionMismatch, "joint state count vs transition matrix");
  JointMarkovNoise j;
  j.chain = MarkovNoise::make(transition);
  j.n1 = n1;
  j.n2 = n2;
  return j;
}

RateRegion2D capacity_rect_invertible(const MemoryChannelSpec& spec) {
  int q1 = spec.nx2, q2 = spec.nx1;
  if (spec.ny1 != q1 || spec.nz1 != q1)
    throw TwcError(ErrorCode::StructuralViolation, "need |X2| = |Y1| = |Z1|");
  if (spec.ny2 != q2 || spec.nz2 != q2)
    throw TwcError(ErrorCode::StructuralViolation, "need |X1| = |Y2| = |Z2|");
  if (q1 < 2 || q2 < 2)
    throw TwcError(ErrorCode::StructuralViolation, "alphabet sizes must be >= 2");
  // F_j invertible in Z_j
  for (int x1 = 0; x1 < spec.nx1; ++x1)
    for (int x2 = 0; x2 < spec.nx2; ++x2) {
      std::vector<bool> seen1(spec.ny1, false), seen2(spec.ny2, false);
      for (int z = 0; z < spec.nz1; ++z) {
        int y = spec.f1_at(x1, x2, z);
        if (y < 0 || y >= spec.ny1 || seen1[y])
          throw TwcError(ErrorCode::StructuralViolation,
                         "F1 not invertible in Z1 at inputs (" + std::to_string(x1) + "," +
                             std::to_string(x2) + ")");
        seen1[y] = true;
      }
      for (int z = 0; z < spec.nz2; ++z) {
        int y = spec.f2_at(x1, x2, z);
        if (y < 0 || y >= spec.ny2 || seen2[y])
          throw TwcError(ErrorCode::StructuralViolation,
                         "F2 not invertible in Z2 at inputs (" + std::to_string(x1) + "," +
                             std::to_string(x2) + ")");
        seen2[y] = true;
      }
    }
  // F_j^{-1} one-to-one in the opposite input: for fixed (x_j, y_j) the noise
  // value recovered from the other user's input must be distinct.
  for (int x1 = 0; x1 < spec.nx1; ++x1)
    for (int y1 = 0; y1 < spec.ny1; ++y1) {
      std::vector<bool> seen(spec.nz1, false);
      for (int x2 = 0; x2 < spec.nx2; ++x2) {
        int z = -1;
        for (int c = 0; c < spec.nz1; ++c)
          if (spec.f1_at(x1, x2, c) == y1) z = c;
        if (z < 0 || seen[z])
          throw TwcError(ErrorCode::StructuralViolation,
                         "F1 inverse not one-to-one in X2");
        seen[z] = true;
      }
    }
  for (int x2 = 0; x2 < spec.nx2; ++x2)
    for (int y2 = 0; y2 < spec.ny2; ++y2) {
      std::vector<bool> seen(spec.nz2, false);
      for (int x1 = 0; x1 < spec.nx1; ++x1) {
        int z = -1;
        for (int c = 0; c < spec.nz2; ++c)
          if (spec.f2_at(x1, x2, c) == y2) z = c;
        if (z < 0 || seen[z])
          throw TwcError(ErrorCode::StructuralViolation,
                         "F2 inverse not one-to-one in X1");
        seen[z] = true;
      }
    }
  if (spec.noise1.n != q1 || spec.noise2.n != q2)
    throw TwcError(ErrorCode::StructuralViolation, "noise alphabets vs q1/q2");
  double r1 = std::max(0.0, std::log2(double(q2)) - entropy_rate(spec.noise2));
  double r2 = std::max(0.0, std::log2(double(q1)) - entropy_rate(spec.noise1));
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

namespace {

// Per-letter entropy limit of h̃(X^n, Z^n): log2 |T| when the alphabets match
// and h̃(., z) is a bijection in the input for each noise value (a uniform
// input then makes the intermediate sequence uniform regardless of the noise
// law's memory).
std::optional<double> matched_limit(const Mat& ht, int nz) {
  int nx = ht.rows, nt = 0;
  for (int r = 0; r < ht.rows; ++r)
    for (int c = 0; c < ht.cols; ++c) nt = std::max(nt, (int)ht(r, c) + 1);
  if (nx != nt || nz != nt) return std::nullopt;
  if (ht.cols != nz) return std::nullopt;
  for (int z = 0; z < nz; ++z) {
    std::vector<bool> seen(nt, false);
    for (int x = 0; x < nx; ++x) {
      int t = (int)ht(x, z);
      if (seen[t]) return std::nullopt;
      seen[t] = true;
    }
  }
  return std::log2(double(nt));
}

}  // namespace

RateRegion2D capacity_rect_isd(const IsdMemorySpec& spec) {
  // reuse the static injectivity validation from the memoryless builder
  IsdSpec probe = spec.isd;
  probe.pz1.assign(spec.isd.ht1.cols, 1.0 / spec.isd.ht1.cols);
  probe.pz2.assign(spec.isd.ht2.cols, 1.0 / spec.isd.ht2.cols);
  gen_isd(probe);
  if (spec.noise1.n != spec.isd.ht1.cols || spec.noise2.n != spec.isd.ht2.cols)
    throw TwcError(ErrorCode::DimensionMismatch, "noise chain alphabets vs h~ tables");

  std::optional<double> lim1 = spec.limit1, lim2 = spec.limit2;
  if (!lim1) lim1 = matched_limit(spec.isd.ht1, spec.noise1.n);
  if (!lim2) lim2 = matched_limit(spec.isd.ht2, spec.noise2.n);
  if (!lim1 || !lim2)
    throw TwcError(ErrorCode::UnsupportedLimit,
                   "per-letter entropy limit unavailable: alphabets are not "
                   "cardinality-matched bijective and no value was supplied");
  double r1 = std::max(0.0, *lim2 - entropy_rate(spec.noise2));
  double r2 = std::max(0.0, *lim1 - entropy_rate(spec.noise1));
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

RateRegion2D outer_rect_joint_noise(const JointMarkovNoise& joint, int q1, int q2) {
  if (q1 < 2 || q2 < 2) throw TwcError(ErrorCode::ParameterOutOfRange, "q1, q2 >= 2");
  const MarkovNoise& c = joint.chain;
  double h2 = 0.0, h1 = 0.0;  // H(Z2'|Z1,Z2), H(Z1'|Z1,Z2) at stationarity
  for (int s = 0; s < c.n; ++s) {
    Vec m2(joint.n2, 0.0), m1(joint.n1, 0.0);
    for (int t = 0; t < c.n; ++t) {
      m1[t / joint.n2] += c.T(s, t);
      m2[t % joint.n2] += c.T(s, t);
    }
    h2 += c.pi[s] * entropy(m2);
    h1 += c.pi[s] * entropy(m1);
  }
  double r1 = std::max(0.0, std::log2(double(q2)) - h2);
  double r2 = std::max(0.0, std::log2(double(q1)) - h1);
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

JointMarkovNoise lagged_noise_joint() {
  // state (z1, z2); next state (fresh uniform bit, current z1)
  Mat t(4, 4, 0.0);
  for (int z1 = 0; z1 < 2; ++z1)
    for (int z2 = 0; z2 < 2; ++z2)
      for (int nz1 = 0; nz1 < 2; ++nz1) t(z1 * 2 + z2, nz1 * 2 + z1) = 0.5;
  return JointMarkovNoise::make(t, 2, 2);
}

AdaptiveSimReport memsim_adaptive(long n, std::uint64_t seed) {
  if (n < 1) throw TwcError(ErrorCode::ParameterOutOfRange, "n must be >= 1");
  SplitMix64 rng = substream(seed, 0);
  AdaptiveSimReport rep;
  rep.n = n;
  int x1_prev = 0, y1_prev = 0;
  int z1_prev = 0;  // feeds Z2_i = Z1_{i-1}; Z2_1 = 0
  for (long i = 1; i <= n; ++i) {
    int m = (int)(rng.next() & 1u);       // message bit
    int z1 = (int)(rng.next() & 1u);      // fresh uniform noise
    int z2 = i == 1 ? 0 : z1_prev;
    int x1 = m ^ x1_prev ^ y1_prev;       // adaptive encoder
    int x2 = 0;
    int y1 = x1 ^ x2 ^ z1;
    int y2 = x1 ^ x2 ^ z2;
    if (y2 != m) ++rep.errors;            // receiver decodes y2 directly
    x1_prev = x1;
    y1_prev = y1;
    z1_prev = z1;
  }
  rep.rate = 1.0;
  // non-adaptive benchmark: log2 q2 - Hbar(Z2) with Z2 i.i.d. uniform
  rep.shannon_type_bound =
      std::max(0.0, 1.0 - entropy_rate(MarkovNoise::iid(Vec{0.5, 0.5})));
  return rep;
}

}  // namespace twc
