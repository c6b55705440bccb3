#include "twc/prob.hpp"

#include <algorithm>
#include <cstdio>

namespace twc {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::AlphabetTooLarge: return "AlphabetTooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::StructuralViolation: return "StructuralViolation";
    case ErrorCode::UnsupportedLimit: return "UnsupportedLimit";
    case ErrorCode::UnsupportedScale: return "UnsupportedScale";
    case ErrorCode::InconsistentImplication: return "InconsistentImplication";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

static void check_prob_vector(const Vec& v, double tol, const char* what) {
  double s = 0.0;
  for (double x : v) {
    if (x < -tol)
      throw TwcError(ErrorCode::NegativeEntry,
                     std::string(what) + ": negative entry " + std::to_string(x));
    s += x;
  }
  if (std::abs(s - 1.0) > tol)
    throw TwcError(ErrorCode::RowSumViolation,
                   std::string(what) + ": entries sum to " + std::to_string(s));
}

Dist::Dist(Vec v, double tol) : p(std::move(v)) {
  check_prob_vector(p, tol, "Dist");
}

Dist Dist::uniform(int n) {
  return Dist(Vec(n, 1.0 / n));
}

Dist Dist::point_mass(int n, int i) {
  if (i < 0 || i >= n) throw TwcError(ErrorCode::IndexOutOfRange, "point_mass index");
  Vec v(n, 0.0);
  v[i] = 1.0;
  return Dist(std::move(v));
}

JointDist::JointDist(Mat m, double tol) : p(std::move(m)) {
  check_prob_vector(p.a, tol, "JointDist");
}

JointDist JointDist::product(const Dist& p1, const Dist& p2) {
  Mat m(p1.size(), p2.size());
  for (int i = 0; i < p1.size(); ++i)
    for (int j = 0; j < p2.size(); ++j) m(i, j) = p1[i] * p2[j];
  return JointDist(std::move(m));
}

Vec JointDist::marginal_x1() const {
  Vec v(p.rows, 0.0);
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) v[i] += p(i, j);
  return v;
}

Vec JointDist::marginal_x2() const {
  Vec v(p.cols, 0.0);
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) v[j] += p(i, j);
  return v;
}

Vec JointDist::conditional_x1(int x2) const {
  Vec m = marginal_x2();
  if (m[x2] <= 0.0)
    throw TwcError(ErrorCode::OutOfRange, "conditional on zero-probability state");
  Vec v(p.rows);
  for (int i = 0; i < p.rows; ++i) v[i] = p(i, x2) / m[x2];
  return v;
}

Vec JointDist::conditional_x2(int x1) const {
  Vec m = marginal_x1();
  if (m[x1] <= 0.0)
    throw TwcError(ErrorCode::OutOfRange, "conditional on zero-probability state");
  Vec v(p.cols);
  for (int j = 0; j < p.cols; ++j) v[j] = p(x1, j) / m[x1];
  return v;
}

Kernel::Kernel(Mat m, double tol) : k(std::move(m)) {
  for (int r = 0; r < k.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < k.cols; ++c) {
      if (k(r, c) < -tol)
        throw TwcError(ErrorCode::NegativeEntry,
                       "Kernel row " + std::to_string(r) + ": negative entry");
      s += k(r, c);
    }
    if (std::abs(s - 1.0) > tol)
      throw TwcError(ErrorCode::RowSumViolation,
                     "Kernel row " + std::to_string(r) + " sums to " + std::to_string(s));
  }
}

TwoWayChannel validate_channel(const Mat& raw, int nx1, int nx2, int ny1, int ny2) {
  if (nx1 < 1 || nx2 < 1 || ny1 < 1 || ny2 < 1)
    throw TwcError(ErrorCode::ParameterOutOfRange, "alphabet sizes must be >= 1");
  if (raw.rows != nx1 * nx2 || raw.cols != ny1 * ny2)
    throw TwcError(ErrorCode::DimensionMismatch,
                   "matrix is " + std::to_string(raw.rows) + "x" + std::to_string(raw.cols) +
                       ", expected " + std::to_string(nx1 * nx2) + "x" +
                       std::to_string(ny1 * ny2));
  for (int r = 0; r < raw.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < raw.cols; ++c) {
      if (raw(r, c) < -kProbTol)
        throw TwcError(ErrorCode::NegativeEntry,
                       "row " + std::to_string(r) + " col " + std::to_string(c) +
                           ": negative entry " + std::to_string(raw(r, c)));
      s += raw(r, c);
    }
    if (std::abs(s - 1.0) > kProbTol)
      throw TwcError(ErrorCode::RowSumViolation,
                     "row " + std::to_string(r) + " sums to " + std::to_string(s));
  }
  TwoWayChannel ch;
  ch.nx1 = nx1;
  ch.nx2 = nx2;
  ch.ny1 = ny1;
  ch.ny2 = ny2;
  ch.p = raw;
  return ch;
}

Kernel marginal_kernel(const TwoWayChannel& ch, Direction dir, int fixed_symbol) {
  if (dir == Direction::To2) {
    if (fixed_symbol < 0 || fixed_symbol >= ch.nx2)
      throw TwcError(ErrorCode::IndexOutOfRange, "x2 out of range");
    Mat k(ch.nx1, ch.ny2);
    for (int x1 = 0; x1 < ch.nx1; ++x1)
      for (int y2 = 0; y2 < ch.ny2; ++y2) {
        double s = 0.0;
        for (int y1 = 0; y1 < ch.ny1; ++y1) s += ch.prob(x1, fixed_symbol, y1, y2);
        k(x1, y2) = s;
      }
    return Kernel(std::move(k));
  }
  if (fixed_symbol < 0 || fixed_symbol >= ch.nx1)
    throw TwcError(ErrorCode::IndexOutOfRange, "x1 out of range");
  Mat k(ch.nx2, ch.ny1);
  for (int x2 = 0; x2 < ch.nx2; ++x2)
    for (int y1 = 0; y1 < ch.ny1; ++y1) {
      double s = 0.0;
      for (int y2 = 0; y2 < ch.ny2; ++y2) s += ch.prob(fixed_symbol, x2, y1, y2);
      k(x2, y1) = s;
    }
  return Kernel(std::move(k));
}

std::vector<Kernel> state_kernels(const TwoWayChannel& ch, Direction dir) {
  int n = dir == Direction::To2 ? ch.nx2 : ch.nx1;
  std::vector<Kernel> out;
  out.reserve(n);
  for (int s = 0; s < n; ++s) out.push_back(marginal_kernel(ch, dir, s));
  return out;
}

Mat marginal_matrix(const TwoWayChannel& ch, int j) {
  int ny = j == 1 ? ch.ny1 : ch.ny2;
  Mat m(ch.nx1 * ch.nx2, ny);
  for (int x1 = 0; x1 < ch.nx1; ++x1)
    for (int x2 = 0; x2 < ch.nx2; ++x2)
      for (int y = 0; y < ny; ++y) {
        double s = 0.0;
        if (j == 1)
          for (int y2 = 0; y2 < ch.ny2; ++y2) s += ch.prob(x1, x2, y, y2);
        else
          for (int y1 = 0; y1 < ch.ny1; ++y1) s += ch.prob(x1, x2, y1, y);
        m(ch.row_index(x1, x2), y) = s;
      }
  return m;
}

TwoWayChannel joint_from_marginals(const Mat& m1, const Mat& m2, int nx1, int nx2) {
  if (m1.rows != nx1 * nx2 || m2.rows != nx1 * nx2)
    throw TwcError(ErrorCode::DimensionMismatch, "marginal row counts");
  int ny1 = m1.cols, ny2 = m2.cols;
  Mat joint(nx1 * nx2, ny1 * ny2);
  for (int r = 0; r < joint.rows; ++r)
    for (int y1 = 0; y1 < ny1; ++y1)
      for (int y2 = 0; y2 < ny2; ++y2) joint(r, y1 * ny2 + y2) = m1(r, y1) * m2(r, y2);
  return validate_channel(joint, nx1, nx2, ny1, ny2);
}

double entropy(const Vec& v) {
  double h = 0.0;
  for (double x : v)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0)
    throw TwcError(ErrorCode::OutOfRange, "binary_entropy: p = " + std::to_string(p));
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double q_ary_entropy(double x, int q) {
  if (q < 2) throw TwcError(ErrorCode::OutOfRange, "q_ary_entropy: q < 2");
  if (x < 0.0 || x > 1.0)
    throw TwcError(ErrorCode::OutOfRange, "q_ary_entropy: x = " + std::to_string(x));
  double h = x * std::log2(double(q - 1));
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double kl_divergence(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) throw TwcError(ErrorCode::DimensionMismatch, "kl_divergence");
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

Vec output_dist(const Vec& p, const Mat& k) {
  if ((int)p.size() != k.rows) throw TwcError(ErrorCode::DimensionMismatch, "output_dist");
  Vec q(k.cols, 0.0);
  for (int x = 0; x < k.rows; ++x) {
    if (p[x] == 0.0) continue;
    for (int y = 0; y < k.cols; ++y) q[y] += p[x] * k(x, y);
  }
  return q;
}

double mutual_information(const Vec& p, const Mat& k) {
  if ((int)p.size() != k.rows)
    throw TwcError(ErrorCode::DimensionMismatch, "mutual_information");
  Vec q = output_dist(p, k);
  double s = 0.0;
  for (int x = 0; x < k.rows; ++x) {
    if (p[x] <= 0.0) continue;
    for (int y = 0; y < k.cols; ++y) {
      double kv = k(x, y);
      if (kv > 0.0) s += p[x] * kv * std::log2(kv / q[y]);
    }
  }
  return s;
}

double conditional_mutual_information(const JointDist& joint, const TwoWayChannel& ch,
                                      Direction dir) {
  if (joint.p.rows != ch.nx1 || joint.p.cols != ch.nx2)
    throw TwcError(ErrorCode::DimensionMismatch, "conditional_mutual_information");
  double total = 0.0;
  if (dir == Direction::To2) {
    Vec px2 = joint.marginal_x2();
    for (int x2 = 0; x2 < ch.nx2; ++x2) {
      if (px2[x2] <= 0.0) continue;
      Kernel k = marginal_kernel(ch, Direction::To2, x2);
      total += px2[x2] * mutual_information(joint.conditional_x1(x2), k.k);
    }
  } else {
    Vec px1 = joint.marginal_x1();
    for (int x1 = 0; x1 < ch.nx1; ++x1) {
      if (px1[x1] <= 0.0) continue;
      Kernel k = marginal_kernel(ch, Direction::To1, x1);
      total += px1[x1] * mutual_information(joint.conditional_x2(x1), k.k);
    }
  }
  return total;
}

double total_variation(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) throw TwcError(ErrorCode::DimensionMismatch, "total_variation");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace twc
