#pragma once
// Probability primitives for finite-alphabet two-way channels: distributions,
// row-stochastic kernels, entropies and mutual-information functionals.
// All information quantities are in bits (log base 2), with 0*log 0 := 0.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace twc {

using Vec = std::vector<double>;

enum class ErrorCode {
  NegativeEntry,
  RowSumViolation,
  DimensionMismatch,
  IndexOutOfRange,
  OutOfRange,
  NonConvergence,
  AlphabetTooLarge,
  ShapeMismatch,
  SearchBudgetExceeded,
  UnknownFixture,
  NotInjective,
  ParameterOutOfRange,
  NotIrreducible,
  StructuralViolation,
  UnsupportedLimit,
  UnsupportedScale,
  InconsistentImplication,
  SchemaError,
};

class TwcError : public std::runtime_error {
 public:
  TwcError(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode c);

// Dense row-major matrix. Small alphabets only; no linear algebra library needed.
struct Mat {
  int rows = 0, cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(size_t(r) * c, fill) {}

  double& operator()(int r, int c) { return a[size_t(r) * cols + c]; }
  double operator()(int r, int c) const { return a[size_t(r) * cols + c]; }

  Vec row(int r) const {
    return Vec(a.begin() + size_t(r) * cols, a.begin() + size_t(r + 1) * cols);
  }
  void set_row(int r, const Vec& v) {
    for (int c = 0; c < cols; ++c) (*this)(r, c) = v[c];
  }
  Vec col(int c) const {
    Vec v(rows);
    for (int r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
  }
};

inline constexpr double kProbTol = 1e-9;  // probability-sum / matrix-entry tolerance

// Probability distribution on a finite alphabet. Entries >= 0, sum 1 within 1e-9.
struct Dist {
  Vec p;

  Dist() = default;
  explicit Dist(Vec v, double tol = kProbTol);
  static Dist uniform(int n);
  static Dist point_mass(int n, int i);

  int size() const { return (int)p.size(); }
  double operator[](int i) const { return p[i]; }
};

// Joint distribution on X1 x X2; p(x1, x2) indexed row = x1, col = x2.
struct JointDist {
  Mat p;

  JointDist() = default;
  explicit JointDist(Mat m, double tol = kProbTol);
  static JointDist product(const Dist& p1, const Dist& p2);

  Vec marginal_x1() const;
  Vec marginal_x2() const;
  // P_{X1|X2=x2}; undefined (throws) if P(x2) == 0.
  Vec conditional_x1(int x2) const;
  Vec conditional_x2(int x1) const;
};

// One-way channel: row-stochastic matrix, rows = input symbols, cols = outputs.
struct Kernel {
  Mat k;

  Kernel() = default;
  explicit Kernel(Mat m, double tol = kProbTol);

  int inputs() const { return k.rows; }
  int outputs() const { return k.cols; }
};

enum class Direction { To2, To1 };  // To2: user 1 -> user 2 (output Y2, state X2)

// Two-way channel P(y1,y2 | x1,x2). Rows indexed (x1,x2) with x1 major,
// columns indexed (y1,y2) with y1 major.
struct TwoWayChannel {
  int nx1 = 0, nx2 = 0, ny1 = 0, ny2 = 0;
  Mat p;

  int row_index(int x1, int x2) const { return x1 * nx2 + x2; }
  int col_index(int y1, int y2) const { return y1 * ny2 + y2; }
  double prob(int x1, int x2, int y1, int y2) const {
    return p(row_index(x1, x2), col_index(y1, y2));
  }
};

// Validates entries and row sums; normalization is never applied silently.
TwoWayChannel validate_channel(const Mat& raw, int nx1, int nx2, int ny1, int ny2);

// To2 with x2 fixed: [P_{Y2|X1,X2}(.|.,x2)], rows x1, cols y2 (sum over y1).
// To1 with x1 fixed: [P_{Y1|X1,X2}(.|x1,.)], rows x2, cols y1 (sum over y2).
Kernel marginal_kernel(const TwoWayChannel& ch, Direction dir, int fixed_symbol);

// All state-sliced kernels of one direction, indexed by the state symbol.
std::vector<Kernel> state_kernels(const TwoWayChannel& ch, Direction dir);

// Marginal matrix [P_{Yj|X1,X2}], rows (x1,x2) x1-major, cols yj.
Mat marginal_matrix(const TwoWayChannel& ch, int j);

// Builds the joint as the product of conditionally independent marginals,
// P(y1,y2|x1,x2) = P(y1|x1,x2) * P(y2|x1,x2). Rows of m1/m2 are (x1,x2) x1-major.
TwoWayChannel joint_from_marginals(const Mat& m1, const Mat& m2, int nx1, int nx2);

// Shannon entropy in bits of a (sub)probability vector; 0 log 0 := 0.
double entropy(const Vec& v);
// H_b(p) = -p log2 p - (1-p) log2(1-p); p in [0,1].
double binary_entropy(double p);
// H_q(x) = x log2(q-1) - x log2 x - (1-x) log2(1-x); x in [0,1], q >= 2.
double q_ary_entropy(double x, int q);
// KL divergence D(p||q) in bits; +infinity if p(i) > 0 with q(i) == 0.
double kl_divergence(const Vec& p, const Vec& q);

// Output distribution q(y) = sum_x p(x) K(x,y).
Vec output_dist(const Vec& p, const Mat& k);

// I(X;Y) as the explicit double sum over P_X(x) K(y|x) log K(y|x)/q(y).
double mutual_information(const Vec& p, const Mat& k);
inline double mutual_information(const Dist& p, const Kernel& k) {
  return mutual_information(p.p, k.k);
}

// I(X1;Y2|X2) (To2) or I(X2;Y1|X1) (To1) under a joint input distribution;
// states with zero probability contribute zero.
double conditional_mutual_information(const JointDist& joint, const TwoWayChannel& ch,
                                      Direction dir);

double total_variation(const Vec& p, const Vec& q);

}  // namespace twc
