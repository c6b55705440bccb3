#include "twc/chanlib.hpp"

#include <cmath>

namespace twc {

namespace {

void check_noise_params(double alpha, double eps) {
  if (alpha < 0.0 || eps < 0.0 || alpha + eps > 1.0 + 1e-12)
    throw TwcError(ErrorCode::ParameterOutOfRange,
                   "need alpha, eps >= 0 and alpha + eps <= 1");
}

// noise pmf over {0..q-1, E}: P(0) = 1-eps-alpha, P(z) = alpha/(q-1), P(E) = eps
Vec qary_noise(int q, double alpha, double eps) {
  Vec z(q + 1, 0.0);
  z[0] = 1.0 - eps - alpha;
  for (int v = 1; v < q; ++v) z[v] = alpha / double(q - 1);
  z[q] = eps;
  return z;
}

}  // namespace

TwoWayChannel gen_qary_noise_erasure(int q, double alpha1, double eps1, double alpha2,
                                     double eps2) {
  if (q < 2) throw TwcError(ErrorCode::ParameterOutOfRange, "q must be >= 2");
  check_noise_params(alpha1, eps1);
  check_noise_params(alpha2, eps2);
  Vec z1 = qary_noise(q, alpha1, eps1);
  Vec z2 = qary_noise(q, alpha2, eps2);
  int ny = q + 1;  // erasure symbol is index q
  Mat m(q * q, ny * ny);
  for (int x1 = 0; x1 < q; ++x1)
    for (int x2 = 0; x2 < q; ++x2) {
      int r = x1 * q + x2;
      int s = (x1 + x2) % q;
      for (int v1 = 0; v1 <= q; ++v1) {
        int y1 = v1 == q ? q : (s + v1) % q;
        for (int v2 = 0; v2 <= q; ++v2) {
          int y2 = v2 == q ? q : (s + v2) % q;
          m(r, y1 * ny + y2) += z1[v1] * z2[v2];
        }
      }
    }
  return validate_channel(m, q, q, ny, ny);
}

TwoWayChannel gen_data_access(int m_bits, double alpha1, double eps1, double alpha2,
                              double eps2) {
  if (m_bits < 1) throw TwcError(ErrorCode::ParameterOutOfRange, "m must be >= 1");
  if (m_bits > 3) throw TwcError(ErrorCode::ParameterOutOfRange, "m > 3 is unsupported");
  check_noise_params(alpha1, eps1);
  check_noise_params(alpha2, eps2);
  int q = 1 << m_bits;
  Vec z1 = {1.0 - alpha1 - eps1, alpha1, eps1};
  Vec z2 = {1.0 - alpha2 - eps2, alpha2, eps2};
  int ny = q + 1;
  Mat m(q * q, ny * ny);
  auto out_symbol = [&](int x1, int x2, int z) {
    int s = x1 ^ x2;  // bitwise addition
    if (z == 0) return s;
    if (z == 1) return (q - 1) ^ s;  // burst: all bits flip
    return q;                        // erasure
  };
  for (int x1 = 0; x1 < q; ++x1)
    for (int x2 = 0; x2 < q; ++x2) {
      int r = x1 * q + x2;
      for (int v1 = 0; v1 < 3; ++v1)
        for (int v2 = 0; v2 < 3; ++v2)
          m(r, out_symbol(x1, x2, v1) * ny + out_symbol(x1, x2, v2)) += z1[v1] * z2[v2];
    }
  return validate_channel(m, q, q, ny, ny);
}

TwoWayChannel gen_isd(const IsdSpec& spec) {
  auto check_injective = [](const Mat& t, const char* name) {
    for (int r = 0; r < t.rows; ++r)
      for (int c1 = 0; c1 < t.cols; ++c1)
        for (int c2 = c1 + 1; c2 < t.cols; ++c2)
          if ((int)t(r, c1) == (int)t(r, c2))
            throw TwcError(ErrorCode::NotInjective,
                           std::string(name) + " not one-to-one for input row " +
                               std::to_string(r));
  };
  check_injective(spec.h1, "h1");
  check_injective(spec.h2, "h2");
  check_injective(spec.ht1, "h~1");
  check_injective(spec.ht2, "h~2");
  if ((int)spec.pz1.size() != spec.ht1.cols || (int)spec.pz2.size() != spec.ht2.cols)
    throw TwcError(ErrorCode::DimensionMismatch, "noise pmf sizes vs noise alphabets");
  Dist pz1(spec.pz1), pz2(spec.pz2);

  int nx1 = spec.h1.rows, nx2 = spec.h2.rows;
  if (spec.ht1.rows != nx2 || spec.ht2.rows != nx1)
    throw TwcError(ErrorCode::DimensionMismatch, "h~ input alphabets vs h");
  // marginal kernels: P(yj | x1, x2) by pushing the noise through h~ then h
  Mat m1(nx1 * nx2, spec.ny1), m2(nx1 * nx2, spec.ny2);
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2) {
      int r = x1 * nx2 + x2;
      for (int z = 0; z < (int)spec.pz1.size(); ++z) {
        int t = (int)spec.ht1(x2, z);
        if (t < 0 || t >= spec.h1.cols)
          throw TwcError(ErrorCode::IndexOutOfRange, "h~1 emits t out of range");
        int y = (int)spec.h1(x1, t);
        if (y < 0 || y >= spec.ny1)
          throw TwcError(ErrorCode::IndexOutOfRange, "h1 emits y out of range");
        m1(r, y) += pz1[z];
      }
      for (int z = 0; z < (int)spec.pz2.size(); ++z) {
        int t = (int)spec.ht2(x1, z);
        if (t < 0 || t >= spec.h2.cols)
          throw TwcError(ErrorCode::IndexOutOfRange, "h~2 emits t out of range");
        int y = (int)spec.h2(x2, t);
        if (y < 0 || y >= spec.ny2)
          throw TwcError(ErrorCode::IndexOutOfRange, "h2 emits y out of range");
        m2(r, y) += pz2[z];
      }
    }
  return joint_from_marginals(m1, m2, nx1, nx2);
}

TwoWayChannel fixture(const std::string& name) {
  if (name == "motivational") {
    Mat m(4, 4);
    m.set_row(0, {0.783, 0.087, 0.117, 0.013});
    m.set_row(1, {0.0417, 0.3753, 0.0583, 0.5247});
    m.set_row(2, {0.261, 0.609, 0.039, 0.091});
    m.set_row(3, {0.2919, 0.1251, 0.4081, 0.1749});
    return validate_channel(m, 2, 2, 2, 2);
  }
  if (name == "example4") {
    Mat m(4, 4);
    m.set_row(0, {0.783, 0.087, 0.117, 0.013});
    m.set_row(1, {0.36279, 0.05421, 0.50721, 0.07579});
    m.set_row(2, {0.261, 0.609, 0.039, 0.091});
    m.set_row(3, {0.173889, 0.243111, 0.243111, 0.339889});
    return validate_channel(m, 2, 2, 2, 2);
  }
  if (name == "example5") {
    Mat m(4, 4);
    m.set_row(0, {0.25, 0.5, 0.25, 0.0});
    m.set_row(1, {0.375, 0.375, 0.125, 0.125});
    m.set_row(2, {0.125, 0.125, 0.375, 0.375});
    m.set_row(3, {0.125, 0.125, 0.375, 0.375});
    return validate_channel(m, 2, 2, 2, 2);
  }
  if (name == "example6") {
    // Specified through its marginal kernels only; the joint is the product of
    // conditionally independent marginals. All four marginals equal the same
    // 3x3 circulant, and neither output depends on x2.
    Mat c(3, 3);
    c.set_row(0, {0.3, 0.2, 0.5});
    c.set_row(1, {0.5, 0.3, 0.2});
    c.set_row(2, {0.2, 0.5, 0.3});
    int nx1 = 3, nx2 = 2;
    Mat m1(nx1 * nx2, 3), m2(nx1 * nx2, 3);
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2) {
        m1.set_row(x1 * nx2 + x2, c.row(x1));
        m2.set_row(x1 * nx2 + x2, c.row(x1));
      }
    return joint_from_marginals(m1, m2, nx1, nx2);
  }
  throw TwcError(ErrorCode::UnknownFixture, "unknown fixture: " + name);
}

TwoWayChannel binary_additive() { return gen_qary_noise_erasure(2, 0.0, 0.0, 0.0, 0.0); }

TwoWayChannel noiseless_echo() {
  Mat m(4, 4);
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return validate_channel(m, 2, 2, 2, 2);
}

IsdSpec ternary_isd_spec() {
  // Binary inputs, ternary intermediate/noise/output alphabets:
  // T_j = X_k + Z_j (mod 3, with the binary input embedded), Y_j = X_j + T_j (mod 3).
  IsdSpec s;
  s.ny1 = s.ny2 = 3;
  s.h1 = Mat(2, 3);
  s.h2 = Mat(2, 3);
  s.ht1 = Mat(2, 3);
  s.ht2 = Mat(2, 3);
  for (int x = 0; x < 2; ++x)
    for (int t = 0; t < 3; ++t) {
      s.h1(x, t) = (x + t) % 3;
      s.h2(x, t) = (x + t) % 3;
      s.ht1(x, t) = (x + t) % 3;
      s.ht2(x, t) = (x + t) % 3;
    }
  s.pz1 = {0.6, 0.3, 0.1};
  s.pz2 = {0.7, 0.2, 0.1};
  return s;
}

}  // namespace twc
