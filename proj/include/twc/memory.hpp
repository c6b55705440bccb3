#pragma once
// Channels with stationary noise: finite-state Markov noise processes and
// their entropy rates, capacity rectangles for noise-invertible and injective
// semi-deterministic channels, the joint-noise outer rectangle, and the
// adaptive echo-cancellation demonstrator where non-adaptive coding is
// strictly suboptimal.

#include <cstdint>
#include <optional>

#include "twc/chanlib.hpp"
#include "twc/region.hpp"

namespace twc {

// Irreducible finite-state Markov chain with its stationary distribution.
// Covers i.i.d. noise as the identical-rows special case.
struct MarkovNoise {
  Mat T;   // row-stochastic transition matrix
  Vec pi;  // stationary distribution, pi T = pi
  int n = 0;

  static MarkovNoise make(const Mat& transition);
  static MarkovNoise iid(const Vec& marginal);
};

// H-bar = sum_s pi(s) H(T row s); exact for Markov chains.
double entropy_rate(const MarkovNoise& chain);

// Markov chain over the product alphabet Z1 x Z2, z1-major state index.
struct JointMarkovNoise {
  MarkovNoise chain;
  int n1 = 0, n2 = 0;

  static JointMarkovNoise make(const Mat& transition, int n1, int n2);
};

// Y_j = F_j(X1, X2, Z_j) with per-side Markov noise. Tables indexed
// ((x1 * nx2) + x2) * nz + z.
struct MemoryChannelSpec {
  int nx1 = 0, nx2 = 0, ny1 = 0, ny2 = 0, nz1 = 0, nz2 = 0;
  std::vector<int> f1, f2;
  MarkovNoise noise1, noise2;

  int f1_at(int x1, int x2, int z) const { return f1[(size_t(x1) * nx2 + x2) * nz1 + z]; }
  int f2_at(int x1, int x2, int z) const { return f2[(size_t(x1) * nx2 + x2) * nz2 + z]; }
};

// Capacity rectangle R1 <= log2 q2 - Hbar(Z2), R2 <= log2 q1 - Hbar(Z1) for
// channels whose F_j is invertible in Z_j, whose inverse is one-to-one in the
// opposite input, and whose alphabets match |X2|=|Y1|=|Z1|=q1,
// |X1|=|Y2|=|Z2|=q2. Throws StructuralViolation naming the failed hypothesis.
RateRegion2D capacity_rect_invertible(const MemoryChannelSpec& spec);

// Injective semi-deterministic channel with per-side Markov noise. The
// per-letter entropy limit of h̃_j(X_k^n, Z_j^n) is either derived from the
// cardinality-matched closed form (requires |X_k| = |T_j| = |Z_j| and h̃_j
// bijective in X_k for each fixed noise symbol) or supplied by the caller.
struct IsdMemorySpec {
  IsdSpec isd;  // tables and output sizes; the pz vectors are ignored here
  MarkovNoise noise1, noise2;
  std::optional<double> limit1, limit2;  // bits/use, overrides the closed form
};

RateRegion2D capacity_rect_isd(const IsdMemorySpec& spec);

// Outer rectangle for jointly correlated noise: R1 <= log2 q2 -
// H(Z2' | Z1, Z2) at stationarity, symmetric for R2, floored at zero.
RateRegion2D outer_rect_joint_noise(const JointMarkovNoise& joint, int q1, int q2);

// The demonstrator's joint noise law: Z1 i.i.d. uniform bits, Z2 the previous
// Z1. Its outer rectangle is (1, 0) while per-side entropy rates give 0.
JointMarkovNoise lagged_noise_joint();

struct AdaptiveSimReport {
  long n = 0;
  long errors = 0;
  double rate = 0.0;
  double shannon_type_bound = 0.0;  // log2 q2 - Hbar(Z2), floored at 0
};

// Simulates the adaptive encoder X1_i = M1_i xor X1_{i-1} xor Y1_{i-1} against
// the lagged noise law (zero initial conditions, Z2_1 = 0); the receiver reads
// the messages off Y2 directly. The cancellation is algebraic, so the error
// count is zero for every seed.
AdaptiveSimReport memsim_adaptive(long n, std::uint64_t seed);

}  // namespace twc
