#pragma once
// Channel generators and named fixtures: q-ary additive-noise channels with
// erasures, data-access channels, injective semi-deterministic compositions,
// and the hard-coded reference matrices used throughout the tests and CLI.

#include <string>

#include "twc/prob.hpp"

namespace twc {

// Y_j = (X1 +q X2 +q Z_j) unless Z_j is the erasure symbol, in which case E.
// P(Z_j = E) = eps_j, P(Z_j = z) = alpha_j / (q-1) for z = 1..q-1.
// Component noises are generated independently.
TwoWayChannel gen_qary_noise_erasure(int q, double alpha1, double eps1, double alpha2,
                                     double eps2);

// Data-access channel over q = 2^m symbols: bitwise superposition when the
// noise is 0, an all-bits flip when it is 1, an erasure when it is 2, with
// P(Z_j = 1) = alpha_j and P(Z_j = 2) = eps_j.
TwoWayChannel gen_data_access(int m, double alpha1, double eps1, double alpha2,
                              double eps2);

// Injective semi-deterministic composition: Y_j = h_j(X_j, T_j) with
// T_j = h̃_j(X_k, Z_j), h_j one-to-one in T_j and h̃_j one-to-one in Z_j.
struct IsdSpec {
  // h_j(x_j, t) -> y_j and h̃_j(x_k, z) -> t, as lookup tables
  Mat h1, h2;    // rows x_j, cols t_j, entries y-symbols
  Mat ht1, ht2;  // rows x_k, cols z_j, entries t-symbols
  Vec pz1, pz2;
  int ny1 = 0, ny2 = 0;
};

TwoWayChannel gen_isd(const IsdSpec& spec);

// Named fixtures: "motivational", "example4", "example5", "example6".
TwoWayChannel fixture(const std::string& name);

// Convenience instances used by several tests.
TwoWayChannel binary_additive();                      // Y1 = Y2 = X1 xor X2
TwoWayChannel noiseless_echo();                       // identity transition matrix
IsdSpec ternary_isd_spec();                           // nontrivial shift composition

}  // namespace twc
