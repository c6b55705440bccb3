#pragma once
// Blahut-Arimoto capacity solver for one-way discrete memoryless channels.

#include "twc/prob.hpp"

namespace twc {

struct BAOptions {
  double tol = 1e-10;     // duality-gap stopping threshold, bits
  int max_iter = 100000;
  Vec* trace = nullptr;   // if set, receives the mutual-information iterates
};

struct BAResult {
  double capacity = 0.0;  // bits
  Dist maximizer;         // final iterate from the uniform start (canonical)
  int iterations = 0;
  double gap = 0.0;       // max_x D(K(.|x) || Q) - I at termination
};

// Maximizes I(P, K) over input distributions. The certificate is the duality
// gap max_x D(K(.|x)||Q_Y) - I <= tol. Throws NonConvergence if max_iter is
// reached first (the message carries the residual gap).
BAResult blahut_arimoto(const Kernel& k, const BAOptions& opts = {});

// True iff D(K(.|x) || Q_Y) is constant over x within tol, where Q_Y is the
// output distribution under uniform input; equivalent to uniform being optimal.
bool uniform_kkt_test(const Kernel& k, double tol = 1e-8);

}  // namespace twc
