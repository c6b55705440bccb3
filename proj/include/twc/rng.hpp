#pragma once
// Seeded, platform-independent randomness. Randomized checkers derive one
// substream per trial from the master seed, so parallel and serial runs agree.

#include <cstdint>
#include <cmath>

#include "twc/prob.hpp"

namespace twc {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t s = 0) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1); never returns 0 or 1 so -log(u) is finite.
  double uniform01() {
    return (double(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  mix.next();
  return mix;
}

// Uniform draw from the probability simplex: i.i.d. unit exponentials, normalized.
inline Vec simplex_sample(SplitMix64& rng, int n) {
  Vec v(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = -std::log(rng.uniform01());
    s += v[i];
  }
  for (int i = 0; i < n; ++i) v[i] /= s;
  return v;
}

// Random row-stochastic matrix, each row uniform on the simplex.
inline Mat stochastic_sample(SplitMix64& rng, int rows, int cols) {
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) m.set_row(r, simplex_sample(rng, cols));
  return m;
}

}  // namespace twc
