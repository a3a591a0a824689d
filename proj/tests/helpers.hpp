#pragma once

#include "srcomb/model.hpp"

#include <random>

namespace testing {

// Uniform components in [-1, 1], not normalized.
inline srcomb::SpinState random_box_state(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  srcomb::SpinState s(n);
  for (std::size_t i = 0; i < 3 * n; ++i) s[i] = u(rng);
  return s;
}

inline double max_abs_diff(const srcomb::SpinState& a, const srcomb::SpinState& b) {
  return (a.flat() - b.flat()).cwiseAbs().maxCoeff();
}

}  // namespace testing
