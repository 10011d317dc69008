#pragma once

#include <cmath>

namespace sft::detail {

// Unit phasor e^{-2 pi i num/den} with exact values at quarter turns, so
// butterfly and transform matrices carry true zeros and +-1 entries.
inline void unit_phasor(long long num, long long den, double& re, double& im) {
  long long u = num % den;
  if (u < 0) u += den;
  if ((4 * u) % den == 0) {
    switch ((4 * u) / den) {
      case 0: re = 1.0; im = 0.0; return;
      case 1: re = 0.0; im = -1.0; return;
      case 2: re = -1.0; im = 0.0; return;
      default: re = 0.0; im = 1.0; return;
    }
  }
  const double ang = 2.0 * M_PI * static_cast<double>(u) / static_cast<double>(den);
  re = std::cos(ang);
  im = -std::sin(ang);
}

}  // namespace sft::detail
