#pragma once

#include <algorithm>

namespace harp {

/// Quintic smoothstep on [0,1]: nu(0)=0, nu(1)=1, nu'(0)=nu'(1)=nu''(0)=nu''(1)=0,
/// and nu(u) + nu(1-u) = 1.  Shared transition profile for cone symbols and
/// wavelet frequency windows.
inline double quintic_smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

}  // namespace harp
