#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace sgl {

// sin(pi x) with the argument reduced first, so integer x gives an exact 0.
inline double sin_pi(double x) {
  const double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

// e^{2 pi i x}, reduced modulo 1 before the trig call.
inline std::complex<double> expi_2pi(double x) {
  const double r = x - std::round(x);
  if (r == 0.0) return {1.0, 0.0};
  const double a = 2.0 * std::numbers::pi * r;
  return {std::cos(a), std::sin(a)};
}

// sin(pi u) / (pi u), with the removable singularity at 0.
inline double sinc_pi(double u) {
  if (std::abs(u) < 1e-8) {
    const double pu = std::numbers::pi * u;
    return 1.0 - pu * pu / 6.0;
  }
  return sin_pi(u) / (std::numbers::pi * u);
}

}  // namespace sgl
