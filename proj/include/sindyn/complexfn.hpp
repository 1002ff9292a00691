#pragma once

// Elementary evaluation core: sign-symmetric sin/cos and sinh/cosh kernels,
// extended-precision argument reduction for large real parts, and the complex
// sine/cosine assembled from the real decomposition
//
//     sin(x+iy) = sin x cosh y + i cos x sinh y
//     cos(x+iy) = cos x cosh y - i sin x sinh y
//
// Computing each real factor on |argument| and restoring the sign afterwards
// makes sin(-x) == -sin(x) and sinh(-y) == -sinh(y) hold bit-for-bit, which
// the family-level symmetry identities inherit.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "sindyn/constants.hpp"

namespace sindyn {

using Cplx = std::complex<double>;

// Raised when an evaluation would leave double range (|Im z| beyond ~709, or
// a lambda*sin(z)+a whose components overflow).
struct MagnitudeOverflow : std::range_error {
  explicit MagnitudeOverflow(const std::string& what) : std::range_error(what) {}
};

// Raised when an input carries NaN or infinity.
struct NonFiniteInput : std::invalid_argument {
  explicit NonFiniteInput(const std::string& what) : std::invalid_argument(what) {}
};

[[nodiscard]] inline bool finite(Cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(Cplx z, const char* where) {
  if (!finite(z)) throw NonFiniteInput(std::string(where) + ": non-finite input");
}

namespace detail {

// Reduce x >= 0 modulo 2*pi using a three-term split of 2*pi carried in long
// double; the fused multiply-add keeps the dominant term exact for quotients
// up to ~2^47, leaving a reduced argument good to ~1e-18 absolute.
[[nodiscard]] inline double reduce_two_pi(double x) {
  static const long double kD1 = 6.283185307179586231995926937088370323L;
  static const long double kD2 = 2.449293598294706414347528058916793209e-16L;
  static const long double kD3 = -5.989539619436679331774032708423968033e-33L;
  const long double xl = x;
  long double q = std::floor(xl / kD1);
  long double r = std::fma(-q, kD1, xl);
  r -= q * kD2;
  r -= q * kD3;
  const long double twopi = kD1 + kD2;
  while (r < 0.0L) r += twopi;
  while (r >= twopi) r -= twopi;
  return static_cast<double>(r);
}

}  // namespace detail

// sin and cos of a real argument, evaluated on |x| with the sine's sign
// restored afterwards (sin is odd, cos is even).  Arguments beyond 2^31 are
// reduced mod 2*pi in extended precision first; beyond the point where the
// 64-bit split itself loses the quadrant, libm (whose internal reduction is
// exact for every finite double) is used directly.
inline void sin_cos(double x, double& s, double& c) {
  double ax = std::fabs(x);
  if (ax > kArgReduceThreshold && ax <= kArgReduceCeiling) {
    ax = detail::reduce_two_pi(ax);
  }
#if defined(__GLIBC__)
  ::sincos(ax, &s, &c);
#else
  s = std::sin(ax);
  c = std::cos(ax);
#endif
  if (std::signbit(x)) s = -s;
}

// sinh and cosh of a real argument, via a single exp() once |y| >= 0.5 (no
// cancellation there) and libm below it (better relative error near zero).
// |y| > 709 cannot be represented in double range and throws.
inline void sinh_cosh(double y, double& sh, double& ch) {
  const double ay = std::fabs(y);
  if (ay > kSinhArgLimit) {
    throw MagnitudeOverflow("magnitude overflow: |Im z| = " + std::to_string(ay) +
                            " exceeds the representable range (709)");
  }
  if (ay >= kSinhSwitch) {
    const double e = std::exp(ay);
    const double ei = 1.0 / e;
    ch = 0.5 * (e + ei);
    sh = 0.5 * (e - ei);
  } else {
    sh = std::sinh(ay);
    ch = std::cosh(ay);
  }
  if (std::signbit(y)) sh = -sh;
}

// sin and cos of a complex argument in one pass (shares the four real
// kernels).  Throws NonFiniteInput / MagnitudeOverflow as applicable.
inline void complex_sin_cos(Cplx z, Cplx& s, Cplx& c) {
  require_finite(z, "complex_sin_cos");
  double sx, cx, shy, chy;
  sin_cos(z.real(), sx, cx);
  sinh_cosh(z.imag(), shy, chy);
  s = Cplx(sx * chy, cx * shy);
  c = Cplx(cx * chy, -sx * shy);
}

[[nodiscard]] inline Cplx complex_sin(Cplx z) {
  require_finite(z, "complex_sin");
  double sx, cx, shy, chy;
  sin_cos(z.real(), sx, cx);
  sinh_cosh(z.imag(), shy, chy);
  return Cplx(sx * chy, cx * shy);
}

[[nodiscard]] inline Cplx complex_cos(Cplx z) {
  require_finite(z, "complex_cos");
  double sx, cx, shy, chy;
  sin_cos(z.real(), sx, cx);
  sinh_cosh(z.imag(), shy, chy);
  return Cplx(cx * chy, -sx * shy);
}

// The standard magnitude chain |sin z| <= cosh(Im z) <= e^|z|, returned as
// concrete numbers so callers (and tests) can check the inequalities hold
// for the evaluated point.
struct GrowthBounds {
  double sin_magnitude;
  double cosh_bound;
  double exp_bound;
};

[[nodiscard]] inline GrowthBounds growth_bounds(Cplx z) {
  require_finite(z, "growth_bounds");
  const double az = std::abs(z);
  if (az > kSinhArgLimit) {
    throw MagnitudeOverflow("magnitude overflow: e^|z| not representable for |z| = " +
                            std::to_string(az));
  }
  GrowthBounds g;
  g.sin_magnitude = std::abs(complex_sin(z));
  double sh, ch;
  sinh_cosh(z.imag(), sh, ch);
  g.cosh_bound = ch;
  g.exp_bound = std::exp(az);
  return g;
}

}  // namespace sindyn
