#pragma once

// The two-parameter sine family f(z) = lambda*sin(z) + a and its exact
// structural identities: the derivative, the symmetry pairings that hold to
// rounding (or bit-for-bit where the kernels guarantee it), 2*pi*k
// periodicity offsets, and the singular data (critical points/values) that
// steer every global argument about the family.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sindyn/complexfn.hpp"
#include "sindyn/constants.hpp"

namespace sindyn {

struct FamilyParams {
  Cplx lambda;
  Cplx a;

  FamilyParams(Cplx lambda_, Cplx a_) : lambda(lambda_), a(a_) {
    if (!finite(lambda) || !finite(a)) {
      throw NonFiniteInput("FamilyParams: non-finite parameter");
    }
    if (lambda == Cplx(0.0, 0.0)) {
      throw std::invalid_argument("FamilyParams: lambda must be nonzero");
    }
  }
};

// f(z) = lambda*sin(z) + a.  The complex products are expanded by hand so the
// expression tree is fixed (no libstdc++ NaN-recovery branches, no contraction)
// and the sign symmetries of the sine kernel carry through to f.
[[nodiscard]] inline Cplx evaluate(const FamilyParams& p, Cplx z) {
  const Cplx s = complex_sin(z);
  const double re = p.lambda.real() * s.real() - p.lambda.imag() * s.imag() + p.a.real();
  const double im = p.lambda.real() * s.imag() + p.lambda.imag() * s.real() + p.a.imag();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw MagnitudeOverflow("magnitude overflow: lambda*sin(z)+a left double range");
  }
  return Cplx(re, im);
}

// f'(z) = lambda*cos(z)
[[nodiscard]] inline Cplx derivative(const FamilyParams& p, Cplx z) {
  const Cplx c = complex_cos(z);
  const double re = p.lambda.real() * c.real() - p.lambda.imag() * c.imag();
  const double im = p.lambda.real() * c.imag() + p.lambda.imag() * c.real();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw MagnitudeOverflow("magnitude overflow: lambda*cos(z) left double range");
  }
  return Cplx(re, im);
}

// value and derivative in one pass (shares the sin/cos kernels)
inline void evaluate_with_derivative(const FamilyParams& p, Cplx z, Cplx& f, Cplx& df) {
  Cplx s, c;
  complex_sin_cos(z, s, c);
  f = Cplx(p.lambda.real() * s.real() - p.lambda.imag() * s.imag() + p.a.real(),
           p.lambda.real() * s.imag() + p.lambda.imag() * s.real() + p.a.imag());
  df = Cplx(p.lambda.real() * c.real() - p.lambda.imag() * c.imag(),
            p.lambda.real() * c.imag() + p.lambda.imag() * c.real());
  if (!finite(f) || !finite(df)) {
    throw MagnitudeOverflow("magnitude overflow: evaluation left double range");
  }
}

// --- structural identity pairings -------------------------------------------
// Each helper returns the two sides of an identity evaluated independently,
// so callers can measure the residual instead of trusting algebra.

struct IdentityPair {
  Cplx left;
  Cplx right;
};

// f(pi/2 + w) versus f(pi/2 - w): equal exactly in math (sin is symmetric
// about pi/2); numerically equal to rounding because pi/2 +- w are distinct
// floating arguments.
[[nodiscard]] inline IdentityPair symmetry_pair(const FamilyParams& p, Cplx w) {
  return {evaluate(p, Cplx(kHalfPi, 0.0) + w), evaluate(p, Cplx(kHalfPi, 0.0) - w)};
}

// f(-z) versus 2a - f(z): equal in math for every a; for a = 0 the kernels
// make the two sides compare equal bit-for-bit.
[[nodiscard]] inline IdentityPair central_pair(const FamilyParams& p, Cplx z) {
  return {evaluate(p, -z), 2.0 * p.a - evaluate(p, z)};
}

// f(z + 2*pi*k) versus f(z): periodicity offset (exact in math; to rounding
// in floating point because 2*pi*k is not representable).
[[nodiscard]] inline IdentityPair periodicity_pair(const FamilyParams& p, Cplx z, int k) {
  return {evaluate(p, z + Cplx(kTwoPi * k, 0.0)), evaluate(p, z)};
}

// --- singular data --------------------------------------------------------
// Critical points pi/2 + k*pi (all of them, a vertical-line-free lattice on
// the real axis) and the two critical values a + lambda, a - lambda.  There
// are no finite asymptotic values.

struct SingularData {
  std::vector<Cplx> critical_points;  // pi/2 + k*pi for |k| <= window
  Cplx critical_value_plus;           // a + lambda  (image of pi/2 + 2*pi*k)
  Cplx critical_value_minus;          // a - lambda  (image of -pi/2 + 2*pi*k)
};

[[nodiscard]] inline SingularData singular_data(const FamilyParams& p, int k_window) {
  if (k_window < 0) throw std::invalid_argument("singular_data: k_window must be >= 0");
  SingularData sd;
  sd.critical_points.reserve(2 * k_window + 1);
  for (int k = -k_window; k <= k_window; ++k) {
    sd.critical_points.emplace_back(kHalfPi + kPi * k, 0.0);
  }
  sd.critical_value_plus = p.a + p.lambda;
  sd.critical_value_minus = p.a - p.lambda;
  return sd;
}

// Escape radius large enough that |z| > R implies the orbit cannot return:
// max(50, 4*(|lambda| + |a|)).
[[nodiscard]] inline double default_escape_radius(const FamilyParams& p) {
  return std::max(kEscapeRadiusFloor,
                  kEscapeRadiusFactor * (std::abs(p.lambda) + std::abs(p.a)));
}

}  // namespace sindyn
