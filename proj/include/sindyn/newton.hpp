#pragma once

// Newton refinement of periodic points: solve f^q(z) = z with
// g(z) = f^q(z) - z, g'(z) = (chain multiplier) - 1.  Returns the polished
// point together with the multiplier of the cycle through it and the final
// back-substituted residual; callers decide what residual they accept.

#include <cmath>
#include <complex>
#include <optional>

#include "sindyn/family.hpp"

namespace sindyn {

struct PolishedPoint {
  Cplx z;
  Cplx multiplier;  // product of f' along the q-cycle at z
  double residual;  // |f^q(z) - z|
  int iterations;
};

namespace detail {

// f^q and the chain product of derivatives in one sweep; nullopt on overflow
inline std::optional<std::pair<Cplx, Cplx>> iterate_with_chain(const FamilyParams& p,
                                                               Cplx z, int q) {
  Cplx w = z;
  Cplx chain(1.0, 0.0);
  for (int i = 0; i < q; ++i) {
    Cplx f, df;
    try {
      evaluate_with_derivative(p, w, f, df);
    } catch (const MagnitudeOverflow&) {
      return std::nullopt;
    }
    chain *= df;
    w = f;
    if (!finite(w) || !finite(chain)) return std::nullopt;
  }
  return std::make_pair(w, chain);
}

}  // namespace detail

// Newton iteration for a fixed point of f^q starting from seed.  max_iter
// defaults to the fast quota; parabolic targets (multiple roots of g) only
// converge linearly and should be given kNewtonMaxIterSlow.  Returns nullopt
// when the iteration leaves double range, stalls on a zero derivative, or
// fails to meet accept_residual at the end.
[[nodiscard]] inline std::optional<PolishedPoint> polish_periodic(
    const FamilyParams& p, Cplx seed, int q, int max_iter = kNewtonMaxIter,
    double accept_residual = kRootResidualTol) {
  if (q < 1 || !finite(seed)) return std::nullopt;
  Cplx z = seed;
  int used = 0;
  for (int it = 0; it < max_iter; ++it) {
    auto fc = detail::iterate_with_chain(p, z, q);
    if (!fc) return std::nullopt;
    const Cplx g = fc->first - z;
    const Cplx dg = fc->second - Cplx(1.0, 0.0);
    if (dg == Cplx(0.0, 0.0)) return std::nullopt;
    const Cplx step = g / dg;
    if (!finite(step)) return std::nullopt;
    z -= step;
    used = it + 1;
    if (std::abs(step) <= kNewtonStepTol * (1.0 + std::abs(z))) break;
  }
  auto fc = detail::iterate_with_chain(p, z, q);
  if (!fc) return std::nullopt;
  PolishedPoint out;
  out.z = z;
  out.multiplier = fc->second;
  out.residual = std::abs(fc->first - z);
  out.iterations = used;
  if (!(out.residual <= accept_residual * std::max(1.0, std::abs(z)))) {
    return std::nullopt;
  }
  return out;
}

}  // namespace sindyn
