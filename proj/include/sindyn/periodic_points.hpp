#pragma once

// Periodic points of f(z) = lambda*sin(z) + a inside a search box: Newton
// solves of f^q(z) = z seeded on a uniform grid, deduplication, minimal
// periods, multiplier stability classification (with rational rotation
// detection on the indifferent band), the quadratic multiplier identity
//   (f')^2 + (f - a)^2 = lambda^2
// as an independent cross-check, and the multiplier-1 locus a = 2*pi*k with
// z0 = +-sqrt(lambda^2 - 1) + a, verified by back-substitution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sindyn/constants.hpp"
#include "sindyn/family.hpp"
#include "sindyn/newton.hpp"

namespace sindyn {

enum class Stability : int {
  Attracting,         // |multiplier| < 1 - band
  Repelling,          // |multiplier| > 1 + band
  ParabolicRational,  // |multiplier| ~ 1 and its argument matches 2*pi*p/q
  IndifferentOther,   // |multiplier| ~ 1, no small rational rotation found
};

struct RotationNumber {
  int p = 0;
  int q = 1;
  double error = 0.0;  // |arg(m)/2pi - p/q|
};

struct PeriodicPointRecord {
  Cplx point;
  int period = 1;  // minimal
  Cplx multiplier{0.0, 0.0};
  double residual = 0.0;  // |f^period(point) - point|
  Stability stability = Stability::Repelling;
  std::optional<RotationNumber> rotation;  // set for ParabolicRational
};

struct SearchBox {
  double re_lo, im_lo, re_hi, im_hi;
  SearchBox(double rlo, double ilo, double rhi, double ihi)
      : re_lo(rlo), im_lo(ilo), re_hi(rhi), im_hi(ihi) {
    if (!(re_lo < re_hi) || !(im_lo < im_hi)) {
      throw std::invalid_argument("SearchBox: requires lo < hi on both axes");
    }
  }
  [[nodiscard]] bool contains(Cplx z, double slack = 0.0) const {
    return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
           z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
  }
};

// best rational approximation p/q with q <= max_q to x, via the continued
// fraction convergents of x
[[nodiscard]] inline RotationNumber best_rational(double x, int max_q) {
  RotationNumber best;
  best.p = static_cast<int>(std::lround(x));
  best.q = 1;
  best.error = std::fabs(x - best.p);
  long long p0 = 1, q0 = 0;
  long long p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    const double err = std::fabs(x - approx);
    if (q1 <= max_q && err < best.error) {
      best.p = static_cast<int>(p1);
      best.q = static_cast<int>(q1);
      best.error = err;
    }
    if (frac < 1e-15 || q1 > max_q) break;
    const double inv = 1.0 / frac;
    const double fl = std::floor(inv);
    frac = inv - fl;
    const long long ai = static_cast<long long>(fl);
    const long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (q1 > 4 * static_cast<long long>(max_q)) break;
  }
  return best;
}

[[nodiscard]] inline Stability classify_stability(
    Cplx multiplier, std::optional<RotationNumber>* rot_out = nullptr) {
  if (rot_out) *rot_out = std::nullopt;
  const double am = std::abs(multiplier);
  if (am < 1.0 - kStabilityBand) return Stability::Attracting;
  if (am > 1.0 + kStabilityBand) return Stability::Repelling;
  double theta = std::arg(multiplier) / kTwoPi;
  theta -= std::floor(theta);  // into [0,1)
  RotationNumber rn = best_rational(theta, kRotationMaxDenominator);
  if (rn.error <= kRotationMatchTol) {
    rn.p = ((rn.p % rn.q) + rn.q) % rn.q;
    const int g = rn.p == 0 ? rn.q : std::gcd(rn.p, rn.q);
    rn.p /= g;
    rn.q /= g;
    if (rn.q < 1) rn.q = 1;
    if (rot_out) *rot_out = rn;
    return Stability::ParabolicRational;
  }
  return Stability::IndifferentOther;
}

// the multiplier recovered from the identity (f')^2 = lambda^2 - (f-a)^2,
// sign resolved against the directly evaluated derivative, with the
// discrepancy between the two exposed
struct IdentityMultiplier {
  Cplx value;
  double discrepancy;
};

[[nodiscard]] inline IdentityMultiplier multiplier_via_identity(const FamilyParams& p,
                                                                Cplx z) {
  const Cplx fz = evaluate(p, z);
  const Cplx direct = derivative(p, z);
  const Cplx d = fz - p.a;
  Cplx s = std::sqrt(p.lambda * p.lambda - d * d);
  if (std::abs(s - direct) > std::abs(-s - direct)) s = -s;
  return {s, std::abs(s - direct)};
}

// Residual of the derivative identity (f')^2 + (f-a)^2 - lambda^2, evaluated
// in its factored form lambda^2 * (cos^2 z + sin^2 z - 1).  The expanded form
// is hopeless in doubles once cosh(Im z) is large: (f')^2 and (f-a)^2 each
// round at ulp(|lambda|^2 cosh^2(Im z)), which swamps any honest tolerance
// already at |Im z| ~ 20.  The factored form needs only
//   cos^2 x + sin^2 x                 (a few ulp from 1 straight off sin_cos)
//   cosh^2 y - sinh^2 y = e^y * e^-y  (two exps; never the catastrophic
//                                      difference of the rounded squares)
// so the result stays at a few 1e-16 * |lambda|^2 across the finite range --
// the sharpest figure the identity can produce in double precision.
[[nodiscard]] inline double identity_defect(const FamilyParams& p, Cplx z) {
  require_finite(z, "identity_defect");
  double sx, cx;
  sin_cos(z.real(), sx, cx);
  const double u = sx * sx + cx * cx;
  const double y = z.imag();
  double v;
  if (std::fabs(y) <= 700.0) {
    v = std::exp(y) * std::exp(-y);
  } else {
    const double h = std::exp(0.5 * y) * std::exp(-0.5 * y);
    v = h * h;
  }
  return std::norm(p.lambda) * std::fabs(u * v - 1.0);
}

// All period-q points found inside the box from a grid_n x grid_n seeding:
// deduplicated at kDedupRadius, minimal periods verified on divisors,
// sorted by (Re, Im).
[[nodiscard]] inline std::vector<PeriodicPointRecord> solve_periodic_points(
    const FamilyParams& p, int q, const SearchBox& box, int grid_n) {
  if (q < 1) throw std::invalid_argument("solve_periodic_points: period must be >= 1");
  if (grid_n < 2) throw std::invalid_argument("solve_periodic_points: grid must be >= 2");

  std::vector<PeriodicPointRecord> out;
  const double dx = (box.re_hi - box.re_lo) / grid_n;
  const double dy = (box.im_hi - box.im_lo) / grid_n;
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const Cplx seed(box.re_lo + (i + 0.5) * dx, box.im_lo + (j + 0.5) * dy);
      auto pol = polish_periodic(p, seed, q);
      if (!pol) continue;
      if (!box.contains(pol->z, kDedupRadius)) continue;
      bool dup = false;
      for (const auto& r : out) {
        if (std::abs(r.point - pol->z) < kDedupRadius) {
          dup = true;
          break;
        }
      }
      if (dup) continue;

      PeriodicPointRecord rec;
      rec.point = pol->z;
      rec.residual = pol->residual;
      rec.period = q;
      for (int d = 1; d < q; ++d) {
        if (q % d != 0) continue;
        auto fd = detail::iterate_with_chain(p, pol->z, d);
        if (fd && std::abs(fd->first - pol->z) <=
                      kMinimalPeriodTol * (1.0 + std::abs(pol->z))) {
          rec.period = d;
          break;
        }
      }
      auto chain = detail::iterate_with_chain(p, pol->z, rec.period);
      if (!chain) continue;
      rec.multiplier = chain->second;
      std::optional<RotationNumber> rot;
      rec.stability = classify_stability(rec.multiplier, &rot);
      rec.rotation = rot;
      out.push_back(rec);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.point.real() != y.point.real()) return x.point.real() < y.point.real();
    return x.point.imag() < y.point.imag();
  });
  return out;
}

[[nodiscard]] inline std::vector<PeriodicPointRecord> solve_fixed_points(
    const FamilyParams& p, const SearchBox& box, int grid_n) {
  return solve_periodic_points(p, 1, box, grid_n);
}

// --- multiplier-1 locus ------------------------------------------------
// A fixed point with multiplier 1 must be of the form z0 = s + a with
// s = +-sqrt(lambda^2 - 1), and e^{i z0} is then independent of a, forcing
// a onto the lattice 2*pi*k.  For each k in the window and each square-root
// branch this evaluates the candidate (a = 2*pi*k, z0 = s + a) and reports
// the back-substituted residuals; nothing is assumed about which branch (if
// any) verifies.

struct ParabolicCandidate {
  int k = 0;                   // the candidate parameter is a = 2*pi*k
  int branch = +1;             // sign of sqrt(lambda^2 - 1)
  Cplx a;
  Cplx z0;                     // s + a
  double fix_residual = 0.0;   // |f(z0) - z0|
  double mult_residual = 0.0;  // |f'(z0) - 1|
  bool verified = false;
};

struct ParabolicLocus {
  bool degenerate = false;  // lambda^2 == 1: the square root vanishes,
                            // both branches coincide at z0 = a
  std::vector<ParabolicCandidate> candidates;
  bool any_verified = false;

  // the verified parameter values (the useful output when non-empty)
  [[nodiscard]] std::vector<Cplx> verified_values() const {
    std::vector<Cplx> v;
    for (const auto& c : candidates) {
      if (c.verified) v.push_back(c.a);
    }
    return v;
  }
};

[[nodiscard]] inline ParabolicLocus parabolic_locus_a(Cplx lambda, int k_window) {
  if (lambda == Cplx(0.0, 0.0)) {
    throw std::invalid_argument("parabolic_locus_a: lambda must be nonzero");
  }
  if (k_window < 0) {
    throw std::invalid_argument("parabolic_locus_a: k_window must be >= 0");
  }
  ParabolicLocus loc;
  const Cplx disc = lambda * lambda - Cplx(1.0, 0.0);
  loc.degenerate = std::abs(disc) < 1e-12;
  const Cplx s = std::sqrt(disc);
  for (int branch : {+1, -1}) {
    const Cplx sb = branch > 0 ? s : -s;
    for (int k = -k_window; k <= k_window; ++k) {
      ParabolicCandidate cand;
      cand.k = k;
      cand.branch = branch;
      cand.a = Cplx(kTwoPi * k, 0.0);
      cand.z0 = sb + cand.a;
      FamilyParams pf(lambda, cand.a);
      const Cplx fz = evaluate(pf, cand.z0);
      const Cplx dfz = derivative(pf, cand.z0);
      cand.fix_residual = std::abs(fz - cand.z0);
      cand.mult_residual = std::abs(dfz - Cplx(1.0, 0.0));
      const double scale = 1.0 + std::abs(lambda) + std::abs(cand.z0);
      cand.verified =
          cand.fix_residual <= 1e-9 * scale && cand.mult_residual <= 1e-9 * scale;
      loc.candidates.push_back(cand);
      loc.any_verified = loc.any_verified || cand.verified;
    }
    if (loc.degenerate) break;  // branches coincide; report one set
  }
  std::sort(loc.candidates.begin(), loc.candidates.end(),
            [](const auto& x, const auto& y) {
              if (x.k != y.k) return x.k < y.k;
              return x.branch > y.branch;
            });
  return loc;
}

}  // namespace sindyn
