#pragma once

// Forward-orbit classification.  An orbit is
//   - escaped            once it leaves the escape disk (or overflows),
//   - attracted          once a period-1 limit is confirmed,
//   - cycled             once a period-q >= 2 cycle is confirmed,
//   - budget-exhausted   otherwise.
//
// Confirmation is evidence-based and cheap enough to run per pixel: a
// near-return against a trailing ring of orbit points proposes a candidate
// period, Newton polishes the candidate cycle, the multiplier decides
// attracting vs indifferent, and the trailing window must already sit near
// the cycle with non-increasing distances.  Slowly contracting orbits
// (|multiplier| barely below 1) are caught this way long before the
// displacement ever drops under the plain attraction tolerance.
//
// Orbits drifting into a parabolic cycle (|multiplier| == 1, algebraic
// convergence) are NOT confirmed by default: within any practical budget the
// trailing window of such an orbit is indistinguishable from the window of a
// nearby non-basin orbit, so claiming the limit would overreach the evidence.
// They exhaust their budget instead, and the partial orbit is recorded so
// callers can run their own averaged convergence judgments.  Setting
// allow_parabolic_settle accepts multiplier-1 candidates on the same
// trailing-window evidence; that is an exploratory mode, not the default.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sindyn/constants.hpp"
#include "sindyn/family.hpp"
#include "sindyn/newton.hpp"

namespace sindyn {

enum class OrbitVerdict : std::uint8_t { Escaped, Attracted, Cycled, BudgetExhausted };

struct OrbitConfig {
  double escape_radius;
  long max_steps;
  double attraction_tol = kAttractionTol;
  int attraction_window = kAttractionWindow;
  double trap_radius = kTrapRadius;
  int settle_interval = kSettleCheckInterval;
  bool allow_parabolic_settle = false;  // opt-in; see the header note

  OrbitConfig(double radius, long steps) : escape_radius(radius), max_steps(steps) {
    if (!(radius >= 1.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("OrbitConfig: escape radius must be >= 1");
    }
    if (steps < 1) throw std::invalid_argument("OrbitConfig: max_steps must be >= 1");
  }
};

[[nodiscard]] inline OrbitConfig default_orbit_config(const FamilyParams& p,
                                                      long max_steps) {
  return OrbitConfig(default_escape_radius(p), max_steps);
}

struct CycleData {
  std::vector<Cplx> points;  // polished cycle, points[0] lexicographically least
  int period = 1;
  Cplx multiplier{0.0, 0.0};
  bool parabolic_like = false;  // accepted on settle evidence at |multiplier| ~ 1
};

struct OrbitOutcome {
  OrbitVerdict verdict = OrbitVerdict::BudgetExhausted;
  long steps = 0;    // f-applications performed when the verdict was reached
  Cplx final_point{0.0, 0.0};
  bool overflow = false;  // escape detected via range overflow, not the radius
  std::optional<CycleData> cycle;
};

class OrbitClassifier {
 public:
  OrbitClassifier(const FamilyParams& p, const OrbitConfig& cfg) : p_(p), cfg_(cfg) {}

  [[nodiscard]] OrbitOutcome run(Cplx z0) { return run_impl(z0, nullptr); }

  // as run(), also recording z_0, z_1, ... up to the deciding step
  [[nodiscard]] OrbitOutcome run_recording(Cplx z0, std::vector<Cplx>& points) {
    points.clear();
    return run_impl(z0, &points);
  }

 private:
  FamilyParams p_;
  OrbitConfig cfg_;
  std::array<Cplx, kOrbitRingSize> ring_{};
  // candidates that polished to an unacceptable multiplier-1 cycle; after two
  // such rejections the ring/checkpoint triggers stop proposing (the orbit
  // sits in a parabolic basin and every further proposal would be the same)
  int indifferent_rejections_ = 0;

  OrbitOutcome run_impl(Cplx z, std::vector<Cplx>* record) {
    const double r2 = cfg_.escape_radius * cfg_.escape_radius;
    const double tol2 = cfg_.attraction_tol * cfg_.attraction_tol;
    const double trap2 = cfg_.trap_radius * cfg_.trap_radius;
    const double lre = p_.lambda.real(), lim = p_.lambda.imag();
    const double are = p_.a.real(), aim = p_.a.imag();

    indifferent_rejections_ = 0;
    Cplx anchor = z;
    long anchor_idx = 0;
    long next_anchor = 1;
    long next_confirm = 1;
    int consec = 0;

    long n = 0;
    while (true) {
      if (!finite(z)) return escaped(z, n, /*overflow=*/true);
      if (record) record->push_back(z);
      const double zn = z.real() * z.real() + z.imag() * z.imag();
      if (zn > r2) return escaped(z, n, /*overflow=*/false);
      if (n >= cfg_.max_steps) {
        OrbitOutcome out;
        out.verdict = OrbitVerdict::BudgetExhausted;
        out.steps = n;
        out.final_point = z;
        return out;
      }

      if (n >= next_confirm && n >= 8 && indifferent_rejections_ < 2) {
        const double dre = z.real() - anchor.real();
        const double dim = z.imag() - anchor.imag();
        const bool near_anchor = (n > anchor_idx) && (dre * dre + dim * dim < trap2);
        const bool checkpoint = cfg_.settle_interval > 0 && (n % cfg_.settle_interval) == 0;
        if (near_anchor || checkpoint) {
          if (auto v = attempt_confirmation(z, n, 0)) {
            v->steps = n;
            return *v;
          }
          next_confirm = n + 256;
        }
      }
      if (n == next_anchor) {
        anchor = z;
        anchor_idx = n;
        next_anchor *= 2;
      }
      ring_[static_cast<std::size_t>(n % kOrbitRingSize)] = z;

      // one application of lambda*sin(z)+a, expression tree identical to
      // evaluate() so classifier limits match direct evaluation bit-for-bit
      if (std::fabs(z.imag()) > kSinhArgLimit) return escaped(z, n, /*overflow=*/true);
      double sx, cx, shy, chy;
      sin_cos(z.real(), sx, cx);
      sinh_cosh(z.imag(), shy, chy);
      const double sre = sx * chy, sim = cx * shy;
      const Cplx zn1(lre * sre - lim * sim + are, lre * sim + lim * sre + aim);

      const double dre = zn1.real() - z.real();
      const double dim = zn1.imag() - z.imag();
      if (dre * dre + dim * dim < tol2) {
        if (++consec >= cfg_.attraction_window && n >= next_confirm) {
          if (auto v = attempt_confirmation(zn1, n + 1, 1)) {
            v->steps = n + 1;
            return *v;
          }
          next_confirm = n + 256;
          consec = 0;
        }
      } else {
        consec = 0;
      }

      z = zn1;
      ++n;
    }
  }

  static OrbitOutcome escaped(Cplx z, long n, bool overflow) {
    OrbitOutcome out;
    out.verdict = OrbitVerdict::Escaped;
    out.steps = n;
    out.final_point = z;
    out.overflow = overflow;
    return out;
  }

  // Propose a period from the nearest ring entry (or take q_hint), polish,
  // and accept only with multiplier and trailing-window evidence.
  std::optional<OrbitOutcome> attempt_confirmation(Cplx z, long n, int q_hint) {
    const int avail = static_cast<int>(std::min<long>(n, kOrbitRingSize));
    if (avail < 8) return std::nullopt;

    int q = q_hint;
    if (q == 0) {
      double best = HUGE_VAL;
      for (int k = 1; k <= avail; ++k) {
        const Cplx& w = ring_[static_cast<std::size_t>((n - k) % kOrbitRingSize)];
        const double dre = z.real() - w.real();
        const double dim = z.imag() - w.imag();
        const double d2 = dre * dre + dim * dim;
        if (d2 < best) {
          best = d2;
          q = k;
        }
      }
      if (!(best < cfg_.trap_radius * cfg_.trap_radius)) return std::nullopt;
    }

    auto polished = polish_periodic(p_, z, q);
    if (!polished) return std::nullopt;
    if (std::abs(polished->z - z) > kTrapHoldRadius * 2.0) return std::nullopt;

    // minimal period among divisors of the proposed one
    int period = q;
    for (int d = 1; d < q; ++d) {
      if (q % d != 0) continue;
      auto fd = detail::iterate_with_chain(p_, polished->z, d);
      if (fd && std::abs(fd->first - polished->z) <=
                    kMinimalPeriodTol * (1.0 + std::abs(polished->z))) {
        period = d;
        break;
      }
    }

    // cycle points and the minimal-period multiplier
    std::vector<Cplx> cyc(static_cast<std::size_t>(period));
    Cplx mult(1.0, 0.0);
    Cplx w = polished->z;
    for (int i = 0; i < period; ++i) {
      cyc[static_cast<std::size_t>(i)] = w;
      Cplx f, df;
      try {
        evaluate_with_derivative(p_, w, f, df);
      } catch (const MagnitudeOverflow&) {
        return std::nullopt;
      }
      mult *= df;
      w = f;
    }
    const double am = std::abs(mult);

    const bool attracting = am < 1.0 - kAttractingMargin;
    const bool indifferent_band = !attracting && am <= 1.0 + kParabolicMultSlack;
    if (indifferent_band && !cfg_.allow_parabolic_settle) {
      ++indifferent_rejections_;
      return std::nullopt;
    }
    const bool parabolic = indifferent_band && cfg_.allow_parabolic_settle;
    if (!attracting && !parabolic) return std::nullopt;

    // trailing-window evidence: distances to the cycle set must already be
    // small and must not be growing
    const double capture = attracting ? kTrapHoldRadius : 0.5;
    double dist[kOrbitRingSize];
    for (int k = 0; k < avail; ++k) {
      const Cplx& pt = ring_[static_cast<std::size_t>((n - avail + k) % kOrbitRingSize)];
      double dmin = HUGE_VAL;
      for (const Cplx& c : cyc) dmin = std::min(dmin, std::abs(pt - c));
      if (dmin > capture) return std::nullopt;
      dist[k] = dmin;
    }
    const int third = avail / 3;
    double old_mean = 0.0, new_mean = 0.0;
    for (int k = 0; k < third; ++k) old_mean += dist[k];
    for (int k = avail - third; k < avail; ++k) new_mean += dist[k];
    old_mean /= third;
    new_mean /= third;
    const double slack = attracting ? 1.0 + 1e-6 : 0.999;
    if (!(new_mean <= old_mean * slack + (attracting ? cfg_.attraction_tol : 0.0))) {
      return std::nullopt;
    }

    // canonical rotation: least (Re, Im) first
    std::size_t lead = 0;
    for (std::size_t i = 1; i < cyc.size(); ++i) {
      if (cyc[i].real() < cyc[lead].real() ||
          (cyc[i].real() == cyc[lead].real() && cyc[i].imag() < cyc[lead].imag())) {
        lead = i;
      }
    }
    std::rotate(cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(lead), cyc.end());

    OrbitOutcome out;
    out.verdict = period == 1 ? OrbitVerdict::Attracted : OrbitVerdict::Cycled;
    out.final_point = z;
    CycleData cd;
    cd.points = std::move(cyc);
    cd.period = period;
    cd.multiplier = mult;
    cd.parabolic_like = !attracting;
    out.cycle = std::move(cd);
    return out;
  }
};

// convenience wrapper for one-off classifications
[[nodiscard]] inline OrbitOutcome classify_orbit(const FamilyParams& p, Cplx z0,
                                                 const OrbitConfig& cfg) {
  OrbitClassifier c(p, cfg);
  return c.run(z0);
}

}  // namespace sindyn
