#pragma once

// Quantitative escape machinery:
//
//   * the sinh chain: inside the strip |Re z| < N, |sin z| > sinh|Im z|
//     forces |f^n(z0)| > c_n*N with c_{n+1} = 2cosh(sqrt(c_n^2-1)*N/2) > c_n^2,
//     giving the doubly exponential floor |y_n| > sqrt(c1^(2^n) - 1)*N;
//   * strip orbits: concrete iteration with per-step strip membership and
//     |Im| growth records;
//   * the extended-family induction |v_n| > |y_n| + |a|, run on the proof's
//     own worst-case recursions (the comparison orbit can only lose to
//     cosh growth, the actual orbit can only beat sinh growth minus the
//     directional loss epsilon and the translation |a|);
//   * the post-singular probe: forward orbits of the two critical values,
//     with escape / bounded-so-far / undetermined verdicts.  bounded-so-far
//     covers confirmed limits and also orbits whose recorded tail passes an
//     averaged step-contraction test -- parabolic basins settle algebraically
//     and never clear the classifier's evidence bar within any sane budget,
//     yet their decreasing step sizes are plain to see on the record.
//
// Chain quantities grow past double range after ~4 steps; they are carried
// as Magnitude towers and reported alongside the first index (if any) where
// the plain double representation overflows.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sindyn/constants.hpp"
#include "sindyn/family.hpp"
#include "sindyn/magnitude.hpp"
#include "sindyn/orbit.hpp"

namespace sindyn {

// --- sinh chain ------------------------------------------------------------

struct EscapeChainConfig {
  int N;       // strip half-width, integer > 3
  double c1;   // chain seed constant, > 10
  double y0;   // seed imaginary part; sinh|y0| > c1*N

  EscapeChainConfig(int N_, double c1_, double y0_) : N(N_), c1(c1_), y0(y0_) {
    if (N <= kChainNMin - 1) {
      throw std::invalid_argument("EscapeChainConfig: N must be an integer > 3");
    }
    if (!(c1 > kChainC1Min)) {
      throw std::invalid_argument("EscapeChainConfig: c1 must be > 10");
    }
    if (!(std::sinh(std::fabs(y0)) > c1 * N)) {
      throw std::invalid_argument("EscapeChainConfig: requires sinh|y0| > c1*N");
    }
  }
};

struct ChainRow {
  int n;
  Magnitude lower_bound;       // sqrt(c1^(2^n) - 1) * N   (n = 0: c1*N)
  Magnitude observed_minimum;  // sqrt(c_n^2 - 1) * N from the recursion
                               // (n = 0: sinh|y0|, the seed's actual floor)
  bool recursion_ok;           // c_n > c_{n-1}^2 (true by convention at n<=1)
};

struct ChainReport {
  std::vector<ChainRow> rows;
  bool all_ok = true;
  // first n whose chain constant c_n exceeds double range (tower-only from
  // there on); -1 if every reported value was still a plain double
  int double_overflow_at = -1;
};

[[nodiscard]] inline ChainReport sinh_chain_verify(const EscapeChainConfig& cfg,
                                                   int steps) {
  if (steps < 1 || steps > kChainStepCap) {
    throw std::invalid_argument("sinh_chain_verify: steps must be in [1, 5]");
  }
  ChainReport rep;
  const double N = static_cast<double>(cfg.N);

  ChainRow seed;
  seed.n = 0;
  seed.lower_bound = Magnitude::from_value(cfg.c1 * N);
  seed.observed_minimum = Magnitude::from_value(std::sinh(std::fabs(cfg.y0)));
  seed.recursion_ok = seed.observed_minimum > seed.lower_bound;
  rep.all_ok = seed.recursion_ok;
  rep.rows.push_back(seed);

  // chain constants: c_1 = c1, c_{n+1} = 2 cosh(sqrt(c_n^2 - 1) * N / 2)
  Magnitude c_n = Magnitude::from_value(cfg.c1);
  Magnitude c_prev_sq = c_n;  // placeholder; row 1 is true by convention
  double log_c1_pow = std::log(cfg.c1);
  for (int n = 1; n <= steps; ++n) {
    log_c1_pow *= 2.0;  // log of c1^(2^n)
    ChainRow row;
    row.n = n;
    row.lower_bound = Magnitude::from_log(log_c1_pow).offset(-1.0).sqrt().scale(N);
    row.observed_minimum = c_n.square().offset(-1.0).sqrt().scale(N);
    row.recursion_ok = (n == 1) || (c_n > c_prev_sq);
    rep.rows.push_back(row);
    rep.all_ok = rep.all_ok && row.recursion_ok &&
                 !(row.observed_minimum < row.lower_bound);
    if (rep.double_overflow_at < 0 && !std::isfinite(c_n.value())) {
      rep.double_overflow_at = n;
    }
    c_prev_sq = c_n.square();
    c_n = c_n.square().offset(-1.0).sqrt().scale(N * 0.5).scale_cosh(2.0);
  }
  return rep;
}

// the chain's first inequality as a standalone predicate (property tests):
// |Re z| < N and sinh|Im z| > c1*N imply |f_{lambda,0}(z)| > c1*N for |lambda| >= 1
[[nodiscard]] inline bool strip_first_step_holds(Cplx lambda, Cplx z, int N, double c1) {
  if (!(std::fabs(z.real()) < N)) return true;  // vacuous outside the strip
  if (!(std::sinh(std::fabs(z.imag())) > c1 * N)) return true;
  FamilyParams p(lambda, Cplx(0.0, 0.0));
  return std::abs(evaluate(p, z)) > c1 * N;
}

// --- strip orbits -----------------------------------------------------------

struct StripOrbitRecord {
  std::vector<Cplx> points;      // z_0 ... z_m (while representable)
  std::vector<bool> in_strip;    // |Re z_n| < N
  long first_exit = -1;          // first n with |Re z_n| >= N; -1 if none
  bool overflowed = false;       // iteration left double range (escape)
  long steps = 0;                // f-applications performed
};

[[nodiscard]] inline StripOrbitRecord strip_escape_orbit(const FamilyParams& p,
                                                         Cplx z0, int N, long budget) {
  if (N < 1) throw std::invalid_argument("strip_escape_orbit: N must be >= 1");
  if (budget < 1) throw std::invalid_argument("strip_escape_orbit: budget must be >= 1");
  if (!(std::fabs(z0.real()) < N)) {
    throw std::invalid_argument("strip_escape_orbit: requires |Re z0| < N");
  }
  StripOrbitRecord rec;
  Cplx z = z0;
  for (long n = 0; n <= budget; ++n) {
    rec.points.push_back(z);
    const bool ins = std::fabs(z.real()) < static_cast<double>(N);
    rec.in_strip.push_back(ins);
    if (!ins && rec.first_exit < 0) rec.first_exit = n;
    if (n == budget) break;
    try {
      z = evaluate(p, z);
    } catch (const MagnitudeOverflow&) {
      rec.overflowed = true;
      rec.steps = n;
      return rec;
    }
    if (!finite(z)) {
      rec.overflowed = true;
      rec.steps = n;
      return rec;
    }
    rec.steps = n + 1;
  }
  return rec;
}

// per-step growth floor on a recorded orbit: |z_{n+1} - a| >= |lambda|*sinh|y_n|
// (equality in math; checked with a 1e-9 relative slack for rounding)
[[nodiscard]] inline bool strip_growth_bounds_hold(const FamilyParams& p,
                                                   const StripOrbitRecord& rec) {
  for (std::size_t n = 0; n + 1 < rec.points.size(); ++n) {
    const double floor_n =
        std::abs(p.lambda) * std::sinh(std::fabs(rec.points[n].imag()));
    const double got = std::abs(rec.points[n + 1] - p.a);
    if (got < floor_n * (1.0 - 1e-9)) return false;
  }
  return true;
}

// --- extended-family induction ------------------------------------------------

struct ExtendedSeedConfig {
  FamilyParams params;
  double y0;       // comparison-orbit seed height (> 0)
  double epsilon;  // directional loss absorbed per step; 0 < epsilon < |a|
  double v0;       // actual-orbit seed height; |v0| > |y0| + |a|

  ExtendedSeedConfig(FamilyParams p, double y0_, double epsilon_, double v0_)
      : params(p), y0(y0_), epsilon(epsilon_), v0(v0_) {
    const double A = std::abs(params.a);
    const double L = std::abs(params.lambda);
    if (!(L >= 1.0)) {
      throw std::invalid_argument("ExtendedSeedConfig: requires |lambda| >= 1");
    }
    if (!(A > 0.0)) {
      throw std::invalid_argument("ExtendedSeedConfig: requires a != 0");
    }
    if (!(std::sinh(std::fabs(y0)) > 3.0 * A)) {
      throw std::invalid_argument("ExtendedSeedConfig: violated sinh|y0| > 3|a|");
    }
    if (!(std::cosh(std::fabs(y0)) > 4.0)) {
      throw std::invalid_argument("ExtendedSeedConfig: violated cosh|y0| > 4");
    }
    if (!(L * std::exp(-std::fabs(y0)) < A)) {
      throw std::invalid_argument("ExtendedSeedConfig: violated |lambda|e^{-y0} < |a|");
    }
    if (!(std::fabs(v0) > std::fabs(y0) + A)) {
      throw std::invalid_argument("ExtendedSeedConfig: violated |v0| > |y0| + |a|");
    }
    if (!(epsilon > 0.0 && epsilon < A)) {
      throw std::invalid_argument("ExtendedSeedConfig: violated 0 < epsilon < |a|");
    }
  }
};

[[nodiscard]] inline double default_epsilon(const FamilyParams& p) {
  return 0.5 * std::abs(p.a);
}

struct InductionRow {
  int n;
  Magnitude v_n;       // proven floor for the actual orbit's |Im|
  Magnitude y_plus_a;  // worst-case comparison orbit |y_n| + |a|
  bool holds;          // v_n > y_plus_a
};

struct InductionReport {
  std::vector<InductionRow> rows;
  bool all_hold = true;
  // informative: the concrete orbit of w0 = i*v0, recorded while finite
  std::vector<Cplx> actual_orbit;
};

// The induction quantities follow the proof:
//   Y_{n+1} = |lambda| * cosh(Y_n)                (comparison can't grow faster)
//   V_{n+1} = |lambda| * sinh(V_n) - eps - |a|    (actual can't grow slower)
// Under the config invariants, V_n > Y_n + |a| propagates for every n,
// whichever of |a| >= 1 / |a| < 1 applies.
[[nodiscard]] inline InductionReport extended_induction_verify(
    const ExtendedSeedConfig& cfg, int steps) {
  if (steps < 0 || steps > kInductionStepCap) {
    throw std::invalid_argument("extended_induction_verify: steps must be in [0, 8]");
  }
  const double L = std::abs(cfg.params.lambda);
  const double A = std::abs(cfg.params.a);

  InductionReport rep;
  Magnitude V = Magnitude::from_value(std::fabs(cfg.v0));
  Magnitude Y = Magnitude::from_value(std::fabs(cfg.y0));
  for (int n = 0; n <= steps; ++n) {
    InductionRow row;
    row.n = n;
    row.v_n = V;
    row.y_plus_a = Y.add(A);
    row.holds = V > row.y_plus_a;
    rep.all_hold = rep.all_hold && row.holds;
    rep.rows.push_back(row);
    if (n == steps) break;
    V = V.scale_sinh_minus(L, cfg.epsilon + A);
    Y = Y.scale_cosh(L);
  }

  // the concrete orbit, for reports only (its phases are not controlled by
  // the worst-case recursions and it may leave the tract)
  Cplx w(0.0, cfg.v0);
  for (int n = 0; n <= steps; ++n) {
    rep.actual_orbit.push_back(w);
    if (n == steps) break;
    try {
      w = evaluate(cfg.params, w);
    } catch (const MagnitudeOverflow&) {
      break;
    }
    if (!finite(w)) break;
  }
  return rep;
}

// --- post-singular probe -----------------------------------------------------

enum class ProbeVerdict : int { BoundedSoFar, Escaped, Undetermined };

namespace detail {

// Averaged convergence judgment for an orbit that ran out of budget: the
// step sizes over the trailing half must be decisively shrinking (trailing
// quarter-mean at most 0.9x the preceding quarter-mean) and already small in
// absolute terms.  Algebraic convergence into a parabolic point passes;
// rotation on an invariant circle and bounded chaotic wandering do not.
[[nodiscard]] inline bool tail_settling(const std::vector<Cplx>& pts) {
  const std::size_t m = pts.size();
  if (m < 128) return false;
  const std::size_t lo = m / 2;
  const std::size_t mid = lo + (m - lo) / 2;
  double mean_old = 0.0, mean_new = 0.0;
  for (std::size_t i = lo; i + 1 < mid; ++i) mean_old += std::abs(pts[i + 1] - pts[i]);
  for (std::size_t i = mid; i + 1 < m; ++i) mean_new += std::abs(pts[i + 1] - pts[i]);
  mean_old /= static_cast<double>(mid - lo - 1);
  mean_new /= static_cast<double>(m - mid - 1);
  if (!std::isfinite(mean_old) || !std::isfinite(mean_new)) return false;
  const double scale = 1.0 + std::abs(pts.back());
  return mean_new <= 0.9 * mean_old && mean_new <= 1e-4 * scale;
}

}  // namespace detail

struct ProbeOrbitDetail {
  Cplx start;
  OrbitVerdict verdict;
  long steps;
  double max_modulus;
  bool settling_tail = false;  // budget-exhausted but judged converging
  std::optional<Cplx> limit;   // cycle representative when attracted/cycled
};

struct PostSingularProbe {
  FamilyParams params;
  long horizon;
  double radius;
  ProbeVerdict verdict = ProbeVerdict::Undetermined;
  double max_modulus = 0.0;
  std::vector<ProbeOrbitDetail> orbits;
};

[[nodiscard]] inline double default_probe_radius(const FamilyParams& p) {
  return 10.0 * (std::abs(p.lambda) + std::abs(p.a) + 1.0);
}
inline constexpr long kDefaultProbeHorizon = 100000;

// Iterates the orbits of the two critical values a+lambda and a-lambda (by
// 2*pi-periodicity these cover every critical orbit after one step; a wider
// k_window of critical points pi/2 + k*pi only prepends seeds whose images
// are those same two values, so it cannot change the verdict).
[[nodiscard]] inline PostSingularProbe post_singular_probe(const FamilyParams& p,
                                                           long horizon, double radius,
                                                           int k_window = 0) {
  if (horizon < 1) throw std::invalid_argument("post_singular_probe: horizon >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("post_singular_probe: radius > 0");
  PostSingularProbe probe{p, horizon, radius};

  std::vector<Cplx> starts = {p.a + p.lambda, p.a - p.lambda};
  if (k_window > 0) {
    for (int k = -k_window; k <= k_window; ++k) {
      // the orbit of the critical point pi/2 + k*pi, from its image onward
      starts.push_back(evaluate(p, Cplx(kHalfPi + kPi * k, 0.0)));
    }
  }

  bool any_escaped = false;
  bool all_settled = true;
  OrbitConfig cfg(radius, horizon);
  for (Cplx s : starts) {
    OrbitClassifier cls(p, cfg);
    std::vector<Cplx> pts;
    OrbitOutcome oc = cls.run_recording(s, pts);
    ProbeOrbitDetail det;
    det.start = s;
    det.verdict = oc.verdict;
    det.steps = oc.steps;
    det.max_modulus = 0.0;
    for (Cplx z : pts) {
      if (finite(z)) det.max_modulus = std::max(det.max_modulus, std::abs(z));
    }
    if (oc.verdict == OrbitVerdict::Escaped) {
      any_escaped = true;
      all_settled = false;
      if (oc.overflow) det.max_modulus = HUGE_VAL;
    } else if (oc.verdict == OrbitVerdict::BudgetExhausted) {
      det.settling_tail = detail::tail_settling(pts);
      if (!det.settling_tail) all_settled = false;
    } else if (oc.cycle) {
      det.limit = oc.cycle->points.front();
    }
    probe.max_modulus = std::max(probe.max_modulus, det.max_modulus);
    probe.orbits.push_back(det);
  }
  probe.verdict = any_escaped  ? ProbeVerdict::Escaped
                  : all_settled ? ProbeVerdict::BoundedSoFar
                                : ProbeVerdict::Undetermined;
  return probe;
}

}  // namespace sindyn
