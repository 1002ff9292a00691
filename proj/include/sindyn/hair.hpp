#pragma once

// Hair tracing by symbolic pullback.  The inverse branches of
// f(z) = lambda*sin(z) + a are
//
//     z = (-1)^k * Arcsin((w - a)/lambda) + k*pi
//
// with principal Arcsin (Re in [-pi/2, pi/2]); the strip index k matches the
// component R_k of the preimage of the real axis containing k*pi, and the
// half symbol resolves the one genuine ambiguity (real (w-a)/lambda beyond
// the branch points, where both half-planes carry a preimage).  A hair is
// traced by seeding a vertical segment high in the tract of the itinerary's
// first symbol and pulling it back through the periodic symbol sequence;
// sample (generation j+1, index i) maps exactly onto sample (generation j,
// index i) under f, which realizes f(gamma(t)) = gamma(t+1) at the sample
// level.  Landing is detected from the Cauchy contraction of the innermost
// generations, with Newton refinement that also covers parabolic landings
// (whose raw pullback converges only algebraically).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sindyn/constants.hpp"
#include "sindyn/family.hpp"
#include "sindyn/newton.hpp"

namespace sindyn {

enum class HalfPlane : int { Upper = +1, Lower = -1 };

struct ItinerarySymbol {
  int k = 0;
  HalfPlane half = HalfPlane::Upper;
};

using Itinerary = std::vector<ItinerarySymbol>;

struct BranchPointProximity : std::runtime_error {
  explicit BranchPointProximity(const std::string& what) : std::runtime_error(what) {}
};

struct InverseBranchResult {
  Cplx z;
  bool half_mismatch = false;   // requested half-plane not available for this w
  bool at_branch_point = false; // (w-a)/lambda hit +-1 exactly (few ulps)
};

// One inverse branch application.  Distances to the branch points +-1 inside
// (4 ulps, 1e-12] raise BranchPointProximity (the arcsine derivative blows up
// and pullback accuracy is genuinely lost); an exact few-ulp hit is the
// well-defined endpoint value arcsin(+-1) = +-pi/2 and is returned flagged.
[[nodiscard]] inline InverseBranchResult inverse_branch(const FamilyParams& p, Cplx w,
                                                        ItinerarySymbol sym) {
  require_finite(w, "inverse_branch");
  const Cplx wp = (w - p.a) / p.lambda;
  if (!finite(wp)) throw NonFiniteInput("inverse_branch: (w-a)/lambda not finite");

  const double sign_k = (sym.k % 2 == 0) ? 1.0 : -1.0;
  const double want = sym.half == HalfPlane::Upper ? 1.0 : -1.0;
  InverseBranchResult out;

  const double d_plus = std::abs(wp - Cplx(1.0, 0.0));
  const double d_minus = std::abs(wp + Cplx(1.0, 0.0));
  const double exact_window = kBranchExactUlps * 2.2204460492503131e-16 *
                              std::max(1.0, std::abs(wp));
  if (d_plus <= exact_window || d_minus <= exact_window) {
    const double endpoint = d_plus <= exact_window ? kHalfPi : -kHalfPi;
    out.z = Cplx(sign_k * endpoint + kPi * sym.k, 0.0);
    out.at_branch_point = true;
    return out;
  }
  if (d_plus < kBranchStandoff || d_minus < kBranchStandoff) {
    throw BranchPointProximity("inverse_branch: (w-a)/lambda within 1e-12 of a branch point");
  }

  Cplx A;
  if (wp.imag() == 0.0 && std::fabs(wp.real()) > 1.0) {
    // On the cut both half-planes carry a preimage; the half symbol decides.
    const double re = wp.real() > 0.0 ? kHalfPi : -kHalfPi;
    const double t = std::acosh(std::fabs(wp.real()));
    A = Cplx(re, sign_k * want * t);  // so that Im z = (-1)^k Im A = want * t
  } else {
    A = std::asin(wp);
  }
  Cplx z = sign_k * A + Cplx(kPi * sym.k, 0.0);

  // a couple of Newton corrections keep deep pullbacks at machine accuracy
  const double min_branch_dist = std::min(d_plus, d_minus);
  if (min_branch_dist > 1e-6) {
    for (int it = 0; it < 2; ++it) {
      Cplx f, df;
      evaluate_with_derivative(p, z, f, df);
      const Cplx r = f - w;
      if (std::abs(r) <= 1e-12 * (1.0 + std::abs(w))) break;
      if (std::abs(df) < 1e-8) break;
      z -= r / df;
    }
  }

  const double resid = std::abs(evaluate(p, z) - w);
  if (!(resid <= kRootResidualTol * (1.0 + std::abs(w)))) {
    throw std::runtime_error("inverse_branch: residual above 1e-10");
  }
  if (std::fabs(z.imag()) > kRealAxisTol && z.imag() * want < 0.0) {
    out.half_mismatch = true;  // preimage forced into the other half-plane
  }
  out.z = z;
  return out;
}

enum class EndClass : int { TPlus, TMinus, Undetermined };
enum class LandingMethod : int { None, Cauchy, NewtonPolished };

struct Hair {
  Itinerary itinerary;
  std::vector<double> t;      // ascending; sample i sits at parameter t[i]
  std::vector<Cplx> points;   // same length as t
  int samples_per_step = 0;   // S: f maps points[i] onto points[i + S] exactly
  int generations = 0;        // pullback generations traced (seed excluded)
  double seed_height = 0.0;
  std::optional<Cplx> landing_point;
  LandingMethod landing_method = LandingMethod::None;
  double landing_residual = 0.0;      // |f^q(landing) - landing|
  Cplx landing_multiplier{0.0, 0.0};  // cycle multiplier at the landing point
  double horizontal_extent = 0.0;     // max |Re(point) - Re(landing or 0)|
  EndClass end_class = EndClass::Undetermined;
  bool truncated = false;
  std::string truncation_note;
  int half_mismatches = 0;
};

[[nodiscard]] inline double hair_horizontal_extent(const Hair& h) {
  const double ref = h.landing_point ? h.landing_point->real() : 0.0;
  double ext = 0.0;
  for (const Cplx& z : h.points) ext = std::max(ext, std::fabs(z.real() - ref));
  return ext;
}

[[nodiscard]] inline EndClass t_end_classify(const Hair& h) {
  if (h.points.empty()) return EndClass::Undetermined;
  double max_im = -HUGE_VAL, min_im = HUGE_VAL;
  for (const Cplx& z : h.points) {
    max_im = std::max(max_im, z.imag());
    min_im = std::min(min_im, z.imag());
  }
  const double margin = std::max(h.seed_height, 1.0);
  const bool up = max_im > margin;
  const bool down = min_im < -margin;
  if (up && !down) return EndClass::TPlus;
  if (down && !up) return EndClass::TMinus;
  return EndClass::Undetermined;
}

struct HalfPlaneCheck {
  double t0 = 0.0;  // smallest sampled t beyond which Im keeps one strict sign
  bool verdict = false;
};

[[nodiscard]] inline HalfPlaneCheck hair_halfplane_check(const Hair& h) {
  if (h.points.size() < 10) {
    throw std::invalid_argument("hair_halfplane_check: needs >= 10 samples");
  }
  HalfPlaneCheck out;
  const double last = h.points.back().imag();
  if (last == 0.0) return out;  // outermost sample on the axis: no verdict
  const double s = last > 0.0 ? 1.0 : -1.0;
  std::size_t m = h.points.size();
  while (m > 0 && h.points[m - 1].imag() * s > 0.0) --m;
  out.verdict = true;
  out.t0 = h.t[m];  // first sample of the constant-sign suffix
  return out;
}

// max over pullback samples of |f(sample at t) - sample at t+1| relative to
// scale; exact pairing makes this a machine-level quantity for healthy traces
[[nodiscard]] inline double hair_forward_invariance_residual(const FamilyParams& p,
                                                             const Hair& h) {
  double worst = 0.0;
  const std::size_t S = static_cast<std::size_t>(h.samples_per_step);
  if (S == 0) return worst;
  for (std::size_t i = 0; i + S < h.points.size(); ++i) {
    const Cplx img = evaluate(p, h.points[i]);
    const double r = std::abs(img - h.points[i + S]) / (1.0 + std::abs(img));
    worst = std::max(worst, r);
  }
  return worst;
}

// Trace the hair of a periodic itinerary.  depth counts full rounds of the
// itinerary (depth * period pullbacks total).  The seed is a vertical segment
// at Re = k0*pi spanning heights [H, |lambda| sinh H] (so that f carries the
// seed's inner end onto its outer end's height: one fundamental step), with
// samples_per_step geometrically spaced points, signed by the first symbol's
// half-plane.  landing_tol is the Cauchy acceptance diameter; parabolic
// targets want kLandingTolParabolic and ~10x depth.
[[nodiscard]] inline Hair trace_hair(const FamilyParams& p, const Itinerary& itin,
                                     int depth, int samples_per_step,
                                     double start_height = kDefaultStartHeight,
                                     double landing_tol = kLandingTol) {
  if (itin.empty()) throw std::invalid_argument("trace_hair: empty itinerary");
  if (depth < 1) throw std::invalid_argument("trace_hair: depth must be >= 1");
  if (samples_per_step < 2) {
    throw std::invalid_argument("trace_hair: samples_per_step must be >= 2");
  }
  if (!(start_height > 0.0)) {
    throw std::invalid_argument("trace_hair: start_height must be > 0");
  }
  const double L = std::abs(p.lambda);
  const double top = L * std::sinh(start_height);
  if (!(top > start_height + kTwoPi)) {
    throw std::invalid_argument(
        "trace_hair: |lambda|*sinh(start_height) too small; raise start_height");
  }

  const int period = static_cast<int>(itin.size());
  const int total = depth * period;  // pullback generations
  const int S = samples_per_step;

  Hair h;
  h.itinerary = itin;
  h.samples_per_step = S;
  h.seed_height = start_height;

  // seed generation: geometric heights H..top at Re = k0*pi, signed by half
  const double sign0 = itin.front().half == HalfPlane::Upper ? 1.0 : -1.0;
  const double x0 = kPi * itin.front().k;
  std::vector<Cplx> gen(static_cast<std::size_t>(S));
  const double ratio = top / start_height;
  for (int i = 0; i < S; ++i) {
    const double u = static_cast<double>(i) / (S - 1);
    const double height = start_height * std::pow(ratio, u);
    gen[static_cast<std::size_t>(i)] = Cplx(x0, sign0 * height);
  }

  // generations stacked innermost-last; flat output is emitted innermost-first
  std::vector<std::vector<Cplx>> gens;
  gens.reserve(static_cast<std::size_t>(total) + 1);
  gens.push_back(gen);

  for (int j = 0; j < total; ++j) {
    // generation j covers curve parameters [total-j, total-j+1); pulling it
    // back applies the symbol of the next-inner curve segment
    const int m = total - j - 1;
    const ItinerarySymbol sym = itin[static_cast<std::size_t>(m % period)];
    std::vector<Cplx> next(static_cast<std::size_t>(S));
    bool failed = false;
    for (int i = 0; i < S; ++i) {
      try {
        InverseBranchResult r = inverse_branch(p, gens.back()[static_cast<std::size_t>(i)], sym);
        if (r.half_mismatch) ++h.half_mismatches;
        next[static_cast<std::size_t>(i)] = r.z;
      } catch (const BranchPointProximity& e) {
        h.truncated = true;
        h.truncation_note = "generation " + std::to_string(j + 1) + ", sample " +
                            std::to_string(i) + ": " + e.what();
        failed = true;
        break;
      }
    }
    if (failed) break;
    gens.push_back(std::move(next));
  }

  const int J = static_cast<int>(gens.size()) - 1;  // completed pullbacks
  h.generations = J;

  // flat output, ascending t: innermost generation first
  h.t.reserve(gens.size() * static_cast<std::size_t>(S));
  h.points.reserve(gens.size() * static_cast<std::size_t>(S));
  for (int j = J; j >= 0; --j) {
    for (int i = 0; i < S; ++i) {
      h.t.push_back(static_cast<double>(J - j) + static_cast<double>(i) / (S - 1));
      h.points.push_back(gens[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    }
  }

  // landing detection on the innermost generations
  if (J >= 2 && !h.truncated) {
    const auto& inner = gens[static_cast<std::size_t>(J)];
    const auto& prev = gens[static_cast<std::size_t>(J - 1)];
    double diam = 0.0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      for (std::size_t l = i + 1; l < inner.size(); ++l) {
        diam = std::max(diam, std::abs(inner[i] - inner[l]));
      }
      diam = std::max(diam, std::abs(inner[i] - prev[i]));
    }
    const Cplx cauchy_pt = inner.front();
    if (diam < landing_tol) {
      h.landing_point = cauchy_pt;
      h.landing_method = LandingMethod::Cauchy;
    }

    // Newton refinement: also resolves parabolic landings, whose pullback
    // approaches the target only algebraically
    auto pol = polish_periodic(p, cauchy_pt, period, kNewtonMaxIterSlow, 1e-8);
    if (pol && std::abs(pol->multiplier) >= 1.0 - kStabilityBand) {
      const double d_now = std::abs(cauchy_pt - pol->z);
      const double d_before = std::abs(prev.front() - pol->z);
      const double d_earlier =
          J >= 3 ? std::abs(gens[static_cast<std::size_t>(J - 2)].front() - pol->z)
                 : HUGE_VAL;
      if (d_now <= 0.5 && d_now <= d_before && d_before <= d_earlier) {
        h.landing_point = pol->z;
        h.landing_method = LandingMethod::NewtonPolished;
        h.landing_residual = pol->residual;
        h.landing_multiplier = pol->multiplier;
      }
    }
    if (h.landing_method == LandingMethod::Cauchy) {
      // record the cycle data for the raw Cauchy landing too, when available
      auto fc = detail::iterate_with_chain(p, cauchy_pt, period);
      if (fc) {
        h.landing_residual = std::abs(fc->first - cauchy_pt);
        h.landing_multiplier = fc->second;
      }
    }
  }

  h.horizontal_extent = hair_horizontal_extent(h);
  h.end_class = t_end_classify(h);
  return h;
}

// --- strip partition ---------------------------------------------------------
// The generator curve gamma U {fixed point} U mirror, together with all its
// 2*pi translates, cuts the plane into strips; membership is decided by
// horizontal-ray crossing parity against the polyline translates (vertical
// extensions carry the curve's ends to +-i*infinity).

struct StripPartition {
  Cplx fixed_point;
  std::vector<Cplx> curve;  // ordered bottom end -> fixed point -> top end
  double min_translate_separation = 0.0;

  // index k of the strip between curve+2*pi*k and curve+2*pi*(k+1)
  [[nodiscard]] int membership(Cplx z) const {
    const int k0 = static_cast<int>(std::floor((z.real() - fixed_point.real()) / kTwoPi));
    for (int k = k0 - 2; k <= k0 + 2; ++k) {
      if (!left_of_translate(z, k) && left_of_translate(z, k + 1)) return k;
    }
    throw std::runtime_error("StripPartition: membership test failed to bracket z");
  }

  [[nodiscard]] bool left_of_translate(Cplx z, int k) const {
    const double shift = kTwoPi * k;
    int crossings = 0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      const double y1 = curve[i].imag(), y2 = curve[i + 1].imag();
      if ((y1 > z.imag()) == (y2 > z.imag())) continue;
      const double x1 = curve[i].real() + shift, x2 = curve[i + 1].real() + shift;
      const double xc = x1 + (z.imag() - y1) * (x2 - x1) / (y2 - y1);
      if (xc > z.real()) ++crossings;
    }
    // vertical extensions from the curve ends
    if (z.imag() <= curve.front().imag() && curve.front().real() + shift > z.real()) {
      ++crossings;
    }
    if (z.imag() > curve.back().imag() && curve.back().real() + shift > z.real()) {
      ++crossings;
    }
    return (crossings % 2) == 1;
  }
};

namespace detail {

// min distance between segment sets, with bbox prefilter
[[nodiscard]] inline double segment_point_dist(Cplx a, Cplx b, Cplx q) {
  const Cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(q - a);
  double u = ((q.real() - a.real()) * ab.real() + (q.imag() - a.imag()) * ab.imag()) / len2;
  u = std::clamp(u, 0.0, 1.0);
  return std::abs(q - (a + u * ab));
}

[[nodiscard]] inline double segment_segment_dist(Cplx a, Cplx b, Cplx c, Cplx d) {
  // polyline sampling distance has no crossings here (caller checks parity
  // separately); endpoint projections are an adequate desk-scale measure
  return std::min(std::min(segment_point_dist(a, b, c), segment_point_dist(a, b, d)),
                  std::min(segment_point_dist(c, d, a), segment_point_dist(c, d, b)));
}

}  // namespace detail

[[nodiscard]] inline StripPartition build_strip_partition(const Hair& upper,
                                                          const Hair& mirror,
                                                          Cplx fixed_point) {
  if (!upper.landing_point || !mirror.landing_point) {
    throw std::invalid_argument("build_strip_partition: both hairs must land");
  }
  if (std::abs(*upper.landing_point - fixed_point) > kLandingTolParabolic ||
      std::abs(*mirror.landing_point - fixed_point) > kLandingTolParabolic) {
    throw std::invalid_argument("build_strip_partition: hairs do not land at fixed_point");
  }
  StripPartition sp;
  sp.fixed_point = fixed_point;
  // mirror runs outward toward -i*inf; reverse it so the curve ascends
  sp.curve.reserve(upper.points.size() + mirror.points.size() + 1);
  for (std::size_t i = mirror.points.size(); i-- > 0;) {
    sp.curve.push_back(mirror.points[i]);
  }
  sp.curve.push_back(fixed_point);
  sp.curve.insert(sp.curve.end(), upper.points.begin(), upper.points.end());

  // a hair must clear its own 2*pi translate; a touching translate means the
  // trace failed (the underlying curve is injective)
  double min_sep = HUGE_VAL;
  for (std::size_t i = 0; i + 1 < sp.curve.size(); ++i) {
    const Cplx a = sp.curve[i], b = sp.curve[i + 1];
    const double alo = std::min(a.imag(), b.imag()), ahi = std::max(a.imag(), b.imag());
    for (std::size_t j = 0; j + 1 < sp.curve.size(); ++j) {
      const Cplx c = sp.curve[j] + Cplx(kTwoPi, 0.0), d = sp.curve[j + 1] + Cplx(kTwoPi, 0.0);
      const double clo = std::min(c.imag(), d.imag()), chi = std::max(c.imag(), d.imag());
      if (clo > ahi + min_sep || chi < alo - min_sep) continue;
      min_sep = std::min(min_sep, detail::segment_segment_dist(a, b, c, d));
    }
  }
  sp.min_translate_separation = min_sep;
  if (!(min_sep > kStripSeparationMin)) {
    throw std::runtime_error(
        "build_strip_partition: hair touches its 2*pi translate (tracing failure)");
  }
  return sp;
}

}  // namespace sindyn
