#pragma once

// Machine-readable reports: JSON documents (one per invocation) and CSV
// polylines.  Complex numbers serialize as [re, im] pairs; every numeric
// parameter a command received is echoed back in the report header exactly as
// parsed, so runs can be reproduced from their own output.

#include <json.hpp>

#include <ostream>
#include <string>

#include "sindyn/atlas.hpp"
#include "sindyn/escape.hpp"
#include "sindyn/hair.hpp"
#include "sindyn/periodic_points.hpp"

namespace sindyn {

using Json = nlohmann::json;

[[nodiscard]] inline Json json_complex(Cplx z) { return Json::array({z.real(), z.imag()}); }

[[nodiscard]] inline Json json_params(const FamilyParams& p) {
  return Json{{"lambda", json_complex(p.lambda)}, {"a", json_complex(p.a)}};
}

[[nodiscard]] inline std::string stability_name(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    case Stability::ParabolicRational: return "parabolic-rational";
    default: return "indifferent-other";
  }
}

[[nodiscard]] inline std::string orbit_verdict_name(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::Escaped: return "escaped";
    case OrbitVerdict::Attracted: return "attracted";
    case OrbitVerdict::Cycled: return "cycled";
    default: return "budget-exhausted";
  }
}

[[nodiscard]] inline std::string probe_verdict_name(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::BoundedSoFar: return "bounded-so-far";
    case ProbeVerdict::Escaped: return "escaped";
    default: return "undetermined";
  }
}

[[nodiscard]] inline std::string boundedness_name(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "bounded";
    case Boundedness::UnboundedSuspected: return "unbounded-suspected";
    default: return "undetermined";
  }
}

[[nodiscard]] inline std::string boundedness_evidence_name(BoundednessEvidence e) {
  switch (e) {
    case BoundednessEvidence::EnclosedByJuliaRing: return "enclosed-by-julia-ring";
    case BoundednessEvidence::TouchesFrameAtAllRefinements:
      return "touches-frame-at-all-refinements";
    default: return "inconclusive";
  }
}

[[nodiscard]] inline std::string disjoint_name(DisjointType d) {
  switch (d) {
    case DisjointType::DisjointTypeEvidence: return "disjoint-type-evidence";
    case DisjointType::NotDisjointType: return "not-disjoint-type";
    default: return "undetermined";
  }
}

[[nodiscard]] inline std::string end_class_name(EndClass e) {
  switch (e) {
    case EndClass::TPlus: return "T-plus";
    case EndClass::TMinus: return "T-minus";
    default: return "undetermined";
  }
}

[[nodiscard]] inline Json json_periodic_point(const PeriodicPointRecord& r) {
  Json j{{"point", json_complex(r.point)},
         {"period", r.period},
         {"multiplier", json_complex(r.multiplier)},
         {"multiplier_abs", std::abs(r.multiplier)},
         {"residual", r.residual},
         {"stability", stability_name(r.stability)}};
  if (r.rotation) {
    j["rotation"] = Json{{"p", r.rotation->p}, {"q", r.rotation->q}, {"error", r.rotation->error}};
  }
  return j;
}

[[nodiscard]] inline Json json_grid(const GridSpec& g) {
  return Json{{"center", json_complex(g.center)}, {"width", g.width},
              {"height", g.height},              {"cols", g.cols},
              {"rows", g.rows},                  {"frame", Json::array({g.re_lo(), g.re_hi(),
                                                                        g.im_lo(), g.im_hi()})}};
}

[[nodiscard]] inline Json json_cycle(const CycleRecord& c) {
  Json pts = Json::array();
  for (const Cplx& z : c.points) pts.push_back(json_complex(z));
  return Json{{"id", c.id},
              {"period", c.period},
              {"points", pts},
              {"multiplier", json_complex(c.multiplier)},
              {"multiplier_abs", std::abs(c.multiplier)},
              {"parabolic_like", c.parabolic_like},
              {"pixel_count", c.pixel_count}};
}

// component list capped to the largest `max_components`, with totals intact
[[nodiscard]] inline Json json_atlas(const ComponentAtlas& atlas,
                                     std::size_t max_components = 64) {
  Json cycles = Json::array();
  for (const CycleRecord& c : atlas.cycles) cycles.push_back(json_cycle(c));

  std::vector<const Component*> by_size;
  by_size.reserve(atlas.components.size());
  for (const Component& c : atlas.components) by_size.push_back(&c);
  std::sort(by_size.begin(), by_size.end(), [](const Component* a, const Component* b) {
    return a->pixel_count != b->pixel_count ? a->pixel_count > b->pixel_count
                                            : a->id < b->id;
  });
  Json comps = Json::array();
  for (std::size_t i = 0; i < by_size.size() && i < max_components; ++i) {
    const Component& c = *by_size[i];
    Json crit = Json::array();
    for (const Cplx& z : c.contains_critical_points) crit.push_back(json_complex(z));
    comps.push_back(Json{{"id", c.id},
                         {"label", static_cast<int>(c.label)},
                         {"pixel_count", c.pixel_count},
                         {"touches_boundary", c.touches_boundary},
                         {"bounding_box_cols", Json::array({c.col_min, c.col_max})},
                         {"bounding_box_rows", Json::array({c.row_min, c.row_max})},
                         {"critical_points", crit}});
  }
  return Json{{"params", json_params(atlas.params)},
              {"grid", json_grid(atlas.grid)},
              {"budget", atlas.budget},
              {"julia_fraction", atlas.julia_fraction()},
              {"julia_pixels", atlas.julia_count},
              {"escaping_pixels", atlas.escaping_count},
              {"cycles", cycles},
              {"component_count", atlas.components.size()},
              {"components", comps}};
}

[[nodiscard]] inline Json json_hair(const Hair& h) {
  Json itin = Json::array();
  for (const ItinerarySymbol& s : h.itinerary) {
    itin.push_back(Json{{"k", s.k}, {"half", s.half == HalfPlane::Upper ? "upper" : "lower"}});
  }
  Json j{{"itinerary", itin},
         {"samples", h.points.size()},
         {"samples_per_step", h.samples_per_step},
         {"generations", h.generations},
         {"seed_height", h.seed_height},
         {"horizontal_extent", h.horizontal_extent},
         {"end_class", end_class_name(h.end_class)},
         {"truncated", h.truncated},
         {"half_mismatches", h.half_mismatches}};
  if (h.truncated) j["truncation_note"] = h.truncation_note;
  if (h.landing_point) {
    j["landing_point"] = json_complex(*h.landing_point);
    j["landing_method"] =
        h.landing_method == LandingMethod::NewtonPolished ? "newton-polished" : "cauchy";
    j["landing_residual"] = h.landing_residual;
    j["landing_multiplier"] = json_complex(h.landing_multiplier);
  }
  return j;
}

// CSV polyline: header then one "t,re,im" row per sample, ascending t
inline void write_hair_csv(const Hair& h, std::ostream& out) {
  out << "t,re,im\n";
  out.precision(17);
  for (std::size_t i = 0; i < h.points.size(); ++i) {
    out << h.t[i] << "," << h.points[i].real() << "," << h.points[i].imag() << "\n";
  }
}

[[nodiscard]] inline Json json_probe(const PostSingularProbe& probe) {
  Json orbits = Json::array();
  for (const ProbeOrbitDetail& d : probe.orbits) {
    orbits.push_back(Json{{"start", json_complex(d.start)},
                          {"verdict", probe_verdict_name(d.verdict)},
                          {"steps", d.steps},
                          {"max_modulus", d.max_modulus}});
  }
  return Json{{"params", json_params(probe.params)},
              {"horizon", probe.horizon},
              {"radius", probe.radius},
              {"verdict", probe_verdict_name(probe.verdict)},
              {"max_modulus", probe.max_modulus},
              {"orbits", orbits}};
}

[[nodiscard]] inline Json json_chain_report(const ChainReport& rep) {
  Json rows = Json::array();
  for (const ChainRow& r : rep.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"lower_bound", r.lower_bound.describe()},
                        {"observed_minimum", r.observed_minimum.describe()},
                        {"recursion_ok", r.recursion_ok}});
  }
  Json j{{"rows", rows}, {"all_ok", rep.all_ok}};
  if (rep.double_overflow_at >= 0) j["double_overflow_at"] = rep.double_overflow_at;
  return j;
}

[[nodiscard]] inline Json json_induction_report(const InductionReport& rep) {
  Json rows = Json::array();
  for (const InductionRow& r : rep.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"v_n", r.v_n.describe()},
                        {"y_plus_a", r.y_plus_a.describe()},
                        {"holds", r.holds}});
  }
  Json orbit = Json::array();
  for (const Cplx& z : rep.actual_orbit) orbit.push_back(json_complex(z));
  return Json{{"rows", rows}, {"all_hold", rep.all_hold}, {"actual_orbit", orbit}};
}

[[nodiscard]] inline Json json_parabolic_locus(const ParabolicLocus& locus) {
  Json cands = Json::array();
  for (const ParabolicCandidate& c : locus.candidates) {
    cands.push_back(Json{{"k", c.k},
                         {"branch", c.branch},
                         {"a", json_complex(c.a)},
                         {"z0", json_complex(c.z0)},
                         {"fix_residual", c.fix_residual},
                         {"mult_residual", c.mult_residual},
                         {"verified", c.verified}});
  }
  return Json{{"degenerate", locus.degenerate},
              {"any_verified", locus.any_verified},
              {"candidates", cands}};
}

}  // namespace sindyn
