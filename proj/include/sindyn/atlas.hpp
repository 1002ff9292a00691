#pragma once

// Grid classification of the dynamical plane.  Each pixel center is iterated
// with the orbit classifier; pixels attracted to a common cycle (matched at
// 1e-6 after Newton polishing) share a cycle id, escaping pixels and
// budget-exhausted ("julia-like") pixels get their own labels, and a flood
// fill assembles 4-connected components.  Classification runs in two phases
// so the result is identical for any worker count: per-pixel orbit runs land
// in independent slots (parallel), then cycle registration and component
// assembly sweep the finished raster in row-major order (serial).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sindyn/constants.hpp"
#include "sindyn/family.hpp"
#include "sindyn/newton.hpp"
#include "sindyn/orbit.hpp"

namespace sindyn {

inline constexpr double kDisjointJuliaFracMax = 0.005;
inline constexpr int kDisjointAtlasSize = 96;

// pixel class codes as stored in the raster
inline constexpr std::uint8_t kClassJulia = 0;
inline constexpr std::uint8_t kClassEscaping = 1;
inline constexpr std::uint8_t kClassBasinBase = 2;  // basin id b -> byte 2+b

struct GridSpec {
  Cplx center{0.0, 0.0};
  double width = 0.0, height = 0.0;
  int cols = 0, rows = 0;

  GridSpec(Cplx c, double w, double h, int nc, int nr)
      : center(c), width(w), height(h), cols(nc), rows(nr) {
    if (!finite(c) || !std::isfinite(w) || !std::isfinite(h)) {
      throw std::invalid_argument("GridSpec: non-finite geometry");
    }
    if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("GridSpec: empty frame");
    if (nc < 16 || nr < 16) throw std::invalid_argument("GridSpec: cols, rows must be >= 16");
    const double ax = w / nc, ay = h / nr;
    if (std::fabs(ax - ay) > kSquarePixelRelTol * std::max(ax, ay)) {
      throw std::invalid_argument("GridSpec: pixels must be square (width/cols == height/rows)");
    }
  }

  [[nodiscard]] static GridSpec from_frame(double re_lo, double re_hi, double im_lo,
                                           double im_hi, int nc, int nr) {
    return GridSpec(Cplx((re_lo + re_hi) / 2, (im_lo + im_hi) / 2), re_hi - re_lo,
                    im_hi - im_lo, nc, nr);
  }

  [[nodiscard]] double dx() const { return width / cols; }
  [[nodiscard]] double dy() const { return height / rows; }
  [[nodiscard]] double re_lo() const { return center.real() - width / 2; }
  [[nodiscard]] double re_hi() const { return center.real() + width / 2; }
  [[nodiscard]] double im_lo() const { return center.imag() - height / 2; }
  [[nodiscard]] double im_hi() const { return center.imag() + height / 2; }

  // row 0 is the top raster row
  [[nodiscard]] Cplx pixel_center(int col, int row) const {
    return Cplx(re_lo() + (col + 0.5) * dx(), im_hi() - (row + 0.5) * dy());
  }
  [[nodiscard]] std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(col);
  }
  [[nodiscard]] std::size_t pixel_count() const {
    return static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows);
  }
  [[nodiscard]] std::optional<std::pair<int, int>> locate(Cplx z) const {
    const int c = static_cast<int>(std::floor((z.real() - re_lo()) / dx()));
    const int r = static_cast<int>(std::floor((im_hi() - z.imag()) / dy()));
    if (c < 0 || c >= cols || r < 0 || r >= rows) return std::nullopt;
    return std::make_pair(c, r);
  }

  // refinement step: frame widened 1.5x, resolution doubled, same center
  [[nodiscard]] GridSpec refined(int level) const {
    double f = 1.0, m = 1.0;
    for (int i = 0; i < level; ++i) { f *= kRefineFrameFactor; m *= 2.0; }
    return GridSpec(center, width * f, height * f, static_cast<int>(cols * m),
                    static_cast<int>(rows * m));
  }
  [[nodiscard]] GridSpec doubled() const {
    return GridSpec(center, width, height, cols * 2, rows * 2);
  }
};

struct CycleRecord {
  int id = 0;  // raster byte = kClassBasinBase + id
  int period = 0;
  std::vector<Cplx> points;  // canonical order (least (Re, Im) first)
  Cplx multiplier{0.0, 0.0};
  bool parabolic_like = false;
  std::size_t pixel_count = 0;
};

struct Component {
  int id = 0;  // discovery order over the row-major sweep
  std::uint8_t label = kClassJulia;
  std::size_t pixel_count = 0;
  bool touches_boundary = false;
  int col_min = 0, col_max = 0, row_min = 0, row_max = 0;
  std::size_t first_pixel = 0;  // row-major index of the first pixel seen
  std::vector<Cplx> contains_critical_points;
};

struct ComponentAtlas {
  GridSpec grid;
  FamilyParams params;
  int budget = 0;
  std::vector<std::uint8_t> pixel_class;  // row-major, row 0 top
  std::vector<std::uint16_t> escape_steps;  // orbit steps until verdict (capped)
  std::vector<std::int32_t> component_id;
  std::vector<Component> components;
  std::vector<CycleRecord> cycles;
  std::size_t julia_count = 0;
  std::size_t escaping_count = 0;

  [[nodiscard]] double julia_fraction() const {
    return static_cast<double>(julia_count) / static_cast<double>(grid.pixel_count());
  }
  [[nodiscard]] std::uint8_t class_at(int col, int row) const {
    return pixel_class[grid.index(col, row)];
  }
};

namespace detail {

struct PixelSlot {
  OrbitVerdict verdict = OrbitVerdict::BudgetExhausted;
  int period = 0;
  int steps = 0;
  Cplx canon{0.0, 0.0};
  Cplx multiplier{0.0, 0.0};
  bool parabolic = false;
};

inline void classify_rows(const FamilyParams& p, const GridSpec& g, const OrbitConfig& cfg,
                          int row_begin, int row_end, std::vector<PixelSlot>& slots) {
  OrbitClassifier cls(p, cfg);
  for (int r = row_begin; r < row_end; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const OrbitOutcome out = cls.run(g.pixel_center(c, r));
      PixelSlot& s = slots[g.index(c, r)];
      s.verdict = out.verdict;
      s.steps = static_cast<int>(out.steps);
      if (out.cycle) {
        s.period = out.cycle->period;
        s.canon = out.cycle->points.front();
        s.multiplier = out.cycle->multiplier;
        s.parabolic = out.cycle->parabolic_like;
      }
    }
  }
}

[[nodiscard]] inline Cplx canonical_cycle_point(const std::vector<Cplx>& pts) {
  Cplx best = pts.front();
  for (const Cplx& z : pts) {
    if (z.real() < best.real() ||
        (z.real() == best.real() && z.imag() < best.imag())) {
      best = z;
    }
  }
  return best;
}

}  // namespace detail

// threads = 0 picks the hardware concurrency; any value yields the same atlas
[[nodiscard]] inline ComponentAtlas classify_grid(const FamilyParams& p, const GridSpec& g,
                                                  int budget, unsigned threads = 0) {
  if (budget < 100) throw std::invalid_argument("classify_grid: budget must be >= 100");
  const OrbitConfig cfg = default_orbit_config(p, budget);
  const std::size_t n = g.pixel_count();
  std::vector<detail::PixelSlot> slots(n);

  unsigned T = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  T = std::min<unsigned>(T, static_cast<unsigned>(g.rows));
  if (T <= 1) {
    detail::classify_rows(p, g, cfg, 0, g.rows, slots);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(T);
    const int chunk = (g.rows + static_cast<int>(T) - 1) / static_cast<int>(T);
    for (unsigned t = 0; t < T; ++t) {
      const int lo = static_cast<int>(t) * chunk;
      const int hi = std::min(g.rows, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] { detail::classify_rows(p, g, cfg, lo, hi, slots); });
    }
    for (auto& th : pool) th.join();
  }

  ComponentAtlas atlas{g, p, budget, {}, {}, {}, {}, {}, 0, 0};
  atlas.pixel_class.assign(n, kClassJulia);
  atlas.escape_steps.assign(n, 0);
  atlas.component_id.assign(n, -1);

  // serial registration sweep: cycle ids in row-major discovery order
  for (std::size_t i = 0; i < n; ++i) {
    const detail::PixelSlot& s = slots[i];
    atlas.escape_steps[i] =
        static_cast<std::uint16_t>(std::min(s.steps, 65535));
    if (s.verdict == OrbitVerdict::Escaped) {
      atlas.pixel_class[i] = kClassEscaping;
      ++atlas.escaping_count;
    } else if (s.verdict == OrbitVerdict::Attracted || s.verdict == OrbitVerdict::Cycled) {
      int id = -1;
      for (const CycleRecord& rec : atlas.cycles) {
        if (rec.period == s.period && std::abs(rec.points.front() - s.canon) <= kCycleMatchTol) {
          id = rec.id;
          break;
        }
      }
      if (id < 0) {
        if (atlas.cycles.size() >= 253) {
          throw std::runtime_error("classify_grid: more than 253 distinct cycles");
        }
        CycleRecord rec;
        rec.id = static_cast<int>(atlas.cycles.size());
        rec.period = s.period;
        rec.multiplier = s.multiplier;
        rec.parabolic_like = s.parabolic;
        // re-polish the representative so the stored cycle is sharp
        auto pol = polish_periodic(p, s.canon, s.period);
        Cplx z0 = pol ? pol->z : s.canon;
        rec.points.reserve(static_cast<std::size_t>(s.period));
        rec.points.push_back(z0);
        Cplx z = z0;
        for (int j = 1; j < s.period; ++j) {
          z = evaluate(p, z);
          rec.points.push_back(z);
        }
        const Cplx cn = detail::canonical_cycle_point(rec.points);
        while (std::abs(rec.points.front() - cn) > 0.0) {
          std::rotate(rec.points.begin(), rec.points.begin() + 1, rec.points.end());
        }
        id = rec.id;
        atlas.cycles.push_back(std::move(rec));
      }
      atlas.cycles[static_cast<std::size_t>(id)].pixel_count++;
      atlas.pixel_class[i] = static_cast<std::uint8_t>(kClassBasinBase + id);
    } else {
      atlas.pixel_class[i] = kClassJulia;
      ++atlas.julia_count;
    }
  }

  // flood fill, 4-connected, components numbered in row-major discovery order
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (atlas.component_id[seed] >= 0) continue;
    const std::uint8_t label = atlas.pixel_class[seed];
    const std::int32_t id = static_cast<std::int32_t>(atlas.components.size());
    Component comp;
    comp.id = id;
    comp.label = label;
    comp.first_pixel = seed;
    comp.col_min = g.cols;
    comp.row_min = g.rows;
    comp.col_max = -1;
    comp.row_max = -1;
    stack.assign(1, seed);
    atlas.component_id[seed] = id;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int r = static_cast<int>(i) / g.cols;
      const int c = static_cast<int>(i) % g.cols;
      ++comp.pixel_count;
      comp.col_min = std::min(comp.col_min, c);
      comp.col_max = std::max(comp.col_max, c);
      comp.row_min = std::min(comp.row_min, r);
      comp.row_max = std::max(comp.row_max, r);
      if (c == 0 || c == g.cols - 1 || r == 0 || r == g.rows - 1) comp.touches_boundary = true;
      const int nc[4] = {c - 1, c + 1, c, c};
      const int nr[4] = {r, r, r - 1, r + 1};
      for (int k = 0; k < 4; ++k) {
        if (nc[k] < 0 || nc[k] >= g.cols || nr[k] < 0 || nr[k] >= g.rows) continue;
        const std::size_t j = g.index(nc[k], nr[k]);
        if (atlas.component_id[j] >= 0 || atlas.pixel_class[j] != label) continue;
        atlas.component_id[j] = id;
        stack.push_back(j);
      }
    }
    atlas.components.push_back(std::move(comp));
  }

  // critical points pi/2 + k*pi inside the frame, attached to their components
  const int k_lo = static_cast<int>(std::ceil((g.re_lo() - kHalfPi) / kPi));
  const int k_hi = static_cast<int>(std::floor((g.re_hi() - kHalfPi) / kPi));
  for (int k = k_lo; k <= k_hi; ++k) {
    const Cplx cp(kHalfPi + kPi * k, 0.0);
    if (auto px = g.locate(cp)) {
      const std::int32_t id = atlas.component_id[g.index(px->first, px->second)];
      atlas.components[static_cast<std::size_t>(id)].contains_critical_points.push_back(cp);
    }
  }
  return atlas;
}

// --- boundedness verdicts ----------------------------------------------------

enum class Boundedness : int { Bounded, UnboundedSuspected, Undetermined };
enum class BoundednessEvidence : int {
  EnclosedByJuliaRing,
  TouchesFrameAtAllRefinements,
  Inconclusive,
};

struct BoundednessVerdict {
  int component_id = 0;
  Boundedness verdict = Boundedness::Undetermined;
  BoundednessEvidence evidence = BoundednessEvidence::Inconclusive;
  int finest_step = 0;  // last refinement step that was examined
};

namespace detail {

// a basin component is ring-enclosed when it avoids the frame edge and every
// 4-neighbor outside the component is a non-basin pixel; computed for all
// components in one raster sweep
[[nodiscard]] inline std::vector<bool> basin_adjacency(const ComponentAtlas& atlas) {
  std::vector<bool> adjacent(atlas.components.size(), false);
  const GridSpec& g = atlas.grid;
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const std::size_t i = g.index(c, r);
      if (atlas.pixel_class[i] < kClassBasinBase) continue;
      if (c + 1 < g.cols) {
        const std::size_t j = i + 1;
        if (atlas.pixel_class[j] >= kClassBasinBase &&
            atlas.component_id[j] != atlas.component_id[i]) {
          adjacent[static_cast<std::size_t>(atlas.component_id[i])] = true;
          adjacent[static_cast<std::size_t>(atlas.component_id[j])] = true;
        }
      }
      if (r + 1 < g.rows) {
        const std::size_t j = i + static_cast<std::size_t>(g.cols);
        if (atlas.pixel_class[j] >= kClassBasinBase &&
            atlas.component_id[j] != atlas.component_id[i]) {
          adjacent[static_cast<std::size_t>(atlas.component_id[i])] = true;
          adjacent[static_cast<std::size_t>(atlas.component_id[j])] = true;
        }
      }
    }
  }
  return adjacent;
}

[[nodiscard]] inline bool ring_enclosed(const ComponentAtlas& atlas,
                                        const std::vector<bool>& adjacent, int comp_id) {
  const Component& comp = atlas.components[static_cast<std::size_t>(comp_id)];
  return !comp.touches_boundary && !adjacent[static_cast<std::size_t>(comp_id)];
}

// find the component of `ref` in another atlas, requiring a basin pixel whose
// cycle matches `canon`
[[nodiscard]] inline std::optional<int> relocate_basin(const ComponentAtlas& atlas, Cplx ref,
                                                       Cplx canon) {
  const auto px = atlas.grid.locate(ref);
  if (!px) return std::nullopt;
  const std::size_t i = atlas.grid.index(px->first, px->second);
  const std::uint8_t cls = atlas.pixel_class[i];
  if (cls < kClassBasinBase) return std::nullopt;
  const CycleRecord& rec = atlas.cycles[static_cast<std::size_t>(cls - kClassBasinBase)];
  if (std::abs(rec.points.front() - canon) > 10 * kCycleMatchTol) return std::nullopt;
  return static_cast<int>(atlas.component_id[i]);
}

}  // namespace detail

// Verdicts for every basin component.  A component (or its relocation) that is
// ring-enclosed at the base grid and at every examined refinement is bounded;
// one that touches the frame at the base and at every refinement while its
// physical area keeps growing is unbounded-suspected; anything else is
// undetermined.  Refined atlases (frame x1.5, resolution x2 per step) are
// computed once and shared across components.
[[nodiscard]] inline std::vector<BoundednessVerdict> boundedness_verdict(
    const ComponentAtlas& atlas, int refinements, unsigned threads = 0) {
  if (refinements < 1) throw std::invalid_argument("boundedness_verdict: refinements >= 1");
  refinements = std::min(refinements, kMaxRefinementSteps);

  std::vector<int> basin_ids;
  for (const Component& c : atlas.components) {
    if (c.label >= kClassBasinBase) basin_ids.push_back(c.id);
  }
  std::vector<BoundednessVerdict> out;
  out.reserve(basin_ids.size());
  if (basin_ids.empty()) return out;

  const std::vector<bool> base_adj = detail::basin_adjacency(atlas);
  std::vector<ComponentAtlas> refined;          // built lazily, shared
  std::vector<std::vector<bool>> refined_adj;   // parallel to `refined`
  auto ensure_refined = [&](int step) -> const ComponentAtlas& {
    while (static_cast<int>(refined.size()) < step) {
      const int level = static_cast<int>(refined.size()) + 1;
      refined.push_back(
          classify_grid(atlas.params, atlas.grid.refined(level), atlas.budget, threads));
      refined_adj.push_back(detail::basin_adjacency(refined.back()));
    }
    return refined[static_cast<std::size_t>(step - 1)];
  };

  const double base_pixel_area = atlas.grid.dx() * atlas.grid.dy();
  for (int id : basin_ids) {
    const Component& comp = atlas.components[static_cast<std::size_t>(id)];
    const Cplx ref = atlas.grid.pixel_center(
        static_cast<int>(comp.first_pixel) % atlas.grid.cols,
        static_cast<int>(comp.first_pixel) / atlas.grid.cols);
    const Cplx canon =
        atlas.cycles[static_cast<std::size_t>(comp.label - kClassBasinBase)].points.front();

    BoundednessVerdict v;
    v.component_id = id;
    bool enclosed_everywhere = detail::ring_enclosed(atlas, base_adj, id);
    bool touched_everywhere = comp.touches_boundary;
    bool grew_everywhere = true;
    bool lost = false;
    double area = static_cast<double>(comp.pixel_count) * base_pixel_area;

    for (int s = 1; s <= refinements; ++s) {
      const ComponentAtlas& ra = ensure_refined(s);
      v.finest_step = s;
      const auto rid = detail::relocate_basin(ra, ref, canon);
      if (!rid) {
        lost = true;
        break;
      }
      const Component& rc = ra.components[static_cast<std::size_t>(*rid)];
      const bool enc = detail::ring_enclosed(ra, refined_adj[static_cast<std::size_t>(s - 1)], *rid);
      enclosed_everywhere = enclosed_everywhere && enc;
      touched_everywhere = touched_everywhere && rc.touches_boundary;
      const double ra_area =
          static_cast<double>(rc.pixel_count) * ra.grid.dx() * ra.grid.dy();
      grew_everywhere = grew_everywhere && ra_area >= area * kGrowthFactorMin;
      area = ra_area;
      // a component that became enclosed stays under watch at later steps
      if (!enc && !rc.touches_boundary) enclosed_everywhere = false;
    }

    if (!lost && enclosed_everywhere) {
      v.verdict = Boundedness::Bounded;
      v.evidence = BoundednessEvidence::EnclosedByJuliaRing;
    } else if (!lost && touched_everywhere && grew_everywhere) {
      v.verdict = Boundedness::UnboundedSuspected;
      v.evidence = BoundednessEvidence::TouchesFrameAtAllRefinements;
    } else if (!lost && !comp.touches_boundary) {
      // enclosed at base but ring lost under refinement, or vice versa
      v.verdict = Boundedness::Undetermined;
      v.evidence = BoundednessEvidence::Inconclusive;
    } else {
      v.verdict = Boundedness::Undetermined;
      v.evidence = BoundednessEvidence::Inconclusive;
    }
    out.push_back(v);
  }
  return out;
}

// variant for components that are enclosed at the base already and only need
// the base-grid evidence (no refinement atlases): used by fast sanity checks
[[nodiscard]] inline std::vector<BoundednessVerdict> boundedness_verdict_base_only(
    const ComponentAtlas& atlas) {
  const std::vector<bool> adj = detail::basin_adjacency(atlas);
  std::vector<BoundednessVerdict> out;
  for (const Component& c : atlas.components) {
    if (c.label < kClassBasinBase) continue;
    BoundednessVerdict v;
    v.component_id = c.id;
    if (detail::ring_enclosed(atlas, adj, c.id)) {
      v.verdict = Boundedness::Bounded;
      v.evidence = BoundednessEvidence::EnclosedByJuliaRing;
    }
    out.push_back(v);
  }
  return out;
}

// --- critical containment ----------------------------------------------------

struct CriticalContainment {
  int component_id = 0;
  std::vector<Cplx> critical_points;
  bool contains_all_in_frame = false;
};

[[nodiscard]] inline std::vector<CriticalContainment> critical_containment_report(
    const ComponentAtlas& atlas) {
  std::size_t total = 0;
  for (const Component& c : atlas.components) total += c.contains_critical_points.size();
  std::vector<CriticalContainment> out;
  for (const Component& c : atlas.components) {
    if (c.contains_critical_points.empty()) continue;
    CriticalContainment cc;
    cc.component_id = c.id;
    cc.critical_points = c.contains_critical_points;
    cc.contains_all_in_frame = total > 0 && c.contains_critical_points.size() == total;
    out.push_back(std::move(cc));
  }
  return out;
}

// --- disjoint-type evidence ---------------------------------------------------

enum class DisjointType : int { DisjointTypeEvidence, NotDisjointType, Undetermined };

struct DisjointTypeReport {
  DisjointType verdict = DisjointType::Undetermined;
  OrbitVerdict critical_verdicts[2] = {OrbitVerdict::BudgetExhausted,
                                       OrbitVerdict::BudgetExhausted};
  Cplx critical_limits[2] = {{0.0, 0.0}, {0.0, 0.0}};
  Cplx fixed_point{0.0, 0.0};
  double julia_fraction = 0.0;
  std::size_t cycle_count = 0;
  std::string note;
};

// Evidence gathering: both critical values must converge to one common
// attracting fixed point, and a frame around it must show a single basin
// cycle-id with (almost) every non-escaping pixel in it; the julia-like
// fraction allowance covers honest budget exhaustion near basin boundaries.
[[nodiscard]] inline DisjointTypeReport disjoint_type_check(const FamilyParams& p, int budget,
                                                            unsigned threads = 0) {
  DisjointTypeReport rep;
  const SingularData sing = singular_data(p, 0);
  const Cplx cv[2] = {sing.critical_value_plus, sing.critical_value_minus};
  const OrbitConfig cfg = default_orbit_config(p, std::max(budget, 100));
  OrbitClassifier cls(p, cfg);
  bool attracting_fixed[2] = {false, false};
  for (int i = 0; i < 2; ++i) {
    const OrbitOutcome out = cls.run(cv[i]);
    rep.critical_verdicts[i] = out.verdict;
    if (out.verdict == OrbitVerdict::Escaped) {
      rep.verdict = DisjointType::NotDisjointType;
      rep.note = "a critical value escapes";
      return rep;
    }
    if ((out.verdict == OrbitVerdict::Attracted || out.verdict == OrbitVerdict::Cycled) &&
        out.cycle) {
      rep.critical_limits[i] = out.cycle->points.front();
      attracting_fixed[i] = out.cycle->period == 1 && !out.cycle->parabolic_like &&
                            std::abs(out.cycle->multiplier) < 1.0 - kAttractingMargin;
    } else {
      rep.note = "critical orbit budget exhausted";
      return rep;
    }
  }
  if (!attracting_fixed[0] || !attracting_fixed[1]) {
    rep.note = "critical orbits do not reach an attracting fixed point";
    return rep;
  }
  if (std::abs(rep.critical_limits[0] - rep.critical_limits[1]) > kCycleMatchTol) {
    rep.verdict = DisjointType::NotDisjointType;
    rep.note = "critical orbits converge to different limits";
    return rep;
  }
  rep.fixed_point = rep.critical_limits[0];

  const GridSpec g(rep.fixed_point, kTwoPi, kTwoPi, kDisjointAtlasSize, kDisjointAtlasSize);
  const ComponentAtlas atlas = classify_grid(p, g, std::max(budget, 100), threads);
  rep.julia_fraction = atlas.julia_fraction();
  rep.cycle_count = atlas.cycles.size();
  if (atlas.cycles.size() == 1 &&
      std::abs(atlas.cycles.front().points.front() - rep.fixed_point) <= 10 * kCycleMatchTol &&
      rep.julia_fraction <= kDisjointJuliaFracMax) {
    rep.verdict = DisjointType::DisjointTypeEvidence;
  } else {
    rep.note = "atlas shows extra cycles or too many unresolved pixels";
  }
  return rep;
}

// every detected attracting cycle must attract a critical value's orbit
[[nodiscard]] inline bool no_ghost_cycles(const FamilyParams& p, const ComponentAtlas& atlas,
                                          int budget) {
  if (atlas.cycles.empty()) return true;
  const SingularData sing = singular_data(p, 0);
  const Cplx cv[2] = {sing.critical_value_plus, sing.critical_value_minus};
  Cplx limits[2];
  bool have[2] = {false, false};
  const OrbitConfig cfg = default_orbit_config(p, std::max(budget, 100));
  OrbitClassifier cls(p, cfg);
  for (int i = 0; i < 2; ++i) {
    const OrbitOutcome out = cls.run(cv[i]);
    if (out.cycle) {
      limits[i] = out.cycle->points.front();
      have[i] = true;
    }
  }
  for (const CycleRecord& rec : atlas.cycles) {
    bool matched = false;
    for (int i = 0; i < 2; ++i) {
      if (have[i] && std::abs(limits[i] - rec.points.front()) <= 10 * kCycleMatchTol) {
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// --- real interval self-map ----------------------------------------------------

struct IntervalMapCheck {
  double range_lo = 0.0;
  double range_hi = 0.0;
  bool contained = false;
};

// exact range of lambda*sin(x) + a on [lo, hi] via endpoints and interior
// critical points; parameters must be real
[[nodiscard]] inline IntervalMapCheck interval_selfmap_range(const FamilyParams& p, double lo,
                                                             double hi) {
  if (std::fabs(p.lambda.imag()) > kRealAxisTol || std::fabs(p.a.imag()) > kRealAxisTol) {
    throw std::invalid_argument("interval_selfmap_range: parameters must be real");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("interval_selfmap_range: need lo < hi, finite");
  }
  const double L = p.lambda.real(), A = p.a.real();
  auto fx = [&](double x) {
    double s, c;
    sin_cos(x, s, c);
    return L * s + A;
  };
  IntervalMapCheck out;
  out.range_lo = std::min(fx(lo), fx(hi));
  out.range_hi = std::max(fx(lo), fx(hi));
  const int k_lo = static_cast<int>(std::ceil((lo - kHalfPi) / kPi));
  const int k_hi = static_cast<int>(std::floor((hi - kHalfPi) / kPi));
  for (int k = k_lo; k <= k_hi; ++k) {
    const double x = kHalfPi + kPi * k;
    if (x <= lo || x >= hi) continue;
    const double v = fx(x);
    out.range_lo = std::min(out.range_lo, v);
    out.range_hi = std::max(out.range_hi, v);
  }
  out.contained = out.range_lo >= lo - kIntervalSlack && out.range_hi <= hi + kIntervalSlack;
  return out;
}

[[nodiscard]] inline bool interval_selfmap_check(const FamilyParams& p, double lo, double hi) {
  return interval_selfmap_range(p, lo, hi).contained;
}

// --- raster symmetry agreement -------------------------------------------------

enum class SymmetryMode : int { Central, HalfPiReflection };

struct SymmetryAgreement {
  std::size_t compared = 0;
  std::size_t agreed = 0;
  [[nodiscard]] double fraction() const {
    return compared == 0 ? 1.0 : static_cast<double>(agreed) / static_cast<double>(compared);
  }
};

// fraction of pixels whose class matches the class at the point-reflected
// position (through 0, or through pi/2).  Under central symmetry a basin maps
// to the basin of the negated cycle; under the pi/2 reflection z and its
// mirror share an orbit tail, so ids must match exactly.
[[nodiscard]] inline SymmetryAgreement symmetry_agreement(const ComponentAtlas& atlas,
                                                          SymmetryMode mode) {
  const Cplx c = mode == SymmetryMode::Central ? Cplx(0.0, 0.0) : Cplx(kHalfPi, 0.0);
  // cycle correspondence under the reflection
  std::vector<int> corr(atlas.cycles.size(), -1);
  for (std::size_t i = 0; i < atlas.cycles.size(); ++i) {
    if (mode == SymmetryMode::HalfPiReflection) {
      corr[i] = static_cast<int>(i);
      continue;
    }
    std::vector<Cplx> reflected;
    reflected.reserve(atlas.cycles[i].points.size());
    for (const Cplx& z : atlas.cycles[i].points) reflected.push_back(-z);
    const Cplx rc = detail::canonical_cycle_point(reflected);
    for (std::size_t j = 0; j < atlas.cycles.size(); ++j) {
      if (atlas.cycles[j].period == atlas.cycles[i].period &&
          std::abs(atlas.cycles[j].points.front() - rc) <= kSymmetryAgreementTol) {
        corr[i] = static_cast<int>(j);
        break;
      }
    }
  }

  SymmetryAgreement sa;
  const GridSpec& g = atlas.grid;
  for (int r = 0; r < g.rows; ++r) {
    for (int cidx = 0; cidx < g.cols; ++cidx) {
      const Cplx z = g.pixel_center(cidx, r);
      const auto px = g.locate(2.0 * c - z);
      if (!px) continue;
      ++sa.compared;
      const std::uint8_t ca = atlas.class_at(cidx, r);
      const std::uint8_t cb = atlas.class_at(px->first, px->second);
      bool agree;
      if (ca < kClassBasinBase || cb < kClassBasinBase) {
        agree = ca == cb;
      } else {
        const int want = corr[static_cast<std::size_t>(ca - kClassBasinBase)];
        agree = want >= 0 && cb == static_cast<std::uint8_t>(kClassBasinBase + want);
      }
      if (agree) ++sa.agreed;
    }
  }
  return sa;
}

// --- binary raster IO ----------------------------------------------------------
// layout: magic "FATL", u32 cols, u32 rows, f64 re_lo, re_hi, im_lo, im_hi,
// then rows*cols class bytes, row 0 = top; little-endian scalars

static_assert(std::endian::native == std::endian::little,
              "raster layout assumes a little-endian host");

struct RasterData {
  std::uint32_t cols = 0, rows = 0;
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
  std::vector<std::uint8_t> bytes;
};

inline void write_atlas_raster(const ComponentAtlas& atlas, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_atlas_raster: cannot open " + path);
  out.write("FATL", 4);
  const std::uint32_t cols = static_cast<std::uint32_t>(atlas.grid.cols);
  const std::uint32_t rows = static_cast<std::uint32_t>(atlas.grid.rows);
  const double frame[4] = {atlas.grid.re_lo(), atlas.grid.re_hi(), atlas.grid.im_lo(),
                           atlas.grid.im_hi()};
  out.write(reinterpret_cast<const char*>(&cols), 4);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(frame), sizeof frame);
  out.write(reinterpret_cast<const char*>(atlas.pixel_class.data()),
            static_cast<std::streamsize>(atlas.pixel_class.size()));
  if (!out) throw std::runtime_error("write_atlas_raster: write failed for " + path);
}

[[nodiscard]] inline RasterData read_atlas_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_atlas_raster: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FATL", 4) != 0) {
    throw std::runtime_error("read_atlas_raster: bad magic in " + path);
  }
  RasterData rd;
  in.read(reinterpret_cast<char*>(&rd.cols), 4);
  in.read(reinterpret_cast<char*>(&rd.rows), 4);
  double frame[4];
  in.read(reinterpret_cast<char*>(frame), sizeof frame);
  if (!in) throw std::runtime_error("read_atlas_raster: truncated header in " + path);
  rd.re_lo = frame[0];
  rd.re_hi = frame[1];
  rd.im_lo = frame[2];
  rd.im_hi = frame[3];
  rd.bytes.resize(static_cast<std::size_t>(rd.cols) * rd.rows);
  in.read(reinterpret_cast<char*>(rd.bytes.data()),
          static_cast<std::streamsize>(rd.bytes.size()));
  if (!in) throw std::runtime_error("read_atlas_raster: truncated pixels in " + path);
  return rd;
}

}  // namespace sindyn
