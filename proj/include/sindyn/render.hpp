#pragma once

// Deterministic image synthesis from a classified atlas.  Three colorings:
//   escape-time  : escaping pixels shaded by orbit step count, basins dim,
//                  unresolved pixels black
//   basin-id     : basins hued by cycle id (discovery order), escaping pixels
//                  shaded gray by step count, unresolved pixels black
//   binary-julia : white Fatou evidence (basins), black otherwise (escaping
//                  orbits behave like the rest of the Julia set here)
// Overlays draw marked points and polylines (e.g. traced hairs) on top.
// Every path is a pure function of the atlas, so identical jobs produce
// byte-identical images regardless of worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sindyn/atlas.hpp"
#include "sindyn/hair.hpp"

namespace sindyn {

enum class Coloring : int { EscapeTime, BasinId, BinaryJulia };

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct Image {
  int cols = 0, rows = 0;
  std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row 0 top

  void put(int col, int row, Rgb c) {
    const std::size_t i =
        3 * (static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(col));
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
  }
};

struct Overlays {
  std::vector<std::vector<Cplx>> polylines;
  std::vector<Cplx> marked_points;
  Rgb polyline_color{255, 255, 255};
  Rgb marker_color{255, 64, 64};
};

namespace detail {

[[nodiscard]] inline Rgb hsv_to_rgb(double h, double s, double v) {
  h -= std::floor(h);
  const double i = std::floor(h * 6.0);
  const double f = h * 6.0 - i;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - f * s);
  const double t = v * (1.0 - (1.0 - f) * s);
  double r, g, b;
  switch (static_cast<int>(i) % 6) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  auto u8 = [](double x) {
    return static_cast<std::uint8_t>(std::clamp(x * 255.0 + 0.5, 0.0, 255.0));
  };
  return Rgb{u8(r), u8(g), u8(b)};
}

[[nodiscard]] inline Rgb basin_hue(int cycle_id) {
  // golden-ratio hue stepping keeps neighboring ids visually distinct
  const double h = std::fmod(0.12 + 0.61803398874989485 * cycle_id, 1.0);
  return hsv_to_rgb(h, 0.65, 0.95);
}

[[nodiscard]] inline Rgb escape_shade(int steps) {
  const double t = std::log2(1.0 + steps);
  const double r = 0.5 + 0.5 * std::cos(1.8 + 0.55 * t);
  const double g = 0.5 + 0.5 * std::cos(1.2 + 0.50 * t);
  const double b = 0.5 + 0.5 * std::cos(0.4 + 0.45 * t);
  auto u8 = [](double x) {
    return static_cast<std::uint8_t>(std::clamp(x * 255.0 + 0.5, 0.0, 255.0));
  };
  return Rgb{u8(r), u8(g), u8(b)};
}

}  // namespace detail

[[nodiscard]] inline Image render_atlas(const ComponentAtlas& atlas, Coloring coloring,
                                        const Overlays& overlays = {}) {
  const GridSpec& g = atlas.grid;
  Image img;
  img.cols = g.cols;
  img.rows = g.rows;
  img.rgb.assign(3 * g.pixel_count(), 0);

  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const std::size_t i = g.index(c, r);
      const std::uint8_t cls = atlas.pixel_class[i];
      Rgb color{0, 0, 0};
      switch (coloring) {
        case Coloring::EscapeTime:
          if (cls == kClassEscaping) {
            color = detail::escape_shade(atlas.escape_steps[i]);
          } else if (cls >= kClassBasinBase) {
            color = Rgb{40, 40, 48};
          }
          break;
        case Coloring::BasinId:
          if (cls >= kClassBasinBase) {
            color = detail::basin_hue(cls - kClassBasinBase);
          } else if (cls == kClassEscaping) {
            const double t = std::clamp(
                std::log2(1.0 + atlas.escape_steps[i]) / 16.0, 0.0, 1.0);
            const std::uint8_t v = static_cast<std::uint8_t>(90 + 120 * (1.0 - t));
            color = Rgb{v, v, v};
          }
          break;
        case Coloring::BinaryJulia:
          if (cls >= kClassBasinBase) color = Rgb{255, 255, 255};
          break;
      }
      img.put(c, r, color);
    }
  }

  // overlays: polylines sampled at sub-pixel spacing, then marked points
  const double step = std::min(g.dx(), g.dy()) * 0.5;
  for (const auto& line : overlays.polylines) {
    for (std::size_t s = 0; s + 1 < line.size(); ++s) {
      const Cplx a = line[s], b = line[s + 1];
      const double len = std::abs(b - a);
      const int nsub = std::max(1, static_cast<int>(len / step));
      for (int k = 0; k <= nsub; ++k) {
        const Cplx z = a + (b - a) * (static_cast<double>(k) / nsub);
        if (auto px = g.locate(z)) img.put(px->first, px->second, overlays.polyline_color);
      }
    }
  }
  for (const Cplx& m : overlays.marked_points) {
    if (auto px = g.locate(m)) {
      for (int d = -2; d <= 2; ++d) {
        const int c1 = px->first + d, r0 = px->second;
        const int c0 = px->first, r1 = px->second + d;
        if (c1 >= 0 && c1 < g.cols) img.put(c1, r0, overlays.marker_color);
        if (r1 >= 0 && r1 < g.rows) img.put(c0, r1, overlays.marker_color);
      }
    }
  }
  return img;
}

inline void write_p6(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_p6: cannot open " + path);
  out << "P6\n" << img.cols << " " << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
  if (!out) throw std::runtime_error("write_p6: write failed for " + path);
}

struct RenderJob {
  FamilyParams params;
  GridSpec grid;
  Coloring coloring = Coloring::BasinId;
  int budget = kDefaultPixelBudget;
  unsigned threads = 0;
  Overlays overlays;
  std::string output_path;
};

// classify + color + write in one deterministic step; returns the atlas so
// callers can attach reports to the same classification
inline ComponentAtlas run_render_job(const RenderJob& job) {
  ComponentAtlas atlas = classify_grid(job.params, job.grid, job.budget, job.threads);
  const Image img = render_atlas(atlas, job.coloring, job.overlays);
  write_p6(img, job.output_path);
  return atlas;
}

}  // namespace sindyn
