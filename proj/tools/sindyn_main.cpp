// sindyn: command-line surface for the sine-family dynamics toolkit.
//
// Subcommands:
//   render  classify a frame and write a P6 pixmap (optionally a FATL raster)
//   verify  run a named property suite; JSON report, exit 0 iff all pass
//   report  emit JSON/CSV records (fixpoints, hairs, atlas, probe)
//
// Exit codes: 0 = success / all checks pass, 1 = verification assertion
// failure, 2 = usage, config, or I/O error.  A key=value config file can
// supply any flag (command-line values win).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sindyn/sindyn.hpp"

namespace {

using sindyn::Cplx;
using sindyn::Json;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

sindyn::GridSpec make_grid(const std::string& frame, const std::string& center,
                           const std::string& width, const std::string& height, int cols,
                           int rows) {
  if (!frame.empty()) {
    const auto parts = split_csv(frame);
    if (parts.size() != 4) {
      throw sindyn::ParseError("--frame wants re_lo,re_hi,im_lo,im_hi");
    }
    const double re_lo = sindyn::parse_real(parts[0]);
    const double re_hi = sindyn::parse_real(parts[1]);
    const double im_lo = sindyn::parse_real(parts[2]);
    const double im_hi = sindyn::parse_real(parts[3]);
    if (rows <= 0) {
      rows = static_cast<int>(std::lround(cols * (im_hi - im_lo) / (re_hi - re_lo)));
    }
    return sindyn::GridSpec::from_frame(re_lo, re_hi, im_lo, im_hi, cols, rows);
  }
  const Cplx c = sindyn::parse_complex(center.empty() ? "0" : center);
  const double w = sindyn::parse_real(width.empty() ? "4pi" : width);
  if (rows <= 0) rows = cols;
  const double h = height.empty() ? w * rows / cols : sindyn::parse_real(height);
  return sindyn::GridSpec(c, w, h, cols, rows);
}

struct SuiteResult {
  Json checks = Json::array();
  bool pass = true;

  void add(const std::string& name, bool ok, Json detail) {
    detail["name"] = name;
    detail["pass"] = ok;
    checks.push_back(std::move(detail));
    pass = pass && ok;
  }
};

// relative scale for identities whose intermediates reach |lambda|*cosh(Im z)
double identity_scale(const sindyn::FamilyParams& p, Cplx z, double magnitude) {
  const double y = std::min(std::fabs(z.imag()), 700.0);
  return 1.0 + magnitude + std::abs(p.lambda) * std::cosh(y);
}

SuiteResult run_symmetry_suite(const sindyn::FamilyParams& p, int trials, std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-20.0, 20.0), im(-20.0, 20.0);
  double worst_half = 0.0, worst_central = 0.0, worst_period = 0.0;
  const bool central_applies =
      std::abs(p.a) == 0.0;  // f(-z) = -f(z) needs a = 0; general form below
  double worst_central_general = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Cplx w(re(rng), im(rng));
    const auto sp = sindyn::symmetry_pair(p, w);
    worst_half = std::max(worst_half, std::abs(sp.left - sp.right) /
                                          identity_scale(p, w, std::abs(sp.left)));
    const Cplx z(re(rng), im(rng));
    const auto cp = sindyn::central_pair(p, z);
    const double cres =
        std::abs(cp.left - cp.right) / identity_scale(p, z, std::abs(cp.left));
    worst_central_general = std::max(worst_central_general, cres);
    if (central_applies) worst_central = std::max(worst_central, cres);
    const int k = static_cast<int>(rng() % 7) - 3;
    const auto pp = sindyn::periodicity_pair(p, z, k);
    worst_period = std::max(worst_period, std::abs(pp.left - pp.right) /
                                              identity_scale(p, z, std::abs(pp.left)));
  }
  res.add("half-pi-reflection", worst_half <= 1e-12, Json{{"max_relative", worst_half}});
  if (central_applies) {
    res.add("central-symmetry", worst_central <= 1e-12, Json{{"max_relative", worst_central}});
  } else {
    res.add("central-symmetry-general-form", worst_central_general <= 1e-12,
            Json{{"max_relative", worst_central_general}});
  }
  res.add("two-pi-periodicity", worst_period <= 1e-12, Json{{"max_relative", worst_period}});
  return res;
}

SuiteResult run_multiplier_suite(const sindyn::FamilyParams& p, int trials,
                                 std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double L2 = std::norm(p.lambda);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double r = 20.0 * std::sqrt(uni(rng));
    const double th = 2.0 * sindyn::kPi * uni(rng);
    const Cplx z(r * std::cos(th), r * std::sin(th));
    worst = std::max(worst, sindyn::identity_defect(p, z));
  }
  const double rel = worst / L2;
  res.add("derivative-identity", rel <= 1e-10,
          Json{{"max_residual_over_lambda_sq", rel}, {"disk", "|z| <= 20"}});

  const sindyn::SearchBox box(-2.0, -2.0, 2.0, 2.0);
  const auto pts = sindyn::solve_fixed_points(p, box, 24);
  Json recs = Json::array();
  bool resid_ok = true;
  for (const auto& r0 : pts) {
    recs.push_back(sindyn::json_periodic_point(r0));
    resid_ok = resid_ok && r0.residual <= sindyn::kRootResidualTol * (1.0 + std::abs(r0.point));
  }
  res.add("fixed-point-residuals", resid_ok,
          Json{{"count", pts.size()}, {"points", recs}, {"box", "[-2,2]x[-2,2]"}});
  return res;
}

SuiteResult run_escape_chain_suite(int N, double c1, int steps, double y0) {
  SuiteResult res;
  if (y0 <= 0.0) y0 = std::asinh(2.0 * c1 * N);
  const sindyn::EscapeChainConfig cfg(N, c1, y0);
  const sindyn::ChainReport rep = sindyn::sinh_chain_verify(cfg, steps);
  res.add("sinh-recursion-chain", rep.all_ok, sindyn::json_chain_report(rep));
  return res;
}

SuiteResult run_extended_induction_suite(const sindyn::FamilyParams& p, double y0, double v0,
                                         double eps, int steps) {
  SuiteResult res;
  const double A = std::abs(p.a);
  const double L = std::abs(p.lambda);
  if (y0 <= 0.0) {
    y0 = std::max({2.2, std::log(std::max(L / std::max(A, 1e-300), 1.0)) + 1.0,
                   std::asinh(3.0 * A) + 0.5});
  }
  if (v0 <= 0.0) v0 = y0 + A + 1.0;
  if (eps <= 0.0) eps = sindyn::default_epsilon(p);
  const sindyn::ExtendedSeedConfig cfg(p, y0, eps, v0);
  const sindyn::InductionReport rep = sindyn::extended_induction_verify(cfg, steps);
  res.add("dominance-induction", rep.all_hold, sindyn::json_induction_report(rep));
  return res;
}

SuiteResult run_hair_suite(const sindyn::FamilyParams& p, const sindyn::Itinerary& itin,
                           int depth, int samples, double start_height) {
  SuiteResult res;
  const sindyn::Hair h = sindyn::trace_hair(p, itin, depth, samples, start_height);
  res.add("trace-completed", !h.truncated, Json{{"generations", h.generations}});
  res.add("hair-landed", h.landing_point.has_value(), sindyn::json_hair(h));
  const double inv = sindyn::hair_forward_invariance_residual(p, h);
  res.add("forward-invariance", inv <= 1e-6, Json{{"max_relative_residual", inv}});
  return res;
}

SuiteResult run_post_singular_suite(const sindyn::FamilyParams& p, long horizon,
                                    double radius) {
  SuiteResult res;
  if (radius <= 0.0) radius = sindyn::default_probe_radius(p);
  const sindyn::PostSingularProbe probe =
      sindyn::post_singular_probe(p, horizon, radius);
  res.add("post-singular-orbits-resolved",
          probe.verdict != sindyn::ProbeVerdict::Undetermined, sindyn::json_probe(probe));
  return res;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sindyn: numerical toolkit for the dynamics of z -> lambda*sin(z) + a\n"
      "exit codes: 0 = pass, 1 = verification failure, 2 = usage/config error"};
  app.set_config("--config", "", "key=value file supplying defaults for any flag");
  app.require_subcommand(1);

  std::string lambda_s, a_s = "0";
  app.add_option("--lambda", lambda_s, "family parameter lambda (expression, e.g. 1.2e^{(83/90)pi i})")
      ->capture_default_str();
  app.add_option("--a", a_s, "family parameter a (expression)")->capture_default_str();
  std::uint64_t seed = sindyn::kDefaultSeed;
  app.add_option("--seed", seed, "RNG seed for randomized suites")->capture_default_str();

  // ---- render ----
  auto* render = app.add_subcommand("render", "classify a frame and write a P6 pixmap");
  std::string frame_s, center_s, width_s, height_s, out_path, raster_path, coloring_s =
      "basin-id";
  int cols = 512, rows = 0, budget = sindyn::kDefaultPixelBudget;
  unsigned threads = 0;
  bool print_report = false;
  std::vector<std::string> hair_specs, mark_specs;
  int hair_depth = sindyn::kDefaultHairDepth, hair_samples = sindyn::kDefaultHairSamples;
  std::string start_height_s = "10";
  render->add_option("--frame", frame_s, "re_lo,re_hi,im_lo,im_hi (expressions)");
  render->add_option("--center", center_s, "frame center (expression)");
  render->add_option("--width", width_s, "frame width (expression)");
  render->add_option("--height", height_s, "frame height (default keeps pixels square)");
  render->add_option("--cols", cols, "raster columns")->capture_default_str();
  render->add_option("--rows", rows, "raster rows (default keeps pixels square)");
  render->add_option("--budget", budget, "orbit step budget per pixel")->capture_default_str();
  render->add_option("--threads", threads, "worker count (0 = auto; result identical)")
      ->capture_default_str();
  render->add_option("--coloring", coloring_s, "escape-time | basin-id | binary-julia")
      ->capture_default_str();
  render->add_option("--out", out_path, "output P6 pixmap path")->required();
  render->add_option("--raster", raster_path, "also write the FATL binary raster here");
  render->add_option("--hair", hair_specs, "overlay a traced hair (itinerary, e.g. 0+)");
  render->add_option("--hair-depth", hair_depth, "pullback rounds for overlay hairs")
      ->capture_default_str();
  render->add_option("--hair-samples", hair_samples, "samples per step for overlay hairs")
      ->capture_default_str();
  render->add_option("--start-height", start_height_s, "seed height for overlay hairs")
      ->capture_default_str();
  render->add_option("--mark", mark_specs, "marked point (expression; repeatable)");
  render->add_flag("--report", print_report, "print the JSON atlas report to stdout");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run a property suite; exit 0 iff all pass");
  std::string suite;
  verify->add_option("--suite", suite,
                     "symmetry | multiplier | escape-chain | extended-induction | hair | "
                     "post-singular")
      ->required();
  int trials = 10000;
  verify->add_option("--trials", trials, "random points for pointwise suites")
      ->capture_default_str();
  int chain_N = 4, chain_steps = 3;
  double chain_c1 = 11.0, chain_y0 = 0.0;
  verify->add_option("--N", chain_N, "strip half-width multiple (escape-chain)")
      ->capture_default_str();
  verify->add_option("--c1", chain_c1, "chain seed constant (escape-chain)")
      ->capture_default_str();
  verify->add_option("--steps", chain_steps, "recursion steps (escape-chain/induction)")
      ->capture_default_str();
  verify->add_option("--y0", chain_y0, "seed height (escape-chain/induction; 0 = derive)");
  double ind_v0 = 0.0, ind_eps = 0.0;
  verify->add_option("--v0", ind_v0, "dominance seed |v0| (extended-induction; 0 = derive)");
  verify->add_option("--epsilon", ind_eps, "slack epsilon (extended-induction; 0 = |a|/2)");
  std::string itin_s = "0+";
  verify->add_option("--itinerary", itin_s, "hair itinerary (hair suite)")
      ->capture_default_str();
  int vdepth = sindyn::kDefaultHairDepth, vsamples = sindyn::kDefaultHairSamples;
  verify->add_option("--depth", vdepth, "pullback rounds (hair suite)")->capture_default_str();
  verify->add_option("--samples", vsamples, "samples per step (hair suite)")
      ->capture_default_str();
  std::string vheight_s = "10";
  verify->add_option("--start-height", vheight_s, "seed height (hair suite)")
      ->capture_default_str();
  long horizon = sindyn::kDefaultProbeHorizon;
  double probe_radius = 0.0;
  verify->add_option("--horizon", horizon, "iteration horizon (post-singular)")
      ->capture_default_str();
  verify->add_option("--radius", probe_radius, "boundedness radius (post-singular; 0 = auto)");

  // ---- report ----
  auto* report = app.add_subcommand("report", "emit JSON/CSV records on stdout");
  std::string kind, box_s = "-2,-2,2,2";
  report->add_option("--kind", kind, "fixpoints | hairs | atlas | probe")->required();
  report->add_option("--box", box_s, "re_lo,im_lo,re_hi,im_hi search box (fixpoints)")
      ->capture_default_str();
  int period = 1, grid_n = 24;
  report->add_option("--period", period, "cycle period to search (fixpoints)")
      ->capture_default_str();
  report->add_option("--grid", grid_n, "seed grid per box side (fixpoints)")
      ->capture_default_str();
  std::string r_itin_s = "0+";
  report->add_option("--itinerary", r_itin_s, "hair itinerary (hairs)")->capture_default_str();
  int r_depth = sindyn::kDefaultHairDepth, r_samples = sindyn::kDefaultHairSamples;
  report->add_option("--depth", r_depth, "pullback rounds (hairs)")->capture_default_str();
  report->add_option("--samples", r_samples, "samples per step (hairs)")->capture_default_str();
  std::string r_height_s = "10";
  report->add_option("--start-height", r_height_s, "seed height (hairs)")
      ->capture_default_str();
  bool hairs_json = false;
  report->add_flag("--json", hairs_json, "hairs: JSON summary instead of CSV polyline");
  std::string r_frame_s, r_center_s, r_width_s, r_height_frame_s, r_raster_path;
  int r_cols = 256, r_rows = 0, r_budget = sindyn::kDefaultPixelBudget;
  unsigned r_threads = 0;
  report->add_option("--frame", r_frame_s, "re_lo,re_hi,im_lo,im_hi (atlas)");
  report->add_option("--center", r_center_s, "frame center (atlas)");
  report->add_option("--width", r_width_s, "frame width (atlas)");
  report->add_option("--height", r_height_frame_s, "frame height (atlas)");
  report->add_option("--cols", r_cols, "raster columns (atlas)")->capture_default_str();
  report->add_option("--rows", r_rows, "raster rows (atlas)");
  report->add_option("--budget", r_budget, "orbit budget (atlas)")->capture_default_str();
  report->add_option("--threads", r_threads, "worker count (atlas)");
  report->add_option("--raster", r_raster_path, "also write the FATL raster (atlas)");
  long r_horizon = sindyn::kDefaultProbeHorizon;
  double r_radius = 0.0;
  int k_window = 0;
  report->add_option("--horizon", r_horizon, "iteration horizon (probe)")
      ->capture_default_str();
  report->add_option("--radius", r_radius, "boundedness radius (probe; 0 = auto)");
  report->add_option("--k-window", k_window, "extra critical-point seeds +-k (probe)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    const bool needs_params = !render->parsed() ||
                              true;  // every subcommand can use lambda/a; default a = 0
    (void)needs_params;
    if (lambda_s.empty() && (render->parsed() || verify->parsed() || report->parsed())) {
      // escape-chain is parameter-free; everything else needs lambda
      if (!(verify->parsed() && suite == "escape-chain")) {
        std::cerr << "--lambda is required\n";
        return 2;
      }
      lambda_s = "1";  // placeholder for the parameter-free suite
    }
    const sindyn::FamilyParams p(sindyn::parse_complex(lambda_s),
                                 sindyn::parse_complex(a_s));

    if (render->parsed()) {
      sindyn::RenderJob job{p,
                            make_grid(frame_s, center_s, width_s, height_s, cols, rows),
                            sindyn::Coloring::BasinId,
                            budget,
                            threads,
                            {},
                            out_path};
      if (coloring_s == "escape-time") {
        job.coloring = sindyn::Coloring::EscapeTime;
      } else if (coloring_s == "basin-id") {
        job.coloring = sindyn::Coloring::BasinId;
      } else if (coloring_s == "binary-julia") {
        job.coloring = sindyn::Coloring::BinaryJulia;
      } else {
        std::cerr << "unknown coloring '" << coloring_s << "'\n";
        return 2;
      }
      const double start_height = sindyn::parse_real(start_height_s);
      for (const std::string& hs : hair_specs) {
        const sindyn::Hair h = sindyn::trace_hair(p, sindyn::parse_itinerary(hs), hair_depth,
                                                  hair_samples, start_height);
        job.overlays.polylines.push_back(h.points);
        if (h.landing_point) job.overlays.marked_points.push_back(*h.landing_point);
      }
      for (const std::string& ms : mark_specs) {
        job.overlays.marked_points.push_back(sindyn::parse_complex(ms));
      }
      const sindyn::ComponentAtlas atlas = sindyn::run_render_job(job);
      if (!raster_path.empty()) sindyn::write_atlas_raster(atlas, raster_path);
      if (print_report) {
        Json j = sindyn::json_atlas(atlas);
        j["command"] = "render";
        j["output"] = out_path;
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }

    if (verify->parsed()) {
      SuiteResult res;
      if (suite == "symmetry") {
        res = run_symmetry_suite(p, trials, seed);
      } else if (suite == "multiplier") {
        res = run_multiplier_suite(p, trials, seed);
      } else if (suite == "escape-chain") {
        res = run_escape_chain_suite(chain_N, chain_c1, chain_steps, chain_y0);
      } else if (suite == "extended-induction") {
        res = run_extended_induction_suite(p, chain_y0, ind_v0, ind_eps,
                                           std::max(chain_steps, 3));
      } else if (suite == "hair") {
        res = run_hair_suite(p, sindyn::parse_itinerary(itin_s), vdepth, vsamples,
                             sindyn::parse_real(vheight_s));
      } else if (suite == "post-singular") {
        res = run_post_singular_suite(p, horizon, probe_radius);
      } else {
        std::cerr << "unknown suite '" << suite << "'\n";
        return 2;
      }
      Json j{{"command", "verify"},
             {"suite", suite},
             {"params", sindyn::json_params(p)},
             {"seed", seed},
             {"checks", res.checks},
             {"pass", res.pass}};
      std::cout << j.dump(2) << "\n";
      return res.pass ? 0 : 1;
    }

    if (report->parsed()) {
      if (kind == "fixpoints") {
        const auto parts = split_csv(box_s);
        if (parts.size() != 4) {
          std::cerr << "--box wants re_lo,im_lo,re_hi,im_hi\n";
          return 2;
        }
        const sindyn::SearchBox box(sindyn::parse_real(parts[0]), sindyn::parse_real(parts[1]),
                                    sindyn::parse_real(parts[2]), sindyn::parse_real(parts[3]));
        const auto pts = sindyn::solve_periodic_points(p, period, box, grid_n);
        Json recs = Json::array();
        for (const auto& r : pts) recs.push_back(sindyn::json_periodic_point(r));
        Json j{{"command", "report"},
               {"kind", "fixpoints"},
               {"params", sindyn::json_params(p)},
               {"period", period},
               {"box", Json::array({box.re_lo, box.im_lo, box.re_hi, box.im_hi})},
               {"points", recs}};
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      if (kind == "hairs") {
        const sindyn::Hair h =
            sindyn::trace_hair(p, sindyn::parse_itinerary(r_itin_s), r_depth, r_samples,
                               sindyn::parse_real(r_height_s));
        if (hairs_json) {
          Json j{{"command", "report"},
                 {"kind", "hairs"},
                 {"params", sindyn::json_params(p)},
                 {"hair", sindyn::json_hair(h)}};
          std::cout << j.dump(2) << "\n";
        } else {
          sindyn::write_hair_csv(h, std::cout);
        }
        return 0;
      }
      if (kind == "atlas") {
        const sindyn::GridSpec g =
            make_grid(r_frame_s, r_center_s, r_width_s, r_height_frame_s, r_cols, r_rows);
        const sindyn::ComponentAtlas atlas =
            sindyn::classify_grid(p, g, r_budget, r_threads);
        if (!r_raster_path.empty()) sindyn::write_atlas_raster(atlas, r_raster_path);
        Json j = sindyn::json_atlas(atlas);
        j["command"] = "report";
        j["kind"] = "atlas";
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      if (kind == "probe") {
        if (r_radius <= 0.0) r_radius = sindyn::default_probe_radius(p);
        const sindyn::PostSingularProbe probe =
            sindyn::post_singular_probe(p, r_horizon, r_radius, k_window);
        Json j = sindyn::json_probe(probe);
        j["command"] = "report";
        j["kind"] = "probe";
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      std::cerr << "unknown report kind '" << kind << "'\n";
      return 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
