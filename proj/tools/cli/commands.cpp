#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include <skewflow/attractor.hpp>
#include <skewflow/chaos.hpp>
#include <skewflow/csv.hpp>
#include <skewflow/nonlinear.hpp>
#include <skewflow/spectrum.hpp>
#include <skewflow/systems.hpp>

#include "cli/config.hpp"
#include "cli/svg.hpp"

namespace fs = std::filesystem;

namespace skewflow::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> split_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<double> parse_epsilon_list(const std::string& text) {
  if (text.find_first_not_of(" \t") == std::string::npos) throw std::invalid_argument("empty epsilon list");
  if (text.find(':') != std::string::npos) {
    const auto v = split_numbers(text, ':');
    if (v.size() != 3) throw std::invalid_argument("range must be lo:hi:step");
    const double lo = v[0], hi = v[1], step = v[2];
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("empty epsilon range");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) {
      // snap to the step grid so printed values stay clean
      const double e = lo + step * static_cast<double>(k);
      out.push_back(std::abs(e) < 1e-12 * step ? 0.0 : e);
    }
    return out;
  }
  auto v = split_numbers(text, ',');
  if (v.empty()) throw std::invalid_argument("empty epsilon list");
  return v;
}

GridSpec parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw std::invalid_argument("grid must look like 8x16");
  GridSpec g;
  try {
    std::size_t u1 = 0, u2 = 0;
    const auto a = std::stoll(text.substr(0, x), &u1);
    const auto b = std::stoll(text.substr(x + 1), &u2);
    if (u1 != x || u2 != text.size() - x - 1 || a < 1 || b < 1) throw std::invalid_argument("");
    g.points = static_cast<std::size_t>(a);
    g.angles = static_cast<std::size_t>(b);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like 8x16 with positive counts");
  }
  return g;
}

namespace {

struct Common {
  std::string config;
  std::optional<std::string> epsilon;
  std::string grid;
  double horizon{std::numeric_limits<double>::quiet_NaN()};
  std::optional<std::uint64_t> seed;
  bool svg{false};
  std::string out_dir{"."};
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config, "YAML configuration file");
  if (needs_config) opt->required();
  cmd->add_option("--epsilon", c.epsilon, "epsilon value, list a,b,c or range lo:hi:step");
  cmd->add_option("--grid", c.grid, "grid as POINTSxANGLES, e.g. 8x16");
  cmd->add_option("--horizon", c.horizon, "integration horizon");
  cmd->add_option("--seed", c.seed, "PRNG seed");
  cmd->add_flag("--svg", c.svg, "also write SVG plots");
  cmd->add_option("--out-dir", c.out_dir, "output directory (created if missing)");
}

RunConfig load(const Common& c) { return load_config(c.config); }

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string metadata(const RunConfig& cfg, const std::string& command, const std::string& extra) {
  std::ostringstream os;
  os << "command=" << command << " config=" << cfg.name << " hash=" << hex_hash(cfg.hash)
     << " abs_tol=" << format_number(cfg.control.abs_tol) << " rel_tol=" << format_number(cfg.control.rel_tol);
  if (!extra.empty()) os << ' ' << extra;
  return os.str();
}

double single_epsilon(const Common& c, const RunConfig& cfg) {
  if (!c.epsilon) return cfg.family.epsilon();
  const auto v = parse_epsilon_list(*c.epsilon);
  if (v.size() != 1) throw UsageError("--epsilon: this command takes a single value");
  return v.front();
}

std::vector<double> epsilon_values(const Common& c, const RunConfig& cfg) {
  if (!c.epsilon) return {cfg.family.epsilon()};
  return parse_epsilon_list(*c.epsilon);
}

std::vector<TorusPoint> probe_sample(const TorusPoint& base, std::size_t n) {
  std::vector<TorusPoint> out{base};
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> ph(base.phases().begin(), base.phases().end());
    for (std::size_t i = 0; i < ph.size(); ++i) {
      ph[i] += kTwoPi * golden * static_cast<double>(k * (i + 1));
    }
    out.emplace_back(ph);
  }
  return out;
}

std::vector<double> parse_pair(const std::string& s, const char* what, std::size_t n) {
  std::vector<double> v;
  try {
    v = split_numbers(s, ',');
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
  if (n && v.size() != n) throw UsageError(std::string(what) + ": expected " + std::to_string(n) + " values");
  return v;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Common& c, const std::string& y0s, const std::string& phases, Context ctx) {
  const RunConfig cfg = load(c);
  const double eps = single_epsilon(c, cfg);
  const SystemFamily fam = cfg.family.with_epsilon(eps);
  const double horizon = std::isnan(c.horizon) ? cfg.sim_horizon : c.horizon;
  Vec2 y0 = cfg.y0;
  if (!y0s.empty()) {
    const auto v = parse_pair(y0s, "--y0", 2);
    y0 = {v[0], v[1]};
  }
  TorusPoint base = cfg.base_point;
  if (!phases.empty()) base = TorusPoint(parse_pair(phases, "--phases", fam.dimension()));

  NonlinearOptions opts;
  opts.trajectory.control = cfg.control;
  opts.trajectory.output_dt = cfg.output_dt;
  const auto traj = integrate_full(fam, base, y0, horizon, opts);

  const fs::path dir = prepare_dir(c.out_dir);
  std::ostringstream csv;
  std::ostringstream extra;
  extra << "epsilon=" << format_number(eps) << " horizon=" << format_number(horizon)
        << " y0=" << format_number(y0.x) << ';' << format_number(y0.y);
  write_trajectory_csv(csv, traj, metadata(cfg, "simulate", extra.str()));
  write_file(dir / "trajectory.csv", csv.str());
  write_file(dir / "trajectory.json",
             run_summary_json(traj.report, traj.escaped, traj.escape_time, traj.absorption_time) + "\n");
  if (c.svg) {
    Panel p;
    p.title = cfg.name + " eps=" + format_number(eps);
    p.xlabel = "y1";
    p.ylabel = "y2";
    p.equal_aspect = true;
    Series s;
    for (const auto& smp : traj.samples) {
      s.x.push_back(smp.y.x);
      s.y.push_back(smp.y.y);
    }
    p.series.push_back(std::move(s));
    write_file(dir / "trajectory.svg", render_panels({p}));
  }
  const auto& last = traj.back();
  ctx.out << "t=" << format_number(last.t) << " |y|=" << format_number(last.y.norm())
          << " status=" << to_string(traj.report.status) << '\n';
  if (!traj.report.ok()) {
    ctx.err << "integration failed: " << to_string(traj.report.status) << " at t=" << format_number(traj.report.t)
            << " (partial output written)\n";
    return kExitNumeric;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Common& c, Context ctx) {
  const RunConfig cfg = load(c);
  const auto eps_list = epsilon_values(c, cfg);
  ClassifySettings cs = cfg.classify;
  cs.control = cfg.control;
  if (!std::isnan(c.horizon)) cs.horizon = c.horizon;
  const fs::path dir = prepare_dir(c.out_dir);

  std::ostringstream table;
  CsvWriter csv(table);
  csv.comment(metadata(cfg, "spectrum",
                       "horizon=" + format_number(cs.horizon) + " window=" + format_number(cs.window) +
                           " zero_tol=" + format_number(cs.zero_tol)));
  csv.header({"epsilon", "lambda_min", "lambda_max", "lambda_min_error", "lambda_max_error", "label",
              "probe_lo", "probe_hi", "bounded"});
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  const auto sample = probe_sample(cfg.base_point, 4);
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const SystemFamily fam = cfg.family.with_epsilon(eps);
    const CaseLabel label = classify_case(fam, cfg.base_point, cs);
    DichotomySettings ds;
    ds.control = cfg.control;
    const DichotomyProbe probe = dichotomy_probe(fam, sample, ds);
    const auto& s = label.spectrum;
    csv.cell(eps).cell(s.lambda_min).cell(s.lambda_max).cell(s.lambda_min_error).cell(s.lambda_max_error);
    csv.cell(to_string(label.label));
    csv.cell(probe.spectrum_lo.value_or(std::numeric_limits<double>::quiet_NaN()));
    csv.cell(probe.spectrum_hi.value_or(std::numeric_limits<double>::quiet_NaN()));
    csv.cell(label.bounded_probe_run ? (label.all_bounded ? "true" : "false") : "n/a");
    csv.end_row();

    std::ostringstream dcsv;
    write_dichotomy_csv(dcsv, probe.rows,
                        metadata(cfg, "spectrum", "epsilon=" + format_number(eps) +
                                                      " probe_horizon=" + format_number(ds.horizon) +
                                                      " margin=" + format_number(ds.margin)));
    write_file(dir / ("dichotomy_" + std::to_string(i) + ".csv"), dcsv.str());
    auto j = nlohmann::ordered_json::parse(spectrum_summary_json(label));
    j["epsilon"] = eps;
    summary.push_back(j);

    ctx.out << "eps=" << format_number(eps) << " lambda_min=" << format_number(s.lambda_min)
            << " lambda_max=" << format_number(s.lambda_max) << " label=" << to_string(label.label) << '\n';
  }
  write_file(dir / "spectrum.csv", table.str());
  write_file(dir / "spectrum_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- beta-map

GridSpec grid_of(const Common& c, GridSpec fallback) {
  if (c.grid.empty()) return fallback;
  try {
    return parse_grid(c.grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
}

std::vector<TorusPoint> base_grid(std::size_t dim, std::size_t points) {
  double total = std::pow(static_cast<double>(points), static_cast<double>(dim));
  if (total > 65536.0) {
    throw UsageError("--grid: " + std::to_string(points) + "^" + std::to_string(dim) +
                     " base points is too many; lower the points per dimension");
  }
  return torus_grid(dim, points);
}

PullbackSettings pullback_of(const RunConfig& cfg) {
  PullbackSettings s = cfg.pullback;
  return s;
}

Panel section_panel(const AttractorSection& sec, const std::string& title) {
  Panel p;
  p.title = title;
  p.xlabel = "y1";
  p.ylabel = "y2";
  p.equal_aspect = true;
  Series s;
  for (double shift : {0.0, std::numbers::pi}) {
    for (std::size_t i = 0; i < sec.angles.size(); ++i) {
      const double th = sec.angles[i] + shift, b = sec.betas[i].value;
      s.x.push_back(b * std::sin(th));
      s.y.push_back(b * std::cos(th));
    }
  }
  if (!s.x.empty()) {
    s.x.push_back(s.x.front());
    s.y.push_back(s.y.front());
  }
  s.width = 1.5;
  p.series.push_back(std::move(s));
  return p;
}

int cmd_beta_map(const Common& c, Context ctx) {
  const RunConfig cfg = load(c);
  const double eps = single_epsilon(c, cfg);
  const DissipativeConfig dc = make_dissipative(cfg.family.with_epsilon(eps), cfg.delta);
  const GridSpec g = grid_of(c, {cfg.grid_points, cfg.grid_angles});
  const auto bases = base_grid(dc.family.dimension(), g.points);
  const auto angles = projective_angles(g.angles);
  const PullbackSettings ps = pullback_of(cfg);
  const BetaGrid grid = compute_beta_grid(dc, bases, angles, ps);
  const AttractorSection sec = attractor_section(dc, cfg.base_point, angles, ps);

  const fs::path dir = prepare_dir(c.out_dir);
  std::ostringstream extra;
  extra << "epsilon=" << format_number(eps) << " r_rho=" << format_number(dc.r_rho)
        << " grid=" << g.points << 'x' << g.angles << " schedule_max=" << format_number(ps.schedule.back())
        << " pullback_tol=" << format_number(ps.convergence_tol);
  std::ostringstream gcsv, scsv;
  write_beta_grid_csv(gcsv, grid, metadata(cfg, "beta-map", extra.str()));
  write_section_csv(scsv, sec, metadata(cfg, "beta-map", extra.str()));
  write_file(dir / "beta_grid.csv", gcsv.str());
  write_file(dir / "beta_section.csv", scsv.str());
  if (c.svg) {
    write_file(dir / "beta_section.svg",
               render_panels({section_panel(sec, "section at base point, eps=" + format_number(eps))}));
    HeatMap hm;
    hm.title = "beta over base points x angles, eps=" + format_number(eps);
    hm.xlabel = "angle index";
    hm.ylabel = "base point index";
    hm.rows = grid.base_points.size();
    hm.cols = grid.angles.size();
    for (const auto& v : grid.values) hm.values.push_back(v.value);
    write_file(dir / "beta_heat.svg", render_heatmap(hm));
  }
  std::size_t flagged = 0;
  for (const auto& v : grid.values) flagged += v.flags() != "ok";
  ctx.out << "eps=" << format_number(eps) << " r_rho=" << format_number(dc.r_rho)
          << " beta_min=" << format_number(grid.min_value()) << " beta_max=" << format_number(grid.max_value())
          << " flagged=" << flagged << '/' << grid.values.size() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Common& c, Context ctx) {
  const RunConfig cfg = load(c);
  if (!c.epsilon) throw UsageError("sweep: --epsilon lo:hi:step is required");
  const auto eps_list = parse_epsilon_list(*c.epsilon);
  const GridSpec g = grid_of(c, {2, 8});
  const auto bases = base_grid(cfg.family.dimension(), g.points);
  const auto angles = projective_angles(g.angles);
  const PullbackSettings ps = pullback_of(cfg);
  ClassifySettings cs = cfg.classify;
  cs.control = cfg.control;
  if (!std::isnan(c.horizon)) cs.horizon = c.horizon;

  const fs::path dir = prepare_dir(c.out_dir);
  std::ostringstream table;
  CsvWriter csv(table);
  csv.comment(metadata(cfg, "sweep",
                       "grid=" + std::to_string(g.points) + "x" + std::to_string(g.angles) +
                           " spectrum_horizon=" + format_number(cs.horizon) +
                           " schedule_max=" + format_number(ps.schedule.back())));
  csv.header({"epsilon", "beta_min", "beta_max", "label"});
  Series smax, smin;
  smax.color = palette(0);
  smin.color = palette(1);
  smax.markers = smin.markers = true;
  for (double eps : eps_list) {
    const SystemFamily fam = cfg.family.with_epsilon(eps);
    const DissipativeConfig dc = make_dissipative(fam, cfg.delta);
    const BetaGrid grid = compute_beta_grid(dc, bases, angles, ps);
    const CaseLabel label = classify_case(fam, cfg.base_point, cs);
    csv.cell(eps).cell(grid.min_value()).cell(grid.max_value()).cell(to_string(label.label));
    csv.end_row();
    smax.x.push_back(eps);
    smax.y.push_back(grid.max_value());
    smin.x.push_back(eps);
    smin.y.push_back(grid.min_value());
    ctx.out << "eps=" << format_number(eps) << " beta_min=" << format_number(grid.min_value())
            << " beta_max=" << format_number(grid.max_value()) << " label=" << to_string(label.label) << '\n';
  }
  write_file(dir / "sweep.csv", table.str());
  if (c.svg) {
    Panel p;
    p.title = cfg.name + ": attractor boundary vs epsilon";
    p.xlabel = "epsilon";
    p.ylabel = "beta (max blue, min red)";
    p.series = {smax, smin};
    p.ymin = 0.0;
    write_file(dir / "sweep.svg", render_panels({p}, {}, 480.0, 360.0));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- liyorke

int cmd_liyorke(const Common& c, std::size_t pairs_override, bool tracks, Context ctx) {
  const RunConfig cfg = load(c);
  const double eps = single_epsilon(c, cfg);
  const DissipativeConfig dc = make_dissipative(cfg.family.with_epsilon(eps), cfg.delta);
  ScrambleOptions so;
  so.n_pairs = pairs_override ? pairs_override : cfg.pairs;
  so.seed = c.seed.value_or(cfg.seed);
  so.section_angles = cfg.section_angles;
  so.pullback = pullback_of(cfg);
  so.pair.horizon = std::isnan(c.horizon) ? cfg.pair_horizon : c.horizon;
  so.pair.record_track = tracks;
  const ScrambleResult res = scrambled_sample(dc, cfg.base_point, so);

  const fs::path dir = prepare_dir(c.out_dir);
  std::ostringstream extra;
  extra << "epsilon=" << format_number(eps) << " horizon=" << format_number(so.pair.horizon)
        << " seed=" << so.seed << " delta_low=" << format_number(res.thresholds.delta_low)
        << " delta_high=" << format_number(res.thresholds.delta_high);
  const std::string meta = metadata(cfg, "liyorke", extra.str());
  std::ostringstream pcsv;
  write_pairs_summary_csv(pcsv, res, meta);
  write_file(dir / "liyorke_pairs.csv", pcsv.str());
  write_file(dir / "liyorke_summary.json", scramble_summary_json(res) + "\n");
  if (tracks) {
    const fs::path tdir = prepare_dir((dir / "tracks").string());
    for (std::size_t i = 0; i < res.pairs.size(); ++i) {
      std::ostringstream t;
      write_pair_csv(t, res.pairs[i], meta + " pair=" + std::to_string(i));
      char name[32];
      std::snprintf(name, sizeof name, "pair_%04zu.csv", i);
      write_file(tdir / name, t.str());
    }
  }
  if (res.empty_sample) {
    ctx.out << "empty sample: the estimated section is degenerate (beta ~ 0)\n";
    return kExitOk;
  }
  for (std::size_t v = 0; v < kPairVerdictCount; ++v) {
    ctx.out << to_string(static_cast<PairVerdict>(v)) << ' ' << res.histogram[v] << '\n';
  }
  ctx.out << "li_yorke_fraction " << format_number(res.li_yorke_fraction()) << '\n';
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------- figures

std::vector<fs::path> reproduce_figures(const fs::path& out_dir, std::uint64_t seed) {
  const fs::path dir = prepare_dir(out_dir.string());
  std::mt19937_64 rng(seed);
  // shared initial conditions: radii in [0.1, 2], angles on the circle
  std::vector<Vec2> ics;
  for (int k = 0; k < 5; ++k) {
    const double r = 0.1 + 1.9 * unit_interval(rng());
    const double th = kTwoPi * unit_interval(rng());
    ics.push_back({r * std::sin(th), r * std::cos(th)});
  }
  NonlinearOptions opts;
  opts.trajectory.output_dt = 0.02;
  opts.trajectory.control = StepControl{1e-10, 1e-10};
  const double horizon = 60.0;

  auto panel = [&](const SystemFamily& fam, const std::string& title) {
    Panel p;
    p.title = title;
    p.xlabel = "y1";
    p.ylabel = "y2";
    p.equal_aspect = true;
    const TorusPoint base = TorusPoint::origin(fam.dimension());
    for (std::size_t i = 0; i < ics.size(); ++i) {
      const auto traj = integrate_full(fam, base, ics[i], horizon, opts);
      Series s;
      s.color = palette(i);
      for (const auto& smp : traj.samples) {
        s.x.push_back(smp.y.x);
        s.y.push_back(smp.y.y);
      }
      p.series.push_back(std::move(s));
    }
    return p;
  };

  struct Fig {
    const char* file;
    const char* title;
    std::vector<Panel> panels;
  };
  std::vector<Fig> figs;
  figs.push_back({"fig1_autonomous.svg", "Orbits, autonomous case",
                  {panel(systems::autonomous_hopf(-0.15), "eps = -0.15"),
                   panel(systems::autonomous_hopf(0.5), "eps = 0.5")}});
  figs.push_back({"fig2_quasiperiodic.svg", "Projections, quasiperiodic case",
                  {panel(systems::quasiperiodic(-0.15), "eps = -0.15"),
                   panel(systems::quasiperiodic(0.5), "eps = 0.5")}});
  figs.push_back({"fig3_quasiperiodic_rotating.svg", "Projections, quasiperiodic case with rotation",
                  {panel(systems::quasiperiodic_rotating(-0.15), "eps = -0.15"),
                   panel(systems::quasiperiodic_rotating(0.5), "eps = 0.5")}});
  figs.push_back({"fig4_zero.svg", "Projections at eps = 0",
                  {panel(systems::autonomous_hopf(0.0), "autonomous"),
                   panel(systems::quasiperiodic(0.0), "quasiperiodic"),
                   panel(systems::quasiperiodic_rotating(0.0), "quasiperiodic, rotating")}});
  std::vector<fs::path> written;
  for (const auto& f : figs) {
    const fs::path path = dir / f.file;
    write_file(path, render_panels(f.panels, std::string(f.title) + " (seed " + std::to_string(seed) + ")"));
    written.push_back(path);
  }
  return written;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"skewflow: dissipative quasiperiodic skew-product laboratory"};
  app.require_subcommand(1);
  Context ctx{out, err};

  Common sim_c, spec_c, beta_c, sweep_c, ly_c, fig_c;
  std::string y0s, phases;
  std::size_t pairs = 0;
  bool tracks = false;

  auto* sim = app.add_subcommand("simulate", "integrate one solution of the nonlinear system");
  add_common(sim, sim_c, true);
  sim->add_option("--y0", y0s, "initial state y1,y2");
  sim->add_option("--phases", phases, "base point phases p1,p2,...");

  auto* spec = app.add_subcommand("spectrum", "Lyapunov exponents, dichotomy probe and case label per epsilon");
  add_common(spec, spec_c, true);

  auto* beta = app.add_subcommand("beta-map", "pullback attractor boundary on a grid");
  add_common(beta, beta_c, true);

  auto* sweep = app.add_subcommand("sweep", "bifurcation sweep of the attractor boundary over epsilon");
  add_common(sweep, sweep_c, true);

  auto* ly = app.add_subcommand("liyorke", "Li-Yorke pair sampling on the attractor section");
  add_common(ly, ly_c, true);
  ly->add_option("--pairs", pairs, "number of sampled pairs");
  ly->add_flag("--tracks", tracks, "write the distance track of every pair");

  auto* fig = app.add_subcommand("figures", "write the four phase-portrait figures as SVG");
  add_common(fig, fig_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_c, y0s, phases, ctx);
    if (*spec) return cmd_spectrum(spec_c, ctx);
    if (*beta) return cmd_beta_map(beta_c, ctx);
    if (*sweep) return cmd_sweep(sweep_c, ctx);
    if (*ly) return cmd_liyorke(ly_c, pairs, tracks, ctx);
    if (*fig) {
      const auto files = reproduce_figures(fig_c.out_dir, fig_c.seed.value_or(1));
      for (const auto& f : files) out << f.string() << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace skewflow::cli
