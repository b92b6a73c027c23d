#include "roughhj/lab.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace roughhj::lab {

namespace {

using Json = nlohmann::ordered_json;

double run_clock(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict check_le(const std::string& name, double measured, double threshold) {
  return Verdict{name, measured <= threshold, measured, threshold, "<="};
}

Verdict check_ge(const std::string& name, double measured, double threshold) {
  return Verdict{name, measured >= threshold, measured, threshold, ">="};
}

// Ratio verdicts for a refinement ladder: every successive difference (or
// deviation) must shrink by at least the given factor, with an absolute
// floor below which shrinking is considered achieved.
void ladder_ratio_verdicts(Report& rep, const std::string& prefix,
                           const std::vector<double>& values, double ratio, double floor) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double limit = ratio * values[i - 1] + floor;
    rep.verdicts.push_back(check_le(prefix + "_shrink_" + std::to_string(i), values[i], limit));
  }
}

// Largest |a - b| over nodes within the per-axis box of the given radius.
double sup_diff_box(const GridFunction<double>& a, const GridFunction<double>& b, double radius) {
  const Grid<double>& g = a.grid;
  const Index c = g.center();
  const Index k = static_cast<Index>(std::floor(radius / g.dx + 1e-9));
  const Index lo = std::max<Index>(0, c - k), hi = std::min<Index>(g.nodes() - 1, c + k);
  double sup = 0;
  if (g.dim == 1) {
    for (Index i = lo; i <= hi; ++i)
      sup = std::max(sup, std::abs(a.values(i, 0) - b.values(i, 0)));
    return sup;
  }
  for (Index j = lo; j <= hi; ++j)
    for (Index i = lo; i <= hi; ++i)
      sup = std::max(sup, std::abs(a.values(i, j) - b.values(i, j)));
  return sup;
}

// Largest |f - value| over nodes within the Euclidean ball of the given radius.
double sup_dev_ball(const GridFunction<double>& f, double value, double radius) {
  const Grid<double>& g = f.grid;
  const Index n = g.nodes();
  double sup = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      if (std::hypot(g.coord(i), g.coord(j)) > radius) continue;
      sup = std::max(sup, std::abs(f.values(i, j) - value));
    }
  return sup;
}

// Half-width that covers the observation radius plus the numerical domain of
// dependence of this run.
double auto_half_width(const DrivingPath<double>& path, const HamiltonianSpec<double>& h,
                       const SolveConfig<double>& cfg, double dx, double obs) {
  return obs + dependence_radius(path, h, cfg, dx) + 2 * dx;
}

void check_budget(const ExperimentSpec& spec, double estimated_node_updates) {
  const double budget = spec.tolerance("budget_node_updates", 4e9);
  if (estimated_node_updates > budget)
    throw ConfigError("experiment exceeds the configured budget (" +
                      std::to_string(estimated_node_updates) + " node updates, budget " +
                      std::to_string(budget) + ")");
}

double morph_update_estimate(const DrivingPath<double>& path, int m, double L, double dx) {
  const double nodes = 2 * std::llround(L / dx) + 1;
  double subs = 0;
  for (const auto& seg : monotone_decomposition(path))
    subs += std::ceil(m * std::abs(seg.delta));
  return nodes * nodes * std::max(1.0, subs);
}

double lf_update_estimate(const DrivingPath<double>& path, double cfl, double L, double dx) {
  const double nodes = 2 * std::llround(L / dx) + 1;
  const double steps = total_variation(path) / (cfl * dx) + 4;
  return nodes * nodes * steps;
}

SolveConfig<double> solve_config(const ExperimentSpec& spec) {
  SolveConfig<double> cfg;
  cfg.engine = engine_from_name(spec.engine);
  cfg.cfl = spec.cfl;
  cfg.substeps_per_unit_variation = spec.m;
  cfg.ordering = ordering_from_name(spec.ordering);
  return cfg;
}

double origin_value(const GridFunction<double>& u0, const DrivingPath<double>& path,
                    const HamiltonianSpec<double>& h, const SolveConfig<double>& cfg) {
  return solve_value_at(u0, path, h, cfg, {{0.0, 0.0}})[0];
}

std::vector<double> ladder_or(const ExperimentSpec& spec, std::initializer_list<double> dflt) {
  if (!spec.ladder.empty()) return spec.ladder;
  return std::vector<double>(dflt);
}

void run_theorem1(const ExperimentSpec& spec, Report& rep) {
  const auto path = path_from_json(spec.path_spec);
  const auto h = h_saddle<double>();
  const double bound = partition_bound(path, spec.R);
  rep.measurements["partition_bound"] = bound;
  rep.measurements["total_variation"] = total_variation(path);
  rep.measurements["R"] = spec.R;

  if (bound == 0.0) {
    rep.measurements["note"] = "bound is 0; nothing to verify";
    rep.verdicts.push_back(
        Verdict{"bound_positive", spec.vacuous_pass, bound, 0.0, spec.vacuous_pass ? ">=" : ">"});
    return;
  }

  SolveConfig<double> cfg = solve_config(spec);
  const auto ladder = ladder_or(spec, {0.04, 0.02, 0.01});
  std::vector<double> values;
  for (const double dx : ladder) {
    const double L = spec.L > 0 ? spec.L : auto_half_width(path, h, cfg, dx, 0.0);
    check_budget(spec, morph_update_estimate(path, spec.m, L, dx));
    Grid<double> grid{2, L, dx};
    const auto u0 = bump_ic(grid, spec.R);
    values.push_back(origin_value(u0, path, h, cfg));
    if (dx == ladder.back()) {
      const auto res = evolve(u0, path, h, cfg);
      rep.slices.emplace_back("final_finest", res.final);
    }
  }
  rep.measurements["ladder_dx"] = ladder;
  rep.measurements["value_at_origin"] = values;
  std::vector<double> diffs;
  for (std::size_t i = 1; i < values.size(); ++i)
    diffs.push_back(std::abs(values[i] - values[i - 1]));
  rep.measurements["ladder_differences"] = diffs;

  rep.verdicts.push_back(check_ge("finest_value", values.back(),
                                  spec.tolerance("theorem1_min_value", 0.65)));
  double vmin = values[0];
  for (const double v : values) vmin = std::min(vmin, v);
  rep.verdicts.push_back(
      check_ge("all_ladder_values_positive", vmin, spec.tolerance("positivity_floor", 1e-6)));
  ladder_ratio_verdicts(rep, "ladder_difference", diffs, spec.tolerance("ladder_ratio", 0.8),
                        spec.tolerance("ratio_floor", 1e-12));
}

void run_separation(const ExperimentSpec& spec, Report& rep) {
  const auto path = path_from_json(spec.path_spec);
  const auto h = h_saddle<double>();
  const double bound = partition_bound(path, spec.R);
  SolveConfig<double> cfg = solve_config(spec);
  const double dx = spec.dx > 0 ? spec.dx : 0.01;
  const double L = spec.L > 0 ? spec.L : auto_half_width(path, h, cfg, dx, 0.0);
  check_budget(spec, 2 * morph_update_estimate(path, spec.m, L, dx));
  Grid<double> grid{2, L, dx};

  const double v1 = origin_value(bump_ic(grid, spec.R), path, h, cfg);
  const double v2 = origin_value(abs_diff_ic(grid), path, h, cfg);
  rep.measurements["partition_bound"] = bound;
  rep.measurements["coincidence_radius"] = spec.R - 1;
  rep.measurements["u1_at_origin"] = v1;
  rep.measurements["u2_at_origin"] = v2;
  rep.measurements["separation"] = v1 - v2;

  rep.verdicts.push_back(check_le("u2_stationary_at_origin", std::abs(v2),
                                  spec.tolerance("exact", 1e-12)));
  if (bound == 0.0) {
    rep.measurements["note"] = "bound is 0; nothing to verify";
    rep.verdicts.push_back(
        Verdict{"bound_positive", spec.vacuous_pass, bound, 0.0, spec.vacuous_pass ? ">=" : ">"});
  } else {
    rep.verdicts.push_back(
        check_ge("separation_positive", v1 - v2, spec.tolerance("positivity_floor", 1e-6)));
  }
}

void run_stationary(const ExperimentSpec& spec, Report& rep) {
  const auto path = path_from_json(spec.path_spec);
  const auto h = h_saddle<double>();
  const double obs = 0.5;

  SolveConfig<double> morph;
  morph.engine = Engine::Morphological;
  morph.substeps_per_unit_variation = spec.m;
  morph.ordering = ordering_from_name(spec.ordering);
  morph.observation_radius = obs;
  const double dxm = spec.dx > 0 ? spec.dx : 0.02;
  {
    const double L = auto_half_width(path, h, morph, dxm, obs);
    check_budget(spec, morph_update_estimate(path, spec.m, L, dxm));
    Grid<double> grid{2, L, dxm};
    const auto u0 = abs_diff_ic(grid);
    const auto res = evolve(u0, path, h, morph);
    const double dev = sup_diff_box(res.final, u0, res.trusted_half_width);
    rep.measurements["morphological_dx"] = dxm;
    rep.measurements["morphological_sup_deviation"] = dev;
    rep.verdicts.push_back(
        check_le("morphological_stationary", dev, spec.tolerance("exact", 1e-12)));
  }

  SolveConfig<double> lf;
  lf.engine = Engine::LaxFriedrichs;
  lf.cfl = spec.cfl > 0 ? spec.cfl : 0.4;
  lf.observation_radius = obs;
  const auto ladder = ladder_or(spec, {0.08, 0.04, 0.02});
  std::vector<double> devs;
  for (const double dx : ladder) {
    const double L = auto_half_width(path, h, lf, dx, obs);
    check_budget(spec, lf_update_estimate(path, lf.cfl, L, dx));
    Grid<double> grid{2, L, dx};
    const auto u0 = abs_diff_ic(grid);
    const auto res = evolve(u0, path, h, lf);
    devs.push_back(sup_diff_box(res.final, u0, res.trusted_half_width));
  }
  rep.measurements["lf_ladder_dx"] = ladder;
  rep.measurements["lf_sup_deviation"] = devs;
  ladder_ratio_verdicts(rep, "lf_deviation", devs, spec.tolerance("lf_ratio", 0.8),
                        spec.tolerance("ratio_floor", 1e-12));
}

void run_constant_ball(const ExperimentSpec& spec, Report& rep) {
  const auto path = path_from_json(spec.path_spec);
  const auto h = h_saddle<double>();
  SolveConfig<double> cfg = solve_config(spec);
  cfg.observation_radius = spec.R;
  const double dx = spec.dx > 0 ? spec.dx : 0.05;
  const double L = spec.L > 0 ? spec.L : auto_half_width(path, h, cfg, dx, spec.R);
  check_budget(spec, 4 * morph_update_estimate(path, spec.m, L, dx));
  Grid<double> grid{2, L, dx};
  const auto u0 = cone_ic(grid, spec.A, spec.R, spec.K);

  std::vector<double> times, radii, devs;
  for (const auto& seg : monotone_decomposition(path)) {
    const double t = seg.t_end;
    const auto prefix = truncate(path, t);
    const auto res = evolve(u0, prefix, h, cfg);
    const double radius = spec.R - spec.C * oscillation(path, t);
    times.push_back(t);
    radii.push_back(radius);
    devs.push_back(radius > 0 ? sup_dev_ball(res.final, spec.A, radius) : 0.0);
  }
  rep.measurements["times"] = times;
  rep.measurements["ball_radii"] = radii;
  rep.measurements["sup_deviation_from_A"] = devs;
  for (std::size_t i = 0; i < devs.size(); ++i)
    rep.verdicts.push_back(check_le("constant_on_ball_" + std::to_string(i), devs[i],
                                    spec.tolerance("exact", 1e-12)));
}

void run_cancellation(const ExperimentSpec& spec, Report& rep) {
  const double d = spec.delta;
  if (!(d > 0)) throw ConfigError("cancellation needs a positive delta");

  // Window-algebra identity, checked bit-exactly on random arrays.
  std::mt19937 gen(12345);
  std::uniform_int_distribution<int> len_dist(2, 64), rad_dist(0, 8);
  std::uniform_real_distribution<double> val_dist(-1.0, 1.0);
  int failures = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const Index n = len_dist(gen);
    const Index k = rad_dist(gen);
    ArrayX<double> a(n);
    for (Index i = 0; i < n; ++i) a(i) = val_dist(gen);
    const ArrayX<double> dil = window_max(a, k);
    const ArrayX<double> ded = window_max(window_min(dil, k), k);
    if (!(ded == dil).all()) ++failures;
  }
  rep.measurements["identity_trials"] = trials;
  rep.measurements["identity_failures"] = failures;
  rep.verdicts.push_back(check_le("discrete_identity_bit_exact", failures, 0));

  // Semigroup composition at the solver level: three legs up/down/up of
  // variation delta against a single up leg.
  const auto path3 = DrivingPath<double>::from_knots({{0, 0}, {1, d}, {2, 0}, {3, d}});
  const auto path1 = DrivingPath<double>::from_knots({{0, 0}, {1, d}});
  const auto h = h_abs_1d<double>();
  const double obs = 1.5;

  SolveConfig<double> morph;
  morph.engine = Engine::Morphological;
  morph.observation_radius = obs;
  {
    const double dxm = spec.dx > 0 ? spec.dx : 0.01;
    const double L = auto_half_width(path3, h, morph, dxm, obs);
    Grid<double> grid{1, L, dxm};
    const auto u0 = hat_ic(grid);
    const auto u3 = evolve(u0, path3, h, morph);
    const auto u1 = evolve(u0, path1, h, morph);
    const double dev = sup_diff_box(u3.final, u1.final, u3.trusted_half_width);
    rep.measurements["morphological_dx"] = dxm;
    rep.measurements["morphological_sup_difference"] = dev;
    rep.verdicts.push_back(
        check_le("morphological_composition", dev, spec.tolerance("exact", 1e-12)));
  }

  SolveConfig<double> lf;
  lf.engine = Engine::LaxFriedrichs;
  lf.cfl = spec.cfl > 0 ? spec.cfl : 0.4;
  lf.observation_radius = obs;
  const auto ladder = ladder_or(spec, {0.02, 0.01, 0.005});
  std::vector<double> devs;
  for (const double dx : ladder) {
    const double L = auto_half_width(path3, h, lf, dx, obs);
    Grid<double> grid{1, L, dx};
    const auto u0 = hat_ic(grid);
    const auto u3 = evolve(u0, path3, h, lf);
    const auto u1 = evolve(u0, path1, h, lf);
    devs.push_back(sup_diff_box(u3.final, u1.final, u3.trusted_half_width));
  }
  rep.measurements["lf_ladder_dx"] = ladder;
  rep.measurements["lf_sup_difference"] = devs;
  ladder_ratio_verdicts(rep, "lf_composition", devs, spec.tolerance("lf_ratio", 0.8),
                        spec.tolerance("ratio_floor", 1e-12));
}

void run_classical_speed(const ExperimentSpec& spec, Report& rep) {
  const auto path = path_from_json(spec.path_spec);
  const auto h = h_saddle<double>();
  SolveConfig<double> cfg = solve_config(spec);
  cfg.observation_radius = spec.R;
  const double dx = spec.dx > 0 ? spec.dx : 0.025;
  const double L = spec.L > 0 ? spec.L : auto_half_width(path, h, cfg, dx, spec.R + 1);
  check_budget(spec, 4 * morph_update_estimate(path, spec.m, L, dx));
  Grid<double> grid{2, L, dx};

  // Both data coincide on {min(x,y) <= R}, hence on the ball B(R).
  const auto u1 = abs_diff_ic(grid);
  const auto u2 = bump_ic(grid, spec.R + 1);
  const double margin = spec.tolerance("speed_margin_cells", 1.0) * dx;

  const double T = path.horizon();
  const std::vector<double> ts{T / 2, T};
  std::vector<double> radii, devs;
  for (const double t : ts) {
    const auto prefix = truncate(path, t);
    const auto r1 = evolve(u1, prefix, h, cfg);
    const auto r2 = evolve(u2, prefix, h, cfg);
    const double radius = spec.R - spec.C * t - margin;
    radii.push_back(radius);
    double dev = 0;
    const Index n = grid.nodes();
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        if (std::hypot(grid.coord(i), grid.coord(j)) > radius) continue;
        dev = std::max(dev, std::abs(r1.final.values(i, j) - r2.final.values(i, j)));
      }
    devs.push_back(dev);
  }
  rep.measurements["times"] = ts;
  rep.measurements["ball_radii"] = radii;
  rep.measurements["sup_difference"] = devs;
  for (std::size_t i = 0; i < devs.size(); ++i)
    rep.verdicts.push_back(check_le("agreement_on_ball_" + std::to_string(i), devs[i],
                                    spec.tolerance("exact", 1e-12)));
}

void run_crosscheck(const ExperimentSpec& spec, Report& rep) {
  const auto path = path_from_json(spec.path_spec);
  const auto h = h_saddle<double>();
  const double L = spec.L > 0 ? spec.L : 4.0;
  const double dx0 = spec.dx > 0 ? spec.dx : 0.05;

  const auto gap_at = [&](double dx, int substeps, int m) {
    Grid<double> grid{2, L, dx};
    const auto g = bump_ic(grid, spec.R);
    GameConfig<double> gcfg{grid, substeps, spec.levels, g};
    gcfg.store_slices = false;
    const double v_game = dp_value(path, gcfg).value_at_origin();
    SolveConfig<double> scfg;
    scfg.engine = Engine::Morphological;
    scfg.substeps_per_unit_variation = m;
    const double v_pde = origin_value(g, time_reverse(path), h, scfg);
    return std::array<double, 3>{std::abs(v_game - v_pde), v_game, v_pde};
  };

  const auto coarse = gap_at(dx0, spec.substeps, spec.m);
  const auto fine = gap_at(dx0 / 2, 2 * spec.substeps, 2 * spec.m);
  rep.measurements["dx"] = std::vector<double>{dx0, dx0 / 2};
  rep.measurements["game_value"] = std::vector<double>{coarse[1], fine[1]};
  rep.measurements["pde_value"] = std::vector<double>{coarse[2], fine[2]};
  rep.measurements["gap"] = std::vector<double>{coarse[0], fine[0]};
  rep.verdicts.push_back(check_le("gap_coarse", coarse[0], spec.tolerance("crosscheck_gap", 0.1)));
  rep.verdicts.push_back(check_le("gap_shrinks", fine[0],
                                  spec.tolerance("crosscheck_ratio", 0.9) * coarse[0] +
                                      spec.tolerance("ratio_floor", 1e-12)));
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

nlohmann::ordered_json Report::to_json(bool include_timings) const {
  Json j;
  j["experiment"] = experiment;
  j["config"] = config;
  j["measurements"] = measurements;
  Json vs = Json::array();
  for (const auto& v : verdicts) {
    Json e;
    e["name"] = v.name;
    e["pass"] = v.pass;
    e["measured"] = v.measured;
    e["threshold"] = v.threshold;
    e["relation"] = v.relation;
    vs.push_back(e);
  }
  j["verdicts"] = vs;
  j["pass"] = all_pass();
  j["sampled_path_evidence"] = sampled_path_evidence;
  if (include_timings) j["runtime_seconds"] = wall_seconds;
  return j;
}

ExperimentSpec default_spec(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "theorem1") {
    s.path_spec = path_spec_from_dsl("zigzag:1,4,1");
    s.R = 1;
    s.ladder = {0.04, 0.02, 0.01};
  } else if (name == "separation") {
    s.path_spec = path_spec_from_dsl("zigzag:1,4,1");
    s.R = 1;
    s.dx = 0.01;
  } else if (name == "stationary") {
    s.path_spec = path_spec_from_dsl("zigzag:1,4,1");
    s.dx = 0.02;
    s.ladder = {0.08, 0.04, 0.02};
    s.cfl = 0.4;
  } else if (name == "constant_ball") {
    s.path_spec = path_spec_from_dsl("zigzag:0.5,2,1");
    s.A = 3;
    s.R = 2;
    s.K = 1;
    s.C = 1;
    s.dx = 0.05;
  } else if (name == "cancellation") {
    s.delta = 0.3;
    s.dx = 0.01;
    s.ladder = {0.02, 0.01, 0.005};
    s.cfl = 0.4;
  } else if (name == "classical_speed") {
    s.path_spec = path_spec_from_dsl("knots:0,0;1,1");
    s.R = 2;
    s.C = 1;
    s.dx = 0.025;
  } else if (name == "crosscheck") {
    s.path_spec = path_spec_from_dsl("zigzag:1,1,1");
    s.R = 2;
    s.L = 4;
    s.dx = 0.05;
    s.substeps = 20;
    s.levels = 3;
  } else {
    throw ConfigError("unknown experiment '" + name +
                      "' (theorem1, separation, stationary, constant_ball, cancellation, "
                      "classical_speed, crosscheck)");
  }
  return s;
}

ExperimentSpec spec_from_json(const std::string& name, const nlohmann::json& overrides) {
  ExperimentSpec s = default_spec(name);
  static const std::vector<std::string> known{
      "experiment", "path",   "R",         "epsilon", "delta",  "A",
      "K",          "C",      "grid",      "engine",  "ladder", "substeps",
      "levels",     "beta_pieces", "tolerances", "vacuous_pass", "out"};
  for (const auto& [key, val] : overrides.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown configuration key '" + key + "'");
    (void)val;
  }
  try {
    if (overrides.contains("path")) {
      if (overrides["path"].is_string())
        s.path_spec = path_spec_from_dsl(overrides["path"].get<std::string>());
      else
        s.path_spec = overrides["path"];
    }
    if (overrides.contains("R")) s.R = overrides["R"].get<double>();
    if (overrides.contains("epsilon")) s.epsilon = overrides["epsilon"].get<double>();
    if (overrides.contains("delta")) s.delta = overrides["delta"].get<double>();
    if (overrides.contains("A")) s.A = overrides["A"].get<double>();
    if (overrides.contains("K")) s.K = overrides["K"].get<double>();
    if (overrides.contains("C")) s.C = overrides["C"].get<double>();
    if (overrides.contains("grid")) {
      const auto& g = overrides["grid"];
      if (g.contains("L")) s.L = g["L"].get<double>();
      if (g.contains("dx")) s.dx = g["dx"].get<double>();
    }
    if (overrides.contains("engine")) {
      const auto& e = overrides["engine"];
      if (e.contains("kind")) s.engine = e["kind"].get<std::string>();
      if (e.contains("m")) s.m = e["m"].get<int>();
      if (e.contains("cfl")) s.cfl = e["cfl"].get<double>();
      if (e.contains("ordering")) s.ordering = e["ordering"].get<std::string>();
    }
    if (overrides.contains("ladder")) s.ladder = overrides["ladder"].get<std::vector<double>>();
    if (overrides.contains("substeps")) s.substeps = overrides["substeps"].get<int>();
    if (overrides.contains("levels")) s.levels = overrides["levels"].get<int>();
    if (overrides.contains("beta_pieces")) s.beta_pieces = overrides["beta_pieces"].get<int>();
    if (overrides.contains("tolerances"))
      for (const auto& [key, val] : overrides["tolerances"].items())
        s.tolerances[key] = val.get<double>();
    if (overrides.contains("vacuous_pass")) s.vacuous_pass = overrides["vacuous_pass"].get<bool>();
    if (overrides.contains("out")) s.out_dir = overrides["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return s;
}

Report run_experiment(const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.experiment = spec.name;

  Json echo;
  echo["experiment"] = spec.name;
  echo["path"] = spec.path_spec;
  echo["R"] = spec.R;
  echo["epsilon"] = spec.epsilon;
  echo["delta"] = spec.delta;
  echo["A"] = spec.A;
  echo["K"] = spec.K;
  echo["C"] = spec.C;
  echo["grid"] = {{"L", spec.L}, {"dx", spec.dx}};
  echo["engine"] = {{"kind", spec.engine}, {"m", spec.m}, {"cfl", spec.cfl},
                    {"ordering", spec.ordering}};
  echo["ladder"] = spec.ladder;
  echo["substeps"] = spec.substeps;
  echo["levels"] = spec.levels;
  echo["tolerances"] = spec.tolerances;
  echo["vacuous_pass"] = spec.vacuous_pass;
  rep.config = echo;
  rep.sampled_path_evidence =
      spec.path_spec.is_object() && spec.path_spec.value("kind", "") == "brownian";

  if (spec.name == "theorem1")
    run_theorem1(spec, rep);
  else if (spec.name == "separation")
    run_separation(spec, rep);
  else if (spec.name == "stationary")
    run_stationary(spec, rep);
  else if (spec.name == "constant_ball")
    run_constant_ball(spec, rep);
  else if (spec.name == "cancellation")
    run_cancellation(spec, rep);
  else if (spec.name == "classical_speed")
    run_classical_speed(spec, rep);
  else if (spec.name == "crosscheck")
    run_crosscheck(spec, rep);
  else
    throw ConfigError("unknown experiment '" + spec.name + "'");

  rep.wall_seconds = run_clock(t0);
  return rep;
}

void emit_report(const Report& report, const std::string& format, const std::string& out_dir,
                 bool include_timings) {
  if (format != "json" && format != "csv_bundle")
    throw ConfigError("unknown report format '" + format + "' (json | csv_bundle)");
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

  const fs::path report_path = dir / "report.json";
  {
    std::ofstream out(report_path);
    if (!out) throw IoError("cannot open '" + report_path.string() + "' for writing");
    out << report.to_json(include_timings).dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + report_path.string() + "'");
  }
  if (format == "csv_bundle")
    for (const auto& [label, f] : report.slices)
      write_grid_csv(f, (dir / ("slice_" + label + ".csv")).string());
}

}  // namespace roughhj::lab
