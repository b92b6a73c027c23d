#include "roughhj/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roughhj/io.hpp"
#include "roughhj/lab.hpp"

namespace roughhj {

namespace {

nlohmann::json load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read configuration file '" + file + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON in '") + file + "': " + e.what());
  }
}

std::vector<double> parse_number_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::vector<std::array<double, 2>> parse_points(const std::string& s) {
  std::vector<std::array<double, 2>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto v = parse_number_list(item, ',');
    if (v.empty() || v.size() > 2) throw ConfigError("each point needs one or two coordinates");
    out.push_back({v[0], v.size() == 2 ? v[1] : 0.0});
  }
  return out;
}

GridFunction<double> make_ic(const std::string& dsl, const Grid<double>& grid) {
  const auto colon = dsl.find(':');
  const std::string kind = dsl.substr(0, colon == std::string::npos ? dsl.size() : colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : parse_number_list(dsl.substr(colon + 1), ',');
  if (kind == "bump") {
    if (args.size() != 1) throw ConfigError("ic bump:R");
    return bump_ic(grid, args[0]);
  }
  if (kind == "abs_diff") return abs_diff_ic(grid);
  if (kind == "cone") {
    if (args.size() != 3) throw ConfigError("ic cone:A,R,K");
    return cone_ic(grid, args[0], args[1], args[2]);
  }
  if (kind == "hat") {
    const double h = args.size() > 0 ? args[0] : 1.0;
    const double w = args.size() > 1 ? args[1] : 1.0;
    return hat_ic(grid, h, w);
  }
  if (kind == "constant") {
    if (args.size() != 1) throw ConfigError("ic constant:c");
    return GridFunction<double>::constant(grid, args[0]);
  }
  throw ConfigError("unknown ic '" + kind + "' (bump, abs_diff, cone, hat, constant)");
}

double parse_one_number(const std::string& s, const std::string& what) {
  const auto v = parse_number_list(s, ',');
  if (v.size() != 1) throw ConfigError(what + " needs exactly one number, got '" + s + "'");
  return v[0];
}

Strategy<double> parse_strategy(const std::string& dsl) {
  const auto colon = dsl.find(':');
  const std::string kind = dsl.substr(0, colon == std::string::npos ? dsl.size() : colon);
  if (kind == "delta_eps") {
    if (colon == std::string::npos) throw ConfigError("strategy delta_eps:eps");
    return delta_eps(parse_one_number(dsl.substr(colon + 1), "delta_eps"));
  }
  if (kind == "constant") {
    if (colon == std::string::npos) throw ConfigError("strategy constant:a");
    return constant_strategy(parse_one_number(dsl.substr(colon + 1), "constant"));
  }
  throw ConfigError("unknown strategy '" + kind + "' (delta_eps:eps | constant:a)");
}

PiecewiseConstantControl<double> parse_beta(const std::string& dsl, double T) {
  const auto colon = dsl.find(':');
  const std::string kind = dsl.substr(0, colon == std::string::npos ? dsl.size() : colon);
  if (kind == "const") {
    if (colon == std::string::npos) throw ConfigError("beta const:v");
    return PiecewiseConstantControl<double>::constant(
        parse_one_number(dsl.substr(colon + 1), "beta const"), T);
  }
  if (kind == "pieces") {
    if (colon == std::string::npos) throw ConfigError("beta pieces:v1,v2,...");
    const auto vals = parse_number_list(dsl.substr(colon + 1), ',');
    if (vals.empty()) throw ConfigError("beta pieces needs at least one value");
    PiecewiseConstantControl<double> b;
    b.breaks = ArrayX<double>::LinSpaced(static_cast<Index>(vals.size()) + 1, 0.0, T);
    b.values = Eigen::Map<const ArrayX<double>>(vals.data(), static_cast<Index>(vals.size()));
    return b;
  }
  throw ConfigError("unknown beta '" + kind + "' (const:v | pieces:v1,v2,...)");
}

struct CommonFlags {
  std::string config_file;
  std::string path_dsl;
  double R = -1, epsilon = -1, L = -1, dx = -1, cfl = -1;
  std::string engine, ordering, ladder, out_dir, format = "json";
  int m = -1, substeps = -1, levels = -1;
  bool timings = false, vacuous_pass = false, midpoints = false;
  int max_interior = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON configuration file");
  cmd->add_option("--path", f.path_dsl, "path spec, e.g. zigzag:1,4,1 | brownian:7,200,1,1 | knots:0,0;1,1");
  cmd->add_option("--R", f.R, "radius parameter R");
  cmd->add_option("--epsilon", f.epsilon, "strategy threshold epsilon");
  cmd->add_option("--L", f.L, "grid half-width");
  cmd->add_option("--dx", f.dx, "grid spacing");
  cmd->add_option("--engine", f.engine, "morphological | lax_friedrichs");
  cmd->add_option("--m", f.m, "morphological substeps per unit variation");
  cmd->add_option("--cfl", f.cfl, "time step ratio of the explicit scheme");
  cmd->add_option("--ordering", f.ordering, "erode_first | dilate_first");
  cmd->add_option("--ladder", f.ladder, "comma-separated dx refinement ladder");
  cmd->add_option("--substeps", f.substeps, "game substeps per monotone segment");
  cmd->add_option("--levels", f.levels, "game control levels (odd, >= 3)");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--format", f.format, "report format: json | csv_bundle");
  cmd->add_flag("--timings", f.timings, "include wall times in the report");
  cmd->add_flag("--vacuous-pass", f.vacuous_pass, "treat bound == 0 runs as passing");
}

// Configuration-file fallbacks for the non-experiment subcommands: a flag
// wins over the config value, which wins over the built-in default.
nlohmann::json subcommand_config(const CommonFlags& f) {
  return f.config_file.empty() ? nlohmann::json::object() : load_config(f.config_file);
}

nlohmann::json resolved_path_spec(const CommonFlags& f, const nlohmann::json& cfg) {
  if (!f.path_dsl.empty()) return path_spec_from_dsl(f.path_dsl);
  if (cfg.contains("path"))
    return cfg["path"].is_string() ? path_spec_from_dsl(cfg["path"].get<std::string>())
                                   : cfg["path"];
  throw ConfigError("path missing (--path flag or \"path\" config key)");
}

double resolved_number(double flag_value, const nlohmann::json& cfg,
                       std::initializer_list<const char*> keys, double fallback) {
  if (flag_value > 0) return flag_value;
  const nlohmann::json* node = &cfg;
  for (const char* k : keys) {
    if (!node->contains(k)) return fallback;
    node = &(*node)[k];
  }
  return node->get<double>();
}

std::string resolved_string(const std::string& flag_value, const nlohmann::json& cfg,
                            std::initializer_list<const char*> keys, const std::string& fallback) {
  if (!flag_value.empty()) return flag_value;
  const nlohmann::json* node = &cfg;
  for (const char* k : keys) {
    if (!node->contains(k)) return fallback;
    node = &(*node)[k];
  }
  return node->get<std::string>();
}

nlohmann::json merge_overrides(const CommonFlags& f) {
  nlohmann::json o = f.config_file.empty() ? nlohmann::json::object() : load_config(f.config_file);
  if (!f.path_dsl.empty()) o["path"] = f.path_dsl;
  if (f.R >= 0) o["R"] = f.R;
  if (f.epsilon >= 0) o["epsilon"] = f.epsilon;
  if (f.L > 0) o["grid"]["L"] = f.L;
  if (f.dx > 0) o["grid"]["dx"] = f.dx;
  if (!f.engine.empty()) o["engine"]["kind"] = f.engine;
  if (f.m > 0) o["engine"]["m"] = f.m;
  if (f.cfl > 0) o["engine"]["cfl"] = f.cfl;
  if (!f.ordering.empty()) o["engine"]["ordering"] = f.ordering;
  if (!f.ladder.empty()) o["ladder"] = parse_number_list(f.ladder, ',');
  if (f.substeps > 0) o["substeps"] = f.substeps;
  if (f.levels > 0) o["levels"] = f.levels;
  if (f.vacuous_pass) o["vacuous_pass"] = true;
  if (!f.out_dir.empty()) o["out"] = f.out_dir;
  return o;
}

int run_experiment_cmd(const std::string& name_arg, const CommonFlags& flags) {
  nlohmann::json overrides = merge_overrides(flags);
  std::string name = name_arg;
  if (name.empty() && overrides.contains("experiment"))
    name = overrides["experiment"].get<std::string>();
  if (name.empty()) throw ConfigError("experiment name missing (argument or config key)");
  overrides.erase("experiment");

  const lab::ExperimentSpec spec = lab::spec_from_json(name, overrides);
  const lab::Report report = lab::run_experiment(spec);
  const std::string out = !flags.out_dir.empty() ? flags.out_dir
                          : !spec.out_dir.empty() ? spec.out_dir
                                                  : std::string(".");
  lab::emit_report(report, flags.format, out, flags.timings);
  for (const auto& v : report.verdicts)
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << name << "." << v.name
              << "  measured=" << format_double(v.measured) << " " << v.relation
              << " threshold=" << format_double(v.threshold) << "\n";
  std::cout << (report.all_pass() ? "PASS" : "FAIL") << " " << name << "\n";
  return report.all_pass() ? 0 : 1;
}

int run_bound_cmd(const CommonFlags& flags) {
  const auto cfg = subcommand_config(flags);
  const auto path = path_from_json(resolved_path_spec(flags, cfg));
  PartitionBoundOptions opt;
  if (flags.max_interior >= 0) opt.max_interior = flags.max_interior;
  opt.refine_midpoints = flags.midpoints;
  const double R = flags.R >= 0 ? flags.R : cfg.value("R", 0.0);
  std::cout << format_double(partition_bound(path, R, opt)) << "\n";
  return 0;
}

int run_solve_cmd(const CommonFlags& flags, const std::string& ic_dsl, const std::string& points_dsl,
                  int dim) {
  const auto file = subcommand_config(flags);
  const auto path = path_from_json(resolved_path_spec(flags, file));
  SolveConfig<double> cfg;
  cfg.engine = engine_from_name(resolved_string(flags.engine, file, {"engine", "kind"},
                                                "morphological"));
  cfg.substeps_per_unit_variation =
      static_cast<int>(resolved_number(flags.m, file, {"engine", "m"}, 64));
  cfg.cfl = resolved_number(flags.cfl, file, {"engine", "cfl"}, -1);
  cfg.ordering = ordering_from_name(resolved_string(flags.ordering, file, {"engine", "ordering"},
                                                    "erode_first"));

  const auto h = dim == 1 ? h_abs_1d<double>() : h_saddle<double>();
  Grid<double> grid{dim, resolved_number(flags.L, file, {"grid", "L"}, 2.0),
                    resolved_number(flags.dx, file, {"grid", "dx"}, 0.05)};
  const auto u0 = make_ic(ic_dsl, grid);

  const auto points = points_dsl.empty() ? std::vector<std::array<double, 2>>{{0.0, 0.0}}
                                         : parse_points(points_dsl);
  for (const auto& p : points) {
    cfg.observation_radius = std::max(cfg.observation_radius, std::abs(p[0]));
    if (dim == 2) cfg.observation_radius = std::max(cfg.observation_radius, std::abs(p[1]));
  }
  const auto rep = evolve(u0, path, h, cfg);
  std::vector<double> values;
  for (const auto& p : points)
    values.push_back(dim == 1 ? rep.final.at(p[0]) : rep.final.at(p[0], p[1]));

  namespace fs = std::filesystem;
  const fs::path dir = flags.out_dir.empty() ? fs::path(".") : fs::path(flags.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  write_grid_csv(rep.final, (dir / "solution.csv").string());
  {
    std::ofstream out(dir / "evolve_report.json");
    if (!out) throw IoError("cannot write evolve report");
    out << evolve_report_to_json(rep, points, values).dump(2) << '\n';
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    std::cout << "u(T, " << format_double(points[i][0])
              << (dim == 2 ? "," + format_double(points[i][1]) : "") << ") = "
              << format_double(values[i]) << "\n";
  return 0;
}

int run_game_cmd(const CommonFlags& flags, const std::string& mode, const std::string& strategy_dsl,
                 const std::string& beta_dsl) {
  const auto file = subcommand_config(flags);
  const auto path = path_from_json(resolved_path_spec(flags, file));
  const double R = flags.R >= 0 ? flags.R : file.value("R", 1.0);

  if (mode == "dp") {
    Grid<double> grid{2, resolved_number(flags.L, file, {"grid", "L"}, 4.0),
                      resolved_number(flags.dx, file, {"grid", "dx"}, 0.05)};
    GameConfig<double> cfg{grid,
                           static_cast<int>(resolved_number(flags.substeps, file, {"substeps"}, 20)),
                           static_cast<int>(resolved_number(flags.levels, file, {"levels"}, 3)),
                           bump_ic(grid, R)};
    cfg.store_slices = false;
    const auto table = dp_value(path, cfg);
    std::cout << "v(0,0,0) = " << format_double(table.value_at_origin()) << "\n";
    if (!flags.out_dir.empty()) {
      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(flags.out_dir, ec);
      if (ec) throw IoError("cannot create output directory");
      write_grid_csv(table.initial_slice(), (fs::path(flags.out_dir) / "value_t0.csv").string());
    }
    return 0;
  }
  if (mode == "simulate") {
    const auto strat = parse_strategy(strategy_dsl.empty() ? "delta_eps:0.1" : strategy_dsl);
    const auto beta = parse_beta(beta_dsl.empty() ? "const:1" : beta_dsl, path.horizon());
    const auto traj = simulate(path, strat, beta);
    std::cout << "x(T) = " << format_double(traj.x_final())
              << "  y(T) = " << format_double(traj.y_final())
              << "  J = " << format_double(payoff(traj, R));
    if (traj.tau) std::cout << "  tau = " << format_double(*traj.tau);
    std::cout << "\n";
    if (!flags.out_dir.empty()) {
      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(flags.out_dir, ec);
      if (ec) throw IoError("cannot create output directory");
      write_trajectory_csv(traj, (fs::path(flags.out_dir) / "trajectory.csv").string());
    }
    return 0;
  }
  throw ConfigError("unknown game mode '" + mode + "' (dp | simulate)");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"solver laboratory for Hamilton-Jacobi equations driven by continuous signals"};
  app.require_subcommand(0, 1);

  CommonFlags flags;
  std::string experiment_name, ic_dsl = "bump:1", points_dsl, game_mode = "dp";
  std::string strategy_dsl, beta_dsl;
  int dim = 2;

  auto* exp = app.add_subcommand("experiment", "run a named experiment and emit a report");
  exp->add_option("name", experiment_name,
                  "theorem1 | separation | stationary | constant_ball | cancellation | "
                  "classical_speed | crosscheck");
  add_common(exp, flags);

  auto* bound = app.add_subcommand("bound", "evaluate the partition lower bound");
  add_common(bound, flags);
  bound->add_option("--max-interior", flags.max_interior, "cap on interior partition points");
  bound->add_flag("--midpoints", flags.midpoints, "also consider midpoints of linear pieces");

  auto* solve = app.add_subcommand("solve", "evolve initial data along a path");
  add_common(solve, flags);
  solve->add_option("--ic", ic_dsl, "bump:R | abs_diff | cone:A,R,K | hat[:h,w] | constant:c");
  solve->add_option("--points", points_dsl, "semicolon-separated points, e.g. 0,0;0.5,0.5");
  solve->add_option("--dim", dim, "spatial dimension (1 or 2)");

  auto* game = app.add_subcommand("game", "dynamic-programming value or a strategy simulation");
  add_common(game, flags);
  game->add_option("mode", game_mode, "dp | simulate");
  game->add_option("--strategy", strategy_dsl, "delta_eps:eps | constant:a");
  game->add_option("--beta", beta_dsl, "const:v | pieces:v1,v2,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (exp->parsed()) return run_experiment_cmd(experiment_name, flags);
    if (bound->parsed()) return run_bound_cmd(flags);
    if (solve->parsed()) return run_solve_cmd(flags, ic_dsl, points_dsl, dim);
    if (game->parsed()) return run_game_cmd(flags, game_mode, strategy_dsl, beta_dsl);
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "contract error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace roughhj
