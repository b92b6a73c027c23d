#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "roughhj/io.hpp"

namespace roughhj::lab {

struct Verdict {
  std::string name;
  bool pass = false;
  double measured = 0;
  double threshold = 0;
  std::string relation;  // "<=", ">=", "==0"
};

// Self-auditing experiment result: every verdict is recomputable from the
// recorded measurements alone.  Wall times are kept out of the serialized
// form unless explicitly requested, so identical specs produce identical
// bytes.
struct Report {
  std::string experiment;
  nlohmann::ordered_json config;
  nlohmann::ordered_json measurements;
  std::vector<Verdict> verdicts;
  bool sampled_path_evidence = false;  // finite samples of a random driver only
  double wall_seconds = 0;
  std::vector<std::pair<std::string, GridFunction<double>>> slices;

  bool all_pass() const;
  nlohmann::ordered_json to_json(bool include_timings = false) const;
};

struct ExperimentSpec {
  std::string name;
  nlohmann::json path_spec;
  double R = 1;
  double epsilon = 0.1;
  double A = 3;
  double K = 1;
  double C = 1;
  double delta = 0.3;  // semigroup time of the cancellation experiment
  double L = -1;   // grid half-width; experiment default when nonpositive
  double dx = -1;  // grid spacing; experiment default when nonpositive
  std::string engine = "morphological";
  int m = 64;
  double cfl = -1;
  std::string ordering = "erode_first";
  std::vector<double> ladder;
  int substeps = 20;
  int levels = 3;
  int beta_pieces = 8;
  std::map<std::string, double> tolerances;
  bool vacuous_pass = false;
  std::string out_dir;

  double tolerance(const std::string& key, double fallback) const {
    const auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

// Documented defaults for each named experiment.
ExperimentSpec default_spec(const std::string& name);

// default_spec(name) overridden by the JSON configuration document.
ExperimentSpec spec_from_json(const std::string& name, const nlohmann::json& overrides);

Report run_experiment(const ExperimentSpec& spec);

// format: "json" writes report.json; "csv_bundle" additionally writes one CSV
// per recorded grid slice.
void emit_report(const Report& report, const std::string& format, const std::string& out_dir,
                 bool include_timings = false);

}  // namespace roughhj::lab
