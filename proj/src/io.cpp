#include "roughhj/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace roughhj {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

DrivingPath<double> path_from_json(const nlohmann::json& spec) {
  try {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "knots") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : spec.at("points"))
        pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return DrivingPath<double>::from_knots(pts);
    }
    if (kind == "zigzag") {
      return zigzag(spec.at("amplitude").get<double>(), spec.at("swings").get<int>(),
                    spec.at("T").get<double>());
    }
    if (kind == "brownian") {
      return sample_brownian<double>(spec.at("seed").get<std::uint64_t>(),
                                     spec.at("steps").get<int>(), spec.at("T").get<double>(),
                                     spec.at("scale").get<double>());
    }
    throw ConfigError("unknown path kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid path specification: ") + e.what());
  }
}

namespace {

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "' in path spec");
    }
  }
  return out;
}

}  // namespace

nlohmann::json path_spec_from_dsl(const std::string& dsl) {
  const auto colon = dsl.find(':');
  if (colon == std::string::npos)
    throw ConfigError("path spec must look like kind:args, got '" + dsl + "'");
  const std::string kind = dsl.substr(0, colon);
  const std::string args = dsl.substr(colon + 1);
  nlohmann::json j;
  j["kind"] = kind;
  if (kind == "zigzag") {
    const auto v = split_numbers(args, ',');
    if (v.size() != 3) throw ConfigError("zigzag spec needs amplitude,swings,T");
    j["amplitude"] = v[0];
    j["swings"] = static_cast<int>(v[1]);
    j["T"] = v[2];
    return j;
  }
  if (kind == "brownian") {
    const auto v = split_numbers(args, ',');
    if (v.size() != 4) throw ConfigError("brownian spec needs seed,steps,T,scale");
    j["seed"] = static_cast<std::uint64_t>(v[0]);
    j["steps"] = static_cast<int>(v[1]);
    j["T"] = v[2];
    j["scale"] = v[3];
    return j;
  }
  if (kind == "knots") {
    nlohmann::json pts = nlohmann::json::array();
    std::stringstream ss(args);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
      const auto v = split_numbers(pair, ',');
      if (v.size() != 2) throw ConfigError("each knot needs t,v");
      pts.push_back({v[0], v[1]});
    }
    j["points"] = pts;
    return j;
  }
  throw ConfigError("unknown path kind '" + kind + "'");
}

void write_grid_csv(const GridFunction<double>& f, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw IoError("cannot open '" + filename + "' for writing");
  const Index n = f.grid.nodes();
  if (f.grid.dim == 1) {
    out << "x,value\n";
    for (Index i = 0; i < n; ++i)
      out << format_double(f.grid.coord(i)) << ',' << format_double(f.values(i, 0)) << '\n';
  } else {
    out << "x,y,value\n";
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        out << format_double(f.grid.coord(i)) << ',' << format_double(f.grid.coord(j)) << ','
            << format_double(f.values(i, j)) << '\n';
  }
  if (!out) throw IoError("failed writing '" + filename + "'");
}

void write_trajectory_csv(const Trajectory<double>& traj, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw IoError("cannot open '" + filename + "' for writing");
  out << "t,x,y,alpha,beta\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]) << ',' << format_double(traj.x[k]) << ','
        << format_double(traj.y[k]);
    if (k < traj.alpha.size())
      out << ',' << format_double(traj.alpha[k]) << ',' << format_double(traj.beta[k]);
    else
      out << ",,";
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + filename + "'");
}

nlohmann::json evolve_report_to_json(const EvolveReport<double>& rep,
                                     const std::vector<std::array<double, 2>>& points,
                                     const std::vector<double>& values) {
  nlohmann::ordered_json j;
  j["engine"] = engine_name(rep.engine);
  j["dx"] = rep.dx;
  j["m"] = rep.m;
  j["cfl"] = rep.cfl;
  j["segments"] = rep.segments;
  j["sup_changes"] = rep.segment_sup_changes;
  j["dependence_radius"] = rep.dependence_radius;
  nlohmann::ordered_json vals;
  for (std::size_t i = 0; i < points.size() && i < values.size(); ++i) {
    const std::string key = rep.final.grid.dim == 1
                                ? "(" + format_double(points[i][0]) + ")"
                                : "(" + format_double(points[i][0]) + "," +
                                      format_double(points[i][1]) + ")";
    vals[key] = values[i];
  }
  j["values"] = vals;
  return j;
}

std::string engine_name(Engine e) {
  return e == Engine::Morphological ? "morphological" : "lax_friedrichs";
}

Engine engine_from_name(const std::string& name) {
  if (name == "morphological") return Engine::Morphological;
  if (name == "lax_friedrichs") return Engine::LaxFriedrichs;
  throw ConfigError("unknown engine '" + name + "' (morphological | lax_friedrichs)");
}

std::string ordering_name(SubstepOrdering o) {
  return o == SubstepOrdering::ErodeFirst ? "erode_first" : "dilate_first";
}

SubstepOrdering ordering_from_name(const std::string& name) {
  if (name == "erode_first") return SubstepOrdering::ErodeFirst;
  if (name == "dilate_first") return SubstepOrdering::DilateFirst;
  throw ConfigError("unknown ordering '" + name + "' (erode_first | dilate_first)");
}

}  // namespace roughhj
