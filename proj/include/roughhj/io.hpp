#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "roughhj/game.hpp"
#include "roughhj/grid.hpp"
#include "roughhj/signal.hpp"
#include "roughhj/solver.hpp"

namespace roughhj {

// Shortest round-trip decimal representation of a double; deterministic.
std::string format_double(double v);

// Path specification as a JSON document:
//   {"kind":"knots","points":[[t,v],...]}
//   {"kind":"zigzag","amplitude":a,"swings":n,"T":T}
//   {"kind":"brownian","seed":s,"steps":n,"T":T,"scale":c}
DrivingPath<double> path_from_json(const nlohmann::json& spec);

// Compact flag form: "zigzag:a,n,T" | "brownian:seed,steps,T,scale" |
// "knots:t,v;t,v;...".
nlohmann::json path_spec_from_dsl(const std::string& dsl);

// Grid dump, header "x,y,value" (2d) or "x,value" (1d), x varying in the
// outer loop, full-precision decimals.
void write_grid_csv(const GridFunction<double>& f, const std::string& filename);

// Trajectory dump, header "t,x,y,alpha,beta"; the control columns hold the
// value on the interval starting at t (empty on the final row).
void write_trajectory_csv(const Trajectory<double>& traj, const std::string& filename);

nlohmann::json evolve_report_to_json(const EvolveReport<double>& rep,
                                     const std::vector<std::array<double, 2>>& points,
                                     const std::vector<double>& values);

std::string engine_name(Engine e);
Engine engine_from_name(const std::string& name);
std::string ordering_name(SubstepOrdering o);
SubstepOrdering ordering_from_name(const std::string& name);

}  // namespace roughhj
