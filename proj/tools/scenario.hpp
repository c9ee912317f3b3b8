#pragma once

// Scenario files: one JSON document per run. Command line flags override
// the fields they name.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinspec/bounds.hpp"
#include "spinspec/conformal.hpp"

namespace spinspec::app {

struct Tolerances {
  double report = default_tol_report;  // bound checks and the optimizer trace
  double identity = 1e-2;              // identity residuals at the finest grid
};

struct Scenario {
  std::string name;
  std::string geometry;
  std::optional<SpinStructure> spin;
  std::vector<BoundaryCondition> bcs{BoundaryCondition::local_plus};
  double k_max = 12.5;
  std::vector<int> sizes{256};
  std::optional<std::string> conformal_u;
  bool optimize_bounds = false;
  int budget = 1000;
  Tolerances tol;
  std::optional<std::filesystem::path> out;
};

// Flag values as given on the command line; unset fields leave the JSON
// value alone.
struct Overrides {
  std::optional<std::string> geometry;
  std::optional<std::string> bc;     // comma list
  std::optional<std::string> sizes;  // comma list
  std::optional<double> k_max;
  std::optional<std::string> conformal_u;
  bool optimize_bounds = false;
  std::optional<int> budget;
  std::optional<std::string> out;
  std::optional<double> tol_report;
};

// Relative csv:<path> geometries resolve against `base`.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base = {});
Scenario load_scenario(const std::filesystem::path& file);
void apply(Scenario& s, const Overrides& o);
// Throws config error: no geometry, no bc, sizes not ascending, ...
void validate(const Scenario& s);

nlohmann::json to_json(const Scenario& s);

SurfacePtr resolve_surface(const Scenario& s);
std::optional<ConformalRescaling> resolve_rescaling(const Scenario& s, SurfacePtr surface);

std::vector<int> parse_sizes(const std::string& list);
std::vector<BoundaryCondition> parse_bcs(const std::string& list);

}  // namespace spinspec::app
