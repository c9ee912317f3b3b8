#include "scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spinspec/error.hpp"

namespace spinspec::app {

namespace {

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T field(const nlohmann::json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("scenario field '") + key + "': " + e.what());
  }
}

SpinStructure parse_spin(const std::string& s) {
  if (s == "antiperiodic") return SpinStructure::antiperiodic;
  if (s == "periodic") return SpinStructure::periodic;
  throw config_error("unknown spin structure '" + s + "'");
}

}  // namespace

std::vector<int> parse_sizes(const std::string& list) {
  std::vector<int> out;
  for (const std::string& item : split(list)) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw config_error("grid size '" + item + "' is not an integer");
    out.push_back(n);
  }
  return out;
}

std::vector<BoundaryCondition> parse_bcs(const std::string& list) {
  std::vector<BoundaryCondition> out;
  for (const std::string& item : split(list)) {
    try {
      out.push_back(parse_boundary_condition(item));
    } catch (const Error& e) {
      throw config_error(e.what());
    }
  }
  return out;
}

Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base) {
  if (!doc.is_object()) throw config_error("scenario must be a JSON object");
  static const std::vector<std::string> known = {
      "name", "geometry", "spin_structure", "bc", "kmax", "N", "conformal_u",
      "optimize_bounds", "budget", "tolerances", "out"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw config_error("unknown scenario field '" + key + "'");
    }
  }
  Scenario s;
  if (doc.contains("geometry")) {
    s.geometry = field<std::string>(doc, "geometry");
    if (s.geometry.rfind("csv:", 0) == 0 && !base.empty()) {
      const std::filesystem::path p = s.geometry.substr(4);
      if (p.is_relative()) s.geometry = "csv:" + (base / p).string();
    }
  }
  s.name = doc.contains("name") ? field<std::string>(doc, "name") : s.geometry;
  if (doc.contains("spin_structure")) s.spin = parse_spin(field<std::string>(doc, "spin_structure"));
  if (doc.contains("bc")) {
    const auto& bc = doc.at("bc");
    if (bc.is_string()) {
      s.bcs = parse_bcs(bc.get<std::string>());
    } else {
      s.bcs.clear();
      for (const auto& item : field<std::vector<std::string>>(doc, "bc")) {
        const auto one = parse_bcs(item);
        s.bcs.insert(s.bcs.end(), one.begin(), one.end());
      }
    }
  }
  if (doc.contains("kmax")) s.k_max = field<double>(doc, "kmax");
  if (doc.contains("N")) {
    const auto& n = doc.at("N");
    s.sizes = n.is_number_integer() ? std::vector<int>{n.get<int>()} : field<std::vector<int>>(doc, "N");
  }
  if (doc.contains("conformal_u") && !doc.at("conformal_u").is_null()) {
    s.conformal_u = field<std::string>(doc, "conformal_u");
  }
  if (doc.contains("optimize_bounds")) s.optimize_bounds = field<bool>(doc, "optimize_bounds");
  if (doc.contains("budget")) s.budget = field<int>(doc, "budget");
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (t.contains("report")) s.tol.report = field<double>(t, "report");
    if (t.contains("identity")) s.tol.identity = field<double>(t, "identity");
  }
  if (doc.contains("out")) s.out = field<std::string>(doc, "out");
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw config_error("cannot open scenario file " + file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(file.string() + ": " + e.what());
  }
  Scenario s = scenario_from_json(doc, file.parent_path());
  if (s.name.empty()) s.name = file.stem().string();
  return s;
}

void apply(Scenario& s, const Overrides& o) {
  if (o.geometry) {
    s.geometry = *o.geometry;
    s.name = *o.geometry;
  }
  if (o.bc) s.bcs = parse_bcs(*o.bc);
  if (o.sizes) s.sizes = parse_sizes(*o.sizes);
  if (o.k_max) s.k_max = *o.k_max;
  if (o.conformal_u) s.conformal_u = *o.conformal_u;
  if (o.optimize_bounds) s.optimize_bounds = true;
  if (o.budget) s.budget = *o.budget;
  if (o.out) s.out = *o.out;
  if (o.tol_report) s.tol.report = *o.tol_report;
}

void validate(const Scenario& s) {
  if (s.geometry.empty()) throw config_error("no geometry given");
  if (s.bcs.empty()) throw config_error("at least one boundary condition is required");
  if (s.sizes.empty()) throw config_error("at least one grid size is required");
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    if (s.sizes[i] < 4) throw config_error("grid sizes must be at least 4");
    if (i > 0 && s.sizes[i] <= s.sizes[i - 1]) throw config_error("grid sizes must be ascending");
  }
  if (!(s.k_max > 0.0)) throw config_error("kmax must be positive");
  if (s.budget < 1) throw config_error("budget must be at least 1");
  if (!(s.tol.report >= 0.0) || !(s.tol.identity > 0.0)) {
    throw config_error("tolerances must be non-negative");
  }
}

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["geometry"] = s.geometry;
  if (s.spin) j["spin_structure"] = to_string(*s.spin);
  j["bc"] = nlohmann::json::array();
  for (BoundaryCondition bc : s.bcs) j["bc"].push_back(to_string(bc));
  j["kmax"] = s.k_max;
  j["N"] = s.sizes;
  j["conformal_u"] = s.conformal_u ? nlohmann::json(*s.conformal_u) : nlohmann::json();
  j["optimize_bounds"] = s.optimize_bounds;
  j["budget"] = s.budget;
  j["tolerances"] = {{"report", s.tol.report}, {"identity", s.tol.identity}};
  return j;
}

SurfacePtr resolve_surface(const Scenario& s) {
  try {
    return make_surface(s.geometry, s.spin);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::numerical) throw;
    throw config_error(e.what());
  }
}

std::optional<ConformalRescaling> resolve_rescaling(const Scenario& s, SurfacePtr surface) {
  if (!s.conformal_u) return std::nullopt;
  RadialFunction u = [&] {
    try {
      return RadialFunction::parse(*s.conformal_u, surface->r_min(), surface->r_max());
    } catch (const Error& e) {
      throw config_error(e.what());
    }
  }();
  return ConformalRescaling(std::move(surface), std::move(u));
}

}  // namespace spinspec::app
