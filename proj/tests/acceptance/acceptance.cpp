// One PASS/FAIL line per acceptance criterion. Scenario files come from the
// directory given as the first argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "app.hpp"
#include "oracles.hpp"
#include "spinspec/bounds.hpp"
#include "spinspec/conformal.hpp"
#include "spinspec/identities.hpp"
#include "spinspec/spectrum.hpp"

using namespace spinspec;
using nlohmann::json;
using std::numbers::pi;

namespace {

std::filesystem::path scenario_dir;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Solved {
  Spectrum spectrum;
  SpinorField phi;
};

Solved solve(SurfacePtr s, BoundaryCondition bc, int n, double k_max = 12.5) {
  Spectrum sp = aggregate(std::move(s), bc, k_max, n);
  SpinorField phi = SpinorField::from_eigenvector(*sp.fundamental_operator, sp.fundamental.vector);
  return {std::move(sp), std::move(phi)};
}

double order(double coarse, double fine, double ratio = 2.0) {
  return std::log(coarse / fine) / std::log(ratio);
}

std::vector<app::Scenario> scenarios() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(scenario_dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<app::Scenario> out;
  for (const auto& f : files) out.push_back(app::load_scenario(f));
  return out;
}

app::Scenario scenario(const std::string& name) {
  return app::load_scenario(scenario_dir / (name + ".json"));
}

// 1. Hemisphere limiting case.
Verdict hemisphere_limit() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const SurfacePtr hemi = WarpedSurface::hemisphere();
  std::vector<double> killing;
  double lambda = 0.0;
  for (int n : {128, 256, 512}) {
    const Solved x = solve(hemi, BoundaryCondition::local_plus, n);
    lambda = x.spectrum.lambda_min();
    killing.push_back(killing_residual(x.phi, lambda, ModifierPair::zero()));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.require(lambda * lambda >= 1.0 - 1e-3, "lambda^2 = " + g(lambda * lambda) + " >= 1 - 1e-3");
  // local+ carries the Killing spinor with D phi = -phi in this orientation
  v.require(std::abs(std::abs(lambda) - 1.0) <= 1e-3, "|lambda_min| - 1 = " + g(std::abs(lambda) - 1.0));
  const double p = order(killing[1], killing[2]);
  v.require(killing[2] <= 5e-3, "Killing residual " + g(killing[2]) + " <= 5e-3");
  v.require(killing[2] < killing[1] && killing[1] < killing[0] && p >= 1.8 && p <= 2.2,
            "Killing order " + g(p));
  v.require(hemi->boundary_data(BoundarySide::outer).mean_curvature == 0.0, "H = 0 exactly");
  v.require(seconds < 60.0, "runtime " + g(seconds) + " s");
  return v;
}

// 2. APS- strictness.
Verdict aps_gap() {
  Verdict v;
  std::vector<double> gaps;
  for (int n : {256, 512, 1024}) {
    const Solved x = solve(WarpedSurface::hemisphere(), BoundaryCondition::aps_minus, n);
    const double delta = x.spectrum.lambda_min_squared() - 1.0;
    gaps.push_back(delta);
    v.require(delta > 5e-3, "delta(" + std::to_string(n) + ") = " + g(delta));
  }
  const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
  v.require(*hi - *lo <= 0.2 * *hi, "spread " + g((*hi - *lo) / *hi));
  return v;
}

// 3. Flat disk against the shooting oracle.
Verdict disk_oracle() {
  Verdict v;
  const oracle::Profile disk = oracle::flat_disk();
  std::optional<double> exact;
  for (double k : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) {
    const auto root = oracle::chirality_eigenvalue(disk, k, +1);
    if (root && (!exact || std::abs(*root) < std::abs(*exact))) exact = root;
  }
  if (!exact) {
    v.require(false, "oracle found no eigenvalue");
    return v;
  }
  std::vector<double> err;
  for (int n : {256, 512}) {
    const Spectrum sp = aggregate(WarpedSurface::disk(), BoundaryCondition::local_plus, 12.5, n);
    err.push_back(std::abs(sp.lambda_min() - *exact));
  }
  v.require(err[1] <= 1e-4, "|lambda - oracle| = " + g(err[1]) + " (oracle " + g(*exact) + ")");
  const double p = order(err[0], err[1]);
  v.require(p >= 1.8 && p <= 2.2, "order " + g(p));
  return v;
}

// 4. Cap family.
Verdict cap_family() {
  Verdict v;
  std::vector<double> values;
  for (double r1 : {pi / 3, 5 * pi / 12, pi / 2}) {
    const Spectrum sp = aggregate(WarpedSurface::spherical_cap(r1), BoundaryCondition::local_plus,
                                  12.5, 512);
    values.push_back(sp.lambda_min_squared());
    v.require(values.back() >= 1.0 - 1e-3, "lambda^2(" + g(r1) + ") = " + g(values.back()));
  }
  v.require(values[0] > values[1] && values[1] > values[2], "decreasing");
  return v;
}

// 5. Identity suite on every scenario file.
Verdict identity_suite() {
  Verdict v;
  static const std::vector<std::string> names = {"ili",        "rtc2",       "eq1[a=0]",
                                                 "eq1[probe]", "eq2[probe]", "trace_q"};
  int checked = 0;
  for (app::Scenario s : scenarios()) {
    s.sizes = {256, 512};
    const app::CommandResult r = app::verify_command(s);
    std::map<std::string, double> at256;
    std::istringstream lines(r.documents.front().content);
    std::string line;
    while (std::getline(lines, line)) {
      const json j = json::parse(line);
      const std::string id = j["identity"];
      if (std::find(names.begin(), names.end(), id) == names.end()) continue;
      const std::string key = std::string(j["bc"]) + " " + id;
      const double res = j["residual"];
      if (j["n_cells"] == 256) {
        at256[key] = res;
        if (res > 1e-2) v.require(false, s.name + " " + key + " = " + g(res));
        continue;
      }
      ++checked;
      // exact to rounding: nothing left to converge
      if (res <= 1e-12 && at256[key] <= 1e-12) continue;
      const double p = order(at256[key], res);
      if (!(p >= 1.8)) v.require(false, s.name + " " + key + " order " + g(p));
    }
  }
  v.require(checked > 0, std::to_string(checked) + " identity checks");
  return v;
}

// 6. Conformal covariance.
Verdict conformal() {
  Verdict v;
  const app::Scenario s = scenario("disk-conformal");
  const SurfacePtr disk = app::resolve_surface(s);
  const ConformalRescaling resc = *app::resolve_rescaling(s, disk);

  std::vector<double> nodes;
  for (int j = 0; j < 400; ++j) nodes.push_back((j + 0.5) / 400.0);
  const auto laws = resc.law_residuals(nodes);
  v.require(laws.curvature <= 1e-8 && laws.mean_curvature <= 1e-8,
            "laws " + g(std::max(laws.curvature, laws.mean_curvature)));

  const ModifierPair mp = probe_modifier(*disk);
  std::vector<double> push, eq3, eq4;
  for (int n : {256, 512, 1024}) {
    const Solved x = solve(disk, BoundaryCondition::local_plus, n);
    const double lambda = x.spectrum.lambda_min();
    push.push_back(conformal_push(x.phi, lambda, resc).residual);
    eq3.push_back(eq_residual(x.phi, lambda, mp, EqVariant::eq3, &resc).residual);
    eq4.push_back(eq_residual(x.phi, lambda, mp, EqVariant::eq4, &resc).residual);
  }
  const double pp = order(push[1], push[2]);
  v.require(pp >= 1.8 && pp <= 2.2, "push order " + g(pp));
  const double p3 = order(eq3[1], eq3[2]);
  const double p4 = order(eq4[1], eq4[2]);
  v.require(p3 >= 1.8, "eq3 order " + g(p3));
  v.require(p4 >= 1.8, "eq4 order " + g(p4));

  double worst = 0.0;
  const double base = aggregate(disk, BoundaryCondition::local_plus, 12.5, 256).lambda_min();
  for (double c : {-0.3, 0.4}) {
    const ConformalRescaling h(disk, RadialFunction::constant(c));
    const double scaled =
        aggregate(h.target(), BoundaryCondition::local_plus, 12.5, 256).lambda_min();
    worst = std::max(worst, std::abs(scaled - std::exp(-c) * base));
  }
  v.require(worst <= 1e-6, "homothety " + g(worst));
  return v;
}

// 7. Bounds as oracles over the optimizer trace.
Verdict optimizer_trace() {
  Verdict v;
  int points = 0, violations = 0;
  bool entries_pass = true;
  for (app::Scenario s : scenarios()) {
    s.sizes = {256};
    s.optimize_bounds = true;
    s.tol.report = 5e-3;
    const app::CommandResult r = app::bounds_command(s);
    const json doc = json::parse(r.documents.front().content);
    for (const json& rep : doc["reports"]) {
      entries_pass = entries_pass && rep["pass"].get<bool>();
      for (const auto& [variant, o] : rep["optimizer"].items()) {
        if (!o["checked"].get<bool>()) continue;
        points += o["feasible_points"].get<int>();
        violations += o["violations"].get<int>();
      }
    }
  }
  v.require(violations == 0, std::to_string(violations) + " violations");
  v.require(points >= 10000, std::to_string(points) + " feasible trace points");
  v.require(entries_pass, "report entries pass");
  return v;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

// 8. Algebraic suite.
Verdict algebra() {
  Verdict v;
  const CliffordFrame& fr = make_frame();
  const Mat2 id = Mat2::Identity();
  double exact = 0.0;
  for (int a = 0; a < 2; ++a) {
    exact = std::max(exact, max_abs(fr.generator(a).adjoint() + fr.generator(a)));
    for (int b = 0; b < 2; ++b) {
      const Mat2 ac = fr.generator(a) * fr.generator(b) + fr.generator(b) * fr.generator(a);
      exact = std::max(exact, max_abs(ac + (a == b ? 2.0 : 0.0) * id));
    }
  }
  const auto f = chirality_axioms(fr, chirality(fr));
  exact = std::max({exact, f.square, f.anticommute, f.unitary});
  v.require(exact == 0.0, "Clifford and F axioms " + g(exact));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  double gamma = 0.0, proj = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = angle(rng);
    const Covector nrm(std::cos(t), std::sin(t));
    const Mat2 gm = boundary_chirality(fr, nrm);
    const auto r = boundary_chirality_axioms(fr, gm, nrm);
    gamma = std::max({gamma, r.square, r.anticommute, r.commute, r.unitary});
    const Projectors p = eigen_projectors(gm);
    proj = std::max({proj, max_abs(p.plus * p.plus - p.plus), max_abs(p.minus * p.minus - p.minus),
                     max_abs(p.plus * p.minus), max_abs(p.plus + p.minus - id),
                     max_abs(p.plus - p.minus - gm)});
  }
  v.require(gamma <= 1e-12, "Gamma axioms " + g(gamma));
  v.require(proj <= 1e-12, "projectors " + g(proj));

  double anti = 0.0;
  for (const SurfacePtr& s : {WarpedSurface::hemisphere(), WarpedSurface::disk(),
                              WarpedSurface::annulus(0.5, 1.0), WarpedSurface::cylinder(2.0)}) {
    for (BoundarySide side : s->boundaries()) {
      for (int tk = -7; tk <= 7; ++tk) {
        const FourierMode m(tk);
        if (!m.compatible_with(s->spin_structure())) continue;
        const BoundaryDirac bd = boundary_dirac_matrix(*s, side, m);
        anti = std::max(anti, max_abs(bd.normal * bd.dirac + bd.dirac * bd.normal));
      }
    }
  }
  v.require(anti == 0.0, "boundary anticommutator " + g(anti));

  double herm = 0.0;
  for (BoundaryCondition bc : {BoundaryCondition::local_plus, BoundaryCondition::local_minus,
                               BoundaryCondition::aps_minus, BoundaryCondition::aps_plus}) {
    for (int tk : {-3, -1, 1, 3}) {
      const ModeOperator op =
          apply_boundary_condition(assemble_mode_dirac(WarpedSurface::disk(), FourierMode(tk), 64), bc);
      herm = std::max(herm, op.hermiticity_residual());
    }
  }
  v.require(herm <= 1e-12, "Hermiticity " + g(herm));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  scenario_dir = argc > 1 ? argv[1] : "scenarios";
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"hemisphere limiting case", hemisphere_limit},
      {"APS- strict gap", aps_gap},
      {"flat disk oracle", disk_oracle},
      {"monotone cap family", cap_family},
      {"identity suite", identity_suite},
      {"conformal covariance", conformal},
      {"bounds over optimizer trace", optimizer_trace},
      {"algebraic suite", algebra},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
