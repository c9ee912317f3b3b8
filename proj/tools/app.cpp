#include "app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "spinspec/error.hpp"

namespace spinspec::app {

namespace {

using nlohmann::json;

struct Solved {
  Spectrum spectrum;
  SpinorField phi;
};

Solved solve(SurfacePtr surface, BoundaryCondition bc, double k_max, int n) {
  Spectrum sp = aggregate(std::move(surface), bc, k_max, n);
  if (!sp.fundamental_operator || sp.fundamental.vector.size() == 0) {
    throw numerical_error("no eigenpair found for " + std::string(to_string(bc)));
  }
  SpinorField phi = SpinorField::from_eigenvector(*sp.fundamental_operator, sp.fundamental.vector);
  return {std::move(sp), std::move(phi)};
}

void warn_cutoff(const Spectrum& sp, const Scenario& s, CommandResult& r) {
  if (!sp.minimum_at_cutoff) return;
  r.warnings.push_back("lambda_min of " + s.name + " (" + to_string(sp.bc) + ", N = " +
                       std::to_string(sp.n_cells) + ") is attained at |k| = kmax; raise --kmax");
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// RFC 4180 quoting; scenario names such as annulus:0.5,1 contain commas.
std::string csv_text(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + '"';
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(); }

// Identity rows of one eigenpair. Killing residual is informational.
struct Row {
  std::string identity;
  double left = 0.0;
  double right = 0.0;
  double residual = 0.0;
  bool checked = true;
};

std::vector<Row> identity_rows(const Solved& x, const std::optional<ConformalRescaling>& conf) {
  const SpinorField& phi = x.phi;
  const double lambda = x.spectrum.lambda_min();
  const WarpedSurface& surface = phi.surface();
  std::vector<Row> rows;
  auto add = [&](std::string name, const IdentityReport& rep) {
    rows.push_back({std::move(name), rep.left, rep.right, rep.residual, true});
  };
  add("ili", sl_residual(phi));
  if (!surface.boundaries().empty()) add("rtc2", rtc2_residual(phi));
  const ModifierPair probe = probe_modifier(surface);
  add("eq1[a=0]", eq_residual(phi, lambda, ModifierPair::zero(), EqVariant::eq1));
  add("eq1[probe]", eq_residual(phi, lambda, probe, EqVariant::eq1));
  add("eq2[probe]", eq_residual(phi, lambda, probe, EqVariant::eq2));
  add("trace_q", trace_q_residual(phi, energy_momentum(phi), lambda));
  const double lich = lichnerowicz_residual(phi);
  rows.push_back({"lichnerowicz", lich, 0.0, lich, true});
  if (conf) {
    add("eq3[probe]", eq_residual(phi, lambda, probe, EqVariant::eq3, &*conf));
    add("eq4[probe]", eq_residual(phi, lambda, probe, EqVariant::eq4, &*conf));
    const double push = conformal_push(phi, lambda, *conf).residual;
    rows.push_back({"conformal_push", push, 0.0, push, true});
  }
  const double killing = killing_residual(phi, lambda, ModifierPair::zero());
  rows.push_back({"killing", killing, 0.0, killing, false});
  return rows;
}

struct TraceTally {
  int feasible = 0;
  int violations = 0;
};

void append_trace(std::ostringstream& csv, const Scenario& s, BoundaryCondition bc,
                  FeasibilityVariant variant, const OptimizeResult& r, double lambda2, bool checked,
                  TraceTally& tally) {
  const char* name = variant == FeasibilityVariant::interior ? "interior" : "conformal";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const TracePoint& t = r.trace[i];
    const double bound = 0.5 * t.inf_scalar;
    bool violation = false;
    if (t.feasible) {
      ++tally.feasible;
      violation = checked && (bound > lambda2 + s.tol.report ||
                              (t.inf_with_q && *t.inf_with_q > lambda2 + s.tol.report));
      if (violation) ++tally.violations;
    }
    csv << csv_text(s.name) << ',' << to_string(bc) << ',' << name << ',' << i << ','
        << (t.feasible ? 1 : 0) << ',' << format_double(t.margin) << ','
        << format_double(t.inf_scalar) << ',' << format_double(bound) << ','
        << optional_cell(t.inf_with_q) << ',' << format_double(t.best_so_far) << ','
        << (violation ? 1 : 0) << '\n';
  }
}

json report_json(const BoundReport& rep) {
  json j;
  j["bc"] = to_string(rep.bc);
  j["n_cells"] = rep.n_cells;
  j["lambda_min"] = rep.lambda_min;
  j["lambda_min_squared"] = rep.lambda_min_squared;
  j["tol_report"] = rep.tol_report;
  j["entries"] = json::array();
  for (const BoundEntry& e : rep.entries) {
    j["entries"].push_back({{"name", e.name},
                            {"value", optional_json(e.value)},
                            {"margin", std::isfinite(e.margin) ? json(e.margin) : json()},
                            {"feasible", e.feasible},
                            {"experimental", e.experimental},
                            {"pass", e.pass},
                            {"note", e.note}});
  }
  j["aps_gap"] = optional_json(rep.aps_gap);
  j["limiting"] = json::array();
  for (const LimitingDisjuncts& l : rep.limiting) {
    j["limiting"].push_back(
        {{"side", to_string(l.side)}, {"h_minus_du", l.h_minus_du}, {"h", l.h}});
  }
  j["q_excluded"] = rep.q_excluded;
  j["pass"] = rep.all_pass();
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CommandResult spectrum_command(const Scenario& s) {
  const SurfacePtr surface = resolve_surface(s);
  CommandResult r;
  std::ostringstream csv;
  csv << "n_cells,bc,mode,index,lambda\n";
  for (BoundaryCondition bc : s.bcs) {
    for (int n : s.sizes) {
      const Spectrum sp = aggregate(surface, bc, s.k_max, n);
      warn_cutoff(sp, s, r);
      for (const Eigenpair& p : sp.pairs) {
        csv << n << ',' << to_string(bc) << ',' << format_double(p.mode.k()) << ',' << p.index
            << ',' << format_double(p.lambda) << '\n';
      }
    }
  }
  r.documents.push_back({"spectrum.csv", csv.str()});
  return r;
}

CommandResult verify_command(const Scenario& s) {
  const SurfacePtr surface = resolve_surface(s);
  const std::optional<ConformalRescaling> conf = resolve_rescaling(s, surface);
  CommandResult r;
  std::ostringstream out;
  for (BoundaryCondition bc : s.bcs) {
    std::vector<Row> previous;
    for (std::size_t g = 0; g < s.sizes.size(); ++g) {
      const int n = s.sizes[g];
      const bool finest = g + 1 == s.sizes.size();
      const Solved x = solve(surface, bc, s.k_max, n);
      warn_cutoff(x.spectrum, s, r);
      const std::vector<Row> rows = identity_rows(x, conf);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        const bool pass = !row.checked || row.residual <= s.tol.identity;
        json j = {{"scenario", s.name},    {"bc", to_string(bc)},   {"n_cells", n},
                  {"identity", row.identity}, {"left", row.left},   {"right", row.right},
                  {"residual", row.residual}};
        j["threshold"] = row.checked ? json(s.tol.identity) : json();
        j["order"] = json();
        if (g > 0 && row.residual > 0.0 && previous[i].residual > 0.0) {
          j["order"] = std::log(previous[i].residual / row.residual) /
                       std::log(static_cast<double>(n) / s.sizes[g - 1]);
        }
        j["checked"] = row.checked && finest;
        j["pass"] = pass;
        out << j.dump() << '\n';
        if (finest && !pass) {
          r.failures.push_back("identity " + row.identity + " (" + to_string(bc) + ", N = " +
                               std::to_string(n) + "): residual " + format_double(row.residual) +
                               " above " + format_double(s.tol.identity));
        }
      }
      previous = rows;
      if (bc == BoundaryCondition::aps_minus) {
        const BoundReport rep = evaluate_bounds(x.spectrum, x.phi, {}, s.tol.report);
        const double gap = rep.aps_gap.value_or(std::numeric_limits<double>::quiet_NaN());
        const bool pass = gap > 0.0;
        json j = {{"scenario", s.name}, {"bc", to_string(bc)}, {"n_cells", n},
                  {"identity", "strict APS gap"}, {"value", gap},
                  {"checked", finest}, {"pass", pass}};
        out << j.dump() << '\n';
        if (finest && !pass) r.failures.push_back("strict APS gap is not positive");
      }
    }
  }
  r.documents.push_back({"verify.jsonl", out.str()});
  return r;
}

CommandResult bounds_command(const Scenario& s) {
  const SurfacePtr surface = resolve_surface(s);
  CommandResult r;
  const int n = s.sizes.back();
  json doc;
  doc["scenario"] = s.name;
  doc["geometry"] = s.geometry;
  doc["reports"] = json::array();
  std::ostringstream csv, trace;
  csv << "scenario,bc,n_cells,lambda_min_squared,bound,value,margin,feasible,experimental,pass\n";
  trace << "scenario,bc,variant,eval,feasible,margin,inf_scalar,bound_scalar,inf_with_q,"
           "best_so_far,violation\n";
  bool all_pass = true;
  for (BoundaryCondition bc : s.bcs) {
    const Solved x = solve(surface, bc, s.k_max, n);
    warn_cutoff(x.spectrum, s, r);
    ModifierChoice choice;
    json optimizer;
    if (s.optimize_bounds) {
      const EnergyMomentum q = energy_momentum(x.phi);
      const double lambda2 = x.spectrum.lambda_min_squared();
      for (FeasibilityVariant v : {FeasibilityVariant::interior, FeasibilityVariant::conformal}) {
        const OptimizeResult o =
            optimize_modifiers(*surface, v, s.budget, x.phi.nodes(), &x.phi, &q);
        const bool checked = !is_experimental(bc) &&
                             (v == FeasibilityVariant::interior || is_local(bc));
        TraceTally tally;
        append_trace(trace, s, bc, v, o, lambda2, checked, tally);
        const char* name = v == FeasibilityVariant::interior ? "interior" : "conformal";
        optimizer[name] = {{"achieved", o.achieved},
                           {"feasible_found", o.feasible_found},
                           {"evaluations", o.trace.size()},
                           {"feasible_points", tally.feasible},
                           {"checked", checked},
                           {"violations", tally.violations},
                           {"parameters", o.best.parameters}};
        if (tally.violations > 0) {
          r.failures.push_back(std::to_string(tally.violations) + " optimizer trace points (" +
                               name + ", " + to_string(bc) + ") exceed lambda_min^2 + tol");
        }
        (v == FeasibilityVariant::interior ? choice.interior : choice.conformal) = o.best;
      }
    }
    const BoundReport rep = evaluate_bounds(x.spectrum, x.phi, choice, s.tol.report);
    json j = report_json(rep);
    j["minimum_at_cutoff"] = x.spectrum.minimum_at_cutoff;
    j["fundamental_mode"] = x.spectrum.fundamental.mode.k();
    if (s.optimize_bounds) j["optimizer"] = optimizer;
    doc["reports"].push_back(j);
    for (const BoundEntry& e : rep.entries) {
      csv << csv_text(s.name) << ',' << to_string(bc) << ',' << n << ','
          << format_double(rep.lambda_min_squared) << ',' << e.name << ','
          << optional_cell(e.value) << ',' << format_double(e.margin) << ','
          << (e.feasible ? 1 : 0) << ',' << (e.experimental ? 1 : 0) << ',' << (e.pass ? 1 : 0)
          << '\n';
      if (!e.pass) {
        r.failures.push_back("bound " + e.name + " (" + to_string(bc) + ") exceeds lambda_min^2 = " +
                             format_double(rep.lambda_min_squared));
      }
    }
    all_pass = all_pass && rep.all_pass();
  }
  doc["pass"] = all_pass && r.failures.empty();
  r.documents.push_back({"bounds.json", doc.dump(2) + "\n"});
  r.documents.push_back({"bounds.csv", csv.str()});
  if (s.optimize_bounds) r.documents.push_back({"optimizer_trace.csv", trace.str()});
  return r;
}

CommandResult convergence_command(const Scenario& s) {
  const SurfacePtr surface = resolve_surface(s);
  CommandResult r;
  std::ostringstream csv;
  csv << "scenario,bc,n_cells,lambda_min,mode,order,drift,converged\n";
  for (BoundaryCondition bc : s.bcs) {
    for (const ConvergenceRow& row : convergence_study(surface, bc, s.k_max, s.sizes)) {
      csv << csv_text(s.name) << ',' << to_string(bc) << ',' << row.n_cells << ','
          << format_double(row.lambda_min) << ',' << format_double(row.mode_k) << ','
          << optional_cell(row.order) << ',' << optional_cell(row.drift) << ','
          << (row.converged ? 1 : 0) << '\n';
    }
  }
  r.documents.push_back({"convergence.csv", csv.str()});
  return r;
}

CommandResult catalog_command() {
  CommandResult r;
  std::string text;
  for (const std::string& e : catalog_entries()) text += e + '\n';
  r.documents.push_back({"catalog.txt", text});
  return r;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw config_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw numerical_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Dirac spectra of warped surfaces and lower bounds for the first eigenvalue"};
  cli.require_subcommand(1);

  std::string config;
  Overrides o;
  std::string geometry, bc, sizes, conformal_u, out_dir;
  double k_max = 0.0, tol_report = 0.0;
  int budget = 0;
  struct Flags {
    CLI::Option *geometry, *bc, *sizes, *k_max, *conformal_u, *budget, *out, *tol_report;
  };
  std::vector<Flags> flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "scenario JSON file")->check(CLI::ExistingFile);
    Flags f;
    f.geometry = sub->add_option("--geometry", geometry,
                                 "hemisphere, cap:<r1>, disk, annulus:<r0>,<r1>, cylinder:<L>, csv:<path>");
    f.bc = sub->add_option("--bc", bc, "local+, local-, aps-, aps+ (comma list)");
    f.sizes = sub->add_option("--N", sizes, "grid sizes, ascending comma list");
    f.k_max = sub->add_option("--kmax", k_max, "Fourier cutoff |k| <= kmax (default 12.5)");
    f.conformal_u = sub->add_option("--conformal-u", conformal_u,
                                    "conformal factor: const:<c>, poly:<c0>,<c1>,..., cos:<amp>");
    sub->add_flag("--optimize-bounds", o.optimize_bounds, "search modifier pairs");
    f.budget = sub->add_option("--budget", budget, "optimizer evaluations per variant");
    f.out = sub->add_option("--out", out_dir, "output directory (default: stdout)");
    f.tol_report = sub->add_option("--tol-report", tol_report, "bound check tolerance");
    flags.push_back(f);
  };

  CLI::App* spectrum = cli.add_subcommand("spectrum", "eigenvalues of every mode (CSV)");
  CLI::App* verify = cli.add_subcommand("verify", "identity residuals of the fundamental pair (JSONL)");
  CLI::App* bounds = cli.add_subcommand("bounds", "lower bounds for lambda_min^2 (JSON + CSV)");
  CLI::App* convergence = cli.add_subcommand("convergence", "lambda_min under refinement (CSV)");
  CLI::App* catalog = cli.add_subcommand("catalog", "list built-in geometries");
  for (CLI::App* sub : {spectrum, verify, bounds, convergence}) add_common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    cli.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    CommandResult result;
    if (catalog->parsed()) {
      result = catalog_command();
    } else {
      CLI::App* sub = nullptr;
      std::size_t which = 0;
      for (CLI::App* c : {spectrum, verify, bounds, convergence}) {
        if (c->parsed()) sub = c;
        if (!sub) ++which;
      }
      const Flags& f = flags[which];
      if (*f.geometry) o.geometry = geometry;
      if (*f.bc) o.bc = bc;
      if (*f.sizes) o.sizes = sizes;
      if (*f.k_max) o.k_max = k_max;
      if (*f.conformal_u) o.conformal_u = conformal_u;
      if (*f.budget) o.budget = budget;
      if (*f.out) o.out = out_dir;
      if (*f.tol_report) o.tol_report = tol_report;

      Scenario s = config.empty() ? Scenario{} : load_scenario(config);
      apply(s, o);
      validate(s);
      if (sub == spectrum) result = spectrum_command(s);
      if (sub == verify) result = verify_command(s);
      if (sub == bounds) result = bounds_command(s);
      if (sub == convergence) result = convergence_command(s);
      if (s.out) {
        std::filesystem::create_directories(*s.out);
        for (const Document& d : result.documents) write_atomic(*s.out / d.file, d.content);
      } else if (!result.documents.empty()) {
        out << result.documents.front().content;
      }
    }
    if (catalog->parsed()) out << result.documents.front().content;
    for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
    for (const std::string& f : result.failures) err << "check failed: " << f << '\n';
    return result.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::numerical ? exit_numerical : exit_config;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace spinspec::app
