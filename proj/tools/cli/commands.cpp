#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "gcomp/errors.hpp"
#include "gcomp/fixtures.hpp"
#include "gcomp/ibp.hpp"
#include "gcomp/limits.hpp"
#include "gcomp/numeric.hpp"
#include "gcomp/quadrature.hpp"
#include "gcomp/reproduce.hpp"
#include "json.hpp"

namespace gcomp::cli {

namespace {

using nlohmann::ordered_json;
using detail::format_double;

constexpr const char* kSeedEnv = "GCOMP_SEED";

struct Context {
  VectorSet set;
  std::string set_label;
  SeedPlan plan;
  RunOptions options;
};

bool is_builtin(const std::string& name) {
  for (const auto& f : fixture_names()) {
    if (f == name) return true;
  }
  return false;
}

VectorSet load_set(const RunConfig& c) {
  Matrix m = is_builtin(c.set) ? (c.set == "x_plus" ? fixture(c.set).to_matrix() : fixture_raw(c.set))
                               : read_matrix_file(c.set);
  if (c.normalize) m = normalize_columns(m);
  return build_set(m);
}

Context context(const RunConfig& c, std::size_t default_samples = SeedPlan::kDefaultReplications) {
  Context ctx{load_set(c), c.set + (c.normalize ? " (normalized)" : ""), {}, {c.threads}};
  ctx.plan.master_seed = c.seed.value_or(SeedPlan::kDefaultSeed);
  ctx.plan.replications = c.samples.value_or(default_samples);
  validate(ctx.plan);
  return ctx;
}

ModelParams params_for(const RunConfig& c, const VectorSet& set) {
  return make_params(set, parse_variant(c.variant), c.m.value_or(set.dim()), c.beta, c.sign, c.c3);
}

ordered_json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}, {"skipped", e.skipped}};
}

ordered_json metadata(const RunConfig& c, const Context& ctx, bool with_model = true) {
  ordered_json j;
  j["generator"] = NormalStream::kGeneratorName;
  j["seed"] = ctx.plan.master_seed;
  j["seed_source"] = c.seed_source;
  j["samples"] = ctx.plan.replications;
  j["set"] = ctx.set_label;
  j["n"] = ctx.set.dim();
  j["l"] = ctx.set.size();
  if (with_model) {
    j["variant"] = c.variant;
    j["m"] = c.m.value_or(ctx.set.dim());
    j["beta"] = c.beta;
    j["sign"] = c.sign;
    if (c.variant == "lifted") j["c3"] = c.c3;
  }
  return j;
}

std::vector<std::string> metadata_lines(const ordered_json& meta) {
  std::vector<std::string> lines;
  for (const auto& [k, v] : meta.items()) lines.push_back(k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()));
  return lines;
}

// Writes `text` to --out if given, otherwise to `out`.
void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + c.out + "'");
  f << text;
  if (!f.flush()) throw std::runtime_error("failed writing '" + c.out + "'");
}

Format format_of(const RunConfig& c, Format fallback) {
  if (!c.format) return fallback;
  if (*c.format == "csv") return Format::Csv;
  if (*c.format == "json") return Format::Json;
  return Format::Text;
}

ordered_json report_json(const BoundReport& r, const ordered_json& parameters, const ordered_json& meta) {
  ordered_json j;
  j["check"] = r.name;
  j["lhs"] = estimate_json(r.lhs);
  j["rhs"] = estimate_json(r.rhs);
  j["direction"] = r.direction == Direction::LhsLeqRhs ? "lhs<=rhs" : "lhs>=rhs";
  j["margin"] = r.margin;
  j["combined_se"] = r.combined_se;
  j["pass"] = r.pass;
  j["parameters"] = parameters;
  j["provenance"] = meta;
  return j;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  double v[3];
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find(':', pos) : text.size();
    if (end == std::string::npos) throw ValidationError("t-grid must look like start:stop:step, got '" + text + "'");
    const std::string part = text.substr(pos, end - pos);
    char* stop = nullptr;
    v[k] = std::strtod(part.c_str(), &stop);
    if (part.empty() || *stop != '\0') throw ValidationError("t-grid: bad number '" + part + "'");
    pos = end + 1;
  }
  const auto g = make_grid(v[0], v[1], v[2]);
  if (g.front() < 0.0 || g.back() > 1.0) throw DomainError("t-grid must lie within [0, 1]");
  return g;
}

int cmd_estimate(const RunConfig& c, std::ostream& out) {
  if (!c.t) throw ValidationError("estimate needs --t");
  const Context ctx = context(c);
  const ModelParams p = params_for(c, ctx.set);
  const double t = *c.t;
  Estimate e;
  std::string quantity;
  if (c.route == "direct") {
    e = psi_direct(ctx.set, p, t, ctx.plan, ctx.options);
    quantity = "psi_direct";
  } else if (c.route == "standard") {
    e = dpsi_standard(ctx.set, p, t, ctx.plan, ctx.options);
    quantity = "dpsi_standard";
  } else {
    e = dpsi_computed(ctx.set, p, t, ctx.plan, ctx.options);
    quantity = "dpsi_computed";
  }
  const ordered_json meta = metadata(c, ctx);
  if (format_of(c, Format::Json) == Format::Csv) {
    std::ostringstream s;
    for (const auto& line : metadata_lines(meta)) s << "# " << line << '\n';
    s << "quantity,t,mean,std_error,n,skipped\n"
      << quantity << ',' << format_double(t) << ',' << format_double(e.mean) << ',' << format_double(e.std_error)
      << ',' << e.n << ',' << e.skipped << '\n';
    emit(c, out, s.str());
    return kOk;
  }
  ordered_json j;
  j["quantity"] = quantity;
  j["t"] = t;
  j["estimate"] = estimate_json(e);
  j["metadata"] = meta;
  emit(c, out, j.dump(2) + "\n");
  return kOk;
}

int cmd_curve(const RunConfig& c, std::ostream& out) {
  const Context ctx = context(c);
  const ModelParams p = params_for(c, ctx.set);
  const std::vector<double> grid = parse_grid(c.t_grid);
  const CurveResult curve = integrate_curve(ctx.set, p, grid, ctx.plan, ctx.options);
  const bool lifted = p.variant == Variant::Lifted;
  const std::size_t n = ctx.set.dim();
  auto adjusted = [&](double v) { return v > 0.0 ? format_double(adjusted_value(v, p.beta, p.c3, n)) : "nan"; };

  ordered_json meta = metadata(c, ctx);
  meta["t_grid"] = c.t_grid;
  meta["skipped"] = curve.skipped;
  meta["standard_route_nodes"] = "clamp(t, 0.01, 0.99)";

  if (format_of(c, Format::Csv) == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      ordered_json r;
      r["t"] = grid[k];
      r["dpsi_standard"] = estimate_json(curve.dpsi_standard[k]);
      r["dpsi_computed"] = estimate_json(curve.dpsi_computed[k]);
      r["psi_int_standard"] = estimate_json(curve.psi_from_standard[k]);
      r["psi_int_computed"] = estimate_json(curve.psi_from_computed[k]);
      r["psi_direct"] = estimate_json(curve.psi_direct[k]);
      r["quad_error_standard"] = curve.quad_error_standard[k];
      r["quad_error_computed"] = curve.quad_error_computed[k];
      if (lifted) {
        r["adjusted_int_standard"] = adjusted_value(curve.psi_from_standard[k].mean, p.beta, p.c3, n);
        r["adjusted_int_computed"] = adjusted_value(curve.psi_from_computed[k].mean, p.beta, p.c3, n);
        r["adjusted_direct"] = adjusted_value(curve.psi_direct[k].mean, p.beta, p.c3, n);
      }
      rows.push_back(std::move(r));
    }
    ordered_json j;
    j["metadata"] = meta;
    j["rows"] = std::move(rows);
    emit(c, out, j.dump(2) + "\n");
    return kOk;
  }

  std::ostringstream s;
  for (const auto& line : metadata_lines(meta)) s << "# " << line << '\n';
  s << "t,dpsi_standard,dpsi_standard_se,dpsi_computed,dpsi_computed_se,psi_int_standard,psi_int_computed,"
       "psi_direct,psi_direct_se";
  if (lifted) s << ",adjusted_int_standard,adjusted_int_computed,adjusted_direct";
  s << '\n';
  for (std::size_t k = 0; k < grid.size(); ++k) {
    s << format_double(grid[k]) << ',' << format_double(curve.dpsi_standard[k].mean) << ','
      << format_double(curve.dpsi_standard[k].std_error) << ',' << format_double(curve.dpsi_computed[k].mean) << ','
      << format_double(curve.dpsi_computed[k].std_error) << ',' << format_double(curve.psi_from_standard[k].mean)
      << ',' << format_double(curve.psi_from_computed[k].mean) << ',' << format_double(curve.psi_direct[k].mean)
      << ',' << format_double(curve.psi_direct[k].std_error);
    if (lifted) {
      s << ',' << adjusted(curve.psi_from_standard[k].mean) << ',' << adjusted(curve.psi_from_computed[k].mean) << ','
        << adjusted(curve.psi_direct[k].mean);
    }
    s << '\n';
  }
  emit(c, out, s.str());
  return kOk;
}

int cmd_limits(const RunConfig& c, std::ostream& out) {
  const Context ctx = context(c);
  const std::size_t m = c.m.value_or(ctx.set.dim());
  const bool general = parse_variant(c.variant) != Variant::Spherical;
  const double c3s = c.c3s.value_or(c.beta * c.c3);
  std::vector<std::string> checks = c.checks;
  if (checks.empty()) {
    checks = {"slepian", "gordon", "lifted-slepian", "lifted-gordon"};
    if (ctx.set.unit_flag()) checks.push_back("chain");
  }
  const ordered_json meta = metadata(c, ctx, false);
  ordered_json reports = ordered_json::array();
  bool all = true;
  for (const auto& name : checks) {
    BoundReport r;
    ordered_json params;
    if (name == "slepian" || name == "gordon") {
      const int s = name == "slepian" ? 1 : -1;
      r = slepian_gordon_check(ctx.set, m, s, ctx.plan, general, ctx.options);
      params = {{"sign", s}, {"general", general}, {"m", m}};
    } else if (name == "lifted-slepian" || name == "lifted-gordon") {
      const int s = name == "lifted-slepian" ? 1 : -1;
      r = lifted_comparison_check(ctx.set, m, s, c3s, ctx.plan, ctx.options);
      params = {{"sign", s}, {"c3s", c3s}, {"m", m}};
    } else if (name == "chain") {
      r = chain_bound_check(ctx.set, m, c.sign, c3s, ctx.plan, ctx.options);
      params = {{"sign", c.sign}, {"c3s", c3s}, {"m", m}};
    } else {
      throw ValidationError("unknown check '" + name + "'");
    }
    all = all && r.pass;
    reports.push_back(report_json(r, params, meta));
  }
  emit(c, out, reports.dump(2) + "\n");
  return all ? kOk : kCheckFailed;
}

int cmd_reproduce(const RunConfig& c, std::ostream& out) {
  const ReferenceTable& table = reference(c.table);
  SeedPlan plan;
  plan.master_seed = c.seed.value_or(SeedPlan::kDefaultSeed);
  plan.replications = c.samples.value_or(table.samples);
  validate(plan);
  const TableRun run = reproduce(table, plan, {c.threads});

  if (format_of(c, Format::Text) == Format::Json) {
    ordered_json j;
    j["table"] = table.id;
    j["caption"] = table.caption;
    j["generator"] = NormalStream::kGeneratorName;
    j["seed"] = plan.master_seed;
    j["seed_source"] = c.seed_source;
    j["samples"] = plan.replications;
    ordered_json cells = ordered_json::array();
    for (const auto& cell : run.cells) {
      cells.push_back({{"t", cell.t},
                       {"column", to_string(cell.column)},
                       {"expected", cell.expected},
                       {"tolerance", cell.tolerance},
                       {"value", cell.value},
                       {"std_error", cell.std_error},
                       {"pass", cell.pass}});
    }
    j["cells"] = std::move(cells);
    j["pass"] = run.pass();
    emit(c, out, j.dump(2) + "\n");
    return run.pass() ? kOk : kCheckFailed;
  }

  std::ostringstream s;
  s << "# reproduce " << table.id << ": " << table.caption << '\n';
  s << "# generator: " << NormalStream::kGeneratorName << '\n';
  s << "# seed: " << plan.master_seed << " (" << c.seed_source << ")\n";
  s << "# samples: " << plan.replications << '\n';
  s << "# cell: value [expected +- tolerance] ok|FAIL\n";
  std::size_t col = 0;
  const std::size_t width = table.rows.front().cells.size();
  for (const auto& cell : run.cells) {
    if (col == 0) s << "t=" << fixed(cell.t, 1);
    s << "  " << to_string(cell.column) << "=" << fixed(cell.value) << " [" << fixed(cell.expected) << "+-"
      << fixed(cell.tolerance, 2) << "] " << (cell.pass ? "ok" : "FAIL");
    if (++col == width) {
      s << '\n';
      col = 0;
    }
  }
  s << table.id << ": " << run.cells.size() - run.failures() << "/" << run.cells.size() << " cells pass\n";
  for (const auto& cell : run.cells) {
    if (!cell.pass) {
      s << "FAILED t=" << fixed(cell.t, 1) << ' ' << to_string(cell.column) << ": " << fixed(cell.value)
        << " vs " << fixed(cell.expected) << " (tolerance " << fixed(cell.tolerance, 2) << ")\n";
    }
  }
  emit(c, out, s.str());
  return run.pass() ? kOk : kCheckFailed;
}

int cmd_verify_identities(const RunConfig& c, std::ostream& out) {
  const Context ctx = context(c);
  const ModelParams p = params_for(c, ctx.set);
  const std::vector<double> ts{0.25, 0.5, 0.75};
  std::set<std::size_t> is{0, ctx.set.size() - 1};
  std::set<std::size_t> js{0, p.m - 1};
  std::vector<IbpCase> cases;
  for (Identity id : identities_for(p.variant)) {
    for (std::size_t i : is) {
      for (std::size_t j : js) cases.push_back({id, i, j});
    }
  }
  const auto results = verify_ibp(ctx.set, p, ts, cases, ctx.plan, ctx.options);
  ordered_json rows = ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    const double z = r.z();
    const bool ok = std::abs(z) <= 4.0;
    all = all && ok;
    rows.push_back({{"identity", to_string(r.which.id)},
                    {"i", r.which.i + 1},
                    {"j", r.which.j + 1},
                    {"t", r.t},
                    {"lhs", estimate_json(r.lhs)},
                    {"rhs", estimate_json(r.rhs)},
                    {"z", z},
                    {"pass", ok}});
  }
  ordered_json j;
  j["metadata"] = metadata(c, ctx);
  j["results"] = std::move(rows);
  j["pass"] = all;
  emit(c, out, j.dump(2) + "\n");
  return all ? kOk : kCheckFailed;
}

int cmd_export_fixture(const RunConfig& c, std::ostream& out) {
  const Matrix m = c.raw ? fixture_raw(c.fixture) : fixture(c.fixture).to_matrix();
  std::ostringstream s;
  write_matrix(s, m,
               {c.fixture + (c.raw ? " as printed (4 decimals)" : " as used"),
                std::to_string(m.rows) + " rows x " + std::to_string(m.cols) + " columns; columns are the vectors"});
  emit(c, out, s.str());
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Monte Carlo verification of Gaussian comparison inequalities", "gcomp"};
  app.require_subcommand(1);

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--set", c.set, "x_plus, x_minus, or a matrix file (columns are vectors)")->capture_default_str();
    sub->add_flag("--normalize", c.normalize, "scale every vector to unit norm");
    sub->add_option("--variant", c.variant)->check(CLI::IsMember({"spherical", "general", "lifted"}))
        ->capture_default_str();
    sub->add_option("--beta", c.beta)->capture_default_str();
    sub->add_option("--sign", c.sign)->check(CLI::IsMember({-1, 1}))->capture_default_str();
    sub->add_option("--c3", c.c3, "lifting exponent (lifted variant)")->capture_default_str();
    sub->add_option("--m", c.m, "rows of G (default: set dimension)");
    sub->add_option("--samples", c.samples, "replications N");
    sub->add_option("--seed", c.seed, std::string("master seed (default: $") + kSeedEnv + " or built-in)");
    sub->add_option("--threads", c.threads, "worker threads (0: auto)");
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json", "text"}));
  };

  CLI::App* est = app.add_subcommand("estimate", "one estimate at one t");
  common(est);
  est->add_option("--t", c.t)->required();
  est->add_option("--route", c.route, "direct, standard or computed")
      ->check(CLI::IsMember({"direct", "standard", "computed"}))
      ->capture_default_str();

  CLI::App* curve = app.add_subcommand("curve", "psi and both derivative routes over a t-grid (CSV)");
  common(curve);
  curve->add_option("--t-grid", c.t_grid, "start:stop:step, starting at 0")->capture_default_str();

  CLI::App* limits = app.add_subcommand("limits", "large-beta comparison inequalities");
  common(limits);
  limits->add_option("--check", c.checks, "slepian, gordon, lifted-slepian, lifted-gordon, chain")
      ->check(CLI::IsMember({"slepian", "gordon", "lifted-slepian", "lifted-gordon", "chain"}));
  limits->add_option("--c3s", c.c3s, "exponent of the lifted functionals (default beta*c3)");

  CLI::App* rep = app.add_subcommand("reproduce", "rerun a reference table and compare every cell");
  rep->add_option("table", c.table, "table id")->required();
  rep->add_option("--samples", c.samples, "replications (default: the table's)");
  rep->add_option("--seed", c.seed);
  rep->add_option("--threads", c.threads);
  rep->add_option("--out", c.out);
  rep->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* ibp = app.add_subcommand("verify-identities", "both sides of the integration-by-parts identities");
  common(ibp);

  CLI::App* exp = app.add_subcommand("export-fixture", "write a built-in vector set as a text matrix");
  exp->add_option("name", c.fixture, "x_plus or x_minus")->required();
  exp->add_flag("--raw", c.raw, "the printed 4-decimal values, without renormalization");
  exp->add_option("--out", c.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  if (c.seed) {
    c.seed_source = "flag";
  } else if (const char* env = std::getenv(kSeedEnv)) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "error: " << kSeedEnv << " is not an unsigned integer\n";
      return kValidation;
    }
    c.seed_source = std::string("env ") + kSeedEnv;
  }

  try {
    if (est->parsed()) return cmd_estimate(c, out);
    if (curve->parsed()) return cmd_curve(c, out);
    if (limits->parsed()) return cmd_limits(c, out);
    if (rep->parsed()) return cmd_reproduce(c, out);
    if (ibp->parsed()) return cmd_verify_identities(c, out);
    if (exp->parsed()) return cmd_export_fixture(c, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kValidation;
}

}  // namespace gcomp::cli
