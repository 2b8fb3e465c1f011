#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "io.hpp"
#include "selftest.hpp"
#include "thermoforge/cltsim.hpp"
#include "thermoforge/error.hpp"
#include "thermoforge/germfit.hpp"
#include "thermoforge/rigidity.hpp"

#ifndef THERMOFORGE_VERSION
#define THERMOFORGE_VERSION "0.0.0"
#endif

namespace thermoforge::cli {

namespace {

struct Options {
  std::string out = "json";
  std::string output;

  std::string potential;
  std::optional<double> t;
  std::size_t order = 2;
  std::string grid;

  double tstar = 1.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  std::size_t n = 0;

  std::string n_list;

  std::string family;
  double fa = 2.0;
  double fb = 3.0;
  double fc = 1.0;
  double mphi = 0.0;

  std::string m_list;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  std::string spec;
  std::string windows;
};

struct Output {
  json body;
  CsvTable table;
};

struct Context {
  Options& opt;
  RunManifest& manifest;
  std::istream& in;
};

json load_json(Context& ctx, const std::string& path) {
  const InputFile f = read_input(path, ctx.in);
  ctx.manifest.inputs[path] = f.digest;
  try {
    return json::parse(f.text);
  } catch (const json::parse_error& e) {
    throw DomainError("input " + path + " is not valid JSON: " + e.what());
  }
}

std::string default_table3_list() {
  std::string s;
  for (int k = 1; k <= 40; ++k) s += (k > 1 ? "," : "") + fmt::format("1e{}", k);
  return s;
}

Output cmd_pressure(Context& ctx) {
  const Options& o = ctx.opt;
  const json input = load_json(ctx, o.potential);
  const CylinderPotential pot = potential_from_json(input);
  double t = 1.0;
  if (o.t) {
    t = *o.t;
  } else if (input.is_object() && input.contains("t_star")) {
    t = input.at("t_star").get<double>();
  }
  const std::vector<double> grid = o.grid.empty() ? std::vector<double>{t}
                                                  : parse_grid(o.grid);
  const bool closed = pot.window() == 1 && pot.space().is_full_shift();
  if (!closed && o.order > 4) {
    throw DomainError(
        "derivatives above order 4 need a window-1 potential on the full shift");
  }

  Output res;
  res.table.schema = "pressure";
  res.table.columns = {"t", "method", "P"};
  for (std::size_t k = 1; k <= o.order; ++k) {
    res.table.columns.push_back(fmt::format("d{}", k));
  }
  json rows = json::array();
  for (double tt : grid) {
    const TaylorJet jet = closed ? pressure_jet(pot, tt, o.order)
                                 : finite_difference_jet(pot, tt, o.order);
    const char* method = closed ? "closed-form" : "finite-difference";
    rows.push_back({{"t", tt}, {"method", method}, {"jet", jet.derivs}});
    std::vector<std::string> row{fmt17(tt), method};
    for (double d : jet.derivs) row.push_back(fmt17(d));
    res.table.rows.push_back(std::move(row));
  }
  res.body["potential"] = potential_to_json(pot);
  res.body["order"] = o.order;
  res.body["results"] = rows;
  return res;
}

void fill_fit(Output& res, const FitResult& fit, const Germ& germ) {
  res.body["t_star"] = germ.t_star();
  res.body["germ"] = germ.coeffs();
  res.body["z"] = fit.z;
  res.body["potential"] = potential_to_json(fit.potential());
  res.body["achieved"] = jet_to_json(fit.achieved);
  res.body["residuals"] = fit.residuals;
  res.table.columns = {"symbol", "z"};
  for (std::size_t i = 0; i < fit.z.size(); ++i) {
    res.table.rows.push_back({std::to_string(i), fmt17(fit.z[i])});
  }
}

Output cmd_fit1(Context& ctx) {
  const Options& o = ctx.opt;
  const Germ germ(o.tstar, o.a0, o.a1);
  Output res;
  res.table.schema = "fit1";
  fill_fit(res, fit_level1(germ, o.n), germ);
  return res;
}

Output cmd_fit2(Context& ctx) {
  const Options& o = ctx.opt;
  const Germ germ(o.tstar, o.a0, o.a1, o.a2);
  const FitResult fit = fit_level2(germ, o.n);
  Output res;
  res.table.schema = "fit2";
  fill_fit(res, fit, germ);
  if (fit.feasible_a2) {
    res.body["feasible_a2"] = {fit.feasible_a2->first, fit.feasible_a2->second};
  }
  return res;
}

Output cmd_table3(Context& ctx) {
  const std::string list =
      ctx.opt.n_list.empty() ? default_table3_list() : ctx.opt.n_list;
  Output res;
  res.table.schema = "table3";
  res.table.columns = {"n",           "c_a",         "eta",
                       "residual_q0", "residual_q1", "iterations",
                       "offset"};
  json rows = json::array();
  for (double n : parse_real_list(list)) {
    const Table3Row r = table3_solve(n);
    const double offset = r.c_a + std::log(n) + std::log(std::log(n));
    rows.push_back({{"n", n},
                    {"c_a", r.c_a},
                    {"eta", r.eta},
                    {"residuals", r.residuals},
                    {"iterations", r.iterations},
                    {"offset", offset}});
    res.table.rows.push_back({fmt17(n), fmt17(r.c_a), fmt17(r.eta),
                              fmt17(r.residuals[0]), fmt17(r.residuals[1]),
                              std::to_string(r.iterations), fmt17(offset)});
  }
  res.body["rows"] = rows;
  return res;
}

Output cmd_rigidity(Context& ctx) {
  const Options& o = ctx.opt;
  if (o.family.empty() == o.potential.empty()) {
    throw DomainError("rigidity needs exactly one of --family or --potential");
  }
  std::optional<CandidateFunction> fn;
  json params;
  if (!o.family.empty()) {
    if (o.family != "fabc") throw DomainError("unknown family '" + o.family + "'");
    FabcFamily f{o.fa, o.fb, o.fc};
    f.validate();
    fn = f;
    params = {{"a", f.a}, {"b", f.b}, {"c", f.c}};
  } else {
    const CylinderPotential pot = potential_from_json(load_json(ctx, o.potential));
    params = potential_to_json(pot);
    fn = PotentialPressure{pot};
  }
  if (o.grid.empty()) throw DomainError("rigidity needs --grid");
  const RigidityReport rep = rigidity_inequalities(*fn, parse_grid(o.grid), o.mphi);

  Output res;
  res.table.schema = "rigidity";
  res.table.columns = {"t",          "flagged",     "F2",          "F3",
                       "F4",         "log_F2",      "D",           "ineq50_lhs",
                       "ineq50_rhs", "ineq50_holds", "ineq19_lhs", "ineq19_rhs",
                       "ineq19_holds", "tension"};
  json points = json::array();
  for (const auto& p : rep.points) {
    json jp = {{"t", p.t},
               {"flagged", p.flagged},
               {"F2", p.second},
               {"F3", p.third},
               {"F4", p.fourth},
               {"log_F2", std::isfinite(p.log_second) ? json(p.log_second) : json()},
               {"D", std::isfinite(p.d) ? json(p.d) : json()},
               {"ineq50", {{"lhs", p.ineq50_lhs}, {"rhs", p.ineq50_rhs}, {"holds", p.ineq50_holds}}},
               {"ineq19", {{"lhs", p.ineq19_lhs}, {"rhs", p.ineq19_rhs}, {"holds", p.ineq19_holds}}},
               {"tension", p.tension}};
    if (const auto* f = std::get_if<FabcFamily>(&*fn)) {
      jp["supporting_intercept"] = supporting_intercept(*f, p.t);
    }
    points.push_back(std::move(jp));
    res.table.rows.push_back(
        {fmt17(p.t), p.flagged ? "1" : "0", fmt17(p.second), fmt17(p.third),
         fmt17(p.fourth), fmt17(p.log_second), fmt17(p.d), fmt17(p.ineq50_lhs),
         fmt17(p.ineq50_rhs), p.ineq50_holds ? "1" : "0", fmt17(p.ineq19_lhs),
         fmt17(p.ineq19_rhs), p.ineq19_holds ? "1" : "0", fmt17(p.tension)});
  }
  json crossings = json::array();
  for (const auto& [lo, hi] : rep.unit_crossings) crossings.push_back({lo, hi});
  res.body["kind"] = rep.kind;
  res.body["params"] = params;
  res.body["m_phi"] = rep.m_phi;
  res.body["flagged_count"] = rep.flagged_count;
  res.body["unit_crossings"] = crossings;
  res.body["tension_rhs"] = rep.tension_rhs;
  res.body["points"] = points;
  return res;
}

Output cmd_cltsim(Context& ctx) {
  const Options& o = ctx.opt;
  const CylinderPotential pot = potential_from_json(load_json(ctx, o.potential));
  SimConfig cfg{pot, o.tstar, parse_size_list(o.m_list), o.samples,
                ctx.manifest.seed, o.threads};
  const CltReport rep = simulate_gm(cfg);

  Output res;
  res.table.schema = "cltsim";
  res.table.columns = {"m",    "ks_distance", "bound",    "within_bound",
                       "mean", "mean_stderr", "variance", "variance_stderr"};
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"m", r.m},
                    {"ks_distance", r.ks_distance},
                    {"bound", r.bound},
                    {"within_bound", r.within_bound},
                    {"mean", r.mean},
                    {"mean_stderr", r.mean_stderr},
                    {"variance", r.variance},
                    {"variance_stderr", r.variance_stderr}});
    res.table.rows.push_back({std::to_string(r.m), fmt17(r.ks_distance),
                              fmt17(r.bound), r.within_bound ? "1" : "0",
                              fmt17(r.mean), fmt17(r.mean_stderr),
                              fmt17(r.variance), fmt17(r.variance_stderr)});
  }
  res.body["t_star"] = o.tstar;
  res.body["delta"] = {rep.delta2, rep.delta3, rep.delta4};
  res.body["centered"] = rep.centered;
  res.body["centering_shift"] = rep.centering_shift;
  res.body["samples_per_m"] = rep.samples_per_m;
  res.body["rows"] = rows;
  res.body["first_compliant_m"] =
      rep.first_compliant_m ? json(*rep.first_compliant_m) : json();
  return res;
}

Output cmd_approx(Context& ctx) {
  const Options& o = ctx.opt;
  const DecayingPotentialSpec spec = decay_spec_from_json(load_json(ctx, o.spec));
  const double t = o.t.value_or(1.0);
  const auto rows = convergence_study(spec, t, parse_size_list(o.windows));

  Output res;
  res.table.schema = "approx";
  res.table.columns = {"window", "p_inf", "p_mid", "p_sup", "gap", "bound"};
  json jrows = json::array();
  for (const auto& r : rows) {
    jrows.push_back({{"window", r.window},
                     {"p_inf", r.p_inf},
                     {"p_mid", r.p_mid},
                     {"p_sup", r.p_sup},
                     {"gap", r.gap},
                     {"bound", r.bound}});
    res.table.rows.push_back({std::to_string(r.window), fmt17(r.p_inf),
                              fmt17(r.p_mid), fmt17(r.p_sup), fmt17(r.gap),
                              fmt17(r.bound)});
  }
  res.body["t"] = t;
  res.body["limit_pressure"] = limit_pressure(spec, t);
  res.body["rows"] = jrows;
  return res;
}

void add_output_flags(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", o.output, "Write to this file instead of stdout");
}

void record_flags(const CLI::App* sub, RunManifest& manifest) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "output") continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
    manifest.flags[name] = joined;
  }
}

void resolve_seed(const Options& o, RunManifest& manifest, bool uses_seed) {
  if (!uses_seed) return;
  manifest.has_seed = true;
  manifest.seed = o.seed;
  manifest.seed_source = "flag";
  if (const char* env = std::getenv("THERMOFORGE_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw DomainError("THERMOFORGE_SEED must be an unsigned integer");
    manifest.seed = v;
    manifest.seed_source = "env";
  }
}

void emit(const Output& res, const Options& o, const RunManifest& manifest,
          std::ostream& out) {
  std::ofstream file;
  std::ostream* dest = &out;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot write " + o.output);
    dest = &file;
  }
  if (o.out == "csv") {
    res.table.write(*dest, manifest);
  } else {
    json body = res.body;
    body["manifest"] = manifest.to_json();
    *dest << body.dump(2) << '\n';
  }
  dest->flush();
  if (!*dest) throw std::ios_base::failure("write failed");
}

int report(std::ostream& err, int code, const std::string& msg) {
  err << "thermoforge: error: " << msg << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Pressure functions of locally constant potentials"};
  app.name("thermoforge");
  app.set_version_flag("--version", THERMOFORGE_VERSION);
  app.require_subcommand(1, 1);

  using Handler = std::function<Output(Context&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  bool selftest = false;

  auto* pressure = app.add_subcommand("pressure", "Pressure and its derivatives");
  pressure->add_option("--potential", o.potential, "Potential spec JSON, - for stdin")
      ->required();
  pressure->add_option("--t", o.t, "Parameter t (default: t_star of the input or 1)");
  pressure->add_option("--order", o.order, "Highest derivative")
      ->check(CLI::Range(std::size_t{0}, kMaxJetOrder));
  pressure->add_option("--grid", o.grid, "a:b:step or comma list of t");
  add_output_flags(pressure, o);
  commands.emplace_back(pressure, cmd_pressure);

  auto* fit1 = app.add_subcommand("fit1", "Fit P and P' at t*");
  auto* fit2 = app.add_subcommand("fit2", "Fit P, P' and P'' at t*");
  for (auto* sub : {fit1, fit2}) {
    sub->add_option("--tstar", o.tstar, "Base point t*")->required();
    sub->add_option("--a0", o.a0, "Target P(t*)")->required();
    sub->add_option("--a1", o.a1, "Target P'(t*)")->required();
    sub->add_option("--n", o.n, "Alphabet size")->required();
    add_output_flags(sub, o);
  }
  fit2->add_option("--a2", o.a2, "Target P''(t*)")->required();
  commands.emplace_back(fit1, cmd_fit1);
  commands.emplace_back(fit2, cmd_fit2);

  auto* table3 = app.add_subcommand("table3", "Two-block solutions for t=1, a0=2, a1=1");
  table3->add_option("--n-list", o.n_list, "Comma list of multiplicities (default 1e1..1e40)");
  add_output_flags(table3, o);
  commands.emplace_back(table3, cmd_table3);

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity diagnostics on a grid");
  rigidity->add_option("--family", o.family, "Closed-form family (fabc)");
  rigidity->add_option("--a", o.fa, "Family parameter a");
  rigidity->add_option("--b", o.fb, "Family parameter b");
  rigidity->add_option("--c", o.fc, "Family parameter c");
  rigidity->add_option("--potential", o.potential, "Potential spec JSON, - for stdin");
  rigidity->add_option("--grid", o.grid, "a:b:step or comma list of t")->required();
  rigidity->add_option("--mphi", o.mphi, "Bound M_phi on the eigenfunction derivative");
  add_output_flags(rigidity, o);
  commands.emplace_back(rigidity, cmd_rigidity);

  auto* cltsim = app.add_subcommand("cltsim", "Monte Carlo check of the central limit theorem");
  cltsim->add_option("--potential", o.potential, "Potential spec JSON, - for stdin")
      ->required();
  cltsim->add_option("--tstar", o.tstar, "Base point t*")->required();
  cltsim->add_option("--m", o.m_list, "Orbit lengths, comma list")->required();
  cltsim->add_option("--samples", o.samples, "Samples per orbit length");
  cltsim->add_option("--seed", o.seed, "RNG seed (THERMOFORGE_SEED overrides)");
  cltsim->add_option("--threads", o.threads, "Worker cap, 0 for all cores");
  add_output_flags(cltsim, o);
  commands.emplace_back(cltsim, cmd_cltsim);

  auto* approx = app.add_subcommand("approx", "Locally constant approximation study");
  approx->add_option("--spec", o.spec, "Decay spec JSON, - for stdin")->required();
  approx->add_option("--t", o.t, "Parameter t (default 1)");
  approx->add_option("--windows", o.windows, "a:b or comma list")->required();
  add_output_flags(approx, o);
  commands.emplace_back(approx, cmd_approx);

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant checks");
  self->callback([&] { selftest = true; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (selftest) {
    bool ok = true;
    for (const auto& r : run_selftest()) {
      out << (r.passed ? "ok   " : "FAIL ") << r.name;
      if (!r.detail.empty()) out << "  (" << r.detail << ")";
      out << '\n';
      ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitFailure;
  }

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    RunManifest manifest;
    manifest.subcommand = sub->get_name();
    manifest.version = THERMOFORGE_VERSION;
    try {
      record_flags(sub, manifest);
      resolve_seed(o, manifest, sub == cltsim);
      Context ctx{o, manifest, in};
      const Output res = handler(ctx);
      emit(res, o, manifest, out);
      return kExitOk;
    } catch (const DomainError& e) {
      return report(err, kExitDomain, e.what());
    } catch (const NumericError& e) {
      return report(err, kExitNumeric, std::string("solver failed: ") + e.what());
    } catch (const json::exception& e) {
      return report(err, kExitDomain, std::string("malformed input: ") + e.what());
    } catch (const std::ios_base::failure& e) {
      const bool reading = std::string(e.what()).find("input") != std::string::npos;
      return report(err, reading ? kExitNoInput : kExitIo, e.what());
    } catch (const std::exception& e) {
      return report(err, kExitFailure, e.what());
    }
  }
  return kExitUsage;
}

}  // namespace thermoforge::cli
