#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "suites.hpp"
#include "svg.hpp"

#ifndef SIMPLEXDYN_VERSION
#define SIMPLEXDYN_VERSION "v0.1.0"
#endif

namespace simplexdyn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_dimension_error(ErrorCode c) {
  return c == ErrorCode::DimensionMismatch || c == ErrorCode::BadDimension ||
         c == ErrorCode::WrongDimension || c == ErrorCode::TooLarge;
}

[[noreturn]] void parse_fail(const std::string& what) { throw ConfigError(kParse, what); }
[[noreturn]] void dim_fail(const std::string& what) { throw ConfigError(kDimension, what); }

json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) parse_fail("cannot read " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(p.string() + ": " + e.what());
  }
}

json vec(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json one_based(const std::vector<int>& idx) {
  json a = json::array();
  for (int i : idx) a.push_back(i + 1);
  return a;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    parse_fail(std::string("key '") + key + "': " + e.what());
  }
}

Vector get_vector(const json& j, const char* key) {
  try {
    const auto v = j.at(key).get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  } catch (const json::exception& e) {
    parse_fail(std::string("key '") + key + "': " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  out << text;
}

std::string provenance(const RunContext& ctx) {
  return "simplexdyn " + std::string(version_string()) + " config_hash " + ctx.config_hash +
         " seed " + std::to_string(ctx.seed);
}

json stamp(const RunContext& ctx) {
  return {{"config_hash", ctx.config_hash}, {"seed", ctx.seed}, {"version", version_string()}};
}

bool has_matrix(const RunContext& ctx, const std::string& key) {
  return ctx.config.contains(key) || ctx.config.contains(key + "_file");
}

Composition composition_or_barycenter(const json& j, const char* key, int n) {
  if (!j.contains(key)) return Composition::barycenter(n);
  const Vector p = get_vector(j, key);
  if (p.size() != n) dim_fail(std::string(key) + " has " + std::to_string(p.size()) +
                              " entries, expected " + std::to_string(n));
  try {
    return Composition(p);
  } catch (const Error& e) {
    parse_fail(std::string(key) + ": " + e.what());
  }
}

}  // namespace

const char* version_string() { return SIMPLEXDYN_VERSION; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunContext load_context(const fs::path& config_file, const fs::path& out_dir, bool seed_required) {
  RunContext ctx;
  ctx.config = read_json_file(config_file);
  if (!ctx.config.is_object()) parse_fail("config must be a JSON object");
  ctx.config_dir = config_file.has_parent_path() ? config_file.parent_path() : fs::path(".");
  ctx.out_dir = out_dir;
  ctx.config_hash = fnv1a_hex(ctx.config.dump());
  if (ctx.config.contains("seed")) {
    if (!ctx.config["seed"].is_number_unsigned()) parse_fail("seed must be a non-negative integer");
    ctx.seed = ctx.config["seed"].get<std::uint64_t>();
  } else if (seed_required) {
    parse_fail("config needs a 'seed'");
  }
  return ctx;
}

PayoffMatrix parse_matrix_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("A"))
    parse_fail("matrix JSON needs keys 'n' and 'A'");
  if (!j["n"].is_number_integer()) parse_fail("'n' must be an integer");
  const long long n = j["n"].get<long long>();
  if (!j["A"].is_array()) parse_fail("'A' must be an array of rows");
  if (n < 2) dim_fail("n must be >= 2");
  if (static_cast<long long>(j["A"].size()) != n)
    dim_fail("A has " + std::to_string(j["A"].size()) + " rows, n = " + std::to_string(n));
  Matrix a(n, n);
  for (long long i = 0; i < n; ++i) {
    const json& row = j["A"][i];
    if (!row.is_array()) parse_fail("row " + std::to_string(i + 1) + " is not an array");
    if (static_cast<long long>(row.size()) != n)
      dim_fail("row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) + " entries");
    for (long long k = 0; k < n; ++k) {
      if (!row[k].is_number()) parse_fail("non-numeric entry in A");
      a(i, k) = row[k].get<double>();
    }
  }
  return PayoffMatrix(a);
}

PayoffMatrix load_matrix(const RunContext& ctx, const std::string& key) {
  const std::string file_key = key + "_file";
  if (ctx.config.contains(file_key)) {
    if (!ctx.config[file_key].is_string()) parse_fail(file_key + " must be a path string");
    fs::path p = ctx.config[file_key].get<std::string>();
    if (p.is_relative()) p = ctx.config_dir / p;
    return parse_matrix_json(read_json_file(p));
  }
  if (ctx.config.contains(key)) return parse_matrix_json(ctx.config[key]);
  parse_fail("config needs '" + key + "' or '" + file_key + "'");
}

json to_json(const TestReport& r) {
  return {{"name", r.name},          {"statistic", r.statistic}, {"threshold", r.threshold},
          {"direction", to_string(r.direction)}, {"pass", r.pass},
          {"seed", r.seed},          {"sizes", r.sizes},         {"detail", r.detail}};
}

int cmd_matrix_analyze(const RunContext& ctx, std::ostream& log) {
  const PayoffMatrix a = load_matrix(ctx, "matrix");
  const int n = a.n();
  json rep = stamp(ctx);
  rep["n"] = n;
  json rows = json::array();
  for (int i = 0; i < n; ++i) rows.push_back(vec(a.a().row(i).transpose()));
  rep["A"] = rows;

  const auto sc = sum_condition(a);
  rep["sum_condition"] = sc ? json(*sc) : json(nullptr);

  const auto d = decompose(a);
  if (d) {
    rep["decomposition"] = {{"lambda", d->lambda}, {"u", vec(d->u)}, {"v", vec(d->v)},
                            {"residual", d->residual}};
    if (d->lambda > 0.0) {
      const auto ps = interior_ne_decomposed(*d, n);
      rep["interior_ne_decomposed"] = ps ? vec(ps->entries()) : json(nullptr);
    } else {
      const auto ties = nash_set_zero_lambda(*d);
      rep["nash_face"] = {{"vertices", one_based(ties)}, {"has_ess", ties.size() == 1}};
    }
  } else {
    rep["decomposition"] = nullptr;
  }

  const DefinitenessReport def = definiteness(a);
  rep["definiteness"] = {{"classification", to_string(def.classification)},
                         {"rayleigh_lambda", def.rayleigh_lambda}};

  json eq;
  if (n <= 5) {
    const EquilibriumReport er = enumerate_nash(a);
    eq["interior_ne"] = er.interior_ne ? vec(er.interior_ne->entries()) : json(nullptr);
    json b = json::array();
    for (const auto& p : er.boundary_ne)
      b.push_back({{"point", vec(p.point)}, {"support", one_based(p.support)}});
    eq["boundary_ne"] = b;
    eq["ess"] = er.ess ? json{{"point", vec(er.ess->point)}, {"flag", to_string(er.ess->flag)}}
                       : json(nullptr);
    eq["diagnostics"] = er.diagnostics;
  } else {
    eq["diagnostics"] = {"support enumeration skipped for n > 5"};
  }
  rep["equilibria"] = eq;

  const int samples = get_or<int>(ctx.config, "probe_samples", 10000);
  const MonotonicityResult mono = monotonicity_probe(a, samples, ctx.seed);
  json m = {{"monotone_on_samples", mono.monotone_on_samples}, {"samples", samples}};
  if (mono.violation)
    m["violation"] = {{"x", vec(mono.violation->x)}, {"y", vec(mono.violation->y)},
                      {"value", mono.violation->value},
                      {"form", mono.violation->infinitesimal ? "infinitesimal" : "pair"}};
  rep["monotonicity"] = m;

  fs::create_directories(ctx.out_dir);
  write_text(ctx.out_dir / "matrix_report.json", rep.dump(2) + "\n");
  log << "wrote " << (ctx.out_dir / "matrix_report.json").string() << "\n";
  return kOk;
}

int cmd_simulate(const RunContext& ctx, std::ostream& log) {
  const json& c = ctx.config;
  const std::string model = get_or<std::string>(c, "model", "");
  if (model.empty()) parse_fail("config needs 'model' (ode, sde, bm, wong_zakai, walk)");
  std::optional<PayoffMatrix> a;
  if (has_matrix(ctx, "matrix")) a = load_matrix(ctx, "matrix");
  const int n = a ? a->n() : get_or<int>(c, "n", 3);
  if (n < 2) dim_fail("n must be >= 2");
  const Composition p0 = composition_or_barycenter(c, "p0", n);
  const long long paths = get_or<long long>(c, "paths", 1);
  if (paths < 1) parse_fail("paths must be >= 1");

  SdeConfig sc;
  sc.sigma = get_or<double>(c, "sigma", 1.0);
  sc.t_end = get_or<double>(c, "t_end", 1.0);
  sc.dt = get_or<double>(c, "dt", 1e-3);
  sc.record_every = get_or<int>(c, "record_every", 1);
  sc.master_seed = ctx.seed;

  DriftKind drift = NoDrift{};
  const std::string drift_name = get_or<std::string>(c, "drift", model == "sde" && a ? "replicator" : "none");
  if (drift_name == "replicator") {
    if (!a) parse_fail("drift 'replicator' needs a matrix");
    drift = ReplicatorDrift{*a};
  } else if (drift_name == "dirichlet") {
    const Vector alpha = get_vector(c, "alpha");
    if (alpha.size() != n) dim_fail("alpha has the wrong length");
    drift = DirichletLangevinDrift{alpha};
  } else if (drift_name != "none") {
    parse_fail("unknown drift '" + drift_name + "'");
  }
  std::optional<Vector> start_alpha;
  if (c.contains("start_alpha")) {
    start_alpha = get_vector(c, "start_alpha");
    if (start_alpha->size() != n) dim_fail("start_alpha has the wrong length");
  }

  fs::create_directories(ctx.out_dir);
  json side = stamp(ctx);
  side["config"] = c;
  side["model"] = model;
  json outputs = json::array();

  auto write_traj = [&](const Trajectory& tr) {
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    write_text(ctx.out_dir / "trajectory.csv", os.str());
    outputs.push_back("trajectory.csv");
    side["scheme"] = tr.scheme;
  };
  auto write_ens = [&](Ensemble e, const std::string& scheme) {
    e.config = sc;
    e.scheme = scheme;
    std::ostringstream os;
    write_ensemble_csv(os, e);
    write_text(ctx.out_dir / "ensemble.csv", os.str());
    outputs.push_back("ensemble.csv");
    side["scheme"] = scheme;
  };
  auto start_for = [&](std::uint64_t s) {
    if (!start_alpha) return p0;
    Rng r(derive_seed(s, 0xd1));
    return sample_dirichlet(*start_alpha, r);
  };

  try {
    if (model == "ode") {
      if (!a) parse_fail("model 'ode' needs a matrix");
      OdeConfig oc{sc.t_end, sc.dt, sc.record_every};
      write_traj(integrate_replicator(*a, p0, oc));
    } else if (model == "sde" || model == "bm") {
      if (model == "bm") drift = NoDrift{};
      if (paths == 1) {
        write_traj(model == "bm" ? bm_path(start_for(ctx.seed), sc)
                                 : sde_path(drift, start_for(ctx.seed), sc));
      } else if (model == "bm") {
        write_ens(run_ensemble(paths, ctx.seed,
                               [&](std::uint64_t s) { return bm_exact(start_for(s), sc.t_end, sc.sigma, s); }),
                  "bm-exact");
      } else {
        write_ens(run_ensemble(paths, ctx.seed,
                               [&](std::uint64_t s) {
                                 SdeConfig cc = sc;
                                 cc.master_seed = s;
                                 return ilr_inv(IlrPoint(sde_terminal_ilr(drift, start_for(s), cc)));
                               }),
                  "euler-maruyama-ilr");
      }
    } else if (model == "wong_zakai") {
      const double lam = get_or<double>(c, "lambda_corr", 0.0);
      if (paths == 1) {
        write_traj(wong_zakai_path(lam, p0, sc));
      } else {
        write_ens(run_ensemble(paths, ctx.seed,
                               [&](std::uint64_t s) {
                                 SdeConfig cc = sc;
                                 cc.master_seed = s;
                                 cc.record_every = static_cast<int>(step_count(cc.t_end, cc.dt));
                                 return wong_zakai_path(lam, p0, cc).states.back();
                               }),
                  "rk4-ilr-ou-fitness");
      }
    } else if (model == "walk") {
      const int steps = get_or<int>(c, "steps", 100);
      const auto walk = simplex_random_walk(p0, steps, ctx.seed);
      Trajectory tr;
      tr.scheme = "simplex-random-walk";
      for (std::size_t k = 0; k < walk.size(); ++k) {
        tr.times.push_back(static_cast<double>(k));
        tr.states.push_back(walk[k]);
      }
      write_traj(tr);
    } else {
      parse_fail("unknown model '" + model + "'");
    }
  } catch (const Error& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kSimulation;
  }
  side["outputs"] = outputs;
  write_text(ctx.out_dir / "run.json", side.dump(2) + "\n");
  log << "wrote " << outputs.size() << " artifact(s) to " << ctx.out_dir.string() << "\n";
  return kOk;
}

int cmd_verify(const RunContext& ctx, std::ostream& log) {
  const json& c = ctx.config;
  const std::string suite = get_or<std::string>(c, "suite", "");
  const unsigned workers = get_or<unsigned>(c, "workers", 0u);
  SuiteResult result;
  if (suite == "geometry") {
    GeometryOptions o;
    o.seed = ctx.seed;
    o.instances = get_or<int>(c, "instances", o.instances);
    result = run_geometry(o);
  } else if (suite == "dirichlet") {
    DirichletOptions o;
    o.seed = ctx.seed;
    o.workers = workers;
    if (has_matrix(ctx, "matrix")) o.a = load_matrix(ctx, "matrix").a();
    if (c.contains("alpha")) o.alpha = get_vector(c, "alpha");
    if (o.alpha.size() != o.a.rows()) dim_fail("alpha has the wrong length");
    o.paths = get_or<std::size_t>(c, "paths", o.paths);
    o.dt = get_or<double>(c, "dt", o.dt);
    if (c.contains("mixing_start")) o.mixing_start = get_vector(c, "mixing_start");
    if (o.mixing_start.size() != o.a.rows()) dim_fail("mixing_start has the wrong length");
    result = run_dirichlet(o);
  } else if (suite == "contraction") {
    ContractionOptions o;
    o.seed = ctx.seed;
    if (has_matrix(ctx, "matrix")) o.a = load_matrix(ctx, "matrix").a();
    if (has_matrix(ctx, "negative_control")) o.negative_control = load_matrix(ctx, "negative_control").a();
    o.pairs = get_or<int>(c, "pairs", o.pairs);
    o.control_seeds = get_or<int>(c, "control_seeds", o.control_seeds);
    o.t_end = get_or<double>(c, "t_end", o.t_end);
    o.dt = get_or<double>(c, "dt", o.dt);
    o.sigma = get_or<double>(c, "sigma", o.sigma);
    result = run_contraction(o);
  } else if (suite == "wongzakai") {
    WongZakaiOptions o;
    o.seed = ctx.seed;
    o.workers = workers;
    o.paths = get_or<std::size_t>(c, "paths", o.paths);
    if (c.contains("lambdas")) o.lambdas = get_or<std::vector<double>>(c, "lambdas", o.lambdas);
    o.sigma = get_or<double>(c, "sigma", o.sigma);
    result = run_wongzakai(o);
  } else if (suite == "donsker") {
    DonskerOptions o;
    o.seed = ctx.seed;
    o.walks = get_or<std::size_t>(c, "walks", o.walks);
    if (c.contains("n_steps")) o.n_steps = get_or<std::vector<int>>(c, "n_steps", o.n_steps);
    result = run_donsker(o);
  } else if (suite == "transience") {
    TransienceOptions o;
    o.seed = ctx.seed;
    o.paths = get_or<std::size_t>(c, "paths", o.paths);
    o.t = get_or<double>(c, "t", o.t);
    result = run_transience(o);
  } else if (suite == "jko") {
    JkoOptions o;
    o.m = get_or<int>(c, "m", o.m);
    o.t_end = get_or<double>(c, "t_end", o.t_end);
    o.sigma = get_or<double>(c, "sigma", o.sigma);
    if (c.contains("n_steps")) o.n_steps = get_or<std::vector<int>>(c, "n_steps", o.n_steps);
    result = run_jko(o);
  } else {
    parse_fail("unknown suite '" + suite +
               "' (geometry, dirichlet, contraction, donsker, wongzakai, transience, jko)");
  }

  json rep = stamp(ctx);
  rep["suite"] = result.suite;
  rep["pass"] = result.pass();
  json gates = json::array();
  for (const auto& g : result.gates) {
    gates.push_back(to_json(g));
    log << (g.pass ? "PASS " : "FAIL ") << result.suite << "/" << g.name << ": "
        << format_double(g.statistic) << ' ' << to_string(g.direction) << ' '
        << format_double(g.threshold) << (g.detail.empty() ? "" : "  [" + g.detail + "]") << "\n";
  }
  rep["gates"] = gates;
  rep["notes"] = result.notes;
  fs::create_directories(ctx.out_dir);
  write_text(ctx.out_dir / "suite_report.json", rep.dump(2) + "\n");
  if (!result.pass()) {
    for (const auto& g : result.gates)
      if (!g.pass) std::cerr << "gate failed: " << result.suite << "/" << g.name << "\n";
    return kVerify;
  }
  return kOk;
}

int cmd_ternary(const RunContext& ctx, std::ostream& log) {
  const json& c = ctx.config;
  std::string svg;
  const std::string comment = provenance(ctx);
  if (c.contains("input")) {
    fs::path p = get_or<std::string>(c, "input", "");
    if (p.is_relative()) p = ctx.config_dir / p;
    std::ifstream in(p);
    if (!in) parse_fail("cannot read " + p.string());
    Trajectory tr;
    try {
      tr = read_trajectory_csv(in);
    } catch (const Error& e) {
      if (is_dimension_error(e.code())) dim_fail(e.what());
      parse_fail(e.what());
    }
    if (tr.states.empty() || tr.states.front().size() != 3)
      dim_fail("ternary plots need n = 3 data");
    svg = ternary_svg_trajectory(tr, comment);
  } else if (c.contains("portrait")) {
    RunContext sub = ctx;
    sub.config = c["portrait"];
    const PayoffMatrix a = load_matrix(sub, "matrix");
    if (a.n() != 3) dim_fail("ternary plots need n = 3 data");
    const int g = get_or<int>(sub.config, "grid", 12);
    svg = ternary_svg_portrait(phase_portrait(a, g), comment);
  } else {
    parse_fail("ternary config needs 'input' (trajectory csv) or 'portrait'");
  }
  fs::create_directories(ctx.out_dir);
  const std::string name = get_or<std::string>(c, "output", "ternary.svg");
  write_text(ctx.out_dir / name, svg);
  log << "wrote " << (ctx.out_dir / name).string() << "\n";
  return kOk;
}

int run_command(const std::string& command, const fs::path& config_file, const fs::path& out_dir,
                std::ostream& log, std::ostream& err) {
  try {
    const bool seed_required = command != "ternary";
    const RunContext ctx = load_context(config_file, out_dir, seed_required);
    if (command == "matrix-analyze") return cmd_matrix_analyze(ctx, log);
    if (command == "simulate") return cmd_simulate(ctx, log);
    if (command == "verify") return cmd_verify(ctx, log);
    if (command == "ternary") return cmd_ternary(ctx, log);
    err << "unknown command '" << command << "'\n";
    return kParse;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (is_dimension_error(e.code())) return kDimension;
    return command == "simulate" ? kSimulation : kParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSimulation;
  }
}

}  // namespace simplexdyn::cli
