#include "affproj_cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace affproj::cli {
namespace {

using json = nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + value + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_sets_projections(const SolveResult& r, std::size_t upto_record) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < upto_record && i < r.trace.size(); ++i) {
    const auto& rec = r.trace[i];
    if (rec.phase == Phase::set_projection && rec.set_index && *rec.set_index > 0) {
      ++count;
    }
  }
  return count;
}

bool is_main_iterate(const IterationRecord& rec) { return rec.metric.has_value(); }

void print_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << format_double(v(i)) << '\n';
  }
}

void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << format_double(m(i, j));
    }
    out << '\n';
  }
}

// Writes via a temporary file so readers never see a partial CSV.
void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) {
      throw ConfigError("cannot write " + tmp);
    }
    f << content;
  }
  std::filesystem::rename(tmp, target);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
  } else if (!path.empty()) {
    write_atomically(path, content);
  }
}

void print_summary(std::ostream& out, const Problem& problem, const RunConfig& config,
                   const SolveResult& r) {
  const std::size_t k = problem.sets.size();
  out << "problem: " << problem.label << " (dim " << problem.x0.size() << ", " << k << " sets)\n";
  out << "algorithm: " << to_string(config.alg);
  if (config.alg != Algorithm::map) {
    out << " policy " << config.window().describe();
  }
  out << '\n';
  out << "converged: " << (r.converged ? "yes" : "no") << " (" << to_string(r.stop_reason) << ")\n";
  out << "iterations: " << r.iterations << '\n';
  out << "projections per set:";
  for (auto c : r.projections_per_set) out << ' ' << c;
  out << '\n';
  out << "hard projections: " << hard_projections(r) << '\n';
  if (!r.trace.empty()) {
    const auto& last = r.trace.back();
    out << "final residuals:";
    for (double v : last.per_set_residuals) out << ' ' << format_double(v);
    out << '\n';
    if (last.distance_to_oracle) {
      out << "distance to oracle: " << format_double(*last.distance_to_oracle) << '\n';
    }
  }
  if (problem.mmup) {
    const auto& prob = *problem.mmup;
    out << "pencil residual (initial): "
        << format_double(s_pencil_residual(prob, problem.x0)) << '\n';
    out << "pencil residual (final): " << format_double(s_pencil_residual(prob, r.solution))
        << '\n';
    const Matrix x = mmup::project_s(unflatten(r.solution, 2 * prob.n(), 2 * prob.n()));
    const auto [k_new, d_new] = mmup::extract_update(x);
    const mmup::PencilData updated{prob.pencil().m, d_new, k_new};
    for (const auto& t : prob.targets().pairs) {
      out << "eigenpair residual at " << format_double(t.mu.real()) << (t.mu.imag() < 0 ? "" : "+")
          << format_double(t.mu.imag()) << "i: "
          << format_double(mmup::eigenpair_residual(updated, t.mu, t.y)) << '\n';
    }
  }
  if (!r.warnings.empty()) {
    out << "warnings: " << r.warnings.size() << '\n';
    for (const auto& w : r.warnings) out << "  " << w << '\n';
  }
}

struct Flags {
  std::optional<int> experiment;
  std::optional<std::string> problem;
  std::optional<std::string> random;
  std::optional<std::string> alg;
  std::optional<std::string> policy;
  std::optional<std::size_t> q;
  std::optional<double> stop_tol;
  std::optional<std::size_t> max_iter;
  bool monitors = false;
  bool oracle = false;
  std::optional<std::string> output;
  std::optional<std::string> config;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--experiment", f.experiment, "Built-in experiment (1 or 2)");
  app->add_option("--problem", f.problem, "JSON problem file");
  app->add_option("--random", f.random, "Random family, e.g. dim=20,k=3,seed=7");
  app->add_option("--alg", f.alg, "map | alg1 | alg2");
  app->add_option("--policy", f.policy, "lastq | all | conditionb");
  app->add_option("--q", f.q, "Window length for lastq");
  app->add_option("--stop-tol", f.stop_tol, "Stopping tolerance");
  app->add_option("--max-iter", f.max_iter, "Maximum main iterations");
  app->add_flag("--monitors", f.monitors, "Enable condition monitors");
  app->add_flag("--oracle", f.oracle, "Compare against the direct projection");
  app->add_option("--output", f.output, "Output path ('-' for stdout)");
  app->add_option("--config", f.config, "JSON config file; flags override it");
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (f.config) {
    apply_config_json(c, read_file(*f.config));
  }
  const bool new_source = f.experiment || f.problem || f.random;
  if (new_source) {
    c.experiment.reset();
    c.problem_file.reset();
    c.random.reset();
  }
  if (f.experiment) c.experiment = *f.experiment;
  if (f.problem) c.problem_file = *f.problem;
  if (f.random) c.random = parse_random_spec(*f.random);
  if (f.alg) c.alg = parse_algorithm(*f.alg);
  if (f.policy) c.policy = parse_policy(*f.policy);
  if (f.q) c.q = *f.q;
  if (f.stop_tol) c.stop_tol = *f.stop_tol;
  if (f.max_iter) c.max_iter = *f.max_iter;
  if (f.monitors) c.monitors = true;
  if (f.oracle) c.oracle = true;
  if (f.output) c.output = *f.output;
  if (c.random) {
    if (auto seed = seed_from_env()) c.random->seed = *seed;
  }
  return c;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Problem problem = build_problem(config);
  std::optional<Vector> oracle;
  if (config.oracle) {
    oracle = try_oracle(problem);
    if (!oracle) {
      throw UnsupportedOracleError("problem has no row-constraint export");
    }
  }
  const auto r = solve(problem, config, oracle);
  std::ostringstream trace;
  write_trace_csv(trace, r, problem.sets.size());
  emit(config.output, trace.str(), out);
  print_summary(config.output == "-" ? err : out, problem, config, r);
  return r.stop_reason == StopReason::infeasible ? 1 : 0;
}

int cmd_bench(const RunConfig& config, const std::string& configs, std::ostream& out) {
  const Problem problem = build_problem(config);
  std::ostringstream csv;
  write_bench_csv(csv, problem, config, parse_bench_configs(configs));
  if (config.output.empty() || config.output == "-") {
    out << csv.str();
  } else {
    write_atomically(config.output, csv.str());
    out << "wrote " << config.output << '\n';
  }
  return 0;
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Problem problem = build_problem(config);
  const auto p = try_oracle(problem);
  if (!p) {
    throw UnsupportedOracleError("problem has no row-constraint export");
  }
  std::ostringstream body;
  if (problem.mmup) {
    const auto n = problem.mmup->n();
    const auto [k, d] = mmup::extract_update(unflatten(*p, 2 * n, 2 * n));
    body << "# K\n";
    print_matrix(body, k);
    body << "# D\n";
    print_matrix(body, d);
  } else {
    print_vector(body, *p);
  }
  if (config.output.empty()) {
    out << body.str();
  } else {
    emit(config.output, body.str(), out);
  }
  std::ostream& info = config.output.empty() || config.output == "-" ? err : out;
  info << "distance from x0: " << format_double((problem.x0 - *p).norm()) << '\n';
  return 0;
}

int cmd_verify(RunConfig config, std::ostream& out) {
  config.monitors = true;
  const Problem problem = build_problem(config);
  const auto oracle = try_oracle(problem);
  const auto r = solve(problem, config, oracle);
  print_summary(out, problem, config, r);
  bool ok = r.stop_reason != StopReason::infeasible;
  if (!r.report) {
    out << "no monitor report\n";
    return 1;
  }
  const auto& rep = *r.report;
  if (rep.fejer_checked) {
    const bool fejer_ok = rep.fejer.violations == 0;
    ok = ok && fejer_ok;
    out << "fejer: " << (fejer_ok ? "ok" : "VIOLATED") << " (violations " << rep.fejer.violations
        << ", worst margin " << format_double(rep.fejer.worst_margin) << ")\n";
  } else {
    out << "fejer: not checked (no certified member)\n";
  }
  auto max_of = [](const std::vector<double>& v, bool absolute) {
    double m = 0.0;
    for (double x : v) m = std::max(m, absolute ? std::abs(x) : x);
    return m;
  };
  out << "condition B residual max: " << format_double(max_of(rep.condition_b_residuals, false))
      << '\n';
  out << "condition B |inner| max: " << format_double(max_of(rep.condition_b_inner, true)) << '\n';
  if (!rep.b_prime_ratios.empty()) {
    const auto [lo, hi] = std::minmax_element(rep.b_prime_ratios.begin(), rep.b_prime_ratios.end());
    out << "b-prime ratio range: " << format_double(*lo) << " .. " << format_double(*hi) << '\n';
  }
  if (!rep.sum_of_squares.empty()) {
    out << "sum of squares: " << format_double(rep.sum_of_squares.back());
    if (oracle) {
      out << " (bound " << format_double((problem.x0 - *oracle).squaredNorm()) << ")";
    }
    out << '\n';
  }
  out << "verify: " << (ok ? "ok" : "FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

std::string_view to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::map:
      return "map";
    case Algorithm::alg1:
      return "alg1";
    case Algorithm::alg2:
      return "alg2";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  const auto t = lower(text);
  if (t == "map") return Algorithm::map;
  if (t == "alg1") return Algorithm::alg1;
  if (t == "alg2") return Algorithm::alg2;
  throw ConfigError("unknown algorithm '" + text + "' (expected map, alg1 or alg2)");
}

WindowPolicy::Kind parse_policy(const std::string& text) {
  const auto t = lower(text);
  if (t == "lastq" || t == "last_q") return WindowPolicy::Kind::last_q;
  if (t == "all") return WindowPolicy::Kind::all;
  if (t == "conditionb" || t == "condition_b") return WindowPolicy::Kind::condition_b;
  throw ConfigError("unknown policy '" + text + "' (expected lastq, all or conditionb)");
}

WindowPolicy RunConfig::window() const {
  switch (policy) {
    case WindowPolicy::Kind::last_q:
      return WindowPolicy::last_q(q);
    case WindowPolicy::Kind::all:
      return WindowPolicy::all();
    case WindowPolicy::Kind::condition_b:
      return WindowPolicy::condition_b();
  }
  return WindowPolicy::all();
}

void RunConfig::validate() const {
  const int sources = int(experiment.has_value()) + int(problem_file.has_value()) +
                      int(random.has_value());
  if (sources != 1) {
    throw ConfigError("give exactly one of --experiment, --problem, --random");
  }
  if (experiment && *experiment != 1 && *experiment != 2) {
    throw ConfigError("--experiment must be 1 or 2");
  }
  if (policy == WindowPolicy::Kind::last_q && q == 0) {
    throw ConfigError("--q must be positive");
  }
  if (!(stop_tol >= 0.0)) {
    throw ConfigError("--stop-tol must be nonnegative");
  }
}

RandomFamilySpec parse_random_spec(const std::string& text) {
  RandomFamilySpec spec;
  bool codims_given = false;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("random spec item without '=': '" + item + "'");
    }
    const auto key = lower(item.substr(0, eq));
    const auto value = item.substr(eq + 1);
    if (key == "dim") {
      spec.dim = static_cast<Eigen::Index>(parse_u64(key, value));
    } else if (key == "k") {
      spec.k = parse_u64(key, value);
    } else if (key == "seed") {
      spec.seed = parse_u64(key, value);
    } else if (key == "linear") {
      spec.linear = parse_u64(key, value) != 0;
    } else if (key == "codims") {
      codims_given = true;
      std::stringstream parts(value);
      std::string part;
      while (std::getline(parts, part, ':')) {
        spec.codims.push_back(static_cast<Eigen::Index>(parse_u64(key, part)));
      }
    } else {
      throw ConfigError("unknown random spec key '" + key + "'");
    }
  }
  if (codims_given && spec.codims.size() != spec.k) {
    throw ConfigError("random spec: codims must list k values");
  }
  return spec;
}

void apply_config_json(RunConfig& config, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config: top level must be an object");
  }
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "experiment") {
        config.experiment = value.get<int>();
      } else if (key == "problem") {
        config.problem_file = value.get<std::string>();
      } else if (key == "random") {
        if (value.is_string()) {
          config.random = parse_random_spec(value.get<std::string>());
        } else {
          RandomFamilySpec spec;
          spec.dim = value.value("dim", spec.dim);
          spec.k = value.value("k", spec.k);
          spec.seed = value.value("seed", spec.seed);
          spec.linear = value.value("linear", spec.linear);
          if (value.contains("codims")) {
            spec.codims = value.at("codims").get<std::vector<Eigen::Index>>();
          }
          config.random = spec;
        }
      } else if (key == "alg") {
        config.alg = parse_algorithm(value.get<std::string>());
      } else if (key == "policy") {
        config.policy = parse_policy(value.get<std::string>());
      } else if (key == "q") {
        config.q = value.get<std::size_t>();
      } else if (key == "stop_tol") {
        config.stop_tol = value.get<double>();
      } else if (key == "max_iter") {
        config.max_iter = value.get<std::size_t>();
      } else if (key == "monitors") {
        config.monitors = value.get<bool>();
      } else if (key == "oracle") {
        config.oracle = value.get<bool>();
      } else if (key == "output") {
        config.output = value.get<std::string>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("AFFPROJ_SEED");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  return parse_u64("AFFPROJ_SEED", raw);
}

Problem build_problem(const RunConfig& config) {
  config.validate();
  Problem p;
  if (config.experiment) {
    auto ex = *config.experiment == 1 ? mmup::experiment1() : mmup::experiment2();
    p.label = "experiment " + std::to_string(*config.experiment);
    p.mmup = std::move(ex.problem);
  } else if (config.problem_file) {
    auto file = load_problem_json(*config.problem_file);
    p.label = *config.problem_file;
    p.mmup = mmup::MmupProblem(std::move(file.pencil), std::move(file.targets));
  } else {
    const auto& spec = *config.random;
    auto fam = make_random_family(spec);
    std::ostringstream label;
    label << "random dim=" << spec.dim << " k=" << spec.k << " seed=" << spec.seed;
    p.label = label.str();
    p.sets = std::move(fam.sets);
    p.x0 = std::move(fam.x0);
    return p;
  }
  const auto sets = p.mmup->sets();
  p.sets.assign(sets.begin(), sets.end());
  p.x0 = flatten(p.mmup->x0());
  return p;
}

std::optional<Vector> try_oracle(const Problem& problem) {
  try {
    return direct_projection(problem.x0, stack(problem.sets));
  } catch (const UnsupportedOracleError&) {
    return std::nullopt;
  }
}

SolveResult solve(const Problem& problem, const RunConfig& config,
                  const std::optional<Vector>& oracle) {
  SolverOptions opt;
  opt.stop.tol = config.stop_tol;
  opt.stop.max_iter = config.max_iter;
  opt.monitors = config.monitors;
  opt.oracle = oracle;
  opt.record_decompositions = config.monitors;
  if (problem.mmup) {
    const mmup::MmupProblem prob = *problem.mmup;
    opt.metric = [prob](const Vector& x) { return mmup::s_pencil_residual(prob, x); };
    opt.stop.measure = opt.metric;
  } else {
    const auto sets = problem.sets;
    opt.metric = [sets](const Vector& x) {
      double worst = 0.0;
      for (const auto& s : sets) worst = std::max(worst, s.residual(x));
      return worst;
    };
  }
  const std::size_t k = problem.sets.size();
  switch (config.alg) {
    case Algorithm::map:
      return run_map(problem.sets, problem.x0, CyclicSchedule::cyclic(0, k), opt);
    case Algorithm::alg1:
      return run_alg1(problem.sets, problem.x0, CyclicSchedule::cyclic(0, k), config.window(), opt);
    case Algorithm::alg2:
      return run_alg2(problem.sets, problem.x0,
                      k > 1 ? CyclicSchedule::cyclic(1, k) : CyclicSchedule({0}), config.window(),
                      opt);
  }
  throw ConfigError("unknown algorithm");
}

double progress(const IterationRecord& rec) {
  return rec.metric ? *rec.metric : rec.residual_max();
}

std::size_t hard_projections(const SolveResult& result) {
  return count_sets_projections(result, result.trace.size());
}

std::vector<std::optional<std::size_t>> projections_to_thresholds(
    const SolveResult& result, const std::vector<double>& thresholds) {
  std::vector<std::optional<std::size_t>> out(thresholds.size());
  std::size_t count = 0;
  for (const auto& rec : result.trace) {
    if (rec.phase == Phase::set_projection && rec.set_index && *rec.set_index > 0) {
      ++count;
    }
    if (!is_main_iterate(rec)) {
      continue;
    }
    const double value = progress(rec);
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (!out[t] && value <= thresholds[t]) {
        out[t] = count;
      }
    }
  }
  return out;
}

std::string BenchEntry::label() const {
  std::string s(to_string(alg));
  if (alg == Algorithm::map) return s;
  switch (policy) {
    case WindowPolicy::Kind::last_q:
      return s + ":" + std::to_string(q);
    case WindowPolicy::Kind::all:
      return s + ":all";
    case WindowPolicy::Kind::condition_b:
      return s + ":conditionb";
  }
  return s;
}

std::vector<BenchEntry> default_bench_configs() {
  std::vector<BenchEntry> out{{Algorithm::map, WindowPolicy::Kind::last_q, 1}};
  for (std::size_t q = 2; q <= 8; ++q) out.push_back({Algorithm::alg1, WindowPolicy::Kind::last_q, q});
  for (std::size_t q = 1; q <= 5; ++q) out.push_back({Algorithm::alg2, WindowPolicy::Kind::last_q, q});
  return out;
}

std::vector<BenchEntry> parse_bench_configs(const std::string& text) {
  if (text.empty()) {
    return default_bench_configs();
  }
  std::vector<BenchEntry> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    BenchEntry e;
    const auto colon = item.find(':');
    e.alg = parse_algorithm(item.substr(0, colon));
    if (colon == std::string::npos) {
      e.q = e.alg == Algorithm::map ? 1 : 2;
    } else {
      const auto arg = lower(item.substr(colon + 1));
      if (arg == "all" || arg == "conditionb") {
        e.policy = parse_policy(arg);
      } else {
        e.q = parse_u64("q", arg);
        if (e.q == 0) throw ConfigError("bench: q must be positive");
      }
    }
    out.push_back(e);
  }
  return out;
}

const std::vector<double>& bench_thresholds() {
  static const std::vector<double> t{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  return t;
}

void write_bench_csv(std::ostream& out, const Problem& problem, const RunConfig& base,
                     const std::vector<BenchEntry>& entries) {
  const auto& thresholds = bench_thresholds();
  out << "config,alg,policy,q";
  for (double t : thresholds) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(0) << t;
    out << ",proj_to_" << s.str();
  }
  out << ",iterations,hard_projections,final_progress,converged\n";
  for (const auto& e : entries) {
    RunConfig c = base;
    c.alg = e.alg;
    c.policy = e.policy;
    c.q = e.q;
    c.monitors = false;
    c.stop_tol = std::min(base.stop_tol, thresholds.back());
    const auto r = solve(problem, c, std::nullopt);
    const auto counts = projections_to_thresholds(r, thresholds);
    out << e.label() << ',' << to_string(e.alg) << ','
        << (e.alg == Algorithm::map ? std::string("none") : c.window().describe()) << ','
        << (e.policy == WindowPolicy::Kind::last_q ? std::to_string(e.q) : std::string());
    for (const auto& cnt : counts) {
      out << ',';
      if (cnt) out << *cnt;
    }
    double final_progress = 0.0;
    for (auto it = r.trace.rbegin(); it != r.trace.rend(); ++it) {
      if (is_main_iterate(*it)) {
        final_progress = progress(*it);
        break;
      }
    }
    out << ',' << r.iterations << ',' << hard_projections(r) << ','
        << format_double(final_progress) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Accelerated projection methods for intersections of affine sets"};
  app.name("affproj");
  app.require_subcommand(1);
  Flags run_f, bench_f, oracle_f, verify_f;
  std::string bench_configs;
  auto* run = app.add_subcommand("run", "Solve one configuration and write a trace CSV");
  add_common(run, run_f);
  auto* bench = app.add_subcommand("bench", "Projection counts to reach residual thresholds");
  add_common(bench, bench_f);
  bench->add_option("--configs", bench_configs, "Sweep, e.g. map,alg1:2,alg2:3,alg1:all");
  auto* oracle = app.add_subcommand("oracle", "Print the direct projection onto the intersection");
  add_common(oracle, oracle_f);
  auto* verify = app.add_subcommand("verify", "Run with condition monitors and report");
  add_common(verify, verify_f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(resolve(run_f), out, err);
    if (bench->parsed()) return cmd_bench(resolve(bench_f), bench_configs, out);
    if (oracle->parsed()) return cmd_oracle(resolve(oracle_f), out, err);
    if (verify->parsed()) return cmd_verify(resolve(verify_f), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace affproj::cli
