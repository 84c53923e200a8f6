#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <affproj/affproj.hpp>

namespace affproj::cli {

enum class Algorithm { map, alg1, alg2 };

std::string_view to_string(Algorithm alg);
Algorithm parse_algorithm(const std::string& text);
WindowPolicy::Kind parse_policy(const std::string& text);

struct RunConfig {
  // Exactly one problem source.
  std::optional<int> experiment;
  std::optional<std::string> problem_file;
  std::optional<RandomFamilySpec> random;

  Algorithm alg = Algorithm::map;
  WindowPolicy::Kind policy = WindowPolicy::Kind::last_q;
  std::size_t q = 2;
  double stop_tol = 1e-10;
  std::size_t max_iter = 10000;
  bool monitors = false;
  bool oracle = false;
  std::string output;

  WindowPolicy window() const;
  // Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

// "dim=20,k=3,codims=2:3:3,seed=7,linear=1"; unspecified keys keep defaults.
RandomFamilySpec parse_random_spec(const std::string& text);

// Applies a JSON config object onto `config`. Keys mirror the long flags:
// experiment, problem, random, alg, policy, q, stop_tol, max_iter, monitors,
// oracle, output.
void apply_config_json(RunConfig& config, const std::string& text);

// Seed from AFFPROJ_SEED, if set.
std::optional<std::uint64_t> seed_from_env();

struct Problem {
  std::string label;
  std::vector<AffineSet> sets;
  Vector x0;
  std::optional<mmup::MmupProblem> mmup;
};

Problem build_problem(const RunConfig& config);

// Stacked-system projection, or nullopt when the problem has no row export.
std::optional<Vector> try_oracle(const Problem& problem);

SolveResult solve(const Problem& problem, const RunConfig& config,
                  const std::optional<Vector>& oracle);

// solve() records a metric on main iterates only: the pencil residual of
// the S-side point for MMUP problems, the largest set residual otherwise.
// progress() falls back to residual_max() for records without one.
double progress(const IterationRecord& rec);

// Projections onto sets 1..k-1 (V for the MMUP problems). Set 0 is the
// cheap set and does not count.
std::size_t hard_projections(const SolveResult& result);

// For each threshold, the number of hard projections performed before the
// progress value first dropped to it.
std::vector<std::optional<std::size_t>> projections_to_thresholds(
    const SolveResult& result, const std::vector<double>& thresholds);

struct BenchEntry {
  Algorithm alg = Algorithm::map;
  WindowPolicy::Kind policy = WindowPolicy::Kind::last_q;
  std::size_t q = 1;
  std::string label() const;
};

// "map,alg1:2,alg2:3,alg1:all" ; an empty string gives the default sweep.
std::vector<BenchEntry> parse_bench_configs(const std::string& text);
std::vector<BenchEntry> default_bench_configs();
const std::vector<double>& bench_thresholds();

// Writes the bench CSV for all entries against one problem.
void write_bench_csv(std::ostream& out, const Problem& problem, const RunConfig& base,
                     const std::vector<BenchEntry>& entries);

// Entry point used by main and by the tests. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace affproj::cli
