#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affproj/affine_sets.hpp"
#include "affproj/diagnostics.hpp"

namespace affproj {

// Rule choosing J_i, the stored hyperplanes intersected at iteration i.
struct WindowPolicy {
  enum class Kind { last_q, all, condition_b };

  Kind kind = Kind::all;
  std::size_t q = 0;  // only for last_q

  static WindowPolicy last_q(std::size_t q);
  static WindowPolicy all() { return {Kind::all, 0}; }
  // Keeps every generated hyperplane, so x0 - x_i stays in the span of the
  // selected normals; the solver also turns on the condition-B monitor.
  static WindowPolicy condition_b() { return {Kind::condition_b, 0}; }

  std::string describe() const;
};

class HyperplaneBuffer {
 public:
  struct Entry {
    Hyperplane hyperplane;
    std::size_t generation = 0;
    std::size_t set_index = 0;
  };

  explicit HyperplaneBuffer(WindowPolicy policy);

  // Records H_i. Whole-space hyperplanes are not stored, but they still mark
  // generation i as current.
  void push(Hyperplane h, std::size_t generation, std::size_t set_index);

  // Indices into entries() forming J_i. The current hyperplane (when not the
  // whole space) is always included; among entries with parallel normals
  // only the newest is kept.
  std::vector<std::size_t> select() const;

  // Removes the oldest `count` stored hyperplanes.
  void drop_oldest(std::size_t count);

  const std::vector<Entry>& entries() const { return entries_; }
  const WindowPolicy& policy() const { return policy_; }
  std::optional<std::size_t> current() const;

 private:
  WindowPolicy policy_;
  std::vector<Entry> entries_;
  std::size_t current_generation_ = 0;
  bool has_current_ = false;
};

// Order l_0, l_1, ... in which the sets are visited. Every full pass over
// `order` visits each required index, which realizes condition (A) with
// p-bar equal to the cycle length.
class CyclicSchedule {
 public:
  explicit CyclicSchedule(std::vector<std::size_t> order);
  static CyclicSchedule cyclic(std::size_t first, std::size_t last_exclusive);

  std::size_t next();
  std::size_t peek() const { return order_[position_]; }
  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t position() const { return position_; }

  // Throws ConfigError unless every index in [first, last_exclusive) appears
  // and no index falls outside that range.
  void require_covers(std::size_t first, std::size_t last_exclusive) const;

 private:
  std::vector<std::size_t> order_;
  std::size_t position_ = 0;
};

struct StoppingRule {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  // Defaults to the largest per-set residual.
  std::function<double(const Vector&)> measure;
};

struct SolverOptions {
  StoppingRule stop;
  bool record_points = false;
  bool record_residuals = true;
  bool monitors = false;
  std::optional<Vector> oracle;
  // Certified member of M for the Fejer and condition-B monitors; falls back
  // to `oracle` when unset.
  std::optional<Vector> reference;
  std::function<double(const Vector&)> metric;
  // Generated normals shorter than normal_floor * max(1, ||x_i||) are
  // treated as zero (H_i = X).
  double normal_floor = 1e-13;
  bool record_decompositions = false;
};

enum class StopReason { residual_met, max_iter, infeasible };
std::string_view to_string(StopReason reason);

struct SolveResult {
  Vector solution;
  std::size_t iterations = 0;
  std::vector<IterationRecord> trace;
  // Interleaved points (x0, x~0, x1, ...) when record_points is set.
  std::vector<Vector> points;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iter;
  std::optional<ConditionReport> report;
  std::vector<StepDecomposition> decompositions;
  std::vector<std::size_t> projections_per_set;
  std::vector<std::string> warnings;
};

struct SolverState {
  Vector x;
  std::size_t iteration = 0;
  CyclicSchedule schedule;
};

struct Alg1Step {
  std::size_t set_index = 0;
  Vector x_tilde;
  Vector x_next;
  Hyperplane hyperplane;
  std::vector<std::size_t> selected;  // generations in J_i
  std::vector<Vector> selected_normals;
  StepDecomposition decomposition;
  std::vector<std::string> warnings;
};

struct Alg2Step {
  std::size_t set_index = 0;
  Vector x_prime;
  Vector x_double_prime;
  Vector x_next;
  Hyperplane hyperplane;
  bool degenerate = false;
  std::vector<std::size_t> selected;
  std::vector<Vector> selected_normals;
  std::vector<std::string> warnings;
};

// Hyperplane H = {<a, y> = b} generated from one projection x -> p.
Hyperplane supporting_hyperplane(const Vector& x, const Vector& p, double normal_floor = 0.0);

// Hyperplane through x+ for x in M1, x' = P_{M2}(x), x'' = P_{M1}(x'); it
// contains M1 n M2 and its normal x - x'' lies in the direction space of M1.
Hyperplane two_subspace_hyperplane(const Vector& x, const Vector& x_prime,
                                   const Vector& x_double_prime, double normal_floor = 0.0);

Alg1Step alg1_step(SolverState& state, std::span<const AffineSet> sets, HyperplaneBuffer& buffer,
                   double normal_floor = 1e-13);
Alg2Step alg2_step(SolverState& state, std::span<const AffineSet> sets, HyperplaneBuffer& buffer,
                   double normal_floor = 1e-13);

Vector lift_start(const Vector& x0, const AffineSet& m1);

SolveResult run_map(std::span<const AffineSet> sets, const Vector& x0, CyclicSchedule schedule,
                    const SolverOptions& options = {});
SolveResult run_alg1(std::span<const AffineSet> sets, const Vector& x0, CyclicSchedule schedule,
                     WindowPolicy policy, const SolverOptions& options = {});
// Set 0 is the easy set M_1; the schedule must range over 1..k-1.
SolveResult run_alg2(std::span<const AffineSet> sets, const Vector& x0, CyclicSchedule schedule,
                     WindowPolicy policy, const SolverOptions& options = {});

}  // namespace affproj
