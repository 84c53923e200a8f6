#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "affproj/linalg.hpp"

namespace affproj {

enum class Phase {
  start,                  // the initial point (and for alg2, the point before lifting)
  set_projection,         // x_i -> P_{M_l}(x_i)
  hyperplane_projection,  // projection onto the selected hyperplane intersection
  m1_projection,          // alg2: x'_i -> P_{M_1}(x'_i), and the initial lift
};

std::string_view to_string(Phase phase);

struct IterationRecord {
  std::size_t index = 0;
  Phase phase = Phase::start;
  std::optional<std::size_t> set_index;
  double step_norm = 0.0;
  std::vector<double> per_set_residuals;
  std::optional<double> distance_to_oracle;
  // Caller-supplied quality metric, evaluated on main iterates only.
  std::optional<double> metric;

  double residual_max() const;
};

struct FejerSummary {
  std::size_t violations = 0;
  double worst_margin = 0.0;
};

struct ConditionReport {
  FejerSummary fejer;
  bool fejer_checked = false;
  // ||(x0 - x_{i+1}) - P_span{a_j : j in J_i}(x0 - x_{i+1})|| per iteration.
  std::vector<double> condition_b_residuals;
  // <x0 - x_{i+1}, x_{i+1} - m> per iteration, m the reference member (0 if none).
  std::vector<double> condition_b_inner;
  // Left over right side of the (B') bound, zero-step iterations skipped.
  std::vector<double> b_prime_ratios;
  // Running sum of squared step lengths; non-decreasing.
  std::vector<double> sum_of_squares;
};

// Canonical decomposition of one alg1 iteration: x_i - x~_i is attributed to
// M_{l_i} and each lambda_j a_j of the hyperplane step to the set that
// generated a_j.
struct StepDecomposition {
  std::size_t set_index = 0;
  Vector set_step;
  std::vector<std::pair<std::size_t, Vector>> corrections;
  double hyperplane_step_sq = 0.0;  // ||x~_i - x_{i+1}||^2
};

// Max over consecutive pairs of ||v - m|| - ||u - m||. Zero for traces with
// fewer than two points.
double check_fejer(std::span<const Vector> trace, const Vector& m);

// Distance from x0 - xi to the span of `normals`.
double check_condition_b(const Vector& x0, const Vector& xi, std::span<const Vector> normals);

// One ratio per decomposition whose right-hand side is positive.
std::optional<double> b_prime_ratio(const StepDecomposition& step, std::size_t set_count);
std::vector<double> check_b_prime(std::span<const StepDecomposition> steps, std::size_t set_count);

// Streaming monitor owned by one solver run.
class ConditionMonitor {
 public:
  ConditionMonitor(Vector x0, std::optional<Vector> reference, std::size_t set_count);

  void observe_point(const Vector& p);
  void observe_steps(double first_sq, double second_sq);
  void observe_condition_b(const Vector& x_next, std::span<const Vector> normals);
  void observe_b_prime(const StepDecomposition& step);

  const ConditionReport& report() const { return report_; }

 private:
  Vector x0_;
  std::optional<Vector> reference_;
  std::size_t set_count_;
  std::optional<double> last_distance_;
  double running_sq_ = 0.0;
  ConditionReport report_;
};

}  // namespace affproj
