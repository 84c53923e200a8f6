#include "affproj/diagnostics.hpp"

#include <algorithm>

namespace affproj {

namespace {
constexpr double kFejerSlack = 1e-9;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::start:
      return "start";
    case Phase::set_projection:
      return "set-projection";
    case Phase::hyperplane_projection:
      return "hyperplane-projection";
    case Phase::m1_projection:
      return "m1-projection";
  }
  return "unknown";
}

double IterationRecord::residual_max() const {
  if (per_set_residuals.empty()) {
    return 0.0;
  }
  return *std::max_element(per_set_residuals.begin(), per_set_residuals.end());
}

double check_fejer(std::span<const Vector> trace, const Vector& m) {
  double worst = 0.0;
  bool any = false;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double margin = (trace[i] - m).norm() - (trace[i - 1] - m).norm();
    worst = any ? std::max(worst, margin) : margin;
    any = true;
  }
  return worst;
}

double check_condition_b(const Vector& x0, const Vector& xi, std::span<const Vector> normals) {
  if (x0.size() != xi.size()) {
    throw DimensionError("check_condition_b: dimension mismatch");
  }
  const Vector v = x0 - xi;
  if (normals.empty()) {
    return v.norm();
  }
  const Matrix basis = stack_rows(normals).transpose();
  const Vector coeff = lstsq_min_norm(basis, v);
  return (v - basis * coeff).norm();
}

std::optional<double> b_prime_ratio(const StepDecomposition& step, std::size_t set_count) {
  const double rhs = step.set_step.squaredNorm() + step.hyperplane_step_sq;
  if (rhs == 0.0) {
    return std::nullopt;
  }
  std::vector<Vector> per_set(set_count);
  double lhs = step.set_step.squaredNorm();
  for (const auto& [l, v] : step.corrections) {
    if (l >= set_count) {
      throw DimensionError("b_prime_ratio: set index out of range");
    }
    if (per_set[l].size() == 0) {
      per_set[l] = v;
    } else {
      per_set[l] += v;
    }
  }
  for (const auto& v : per_set) {
    if (v.size() > 0) {
      lhs += v.squaredNorm();
    }
  }
  return lhs / rhs;
}

std::vector<double> check_b_prime(std::span<const StepDecomposition> steps,
                                  std::size_t set_count) {
  std::vector<double> out;
  for (const auto& s : steps) {
    if (auto r = b_prime_ratio(s, set_count)) {
      out.push_back(*r);
    }
  }
  return out;
}

ConditionMonitor::ConditionMonitor(Vector x0, std::optional<Vector> reference,
                                   std::size_t set_count)
    : x0_(std::move(x0)), reference_(std::move(reference)), set_count_(set_count) {
  report_.fejer_checked = reference_.has_value();
}

void ConditionMonitor::observe_point(const Vector& p) {
  if (!reference_) {
    return;
  }
  const double d = (p - *reference_).norm();
  if (last_distance_) {
    const double margin = d - *last_distance_;
    if (margin > kFejerSlack) {
      ++report_.fejer.violations;
    }
    report_.fejer.worst_margin = std::max(report_.fejer.worst_margin, margin);
  }
  last_distance_ = d;
}

void ConditionMonitor::observe_steps(double first_sq, double second_sq) {
  running_sq_ += first_sq + second_sq;
  report_.sum_of_squares.push_back(running_sq_);
}

void ConditionMonitor::observe_condition_b(const Vector& x_next, std::span<const Vector> normals) {
  report_.condition_b_residuals.push_back(check_condition_b(x0_, x_next, normals));
  const Vector anchor = reference_ ? *reference_ : Vector::Zero(x_next.size());
  report_.condition_b_inner.push_back((x0_ - x_next).dot(x_next - anchor));
}

void ConditionMonitor::observe_b_prime(const StepDecomposition& step) {
  if (auto r = b_prime_ratio(step, set_count_)) {
    report_.b_prime_ratios.push_back(*r);
  }
}

}  // namespace affproj
