#include "affproj/solver.hpp"

#include <algorithm>
#include <cmath>

namespace affproj {

namespace {

constexpr double kParallelCos = 1.0 - 1e-12;

void check_problem(std::span<const AffineSet> sets, const Vector& x0) {
  if (sets.empty()) {
    throw ConfigError("at least one affine set is required");
  }
  require_finite(x0, "starting point");
  for (const auto& s : sets) {
    if (s.dim() != x0.size()) {
      throw DimensionError("set '" + s.name() + "' has dimension " + std::to_string(s.dim()) +
                           " but the starting point has " + std::to_string(x0.size()));
    }
  }
}

// Shared bookkeeping for the three schemes: trace records, interleaved
// points, monitors and the stopping test.
class RunRecorder {
 public:
  RunRecorder(std::span<const AffineSet> sets, const SolverOptions& options, bool monitors)
      : sets_(sets), options_(options), monitors_enabled_(monitors) {
    result_.projections_per_set.assign(sets.size(), 0);
  }

  void start_monitor(const Vector& x0) {
    if (!monitors_enabled_) {
      return;
    }
    auto reference = options_.reference ? options_.reference : options_.oracle;
    monitor_.emplace(x0, std::move(reference), sets_.size());
  }

  // Returns the stopping measure when `main_iterate` is set.
  std::optional<double> record(std::size_t index, Phase phase, std::optional<std::size_t> set,
                               const Vector& from, const Vector& to, bool main_iterate) {
    IterationRecord rec;
    rec.index = index;
    rec.phase = phase;
    rec.set_index = set;
    rec.step_norm = (to - from).norm();
    if (options_.record_residuals || (main_iterate && !options_.stop.measure)) {
      rec.per_set_residuals.reserve(sets_.size());
      for (const auto& s : sets_) {
        rec.per_set_residuals.push_back(s.residual(to));
      }
    }
    if (options_.oracle) {
      rec.distance_to_oracle = (to - *options_.oracle).norm();
    }
    std::optional<double> measure;
    if (main_iterate) {
      if (options_.metric) {
        rec.metric = options_.metric(to);
      }
      measure = options_.stop.measure ? options_.stop.measure(to) : rec.residual_max();
    }
    if (set) {
      ++result_.projections_per_set[*set];
    }
    if (options_.record_points) {
      result_.points.push_back(to);
    }
    if (monitor_) {
      monitor_->observe_point(to);
    }
    if (!options_.record_residuals) {
      rec.per_set_residuals.clear();
    }
    result_.trace.push_back(std::move(rec));
    return measure;
  }

  ConditionMonitor* monitor() { return monitor_ ? &*monitor_ : nullptr; }
  SolveResult& result() { return result_; }

  SolveResult finish(Vector solution, std::size_t iterations, StopReason reason) {
    result_.solution = std::move(solution);
    result_.iterations = iterations;
    result_.stop_reason = reason;
    result_.converged = reason == StopReason::residual_met;
    if (monitor_) {
      result_.report = monitor_->report();
    }
    return std::move(result_);
  }

 private:
  std::span<const AffineSet> sets_;
  const SolverOptions& options_;
  bool monitors_enabled_;
  std::optional<ConditionMonitor> monitor_;
  SolveResult result_;
};

bool is_stop(std::optional<double> measure, const StoppingRule& stop) {
  return measure && *measure <= stop.tol;
}

struct SelectedFamily {
  std::vector<std::size_t> indices;
  std::vector<Hyperplane> hyperplanes;
};

SelectedFamily gather(const HyperplaneBuffer& buffer) {
  SelectedFamily out;
  out.indices = buffer.select();
  for (auto idx : out.indices) {
    out.hyperplanes.push_back(buffer.entries()[idx].hyperplane);
  }
  return out;
}

// Projects `from` onto the intersection selected by the buffer. On numerical
// infeasibility the older half of the stored hyperplanes is dropped and the
// solve retried once; returns nullopt if that fails too.
std::optional<std::pair<SelectedFamily, IntersectionProjection>> project_selected(
    const Vector& from, HyperplaneBuffer& buffer, std::vector<std::string>& warnings,
    std::size_t iteration) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    SelectedFamily family = gather(buffer);
    try {
      auto proj = solve_hyperplane_intersection(from, family.hyperplanes);
      return std::make_pair(std::move(family), std::move(proj));
    } catch (const InfeasibleError&) {
      if (attempt == 0) {
        const std::size_t stored = buffer.entries().size();
        const std::size_t keep_current = buffer.current() ? 1 : 0;
        const std::size_t droppable = stored > keep_current ? stored - keep_current : 0;
        const std::size_t drop = std::max<std::size_t>(1, droppable / 2);
        warnings.push_back("iteration " + std::to_string(iteration) +
                           ": hyperplane intersection numerically infeasible, dropped " +
                           std::to_string(std::min(drop, droppable)) + " oldest hyperplanes");
        buffer.drop_oldest(std::min(drop, droppable));
      }
    }
  }
  warnings.push_back("iteration " + std::to_string(iteration) +
                     ": intersection still infeasible, fell back to a plain projection step");
  return std::nullopt;
}

}  // namespace

WindowPolicy WindowPolicy::last_q(std::size_t q) {
  if (q == 0) {
    throw ConfigError("window policy: q must be a positive integer");
  }
  return {Kind::last_q, q};
}

std::string WindowPolicy::describe() const {
  switch (kind) {
    case Kind::last_q:
      return "last-q(" + std::to_string(q) + ")";
    case Kind::all:
      return "all";
    case Kind::condition_b:
      return "condition-b";
  }
  return "unknown";
}

HyperplaneBuffer::HyperplaneBuffer(WindowPolicy policy) : policy_(policy) {
  if (policy_.kind == WindowPolicy::Kind::last_q && policy_.q == 0) {
    throw ConfigError("window policy: q must be a positive integer");
  }
}

void HyperplaneBuffer::push(Hyperplane h, std::size_t generation, std::size_t set_index) {
  if (!entries_.empty() && entries_.front().hyperplane.normal.size() != h.normal.size()) {
    throw DimensionError("hyperplane buffer: normal dimension changed");
  }
  current_generation_ = generation;
  has_current_ = !h.is_whole_space();
  if (has_current_) {
    entries_.push_back({std::move(h), generation, set_index});
  }
  if (policy_.kind == WindowPolicy::Kind::last_q && entries_.size() > policy_.q) {
    entries_.erase(entries_.begin(),
                   entries_.begin() + static_cast<std::ptrdiff_t>(entries_.size() - policy_.q));
  }
}

std::optional<std::size_t> HyperplaneBuffer::current() const {
  if (has_current_ && !entries_.empty() && entries_.back().generation == current_generation_) {
    return entries_.size() - 1;
  }
  return std::nullopt;
}

std::vector<std::size_t> HyperplaneBuffer::select() const {
  std::size_t budget = entries_.size();
  if (policy_.kind == WindowPolicy::Kind::last_q) {
    // The current hyperplane occupies one slot of the window even when it is
    // the whole space.
    budget = current() ? policy_.q : policy_.q - 1;
  }
  std::vector<std::size_t> picked;
  std::vector<Vector> units;
  for (std::size_t back = 0; back < entries_.size() && picked.size() < budget; ++back) {
    const std::size_t idx = entries_.size() - 1 - back;
    const Vector& a = entries_[idx].hyperplane.normal;
    const Vector u = a / a.norm();
    const bool duplicate = std::any_of(units.begin(), units.end(), [&](const Vector& w) {
      return std::abs(w.dot(u)) >= kParallelCos;
    });
    if (duplicate) {
      continue;
    }
    picked.push_back(idx);
    units.push_back(u);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

void HyperplaneBuffer::drop_oldest(std::size_t count) {
  const auto keep_current = current() ? std::size_t{1} : std::size_t{0};
  const std::size_t droppable = entries_.size() - keep_current;
  count = std::min(count, droppable);
  entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(count));
}

CyclicSchedule::CyclicSchedule(std::vector<std::size_t> order) : order_(std::move(order)) {}

CyclicSchedule CyclicSchedule::cyclic(std::size_t first, std::size_t last_exclusive) {
  std::vector<std::size_t> order;
  for (std::size_t l = first; l < last_exclusive; ++l) {
    order.push_back(l);
  }
  return CyclicSchedule(std::move(order));
}

std::size_t CyclicSchedule::next() {
  if (order_.empty()) {
    throw ConfigError("schedule is empty");
  }
  const std::size_t l = order_[position_];
  position_ = (position_ + 1) % order_.size();
  return l;
}

void CyclicSchedule::require_covers(std::size_t first, std::size_t last_exclusive) const {
  std::vector<bool> seen(last_exclusive, false);
  for (auto l : order_) {
    if (l < first || l >= last_exclusive) {
      throw ConfigError("schedule visits set " + std::to_string(l) + ", outside [" +
                        std::to_string(first) + ", " + std::to_string(last_exclusive) + ")");
    }
    seen[l] = true;
  }
  for (std::size_t l = first; l < last_exclusive; ++l) {
    if (!seen[l]) {
      throw ConfigError("schedule never visits set " + std::to_string(l));
    }
  }
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::residual_met:
      return "residual-met";
    case StopReason::max_iter:
      return "max-iter";
    case StopReason::infeasible:
      return "infeasible";
  }
  return "unknown";
}

Hyperplane supporting_hyperplane(const Vector& x, const Vector& p, double normal_floor) {
  Vector a = x - p;
  if (a.norm() <= normal_floor * std::max(1.0, x.norm())) {
    return {Vector::Zero(x.size()), 0.0};
  }
  const double b = a.dot(p);
  return {std::move(a), b};
}

Hyperplane two_subspace_hyperplane(const Vector& x, const Vector& x_prime,
                                   const Vector& x_double_prime, double normal_floor) {
  Vector a = x - x_double_prime;
  const double a_sq = a.squaredNorm();
  if (a_sq == 0.0 || std::sqrt(a_sq) <= normal_floor * std::max(1.0, x.norm())) {
    return {Vector::Zero(x.size()), 0.0};
  }
  // <a, x+> with x+ = x + (||x - x'||^2 / ||a||^2) (x'' - x) and x'' - x = -a.
  const double b = a.dot(x) - (x - x_prime).squaredNorm();
  return {std::move(a), b};
}

Vector lift_start(const Vector& x0, const AffineSet& m1) { return m1.project(x0); }

Alg1Step alg1_step(SolverState& state, std::span<const AffineSet> sets, HyperplaneBuffer& buffer,
                   double normal_floor) {
  Alg1Step step;
  step.set_index = state.schedule.next();
  if (step.set_index >= sets.size()) {
    throw ConfigError("schedule references a missing set");
  }
  step.x_tilde = sets[step.set_index].project(state.x);
  step.hyperplane = supporting_hyperplane(state.x, step.x_tilde, normal_floor);
  buffer.push(step.hyperplane, state.iteration, step.set_index);

  step.decomposition.set_index = step.set_index;
  step.decomposition.set_step = state.x - step.x_tilde;
  if (auto solved = project_selected(step.x_tilde, buffer, step.warnings, state.iteration)) {
    auto& [family, proj] = *solved;
    step.x_next = std::move(proj.point);
    for (std::size_t t = 0; t < family.indices.size(); ++t) {
      const auto& entry = buffer.entries()[family.indices[t]];
      step.selected.push_back(entry.generation);
      step.selected_normals.push_back(entry.hyperplane.normal);
      const double lambda = proj.lambda(static_cast<Eigen::Index>(t));
      if (lambda != 0.0) {
        step.decomposition.corrections.emplace_back(entry.set_index,
                                                    lambda * entry.hyperplane.normal);
      }
    }
  } else {
    step.x_next = step.x_tilde;
  }
  step.decomposition.hyperplane_step_sq = (step.x_tilde - step.x_next).squaredNorm();
  state.x = step.x_next;
  ++state.iteration;
  return step;
}

Alg2Step alg2_step(SolverState& state, std::span<const AffineSet> sets, HyperplaneBuffer& buffer,
                   double normal_floor) {
  Alg2Step step;
  step.set_index = state.schedule.next();
  if (step.set_index == 0 || step.set_index >= sets.size()) {
    throw ConfigError("alg2 schedule must visit sets 1..k-1 only");
  }
  step.x_prime = sets[step.set_index].project(state.x);
  step.x_double_prime = sets[0].project(step.x_prime);
  step.hyperplane =
      two_subspace_hyperplane(state.x, step.x_prime, step.x_double_prime, normal_floor);
  step.degenerate = step.hyperplane.is_whole_space();
  if (step.degenerate) {
    step.warnings.push_back("iteration " + std::to_string(state.iteration) +
                            ": composite projection returned the iterate, hyperplane skipped");
  }
  buffer.push(step.hyperplane, state.iteration, step.set_index);

  if (auto solved = project_selected(step.x_double_prime, buffer, step.warnings, state.iteration)) {
    auto& [family, proj] = *solved;
    step.x_next = std::move(proj.point);
    for (auto idx : family.indices) {
      const auto& entry = buffer.entries()[idx];
      step.selected.push_back(entry.generation);
      step.selected_normals.push_back(entry.hyperplane.normal);
    }
  } else {
    step.x_next = step.x_double_prime;
  }
  state.x = step.x_next;
  ++state.iteration;
  return step;
}

SolveResult run_map(std::span<const AffineSet> sets, const Vector& x0, CyclicSchedule schedule,
                    const SolverOptions& options) {
  check_problem(sets, x0);
  schedule.require_covers(0, sets.size());
  RunRecorder rec(sets, options, options.monitors);
  rec.start_monitor(x0);
  Vector x = x0;
  if (is_stop(rec.record(0, Phase::start, std::nullopt, x, x, true), options.stop)) {
    return rec.finish(std::move(x), 0, StopReason::residual_met);
  }
  for (std::size_t i = 0; i < options.stop.max_iter; ++i) {
    const std::size_t l = schedule.next();
    Vector next;
    try {
      next = sets[l].project(x);
    } catch (const InfeasibleError& e) {
      rec.result().warnings.emplace_back(e.what());
      return rec.finish(std::move(x), i, StopReason::infeasible);
    }
    const auto measure = rec.record(i, Phase::set_projection, l, x, next, true);
    StepDecomposition d{l, x - next, {}, 0.0};
    if (auto* m = rec.monitor()) {
      m->observe_steps(d.set_step.squaredNorm(), 0.0);
      m->observe_b_prime(d);
    }
    if (options.record_decompositions) {
      rec.result().decompositions.push_back(std::move(d));
    }
    x = std::move(next);
    if (is_stop(measure, options.stop)) {
      return rec.finish(std::move(x), i + 1, StopReason::residual_met);
    }
  }
  return rec.finish(std::move(x), options.stop.max_iter, StopReason::max_iter);
}

SolveResult run_alg1(std::span<const AffineSet> sets, const Vector& x0, CyclicSchedule schedule,
                     WindowPolicy policy, const SolverOptions& options) {
  check_problem(sets, x0);
  schedule.require_covers(0, sets.size());
  const bool monitors = options.monitors || policy.kind == WindowPolicy::Kind::condition_b;
  RunRecorder rec(sets, options, monitors);
  rec.start_monitor(x0);
  HyperplaneBuffer buffer(policy);
  SolverState state{x0, 0, std::move(schedule)};
  if (is_stop(rec.record(0, Phase::start, std::nullopt, x0, x0, true), options.stop)) {
    return rec.finish(x0, 0, StopReason::residual_met);
  }
  for (std::size_t i = 0; i < options.stop.max_iter; ++i) {
    const Vector x = state.x;
    Alg1Step step;
    try {
      step = alg1_step(state, sets, buffer, options.normal_floor);
    } catch (const InfeasibleError& e) {
      rec.result().warnings.emplace_back(e.what());
      return rec.finish(x, i, StopReason::infeasible);
    }
    for (auto& w : step.warnings) {
      rec.result().warnings.push_back(std::move(w));
    }
    rec.record(i, Phase::set_projection, step.set_index, x, step.x_tilde, false);
    const auto measure =
        rec.record(i, Phase::hyperplane_projection, std::nullopt, step.x_tilde, step.x_next, true);
    if (auto* m = rec.monitor()) {
      m->observe_steps(step.decomposition.set_step.squaredNorm(),
                       step.decomposition.hyperplane_step_sq);
      m->observe_condition_b(step.x_next, step.selected_normals);
      m->observe_b_prime(step.decomposition);
    }
    if (options.record_decompositions) {
      rec.result().decompositions.push_back(std::move(step.decomposition));
    }
    if (is_stop(measure, options.stop)) {
      return rec.finish(state.x, i + 1, StopReason::residual_met);
    }
  }
  return rec.finish(state.x, options.stop.max_iter, StopReason::max_iter);
}

SolveResult run_alg2(std::span<const AffineSet> sets, const Vector& x0, CyclicSchedule schedule,
                     WindowPolicy policy, const SolverOptions& options) {
  check_problem(sets, x0);
  if (sets.size() > 1) {
    schedule.require_covers(1, sets.size());
  }
  const bool monitors = options.monitors || policy.kind == WindowPolicy::Kind::condition_b;
  RunRecorder rec(sets, options, monitors);
  Vector lifted;
  try {
    lifted = lift_start(x0, sets[0]);
  } catch (const InfeasibleError& e) {
    rec.result().warnings.emplace_back(e.what());
    return rec.finish(x0, 0, StopReason::infeasible);
  }
  rec.start_monitor(lifted);
  rec.record(0, Phase::start, std::nullopt, x0, x0, false);
  if (is_stop(rec.record(0, Phase::m1_projection, 0, x0, lifted, true), options.stop)) {
    return rec.finish(std::move(lifted), 0, StopReason::residual_met);
  }
  if (sets.size() == 1) {
    return rec.finish(std::move(lifted), 0, StopReason::max_iter);
  }
  HyperplaneBuffer buffer(policy);
  SolverState state{lifted, 0, std::move(schedule)};
  for (std::size_t i = 0; i < options.stop.max_iter; ++i) {
    const Vector x = state.x;
    Alg2Step step;
    try {
      step = alg2_step(state, sets, buffer, options.normal_floor);
    } catch (const InfeasibleError& e) {
      rec.result().warnings.emplace_back(e.what());
      return rec.finish(x, i, StopReason::infeasible);
    }
    for (auto& w : step.warnings) {
      rec.result().warnings.push_back(std::move(w));
    }
    rec.record(i, Phase::set_projection, step.set_index, x, step.x_prime, false);
    rec.record(i, Phase::m1_projection, 0, step.x_prime, step.x_double_prime, false);
    const auto measure = rec.record(i, Phase::hyperplane_projection, std::nullopt,
                                    step.x_double_prime, step.x_next, true);
    if (auto* m = rec.monitor()) {
      m->observe_steps((x - step.x_prime).squaredNorm(),
                       (step.x_prime - step.x_next).squaredNorm());
      m->observe_condition_b(step.x_next, step.selected_normals);
    }
    if (is_stop(measure, options.stop)) {
      return rec.finish(state.x, i + 1, StopReason::residual_met);
    }
  }
  return rec.finish(state.x, options.stop.max_iter, StopReason::max_iter);
}

}  // namespace affproj
