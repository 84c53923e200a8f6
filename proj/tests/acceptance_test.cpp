// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <affproj/affproj.hpp>

namespace {

using namespace affproj;
using cd = std::complex<double>;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

AffineSet random_subspace(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index codim) {
  Matrix c(codim, dim);
  for (Eigen::Index i = 0; i < codim; ++i) c.row(i) = gaussian(rng, dim).transpose();
  return AffineSet::row_constraint(c, Vector::Zero(codim));
}

SolverOptions mmup_options(const mmup::MmupProblem& prob, double tol, std::size_t max_iter) {
  SolverOptions opt;
  opt.metric = [&prob](const Vector& x) { return mmup::s_pencil_residual(prob, x); };
  opt.stop.measure = opt.metric;
  opt.stop.tol = tol;
  opt.stop.max_iter = max_iter;
  return opt;
}

// Metric after each projection onto set 1 (V), paired with the number of
// such projections made so far; taken at the next main iterate.
std::vector<std::pair<std::size_t, double>> metric_by_v_count(const SolveResult& r) {
  std::vector<std::pair<std::size_t, double>> out;
  std::size_t v = 0;
  for (const auto& rec : r.trace) {
    if (rec.phase == Phase::set_projection && rec.set_index == std::optional<std::size_t>(1)) {
      ++v;
    }
    if (rec.metric) out.emplace_back(v, *rec.metric);
  }
  return out;
}

std::optional<std::size_t> v_count_to_reach(const SolveResult& r, double threshold) {
  for (const auto& [v, m] : metric_by_v_count(r)) {
    if (m <= threshold) return v;
  }
  return std::nullopt;
}

Verdict experiment2_acceleration() {
  const auto ex = mmup::experiment2();
  const auto& prob = ex.problem;
  const Vector x0 = flatten(prob.x0());
  const double initial = mmup::s_pencil_residual(prob, x0);
  Verdict v;
  double worst = 0.0;
  auto check = [&](const std::string& name, const SolveResult& r) {
    // Metric at the last main iterate before a second V-projection.
    std::optional<double> after;
    for (const auto& [count, m] : metric_by_v_count(r)) {
      if (count == 1) after = m;
    }
    const double factor = after ? *after / initial : 1.0;
    worst = std::max(worst, factor);
    if (!after || factor > 1e-10) {
      v.pass = false;
      v.detail += " " + name + "=" + fmt(factor);
    }
  };
  for (std::size_t q = 2; q <= 8; ++q) {
    check("alg1:" + std::to_string(q),
          run_alg1(prob.sets(), x0, CyclicSchedule::cyclic(0, 2), WindowPolicy::last_q(q),
                   mmup_options(prob, 0.0, 3)));
  }
  for (std::size_t q = 1; q <= 8; ++q) {
    check("alg2:" + std::to_string(q),
          run_alg2(prob.sets(), x0, CyclicSchedule::cyclic(1, 2), WindowPolicy::last_q(q),
                   mmup_options(prob, 0.0, 1)));
  }
  v.detail = "worst reduction factor with one V-projection " + fmt(worst) + " (need <= 1e-10)" +
             v.detail;
  return v;
}

Verdict experiment2_map_rate() {
  const auto ex = mmup::experiment2();
  const auto& prob = ex.problem;
  const auto r = run_map(prob.sets(), flatten(prob.x0()), CyclicSchedule::cyclic(0, 2),
                         mmup_options(prob, 0.0, 44));
  // Metric right after the j-th V-projection.
  std::vector<double> after(1, 0.0);
  for (const auto& [count, m] : metric_by_v_count(r)) {
    if (count == after.size()) after.push_back(m);
  }
  Verdict v;
  if (after.size() < 21) {
    return {false, "only " + std::to_string(after.size() - 1) + " V-projections recorded"};
  }
  double lo = 1e9, hi = -1e9;
  for (std::size_t j = 2; j <= 20; ++j) {
    const double ratio = after[j] / after[j - 1];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  v.pass = lo >= 0.45 && hi <= 0.55;
  v.detail = "ratio range over iterations 2-20: [" + fmt(lo) + ", " + fmt(hi) + "] (need 0.5 +- 0.05)";
  return v;
}

Verdict experiment1_ordering() {
  const auto ex = mmup::experiment1();
  const auto& prob = ex.problem;
  const Vector x0 = flatten(prob.x0());
  const double thr = 1e-8;
  const auto map = v_count_to_reach(
      run_map(prob.sets(), x0, CyclicSchedule::cyclic(0, 2), mmup_options(prob, thr, 20000)), thr);
  Verdict v;
  if (!map) return {false, "map did not reach 1e-8"};
  std::ostringstream d;
  d << "V-projections to 1e-8: map " << *map;
  bool strict = false;
  for (std::size_t q = 2; q <= 5; ++q) {
    const auto a1 = v_count_to_reach(run_alg1(prob.sets(), x0, CyclicSchedule::cyclic(0, 2),
                                              WindowPolicy::last_q(q),
                                              mmup_options(prob, thr, 20000)),
                                     thr);
    const auto a2 = v_count_to_reach(run_alg2(prob.sets(), x0, CyclicSchedule::cyclic(1, 2),
                                              WindowPolicy::last_q(q),
                                              mmup_options(prob, thr, 20000)),
                                     thr);
    if (!a1 || !a2) {
      v.pass = false;
      d << "; q=" << q << " did not converge";
      continue;
    }
    d << "; q=" << q << " alg1 " << *a1 << " alg2 " << *a2;
    if (!(*a2 <= *a1 && *a1 <= *map)) v.pass = false;
    strict = strict || *a1 < *map;
  }
  v.pass = v.pass && strict;
  v.detail = d.str();
  return v;
}

Verdict experiment1_reassignment() {
  const auto ex = mmup::experiment1();
  const auto& prob = ex.problem;
  const Vector x0 = flatten(prob.x0());
  const auto& target = prob.targets().pairs.at(0);
  const auto before = mmup::pencil_eigenvalues(ex.pencil.m, ex.pencil.d, ex.pencil.k);
  // The two original eigenvalues closest to the targets are the ones reassigned.
  std::vector<Eigen::Index> moved;
  for (const cd mu : {target.mu, std::conj(target.mu)}) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < before.size(); ++i) {
      if (std::abs(before(i) - mu) < std::abs(before(best) - mu)) best = i;
    }
    moved.push_back(best);
  }

  struct Run {
    std::string name;
    std::function<SolveResult()> go;
  };
  const auto opt = mmup_options(prob, 1e-12, 20000);
  const std::vector<Run> runs{
      {"map", [&] { return run_map(prob.sets(), x0, CyclicSchedule::cyclic(0, 2), opt); }},
      {"alg1:2",
       [&] {
         return run_alg1(prob.sets(), x0, CyclicSchedule::cyclic(0, 2), WindowPolicy::last_q(2),
                         opt);
       }},
      {"alg1:all",
       [&] {
         return run_alg1(prob.sets(), x0, CyclicSchedule::cyclic(0, 2), WindowPolicy::all(), opt);
       }},
      {"alg2:2", [&] {
         return run_alg2(prob.sets(), x0, CyclicSchedule::cyclic(1, 2), WindowPolicy::last_q(2),
                         opt);
       }}};
  Verdict v;
  double worst_sym = 0.0, worst_pair = 0.0, worst_shift = 0.0;
  for (const auto& run : runs) {
    const auto r = run.go();
    if (!r.converged) {
      v.pass = false;
      v.detail += run.name + " did not converge; ";
      continue;
    }
    const auto [k, d] = mmup::extract_update(unflatten(r.solution, 8, 8));
    worst_sym = std::max({worst_sym, (k - k.transpose()).norm(), (d - d.transpose()).norm()});
    const mmup::PencilData updated{ex.pencil.m, d, k};
    worst_pair = std::max({worst_pair, mmup::eigenpair_residual(updated, target.mu, target.y),
                           mmup::eigenpair_residual(updated, std::conj(target.mu),
                                                    target.y.conjugate())});
    const auto after = mmup::pencil_eigenvalues(ex.pencil.m, d, k);
    for (Eigen::Index i = 0; i < before.size(); ++i) {
      if (std::find(moved.begin(), moved.end(), i) != moved.end()) continue;
      double nearest = 1e9;
      for (Eigen::Index j = 0; j < after.size(); ++j) {
        nearest = std::min(nearest, std::abs(after(j) - before(i)));
      }
      worst_shift = std::max(worst_shift, nearest);
    }
  }
  // Shift is measured to the nearest updated eigenvalue, a lower bound for any matching.
  v.pass = v.pass && worst_sym <= 1e-9 && worst_pair <= 1e-6 && worst_shift <= 0.5;
  v.detail += "asymmetry " + fmt(worst_sym) + ", eigenpair residual " + fmt(worst_pair) +
              " (need <= 1e-6), largest shift of other eigenvalues " + fmt(worst_shift) +
              " (need <= 0.5)";
  return v;
}

struct FamilyRun {
  std::string name;
  SolveResult result;
  Vector oracle;
  Vector x0;
  bool linear = false;
};

// Families for the oracle and invariant criteria; dim <= 30, k <= 4.
std::vector<RandomFamily> families(std::size_t count, bool linear, std::uint64_t salt) {
  std::vector<RandomFamily> out;
  for (std::uint64_t seed = 1; seed <= count; ++seed) {
    std::mt19937_64 rng(seed * 7919 + salt);
    RandomFamilySpec spec;
    spec.dim = 6 + static_cast<Eigen::Index>(rng() % 25);
    spec.k = 2 + static_cast<std::size_t>(rng() % 3);
    spec.seed = seed + salt;
    spec.linear = linear;
    const Eigen::Index cap = std::max<Eigen::Index>(1, (spec.dim - 1) / static_cast<Eigen::Index>(spec.k));
    for (std::size_t l = 0; l < spec.k; ++l) {
      spec.codims.push_back(1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(cap)));
    }
    out.push_back(make_random_family(spec));
  }
  return out;
}

std::vector<FamilyRun> run_all_policy(const std::vector<RandomFamily>& fams, bool linear,
                                      bool keep_points) {
  std::vector<FamilyRun> out;
  for (const auto& fam : fams) {
    const Vector oracle = direct_projection(fam.x0, stack(fam.sets));
    SolverOptions opt;
    opt.stop.tol = 1e-12;
    opt.stop.max_iter = 200000;
    opt.oracle = oracle;
    opt.monitors = keep_points;
    opt.record_points = keep_points;
    opt.record_decompositions = keep_points;
    const std::size_t k = fam.sets.size();
    out.push_back({"map", run_map(fam.sets, fam.x0, CyclicSchedule::cyclic(0, k), opt), oracle,
                   fam.x0, linear});
    out.push_back({"alg1", run_alg1(fam.sets, fam.x0, CyclicSchedule::cyclic(0, k),
                                    WindowPolicy::all(), opt),
                   oracle, fam.x0, linear});
    out.push_back({"alg2", run_alg2(fam.sets, fam.x0, CyclicSchedule::cyclic(1, k),
                                    WindowPolicy::all(), opt),
                   oracle, fam.x0, linear});
  }
  return out;
}

Verdict oracle_equivalence() {
  const auto runs = run_all_policy(families(50, false, 0), false, false);
  Verdict v;
  double worst = 0.0;
  for (const auto& r : runs) {
    const double dist = (r.result.solution - r.oracle).norm();
    worst = std::max(worst, dist);
    if (dist > 1e-6 || !r.result.converged) v.pass = false;
  }
  v.detail = std::to_string(runs.size()) + " runs on 50 families, worst distance to oracle " +
             fmt(worst) + " (need <= 1e-6)";
  return v;
}

// Nested subspaces: hyperplane normals drawn from M, so the projection onto
// the intersection is the hyperplane projection of the M-projection.
bool nested_projection_instance(std::mt19937_64& rng, double& worst) {
  const Eigen::Index dim = 4 + static_cast<Eigen::Index>(rng() % 20);
  const Eigen::Index codim = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(dim / 2));
  const auto m = random_subspace(rng, dim, codim);
  const Eigen::Index count = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(std::max<Eigen::Index>(1, (dim - codim) / 2)));
  std::vector<Hyperplane> hs;
  for (Eigen::Index j = 0; j < count; ++j) hs.push_back({m.project(gaussian(rng, dim)), 0.0});
  const Vector x = 3.0 * gaussian(rng, dim);
  const Vector composed = project_hyperplane_intersection(m.project(x), hs);
  std::vector<AffineSet> both{m};
  for (const auto& h : hs) both.push_back(AffineSet::hyperplane(h));
  const Vector direct = direct_projection(x, stack(both));
  const double err = (composed - direct).norm() / std::max(1.0, x.norm());
  worst = std::max(worst, err);
  return err <= 1e-9;
}

// Two subspaces and x in M1: the generated hyperplane contains M1 n M2 and
// its normal lies in M1.
bool two_subspace_instance(std::mt19937_64& rng, double& worst) {
  const Eigen::Index dim = 4 + static_cast<Eigen::Index>(rng() % 20);
  const auto m1 = random_subspace(rng, dim, 1 + static_cast<Eigen::Index>(rng() % 2));
  const auto m2 = random_subspace(rng, dim, 1 + static_cast<Eigen::Index>(rng() % 2));
  const Vector x = m1.project(3.0 * gaussian(rng, dim));
  const Vector xp = m2.project(x);
  const Vector xpp = m1.project(xp);
  const Hyperplane h = two_subspace_hyperplane(x, xp, xpp);
  if (h.is_whole_space()) return true;
  const std::vector<AffineSet> pair{m1, m2};
  const auto sc = stack(pair);
  double err = m1.residual(h.normal) / h.normal.norm();
  for (int s = 0; s < 5; ++s) {
    const Vector member = direct_projection(5.0 * gaussian(rng, dim), sc);
    err = std::max(err, std::abs(h.normal.dot(member) - h.offset) /
                            (h.normal.norm() * std::max(1.0, member.norm())));
  }
  worst = std::max(worst, err);
  return err <= 1e-9;
}

Verdict invariant_suite() {
  Verdict v;
  std::ostringstream d;

  const auto affine = run_all_policy(families(20, false, 1000), false, true);
  const auto linear = run_all_policy(families(20, true, 2000), true, true);
  std::vector<const FamilyRun*> all;
  for (const auto& r : affine) all.push_back(&r);
  for (const auto& r : linear) all.push_back(&r);

  // Extra windowed runs so the Fejer and membership checks see more than policy All.
  std::vector<FamilyRun> windowed;
  for (const auto& fam : families(20, false, 3000)) {
    const Vector oracle = direct_projection(fam.x0, stack(fam.sets));
    SolverOptions opt;
    opt.stop.max_iter = 300;
    opt.record_points = true;
    opt.monitors = true;
    opt.oracle = oracle;
    const std::size_t k = fam.sets.size();
    windowed.push_back({"alg1:3", run_alg1(fam.sets, fam.x0, CyclicSchedule::cyclic(0, k),
                                           WindowPolicy::last_q(3), opt),
                        oracle, fam.x0, false});
    windowed.push_back({"alg2:2", run_alg2(fam.sets, fam.x0, CyclicSchedule::cyclic(1, k),
                                           WindowPolicy::last_q(2), opt),
                        oracle, fam.x0, false});
  }
  for (const auto& r : windowed) all.push_back(&r);

  double fejer = -1e9;
  double m1_worst = 0.0;
  double inner_worst = 0.0;
  double bprime_worst = 0.0;
  std::size_t bprime_count = 0;
  for (const auto* run : all) {
    const auto& r = run->result;
    fejer = std::max(fejer, check_fejer(r.points, run->oracle));
    if (run->name.rfind("alg2", 0) == 0) {
      for (const auto& rec : r.trace) {
        if (rec.phase == Phase::hyperplane_projection) {
          m1_worst = std::max(m1_worst, rec.per_set_residuals.at(0));
        }
      }
    }
    if (run->linear && run->name != "map") {
      // <x0 - x_i, x_i> at every main iterate; for alg2 x0 is the lifted start.
      const Vector& x0 = run->name == "alg2" ? r.points.at(1) : r.points.at(0);
      const double scale = x0.squaredNorm();
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        if (r.trace[i].phase == Phase::hyperplane_projection) {
          inner_worst =
              std::max(inner_worst, std::abs((x0 - r.points[i]).dot(r.points[i])) / scale);
        }
      }
    }
    if (run->name == "map" && r.report) {
      for (double ratio : r.report->b_prime_ratios) {
        bprime_worst = std::max(bprime_worst, std::abs(ratio - 1.0));
        ++bprime_count;
      }
    }
  }
  const bool fejer_ok = fejer <= 1e-9;
  const bool m1_ok = m1_worst <= 1e-8;
  const bool inner_ok = inner_worst <= 1e-7;
  const bool bprime_ok = bprime_count > 0 && bprime_worst <= 1e-9;

  std::mt19937_64 rng(424242);
  double nested_worst = 0.0, two_worst = 0.0;
  int nested_fail = 0, two_fail = 0;
  for (int i = 0; i < 200; ++i) {
    if (!nested_projection_instance(rng, nested_worst)) ++nested_fail;
    if (!two_subspace_instance(rng, two_worst)) ++two_fail;
  }

  v.pass = fejer_ok && m1_ok && inner_ok && bprime_ok && nested_fail == 0 && two_fail == 0;
  d << "fejer margin " << fmt(fejer) << (fejer_ok ? "" : " FAIL") << "; alg2 M1 residual "
    << fmt(m1_worst) << (m1_ok ? "" : " FAIL") << "; condition-B inner/|x0|^2 "
    << fmt(inner_worst) << (inner_ok ? "" : " FAIL") << "; map b-prime |ratio-1| "
    << fmt(bprime_worst) << " over " << bprime_count << (bprime_ok ? "" : " FAIL")
    << "; nested-subspace identity " << 200 - nested_fail << "/200 (worst " << fmt(nested_worst)
    << "); two-subspace hyperplane " << 200 - two_fail << "/200 (worst " << fmt(two_worst) << ")";
  v.detail = d.str();
  return v;
}

Verdict experiment1_spectrum() {
  const auto ex = mmup::experiment1();
  const auto ev = mmup::pencil_eigenvalues(ex.pencil.m, ex.pencil.d, ex.pencil.k);
  const std::vector<cd> reported{{-0.0861, 1.6242}, {-0.1022, 0.8876}, {-0.1748, 1.1922},
                                 {-0.4480, 0.2465}};
  std::vector<cd> expected;
  for (const auto& r : reported) {
    expected.push_back(r);
    expected.push_back(std::conj(r));
  }
  // Greedy one-to-one matching.
  std::vector<bool> used(static_cast<std::size_t>(ev.size()), false);
  double worst = 0.0;
  for (const auto& e : expected) {
    std::size_t best = 0;
    double dist = 1e9;
    for (std::size_t i = 0; i < used.size(); ++i) {
      const double di = std::abs(ev(static_cast<Eigen::Index>(i)) - e);
      if (!used[i] && di < dist) {
        dist = di;
        best = i;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return {ev.size() == 8 && worst <= 1e-3,
          "8 eigenvalues, worst deviation " + fmt(worst) + " (need <= 1e-3)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*fn)();
  };
  const Criterion criteria[] = {
      {"experiment 2 acceleration", experiment2_acceleration},
      {"experiment 2 MAP rate", experiment2_map_rate},
      {"experiment 1 ordering", experiment1_ordering},
      {"eigenvalue reassignment", experiment1_reassignment},
      {"oracle equivalence", oracle_equivalence},
      {"invariant suite", invariant_suite},
      {"experiment 1 spectrum", experiment1_spectrum},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d (%s): %s - %s [%.2fs]\n", index, c.name, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), secs);
    if (!v.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
