#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "parallel.hpp"
#include "qode/instances.hpp"

namespace qode::workbench {

std::vector<LinearTrial> run_linear_suite(std::uint64_t seed, int trials, unsigned workers) {
  std::vector<LinearTrial> out(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(out.size(), [&](std::size_t i) {
    std::mt19937_64 rng(seed + i);
    const LinearProblem prob = random_stable_problem(rng);
    LinearTrial& t = out[i];
    t.index = static_cast<int>(i);
    t.d = prob.A.dim();
    t.T = prob.T;
    t.a_norm = op_norm(prob.A);
    t.eps = prob.eps;
    t.params = choose_params(prob);
    const EmulationResult r = emulate(prob, t.params);
    const std::vector<CVector> rec = taylor_recursion(prob, t.params);
    for (std::size_t j = 0; j < rec.size(); ++j)
      t.block_mismatch = std::max(t.block_mismatch,
                                  (r.y_blocks[j] - rec[j]).norm() / std::max(1.0, rec[j].norm()));
    t.rel_error = r.rel_error;
    t.kappa_L = r.kappa_L ? r.kappa_L->kappa : std::numeric_limits<double>::quiet_NaN();
    t.c_of_a = r.c_of_a.value_or(std::numeric_limits<double>::quiet_NaN());
    t.p_meas = r.p_meas;
    t.g = r.g;
    t.checks = r.bound_checks;
    t.lemmas = verify_truncation_lemmas(prob.A.dense(), t.params, prob.T);
  }, workers);
  return out;
}

std::vector<KreissTrial> run_kreiss_suite(std::uint64_t seed, int trials, Index d_max, unsigned workers) {
  std::vector<KreissTrial> out(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(out.size(), [&](std::size_t i) {
    std::mt19937_64 rng(seed + 7919 * (i + 1));
    std::uniform_int_distribution<Index> dd(1, d_max);
    const Index d = dd(rng);
    const CMatrix a = random_stable_matrix(rng, d);
    KreissTrial& t = out[i];
    t.index = static_cast<int>(i);
    t.d = d;
    t.alpha = spectral_scalars(a).alpha;
    t.horizon = 1.05 * std::log(1e6) / std::abs(t.alpha);
    const KreissEstimate k = kreiss_constant(a);
    t.low = k.low;
    t.high = k.high;
    t.unbounded = k.unbounded;
    CofAOptions co;
    co.n_grid = 4096;
    t.sup = c_of_a(a, t.horizon, co).value;
  }, workers);
  return out;
}

namespace {

struct Tally {
  int total = 0;
  int violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
};

std::vector<BoundCheck> to_checks(const std::vector<std::pair<std::string, Tally>>& tallies) {
  std::vector<BoundCheck> out;
  for (const auto& [name, t] : tallies) {
    BoundCheck c{name, static_cast<double>(t.violations), 0.0};
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d trials, min slack %.6g", t.total, t.min_slack);
    c.note = buf;
    out.push_back(c);
  }
  return out;
}

void add(std::vector<std::pair<std::string, Tally>>& tallies, const std::string& name, double lhs,
         double rhs, bool applicable = true) {
  auto it = std::find_if(tallies.begin(), tallies.end(), [&](const auto& p) { return p.first == name; });
  if (it == tallies.end()) {
    tallies.emplace_back(name, Tally{});
    it = std::prev(tallies.end());
  }
  if (!applicable) return;
  Tally& t = it->second;
  ++t.total;
  if (!(lhs <= rhs)) ++t.violations;
  t.min_slack = std::min(t.min_slack, lhs > 0.0 ? rhs / lhs : std::numeric_limits<double>::infinity());
}

}  // namespace

std::vector<BoundCheck> summarize(const std::vector<LinearTrial>& trials) {
  std::vector<std::pair<std::string, Tally>> tallies;
  for (const LinearTrial& t : trials) {
    add(tallies, "blocks_match_recursion", t.block_mismatch, kBlockTolerance);
    for (const BoundCheck& c : t.checks)
      if (!c.informational) add(tallies, c.name, c.lhs, c.rhs, c.applicable);
    for (const BoundCheck& c : t.lemmas)
      if (!c.informational) add(tallies, c.name, c.lhs, c.rhs, c.applicable);
  }
  return to_checks(tallies);
}

std::vector<BoundCheck> summarize(const std::vector<KreissTrial>& trials) {
  std::vector<std::pair<std::string, Tally>> tallies;
  for (const KreissTrial& t : trials) {
    add(tallies, "kreiss_lower", t.low, t.sup * (1.0 + kSupRelTol), !t.unbounded);
    add(tallies, "kreiss_upper", t.sup, t.high, !t.unbounded);
    add(tallies, "kreiss_bounded", t.unbounded ? 1.0 : 0.0, 0.0);
  }
  return to_checks(tallies);
}

}  // namespace qode::workbench
