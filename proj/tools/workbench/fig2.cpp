#include "fig2.hpp"

#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "qode/emulator.hpp"
#include "qode/errors.hpp"
#include "qode/instances.hpp"
#include "reference_data.hpp"

namespace qode::workbench {

namespace {

template <std::size_t N>
std::optional<double> lookup(const std::array<ReferencePoint, N>& table, Index d) {
  for (const auto& p : table)
    if (p.d == d) return p.value;
  return std::nullopt;
}

// kappa_L for the auto policy and the search.
constexpr double kAutoT = 1.0;
constexpr double kAutoEps = 1e-2;

}  // namespace

const char* to_string(StepRule r) noexcept {
  return r == StepRule::unit_norm ? "h=1/||A||" : "h=1/m";
}

SolverParams policy_params(const Fig2Policy& pol, const CMatrix& a) {
  if (pol.mode == "auto") {
    const Index d = a.rows();
    LinearProblem prob{MatrixHandle(a), CVector::Zero(d), CVector::Ones(d) / std::sqrt(double(d)), kAutoT, kAutoEps};
    return choose_params(prob);
  }
  SolverParams p;
  p.m = p.p = pol.m;
  p.k = pol.k;
  p.h = pol.rule == StepRule::unit_norm ? 1.0 / op_norm(a) : 1.0 / static_cast<double>(pol.m);
  p.delta = kAutoEps / 2.0;
  return p;
}

Fig2Policy search_policy(Index search_d, int search_max) {
  const auto target = lookup(kKappaLReference, search_d);
  if (!target) throw InputError("fig2: no reference value at d=" + std::to_string(search_d));
  const CMatrix a = twisted_toeplitz(search_d);
  const MatrixHandle h(a);
  struct Cand {
    StepRule rule;
    Index m;
    int k;
    double kappa;
  };
  std::vector<Cand> cands;
  for (StepRule rule : {StepRule::unit_norm, StepRule::unit_horizon})
    for (Index m = 1; m <= search_max; ++m)
      for (int k = 1; k <= search_max; ++k) cands.push_back({rule, m, k, 0.0});
  parallel_for(cands.size(), [&](std::size_t i) {
    Fig2Policy pol;
    pol.mode = "search";
    pol.rule = cands[i].rule;
    pol.m = cands[i].m;
    pol.k = cands[i].k;
    cands[i].kappa = kappa_of_system(build_L(h, policy_params(pol, a))).kappa;
  });
  Fig2Policy best;
  best.mode = "search";
  best.target = *target;
  double err = std::numeric_limits<double>::infinity();
  for (const Cand& c : cands) {
    const double e = std::abs(c.kappa - *target);
    if (e < err) {
      err = e;
      best.rule = c.rule;
      best.m = c.m;
      best.k = c.k;
      best.achieved = c.kappa;
    }
  }
  return best;
}

Fig2Row fig2_row(Index d, const Fig2Policy& pol, bool raw_bcow) {
  const CMatrix a = twisted_toeplitz(d);
  const MatrixHandle h(a);
  const SolverParams p = policy_params(pol, a);
  Fig2Row r;
  r.d = d;
  r.h = p.h;
  r.m = p.m;
  r.k = p.k;
  r.kappa_L = kappa_of_system(build_L(h, p)).kappa;
  r.kappa_C = kappa_of_system(build_bcow_C(h, p.h, p.k, p.m, p.p, raw_bcow)).kappa;
  const EigvecCondition ev = eigvec_condition(a);
  r.kappa_V = ev.kappa;
  r.diagonalizable = ev.diagonalizable;
  r.ref_L = lookup(kKappaLReference, d);
  r.ref_C = lookup(kKappaCReference, d);
  r.ref_V = lookup(kKappaVReference, d);
  return r;
}

std::vector<Fig2Row> fig2_sweep(const Fig2Options& opt, Fig2Policy& policy_out) {
  if (opt.d_min < 1 || opt.d_max < opt.d_min || opt.d_step < 1)
    throw InputError("fig2: need 1 <= d_min <= d_max and d_step >= 1");
  if (opt.params == "search") {
    policy_out = search_policy(opt.search_d, opt.search_max);
  } else if (opt.params == "auto") {
    policy_out = Fig2Policy{};
    policy_out.mode = "auto";
  } else {
    throw InputError("fig2: --params must be 'auto' or 'search'");
  }
  std::vector<Index> ds;
  for (Index d = opt.d_min; d <= opt.d_max; d += opt.d_step) ds.push_back(d);
  std::vector<Fig2Row> rows(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    try {
      rows[i] = fig2_row(ds[i], policy_out, opt.raw_bcow);
    } catch (const NumericError& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rows[i] = Fig2Row{ds[i], nan, 0, 0, nan, nan, nan, false, std::nullopt, std::nullopt, std::nullopt, e.what()};
    }
  }, opt.workers);
  return rows;
}

double log_slope(const std::vector<Fig2Row>& rows) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const Fig2Row& r : rows) {
    if (!std::isfinite(r.kappa_V) || r.kappa_V <= 0) continue;
    const double x = static_cast<double>(r.d), y = std::log(r.kappa_V);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qode::workbench
