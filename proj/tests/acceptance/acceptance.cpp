// One PASS/FAIL line per acceptance criterion. Tolerances are pinned here.
//   qode_acceptance            run all criteria
//   qode_acceptance --only N   run criterion N
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fig2.hpp"
#include "qode/carleman.hpp"
#include "qode/emulator.hpp"
#include "qode/instances.hpp"
#include "qode/linalg.hpp"
#include "qode/spectral_bounds.hpp"
#include "suites.hpp"

namespace {

using namespace qode;

constexpr std::uint64_t kSuiteSeed = 1;
constexpr int kLinearTrials = 100;
constexpr int kKreissTrials = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(q * (v.size() - 1))];
}

// 1: eigenvector condition numbers of the twisted Toeplitz family.
Outcome kappa_v_reproduction() {
  const double k10 = eigvec_condition(twisted_toeplitz(10)).kappa;
  const double k50 = eigvec_condition(twisted_toeplitz(50)).kappa;
  const double k100 = eigvec_condition(twisted_toeplitz(100)).kappa;
  const double r10 = std::abs(k10 - 17.5352873756155) / 17.5352873756155;
  const double r50 = std::abs(k50 - 24302637.0004239) / 24302637.0004239;
  const double l100 = std::abs(std::log10(k100) - std::log10(587523094872436.0));
  return {r10 <= 1e-3 && r50 <= 5e-2 && l100 <= 0.5,
          fmt("d10 %.10g (rel %.2e), d50 %.10g (rel %.2e), d100 %.4g (log10 dev %.3f)", k10, r10, k50, r50,
              k100, l100)};
}

// 2: exponential kappa_V against bounded kappa_L <= kappa_C over d = 15..100.
Outcome fig2_law() {
  workbench::Fig2Options opt;
  opt.d_min = 15;
  opt.d_max = 100;
  opt.params = "search";
  workbench::Fig2Policy pol;
  const auto rows = workbench::fig2_sweep(opt, pol);
  int failed = 0, order = 0;
  double max_l = 0.0, max_c = 0.0;
  for (const auto& r : rows) {
    if (!r.error.empty() || !std::isfinite(r.kappa_L) || !std::isfinite(r.kappa_C)) {
      ++failed;
      continue;
    }
    max_l = std::max(max_l, r.kappa_L);
    max_c = std::max(max_c, r.kappa_C);
    if (r.kappa_L > r.kappa_C) ++order;
  }
  const double slope = workbench::log_slope(rows);
  return {failed == 0 && order == 0 && slope >= 0.25 && max_l < 200.0 && max_c < 200.0,
          fmt("policy %s m=p=%lld k=%d; slope %.4f, max kappa_L %.3f, max kappa_C %.3f, order violations %d, "
              "failed rows %d",
              workbench::to_string(pol.rule), static_cast<long long>(pol.m), pol.k, slope, max_l, max_c, order,
              failed)};
}

// 3: transient hump for A, monotone decay under e^{-1.5 t} for B.
Outcome transient() {
  const CMatrix a = transient_example(), b = contractive_example();
  const CofA ca = c_of_a(a, 5.0);
  const double mu_b = log_norm(b);
  int increases = 0, above = 0;
  double prev = 1.0;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double t = 5.0 * i / (n - 1);
    const double v = op_norm(mat_exp(b, t));
    if (v > prev * (1.0 + 1e-12)) ++increases;
    if (v > std::exp(-1.5 * t) * (1.0 + 1e-12)) ++above;
    prev = v;
  }
  return {ca.value > 1.5 && ca.t_max > 0.0 && std::abs(mu_b + 1.5) < 1e-12 && increases == 0 && above == 0,
          fmt("max |e^{At}| %.6f at t %.4f; mu(B) %.15g; B increases %d, above bound %d", ca.value, ca.t_max,
              mu_b, increases, above)};
}

const std::vector<workbench::LinearTrial>& linear_suite() {
  static const auto trials = workbench::run_linear_suite(kSuiteSeed, kLinearTrials);
  return trials;
}

// 4: solution error and block agreement with the recursion.
Outcome solution_error() {
  int viol = 0, mismatch = 0, out_of_range = 0;
  double worst = 0.0, worst_block = 0.0;
  for (const auto& t : linear_suite()) {
    if (t.d > 6 || t.T * t.a_norm > 10.0 + 1e-9) ++out_of_range;
    if (!(t.rel_error <= t.params.delta)) ++viol;
    if (!(t.block_mismatch <= 1e-10)) ++mismatch;
    worst = std::max(worst, t.rel_error / t.params.delta);
    worst_block = std::max(worst_block, t.block_mismatch);
  }
  return {viol == 0 && mismatch == 0 && out_of_range == 0,
          fmt("%d trials; violations %d, max err/delta %.3e; block mismatches %d, max %.2e; out of range %d",
              static_cast<int>(linear_suite().size()), viol, worst, mismatch, worst_block, out_of_range)};
}

// 5: truncation lemmas and the A L1 = L0 - I identities.
Outcome lemmas() {
  int viol = 0, inapplicable = 0, checked = 0;
  for (const auto& t : linear_suite())
    for (const BoundCheck& c : t.lemmas) {
      if (c.informational) continue;
      if (!c.applicable) {
        ++inapplicable;
        continue;
      }
      ++checked;
      if (!(c.lhs <= c.rhs)) ++viol;
    }
  return {viol == 0 && inapplicable == 0, fmt("%d lemma evaluations, violations %d, inapplicable %d", checked,
                                              viol, inapplicable)};
}

// 6: condition number and success probability.
Outcome condition_and_probability() {
  const double e = std::exp(1.0);
  int kviol = 0, pviol = 0, unequal = 0;
  std::vector<double> kslack, pslack;
  for (const auto& t : linear_suite()) {
    const SolverParams& p = t.params;
    const double bound = static_cast<double>(p.m + p.p) * t.c_of_a * (1.0 + p.delta) * e * (1.0 + e) *
                         std::max(1.0, std::sqrt(static_cast<double>(p.k)));
    if (!(t.kappa_L <= bound)) ++kviol;
    kslack.push_back(bound / t.kappa_L);
    if (p.m != p.p || p.delta > 0.5) {
      ++unequal;
      continue;
    }
    const double lo = 1.0 / (18.0 * t.g * t.g);
    if (!(t.p_meas >= lo)) ++pviol;
    pslack.push_back(t.p_meas / lo);
  }
  return {kviol == 0 && pviol == 0 && unequal == 0,
          fmt("kappa violations %d, slack min %.2f median %.2f; probability violations %d, slack min %.2f "
              "median %.2f",
              kviol, quantile(kslack, 0.0), quantile(kslack, 0.5), pviol, quantile(pslack, 0.0),
              quantile(pslack, 0.5))};
}

// 7: Kreiss sandwich.
Outcome kreiss() {
  const auto trials = workbench::run_kreiss_suite(kSuiteSeed, kKreissTrials, 8);
  int viol = 0, bad_setup = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (const auto& t : trials) {
    if (t.unbounded || t.d > 8 || !(std::exp(t.alpha * t.horizon) < 1e-6)) ++bad_setup;
    if (!(t.low <= t.sup * (1.0 + workbench::kSupRelTol)) || !(t.sup <= t.high)) ++viol;
    tightest = std::min(tightest, t.sup / t.low);
  }
  return {viol == 0 && bad_setup == 0 && trials.size() == kKreissTrials,
          fmt("%d matrices, violations %d, setup problems %d, min sup/K %.4f", static_cast<int>(trials.size()),
              viol, bad_setup, tightest)};
}

// 8: Carleman pipeline on the scalar and coupled benchmarks.
Outcome carleman() {
  const double eps = 1e-4;
  std::string detail;
  bool ok = true;
  for (const auto& [name, ode] : {std::pair{"scalar", scalar_benchmark()}, std::pair{"coupled", coupled_benchmark()}}) {
    const NonlinearResult r = solve_nonlinear_end_to_end(ode, eps);
    const Rescaling rs = rescale(ode);
    const double uT = solve_quadratic_rk(rs.ode).final_norm;
    const int n_lemma =
        choose_truncation_N(rs.ode.T, quadratic_norms(rs.ode).f2, r.delta, uT, rs.ode.u_in.norm());
    auto get = [&](const char* n) {
      for (const BoundCheck& c : r.carleman.checks)
        if (c.name == n) return c;
      return BoundCheck{n, 1.0, 0.0};
    };
    const BoundCheck eta = get("eta1_truncation"), ca = get("c_of_a_carleman"), nd = get("norm_decrease");
    const bool here = r.R < 1.0 && r.normalized_error <= eps && r.N == n_lemma && eta.applicable &&
                      eta.lhs <= eta.rhs && ca.applicable && r.carleman.c_of_a <= 1.0 + 1e-9 && nd.applicable &&
                      nd.lhs <= nd.rhs;
    ok = ok && here;
    detail += fmt("%s%s: R %.4g N %d Delta %lld err %.2e eta %.2e<=%.2e C %.12f max|u| %.6g<=%.6g", detail.empty() ? "" : "; ",
                  name, r.R, r.N, static_cast<long long>(r.delta_dim), r.normalized_error, eta.lhs, eta.rhs,
                  r.carleman.c_of_a, nd.lhs, rs.ode.u_in.norm());
  }
  return {ok, detail};
}

// 9: cost model structure on pinned inputs.
Outcome cost_model_structure() {
  CostInputs in;
  in.s = 2;
  in.k = 10;
  in.kappa_L = 50.0;
  in.m = 8;
  in.d = 4;
  in.eps = 1e-3;
  in.g = 1.5;
  in.T = 4.0;
  in.a_norm = 2.0;
  in.c_of_a = 1.0;
  const QueryCost q = cost_model(in);
  bool ok = q.query_factor == 1000.0;
  ok = ok && q.main_factor == in.g * in.T * in.a_norm;
  CostInputs half = in;
  half.eps /= 2.0;
  const QueryCost h = cost_model(half);
  ok = ok && h.query_factor == q.query_factor && h.main_factor == q.main_factor &&
       h.query_polylog() > q.query_polylog() && h.main_polylog() > q.main_polylog();
  int non_monotone = 0;
  const std::vector<std::function<void(CostInputs&)>> grow = {
      [](CostInputs& c) { c.s *= 2; },      [](CostInputs& c) { c.k *= 2; },
      [](CostInputs& c) { c.m *= 2; },      [](CostInputs& c) { c.d *= 2; },
      [](CostInputs& c) { c.kappa_L *= 2; }, [](CostInputs& c) { c.eps /= 2; },
      [](CostInputs& c) { c.g *= 2; },      [](CostInputs& c) { c.T *= 2; },
      [](CostInputs& c) { c.a_norm *= 2; }, [](CostInputs& c) { c.c_of_a *= 2; },
      [](CostInputs& c) { c.b_norm += 1; }};
  for (const auto& f : grow) {
    CostInputs c = in;
    f(c);
    const QueryCost g = cost_model(c);
    if (g.query_factor * g.query_polylog() < q.query_factor * q.query_polylog() ||
        g.main_factor * g.main_polylog() < q.main_factor * q.main_polylog())
      ++non_monotone;
  }
  ok = ok && non_monotone == 0;
  return {ok, fmt("query_factor %.6g, main_factor %.6g, non-monotone arguments %d", q.query_factor, q.main_factor,
                  non_monotone)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kappa_V reproduction", kappa_v_reproduction},
      {"condition growth law", fig2_law},
      {"transient and decay", transient},
      {"solution error suite", solution_error},
      {"truncation lemmas", lemmas},
      {"condition number and success probability", condition_and_probability},
      {"Kreiss sandwich", kreiss},
      {"Carleman end to end", carleman},
      {"cost model structure", cost_model_structure}};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion %d does not exist\n", only);
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
