#include "qode/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qode/errors.hpp"

namespace qode {

namespace {

const double kE = std::exp(1.0);

double log_factorial(int n) { return std::lgamma(n + 1.0); }

// The theorem hypotheses: h ||A|| <= 1 and the factorial condition.
bool hypotheses_hold(const SolverParams& p, double a_norm, double T, double b_norm,
                     double xT_norm) {
  if (p.h * a_norm > 1.0 + 1e-12) return false;
  const double thr = solution_error_threshold(p.m, p.delta, T, b_norm, xT_norm);
  return log_factorial(p.k + 1) >= std::log(thr);
}

}  // namespace

double solution_error_threshold(Index m, double delta, double T, double b_norm, double xT_norm) {
  return static_cast<double>(m) * std::pow(kE, 3) / delta *
         (1.0 + T * kE * kE * b_norm / xT_norm);
}

SolverParams choose_params(const LinearProblem& prob, std::optional<double> xT_norm) {
  validate(prob);
  const double a_norm = op_norm(prob.A);
  const double xt = xT_norm ? *xT_norm : exact_linear_solution(prob, prob.T).norm();
  if (!(xt > 0.0)) throw PreconditionError("choose_params: ||x_T|| must be positive");
  const double b_norm = prob.b.norm();
  SolverParams p;
  const double ta = prob.T * a_norm;
  Index m = static_cast<Index>(std::ceil(ta - 1e-12 * std::max(ta, 1.0)));
  if (m < 1) {
    m = 1;
    p.m_clamped = true;
  }
  p.m = p.p = m;
  p.h = prob.T / static_cast<double>(m);
  p.delta = prob.eps / 2.0;
  p.omega = std::pow(kE, 3) * ta * (1.0 + prob.T * kE * kE * b_norm / xt);
  int k = 3;
  if (p.omega > kE) {
    const double lo = std::log(p.omega);
    k = static_cast<int>(std::ceil(2.0 * lo / std::log(lo)));
  } else {
    p.k_floor_applied = true;
  }
  k = std::max(k, 1);
  const double thr = std::log(solution_error_threshold(m, p.delta, prob.T, b_norm, xt));
  while (log_factorial(k + 1) < thr) ++k;
  p.k = k;
  return p;
}

bool EmulationResult::all_pass() const {
  return std::all_of(bound_checks.begin(), bound_checks.end(),
                     [](const BoundCheck& c) { return c.pass(); });
}

EmulationResult emulate(const LinearProblem& prob, const SolverParams& params,
                        const EmulateOptions& opt) {
  validate(prob);
  const TaylorSystem sys = assemble_system(prob.A, prob.x0, prob.b, params);
  const CVector y = sys.L.solve(sys.psi.psi);
  const BlockLayout& lay = sys.L.layout();
  const Index d = lay.d;

  EmulationResult r;
  r.params = params;
  r.n_init = sys.psi.norm;
  for (Index i = 0; i <= params.m; ++i) r.y_blocks.push_back(y.segment(lay.offset(i, 0), d));
  r.y_m = r.y_blocks.back();
  r.x_T = exact_linear_solution(prob, prob.T);
  const double xn = r.x_T.norm();
  if (!(xn > 0.0)) throw PreconditionError("emulate: x_T = 0");
  r.rel_error = (r.y_m - r.x_T).norm() / xn;
  const double yn = r.y_m.norm();
  r.output_state_error = yn > 0.0 ? (r.y_m / yn - r.x_T / xn).norm() : 1.0;

  const Index bs = lay.terms * d;
  double tail = 0.0;
  for (Index i = params.m; i < lay.time_blocks; ++i) tail += y.segment(i * bs, bs).squaredNorm();
  r.p_meas = tail / y.squaredNorm();

  const Trajectory tr = linear_trajectory(prob, opt.trajectory_samples);
  r.g = tr.g();

  if (opt.compute_kappa) r.kappa_L = kappa_of_system(sys.L, opt.kappa);
  if (opt.keep_solution) r.solution = y;

  if (opt.check_bounds) {
    const double a_norm = op_norm(prob.A);
    const bool hyp = hypotheses_hold(params, a_norm, prob.T, prob.b.norm(), xn);
    BoundCheck err{"solution_error", r.rel_error, params.delta};
    err.applicable = hyp;
    if (!hyp) err.note = "parameters do not meet the theorem hypotheses";
    r.bound_checks.push_back(err);
    if (r.kappa_L) {
      r.c_of_a = c_of_a(prob.A, prob.T).value;
      BoundCheck cb = verify_condition_bound(r, *r.c_of_a);
      if (!hyp) {
        cb.applicable = false;
        cb.note = "parameters do not meet the theorem hypotheses";
      }
      r.bound_checks.push_back(cb);
    }
    BoundCheck pb = verify_success_prob(r);
    if (!hyp) {
      pb.applicable = false;
      pb.note = "parameters do not meet the theorem hypotheses";
    }
    r.bound_checks.push_back(pb);
  }
  return r;
}

std::vector<BoundCheck> verify_truncation_lemmas(const CMatrix& a, const SolverParams& params,
                                                 double T) {
  const Index d = a.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  const double h = params.h;
  const int k = params.k;
  const Index m = params.m;
  const double fact = std::exp(log_factorial(k + 1));
  const double a_norm = op_norm(a);
  const CMatrix ah = a * Complex(h);

  const CMatrix l0 = mat_exp(ah);
  const CMatrix l0p = taylor_T(k, ah);
  const CMatrix l1 = phi1(a, h);
  // h S_k(Ah), so that A l1' = l0' - I matches the recursion.
  const CMatrix l1p = taylor_S(k, ah) * Complex(h);
  const CMatrix L0 = mat_exp(a, T);
  CMatrix L0p = id, L1p = CMatrix::Zero(d, d);
  for (Index j = 0; j < m; ++j) {
    L1p += L0p * l1p;
    L0p = L0p * l0p;
  }
  const CMatrix L1 = phi1(a, T);
  const CMatrix l0_inv = mat_exp(CMatrix(-ah));
  const CMatrix L0_inv = mat_exp(CMatrix(-a), T);

  std::vector<BoundCheck> out;
  const bool guard = h * a_norm <= 1.0 + 1e-12;
  auto add = [&](const char* name, double lhs, double rhs, bool applicable) {
    BoundCheck c{name, lhs, rhs, applicable};
    if (!applicable) c.note = "requires ||Ah|| <= 1";
    out.push_back(c);
  };
  add("lemma_l0", op_norm(CMatrix((l0 - l0p) * l0_inv)), kE * kE / fact, guard);
  add("lemma_l1", op_norm(CMatrix(l1 - l1p)),
      a_norm > 0.0 ? kE / (a_norm * fact) : std::numeric_limits<double>::infinity(), guard);
  add("lemma_L0", op_norm(CMatrix((L0 - L0p) * L0_inv)), (kE - 1.0) * m * kE * kE / fact, guard);
  add("lemma_L1", op_norm(CMatrix((L1 - L1p) * L0_inv)), m * T * std::pow(kE, 5) / fact, guard);

  const double tol = 1e-10;
  const double s1 = 1.0 + a_norm * op_norm(L1);
  add("identity_AL1", op_norm(CMatrix(a * L1 - (L0 - id))) / s1, tol, true);
  const double s2 = 1.0 + a_norm * op_norm(L1p);
  add("identity_AL1_prime", op_norm(CMatrix(a * L1p - (L0p - id))) / s2, tol, true);
  BoundCheck stmt{"identity_AL1_statement_form", op_norm(CMatrix(a * L1 - L0)) / s1, tol, true, true};
  stmt.note = "A L1 = L0 as literally stated; the derivation gives L0 - I";
  out.push_back(stmt);
  return out;
}

BoundCheck verify_condition_bound(const EmulationResult& r, double c_of_a) {
  if (!r.kappa_L) throw PreconditionError("verify_condition_bound: kappa_L was not computed");
  const SolverParams& p = r.params;
  const double base = static_cast<double>(p.m + p.p) * c_of_a * (1.0 + p.delta);
  const double stmt = base * kE * (1.0 + kE);
  const double proof = base * std::sqrt(static_cast<double>(p.k));
  const double uni = stmt * std::max(1.0, std::sqrt(static_cast<double>(p.k)));
  BoundCheck c{"condition_number", r.kappa_L->kappa, uni};
  const double kl = r.kappa_L->kappa;
  c.note = std::string("statement form ") + (kl <= stmt ? "holds" : "fails") +
           ", sqrt(k) form without constant " + (kl <= proof ? "holds" : "fails");
  return c;
}

BoundCheck verify_success_prob(const EmulationResult& r) {
  BoundCheck c{"success_probability", 1.0 / (18.0 * r.g * r.g), r.p_meas};
  c.applicable = r.params.m == r.params.p && r.params.delta <= 0.5;
  if (!c.applicable) c.note = "requires m = p and delta <= 1/2";
  return c;
}

double QueryCost::query_polylog() const {
  double v = 1.0;
  for (const auto& [name, x] : query_log_args) v *= std::max(1.0, std::log(x));
  return v;
}

double QueryCost::main_polylog() const {
  double v = 1.0;
  for (const auto& [name, x] : main_log_args) v *= std::max(1.0, std::log(x));
  return v;
}

QueryCost cost_model(const CostInputs& in) {
  if (!(in.eps > 0.0 && in.eps < 1.0)) throw InputError("cost_model: eps must lie in (0, 1)");
  if (in.s < 1 || in.d < 1 || in.k < 1 || in.m < 1) throw InputError("cost_model: s, d, k, m must be >= 1");
  if (!(in.kappa_L >= 1.0) || !(in.g > 0.0) || !(in.c_of_a > 0.0) || !(in.xT_norm > 0.0))
    throw InputError("cost_model: kappa_L, g, C(A), ||x_T|| must be positive");
  QueryCost q;
  q.query_factor = static_cast<double>(in.s) * in.k * in.kappa_L;
  q.query_log_args = {{"k", static_cast<double>(in.k)},
                      {"m", static_cast<double>(in.m)},
                      {"d", static_cast<double>(in.d)},
                      {"kappa_L", in.kappa_L},
                      {"1/eps", 1.0 / in.eps}};
  const double ta = in.T * in.a_norm;
  q.main_factor = in.g * ta * in.c_of_a;
  q.main_log_args = {{"s", static_cast<double>(in.s)},
                     {"d", static_cast<double>(in.d)},
                     {"1+Te^2|b|/|x_T|", 1.0 + in.T * kE * kE * in.b_norm / in.xT_norm},
                     {"1/eps", 1.0 / in.eps},
                     {"T|A|C(A)", std::max(ta * in.c_of_a, 1.0)}};
  q.components = {{"s", static_cast<double>(in.s)},     {"k", static_cast<double>(in.k)},
                  {"m", static_cast<double>(in.m)},     {"d", static_cast<double>(in.d)},
                  {"kappa_L", in.kappa_L},              {"eps", in.eps},
                  {"g", in.g},                          {"C(A)", in.c_of_a}};
  return q;
}

}  // namespace qode
