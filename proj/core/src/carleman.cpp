#include "qode/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "qode/errors.hpp"

namespace qode {

namespace {

using Triplet = Eigen::Triplet<Complex>;

Index ipow(Index d, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= d;
  return r;
}

// Sum over positions q of I^(x)q (x) G (x) I^(x)(j-1-q), G is d x d^w.
void add_kron_terms(std::vector<Triplet>& trip, const RMatrix& g, int w, int j, Index d,
                    Index row_off, Index col_off) {
  const Index dw = ipow(d, w);
  for (int q = 0; q < j; ++q) {
    const Index pre = ipow(d, q);
    const Index suf = ipow(d, j - 1 - q);
    for (Index r = 0; r < g.rows(); ++r)
      for (Index c = 0; c < g.cols(); ++c) {
        const double v = g(r, c);
        if (v == 0.0) continue;
        for (Index P = 0; P < pre; ++P)
          for (Index S = 0; S < suf; ++S)
            trip.emplace_back(row_off + (P * d + r) * suf + S, col_off + (P * dw + c) * suf + S, v);
      }
  }
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

Index carleman_dimension(Index d, int N) {
  if (d < 1 || N < 1) throw InputError("carleman_dimension: need d, N >= 1");
  double total = 0.0, pw = 1.0;
  for (int j = 1; j <= N; ++j) {
    pw *= static_cast<double>(d);
    total += pw;
  }
  if (total > 1e15) throw CapacityError("Carleman dimension overflows");
  return static_cast<Index>(total);
}

Index CarlemanSystem::level_offset(int j) const {
  Index off = 0;
  for (int i = 1; i < j; ++i) off += ipow(d, i);
  return off;
}

Index CarlemanSystem::level_size(int j) const { return ipow(d, j); }

QuadraticNorms quadratic_norms(const QuadraticODE& ode) {
  validate(ode);
  QuadraticNorms n;
  n.f0 = ode.F0.norm();
  n.mu1 = log_norm(ode.F1);
  Eigen::BDCSVD<RMatrix> svd(ode.F2);
  n.f2 = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return n;
}

CarlemanSystem build_carleman(const QuadraticODE& ode, int N, Index max_delta) {
  validate(ode);
  if (N < 1) throw InputError("build_carleman: N must be >= 1");
  const Index d = ode.u_in.size();
  const Index delta = carleman_dimension(d, N);
  if (delta > max_delta)
    throw CapacityError("build_carleman: Delta=" + std::to_string(delta) + " above limit " +
                        std::to_string(max_delta));
  CarlemanSystem sys;
  sys.N = N;
  sys.d = d;
  sys.delta = delta;
  std::vector<Triplet> trip;
  const RMatrix f0 = ode.F0;  // d x 1
  for (int j = 1; j <= N; ++j) {
    const Index off = sys.level_offset(j);
    add_kron_terms(trip, ode.F1, 1, j, d, off, off);
    if (j < N) add_kron_terms(trip, ode.F2, 2, j, d, off, sys.level_offset(j + 1));
    if (j > 1) add_kron_terms(trip, f0, 0, j, d, off, sys.level_offset(j - 1));
  }
  sys.A.resize(delta, delta);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  sys.b = CVector::Zero(delta);
  sys.b.head(d) = ode.F0.cast<Complex>();
  sys.x_in.resize(delta);
  CVector pw = ode.u_in.cast<Complex>();
  const CVector u = pw;
  for (int j = 1; j <= N; ++j) {
    sys.x_in.segment(sys.level_offset(j), pw.size()) = pw;
    if (j < N) pw = kron(pw, u);
  }
  return sys;
}

double compute_R(const QuadraticODE& ode) {
  const QuadraticNorms n = quadratic_norms(ode);
  const double u = ode.u_in.norm();
  if (n.mu1 >= 0.0) throw PreconditionError("compute_R: dissipation assumption violated, mu(F1) >= 0");
  if (u == 0.0) throw InputError("compute_R: u_in = 0");
  return (n.f2 * u + n.f0 / u) / std::abs(n.mu1);
}

Rescaling rescale(const QuadraticODE& ode) {
  const QuadraticNorms n = quadratic_norms(ode);
  const double R = n.mu1 < 0.0 && ode.u_in.norm() > 0.0 ? compute_R(ode)
                                                        : std::numeric_limits<double>::infinity();
  if (!(R < 1.0)) throw PreconditionError("rescale: requires R < 1, got R=" + std::to_string(R));
  const double a = n.f2, b = n.mu1, c = n.f0;
  const double u = ode.u_in.norm();
  Rescaling out;
  auto q = [&](double x) { return a * x * x + b * x + c; };
  if (a == 0.0) {
    // Linear case: any gamma > ||u_in|| > -c/b keeps Q negative.
    out.r_minus = -c / b;
    out.r_plus = std::numeric_limits<double>::infinity();
    out.gamma = 2.0 * u;
  } else {
    const double sq = std::sqrt(b * b - 4.0 * a * c);
    out.r_plus = (-b + sq) / (2.0 * a);
    out.r_minus = (-b - sq) / (2.0 * a);
    out.gamma = std::sqrt(u * out.r_plus);
    if (!(q(out.gamma) < 0.0)) {
      double lo = u, hi = out.r_plus;
      out.bisected = true;
      for (int it = 0; it < 200 && !(q(out.gamma) < 0.0); ++it) {
        out.gamma = 0.5 * (lo + hi);
        if (q(out.gamma) >= 0.0) hi = out.gamma;
      }
      if (!(q(out.gamma) < 0.0)) throw NumericError("rescale: no gamma with Q(gamma) < 0 found");
    }
  }
  out.ode = ode;
  out.ode.F0 = ode.F0 / out.gamma;
  out.ode.F2 = ode.F2 * out.gamma;
  out.ode.u_in = ode.u_in / out.gamma;
  return out;
}

int choose_truncation_N(double T, double f2_norm, double delta, double uT_norm, double u0_norm) {
  if (!(u0_norm < 1.0) || !(u0_norm > 0.0))
    throw PreconditionError("choose_truncation_N: requires 0 < ||u(0)|| < 1");
  if (!(delta > 0.0) || !(uT_norm > 0.0) || !(T > 0.0))
    throw InputError("choose_truncation_N: delta, ||u(T)||, T must be positive");
  if (f2_norm == 0.0) return 1;
  const double v = 2.0 * std::log(T * f2_norm / (delta * uT_norm)) / std::log(1.0 / u0_norm);
  if (!(v > 1.0)) return 1;
  return static_cast<int>(std::ceil(v - 1e-12 * v));
}

CarlemanDiagnostics verify_carleman_bounds(const CarlemanSystem& sys, const QuadraticODE& ode,
                                           double delta, const RKOptions& rk) {
  CarlemanDiagnostics out;
  const Trajectory tr = solve_quadratic_rk(ode, rk);
  const double u0 = ode.u_in.norm();
  out.max_u_norm = tr.max_norm;
  const bool dissipative = quadratic_norms(ode).mu1 < 0.0;
  BoundCheck nd{"norm_decrease", tr.max_norm, u0 * (1.0 + 10.0 * rk.rtol) + rk.atol, dissipative};
  nd.note = dissipative ? "sup ||u(t)|| from the reference trajectory" : "requires mu(F1) < 0";
  out.checks.push_back(nd);

  out.c_of_a = c_of_a(CMatrix(sys.A), ode.T).value;
  BoundCheck ca{"c_of_a_carleman", out.c_of_a, 1.0 + 1e-9, dissipative};
  if (!dissipative) ca.note = "requires mu(F1) < 0";
  out.checks.push_back(ca);

  LinearProblem lp{MatrixHandle(sys.A), sys.b, sys.x_in, ode.T, 0.5};
  const CVector x = exact_linear_solution(lp, ode.T);
  const RVector& uT = tr.x.back().real();
  out.eta1 = (x.head(sys.d) - uT.cast<Complex>()).norm();
  out.checks.push_back({"eta1_truncation", out.eta1, delta * uT.norm()});
  return out;
}

bool NonlinearResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass(); });
}

NonlinearResult solve_nonlinear_end_to_end(const QuadraticODE& ode, double eps,
                                           const NonlinearOptions& opt) {
  validate(ode);
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("solve_nonlinear_end_to_end: eps must lie in (0, 1)");
  NonlinearResult r;
  if (!(quadratic_norms(ode).mu1 < 0.0))
    throw PreconditionError("solve_nonlinear_end_to_end: dissipation assumption violated, mu(F1) >= 0");
  r.R = compute_R(ode);
  const Rescaling rs = rescale(ode);
  r.gamma = rs.gamma;
  const QuadraticODE& od = rs.ode;

  const Trajectory ref = solve_quadratic_rk(od, opt.rk);
  const RVector uT = ref.x.back().real();
  const double uTn = uT.norm();
  if (!(uTn > 0.0)) throw PreconditionError("solve_nonlinear_end_to_end: u(T) = 0");
  r.u_T_reference = uT * rs.gamma;
  r.g_u = od.u_in.norm() / uTn;

  r.delta = eps / 4.0;
  const QuadraticNorms nr = quadratic_norms(od);
  r.N = choose_truncation_N(od.T, nr.f2, r.delta, uTn, od.u_in.norm());
  r.delta_prime = eps / (4.0 * (1.0 + r.delta) * std::sqrt(static_cast<double>(r.N)));

  const CarlemanSystem sys = build_carleman(od, r.N, opt.max_delta);
  r.delta_dim = sys.delta;
  r.carleman = verify_carleman_bounds(sys, od, r.delta, opt.rk);

  LinearProblem lp{MatrixHandle(sys.A), sys.b, sys.x_in, od.T, 2.0 * r.delta_prime};
  r.params = choose_params(lp);
  EmulateOptions eo;
  const double ldim = static_cast<double>(r.params.m + r.params.p) * (r.params.k + 1) * sys.delta;
  eo.compute_kappa = opt.compute_kappa && ldim <= 2e5;
  r.emulation = emulate(lp, r.params, eo);
  r.g = r.emulation.g;
  r.p_meas = r.emulation.p_meas;

  const CVector y1 = r.emulation.y_m.head(sys.d);
  r.u_T_output = y1 * rs.gamma;
  const double y1n = y1.norm();
  r.normalized_error = y1n > 0.0 ? (y1 / y1n - uT.cast<Complex>() / uTn).norm() : 1.0;
  r.relative_error = (r.u_T_output - r.u_T_reference.cast<Complex>()).norm() / r.u_T_reference.norm();
  r.level1_probability = y1.squaredNorm() / r.emulation.y_m.squaredNorm();

  r.checks = r.carleman.checks;
  for (const BoundCheck& c : r.emulation.bound_checks) {
    BoundCheck cc = c;
    cc.name = "linear_" + c.name;
    r.checks.push_back(cc);
  }
  r.checks.push_back({"normalized_output", r.normalized_error, eps});
  // Not covered by a theorem, but the only informative comparison when d = 1.
  BoundCheck rel{"relative_output", r.relative_error, eps};
  rel.informational = true;
  r.checks.push_back(rel);
  const double n_d = static_cast<double>(r.N);
  r.checks.push_back({"level1_probability", 1.0 / (81.0 * n_d * r.g_u * r.g_u), r.level1_probability});
  r.checks.push_back({"g_vs_g_u", r.g, 3.0 * std::sqrt(n_d) * r.g_u});

  CostInputs ci;
  ci.s = MatrixHandle(sys.A).sparsity();
  ci.d = sys.delta;
  ci.k = r.params.k;
  ci.m = r.params.m;
  ci.eps = eps;
  ci.g = r.g;
  ci.T = od.T;
  ci.a_norm = op_norm(lp.A);
  ci.c_of_a = std::max(r.carleman.c_of_a, 1e-300);
  ci.b_norm = sys.b.norm();
  ci.xT_norm = r.emulation.x_T.norm();
  if (r.emulation.kappa_L) {
    ci.kappa_L = r.emulation.kappa_L->kappa;
  } else {
    const double base = static_cast<double>(r.params.m + r.params.p) * ci.c_of_a * (1.0 + r.params.delta);
    ci.kappa_L = base * std::exp(1.0) * (1.0 + std::exp(1.0)) * std::max(1.0, std::sqrt(static_cast<double>(r.params.k)));
  }
  r.cost = cost_model(ci);
  return r;
}

}  // namespace qode
