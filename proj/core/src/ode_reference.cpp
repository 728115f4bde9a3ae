#include "qode/ode_reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qode/errors.hpp"

namespace qode {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

void validate(const LinearProblem& prob) {
  const Index d = prob.A.dim();
  if (d == 0) throw InputError("LinearProblem: empty A");
  if (prob.b.size() != d || prob.x0.size() != d)
    throw InputError("LinearProblem: b and x0 must have dimension " + std::to_string(d));
  if (!prob.b.allFinite() || !prob.x0.allFinite()) throw InputError("LinearProblem: non-finite b or x0");
  if (!(prob.T > 0.0) || !std::isfinite(prob.T)) throw InputError("LinearProblem: T must be positive");
  if (!(prob.eps > 0.0 && prob.eps < 1.0)) throw InputError("LinearProblem: eps must lie in (0, 1)");
}

namespace {

// e^{At} and int_0^t e^{As} ds b, read off one exponential of
// [[A, b], [0, 0]] t.
std::pair<CMatrix, CVector> affine_flow(const CMatrix& a, const CVector& b, double t) {
  const Index d = a.rows();
  if (b.norm() == 0.0) return {mat_exp(a, t), CVector::Zero(d)};
  CMatrix aug = CMatrix::Zero(d + 1, d + 1);
  aug.topLeftCorner(d, d) = a;
  aug.topRightCorner(d, 1) = b;
  const CMatrix e = mat_exp(aug, t);
  return {e.topLeftCorner(d, d), e.topRightCorner(d, 1)};
}

}  // namespace

CVector exact_linear_solution(const LinearProblem& prob, double t) {
  const auto [e, w] = affine_flow(prob.A.dense(), prob.b, t);
  return e * prob.x0 + w;
}

Trajectory linear_trajectory(const LinearProblem& prob, int samples) {
  validate(prob);
  const int n = std::max(samples, 2048);
  const CMatrix a = prob.A.dense();
  const double dt = prob.T / (n - 1);
  const auto [e, w] = affine_flow(a, prob.b, dt);
  Trajectory tr;
  tr.t.reserve(n);
  tr.x.reserve(n);
  CVector x = prob.x0;
  int arg = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0) x = e * x + w;
    tr.t.push_back(i * dt);
    tr.x.push_back(x);
    if (x.norm() > tr.x[arg].norm()) arg = i;
  }
  // The end point is recomputed directly to avoid accumulated drift.
  tr.x.back() = exact_linear_solution(prob, prob.T);
  tr.t.back() = prob.T;
  tr.final_norm = tr.x.back().norm();
  if (tr.final_norm > tr.x[arg].norm()) arg = n - 1;
  tr.max_norm = tr.x[arg].norm();
  tr.t_max = tr.t[arg];
  if (arg > 0 && arg < n - 1) {
    auto f = [&](double t) { return exact_linear_solution(prob, t).norm(); };
    const auto [tm, fm] = golden_max(f, tr.t[arg - 1], tr.t[arg + 1], 1e-9 * prob.T);
    if (fm > tr.max_norm) {
      tr.max_norm = fm;
      tr.t_max = tm;
    }
  }
  return tr;
}

std::vector<CVector> taylor_recursion(const LinearProblem& prob, const SolverParams& params) {
  validate(prob);
  const CMatrix ah = prob.A.dense() * Complex(params.h);
  const CMatrix tk = taylor_T(params.k, ah);
  const CVector sb = taylor_S(params.k, ah) * (params.h * prob.b);
  std::vector<CVector> y;
  y.reserve(params.m + 1);
  y.push_back(prob.x0);
  for (Index i = 0; i < params.m; ++i) y.push_back(tk * y.back() + sb);
  return y;
}

void validate(const QuadraticODE& ode) {
  const Index d = ode.u_in.size();
  if (d == 0) throw InputError("QuadraticODE: empty u_in");
  if (ode.F0.size() != d) throw InputError("QuadraticODE: F0 must have length d");
  if (ode.F1.rows() != d || ode.F1.cols() != d) throw InputError("QuadraticODE: F1 must be d x d");
  if (ode.F2.rows() != d || ode.F2.cols() != d * d) throw InputError("QuadraticODE: F2 must be d x d^2");
  if (!ode.F0.allFinite() || !ode.F1.allFinite() || !ode.F2.allFinite() || !ode.u_in.allFinite())
    throw InputError("QuadraticODE: non-finite entry");
  if (!(ode.T > 0.0) || !std::isfinite(ode.T)) throw InputError("QuadraticODE: T must be positive");
}

RVector quadratic_rhs(const QuadraticODE& ode, const RVector& u) {
  const Index d = u.size();
  RVector uu(d * d);
  for (Index i = 0; i < d; ++i) uu.segment(i * d, d) = u(i) * u;
  return ode.F2 * uu + ode.F1 * u + ode.F0;
}

namespace {

struct Step {
  double t0, h;
  RVector y0, y1, f0, f1;
};

RVector hermite(const Step& s, double t) {
  const double th = (t - s.t0) / s.h;
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
  const double h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th);
  const double h11 = th * th * (th - 1);
  return h00 * s.y0 + h10 * s.h * s.f0 + h01 * s.y1 + h11 * s.h * s.f1;
}

constexpr double kLocalTolScale = 0.05;

}  // namespace

Trajectory solve_quadratic_rk(const QuadraticODE& ode, const RKOptions& opt) {
  validate(ode);
  constexpr double a21 = 0.2, a31 = 3.0 / 40.0, a32 = 9.0 / 40.0, a41 = 44.0 / 45.0,
                   a42 = -56.0 / 15.0, a43 = 32.0 / 9.0, a51 = 19372.0 / 6561.0,
                   a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0,
                   a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0, a71 = 35.0 / 384.0,
                   a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                   a76 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  auto f = [&](const RVector& u) { return quadratic_rhs(ode, u); };
  const double T = ode.T;
  std::vector<Step> steps;
  double t = 0.0;
  RVector y = ode.u_in;
  RVector k1 = f(y);
  double h = std::min(T, 1e-3 * T + 1e-6);
  {
    const double fn = k1.norm();
    if (fn > 0.0) h = std::min(T, 0.01 * std::max(y.norm(), 1e-3) / fn);
  }
  long n = 0;
  while (t < T) {
    if (++n > opt.max_steps) throw IntegrationFailure("solve_quadratic_rk: step budget exhausted", t);
    if (t + h > T) h = T - t;
    const RVector k2 = f(y + h * (a21 * k1));
    const RVector k3 = f(y + h * (a31 * k1 + a32 * k2));
    const RVector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const RVector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const RVector k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const RVector y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const RVector k7 = f(y1);
    if (!y1.allFinite()) throw IntegrationFailure("solve_quadratic_rk: solution blew up", t);
    const RVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      // Local target well below the requested tolerance so the accumulated
      // error over [0, T] stays within a few tol.
      const double sc = kLocalTolScale * (opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(y1(i))));
      en += (err(i) / sc) * (err(i) / sc);
    }
    en = std::sqrt(en / y.size());
    if (en <= 1.0) {
      steps.push_back({t, h, y, y1, k1, k7});
      t = (t + h >= T) ? T : t + h;
      y = y1;
      k1 = k7;
    }
    const double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-14 * std::max(1.0, t) && t < T)
      throw IntegrationFailure("solve_quadratic_rk: step size underflow at t=" + std::to_string(t), t);
  }

  Trajectory tr;
  const int ns = std::max(opt.samples, 2048);
  tr.t.reserve(ns);
  tr.x.reserve(ns);
  std::size_t si = 0;
  int best = 0;
  for (int i = 0; i < ns; ++i) {
    const double ti = (i == ns - 1) ? T : T * i / (ns - 1);
    while (si + 1 < steps.size() && steps[si].t0 + steps[si].h < ti) ++si;
    RVector u = (i == 0) ? ode.u_in : (i == ns - 1 ? y : hermite(steps[si], ti));
    tr.t.push_back(ti);
    tr.x.push_back(u.cast<Complex>());
    if (u.norm() > tr.x[best].norm()) best = i;
  }
  tr.final_norm = y.norm();
  tr.max_norm = tr.x[best].norm();
  tr.t_max = tr.t[best];
  // Step end points are exact integrator states; include them in the max.
  for (const Step& s : steps) {
    if (s.y1.norm() > tr.max_norm) {
      tr.max_norm = s.y1.norm();
      tr.t_max = s.t0 + s.h;
    }
  }
  if (tr.t_max > 0.0 && tr.t_max < T) {
    std::size_t j = 0;
    while (j + 1 < steps.size() && steps[j].t0 + steps[j].h < tr.t_max) ++j;
    const std::size_t lo = j > 0 ? j - 1 : 0;
    const std::size_t hi = std::min(j + 1, steps.size() - 1);
    auto fn = [&](double tt) {
      std::size_t q = lo;
      while (q < hi && steps[q].t0 + steps[q].h < tt) ++q;
      return hermite(steps[q], tt).norm();
    };
    const auto [tm, fm] = golden_max(fn, steps[lo].t0, steps[hi].t0 + steps[hi].h, 1e-12 * T);
    if (fm > tr.max_norm) {
      tr.max_norm = fm;
      tr.t_max = tm;
    }
  }
  return tr;
}

double scalar_riccati_closed_form(double a, double b, double c, double x0, double t) {
  const double disc = b * b - 4.0 * a * c;
  if (!(a > 0.0)) throw PreconditionError("scalar_riccati_closed_form: a must be positive");
  if (!(disc > 0.0)) throw PreconditionError("scalar_riccati_closed_form: R >= 1 regime (b^2 <= 4ac)");
  const double sq = std::sqrt(disc);
  const double rp = (-b + sq) / (2.0 * a);
  const double rm = (-b - sq) / (2.0 * a);
  const double lo = rm, hi = rp;
  if (x0 == lo) return lo;
  const double w = hi - lo;
  return w / (1.0 - std::exp(a * w * t) * (1.0 - w / (x0 - lo))) + lo;
}

}  // namespace qode
