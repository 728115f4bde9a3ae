#include "qode/spectral_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qode/errors.hpp"

namespace qode {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double norm_exp(const CMatrix& a, double t) { return op_norm(mat_exp(a, t)); }

double sigma_min_shifted(const CMatrix& a, Complex z) {
  CMatrix m = -a;
  m.diagonal().array() += z;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(m.rows() - 1);
}

// Cheaper, squared-accuracy variant used only to pick the start point.
double sigma_min_shifted_rough(const CMatrix& a, Complex z) {
  CMatrix m = -a;
  m.diagonal().array() += z;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues()(0), 0.0));
}

}  // namespace

CofA c_of_a(const CMatrix& a, double T, const CofAOptions& opt) {
  if (a.rows() != a.cols()) throw InputError("c_of_a: matrix must be square");
  if (!(T >= 0.0) || !std::isfinite(T)) throw InputError("c_of_a: T must be finite and >= 0");
  CofA best;
  if (T == 0.0 || a.rows() == 0) return best;
  // ||e^{At}|| <= e^{mu t} <= 1, so the supremum is the value at t = 0.
  if (log_norm(a) <= 0.0) return best;
  const int n = std::max(opt.n_grid, 3);
  const double dt = T / (n - 1);
  const CMatrix step = mat_exp(a, dt);
  CMatrix e = CMatrix::Identity(a.rows(), a.cols());
  int arg = 0;
  best.value = 1.0;
  for (int i = 1; i < n; ++i) {
    e = e * step;
    const double v = op_norm(e);
    if (v > best.value) {
      best.value = v;
      arg = i;
    }
  }
  if (arg == 0) return best;
  // Resample the winner directly so propagation error does not leak into the result.
  best.t_max = arg * dt;
  best.value = norm_exp(a, best.t_max);
  double lo = (arg - 1) * dt;
  double hi = std::min(T, (arg + 1) * dt);
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = norm_exp(a, x1);
  double f2 = norm_exp(a, x2);
  while (hi - lo > opt.rel_tol * T) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = norm_exp(a, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = norm_exp(a, x2);
    }
  }
  if (f1 > best.value) best = {f1, x1};
  if (f2 > best.value) best = {f2, x2};
  return best;
}

CofA c_of_a(const MatrixHandle& a, double T, const CofAOptions& opt) {
  return c_of_a(a.dense(), T, opt);
}

KreissEstimate kreiss_constant(const CMatrix& a, const KreissOptions& opt) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InputError("kreiss_constant: need a square non-empty matrix");
  if (!a.allFinite()) throw InputError("kreiss_constant: matrix has a non-finite entry");
  KreissEstimate out;
  const SpectralScalars sc = spectral_scalars(a);
  const double scale = sc.op_norm > 0.0 ? sc.op_norm : 1.0;
  const double d = static_cast<double>(a.rows());

  auto f = [&](double u, double y) {
    const double x = std::exp(u);
    const double s = sigma_min_shifted(a, Complex(x, y));
    return s > 0.0 ? x / s : std::numeric_limits<double>::infinity();
  };
  auto f_rough = [&](double u, double y) {
    const double x = std::exp(u);
    const double s = sigma_min_shifted_rough(a, Complex(x, y));
    return s > 0.0 ? x / s : std::numeric_limits<double>::infinity();
  };

  const double u_lo = std::log(1e-4 * scale);
  const double u_hi = std::log(10.0 * scale);
  const double u_cap = std::log(opt.blowup * scale);
  const double y_lo = -2.0 * scale, y_hi = 2.0 * scale;
  const double du0 = (u_hi - u_lo) / (opt.n_re - 1);
  const double dy0 = (y_hi - y_lo) / (opt.n_im - 1);

  double best = -1.0, bu = u_lo, by = 0.0;
  for (int i = 0; i < opt.n_re; ++i)
    for (int j = 0; j < opt.n_im; ++j) {
      const double u = u_lo + i * du0, y = y_lo + j * dy0;
      const double v = f_rough(u, y);
      if (v > best) {
        best = v;
        bu = u;
        by = y;
      }
    }
  // Also probe the imaginary parts of the eigenvalues, where peaks sit.
  const CVector ev = eigenvalues(a);
  for (Index k = 0; k < ev.size(); ++k)
    for (int i = 0; i < opt.n_re; ++i) {
      const double u = u_lo + i * du0;
      const double v = f_rough(u, ev(k).imag());
      if (v > best) {
        best = v;
        bu = u;
        by = ev(k).imag();
      }
    }

  best = f(bu, by);

  // Compass search in (log Re z, Im z); free to leave the grid upward in Re z.
  // Steps grow after a success so a ridge climbing toward large Re z is
  // followed quickly; gains below 1e-10 relative do not count.
  double su = du0, sy = dy0;
  for (int it = 0; it < 2000 && best <= opt.blowup; ++it) {
    bool moved = false;
    const double cand[4][2] = {{bu + su, by}, {bu - su, by}, {bu, by + sy}, {bu, by - sy}};
    for (const auto& c : cand) {
      if (c[0] > u_cap) continue;
      const double v = f(c[0], c[1]);
      if (v > best * (1.0 + 1e-10)) {
        best = v;
        bu = c[0];
        by = c[1];
        moved = true;
        su = std::min(2.0 * su, 4.0 * du0);
        sy = std::min(2.0 * sy, 4.0 * dy0);
        break;
      }
    }
    if (!moved) {
      su *= 0.5;
      sy *= 0.5;
      if (su < 1e-12 && sy < 1e-12 * scale) break;
    }
  }

  out.argmax = Complex(std::exp(bu), by);
  out.unbounded = sc.alpha > 0.0 || !(best <= opt.blowup);
  if (out.unbounded) {
    out.low = std::numeric_limits<double>::infinity();
    out.high = std::numeric_limits<double>::infinity();
  } else {
    out.low = best;
    out.high = std::exp(1.0) * d * best;
  }
  return out;
}

double exp_bound_jordan(double t, double alpha, double kappa_v, int beta) {
  if (beta < 1) throw InputError("exp_bound_jordan: beta must be >= 1");
  double term = 1.0, mx = 1.0;
  for (int r = 1; r < beta; ++r) {
    term *= t / r;
    mx = std::max(mx, term);
  }
  return kappa_v * std::exp(alpha * t) * beta * mx;
}

double exp_bound_schur(double t, double alpha, double departure, Index d) {
  const double x = departure * t;
  double term = 1.0, sum = 1.0;
  for (Index j = 1; j < d; ++j) {
    term *= x / static_cast<double>(j);
    sum += term;
  }
  return sum * std::exp(alpha * t);
}

BoundCurve bound_report(const CMatrix& a, double T, const BoundReportOptions& opt) {
  if (opt.samples < 2) throw InputError("bound_report: need at least 2 samples");
  BoundCurve c;
  const SpectralScalars sc = spectral_scalars(a);
  const double mu = log_norm(a);
  const double nu = schur_departure(a);
  std::optional<double> kv = opt.kappa_v_hint;
  int beta = opt.beta_hint.value_or(1);
  if (!kv) {
    const EigvecCondition ec = eigvec_condition(a);
    if (ec.diagonalizable) kv = ec.kappa;
  }
  if (kv) c.jordan_bound.emplace();
  for (int i = 0; i < opt.samples; ++i) {
    const double t = T * i / (opt.samples - 1);
    c.t.push_back(t);
    c.actual.push_back(norm_exp(a, t));
    c.mu_bound.push_back(std::exp(mu * t));
    c.schur_bound.push_back(exp_bound_schur(t, sc.alpha, nu, a.rows()));
    if (kv) c.jordan_bound->push_back(exp_bound_jordan(t, sc.alpha, *kv, beta));
  }
  const KreissEstimate k = kreiss_constant(a);
  c.kreiss_low = k.low;
  c.kreiss_high = k.high;
  c.kreiss_unbounded = k.unbounded;
  return c;
}

SpectralProfile spectral_profile(const CMatrix& a, double T) {
  SpectralProfile p;
  const SpectralScalars sc = spectral_scalars(a);
  p.alpha = sc.alpha;
  p.rho = sc.rho;
  p.op_norm = sc.op_norm;
  p.mu = log_norm(a);
  const EigvecCondition ec = eigvec_condition(a);
  p.kappa_v = ec.kappa;
  p.diagonalizable = ec.diagonalizable;
  p.schur_departure = schur_departure(a);
  const KreissEstimate k = kreiss_constant(a);
  p.kreiss_low = k.low;
  p.kreiss_high = k.high;
  p.kreiss_unbounded = k.unbounded;
  const CofA c = c_of_a(a, T);
  p.c_of_a = c.value;
  p.c_of_a_t = c.t_max;
  p.T = T;
  return p;
}

}  // namespace qode
