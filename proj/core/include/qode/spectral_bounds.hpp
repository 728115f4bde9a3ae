#pragma once

#include <optional>
#include <vector>

#include "qode/linalg.hpp"

namespace qode {

struct CofA {
  double value = 1.0;  // sup_{[0,T]} ||e^{At}||
  double t_max = 0.0;  // where it is attained
};

struct CofAOptions {
  int n_grid = 512;
  double rel_tol = 1e-6;
};

// Grid scan followed by golden-section refinement around the best sample.
CofA c_of_a(const CMatrix& a, double T, const CofAOptions& opt = {});
CofA c_of_a(const MatrixHandle& a, double T, const CofAOptions& opt = {});

struct KreissEstimate {
  double low = 0.0;   // sup over the searched region of Re(z) ||(zI - A)^{-1}||
  double high = 0.0;  // e d low
  bool unbounded = false;
  Complex argmax{0.0, 0.0};
};

struct KreissOptions {
  int n_re = 64;
  int n_im = 64;
  double blowup = 1e12;
};

KreissEstimate kreiss_constant(const CMatrix& a, const KreissOptions& opt = {});

// kappa_V e^{alpha t} beta max_{r<beta} t^r / r!
double exp_bound_jordan(double t, double alpha, double kappa_v, int beta);

// p_{d-1}(||N|| t) e^{alpha t}, p_{d-1}(x) = sum_{j<d} x^j / j!
double exp_bound_schur(double t, double alpha, double departure, Index d);

struct BoundCurve {
  std::vector<double> t;
  std::vector<double> actual;
  std::vector<double> mu_bound;
  std::vector<double> schur_bound;
  std::optional<std::vector<double>> jordan_bound;
  double kreiss_low = 0.0;
  double kreiss_high = 0.0;
  bool kreiss_unbounded = false;
};

struct BoundReportOptions {
  int samples = 200;
  // Largest Jordan block size; enables the Jordan curve.
  std::optional<int> beta_hint;
  // Condition number of the Jordan basis. Defaults to kappa_V of the
  // eigenvector matrix when A is diagonalizable.
  std::optional<double> kappa_v_hint;
};

BoundCurve bound_report(const CMatrix& a, double T, const BoundReportOptions& opt = {});

struct SpectralProfile {
  double alpha = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double op_norm = 0.0;
  double kappa_v = 0.0;
  bool diagonalizable = true;
  double schur_departure = 0.0;
  double kreiss_low = 0.0;
  double kreiss_high = 0.0;
  bool kreiss_unbounded = false;
  double c_of_a = 1.0;
  double c_of_a_t = 0.0;
  double T = 0.0;
};

SpectralProfile spectral_profile(const CMatrix& a, double T);

}  // namespace qode
