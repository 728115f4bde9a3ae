#include <cmath>
#include <string>

#include "qode/errors.hpp"
#include "qode/linalg.hpp"

namespace qode {

namespace {

// Backward-error thresholds for the [m/m] Pade approximants.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr double kB3[] = {120., 60., 12., 1.};
constexpr double kB5[] = {30240., 15120., 3360., 420., 30., 1.};
constexpr double kB7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
constexpr double kB9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                          2162160.,     110880.,     3960.,       90.,        1.};
constexpr double kB13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                           1187353796428800.,  129060195264000.,   10559470521600.,
                           670442572800.,      33522128640.,       1323241920.,
                           40840800.,          960960.,            16380.,
                           182.,               1.};

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

void check_finite(const CMatrix& a) {
  if (!a.allFinite()) throw InputError("matrix has a non-finite entry");
}

template <int M>
CMatrix pade_low(const CMatrix& a, const double (&b)[M + 1]) {
  const Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix pw = id;
  CMatrix u = b[1] * id;
  CMatrix v = b[0] * id;
  for (int j = 2; j <= M; j += 2) {
    pw = pw * a2;
    u += b[j + 1] * pw;
    v += b[j] * pw;
  }
  u = a * u;
  return (v - u).partialPivLu().solve(v + u);
}

CMatrix pade13(const CMatrix& a) {
  const Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const auto& b = kB13;
  CMatrix u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u = a * u;
  CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMatrix mat_exp(const CMatrix& a, double t) {
  if (a.rows() != a.cols()) throw InputError("mat_exp: matrix must be square");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("mat_exp: t must be finite and >= 0");
  if (a.rows() > kDenseLimit)
    throw CapacityError("mat_exp: d=" + std::to_string(a.rows()) + " above dense limit");
  check_finite(a);
  const Index n = a.rows();
  if (n == 0) return CMatrix(0, 0);
  CMatrix at = a * Complex(t);
  const double nrm = one_norm(at);
  if (nrm <= kTheta3) return pade_low<3>(at, kB3);
  if (nrm <= kTheta5) return pade_low<5>(at, kB5);
  if (nrm <= kTheta7) return pade_low<7>(at, kB7);
  if (nrm <= kTheta9) return pade_low<9>(at, kB9);
  int s = 0;
  if (nrm > kTheta13) s = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  if (s > 0) at /= Complex(std::ldexp(1.0, s));
  CMatrix r = pade13(at);
  for (int i = 0; i < s; ++i) r = r * r;
  if (!r.allFinite()) throw NumericError("mat_exp: result overflowed");
  return r;
}

CMatrix mat_exp(const MatrixHandle& a, double t) { return mat_exp(a.dense(), t); }

CMatrix phi1(const CMatrix& a, double t) {
  const Index n = a.rows();
  if (a.rows() != a.cols()) throw InputError("phi1: matrix must be square");
  if (2 * n > kDenseLimit) throw CapacityError("phi1: augmented dimension above dense limit");
  CMatrix aug = CMatrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, n) = CMatrix::Identity(n, n);
  return mat_exp(aug, t).topRightCorner(n, n);
}

CMatrix phi1(const MatrixHandle& a, double t) { return phi1(a.dense(), t); }

}  // namespace qode
