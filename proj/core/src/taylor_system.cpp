#include "qode/taylor_system.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qode/errors.hpp"

namespace qode {

using Triplet = Eigen::Triplet<Complex>;

namespace {

void check_order(int k) {
  if (k < 0) throw InputError("Taylor order must be >= 0");
}

void check_params(const SolverParams& p) {
  if (p.k < 1) throw InputError("SolverParams: k must be >= 1");
  if (p.m < 1 || p.p < 1) throw InputError("SolverParams: m and p must be >= 1");
  if (!(p.h > 0.0) || !std::isfinite(p.h)) throw InputError("SolverParams: h must be positive");
}

// Horner evaluation of sum_{j=0..k-l} l! M^j / (l+j)!.
CMatrix horner(int l, int k, const CMatrix& m) {
  const Index n = m.rows();
  CMatrix r = CMatrix::Identity(n, n);
  for (int q = k; q > l; --q) {
    CMatrix t = m * r;
    t /= static_cast<double>(q);
    t.diagonal().array() += 1.0;
    r = std::move(t);
  }
  return r;
}

}  // namespace

CMatrix taylor_T(int k, const CMatrix& m) {
  check_order(k);
  return horner(0, k, m);
}

CMatrix taylor_S(int k, const CMatrix& m) {
  if (k < 1) throw InputError("taylor_S: k must be >= 1");
  return horner(1, k, m);
}

CMatrix taylor_T_lk(int l, int k, const CMatrix& m) {
  check_order(k);
  if (l < 0 || l > k) throw InputError("taylor_T_lk: need 0 <= l <= k");
  return horner(l, k, m);
}

Complex taylor_T(int k, Complex z) {
  check_order(k);
  Complex r = 1.0;
  for (int q = k; q > 0; --q) r = 1.0 + z * r / static_cast<double>(q);
  return r;
}

Complex taylor_S(int k, Complex z) {
  if (k < 1) throw InputError("taylor_S: k must be >= 1");
  Complex r = 1.0;
  for (int q = k; q > 1; --q) r = 1.0 + z * r / static_cast<double>(q);
  return r;
}

double remainder_bound(int k) { return std::exp(1.0 - std::lgamma(k + 2.0)); }

RemainderCheck remainder_actual(const CMatrix& a, double h, int k) {
  RemainderCheck r;
  const CMatrix ah = a * Complex(h);
  r.bound = remainder_bound(k);
  r.actual = op_norm(mat_exp(ah) - taylor_T(k, ah));
  r.applicable = op_norm(ah) <= 1.0 + 1e-12;
  return r;
}

SparseCMatrix build_M1(const MatrixHandle& a, double h, int k) {
  if (k < 1) throw InputError("build_M1: k must be >= 1");
  const Index d = a.dim();
  const SparseCMatrix ah = a.sparse() * Complex(h);
  std::vector<Triplet> trip;
  for (int j = 0; j < k; ++j)
    for (Index r = 0; r < ah.outerSize(); ++r)
      for (SparseCMatrix::InnerIterator it(ah, r); it; ++it)
        trip.emplace_back((j + 1) * d + r, j * d + it.col(), it.value() / static_cast<double>(j + 1));
  SparseCMatrix m((k + 1) * d, (k + 1) * d);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseCMatrix build_M2(int k, Index d) {
  std::vector<Triplet> trip;
  for (int j = 0; j <= k; ++j)
    for (Index s = 0; s < d; ++s) trip.emplace_back(s, j * d + s, 1.0);
  SparseCMatrix m((k + 1) * d, (k + 1) * d);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseCMatrix step_operator(const MatrixHandle& a, double h, int k) {
  const SparseCMatrix m1 = build_M1(a, h, k);
  const Index n = m1.rows();
  SparseCMatrix id(n, n);
  id.setIdentity();
  SparseCMatrix acc = id;
  SparseCMatrix pw = id;
  for (int j = 1; j <= k; ++j) {
    pw = (pw * m1).pruned();
    acc += pw;
  }
  SparseCMatrix s = build_M2(k, a.dim()) * acc;
  s.makeCompressed();
  return s;
}

TaylorOperator::TaylorOperator(const MatrixHandle& a, const SolverParams& params)
    : a_(a), params_(params) {
  check_params(params);
  layout_.time_blocks = params.m + params.p;
  layout_.terms = params.k + 1;
  layout_.d = a.dim();
  const double size = static_cast<double>(layout_.time_blocks) * layout_.terms * layout_.d;
  if (size > static_cast<double>(kSystemCapacity))
    throw CapacityError("build_L: system dimension " + std::to_string(size) + " above capacity");
  ah_ = a.sparse() * Complex(params.h);
  ah_adj_ = ah_.adjoint();
}

CVector TaylorOperator::step(const Eigen::Ref<const CVector>& v) const {
  const Index d = layout_.d;
  CVector z = v.segment(0, d);
  CVector top = z;
  for (Index j = 0; j < params_.k; ++j) {
    CVector next = v.segment((j + 1) * d, d);
    next.noalias() += (ah_ * z) / static_cast<double>(j + 1);
    z = std::move(next);
    top += z;
  }
  return top;
}

CVector TaylorOperator::step_adjoint(const Eigen::Ref<const CVector>& w) const {
  const Index d = layout_.d;
  const Index kk = params_.k;
  CVector out((kk + 1) * d);
  CVector z = w;
  out.segment(kk * d, d) = z;
  for (Index j = kk - 1; j >= 0; --j) {
    CVector prev = w;
    prev.noalias() += (ah_adj_ * z) / static_cast<double>(j + 1);
    z = std::move(prev);
    out.segment(j * d, d) = z;
  }
  return out;
}

CVector TaylorOperator::apply_n(const CVector& x) const {
  const Index bs = layout_.terms * layout_.d;
  const Index d = layout_.d;
  CVector out = CVector::Zero(dim());
  for (Index i = 0; i + 1 < layout_.time_blocks; ++i) {
    if (i < params_.m)
      out.segment((i + 1) * bs, d) = step(x.segment(i * bs, bs));
    else
      out.segment((i + 1) * bs, bs) = x.segment(i * bs, bs);
  }
  return out;
}

CVector TaylorOperator::apply_n_adjoint(const CVector& x) const {
  const Index bs = layout_.terms * layout_.d;
  const Index d = layout_.d;
  CVector out = CVector::Zero(dim());
  for (Index i = 0; i + 1 < layout_.time_blocks; ++i) {
    if (i < params_.m)
      out.segment(i * bs, bs) = step_adjoint(x.segment((i + 1) * bs, d));
    else
      out.segment(i * bs, bs) = x.segment((i + 1) * bs, bs);
  }
  return out;
}

CVector TaylorOperator::apply(const CVector& x) const {
  if (x.size() != dim()) throw InputError("TaylorOperator::apply: size mismatch");
  return x - apply_n(x);
}

CVector TaylorOperator::apply_adjoint(const CVector& x) const {
  if (x.size() != dim()) throw InputError("TaylorOperator::apply_adjoint: size mismatch");
  return x - apply_n_adjoint(x);
}

CVector TaylorOperator::solve(const CVector& r) const {
  if (r.size() != dim()) throw InputError("TaylorOperator::solve: size mismatch");
  const Index bs = layout_.terms * layout_.d;
  const Index d = layout_.d;
  CVector y = r;
  for (Index i = 0; i + 1 < layout_.time_blocks; ++i) {
    if (i < params_.m)
      y.segment((i + 1) * bs, d) += step(y.segment(i * bs, bs));
    else
      y.segment((i + 1) * bs, bs) += y.segment(i * bs, bs);
  }
  return y;
}

CVector TaylorOperator::solve_adjoint(const CVector& r) const {
  if (r.size() != dim()) throw InputError("TaylorOperator::solve_adjoint: size mismatch");
  const Index bs = layout_.terms * layout_.d;
  const Index d = layout_.d;
  CVector x = r;
  for (Index i = layout_.time_blocks - 2; i >= 0; --i) {
    if (i < params_.m)
      x.segment(i * bs, bs) += step_adjoint(x.segment((i + 1) * bs, d));
    else
      x.segment(i * bs, bs) += x.segment((i + 1) * bs, bs);
  }
  return x;
}

SparseCMatrix TaylorOperator::assemble() const {
  const Index bs = layout_.terms * layout_.d;
  const SparseCMatrix s = step_operator(a_, params_.h, params_.k);
  std::vector<Triplet> trip;
  trip.reserve(dim() + params_.m * s.nonZeros());
  for (Index r = 0; r < dim(); ++r) trip.emplace_back(r, r, 1.0);
  for (Index i = 0; i + 1 < layout_.time_blocks; ++i) {
    if (i < params_.m) {
      for (Index r = 0; r < s.outerSize(); ++r)
        for (SparseCMatrix::InnerIterator it(s, r); it; ++it)
          trip.emplace_back((i + 1) * bs + r, i * bs + it.col(), -it.value());
    } else {
      for (Index r = 0; r < bs; ++r) trip.emplace_back((i + 1) * bs + r, i * bs + r, -1.0);
    }
  }
  SparseCMatrix l(dim(), dim());
  l.setFromTriplets(trip.begin(), trip.end());
  l.makeCompressed();
  return l;
}

TaylorOperator build_L(const MatrixHandle& a, const SolverParams& params) {
  return TaylorOperator(a, params);
}

InitialState build_psi_in(const CVector& x0, const CVector& b, const SolverParams& params) {
  if (x0.size() != b.size()) throw InputError("build_psi_in: x0 and b sizes differ");
  if (!x0.allFinite() || !b.allFinite()) throw InputError("build_psi_in: non-finite entry");
  check_params(params);
  const Index d = x0.size();
  BlockLayout lay{params.m + params.p, params.k + 1, d};
  InitialState out;
  out.psi = CVector::Zero(lay.size());
  out.psi.segment(lay.offset(0, 0), d) = x0;
  for (Index i = 0; i < params.m; ++i) out.psi.segment(lay.offset(i, 1), d) = params.h * b;
  out.norm = std::sqrt(x0.squaredNorm() + static_cast<double>(params.m) * params.h * params.h *
                                              b.squaredNorm());
  return out;
}

SparseCMatrix build_bcow_C(const MatrixHandle& a, double h, int k, Index m, Index p, bool raw) {
  if (k < 1 || m < 1 || p < 1) throw InputError("build_bcow_C: need k, m, p >= 1");
  const Index d = a.dim();
  const Index top = m * (k + 1) + p;  // last block index
  const double size = static_cast<double>(top + 1) * d;
  if (size > static_cast<double>(kSystemCapacity))
    throw CapacityError("build_bcow_C: dimension " + std::to_string(size) + " above capacity");
  const SparseCMatrix blk = raw ? a.sparse() : SparseCMatrix(a.sparse() * Complex(h));
  std::vector<Triplet> trip;
  auto put_identity = [&](Index r, Index c, double v) {
    for (Index s = 0; s < d; ++s) trip.emplace_back(r * d + s, c * d + s, v);
  };
  for (Index j = 0; j <= top; ++j) put_identity(j, j, 1.0);
  for (Index i = 0; i < m; ++i) {
    for (int j = 1; j <= k; ++j) {
      const Index r = i * (k + 1) + j;
      for (Index q = 0; q < blk.outerSize(); ++q)
        for (SparseCMatrix::InnerIterator it(blk, q); it; ++it)
          trip.emplace_back(r * d + q, (r - 1) * d + it.col(), -it.value() / static_cast<double>(j));
    }
    for (int j = 0; j <= k; ++j) put_identity((i + 1) * (k + 1), i * (k + 1) + j, -1.0);
  }
  for (Index j = top - p + 1; j <= top; ++j) put_identity(j, j - 1, -1.0);
  SparseCMatrix c(top * d + d, top * d + d);
  c.setFromTriplets(trip.begin(), trip.end());
  c.makeCompressed();
  return c;
}

TaylorSystem assemble_system(const MatrixHandle& a, const CVector& x0, const CVector& b,
                             const SolverParams& params, bool with_bcow) {
  if (x0.size() != a.dim()) throw InputError("assemble_system: x0 size does not match A");
  TaylorSystem sys{build_L(a, params), build_psi_in(x0, b, params), std::nullopt};
  if (with_bcow) sys.bcow_C = build_bcow_C(a, params.h, params.k, params.m, params.p);
  return sys;
}

ConditionEstimate kappa_of_system(const SparseCMatrix& s, const KappaOptions& opt) {
  if (s.rows() <= opt.dense_limit) return condition_number(CMatrix(s));
  const SparseOperator op(s);
  return condition_number(op, opt.lanczos);
}

ConditionEstimate kappa_of_system(const TaylorOperator& l, const KappaOptions& opt) {
  if (l.dim() <= opt.dense_limit) return condition_number(CMatrix(l.assemble()));
  return condition_number(static_cast<const LinearOperator&>(l), opt.lanczos);
}

}  // namespace qode
