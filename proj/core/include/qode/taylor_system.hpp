#pragma once

#include <optional>

#include "qode/linalg.hpp"

namespace qode {

// T_k(M) = sum_{j<=k} M^j / j!
CMatrix taylor_T(int k, const CMatrix& m);
// S_k(M) = sum_{j=1..k} M^{j-1} / j!
CMatrix taylor_S(int k, const CMatrix& m);
// T_{l,k}(M) = sum_{j=0..k-l} l! M^j / (l+j)!
CMatrix taylor_T_lk(int l, int k, const CMatrix& m);

Complex taylor_T(int k, Complex z);
Complex taylor_S(int k, Complex z);

struct RemainderCheck {
  double bound = 0.0;   // e / (k+1)!
  double actual = 0.0;  // ||e^{Ah} - T_k(Ah)||
  bool applicable = false;  // ||Ah|| <= 1
  bool holds() const { return !applicable || actual <= bound; }
};

double remainder_bound(int k);
RemainderCheck remainder_actual(const CMatrix& a, double h, int k);

struct SolverParams {
  double h = 0.0;
  Index m = 1;  // stepping blocks
  Index p = 1;  // copies of the final state
  int k = 1;    // Taylor order
  double delta = 0.0;
  double omega = 0.0;
  bool m_clamped = false;
  bool k_floor_applied = false;
};

// Index (i, j, s) -> (i (k+1) + j) d + s.
struct BlockLayout {
  Index time_blocks = 0;  // m + p
  Index terms = 0;        // k + 1
  Index d = 0;
  Index offset(Index i, Index j) const { return (i * terms + j) * d; }
  Index size() const { return time_blocks * terms * d; }
};

// Blocks |j+1><j| (x) A h / (j+1) for j < k, size (k+1) d.
SparseCMatrix build_M1(const MatrixHandle& a, double h, int k);
// Blocks |0><j| (x) I for j <= k.
SparseCMatrix build_M2(int k, Index d);

// Explicit M2 (I - M1)^{-1} with the inverse expanded as sum_{j<=k} M1^j.
SparseCMatrix step_operator(const MatrixHandle& a, double h, int k);

// L = I - N on the (m+p)(k+1)d space. Stepping blocks apply the step
// operator for i < m; blocks m..m+p-2 copy the whole (k+1)d block forward.
// The step operator is applied matrix-free by forward substitution with
// I - M1; assemble() gives the explicit CSR matrix.
class TaylorOperator final : public LinearOperator {
 public:
  TaylorOperator(const MatrixHandle& a, const SolverParams& params);

  Index dim() const override { return layout_.size(); }
  CVector apply(const CVector& x) const override;
  CVector apply_adjoint(const CVector& x) const override;
  CVector solve(const CVector& r) const override;
  CVector solve_adjoint(const CVector& r) const override;

  SparseCMatrix assemble() const;

  const SolverParams& params() const { return params_; }
  const BlockLayout& layout() const { return layout_; }

  // First d entries of S v for a (k+1)d block v.
  CVector step(const Eigen::Ref<const CVector>& v) const;
  // S^dagger applied to a top block w of size d, result size (k+1)d.
  CVector step_adjoint(const Eigen::Ref<const CVector>& w) const;

 private:
  CVector apply_n(const CVector& x) const;
  CVector apply_n_adjoint(const CVector& x) const;

  SparseCMatrix ah_;
  SparseCMatrix ah_adj_;
  MatrixHandle a_;
  SolverParams params_;
  BlockLayout layout_;
};

// Upper bound on the size of L and C accepted by the builders.
inline constexpr Index kSystemCapacity = Index(1) << 26;

TaylorOperator build_L(const MatrixHandle& a, const SolverParams& params);

struct InitialState {
  CVector psi;
  double norm = 0.0;  // sqrt(||x0||^2 + m h^2 ||b||^2)
};

// |0,0,x0> + h sum_{i<m} |i,1,b>, unnormalized.
InitialState build_psi_in(const CVector& x0, const CVector& b, const SolverParams& params);

// Comparison system of the earlier Taylor-series construction, dimension
// (m(k+1)+p+1) d. raw = true uses A instead of A h in the Taylor blocks.
SparseCMatrix build_bcow_C(const MatrixHandle& a, double h, int k, Index m, Index p,
                           bool raw = false);

struct TaylorSystem {
  TaylorOperator L;
  InitialState psi;
  std::optional<SparseCMatrix> bcow_C;
};

TaylorSystem assemble_system(const MatrixHandle& a, const CVector& x0, const CVector& b,
                             const SolverParams& params, bool with_bcow = false);

struct KappaOptions {
  Index dense_limit = 256;
  LanczosOptions lanczos;
};

ConditionEstimate kappa_of_system(const SparseCMatrix& s, const KappaOptions& opt = {});
ConditionEstimate kappa_of_system(const TaylorOperator& l, const KappaOptions& opt = {});

}  // namespace qode
