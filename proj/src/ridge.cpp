#include "gridge/ridge.hpp"

#include <cmath>

namespace gridge {

RidgeSpec RidgeSpec::fixed(Vector k) {
  RidgeSpec spec{std::move(k), RidgePolicy::fixed};
  spec.validate();
  return spec;
}

RidgeSpec RidgeSpec::scalar(double k, Index p, RidgePolicy policy) {
  RidgeSpec spec{Vector::Constant(p, k), policy};
  spec.validate();
  return spec;
}

void RidgeSpec::validate() const {
  if (k.size() < 1) throw InputError("ridge spec: empty k");
  if ((k.array() <= 0.0).any()) throw InputError("ridge spec: all k_j must be > 0");
}

Restriction::Restriction(Matrix h) : H(std::move(h)) {
  if (H.rows() < 1 || H.rows() >= H.cols())
    throw InputError("restriction: need 1 <= q < p");
  Eigen::ColPivHouseholderQR<Matrix> qr(H);
  qr.setThreshold(1e-10 * H.norm());
  if (qr.rank() < H.rows()) throw InputError("restriction: H is not full row rank");
}

Restriction Restriction::coordinates(const std::vector<Index>& zero_coords, Index p) {
  if (zero_coords.empty()) throw InputError("restriction: empty coordinate set");
  Matrix H = Matrix::Zero(static_cast<Index>(zero_coords.size()), p);
  for (std::size_t i = 0; i < zero_coords.size(); ++i) {
    if (zero_coords[i] < 0 || zero_coords[i] >= p)
      throw InputError("restriction: coordinate out of range");
    H(static_cast<Index>(i), zero_coords[i]) = 1.0;
  }
  return Restriction(std::move(H));
}

RidgeSystem::RidgeSystem(const Matrix& X, const RidgeSpec& k) {
  k.validate();
  if (k.k.size() != X.cols()) throw InputError("ridge spec length does not match p");
  S_ = Matrix::Zero(X.cols(), X.cols());
  S_.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  S_ = S_.selfadjointView<Eigen::Lower>();
  Matrix SK = S_;
  SK.diagonal() += k.k;
  ldlt_.compute(SK);
  if (ldlt_.info() != Eigen::Success)
    throw NumericalBreakdown("ridge system factorization failed");
  const auto d = ldlt_.vectorD();
  const double dmin = d.minCoeff();
  const double dmax = d.maxCoeff();
  if (dmin < 1e-14 * std::max(1.0, dmax))
    throw NumericalBreakdown("ridge system pivot below tolerance");
  cond_ = dmax / dmin;
}

Vector RidgeSystem::solve(const Vector& rhs) const { return ldlt_.solve(rhs); }
Matrix RidgeSystem::solve(const Matrix& rhs) const { return ldlt_.solve(rhs); }

LinearSolveResult solve_ridge_system(const Matrix& X, const Vector& Y, const RidgeSpec& k) {
  RidgeSystem system(X, k);
  return {system.solve(X.transpose() * Y), system.condition_estimate()};
}

Matrix restriction_projector(const RidgeSystem& system, const Restriction& restriction) {
  const Matrix& H = restriction.H;
  if (H.cols() != system.p()) throw InputError("restriction width does not match p");
  const Matrix SKinvHt = system.solve(Matrix(H.transpose()));  // p x q
  const Matrix HSKinvHt = H * SKinvHt;                         // q x q
  Eigen::FullPivLU<Matrix> lu(HSKinvHt);
  if (!lu.isInvertible())
    throw SingularRestriction("H S_K^-1 H' is numerically singular");
  const Index p = system.p();
  return Matrix::Identity(p, p) - SKinvHt * lu.solve(H);
}

}  // namespace gridge
