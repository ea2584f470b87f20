#pragma once

// Dense Hermitian solves behind the kernel computations: symmetric diagonal
// equilibration + ridge-regularized Cholesky, point-evaluation kernel values,
// and equality-constrained norm minimization (null-space method with a KKT
// fallback).

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include "saitoh/geometry.hpp"

namespace saitoh {

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

inline constexpr double kRidgeEps = 1e-13;

/// Hermitian positive definite Gram wrapped with a symmetric diagonal
/// equilibration D^{-1/2} G D^{-1/2} and a small ridge shift before Cholesky.
class GramSolver {
 public:
  explicit GramSolver(const MatrixXcd& gram, double ridge_eps = kRidgeEps) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n) throw std::invalid_argument("gram matrix must be square");
    hermiticity_ = (gram - gram.adjoint()).cwiseAbs().maxCoeff();
    scale_ = VectorXd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = gram(i, i).real();
      if (!(d > 0.0) || !std::isfinite(d))
        throw std::domain_error("gram diagonal must be positive and finite");
      scale_(i) = std::sqrt(d);
    }
    ghat_ = gram;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) ghat_(i, j) /= scale_(i) * scale_(j);
    // enforce exact Hermitian symmetry before factoring
    ghat_ = 0.5 * (ghat_ + ghat_.adjoint()).eval();
    ridge_shift_ = ridge_eps;  // relative to the unit equilibrated diagonal
    ghat_.diagonal().array() += ridge_shift_;
    llt_.compute(ghat_);
    if (llt_.info() != Eigen::Success)
      throw std::domain_error("gram matrix is not positive definite (after ridge)");
    const VectorXd ldiag = llt_.matrixL().toDenseMatrix().diagonal().real();
    condition_ = std::pow(ldiag.maxCoeff() / ldiag.minCoeff(), 2.0);
  }

  Eigen::Index size() const { return ghat_.rows(); }
  double hermiticity_defect() const { return hermiticity_; }
  double ridge_shift() const { return ridge_shift_; }
  double condition_estimate() const { return condition_; }
  const VectorXd& scale() const { return scale_; }
  const MatrixXcd& equilibrated() const { return ghat_; }

  /// ||f||^2 for coefficient vector a (in the raw basis).
  double norm_squared(const VectorXcd& a) const {
    const VectorXcd ahat = a.array() * scale_.array().cast<complexd>();
    return (ahat.adjoint() * ghat_ * ahat).real()(0, 0);
  }

  /// Kernel point value sup |f(z0)|^2 / ||f||^2 = u^H G^{-1} u, u = conj(v),
  /// with v the basis evaluation vector at z0.
  double kernel_value(const VectorXcd& eval) const {
    const VectorXcd u = eval.conjugate().array() / scale_.array().cast<complexd>();
    const VectorXcd x = llt_.solve(u);
    return (u.adjoint() * x).real()(0, 0);
  }

  /// Coefficients (raw basis) of the reproducing-kernel section at z0.
  VectorXcd kernel_section(const VectorXcd& eval) const {
    const VectorXcd u = eval.conjugate().array() / scale_.array().cast<complexd>();
    const VectorXcd x = llt_.solve(u);
    return x.array() / scale_.array().cast<complexd>();
  }

  struct ConstrainedMin {
    double norm_squared = 0.0;
    VectorXcd minimizer;     // raw-basis coefficients
    double constraint_residual = 0.0;
    bool used_kkt_fallback = false;
  };

  /// min ||f||^2 subject to C a = d (rows = linear functionals on raw
  /// coefficients). Null-space method: QR of C^H, reduced Cholesky solve;
  /// falls back to a bordered KKT solve when the triangular factor is
  /// numerically rank deficient.
  ConstrainedMin constrained_min(const MatrixXcd& C, const VectorXcd& d) const {
    const Eigen::Index n = size();
    const Eigen::Index m = C.rows();
    if (C.cols() != n) throw std::invalid_argument("constraint matrix has wrong width");
    if (m == 0) throw std::invalid_argument("constrained_min needs at least one constraint");
    if (m > n) throw std::invalid_argument("more constraints than basis elements");

    // constraints in equilibrated coordinates: Chat ahat = d
    MatrixXcd chat = C;
    for (Eigen::Index j = 0; j < n; ++j) chat.col(j) /= scale_(j);

    ConstrainedMin out;
    Eigen::HouseholderQR<MatrixXcd> qr(chat.adjoint());
    const MatrixXcd q = qr.householderQ();
    const MatrixXcd rfull = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double rd = std::abs(rfull(i, i));
      rmin = std::min(rmin, rd);
      rmax = std::max(rmax, rd);
    }
    VectorXcd ahat;
    if (rmin > 1e-12 * rmax) {
      const MatrixXcd q1 = q.leftCols(m);
      const MatrixXcd z = q.rightCols(n - m);
      const VectorXcd apart =
          q1 * rfull.adjoint().triangularView<Eigen::Lower>().solve(d);
      ahat = apart;
      if (n > m) {
        const MatrixXcd gz = ghat_ * z;
        const MatrixXcd red = z.adjoint() * gz;
        const VectorXcd rhs = -(gz.adjoint() * apart);
        Eigen::LDLT<MatrixXcd> ldlt(0.5 * (red + red.adjoint()).eval());
        ahat += z * ldlt.solve(rhs);
      }
    } else {
      // KKT fallback: [G C^H; C 0] [a; mu] = [0; d]
      out.used_kkt_fallback = true;
      MatrixXcd kkt = MatrixXcd::Zero(n + m, n + m);
      kkt.topLeftCorner(n, n) = ghat_;
      kkt.topRightCorner(n, m) = chat.adjoint();
      kkt.bottomLeftCorner(m, n) = chat;
      VectorXcd rhs = VectorXcd::Zero(n + m);
      rhs.tail(m) = d;
      const VectorXcd sol = Eigen::FullPivLU<MatrixXcd>(kkt).solve(rhs);
      ahat = sol.head(n);
    }
    out.norm_squared = (ahat.adjoint() * ghat_ * ahat).real()(0, 0);
    out.constraint_residual = (chat * ahat - d).cwiseAbs().maxCoeff();
    out.minimizer = ahat.array() / scale_.array().cast<complexd>();
    return out;
  }

 private:
  MatrixXcd ghat_;
  VectorXd scale_;
  Eigen::LLT<MatrixXcd> llt_;
  double hermiticity_ = 0.0;
  double ridge_shift_ = 0.0;
  double condition_ = 1.0;
};

/// Kronecker product, flat index = i1 * cols2 + i2 (row-major multi-index).
inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline MatrixXcd kron_all(const std::vector<MatrixXcd>& mats) {
  if (mats.empty()) throw std::invalid_argument("kron_all: empty list");
  MatrixXcd acc = mats.front();
  for (std::size_t i = 1; i < mats.size(); ++i) acc = kron(acc, mats[i]);
  return acc;
}

}  // namespace saitoh
