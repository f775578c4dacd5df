#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "meanscope/errors.hpp"

namespace meanscope {

using Index = Eigen::Index;
using cplx = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

template <typename Scalar>
using RealVector = Eigen::Matrix<RealOf<Scalar>, Eigen::Dynamic, 1>;

/// Relative tolerance for accepting a caller-supplied matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-13;
/// Largest condition number accepted by PositiveDefinite.
inline constexpr double kMaxCondition = 1e12;

/// n×n self-adjoint matrix. Construction from an arbitrary expression checks
/// |m(i,j) - conj(m(j,i))| <= 1e-13 * max|m| and then stores the exact
/// Hermitian part, so diagonals are real and the adjoint is bit-identical.
template <typename Scalar_>
class Hermitian {
 public:
  using Scalar = Scalar_;
  using RealScalar = RealOf<Scalar>;
  using MatrixType = DenseMatrix<Scalar>;

  template <typename Derived>
  explicit Hermitian(const Eigen::MatrixBase<Derived>& m) : m_(m) {
    validate();
    symmetrize();
  }

  /// Wraps a matrix known to be Hermitian up to rounding (products computed
  /// internally); skips the tolerance check but still symmetrizes.
  template <typename Derived>
  static Hermitian symmetrized(const Eigen::MatrixBase<Derived>& m) {
    Hermitian h;
    h.m_ = m;
    if (h.m_.rows() != h.m_.cols() || h.m_.rows() < 1)
      throw DimensionError("Hermitian: matrix must be square with n >= 1");
    h.symmetrize();
    return h;
  }

  static Hermitian identity(Index n) {
    return symmetrized(MatrixType::Identity(n, n));
  }

  Index size() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

  RealScalar trace() const { return Eigen::numext::real(m_.trace()); }
  RealScalar frobenius_norm() const { return m_.norm(); }

  Hermitian& operator+=(const Hermitian& other) {
    check_same_size(other, "operator+=");
    m_ += other.m_;
    return *this;
  }
  Hermitian& operator-=(const Hermitian& other) {
    check_same_size(other, "operator-=");
    m_ -= other.m_;
    return *this;
  }
  Hermitian& operator*=(RealScalar c) {
    m_ *= c;
    return *this;
  }

  friend Hermitian operator+(Hermitian a, const Hermitian& b) { return a += b; }
  friend Hermitian operator-(Hermitian a, const Hermitian& b) { return a -= b; }
  friend Hermitian operator*(RealScalar c, Hermitian a) { return a *= c; }
  friend Hermitian operator*(Hermitian a, RealScalar c) { return a *= c; }

 private:
  Hermitian() = default;

  void validate() const {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw DimensionError("Hermitian: matrix must be square with n >= 1");
    if (!m_.allFinite()) throw DomainError("Hermitian: non-finite entry");
    const RealScalar bound = kHermitianTolerance * m_.cwiseAbs().maxCoeff();
    for (Index j = 0; j < m_.cols(); ++j)
      for (Index i = 0; i <= j; ++i) {
        const RealScalar gap = std::abs(m_(i, j) - Eigen::numext::conj(m_(j, i)));
        if (gap > bound) {
          std::ostringstream os;
          os << "Hermitian: entry (" << i << "," << j << ") differs from the "
             << "conjugate of its mirror by " << gap;
          throw DomainError(os.str(), gap);
        }
      }
  }

  void symmetrize() {
    // (m + m*)/2 computed entrywise so that m(j,i) == conj(m(i,j)) exactly.
    for (Index j = 0; j < m_.cols(); ++j) {
      m_(j, j) = Scalar(Eigen::numext::real(m_(j, j)));
      for (Index i = 0; i < j; ++i) {
        const Scalar v = (m_(i, j) + Eigen::numext::conj(m_(j, i))) / RealScalar(2);
        m_(i, j) = v;
        m_(j, i) = Eigen::numext::conj(v);
      }
    }
  }

  void check_same_size(const Hermitian& other, const char* op) const {
    if (other.size() != size())
      throw DimensionError(std::string("Hermitian::") + op + ": dimension mismatch");
  }

  MatrixType m_;
};

using HermitianMatrix = Hermitian<cplx>;

/// Eigenvalues (ascending) and the unitary whose columns are the matching
/// eigenvectors: A = U diag(eigenvalues) U*.
template <typename Scalar>
struct SpectralDecomposition {
  RealVector<Scalar> eigenvalues;
  DenseMatrix<Scalar> unitary;

  DenseMatrix<Scalar> reconstruct() const {
    return unitary * eigenvalues.template cast<Scalar>().asDiagonal() * unitary.adjoint();
  }
};

struct JacobiOptions {
  int max_sweeps = 64;
  /// Converged when the off-diagonal Frobenius norm is at most this times ||A||_F.
  double tolerance = 1e-14;
};

namespace detail {

template <typename Scalar>
RealOf<Scalar> off_diagonal_norm(const DenseMatrix<Scalar>& m) {
  RealOf<Scalar> sum = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j) sum += Eigen::numext::abs2(m(i, j));
  return std::sqrt(sum);
}

/// Sorts eigenpairs ascending in place.
template <typename Scalar>
void sort_ascending(RealVector<Scalar>& values, DenseMatrix<Scalar>& vectors) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });
  RealVector<Scalar> sorted_values(n);
  DenseMatrix<Scalar> sorted_vectors(vectors.rows(), n);
  for (Index k = 0; k < n; ++k) {
    sorted_values(k) = values(order[static_cast<std::size_t>(k)]);
    sorted_vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver with complex (or real) plane rotations.
/// Deterministic: the sweep order is fixed row-by-row over the upper triangle.
template <typename Scalar>
SpectralDecomposition<Scalar> eig_hermitian(const Hermitian<Scalar>& a,
                                            const JacobiOptions& options = {}) {
  using Real = RealOf<Scalar>;
  const Index n = a.size();
  DenseMatrix<Scalar> m = a.matrix();
  DenseMatrix<Scalar> v = DenseMatrix<Scalar>::Identity(n, n);
  const Real norm = m.norm();
  const Real target = Real(options.tolerance) * norm;

  Real off = detail::off_diagonal_norm(m);
  int sweep = 0;
  while (off > target) {
    if (sweep == options.max_sweeps) {
      std::ostringstream os;
      os << "eig_hermitian: no convergence after " << sweep
         << " sweeps, off-diagonal residual " << off << " (target " << target << ")";
      throw ConvergenceError(os.str(), off, sweep);
    }
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (m(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        if (!rot.makeJacobi(m, p, q)) continue;
        m.applyOnTheLeft(p, q, rot.adjoint());
        m.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        m(p, q) = Scalar(0);
        m(q, p) = Scalar(0);
        m(p, p) = Scalar(Eigen::numext::real(m(p, p)));
        m(q, q) = Scalar(Eigen::numext::real(m(q, q)));
      }
    }
    ++sweep;
    off = detail::off_diagonal_norm(m);
  }

  SpectralDecomposition<Scalar> out;
  out.eigenvalues = m.diagonal().real();
  out.unitary = std::move(v);
  detail::sort_ascending<Scalar>(out.eigenvalues, out.unitary);
  return out;
}

/// Largest absolute eigenvalue.
template <typename Scalar>
RealOf<Scalar> spectral_norm(const Hermitian<Scalar>& a) {
  const auto values = eig_hermitian(a).eigenvalues;
  return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

/// A Hermitian matrix with strictly positive spectrum and condition number at
/// most 1e12. Carries its eigendecomposition so matrix functions never
/// re-factor.
template <typename Scalar_>
class PositiveDefinite {
 public:
  using Scalar = Scalar_;
  using RealScalar = RealOf<Scalar>;
  using MatrixType = DenseMatrix<Scalar>;

  explicit PositiveDefinite(Hermitian<Scalar> h)
      : h_(std::move(h)), spectrum_(eig_hermitian(h_)) {
    check_spectrum(spectrum_.eigenvalues);
  }

  template <typename Derived>
  explicit PositiveDefinite(const Eigen::MatrixBase<Derived>& m)
      : PositiveDefinite(Hermitian<Scalar>(m)) {}

  /// Builds U diag(values) U* without another eigensolve. Columns of
  /// `unitary` must be orthonormal; values need not be sorted.
  static PositiveDefinite from_spectrum(MatrixType unitary, RealVector<Scalar> values) {
    check_spectrum(values);
    detail::sort_ascending<Scalar>(values, unitary);
    SpectralDecomposition<Scalar> s{std::move(values), std::move(unitary)};
    auto h = Hermitian<Scalar>::symmetrized(s.reconstruct());
    return PositiveDefinite(std::move(h), std::move(s));
  }

  static PositiveDefinite identity(Index n) {
    return PositiveDefinite(Hermitian<Scalar>::identity(n),
                            SpectralDecomposition<Scalar>{RealVector<Scalar>::Ones(n),
                                                          MatrixType::Identity(n, n)});
  }

  Index size() const { return h_.size(); }
  const Hermitian<Scalar>& hermitian() const { return h_; }
  const MatrixType& matrix() const { return h_.matrix(); }
  const SpectralDecomposition<Scalar>& spectrum() const { return spectrum_; }
  RealScalar min_eigenvalue() const { return spectrum_.eigenvalues(0); }
  RealScalar max_eigenvalue() const { return spectrum_.eigenvalues(size() - 1); }
  RealScalar condition() const { return max_eigenvalue() / min_eigenvalue(); }

  operator const Hermitian<Scalar>&() const { return h_; }

 private:
  PositiveDefinite(Hermitian<Scalar> h, SpectralDecomposition<Scalar> s)
      : h_(std::move(h)), spectrum_(std::move(s)) {}

  static void check_spectrum(const RealVector<Scalar>& values) {
    if (!values.allFinite()) throw DomainError("PositiveDefinite: non-finite eigenvalue");
    const RealScalar lo = values.minCoeff();
    const RealScalar hi = values.maxCoeff();
    if (!(hi > 0) || !(lo > RealScalar(1.0 / kMaxCondition) * hi)) {
      std::ostringstream os;
      os << "PositiveDefinite: smallest eigenvalue " << lo << " is not above 1e-12 x largest "
         << hi;
      throw DomainError(os.str(), lo);
    }
  }

  Hermitian<Scalar> h_;
  SpectralDecomposition<Scalar> spectrum_;
};

using PDMatrix = PositiveDefinite<cplx>;

/// Sum of PD matrices; PD because the cone is convex.
template <typename Scalar>
PositiveDefinite<Scalar> sum(const std::vector<PositiveDefinite<Scalar>>& terms) {
  if (terms.empty()) throw DimensionError("sum: empty list");
  Hermitian<Scalar> acc = terms.front().hermitian();
  for (std::size_t j = 1; j < terms.size(); ++j) acc += terms[j].hermitian();
  return PositiveDefinite<Scalar>(std::move(acc));
}

}  // namespace meanscope
