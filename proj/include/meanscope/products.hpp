#pragma once

#include <sstream>

#include "meanscope/hermitian.hpp"

namespace meanscope {

/// Default cap on the dimension of a Kronecker product.
inline constexpr Index kKronCap = 64;

namespace detail {

template <typename Scalar>
DenseMatrix<Scalar> kron_dense(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
  DenseMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline void check_kron_size(Index na, Index nb, Index cap) {
  if (na * nb > cap) {
    std::ostringstream os;
    os << "kron: dimension " << na << "x" << nb << " = " << na * nb << " exceeds cap " << cap;
    throw ResourceError(os.str());
  }
}

}  // namespace detail

/// Kronecker product: block (i,j) is a(i,j)·B.
template <typename Scalar>
Hermitian<Scalar> kron(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b,
                       Index cap = kKronCap) {
  detail::check_kron_size(a.size(), b.size(), cap);
  return Hermitian<Scalar>::symmetrized(detail::kron_dense(a.matrix(), b.matrix()));
}

/// Kronecker product of PD factors; the spectrum is the set of pairwise
/// eigenvalue products with eigenvectors U_A ⊗ U_B.
template <typename Scalar>
PositiveDefinite<Scalar> kron(const PositiveDefinite<Scalar>& a,
                              const PositiveDefinite<Scalar>& b, Index cap = kKronCap) {
  detail::check_kron_size(a.size(), b.size(), cap);
  const auto& la = a.spectrum().eigenvalues;
  const auto& lb = b.spectrum().eigenvalues;
  RealVector<Scalar> values(la.size() * lb.size());
  for (Index i = 0; i < la.size(); ++i)
    for (Index j = 0; j < lb.size(); ++j) values(i * lb.size() + j) = la(i) * lb(j);
  return PositiveDefinite<Scalar>::from_spectrum(
      detail::kron_dense(a.spectrum().unitary, b.spectrum().unitary), std::move(values));
}

/// Entrywise (Schur) product.
template <typename Scalar>
Hermitian<Scalar> hadamard(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b) {
  if (a.size() != b.size()) throw DimensionError("hadamard: dimension mismatch");
  return Hermitian<Scalar>::symmetrized(a.matrix().cwiseProduct(b.matrix()));
}

/// Rows/columns {i*n + i} of an n²×n² matrix: the copy of A∘B inside A⊗B.
template <typename Scalar>
Hermitian<Scalar> diagonal_block_submatrix(const Hermitian<Scalar>& big, Index n) {
  if (big.size() != n * n) throw DimensionError("diagonal_block_submatrix: size is not n^2");
  DenseMatrix<Scalar> out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = big(i * n + i, j * n + j);
  return Hermitian<Scalar>::symmetrized(out);
}

}  // namespace meanscope
