#pragma once

#include <cmath>
#include <sstream>

#include "meanscope/hermitian.hpp"

namespace meanscope {

namespace detail {

template <typename Scalar, typename Fn>
RealVector<Scalar> map_eigenvalues(const PositiveDefinite<Scalar>& a, Fn&& fn) {
  const auto& lambda = a.spectrum().eigenvalues;
  RealVector<Scalar> out(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) {
    const RealOf<Scalar> value = fn(lambda(i));
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os << "apply_function: function is not finite at eigenvalue " << lambda(i);
      throw DomainError(os.str(), lambda(i));
    }
    out(i) = value;
  }
  return out;
}

}  // namespace detail

/// U diag(fn(lambda)) U* for a scalar function finite on the spectrum.
template <typename Scalar, typename Fn>
Hermitian<Scalar> apply_function(const PositiveDefinite<Scalar>& a, Fn&& fn) {
  const auto values = detail::map_eigenvalues(a, fn);
  const auto& u = a.spectrum().unitary;
  return Hermitian<Scalar>::symmetrized(u * values.template cast<Scalar>().asDiagonal() *
                                        u.adjoint());
}

/// Same as apply_function for a function positive on the spectrum; reuses the
/// eigenvectors so the result carries its decomposition.
template <typename Scalar, typename Fn>
PositiveDefinite<Scalar> apply_positive_function(const PositiveDefinite<Scalar>& a, Fn&& fn) {
  return PositiveDefinite<Scalar>::from_spectrum(a.spectrum().unitary,
                                                 detail::map_eigenvalues(a, fn));
}

/// Spectral power A^t. power(A,0) is exactly I and power(A,1) returns A.
template <typename Scalar>
PositiveDefinite<Scalar> power(const PositiveDefinite<Scalar>& a, double t) {
  if (t == 0.0) return PositiveDefinite<Scalar>::identity(a.size());
  if (t == 1.0) return a;
  return apply_positive_function(a, [t](RealOf<Scalar> x) { return std::pow(x, t); });
}

template <typename Scalar>
PositiveDefinite<Scalar> sqrt(const PositiveDefinite<Scalar>& a) {
  return apply_positive_function(a, [](RealOf<Scalar> x) { return std::sqrt(x); });
}

template <typename Scalar>
PositiveDefinite<Scalar> inverse(const PositiveDefinite<Scalar>& a) {
  return apply_positive_function(a, [](RealOf<Scalar> x) { return RealOf<Scalar>(1) / x; });
}

/// C* X C.
template <typename Scalar, typename Derived>
Hermitian<Scalar> congruence(const Eigen::MatrixBase<Derived>& c, const Hermitian<Scalar>& x) {
  if (c.rows() != c.cols() || c.rows() != x.size())
    throw DimensionError("congruence: C must be square with the dimension of X");
  return Hermitian<Scalar>::symmetrized(c.adjoint() * x.matrix() * c);
}

}  // namespace meanscope
