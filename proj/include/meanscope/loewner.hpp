#pragma once

#include <algorithm>
#include <cmath>

#include "meanscope/hermitian.hpp"

namespace meanscope {

/// Outcome of testing A <= B in the Loewner order.
///
/// `margin` is the smallest eigenvalue of B - A (negative when the order
/// fails), `scale` is ||A||_2 + ||B||_2, and the verdict holds iff
/// margin >= -tolerance * max(1, scale).
struct LoewnerVerdict {
  bool holds = false;
  double margin = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;

  /// margin / max(1, scale): comparable across magnitudes.
  double normalized_margin() const { return margin / std::max(1.0, scale); }
};

inline LoewnerVerdict make_verdict(double margin, double scale, double tol) {
  return {margin >= -tol * std::max(1.0, scale), margin, scale, tol};
}

template <typename Scalar>
LoewnerVerdict loewner_leq(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b, double tol) {
  if (a.size() != b.size()) throw DimensionError("loewner_leq: dimension mismatch");
  const double margin = eig_hermitian(b - a).eigenvalues(0);
  return make_verdict(margin, spectral_norm(a) + spectral_norm(b), tol);
}

/// Scalar specialization used by the classical (sequence) laws.
inline LoewnerVerdict loewner_leq(double a, double b, double tol) {
  return make_verdict(b - a, std::abs(a) + std::abs(b), tol);
}

/// ||X - Y||_F / max(1, ||X||_F, ||Y||_F).
template <typename Scalar>
double relative_residual(const Hermitian<Scalar>& x, const Hermitian<Scalar>& y) {
  if (x.size() != y.size()) throw DimensionError("relative_residual: dimension mismatch");
  const double denom = std::max({1.0, double(x.frobenius_norm()), double(y.frobenius_norm())});
  return double((x.matrix() - y.matrix()).norm()) / denom;
}

}  // namespace meanscope
