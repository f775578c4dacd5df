#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "meanscope/hermitian.hpp"
#include "meanscope/matrix_functions.hpp"

namespace meanscope {

/// Below this |r| the power family is evaluated on its geometric limit.
inline constexpr double kGeometricLimit = 1e-8;

/// A Kubo–Ando operator mean, identified by its representing function f
/// (f(x) I = I σ (x I)).
///
///   Arithmetic           (1+x)/2
///   Harmonic             2x/(1+x)
///   Geometric            x^{1/2}
///   WeightedGeometric(p) x^p,                 p in [0,1]
///   Power(r)             ((1+x^r)/2)^{1/r},   r in [-1,1]; r = 0 is Geometric
///   PowerPath(r,t)       (1-t+t x^r)^{1/r},   r in [-1,1], t in [0,1]
///   GeometricPath(t)     x^t,                 t in [0,1]
///   DualOf(d)            x / f_d(x)
class MeanDescriptor {
 public:
  enum class Kind {
    Arithmetic,
    Harmonic,
    Geometric,
    WeightedGeometric,
    Power,
    PowerPath,
    GeometricPath,
    Dual
  };

  static MeanDescriptor arithmetic() { return MeanDescriptor(Kind::Arithmetic); }
  static MeanDescriptor harmonic() { return MeanDescriptor(Kind::Harmonic); }
  static MeanDescriptor geometric() { return MeanDescriptor(Kind::Geometric); }
  static MeanDescriptor weighted_geometric(double p);
  /// Power(0) resolves to Geometric.
  static MeanDescriptor power(double r);
  static MeanDescriptor power_path(double r, double t);
  static MeanDescriptor geometric_path(double t);
  static MeanDescriptor dual_of(MeanDescriptor inner);

  Kind kind() const { return kind_; }
  /// Weight p (WeightedGeometric) or path position t (PowerPath, GeometricPath).
  double weight() const { return weight_; }
  /// Exponent r (Power, PowerPath).
  double exponent() const { return exponent_; }
  const MeanDescriptor& inner() const;

  /// Representing function at x > 0.
  double operator()(double x) const;

  friend bool operator==(const MeanDescriptor& a, const MeanDescriptor& b);

 private:
  explicit MeanDescriptor(Kind kind) : kind_(kind) {}

  Kind kind_;
  double exponent_ = 0.0;
  double weight_ = 0.0;
  std::shared_ptr<const MeanDescriptor> inner_;
};

/// f as a callable; f(1) = 1 for every valid descriptor.
std::function<double(double)> representing_fn(const MeanDescriptor& d);

/// The dual mean, with representing function x / f(x). Always a DualOf
/// wrapper; closed forms (geometric self-dual, wgeo:p -> wgeo:1-p) hold
/// extensionally.
MeanDescriptor dual(const MeanDescriptor& d);

/// Compact text form: "arithmetic", "harmonic", "geometric", "wgeo:0.25",
/// "power:0.5", "path:r=0.5,t=0.25", "gpath:0.25", "dual(power:0.5)".
std::string to_string(const MeanDescriptor& d);
MeanDescriptor parse_mean(std::string_view text);

/// A σ B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}.
template <typename Scalar>
PositiveDefinite<Scalar> mean(const MeanDescriptor& d, const PositiveDefinite<Scalar>& a,
                              const PositiveDefinite<Scalar>& b) {
  if (a.size() != b.size()) throw DimensionError("mean: dimension mismatch");
  const auto root = sqrt(a);
  const auto inv_root = inverse(root);
  const PositiveDefinite<Scalar> inner(congruence(inv_root.matrix(), b.hermitian()));
  const auto f_inner = apply_positive_function(inner, [&d](RealOf<Scalar> x) { return d(x); });
  return PositiveDefinite<Scalar>(congruence(root.matrix(), f_inner.hermitian()));
}

/// Point t of the power-mean interpolation path m_{r,t}:
/// A^{1/2} (1 - t + t (A^{-1/2} B A^{-1/2})^r)^{1/r} A^{1/2}, with the
/// weighted geometric mean A ♯_t B for |r| < 1e-8.
template <typename Scalar>
PositiveDefinite<Scalar> path_point(double r, double t, const PositiveDefinite<Scalar>& a,
                                    const PositiveDefinite<Scalar>& b) {
  return mean(MeanDescriptor::power_path(r, t), a, b);
}

/// A ♯_t B.
template <typename Scalar>
PositiveDefinite<Scalar> geometric_mean(const PositiveDefinite<Scalar>& a,
                                        const PositiveDefinite<Scalar>& b, double t = 0.5) {
  return mean(MeanDescriptor::weighted_geometric(t), a, b);
}

}  // namespace meanscope
