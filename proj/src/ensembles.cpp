#include "meanscope/ensembles.hpp"

#include <cmath>

#include "meanscope/errors.hpp"

namespace meanscope {

std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

Field parse_field(std::string_view text) {
  if (text == "real") return Field::Real;
  if (text == "complex") return Field::Complex;
  throw PreconditionError("unknown field '" + std::string(text) + "' (expected real|complex)");
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t k) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Ensemble::Ensemble(const EnsembleSpec& spec) : spec_(spec), rng_(spec.seed) {
  if (spec.n < 1) throw PreconditionError("EnsembleSpec: n must be >= 1");
  if (spec.m < 1) throw PreconditionError("EnsembleSpec: m must be >= 1");
  if (!(spec.kappa_max >= 1.0) || spec.kappa_max > kMaxCondition)
    throw PreconditionError("EnsembleSpec: kappa_max must lie in [1, 1e12]");
}

double Ensemble::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

int Ensemble::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

DenseMatrix<cplx> Ensemble::gaussian(Index rows, Index cols) {
  std::normal_distribution<double> normal;
  DenseMatrix<cplx> g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng_);
      const double im = spec_.field == Field::Complex ? normal(rng_) : 0.0;
      g(i, j) = cplx(re, im);
    }
  return g;
}

DenseMatrix<cplx> Ensemble::haar_unitary() {
  const Index n = spec_.n;
  Eigen::HouseholderQR<DenseMatrix<cplx>> qr(gaussian(n, n));
  DenseMatrix<cplx> q = qr.householderQ() * DenseMatrix<cplx>::Identity(n, n);
  const DenseMatrix<cplx>& r = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

RealVector<cplx> Ensemble::log_uniform_spectrum(Index n) {
  const double half_log = 0.5 * std::log(spec_.kappa_max);
  RealVector<cplx> values(n);
  for (Index i = 0; i < n; ++i) values(i) = std::exp(uniform(-half_log, half_log));
  return values;
}

PDMatrix Ensemble::pd() {
  auto q = haar_unitary();
  return PDMatrix::from_spectrum(std::move(q), log_uniform_spectrum(spec_.n));
}

std::vector<PDMatrix> Ensemble::pd_tuple() {
  std::vector<PDMatrix> out;
  out.reserve(static_cast<std::size_t>(spec_.m));
  for (int j = 0; j < spec_.m; ++j) out.push_back(pd());
  return out;
}

std::pair<PDMatrix, PDMatrix> Ensemble::ordered_pair() {
  PDMatrix a = pd();
  const auto g = gaussian(spec_.n, spec_.n);
  DenseMatrix<cplx> gram = g * g.adjoint();
  const double frob = gram.norm();
  const double scale = frob > 0 ? uniform(0.0, 1.0) * a.max_eigenvalue() / frob : 0.0;
  auto upper = a.hermitian() + HermitianMatrix::symmetrized(scale * gram);
  PDMatrix b(std::move(upper));
  return {std::move(a), std::move(b)};
}

DenseMatrix<cplx> Ensemble::invertible(double spread) {
  const auto left = haar_unitary();
  const auto right = haar_unitary();
  const double half_log = std::log(spread);
  Eigen::VectorXcd sigma(spec_.n);
  for (Index i = 0; i < spec_.n; ++i) sigma(i) = std::exp(uniform(-half_log, half_log));
  return left * sigma.asDiagonal() * right.adjoint();
}

std::vector<double> Ensemble::positive_sequence(std::size_t length) {
  const double half_log = 0.5 * std::log(spec_.kappa_max);
  std::vector<double> out(length);
  for (auto& x : out) x = std::exp(uniform(-half_log, half_log));
  return out;
}

PDMatrix random_pd(const EnsembleSpec& spec) { return Ensemble(spec).pd(); }

std::pair<PDMatrix, PDMatrix> random_ordered_pair(const EnsembleSpec& spec) {
  return Ensemble(spec).ordered_pair();
}

Region parse_region(std::string_view name) {
  if (name == "callebaut") return Region::Callebaut;
  if (name == "between") return Region::Between;
  if (name == "unit") return Region::Unit;
  throw PreconditionError("unknown region '" + std::string(name) + "'");
}

std::string to_string(Region r) {
  switch (r) {
    case Region::Callebaut:
      return "callebaut";
    case Region::Between:
      return "between";
    case Region::Unit:
      return "unit";
  }
  return {};
}

bool in_region(Region region, RegionPoint p) {
  const auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(p.s) || !unit(p.t)) return false;
  switch (region) {
    case Region::Callebaut:
      return (p.t <= p.s && p.s <= 0.5) || (0.5 <= p.s && p.s <= p.t);
    case Region::Between:
      return std::min(p.t, 1.0 - p.t) <= p.s && p.s <= std::max(p.t, 1.0 - p.t);
    case Region::Unit:
      return true;
  }
  return false;
}

RegionPoint sample_region(Region region, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    RegionPoint p;
    p.s = unit(rng);
    p.t = unit(rng);
    if (in_region(region, p)) return p;
  }
}

RegionPoint sample_region(Region region, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_region(region, rng);
}

double sample_between(double t, std::mt19937_64& rng) {
  if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("sample_between: t outside [0,1]");
  return std::uniform_real_distribution<double>(std::min(t, 1.0 - t),
                                                std::max(t, 1.0 - t))(rng);
}

std::vector<RegionPoint> boundary_points(Region region, double t_free) {
  std::vector<RegionPoint> out{{t_free, t_free}, {0.5, 0.5}, {0.0, 0.0}, {1.0, 1.0}};
  if (region == Region::Between) {
    out.push_back({1.0 - t_free, t_free});
    out.push_back({0.5, t_free});
  }
  return out;
}

}  // namespace meanscope
