#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meanscope/hermitian.hpp"

namespace meanscope {

enum class Field { Real, Complex };

std::string to_string(Field f);
Field parse_field(std::string_view text);

/// Parameters of a random PD ensemble. Eigenvalues are log-uniform in
/// [1/sqrt(kappa_max), sqrt(kappa_max)], so the condition number never
/// exceeds kappa_max.
struct EnsembleSpec {
  Index n = 4;
  int m = 1;
  Field field = Field::Complex;
  double kappa_max = 1e4;
  std::uint64_t seed = 0;
};

/// Seed for trial k of a run with the given master seed (SplitMix64 finalizer
/// over master and k), so trials are independent of evaluation order.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t k);

/// Sequential generator over one seeded engine. Every draw is a pure
/// function of (spec, number of previous draws).
class Ensemble {
 public:
  explicit Ensemble(const EnsembleSpec& spec);

  const EnsembleSpec& spec() const { return spec_; }
  std::mt19937_64& engine() { return rng_; }

  /// Q diag(lambda) Q*, Q from the QR factorization of a Gaussian matrix with
  /// the phases of R folded in.
  PDMatrix pd();
  std::vector<PDMatrix> pd_tuple();
  /// (A, A + P) with P a scaled Gram matrix of a Gaussian; ||P||_2 <= ||A||_2.
  std::pair<PDMatrix, PDMatrix> ordered_pair();
  /// Q1 diag(sigma) Q2* with singular values log-uniform in [1/spread, spread].
  DenseMatrix<cplx> invertible(double spread = 2.0);
  /// Positive numbers log-uniform in [1/sqrt(kappa_max), sqrt(kappa_max)].
  std::vector<double> positive_sequence(std::size_t length);

  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);

 private:
  DenseMatrix<cplx> gaussian(Index rows, Index cols);
  DenseMatrix<cplx> haar_unitary();
  RealVector<cplx> log_uniform_spectrum(Index n);

  EnsembleSpec spec_;
  std::mt19937_64 rng_;
};

PDMatrix random_pd(const EnsembleSpec& spec);
std::pair<PDMatrix, PDMatrix> random_ordered_pair(const EnsembleSpec& spec);

/// Named parameter regions for (s, t).
///   callebaut: 0 <= t <= s <= 1/2  or  1/2 <= s <= t <= 1
///   between:   s between t and 1 - t (t anywhere in [0,1])
///   unit:      s, t in [0,1]
enum class Region { Callebaut, Between, Unit };

struct RegionPoint {
  double s = 0.0;
  double t = 0.0;
};

Region parse_region(std::string_view name);
std::string to_string(Region r);
bool in_region(Region region, RegionPoint p);

/// Rejection sampling on uniform [0,1]^2.
RegionPoint sample_region(Region region, std::mt19937_64& rng);
RegionPoint sample_region(Region region, std::uint64_t seed);
/// s uniform between t and 1 - t.
double sample_between(double t, std::mt19937_64& rng);

/// Degenerate points every suite forces once. `t_free` fills the (t, t)
/// entry (and (1-t, t), (1/2, t) for the between region).
std::vector<RegionPoint> boundary_points(Region region, double t_free);

}  // namespace meanscope
