#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meanscope/ensembles.hpp"
#include "meanscope/hermitian.hpp"
#include "meanscope/loewner.hpp"
#include "meanscope/means.hpp"

namespace meanscope {

/// The inequality and identity chains the harness verifies.
enum class LawId {
  MeanAxioms,            ///< I σ I = I; C*(AσB)C = (C*AC)σ(C*BC); joint monotonicity
  Superadditivity,       ///< Σ(A_j σ B_j) <= (ΣA_j) σ (ΣB_j)
  SharpIdentity,         ///< (A σ B) ♯ (A σ⊥ B) = A ♯ B
  CallebautOperator,     ///< Σ A_j♯B_j <= (ΣA_jσB_j) ♯ (ΣA_jσ⊥B_j) <= ΣA_j ♯ ΣB_j
  PathMonotonicity,      ///< G(s) <= G(t) for s between t and 1-t
  GeoPathCallebaut,      ///< the CallebautOperator chain with σ = ♯_s
  ScalarCallebaut,       ///< classical chain for positive sequences, plus |r|-monotonicity
  PowerLemma,            ///< A^r + A^{-r} <= A + A^{-1}, r in [0,1]
  TensorF,               ///< A^{1+t}⊗B^{1-t} + A^{1-t}⊗B^{1+t}: min at t = 0
  TensorG,               ///< A^t⊗B^{1-t} + A^{1-t}⊗B^t: min at t = 1/2
  MatrixCallebaut,       ///< Kronecker chain over the callebaut (s,t) region
  HadamardCallebaut,     ///< Hadamard chain, each member a compression of the Kronecker one
  HadamardPower,         ///< (1/m ΣA^{1/2})∘(…) <= (1/m ΣA^t)∘(1/m ΣA^{1-t}) <= (1/m)Σ(A∘I)
  InterpolationIdentity, ///< (A σ_p B) σ_w (A σ_q B) = A σ_{(1-w)p + wq} B
  PathAxioms,            ///< endpoints, midpoint property, norm continuity
  Wada                   ///< (A♯B)⊗(A♯B) <= ½{(AσB)⊗(Aσ⊥B) + …} <= ½{A⊗B + B⊗A}
};

const std::vector<LawId>& all_laws();
/// Stable kebab-case identifier, e.g. "sharp-identity".
std::string law_name(LawId law);
std::optional<LawId> parse_law(std::string_view name);
/// True for laws whose instances involve Kronecker products.
bool is_tensor_law(LawId law);

/// Matrices and parameters for one trial. Fields a law does not use are
/// ignored.
struct Instance {
  std::uint64_t seed = 0;
  std::vector<PDMatrix> a;        ///< A_j
  std::vector<PDMatrix> b;        ///< B_j
  std::vector<PDMatrix> a_upper;  ///< A_j <= a_upper[j]   (mean axioms)
  std::vector<PDMatrix> b_upper;  ///< B_j <= b_upper[j]   (mean axioms)
  std::optional<DenseMatrix<cplx>> congruence;
  MeanDescriptor mean = MeanDescriptor::geometric();
  /// Exponent of the power-mean path family m_{r,·}; 0 selects ♯_·.
  double path_r = 0.0;
  double s = 0.5;
  double t = 0.5;
  double p = 0.0;       ///< interpolation endpoints (path axioms, interpolation identity)
  double q = 1.0;
  double weight = 0.5;  ///< outer weight w of the interpolation identity
  std::vector<double> exponents;  ///< r-grid (power lemma, scalar |r|-monotonicity)
  std::vector<double> grid;       ///< t-grid (tensor laws)
  std::vector<double> seq_a;      ///< positive sequences (scalar Callebaut)
  std::vector<double> seq_b;
  double callebaut_center = 0.5;  ///< the fixed s of Callebaut's f(r, s)

  Index n() const;
  std::size_t m() const;
};

struct Tolerances {
  double loewner = 1e-8;
  double equality = 1e-9;
  double scalar = 1e-12;
  /// Hadamard members versus compressed Kronecker members.
  double compression = 1e-13;
};

/// One edge of a chain: a Loewner comparison or an equality residual.
struct Link {
  enum class Kind { Loewner, Equality };
  std::string label;
  Kind kind = Kind::Loewner;
  LoewnerVerdict verdict;    ///< Loewner links
  double residual = 0.0;     ///< Equality links
  double tolerance = 0.0;
  bool holds = false;

  /// Signed slack normalized to be comparable across links: the normalized
  /// Loewner margin, or -residual for equalities. Failing links have
  /// slack < -tolerance.
  double slack() const;
};

enum class Status { Pass, Fail, Skipped };
std::string to_string(Status s);

struct CheckResult {
  LawId law = LawId::MeanAxioms;
  Status status = Status::Pass;
  Index n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::vector<Link> links;
  std::string note;  ///< reason for a skip

  bool holds() const { return status != Status::Fail; }
  /// Minimum slack over all links (+inf when there are none).
  double worst_slack() const;
  const Link* find(std::string_view label) const;
};

/// Default t-grid for the sweep laws: `per_interval` points on each monotone
/// interval ([-1,0] and [0,1] for TensorF; [0,1/2] and [1/2,1] otherwise).
std::vector<double> default_grid(LawId law, int per_interval = 9);

/// Evaluates every link of `law` on `instance`. Throws PreconditionError when
/// the instance does not fit the law's hypotheses.
CheckResult check_law(LawId law, const Instance& instance, const Tolerances& tol = {});

/// Shape of a harness trial.
struct TrialShape {
  Index n = 3;
  int m = 2;
  Field field = Field::Complex;
  double kappa_max = 1e4;
};

/// Number of forced boundary instances a suite runs for `law` before random
/// ones (0 for laws without a parameter region).
int boundary_count(LawId law);

/// Draws an in-region instance for `law`. `boundary` in [0, boundary_count)
/// forces the corresponding degenerate parameter point.
Instance sample_instance(LawId law, const TrialShape& shape, std::uint64_t seed,
                         int boundary = -1);

/// Random descriptor over the implemented family, including nested duals.
MeanDescriptor random_mean(std::mt19937_64& rng, int max_dual_depth = 2);

// ---------------------------------------------------------------- sweeps

enum class SweepLaw { TensorF, TensorG, MatrixCallebautMiddle, ScalarCallebautF };

std::string sweep_name(SweepLaw law);
std::optional<SweepLaw> parse_sweep(std::string_view name);
/// The check_law law whose instances a sweep consumes.
LawId sweep_source(SweepLaw law);
/// Grid point where the swept function attains its minimum.
double sweep_center(SweepLaw law);

struct CurvePoint {
  double t = 0.0;
  double trace = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Loewner link to the previous point: on the increasing side
  /// f(t_{i-1}) <= f(t_i), on the decreasing side f(t_i) <= f(t_{i-1}).
  /// Empty for the first point and for a pair straddling the center.
  std::optional<LoewnerVerdict> link;
};

struct Curve {
  SweepLaw law = SweepLaw::TensorF;
  std::vector<CurvePoint> points;
  /// Center-versus-neighbor links when the center is a grid point.
  std::vector<LoewnerVerdict> center_links;

  bool monotone() const;
  /// CSV with header t,trace,lambda_min,lambda_max,monotone_link_margin.
  std::string to_csv() const;
};

/// Samples the swept function over `grid` (strictly increasing, inside the
/// law's domain) and records pairwise Loewner links.
Curve sweep_law(SweepLaw law, const Instance& instance, const std::vector<double>& grid,
                double tol = 1e-8);

// -------------------------------------------------- closed-form members

/// The four members of the classical chain:
/// (Σ sqrt(a b))², P(s), P(t), (Σa)(Σb) with P(x) = (Σ a^x b^{1-x})(Σ a^{1-x} b^x).
std::vector<double> scalar_callebaut_members(const std::vector<double>& a,
                                             const std::vector<double>& b, double s, double t);
/// Callebaut's f(r, c) = (Σ a^{c+r} b^{c-r}) (Σ a^{c-r} b^{c+r}).
double callebaut_f(const std::vector<double>& a, const std::vector<double>& b, double r,
                   double c);

}  // namespace meanscope
