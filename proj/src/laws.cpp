#include "meanscope/laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "meanscope/matrix_functions.hpp"
#include "meanscope/products.hpp"

namespace meanscope {

namespace {

using PD = PDMatrix;
using H = HermitianMatrix;

struct LawInfo {
  LawId id;
  const char* name;
};

constexpr LawInfo kLaws[] = {
    {LawId::MeanAxioms, "mean-axioms"},
    {LawId::Superadditivity, "superadditivity"},
    {LawId::SharpIdentity, "sharp-identity"},
    {LawId::CallebautOperator, "callebaut-operator"},
    {LawId::PathMonotonicity, "path-monotonicity"},
    {LawId::GeoPathCallebaut, "geo-path-callebaut"},
    {LawId::ScalarCallebaut, "scalar-callebaut"},
    {LawId::PowerLemma, "power-lemma"},
    {LawId::TensorF, "tensor-f"},
    {LawId::TensorG, "tensor-g"},
    {LawId::MatrixCallebaut, "matrix-callebaut"},
    {LawId::HadamardCallebaut, "hadamard-callebaut"},
    {LawId::HadamardPower, "hadamard-power"},
    {LawId::InterpolationIdentity, "interpolation-identity"},
    {LawId::PathAxioms, "path-axioms"},
    {LawId::Wada, "wada"},
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

[[noreturn]] void violated(LawId law, const std::string& what) {
  throw PreconditionError(law_name(law) + ": " + what);
}

/// Accumulates links into a CheckResult.
class Chain {
 public:
  Chain(CheckResult& result, const Tolerances& tol) : result_(result), tol_(tol) {}

  void leq(std::string label, const H& lhs, const H& rhs) { leq(std::move(label), lhs, rhs, tol_.loewner); }
  void leq(std::string label, const H& lhs, const H& rhs, double tol) {
    push_loewner(std::move(label), loewner_leq(lhs, rhs, tol));
  }
  void leq_scalar(std::string label, double lhs, double rhs) {
    push_loewner(std::move(label), loewner_leq(lhs, rhs, tol_.scalar));
  }
  void equal(std::string label, const H& x, const H& y) { equal(std::move(label), x, y, tol_.equality); }
  void equal(std::string label, const H& x, const H& y, double tol) {
    push_equality(std::move(label), relative_residual(x, y), tol);
  }
  void push_loewner(std::string label, const LoewnerVerdict& v) {
    Link link;
    link.label = std::move(label);
    link.kind = Link::Kind::Loewner;
    link.verdict = v;
    link.tolerance = v.tolerance;
    link.holds = v.holds;
    result_.links.push_back(std::move(link));
  }
  void push_equality(std::string label, double residual, double tol) {
    Link link;
    link.label = std::move(label);
    link.kind = Link::Kind::Equality;
    link.residual = residual;
    link.tolerance = tol;
    link.holds = residual <= tol;
    result_.links.push_back(std::move(link));
  }

 private:
  CheckResult& result_;
  const Tolerances& tol_;
};

Index require_pairs(LawId law, const Instance& in) {
  if (in.a.empty()) violated(law, "needs at least one A_j");
  if (in.a.size() != in.b.size()) violated(law, "A_j and B_j tuples differ in length");
  const Index n = in.a.front().size();
  for (std::size_t j = 0; j < in.a.size(); ++j)
    if (in.a[j].size() != n || in.b[j].size() != n) violated(law, "matrices differ in dimension");
  return n;
}

void require_unit(LawId law, double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) violated(law, std::string(name) + " = " + fmt(x) + " outside [0,1]");
}

void require_path_exponent(LawId law, double r) {
  if (!(r >= -1.0 && r <= 1.0)) violated(law, "path exponent r = " + fmt(r) + " outside [-1,1]");
}

H sum_h(const std::vector<PD>& terms) {
  H acc = terms.front().hermitian();
  for (std::size_t j = 1; j < terms.size(); ++j) acc += terms[j].hermitian();
  return acc;
}

/// Σ_j A_j σ B_j.
PD sum_means(const MeanDescriptor& d, const std::vector<PD>& a, const std::vector<PD>& b) {
  std::vector<PD> terms;
  terms.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) terms.push_back(mean(d, a[j], b[j]));
  return sum(terms);
}

MeanDescriptor path_mean(double r, double t) { return MeanDescriptor::power_path(r, t); }

/// Σ_j A_j ♯_x B_j.
PD sum_wgeo(const std::vector<PD>& a, const std::vector<PD>& b, double x) {
  return sum_means(MeanDescriptor::weighted_geometric(x), a, b);
}

H symmetric_kron(const H& x, const H& y) { return kron(x, y) + kron(y, x); }

// ------------------------------------------------------------ law bodies

void check_mean_axioms(const Instance& in, Chain& chain, const Tolerances& tol) {
  const auto law = LawId::MeanAxioms;
  const Index n = require_pairs(law, in);
  if (in.a_upper.size() != in.a.size() || in.b_upper.size() != in.b.size())
    violated(law, "needs a Loewner-larger partner for every A_j and B_j");
  if (!in.congruence) violated(law, "needs a congruence matrix C");
  const auto& c = *in.congruence;
  if (c.rows() != n || c.cols() != n) violated(law, "congruence C has the wrong dimension");
  if (!Eigen::FullPivLU<DenseMatrix<cplx>>(c).isInvertible())
    violated(law, "congruence C is singular");

  const auto& d = in.mean;
  const auto id = PD::identity(n);
  chain.equal("normalization I s I = I", mean(d, id, id).hermitian(), id.hermitian(), 1e-13);
  for (std::size_t j = 0; j < in.a.size(); ++j) {
    const std::string tag = "[" + std::to_string(j) + "]";
    if (!loewner_leq(in.a[j].hermitian(), in.a_upper[j].hermitian(), tol.loewner).holds ||
        !loewner_leq(in.b[j].hermitian(), in.b_upper[j].hermitian(), tol.loewner).holds)
      violated(law, "partner pair " + tag + " is not Loewner ordered");
    const auto ab = mean(d, in.a[j], in.b[j]);
    const PD ca(congruence(c, in.a[j].hermitian()));
    const PD cb(congruence(c, in.b[j].hermitian()));
    chain.equal("congruence C*(AsB)C = (C*AC)s(C*BC) " + tag, congruence(c, ab.hermitian()),
                mean(d, ca, cb).hermitian());
    chain.leq("monotone AsB <= A'sB' " + tag, ab.hermitian(),
              mean(d, in.a_upper[j], in.b_upper[j]).hermitian());
  }
}

void check_superadditivity(const Instance& in, Chain& chain) {
  require_pairs(LawId::Superadditivity, in);
  chain.leq("sum(A_j s B_j) <= (sum A) s (sum B)", sum_means(in.mean, in.a, in.b).hermitian(),
            mean(in.mean, sum(in.a), sum(in.b)).hermitian());
}

void check_sharp_identity(const Instance& in, Chain& chain) {
  require_pairs(LawId::SharpIdentity, in);
  const auto dual_mean = dual(in.mean);
  const auto geo = MeanDescriptor::geometric();
  for (std::size_t j = 0; j < in.a.size(); ++j) {
    const auto lhs = mean(geo, mean(in.mean, in.a[j], in.b[j]), mean(dual_mean, in.a[j], in.b[j]));
    chain.equal("(AsB)#(As'B) = A#B [" + std::to_string(j) + "]", lhs.hermitian(),
                mean(geo, in.a[j], in.b[j]).hermitian());
  }
}

void check_callebaut_operator(const Instance& in, Chain& chain) {
  require_pairs(LawId::CallebautOperator, in);
  const auto geo = MeanDescriptor::geometric();
  const auto left = sum_means(geo, in.a, in.b);
  const auto middle = mean(geo, sum_means(in.mean, in.a, in.b), sum_means(dual(in.mean), in.a, in.b));
  const auto right = mean(geo, sum(in.a), sum(in.b));
  chain.leq("sum(A#B) <= (sum AsB)#(sum As'B)", left.hermitian(), middle.hermitian());
  chain.leq("(sum AsB)#(sum As'B) <= (sum A)#(sum B)", middle.hermitian(), right.hermitian());
}

/// (Σ A σ_x B) ♯ (Σ A σ_{1-x} B) on the path family m_{r,·}.
PD path_callebaut_middle(const Instance& in, double r, double x) {
  return mean(MeanDescriptor::geometric(), sum_means(path_mean(r, x), in.a, in.b),
              sum_means(path_mean(r, 1.0 - x), in.a, in.b));
}

void check_path_monotonicity(const Instance& in, Chain& chain, CheckResult& result,
                             const Tolerances& tol) {
  const auto law = LawId::PathMonotonicity;
  require_pairs(law, in);
  require_path_exponent(law, in.path_r);
  if (!in_region(Region::Between, {in.s, in.t}))
    violated(law, "s = " + fmt(in.s) + " is not between t = " + fmt(in.t) + " and 1 - t");

  if (std::abs(in.path_r) >= kGeometricLimit) {
    // Needs the dual of σ_t to be σ_{1-t}.
    const double residual =
        relative_residual(mean(dual(path_mean(in.path_r, in.t)), in.a[0], in.b[0]).hermitian(),
                          mean(path_mean(in.path_r, 1.0 - in.t), in.a[0], in.b[0]).hermitian());
    if (residual > tol.equality) {
      result.status = Status::Skipped;
      result.note = "dual of path(r,t) differs from path(r,1-t): residual " + fmt(residual);
      return;
    }
  }
  chain.leq("G(s) <= G(t)", path_callebaut_middle(in, in.path_r, in.s).hermitian(),
            path_callebaut_middle(in, in.path_r, in.t).hermitian());
}

void check_geo_path_callebaut(const Instance& in, Chain& chain) {
  const auto law = LawId::GeoPathCallebaut;
  require_pairs(law, in);
  require_unit(law, in.s, "s");
  const auto geo = MeanDescriptor::geometric();
  const auto left = sum_means(geo, in.a, in.b);
  const auto middle = mean(geo, sum_wgeo(in.a, in.b, in.s), sum_wgeo(in.a, in.b, 1.0 - in.s));
  const auto right = mean(geo, sum(in.a), sum(in.b));
  chain.leq("sum(A#B) <= (sum A#_sB)#(sum A#_{1-s}B)", left.hermitian(), middle.hermitian());
  chain.leq("(sum A#_sB)#(sum A#_{1-s}B) <= (sum A)#(sum B)", middle.hermitian(),
            right.hermitian());
}

void check_scalar_callebaut(const Instance& in, Chain& chain) {
  const auto law = LawId::ScalarCallebaut;
  if (in.seq_a.empty() || in.seq_a.size() != in.seq_b.size())
    violated(law, "needs two positive sequences of equal nonzero length");
  for (std::size_t j = 0; j < in.seq_a.size(); ++j)
    if (!(in.seq_a[j] > 0.0) || !(in.seq_b[j] > 0.0)) violated(law, "sequences must be positive");
  if (!in_region(Region::Callebaut, {in.s, in.t}))
    violated(law, "(s, t) = (" + fmt(in.s) + ", " + fmt(in.t) +
                      ") outside 0<=t<=s<=1/2 or 1/2<=s<=t<=1");
  for (std::size_t i = 0; i < in.exponents.size(); ++i) {
    require_unit(law, in.exponents[i], "r");
    if (i > 0 && in.exponents[i] < in.exponents[i - 1]) violated(law, "r-grid must be ascending");
  }

  const auto members = scalar_callebaut_members(in.seq_a, in.seq_b, in.s, in.t);
  chain.leq_scalar("(sum sqrt(ab))^2 <= P(s)", members[0], members[1]);
  chain.leq_scalar("P(s) <= P(t)", members[1], members[2]);
  chain.leq_scalar("P(t) <= (sum a)(sum b)", members[2], members[3]);
  for (std::size_t i = 1; i < in.exponents.size(); ++i)
    chain.leq_scalar("f(" + fmt(in.exponents[i - 1]) + ") <= f(" + fmt(in.exponents[i]) + ")",
                     callebaut_f(in.seq_a, in.seq_b, in.exponents[i - 1], in.callebaut_center),
                     callebaut_f(in.seq_a, in.seq_b, in.exponents[i], in.callebaut_center));
}

void check_power_lemma(const Instance& in, Chain& chain) {
  const auto law = LawId::PowerLemma;
  if (in.a.empty()) violated(law, "needs at least one matrix");
  if (in.exponents.empty()) violated(law, "needs an r-grid");
  for (double r : in.exponents) require_unit(law, r, "r");
  for (std::size_t j = 0; j < in.a.size(); ++j) {
    const auto& a = in.a[j];
    const H bound = a.hermitian() + inverse(a).hermitian();
    for (double r : in.exponents) {
      const H lhs = power(a, r).hermitian() + power(a, -r).hermitian();
      chain.leq("A^r + A^-r <= A + A^-1 [" + std::to_string(j) + "] r=" + fmt(r), lhs, bound);
    }
  }
}

/// Σ_j (A_j ♯_x B_j) ⊗ Σ_j (A_j ♯_{1-x} B_j) + the swapped product.
H kron_middle(const Instance& in, double x) {
  return symmetric_kron(sum_wgeo(in.a, in.b, x).hermitian(),
                        sum_wgeo(in.a, in.b, 1.0 - x).hermitian());
}

void check_matrix_callebaut(const Instance& in, Chain& chain) {
  const auto law = LawId::MatrixCallebaut;
  require_pairs(law, in);
  if (!in_region(Region::Callebaut, {in.s, in.t}))
    violated(law, "(s, t) = (" + fmt(in.s) + ", " + fmt(in.t) +
                      ") outside 0<=t<=s<=1/2 or 1/2<=s<=t<=1");
  const H sharp = sum_means(MeanDescriptor::geometric(), in.a, in.b).hermitian();
  const H left = 2.0 * kron(sharp, sharp);
  const H mid_s = kron_middle(in, in.s);
  const H mid_t = kron_middle(in, in.t);
  const H right = symmetric_kron(sum_h(in.a), sum_h(in.b));
  chain.leq("2 S(#)xS(#) <= M(s)", left, mid_s);
  chain.leq("M(s) <= M(t)", mid_s, mid_t);
  chain.leq("M(t) <= sumA x sumB + sumB x sumA", mid_t, right);
}

void check_hadamard_callebaut(const Instance& in, Chain& chain, const Tolerances& tol) {
  const auto law = LawId::HadamardCallebaut;
  const Index n = require_pairs(law, in);
  if (!in_region(Region::Callebaut, {in.s, in.t}))
    violated(law, "(s, t) = (" + fmt(in.s) + ", " + fmt(in.t) +
                      ") outside 0<=t<=s<=1/2 or 1/2<=s<=t<=1");
  const H sharp = sum_means(MeanDescriptor::geometric(), in.a, in.b).hermitian();
  const H xs = sum_wgeo(in.a, in.b, in.s).hermitian();
  const H ys = sum_wgeo(in.a, in.b, 1.0 - in.s).hermitian();
  const H xt = sum_wgeo(in.a, in.b, in.t).hermitian();
  const H yt = sum_wgeo(in.a, in.b, 1.0 - in.t).hermitian();
  const H sa = sum_h(in.a);
  const H sb = sum_h(in.b);

  const H members[] = {hadamard(sharp, sharp), hadamard(xs, ys), hadamard(xt, yt),
                       hadamard(sa, sb)};
  chain.leq("S(#) o S(#) <= X(s) o Y(s)", members[0], members[1]);
  chain.leq("X(s) o Y(s) <= X(t) o Y(t)", members[1], members[2]);
  chain.leq("X(t) o Y(t) <= sumA o sumB", members[2], members[3]);

  if (n * n <= kKronCap) {
    const H tensor[] = {2.0 * kron(sharp, sharp), symmetric_kron(xs, ys), symmetric_kron(xt, yt),
                        symmetric_kron(sa, sb)};
    const char* labels[] = {"left", "M(s)", "M(t)", "right"};
    for (int k = 0; k < 4; ++k)
      chain.equal(std::string("2 x hadamard member = compressed tensor ") + labels[k],
                  2.0 * members[k], diagonal_block_submatrix(tensor[k], n), tol.compression);
  }
}

void check_hadamard_power(const Instance& in, Chain& chain) {
  const auto law = LawId::HadamardPower;
  if (in.a.empty()) violated(law, "needs at least one matrix");
  require_unit(law, in.t, "t");
  const double inv_m = 1.0 / static_cast<double>(in.a.size());
  const auto averaged = [&](double x) {
    std::vector<PD> terms;
    for (const auto& a : in.a) terms.push_back(power(a, x));
    return inv_m * sum_h(terms);
  };
  const H root = averaged(0.5);
  const H left = hadamard(root, root);
  const H middle = hadamard(averaged(in.t), averaged(1.0 - in.t));
  const H id = H::identity(in.a.front().size());
  H right = hadamard(in.a.front().hermitian(), id);
  for (std::size_t j = 1; j < in.a.size(); ++j) right += hadamard(in.a[j].hermitian(), id);
  right *= inv_m;
  chain.leq("(avg A^1/2)o(avg A^1/2) <= (avg A^t)o(avg A^1-t)", left, middle);
  chain.leq("(avg A^t)o(avg A^1-t) <= avg(A o I)", middle, right);
}

void check_interpolation_identity(const Instance& in, Chain& chain) {
  const auto law = LawId::InterpolationIdentity;
  require_pairs(law, in);
  require_path_exponent(law, in.path_r);
  require_unit(law, in.p, "p");
  require_unit(law, in.q, "q");
  require_unit(law, in.weight, "w");
  const double r = in.path_r;
  const double target = (1.0 - in.weight) * in.p + in.weight * in.q;
  for (std::size_t j = 0; j < in.a.size(); ++j) {
    const auto x = mean(path_mean(r, in.p), in.a[j], in.b[j]);
    const auto y = mean(path_mean(r, in.q), in.a[j], in.b[j]);
    chain.equal("(As_pB)s_w(As_qB) = As_{(1-w)p+wq}B [" + std::to_string(j) + "]",
                mean(path_mean(r, in.weight), x, y).hermitian(),
                mean(path_mean(r, target), in.a[j], in.b[j]).hermitian());
  }
}

void check_path_axioms(const Instance& in, Chain& chain) {
  const auto law = LawId::PathAxioms;
  require_pairs(law, in);
  require_path_exponent(law, in.path_r);
  require_unit(law, in.p, "p");
  require_unit(law, in.q, "q");
  require_unit(law, in.t, "t");
  const double r = in.path_r;
  const auto base = MeanDescriptor::power(std::abs(r) < kGeometricLimit ? 0.0 : r);
  for (std::size_t j = 0; j < in.a.size(); ++j) {
    const std::string tag = " [" + std::to_string(j) + "]";
    const auto& a = in.a[j];
    const auto& b = in.b[j];
    const auto at = [&](double t) { return mean(path_mean(r, t), a, b); };
    chain.equal("A s_0 B = A" + tag, at(0.0).hermitian(), a.hermitian());
    chain.equal("A s_1 B = B" + tag, at(1.0).hermitian(), b.hermitian());
    chain.equal("A s_1/2 B = A m_r B" + tag, at(0.5).hermitian(), mean(base, a, b).hermitian());
    chain.equal("(A s_p B) m_r (A s_q B) = A s_(p+q)/2 B" + tag,
                mean(base, at(in.p), at(in.q)).hermitian(), at(0.5 * (in.p + in.q)).hermitian());

    // Norm continuity: the increment over h = 1e-8 must not exceed twice the
    // difference quotient measured at 1e-4, plus rounding.
    const auto here = at(in.t);
    const auto step = [&](double h) {
      const double u = in.t + h <= 1.0 ? in.t + h : in.t - h;
      return relative_residual(at(u).hermitian(), here.hermitian());
    };
    const double coarse = step(1e-4) / 1e-4;
    constexpr double h = 1e-8;
    chain.push_equality("||A s_(t+h) B - A s_t B|| -> 0" + tag, step(h), h * (1.0 + 2.0 * coarse) + 1e-10);
  }
}

void check_wada(const Instance& in, Chain& chain) {
  require_pairs(LawId::Wada, in);
  const auto geo = MeanDescriptor::geometric();
  const auto dual_mean = dual(in.mean);
  for (std::size_t j = 0; j < in.a.size(); ++j) {
    const std::string tag = " [" + std::to_string(j) + "]";
    const H g = mean(geo, in.a[j], in.b[j]).hermitian();
    const H left = kron(g, g);
    const H middle =
        0.5 * symmetric_kron(mean(in.mean, in.a[j], in.b[j]).hermitian(),
                             mean(dual_mean, in.a[j], in.b[j]).hermitian());
    const H right = 0.5 * symmetric_kron(in.a[j].hermitian(), in.b[j].hermitian());
    chain.leq("(A#B)x(A#B) <= 1/2{(AsB)x(As'B)+...}" + tag, left, middle);
    chain.leq("1/2{(AsB)x(As'B)+...} <= 1/2{AxB+BxA}" + tag, middle, right);
  }
}

// ----------------------------------------------------------------- sweeps

struct SweepInfo {
  SweepLaw id;
  const char* name;
  LawId source;
  double lo, hi, center;
};

constexpr SweepInfo kSweeps[] = {
    {SweepLaw::TensorF, "tensor-f", LawId::TensorF, -1.0, 1.0, 0.0},
    {SweepLaw::TensorG, "tensor-g", LawId::TensorG, 0.0, 1.0, 0.5},
    {SweepLaw::MatrixCallebautMiddle, "matrix-callebaut-middle", LawId::MatrixCallebaut, 0.0, 1.0, 0.5},
    {SweepLaw::ScalarCallebautF, "scalar-callebaut-f", LawId::ScalarCallebaut, -1.0, 1.0, 0.0},
};

const SweepInfo& sweep_info(SweepLaw law) {
  for (const auto& s : kSweeps)
    if (s.id == law) return s;
  throw PreconditionError("unknown sweep law");
}

H sweep_value(SweepLaw law, const Instance& in, double t) {
  switch (law) {
    case SweepLaw::TensorF: {
      const auto& a = in.a.front();
      const auto& b = in.b.front();
      return kron(power(a, 1.0 + t).hermitian(), power(b, 1.0 - t).hermitian()) +
             kron(power(a, 1.0 - t).hermitian(), power(b, 1.0 + t).hermitian());
    }
    case SweepLaw::TensorG: {
      const auto& a = in.a.front();
      const auto& b = in.b.front();
      return kron(power(a, t).hermitian(), power(b, 1.0 - t).hermitian()) +
             kron(power(a, 1.0 - t).hermitian(), power(b, t).hermitian());
    }
    case SweepLaw::MatrixCallebautMiddle:
      return kron_middle(in, t);
    case SweepLaw::ScalarCallebautF: {
      DenseMatrix<cplx> v(1, 1);
      v(0, 0) = callebaut_f(in.seq_a, in.seq_b, t, in.callebaut_center);
      return H::symmetrized(v);
    }
  }
  throw PreconditionError("unknown sweep law");
}

void validate_sweep_instance(SweepLaw law, const Instance& in) {
  const auto& info = sweep_info(law);
  if (law == SweepLaw::ScalarCallebautF) {
    if (in.seq_a.empty() || in.seq_a.size() != in.seq_b.size())
      violated(info.source, "needs two positive sequences of equal nonzero length");
    for (std::size_t j = 0; j < in.seq_a.size(); ++j)
      if (!(in.seq_a[j] > 0.0) || !(in.seq_b[j] > 0.0))
        violated(info.source, "sequences must be positive");
  } else {
    require_pairs(info.source, in);
  }
}

void validate_grid(SweepLaw law, const std::vector<double>& grid) {
  const auto& info = sweep_info(law);
  if (grid.empty()) violated(info.source, "empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= info.lo && grid[i] <= info.hi))
      violated(info.source, "grid point " + fmt(grid[i]) + " outside [" + fmt(info.lo) + ", " +
                                fmt(info.hi) + "]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      violated(info.source, "grid must be strictly increasing");
  }
}

void curve_to_links(const Curve& curve, Chain& chain) {
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    if (curve.points[i].link)
      chain.push_loewner("monotone " + fmt(curve.points[i - 1].t) + " -> " + fmt(curve.points[i].t),
                         *curve.points[i].link);
  for (std::size_t k = 0; k < curve.center_links.size(); ++k)
    chain.push_loewner(k == 0 ? "center <= left neighbor" : "center <= right neighbor",
                       curve.center_links[k]);
}

void check_tensor_sweep(LawId law, SweepLaw sweep, const Instance& in, Chain& chain,
                        const Tolerances& tol) {
  const auto grid = in.grid.empty() ? default_grid(law) : in.grid;
  curve_to_links(sweep_law(sweep, in, grid, tol.loewner), chain);
}

std::vector<std::pair<std::string, double>> params_for(LawId law, const Instance& in) {
  switch (law) {
    case LawId::PathMonotonicity:
      return {{"r", in.path_r}, {"s", in.s}, {"t", in.t}};
    case LawId::GeoPathCallebaut:
      return {{"s", in.s}};
    case LawId::ScalarCallebaut:
      return {{"s", in.s}, {"t", in.t}, {"center", in.callebaut_center}};
    case LawId::MatrixCallebaut:
    case LawId::HadamardCallebaut:
      return {{"s", in.s}, {"t", in.t}};
    case LawId::HadamardPower:
      return {{"t", in.t}};
    case LawId::InterpolationIdentity:
      return {{"r", in.path_r}, {"p", in.p}, {"q", in.q}, {"w", in.weight}};
    case LawId::PathAxioms:
      return {{"r", in.path_r}, {"p", in.p}, {"q", in.q}, {"t", in.t}};
    default:
      return {};
  }
}

bool uses_mean(LawId law) {
  switch (law) {
    case LawId::MeanAxioms:
    case LawId::Superadditivity:
    case LawId::SharpIdentity:
    case LawId::CallebautOperator:
    case LawId::Wada:
      return true;
    default:
      return false;
  }
}

}  // namespace

// ------------------------------------------------------------- catalog

const std::vector<LawId>& all_laws() {
  static const std::vector<LawId> laws = [] {
    std::vector<LawId> out;
    for (const auto& info : kLaws) out.push_back(info.id);
    return out;
  }();
  return laws;
}

std::string law_name(LawId law) {
  for (const auto& info : kLaws)
    if (info.id == law) return info.name;
  return "unknown";
}

std::optional<LawId> parse_law(std::string_view name) {
  for (const auto& info : kLaws)
    if (name == info.name) return info.id;
  return std::nullopt;
}

bool is_tensor_law(LawId law) {
  return law == LawId::TensorF || law == LawId::TensorG || law == LawId::MatrixCallebaut ||
         law == LawId::Wada;
}

Index Instance::n() const {
  if (!a.empty()) return a.front().size();
  return seq_a.empty() ? 0 : 1;
}

std::size_t Instance::m() const { return a.empty() ? seq_a.size() : a.size(); }

double Link::slack() const {
  return kind == Kind::Loewner ? verdict.normalized_margin() : -residual;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skipped:
      return "skipped";
  }
  return {};
}

double CheckResult::worst_slack() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& link : links) worst = std::min(worst, link.slack());
  return worst;
}

const Link* CheckResult::find(std::string_view label) const {
  for (const auto& link : links)
    if (link.label == label) return &link;
  return nullptr;
}

std::vector<double> default_grid(LawId law, int per_interval) {
  if (per_interval < 2) throw PreconditionError("default_grid: need >= 2 points per interval");
  const double lo = law == LawId::TensorF ? -1.0 : 0.0;
  const double mid = law == LawId::TensorF ? 0.0 : 0.5;
  const double hi = 1.0;
  std::vector<double> grid;
  const int steps = per_interval - 1;
  for (int i = 0; i <= steps; ++i) grid.push_back(lo + (mid - lo) * i / steps);
  for (int i = 1; i <= steps; ++i) grid.push_back(mid + (hi - mid) * i / steps);
  return grid;
}

CheckResult check_law(LawId law, const Instance& in, const Tolerances& tol) {
  CheckResult result;
  result.law = law;
  result.seed = in.seed;
  result.n = in.n();
  result.m = in.m();
  result.params = params_for(law, in);
  Chain chain(result, tol);

  switch (law) {
    case LawId::MeanAxioms:
      check_mean_axioms(in, chain, tol);
      break;
    case LawId::Superadditivity:
      check_superadditivity(in, chain);
      break;
    case LawId::SharpIdentity:
      check_sharp_identity(in, chain);
      break;
    case LawId::CallebautOperator:
      check_callebaut_operator(in, chain);
      break;
    case LawId::PathMonotonicity:
      check_path_monotonicity(in, chain, result, tol);
      break;
    case LawId::GeoPathCallebaut:
      check_geo_path_callebaut(in, chain);
      break;
    case LawId::ScalarCallebaut:
      check_scalar_callebaut(in, chain);
      break;
    case LawId::PowerLemma:
      check_power_lemma(in, chain);
      break;
    case LawId::TensorF:
      require_pairs(law, in);
      check_tensor_sweep(law, SweepLaw::TensorF, in, chain, tol);
      break;
    case LawId::TensorG:
      require_pairs(law, in);
      check_tensor_sweep(law, SweepLaw::TensorG, in, chain, tol);
      break;
    case LawId::MatrixCallebaut:
      check_matrix_callebaut(in, chain);
      break;
    case LawId::HadamardCallebaut:
      check_hadamard_callebaut(in, chain, tol);
      break;
    case LawId::HadamardPower:
      check_hadamard_power(in, chain);
      break;
    case LawId::InterpolationIdentity:
      check_interpolation_identity(in, chain);
      break;
    case LawId::PathAxioms:
      check_path_axioms(in, chain);
      break;
    case LawId::Wada:
      check_wada(in, chain);
      break;
  }

  if (uses_mean(law)) result.note = "mean=" + to_string(in.mean);
  if (result.status != Status::Skipped) {
    const bool ok = std::all_of(result.links.begin(), result.links.end(),
                                [](const Link& l) { return l.holds; });
    result.status = ok ? Status::Pass : Status::Fail;
  }
  return result;
}

// ------------------------------------------------------------- sampling

int boundary_count(LawId law) {
  switch (law) {
    case LawId::PathMonotonicity:
      return static_cast<int>(boundary_points(Region::Between, 0.0).size());
    case LawId::ScalarCallebaut:
    case LawId::MatrixCallebaut:
    case LawId::HadamardCallebaut:
      return static_cast<int>(boundary_points(Region::Callebaut, 0.0).size());
    case LawId::GeoPathCallebaut:
    case LawId::HadamardPower:
      return 3;
    case LawId::InterpolationIdentity:
      return 2;
    default:
      return 0;
  }
}

MeanDescriptor random_mean(std::mt19937_64& rng, int max_dual_depth) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (max_dual_depth > 0 && unit(rng) < 0.2)
    return MeanDescriptor::dual_of(random_mean(rng, max_dual_depth - 1));
  switch (std::uniform_int_distribution<int>(0, 6)(rng)) {
    case 0:
      return MeanDescriptor::arithmetic();
    case 1:
      return MeanDescriptor::harmonic();
    case 2:
      return MeanDescriptor::geometric();
    case 3:
      return MeanDescriptor::weighted_geometric(unit(rng));
    case 4:
      return MeanDescriptor::power(2.0 * unit(rng) - 1.0);
    case 5: {
      const double r = 2.0 * unit(rng) - 1.0;
      return MeanDescriptor::power_path(r, unit(rng));
    }
    default:
      return MeanDescriptor::geometric_path(unit(rng));
  }
}

Instance sample_instance(LawId law, const TrialShape& shape, std::uint64_t seed, int boundary) {
  EnsembleSpec spec;
  spec.n = shape.n;
  spec.m = shape.m;
  spec.field = shape.field;
  spec.kappa_max = shape.kappa_max;
  spec.seed = seed;
  Ensemble ens(spec);
  auto& rng = ens.engine();

  Instance in;
  in.seed = seed;
  const bool forced = boundary >= 0 && boundary < boundary_count(law);

  const auto pairs = [&] {
    in.a = ens.pd_tuple();
    in.b = ens.pd_tuple();
  };
  const auto region_point = [&](Region region) {
    RegionPoint pt;
    if (forced) {
      pt = boundary_points(region, ens.uniform(0.0, 1.0))[static_cast<std::size_t>(boundary)];
    } else {
      pt = sample_region(region, rng);
    }
    in.s = pt.s;
    in.t = pt.t;
  };

  switch (law) {
    case LawId::MeanAxioms:
      for (int j = 0; j < shape.m; ++j) {
        auto [a, a_hi] = ens.ordered_pair();
        auto [b, b_hi] = ens.ordered_pair();
        in.a.push_back(std::move(a));
        in.a_upper.push_back(std::move(a_hi));
        in.b.push_back(std::move(b));
        in.b_upper.push_back(std::move(b_hi));
      }
      in.congruence = ens.invertible(2.0);
      in.mean = random_mean(rng);
      break;
    case LawId::Superadditivity:
    case LawId::SharpIdentity:
    case LawId::CallebautOperator:
    case LawId::Wada:
      pairs();
      in.mean = random_mean(rng);
      break;
    case LawId::PathMonotonicity:
      pairs();
      // One in five trials exercises a power path, which the checker skips
      // unless its dual is the reflected path.
      in.path_r = (!forced && ens.uniform(0.0, 1.0) < 0.2) ? ens.uniform(-1.0, 1.0) : 0.0;
      if (forced) {
        region_point(Region::Between);
      } else {
        in.t = ens.uniform(0.0, 1.0);
        in.s = sample_between(in.t, rng);
      }
      break;
    case LawId::GeoPathCallebaut:
      pairs();
      in.s = forced ? 0.5 * boundary : ens.uniform(0.0, 1.0);
      break;
    case LawId::ScalarCallebaut: {
      const auto length = static_cast<std::size_t>(ens.uniform_int(1, 8));
      in.seq_a = ens.positive_sequence(length);
      in.seq_b = ens.positive_sequence(length);
      region_point(Region::Callebaut);
      in.callebaut_center = ens.uniform(0.0, 1.0);
      for (int i = 0; i <= 8; ++i) in.exponents.push_back(i / 8.0);
      break;
    }
    case LawId::PowerLemma:
      in.a = ens.pd_tuple();
      for (int i = 0; i <= 10; ++i) in.exponents.push_back(i / 10.0);
      break;
    case LawId::TensorF:
    case LawId::TensorG:
      in.a = {ens.pd()};
      in.b = {ens.pd()};
      in.grid = default_grid(law);
      break;
    case LawId::MatrixCallebaut:
    case LawId::HadamardCallebaut:
      pairs();
      region_point(Region::Callebaut);
      break;
    case LawId::HadamardPower:
      in.a = ens.pd_tuple();
      in.t = forced ? 0.5 * boundary : ens.uniform(0.0, 1.0);
      break;
    case LawId::InterpolationIdentity:
      pairs();
      in.path_r = ens.uniform(0.0, 1.0) < 0.5 ? 0.0 : ens.uniform(-1.0, 1.0);
      in.p = ens.uniform(0.0, 1.0);
      in.q = ens.uniform(0.0, 1.0);
      in.weight = forced ? static_cast<double>(boundary) : ens.uniform(0.0, 1.0);
      break;
    case LawId::PathAxioms:
      pairs();
      in.path_r = ens.uniform(0.0, 1.0) < 0.5 ? 0.0 : ens.uniform(-1.0, 1.0);
      in.p = ens.uniform(0.0, 1.0);
      in.q = ens.uniform(0.0, 1.0);
      in.t = ens.uniform(0.0, 1.0);
      break;
  }
  return in;
}

// --------------------------------------------------------------- sweeps

std::string sweep_name(SweepLaw law) { return sweep_info(law).name; }

std::optional<SweepLaw> parse_sweep(std::string_view name) {
  for (const auto& s : kSweeps)
    if (name == s.name) return s.id;
  return std::nullopt;
}

LawId sweep_source(SweepLaw law) { return sweep_info(law).source; }

double sweep_center(SweepLaw law) { return sweep_info(law).center; }

Curve sweep_law(SweepLaw law, const Instance& in, const std::vector<double>& grid, double tol) {
  validate_sweep_instance(law, in);
  validate_grid(law, grid);
  const double center = sweep_center(law);

  Curve curve;
  curve.law = law;
  std::vector<H> values;
  values.reserve(grid.size());
  for (double t : grid) {
    values.push_back(sweep_value(law, in, t));
    const auto spectrum = eig_hermitian(values.back()).eigenvalues;
    CurvePoint pt;
    pt.t = t;
    pt.trace = values.back().trace();
    pt.lambda_min = spectrum(0);
    pt.lambda_max = spectrum(spectrum.size() - 1);
    curve.points.push_back(pt);
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i - 1] >= center)
      curve.points[i].link = loewner_leq(values[i - 1], values[i], tol);
    else if (grid[i] <= center)
      curve.points[i].link = loewner_leq(values[i], values[i - 1], tol);
  }
  const auto it = std::find(grid.begin(), grid.end(), center);
  if (it != grid.end()) {
    const auto c = static_cast<std::size_t>(it - grid.begin());
    if (c > 0) curve.center_links.push_back(loewner_leq(values[c], values[c - 1], tol));
    if (c + 1 < grid.size()) curve.center_links.push_back(loewner_leq(values[c], values[c + 1], tol));
  }
  return curve;
}

bool Curve::monotone() const {
  for (const auto& pt : points)
    if (pt.link && !pt.link->holds) return false;
  return std::all_of(center_links.begin(), center_links.end(),
                     [](const LoewnerVerdict& v) { return v.holds; });
}

std::string Curve::to_csv() const {
  std::ostringstream os;
  os << "t,trace,lambda_min,lambda_max,monotone_link_margin\n";
  char buf[160];
  for (const auto& pt : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", pt.t, pt.trace, pt.lambda_min,
                  pt.lambda_max);
    os << buf;
    if (pt.link) {
      std::snprintf(buf, sizeof buf, "%.17g", pt.link->margin);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------- closed-form members

std::vector<double> scalar_callebaut_members(const std::vector<double>& a,
                                             const std::vector<double>& b, double s, double t) {
  if (a.size() != b.size()) throw DimensionError("scalar_callebaut_members: length mismatch");
  const auto product = [&](double x) {
    double left = 0.0, right = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      left += std::pow(a[j], x) * std::pow(b[j], 1.0 - x);
      right += std::pow(a[j], 1.0 - x) * std::pow(b[j], x);
    }
    return left * right;
  };
  double root = 0.0, sa = 0.0, sb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    root += std::sqrt(a[j] * b[j]);
    sa += a[j];
    sb += b[j];
  }
  return {root * root, product(s), product(t), sa * sb};
}

double callebaut_f(const std::vector<double>& a, const std::vector<double>& b, double r,
                   double c) {
  if (a.size() != b.size()) throw DimensionError("callebaut_f: length mismatch");
  double left = 0.0, right = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    left += std::pow(a[j], c + r) * std::pow(b[j], c - r);
    right += std::pow(a[j], c - r) * std::pow(b[j], c + r);
  }
  return left * right;
}

}  // namespace meanscope
