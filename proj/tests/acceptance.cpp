// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanscope/ensembles.hpp"
#include "meanscope/harness.hpp"
#include "meanscope/laws.hpp"
#include "meanscope/matrix_functions.hpp"
#include "meanscope/means.hpp"

using namespace meanscope;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240611;

int g_failed = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const LawEntry& entry(const std::string& name) {
  static const auto registry = builtin_registry();
  for (const auto& e : registry)
    if (e.name == name) return e;
  throw std::runtime_error("no law " + name);
}

struct Tally {
  std::size_t trials = 0, fails = 0, skips = 0, errors = 0;
  std::string first_error;

  bool clean() const { return fails == 0 && errors == 0; }
  std::string summary() const {
    std::string s = std::to_string(trials) + " trials, " + std::to_string(fails) + " fail";
    if (skips) s += ", " + std::to_string(skips) + " skip";
    if (errors) s += ", " + std::to_string(errors) + " error (" + first_error + ")";
    return s;
  }
};

using Mutate = std::function<void(Instance&, std::size_t)>;
using Visit = std::function<void(const CheckResult&, const Instance&)>;

/// Runs `trials` harness trials of `law` (boundary instances first), with an
/// optional instance override, and hands every result to `visit`.
Tally run_suite(const std::string& law, std::size_t trials, const Mutate& mutate = {},
                const Visit& visit = {}, std::optional<Index> n = std::nullopt) {
  VerifyConfig c;
  c.seed = kSeed;
  c.n = n;
  const auto& e = entry(law);
  const auto id = *parse_law(law);
  Tally t;
  for (std::size_t k = 0; k < trials; ++k) {
    ++t.trials;
    try {
      Instance in = trial_instance(c, e, k);
      if (mutate) mutate(in, k);
      const auto r = check_law(id, in, c.tol);
      if (r.status == Status::Fail) ++t.fails;
      if (r.status == Status::Skipped) ++t.skips;
      if (visit) visit(r, in);
    } catch (const std::exception& ex) {
      if (t.errors++ == 0) t.first_error = ex.what();
    }
  }
  return t;
}

double link_error(const Link& l) {
  return l.kind == Link::Kind::Loewner ? std::abs(l.verdict.normalized_margin()) : l.residual;
}

// ------------------------------------------------------------ criteria

void eigensolver_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Index n = 1 + k % 16;
    DenseMatrix<cplx> m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    const HermitianMatrix a = HermitianMatrix::symmetrized(m + m.adjoint());
    const auto d = eig_hermitian(a);
    const double scale = std::max(1.0, a.frobenius_norm());
    const double recon = (d.reconstruct() - a.matrix()).norm() / scale;
    const double unit =
        (d.unitary.adjoint() * d.unitary - DenseMatrix<cplx>::Identity(n, n)).norm() / scale;
    worst = std::max({worst, recon, unit});
  }
  const double secs = seconds_since(t0);
  report(1, worst <= 1e-12 && secs < 5.0,
         "eigensolver: 100 matrices n<=16, max residual " + num(worst) + ", " + num(secs) + " s");
}

void sharp_identity() {
  const std::vector<MeanDescriptor> family{
      MeanDescriptor::arithmetic(), MeanDescriptor::harmonic(), MeanDescriptor::power(0.5),
      MeanDescriptor::power(-0.5), MeanDescriptor::weighted_geometric(0.25)};
  double worst = 0.0;
  auto t = run_suite(
      "sharp-identity", 500,
      [&](Instance& in, std::size_t k) { in.mean = family[k % family.size()]; },
      [&](const CheckResult& r, const Instance&) {
        for (const auto& l : r.links) worst = std::max(worst, l.residual);
      });
  report(2, t.clean() && worst <= 1e-9,
         "sharp identity: " + t.summary() + ", max residual " + num(worst));
}

void callebaut_chains() {
  auto a = run_suite("callebaut-operator", 500);
  auto b = run_suite("geo-path-callebaut", 500);
  report(3, a.clean() && b.clean(),
         "operator Callebaut chain: " + a.summary() + "; geometric-path chain: " + b.summary());
}

void path_monotonicity() {
  auto t = run_suite("path-monotonicity", 500, [](Instance& in, std::size_t) { in.path_r = 0.0; });

  // Boundary points where G(s) = G(t) is forced.
  double worst = 0.0;
  std::size_t forced = 0;
  auto boundary = run_suite(
      "path-monotonicity", 100,
      [](Instance& in, std::size_t k) {
        in.path_r = 0.0;
        std::mt19937_64 rng(child_seed(kSeed + 1, k));
        in.t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        in.s = k % 2 == 0 ? in.t : 1.0 - in.t;
      },
      [&](const CheckResult& r, const Instance&) {
        for (const auto& l : r.links) {
          worst = std::max(worst, std::abs(l.verdict.normalized_margin()));
          ++forced;
        }
      });
  report(4, t.clean() && t.skips == 0 && boundary.clean() && forced == 100 && worst <= 1e-8,
         "geometric path: " + t.summary() + "; s in {t, 1-t}: " + std::to_string(forced) +
             " links, max |margin|/scale " + num(worst));
}

void power_lemma() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  double worst_zero = 0.0, worst_one = 0.0;
  std::size_t zero_ok = 0, zero_total = 0;
  auto t = run_suite(
      "power-lemma", 500, [&](Instance& in, std::size_t) { in.exponents = grid; },
      [&](const CheckResult& r, const Instance& in) {
        for (std::size_t j = 0; j < in.a.size(); ++j) {
          const auto& at0 = r.links[j * grid.size()].verdict;
          const auto& at1 = r.links[j * grid.size() + grid.size() - 1].verdict;
          const double e0 = std::abs(at0.margin) / std::max(1.0, at0.scale);
          const double e1 = std::abs(at1.margin) / std::max(1.0, at1.scale);
          worst_zero = std::max(worst_zero, e0);
          worst_one = std::max(worst_one, e1);
          zero_ok += e0 <= 1e-9;
          ++zero_total;
        }
      });
  report(5, t.clean() && worst_one <= 1e-9 && worst_zero <= 1e-9,
         "power lemma: " + t.summary() + "; r=1 max |margin|/scale " + num(worst_one) +
             "; r=0 max |margin|/scale " + num(worst_zero) + " (" + std::to_string(zero_ok) +
             "/" + std::to_string(zero_total) + " within 1e-9)");
}

void tensor_sweeps() {
  std::size_t curves = 0, bad = 0, centers = 0, errors = 0;
  for (SweepLaw law : {SweepLaw::TensorF, SweepLaw::TensorG}) {
    const auto source = sweep_source(law);
    const auto grid = default_grid(source, 9);
    for (std::uint64_t k = 0; k < 100; ++k) {
      try {
        TrialShape shape{static_cast<Index>(1 + k % 3), 1, Field::Complex, 1e4};
        const auto in = sample_instance(source, shape, child_seed(kSeed, k));
        const auto curve = sweep_law(law, in, grid, 1e-8);
        ++curves;
        if (!curve.monotone()) ++bad;
        bool center = curve.center_links.size() == 2;
        for (const auto& v : curve.center_links) center = center && v.holds;
        centers += center;
      } catch (const std::exception&) {
        ++errors;
      }
    }
  }
  report(6, bad == 0 && errors == 0 && centers == curves && curves == 200,
         "tensor sweeps: " + std::to_string(curves) + " curves (f and g), " +
             std::to_string(bad) + " non-monotone, center minimum confirmed " +
             std::to_string(centers) + "/" + std::to_string(curves));
}

void kronecker_chain() {
  std::size_t lower = 0, upper = 0;
  auto t = run_suite("matrix-callebaut", 300, {}, [&](const CheckResult&, const Instance& in) {
    if (in.s <= 0.5 && in.t <= 0.5) ++lower;
    if (in.s >= 0.5 && in.t >= 0.5) ++upper;
  });
  double collapse = 0.0;
  auto eq = run_suite(
      "matrix-callebaut", 50, [](Instance& in, std::size_t) { in.b = in.a; },
      [&](const CheckResult& r, const Instance&) {
        for (const auto& l : r.links) collapse = std::max(collapse, link_error(l));
      });
  report(7, t.clean() && lower > 0 && upper > 0 && eq.clean() && collapse <= 1e-9,
         "Kronecker chain: " + t.summary() + " (" + std::to_string(lower) + " lower, " +
             std::to_string(upper) + " upper region); A_j=B_j max |margin|/scale " +
             num(collapse));
}

void hadamard_chains() {
  double compression = 0.0;
  std::size_t compared = 0;
  auto h = run_suite("hadamard-callebaut", 300, {}, [&](const CheckResult& r, const Instance&) {
    for (const auto& l : r.links)
      if (l.kind == Link::Kind::Equality) {
        compression = std::max(compression, l.residual);
        ++compared;
      }
  });
  auto p = run_suite("hadamard-power", 300);
  report(8, h.clean() && p.clean() && compared > 0 && compression <= 1e-13,
         "Hadamard chain: " + h.summary() + ", compression residual " + num(compression) +
             " over " + std::to_string(compared) + " members; power form: " + p.summary());
}

void wada() {
  auto t = run_suite("wada", 300);
  report(9, t.clean(), "Wada: " + t.summary());
}

void scalar_callebaut() {
  auto t = run_suite("scalar-callebaut", 1000, [](Instance& in, std::size_t k) {
    Ensemble ens({1, 1, Field::Real, 1e4, child_seed(kSeed + 2, k)});
    const std::size_t m = 1 + k % 8;
    in.seq_a = ens.positive_sequence(m);
    in.seq_b = ens.positive_sequence(m);
  });
  double spread = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    Ensemble ens({1, 1, Field::Real, 1e4, child_seed(kSeed + 3, k)});
    const std::size_t m = 1 + k % 8;
    const auto a = ens.positive_sequence(m);
    const double c = ens.uniform(0.01, 100.0);
    std::vector<double> b;
    for (double x : a) b.push_back(c * x);
    auto region = sample_region(Region::Callebaut, ens.engine());
    const auto members = scalar_callebaut_members(a, b, region.s, region.t);
    for (double v : members) spread = std::max(spread, std::abs(v - members[0]) / members[0]);
  }
  report(10, t.clean() && spread <= 1e-12,
         "scalar Callebaut: " + t.summary() + "; proportional sequences max relative spread " +
             num(spread));
}

void axioms() {
  std::string detail;
  bool ok = true;
  for (const char* law :
       {"mean-axioms", "superadditivity", "interpolation-identity", "path-axioms"}) {
    auto t = run_suite(law, 500);
    ok = ok && t.clean();
    detail += std::string(detail.empty() ? "" : "; ") + law + ": " + t.summary();
  }
  report(11, ok, detail);
}

int cli(std::vector<std::string> args, const std::vector<LawEntry>& registry,
        std::string* out_text = nullptr) {
  args.insert(args.begin(), "meanscope");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), registry, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

void cli_contract() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path();
  const auto suite_path = (dir / "meanscope_acceptance_suite.json").string();
  const auto broken_path = (dir / "meanscope_acceptance_broken.json").string();

  auto registry = builtin_registry();
  const int suite_code = cli({"verify", "--seed", std::to_string(kSeed), "--out", suite_path}, registry);

  // Sign-flipped superadditivity: every Loewner margin negated.
  LawEntry flipped = entry("superadditivity");
  flipped.name = "flipped-superadditivity";
  flipped.check = [inner = flipped.check](const Instance& in, const Tolerances& tol) {
    auto r = inner(in, tol);
    r.status = Status::Pass;
    for (auto& l : r.links) {
      l.verdict = make_verdict(-l.verdict.margin, l.verdict.scale, l.verdict.tolerance);
      l.holds = l.verdict.holds;
      if (!l.holds) r.status = Status::Fail;
    }
    return r;
  };
  registry.push_back(flipped);
  const int broken_code = cli({"verify", "--laws", flipped.name, "--trials", "50", "--seed",
                               std::to_string(kSeed), "--out", broken_path},
                              registry);

  bool reproduced = false;
  std::string repro_detail = "no worst trial";
  try {
    std::ifstream f(broken_path);
    const auto report_json = nlohmann::json::parse(f);
    const auto& worst = report_json.at("laws").at(0).at("worst");
    const auto trial = worst.at("trial").get<std::size_t>();
    const double margin = worst.at("margin").get<double>();
    std::string text;
    const int repro_code = cli({"repro", "--law", flipped.name, "--trial", std::to_string(trial),
                                "--seed", std::to_string(kSeed)},
                               registry, &text);
    const double again = nlohmann::json::parse(text).at("margin").get<double>();
    reproduced = repro_code == kExitViolation && std::abs(again - margin) <= 1e-12;
    repro_detail = "worst trial " + std::to_string(trial) + " margin " + num(margin) +
                   " reproduced to " + num(std::abs(again - margin));
  } catch (const std::exception& ex) {
    repro_detail = ex.what();
  }
  fs::remove(suite_path);
  fs::remove(broken_path);
  report(12, suite_code == kExitOk && broken_code == kExitViolation && reproduced,
         "CLI: default suite exit " + std::to_string(suite_code) + ", flipped law exit " +
             std::to_string(broken_code) + ", " + repro_detail);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  eigensolver_oracle();
  sharp_identity();
  callebaut_chains();
  path_monotonicity();
  power_lemma();
  tensor_sweeps();
  kronecker_chain();
  hadamard_chains();
  wada();
  scalar_callebaut();
  axioms();
  cli_contract();
  std::printf("%d of 12 criteria failed, %.1f s\n", g_failed, seconds_since(t0));
  return g_failed == 0 ? 0 : 1;
}
