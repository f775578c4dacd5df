#include "meanscope/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "meanscope/matrix_io.hpp"

namespace meanscope {

using nlohmann::json;

namespace {

std::string full_precision(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

json record_to_json(const TrialRecord& r) {
  json j = {{"trial", r.trial}, {"seed", r.seed}, {"n", r.n}, {"m", r.m}, {"margin", r.margin}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

TrialRecord record_from_json(const json& j) {
  TrialRecord r;
  r.trial = j.at("trial").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.n = j.at("n").get<Index>();
  r.m = j.at("m").get<int>();
  r.margin = j.at("margin").is_null() ? std::nan("") : j.at("margin").get<double>();
  r.error = j.value("error", std::string());
  return r;
}

}  // namespace

// ------------------------------------------------------------- registry

std::vector<LawEntry> builtin_registry() {
  std::vector<LawEntry> out;
  for (LawId law : all_laws()) {
    LawEntry e;
    e.name = law_name(law);
    e.tensor = is_tensor_law(law);
    e.boundary_count = boundary_count(law);
    e.sample = [law](const TrialShape& shape, std::uint64_t seed, int boundary) {
      return sample_instance(law, shape, seed, boundary);
    };
    e.check = [law](const Instance& in, const Tolerances& tol) { return check_law(law, in, tol); };
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<const LawEntry*> select_laws(const std::vector<std::string>& names,
                                         const std::vector<LawEntry>& registry) {
  std::vector<const LawEntry*> out;
  for (const auto& name : names) {
    if (name == "all") {
      for (const auto& e : registry) out.push_back(&e);
      continue;
    }
    const auto it = std::find_if(registry.begin(), registry.end(),
                                 [&](const LawEntry& e) { return e.name == name; });
    if (it == registry.end()) throw PreconditionError("unknown law '" + name + "'");
    out.push_back(&*it);
  }
  return out;
}

// --------------------------------------------------------------- config

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw PreconditionError("grid must be a:b:step, got '" + text + "'");
  double lo, hi, step;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    step = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw PreconditionError("grid must be a:b:step, got '" + text + "'");
  }
  if (!(step > 0.0) || !(hi >= lo)) throw PreconditionError("grid needs step > 0 and b >= a");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  for (long i = 0; i <= count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  if (std::abs(grid.back() - hi) < 1e-9 * std::max(1.0, std::abs(hi))) grid.back() = hi;
  return grid;
}

json config_to_json(const VerifyConfig& c) {
  json j;
  j["laws"] = c.laws;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["n"] = c.n ? json(*c.n) : json("cycle");
  j["m"] = c.m ? json(*c.m) : json("cycle");
  j["field"] = to_string(c.field);
  j["kappa_max"] = c.kappa_max;
  j["tol"] = c.tol.loewner;
  j["tolerances"] = {{"loewner", c.tol.loewner},
                     {"equality", c.tol.equality},
                     {"scalar", c.tol.scalar},
                     {"compression", c.tol.compression}};
  j["grid"] = c.grid ? json(*c.grid) : json(nullptr);
  return j;
}

void apply_config_json(const json& j, VerifyConfig& c) {
  if (!j.is_object()) throw PreconditionError("config: top level must be an object");
  try {
    if (j.contains("laws")) {
      const auto& laws = j.at("laws");
      c.laws = laws.is_string() ? split(laws.get<std::string>(), ',')
                                : laws.get<std::vector<std::string>>();
    }
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("n") && j.at("n").is_number()) c.n = j.at("n").get<Index>();
    if (j.contains("m") && j.at("m").is_number()) c.m = j.at("m").get<int>();
    if (j.contains("field")) c.field = parse_field(j.at("field").get<std::string>());
    if (j.contains("kappa_max")) c.kappa_max = j.at("kappa_max").get<double>();
    if (j.contains("tol")) c.tol.loewner = j.at("tol").get<double>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tol.loewner = t.value("loewner", c.tol.loewner);
      c.tol.equality = t.value("equality", c.tol.equality);
      c.tol.scalar = t.value("scalar", c.tol.scalar);
      c.tol.compression = t.value("compression", c.tol.compression);
    }
    if (j.contains("grid") && !j.at("grid").is_null()) {
      const auto& g = j.at("grid");
      c.grid = g.is_string() ? parse_grid(g.get<std::string>()) : g.get<std::vector<double>>();
    }
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
}

// --------------------------------------------------------------- trials

TrialShape trial_shape(const VerifyConfig& c, const LawEntry& law, std::size_t trial) {
  TrialShape shape;
  shape.n = c.n ? *c.n : static_cast<Index>(1 + trial % (law.tensor ? 3 : 6));
  shape.m = c.m ? *c.m : static_cast<int>(1 + trial % 4);
  shape.field = c.field;
  shape.kappa_max = c.kappa_max;
  return shape;
}

std::uint64_t trial_seed(const VerifyConfig& c, std::size_t trial) {
  return child_seed(c.seed, trial);
}

Instance trial_instance(const VerifyConfig& c, const LawEntry& law, std::size_t trial) {
  const int boundary = trial < static_cast<std::size_t>(law.boundary_count)
                           ? static_cast<int>(trial)
                           : -1;
  auto in = law.sample(trial_shape(c, law, trial), trial_seed(c, trial), boundary);
  if (c.grid && (law.name == "tensor-f" || law.name == "tensor-g")) in.grid = *c.grid;
  return in;
}

CheckResult run_trial(const VerifyConfig& c, const LawEntry& law, std::size_t trial) {
  return law.check(trial_instance(c, law, trial), c.tol);
}

// --------------------------------------------------------------- verify

Report run_verify(const VerifyConfig& c, const std::vector<LawEntry>& registry) {
  const auto start = std::chrono::steady_clock::now();
  const auto laws = select_laws(c.laws, registry);

  Report report;
  report.config = config_to_json(c);
  for (const LawEntry* law : laws) {
    struct Slot {
      Status status = Status::Fail;
      TrialRecord record;
      bool has_links = false;
    };
    std::vector<Slot> slots(c.trials);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t k = next++; k < c.trials; k = next++) {
        auto& slot = slots[k];
        const auto shape = trial_shape(c, *law, k);
        slot.record.trial = k;
        slot.record.seed = trial_seed(c, k);
        slot.record.n = shape.n;
        slot.record.m = shape.m;
        try {
          const auto result = run_trial(c, *law, k);
          slot.status = result.status;
          slot.has_links = !result.links.empty();
          slot.record.margin = result.worst_slack();
        } catch (const std::exception& e) {
          slot.status = Status::Fail;
          slot.record.margin = std::nan("");
          slot.record.error = e.what();
        }
      }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(c.jobs, static_cast<unsigned>(c.trials)));
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    }

    LawSummary summary;
    summary.law = law->name;
    summary.trials = c.trials;
    for (const auto& slot : slots) {
      switch (slot.status) {
        case Status::Pass:
          ++summary.passes;
          break;
        case Status::Skipped:
          ++summary.skips;
          break;
        case Status::Fail:
          ++summary.fails;
          summary.failures.push_back(slot.record);
          break;
      }
      if (slot.status == Status::Skipped || !slot.has_links) continue;
      if (!summary.worst || slot.record.margin < summary.worst->margin) summary.worst = slot.record;
    }
    report.laws.push_back(std::move(summary));
  }

  const bool failed = std::any_of(report.laws.begin(), report.laws.end(),
                                  [](const LawSummary& s) { return s.fails > 0; });
  report.exit_status = failed ? kExitViolation : kExitOk;
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json to_json(const Report& r) {
  json laws = json::array();
  for (const auto& s : r.laws) {
    json failures = json::array();
    for (const auto& f : s.failures) failures.push_back(record_to_json(f));
    laws.push_back({{"law", s.law},
                    {"trials", s.trials},
                    {"passes", s.passes},
                    {"fails", s.fails},
                    {"skips", s.skips},
                    {"worst", s.worst ? record_to_json(*s.worst) : json(nullptr)},
                    {"failures", failures}});
  }
  return {{"tool", "meanscope"},
          {"version", r.version},
          {"config", r.config},
          {"laws", laws},
          {"wall_clock_seconds", r.wall_clock_seconds},
          {"exit_status", r.exit_status}};
}

Report report_from_json(const json& j) {
  Report r;
  r.version = j.at("version").get<std::string>();
  r.config = j.at("config");
  for (const auto& l : j.at("laws")) {
    LawSummary s;
    s.law = l.at("law").get<std::string>();
    s.trials = l.at("trials").get<std::size_t>();
    s.passes = l.at("passes").get<std::size_t>();
    s.fails = l.at("fails").get<std::size_t>();
    s.skips = l.at("skips").get<std::size_t>();
    if (!l.at("worst").is_null()) s.worst = record_from_json(l.at("worst"));
    for (const auto& f : l.at("failures")) s.failures.push_back(record_from_json(f));
    r.laws.push_back(std::move(s));
  }
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  r.exit_status = j.at("exit_status").get<int>();
  return r;
}

// ---------------------------------------------------------------- repro

std::string repro_to_json(const std::string& law, const CheckResult& result, const Instance& in,
                          std::size_t trial) {
  std::ostringstream os;
  const auto matrices = [&](const std::vector<PDMatrix>& list) {
    std::string s = "[";
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (j) s += ",\n      ";
      s += matrix_to_json(list[j].hermitian());
    }
    return s + "]";
  };
  const auto numbers = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + full_precision(v[i]);
    return s + "]";
  };

  json params = json::object();
  for (const auto& [k, v] : result.params) params[k] = v;

  os << "{\n";
  os << "  \"law\": " << json(law).dump() << ",\n";
  os << "  \"trial\": " << trial << ",\n";
  os << "  \"seed\": " << result.seed << ",\n";
  os << "  \"n\": " << result.n << ",\n";
  os << "  \"m\": " << result.m << ",\n";
  os << "  \"status\": " << json(to_string(result.status)).dump() << ",\n";
  os << "  \"margin\": " << full_precision(result.worst_slack()) << ",\n";
  os << "  \"note\": " << json(result.note).dump() << ",\n";
  os << "  \"params\": " << params.dump() << ",\n";
  os << "  \"instance\": {\n";
  os << "    \"a\": " << matrices(in.a) << ",\n";
  os << "    \"b\": " << matrices(in.b) << ",\n";
  os << "    \"a_upper\": " << matrices(in.a_upper) << ",\n";
  os << "    \"b_upper\": " << matrices(in.b_upper) << ",\n";
  if (in.congruence) {
    // General (non-Hermitian) matrix: rows of [re, im].
    os << "    \"congruence\": [";
    for (Index i = 0; i < in.congruence->rows(); ++i) {
      os << (i ? ", [" : "[");
      for (Index k = 0; k < in.congruence->cols(); ++k)
        os << (k ? ", " : "") << '[' << full_precision((*in.congruence)(i, k).real()) << ", "
           << full_precision((*in.congruence)(i, k).imag()) << ']';
      os << ']';
    }
    os << "],\n";
  }
  os << "    \"seq_a\": " << numbers(in.seq_a) << ",\n";
  os << "    \"seq_b\": " << numbers(in.seq_b) << ",\n";
  os << "    \"exponents\": " << numbers(in.exponents) << ",\n";
  os << "    \"grid\": " << numbers(in.grid) << "\n";
  os << "  },\n";
  os << "  \"links\": [";
  for (std::size_t i = 0; i < result.links.size(); ++i) {
    const auto& l = result.links[i];
    os << (i ? ",\n    " : "\n    ") << "{\"label\": " << json(l.label).dump()
       << ", \"kind\": \"" << (l.kind == Link::Kind::Loewner ? "loewner" : "equality")
       << "\", \"holds\": " << (l.holds ? "true" : "false");
    if (l.kind == Link::Kind::Loewner)
      os << ", \"margin\": " << full_precision(l.verdict.margin)
         << ", \"scale\": " << full_precision(l.verdict.scale);
    else
      os << ", \"residual\": " << full_precision(l.residual);
    os << ", \"tolerance\": " << full_precision(l.tolerance) << "}";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

// ------------------------------------------------------------------ CLI

namespace {

struct CommonFlags {
  std::string laws, field, grid, out, config;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Index n = 0;
  int m = 0;
  double kappa = 0, tol = 0, eq_tol = 0;
  unsigned jobs = 1;
  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App& app, bool with_laws) {
    if (with_laws) opts["laws"] = app.add_option("--laws", laws, "comma list of laws, or 'all'");
    opts["trials"] = app.add_option("--trials", trials, "trials per law");
    opts["seed"] = app.add_option("--seed", seed, "master seed (fallback: $MEANSCOPE_SEED)");
    opts["n"] = app.add_option("--n", n, "matrix dimension (default: cycle)");
    opts["m"] = app.add_option("--m", m, "tuple length (default: cycle)");
    opts["field"] = app.add_option("--field", field, "real | complex");
    opts["kappa"] = app.add_option("--kappa-max", kappa, "condition-number bound");
    opts["tol"] = app.add_option("--tol", tol, "Loewner tolerance");
    opts["eq_tol"] = app.add_option("--eq-tol", eq_tol, "equality tolerance");
    opts["grid"] = app.add_option("--grid", grid, "t-grid a:b:step");
    opts["out"] = app.add_option("--out", out, "output path");
    opts["config"] = app.add_option("--config", config, "JSON config (flags override)");
    opts["jobs"] = app.add_option("--jobs", jobs, "worker threads");
  }

  bool given(const std::string& key) const {
    const auto it = opts.find(key);
    return it != opts.end() && it->second->count() > 0;
  }

  VerifyConfig resolve() const {
    VerifyConfig c;
    bool seed_set = false;
    if (given("config")) {
      std::ifstream in(config);
      if (!in) throw PreconditionError("cannot open config '" + config + "'");
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw PreconditionError(std::string("config: ") + e.what());
      }
      apply_config_json(j, c);
      seed_set = j.contains("seed");
    }
    if (given("laws")) c.laws = split(laws, ',');
    if (given("trials")) c.trials = trials;
    if (given("seed")) {
      c.seed = seed;
      seed_set = true;
    }
    if (!seed_set) {
      if (const char* env = std::getenv("MEANSCOPE_SEED")) {
        try {
          c.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw PreconditionError("MEANSCOPE_SEED is not an unsigned integer");
        }
      }
    }
    if (given("n")) {
      if (n < 1) throw PreconditionError("--n must be >= 1");
      c.n = n;
    }
    if (given("m")) {
      if (m < 1) throw PreconditionError("--m must be >= 1");
      c.m = m;
    }
    if (given("field")) c.field = parse_field(field);
    if (given("kappa")) c.kappa_max = kappa;
    if (given("tol")) c.tol.loewner = tol;
    if (given("eq_tol")) c.tol.equality = eq_tol;
    if (given("grid")) c.grid = parse_grid(grid);
    if (given("out")) c.out = out;
    if (given("jobs")) c.jobs = jobs;
    if (!(c.kappa_max >= 1.0 && c.kappa_max <= kMaxCondition))
      throw PreconditionError("--kappa-max must lie in [1, 1e12]");
    return c;
  }
};

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw PreconditionError("cannot write '" + path + "'");
  f << text;
}

void print_summary(const Report& r, std::ostream& out) {
  out << std::left << std::setw(24) << "law" << std::right << std::setw(8) << "trials"
      << std::setw(8) << "pass" << std::setw(8) << "fail" << std::setw(8) << "skip"
      << std::setw(16) << "worst margin" << '\n';
  for (const auto& s : r.laws) {
    out << std::left << std::setw(24) << s.law << std::right << std::setw(8) << s.trials
        << std::setw(8) << s.passes << std::setw(8) << s.fails << std::setw(8) << s.skips
        << std::setw(16);
    if (s.worst)
      out << std::setprecision(4) << s.worst->margin;
    else
      out << "-";
    out << '\n';
  }
  for (const auto& s : r.laws)
    for (const auto& f : s.failures) {
      out << "FAIL " << s.law << " trial " << f.trial << " seed " << f.seed << " (n=" << f.n
          << ", m=" << f.m << ")";
      if (!f.error.empty()) out << ": " << f.error;
      out << "  reproduce: meanscope repro --law " << s.law << " --trial " << f.trial << '\n';
    }
  out << "wall clock " << std::setprecision(3) << r.wall_clock_seconds << " s, exit "
      << r.exit_status << '\n';
}

int cmd_verify(const CommonFlags& flags, const std::vector<LawEntry>& registry,
               std::ostream& out) {
  const auto c = flags.resolve();
  select_laws(c.laws, registry);  // validate names before running anything
  const auto report = run_verify(c, registry);
  if (!c.out.empty()) write_text(c.out, to_json(report).dump(2) + "\n", out);
  print_summary(report, out);
  return report.exit_status;
}

Instance sweep_instance_from_files(SweepLaw law, const std::string& a_files,
                                   const std::string& b_files, double center) {
  const auto load = [](const std::string& list) {
    std::vector<PDMatrix> out;
    for (const auto& path : split(list, ',')) out.emplace_back(read_matrix_file(path));
    return out;
  };
  Instance in;
  auto a = load(a_files);
  auto b = load(b_files);
  if (law == SweepLaw::ScalarCallebautF) {
    for (const auto& x : a) {
      if (x.size() != 1) throw PreconditionError("scalar-callebaut-f expects 1x1 matrix files");
      in.seq_a.push_back(x.matrix()(0, 0).real());
    }
    for (const auto& x : b) {
      if (x.size() != 1) throw PreconditionError("scalar-callebaut-f expects 1x1 matrix files");
      in.seq_b.push_back(x.matrix()(0, 0).real());
    }
    in.callebaut_center = center;
  } else {
    in.a = std::move(a);
    in.b = std::move(b);
  }
  return in;
}

int cmd_sweep(const CommonFlags& flags, const std::string& law_text, const std::string& a_files,
              const std::string& b_files, double center, const std::vector<LawEntry>& registry,
              std::ostream& out) {
  const auto law = parse_sweep(law_text);
  if (!law) throw PreconditionError("law '" + law_text + "' is not sweepable");
  const auto c = flags.resolve();

  Instance in;
  if (!a_files.empty() || !b_files.empty()) {
    in = sweep_instance_from_files(*law, a_files, b_files, center);
  } else {
    const auto source = law_name(sweep_source(*law));
    const auto entry = select_laws({source}, registry).front();
    in = trial_instance(c, *entry, 0);
  }
  std::vector<double> grid;
  if (c.grid) {
    grid = *c.grid;
  } else if (*law == SweepLaw::ScalarCallebautF) {
    grid = default_grid(LawId::TensorF);
  } else {
    grid = default_grid(*law == SweepLaw::TensorF ? LawId::TensorF : LawId::TensorG);
  }
  const auto curve = sweep_law(*law, in, grid, c.tol.loewner);
  write_text(c.out, curve.to_csv(), out);
  return curve.monotone() ? kExitOk : kExitViolation;
}

int cmd_repro(const CommonFlags& flags, const std::string& law_text, std::size_t trial,
              const std::vector<LawEntry>& registry, std::ostream& out) {
  const auto c = flags.resolve();
  const auto entry = select_laws({law_text}, registry).front();
  const auto in = trial_instance(c, *entry, trial);
  const auto result = entry->check(in, c.tol);
  const auto text = repro_to_json(entry->name, result, in, trial);
  write_text(c.out, text, out);
  return result.status == Status::Fail ? kExitViolation : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, const std::vector<LawEntry>& registry,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"meanscope: operator-mean inequality verification harness"};
  app.require_subcommand(1);

  CommonFlags verify_flags, sweep_flags, repro_flags;
  auto* verify = app.add_subcommand("verify", "run law suites and write a JSON report");
  verify_flags.add(*verify, true);

  auto* sweep = app.add_subcommand("sweep", "sample a matrix-valued function over a t-grid (CSV)");
  std::string sweep_law_name, a_files, b_files;
  double center = 0.5;
  sweep->add_option("--law", sweep_law_name,
                    "tensor-f | tensor-g | matrix-callebaut-middle | scalar-callebaut-f")
      ->required();
  sweep->add_option("--a", a_files, "comma list of matrix files for A_j");
  sweep->add_option("--b", b_files, "comma list of matrix files for B_j");
  sweep->add_option("--center", center, "fixed s of f(r, s) for scalar-callebaut-f");
  sweep_flags.add(*sweep, false);

  auto* repro = app.add_subcommand("repro", "re-run one trial and dump instance and margins");
  std::string repro_law;
  std::size_t trial = 0;
  repro->add_option("--law", repro_law, "law name")->required();
  repro->add_option("--trial", trial, "trial index within the run");
  repro_flags.add(*repro, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(verify_flags, registry, out);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_law_name, a_files, b_files, center, registry, out);
    if (*repro) return cmd_repro(repro_flags, repro_law, trial, registry, out);
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitUsage;
}

}  // namespace meanscope
