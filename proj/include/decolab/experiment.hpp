#ifndef DECOLAB_EXPERIMENT_HPP
#define DECOLAB_EXPERIMENT_HPP

// Config-driven experiment runner. A config is a JSON document whose "kind"
// selects one of three pipelines:
//
//   spinbath_gtfd    spin-bath evolution, relevant-observable series, verdict
//   mhi_context      preferred context of a Hamiltonian, candidate checks, CSP
//   liealg_contract  extension / basis change / rescaling / contraction report
//
// validate() returns schema diagnostics keyed by JSON path; run() assumes a
// valid config and writes its outputs into a directory.

#include "decolab/gtfd.hpp"
#include "decolab/liealg/builtins.hpp"
#include "decolab/liealg/json.hpp"
#include "decolab/liealg/ncpoly.hpp"
#include "decolab/matrix_json.hpp"
#include "decolab/mhi.hpp"
#include "decolab/spinbath.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef DECOLAB_VERSION
#define DECOLAB_VERSION "0.1.0"
#endif

namespace decolab::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char *kVersion = DECOLAB_VERSION;

/// Pointer bases are written as dense projectors, one per eigenvalue, so they
/// are only reported for small systems.
inline constexpr std::size_t kPointerBasisMaxDim = 64;

struct Diagnostic {
  std::string path;
  std::string message;
  friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

/// Raised by run() when the config does not validate.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<Diagnostic> d)
      : std::runtime_error(summary(d)), diagnostics(std::move(d)) {}
  std::vector<Diagnostic> diagnostics;

private:
  static std::string summary(const std::vector<Diagnostic> &d) {
    std::string s = "config is invalid";
    for (const auto &x : d)
      s += "\n  " + x.path + ": " + x.message;
    return s;
  }
};

struct ExperimentConfig {
  std::string text; // exactly as read
  json doc;
  fs::path base_dir; // relative matrix/algebra paths resolve against this

  static ExperimentConfig parse(std::string text, fs::path base_dir = fs::current_path()) {
    ExperimentConfig c{std::move(text), {}, std::move(base_dir)};
    c.doc = json::parse(c.text); // throws json::parse_error
    return c;
  }
  static ExperimentConfig load(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw std::runtime_error("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.has_parent_path() ? path.parent_path() : fs::current_path());
  }
};

struct RunReport {
  json report;                        // contents of report.json
  std::vector<std::string> manifest;  // file names relative to the output directory
};

//------------------------------------------------------------------------------
// Validation
//------------------------------------------------------------------------------

namespace detail {

class Checker {
public:
  std::vector<Diagnostic> out;

  void fail(const std::string &path, const std::string &msg) { out.push_back({path, msg}); }

  const json *field(const json &obj, const std::string &path, const char *key, bool required) {
    if (obj.contains(key))
      return &obj.at(key);
    if (required)
      fail(path + "." + key, "required field is missing");
    return nullptr;
  }

  bool object(const json &j, const std::string &path) {
    if (j.is_object())
      return true;
    fail(path, "must be an object");
    return false;
  }

  std::optional<long long> integer(const json *j, const std::string &path, long long min) {
    if (!j)
      return std::nullopt;
    if (!j->is_number_integer()) {
      fail(path, "must be an integer");
      return std::nullopt;
    }
    const long long v = j->get<long long>();
    if (v < min) {
      fail(path, "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> number(const json *j, const std::string &path) {
    if (!j)
      return std::nullopt;
    if (!j->is_number() || !std::isfinite(j->get<double>())) {
      fail(path, "must be a finite number");
      return std::nullopt;
    }
    return j->get<double>();
  }

  void positive(const json *j, const std::string &path) {
    if (auto v = number(j, path); v && !(*v > 0.0))
      fail(path, "must be positive");
  }

  void one_of(const json *j, const std::string &path, std::initializer_list<const char *> options) {
    if (!j)
      return;
    if (j->is_string())
      for (const char *o : options)
        if (j->get<std::string>() == o)
          return;
    std::string list;
    for (const char *o : options)
      list += std::string(list.empty() ? "" : ", ") + o;
    fail(path, "must be one of: " + list);
  }
};

inline bool amplitude_ok(const json &j) {
  return j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number());
}

inline qcore::cplx amplitude(const json &j) {
  return j.is_number() ? qcore::cplx(j.get<double>(), 0.0) : qcore::cplx(j[0].get<double>(), j[1].get<double>());
}

/// A spin given as [up, down] with each amplitude a number or [re, im].
inline void check_spin(Checker &c, const json &j, const std::string &path) {
  if (!j.is_array() || j.size() != 2 || !amplitude_ok(j[0]) || !amplitude_ok(j[1])) {
    c.fail(path, "spin must be [up, down] with amplitudes as numbers or [re, im]");
    return;
  }
  const double n = std::norm(amplitude(j[0])) + std::norm(amplitude(j[1]));
  if (std::abs(n - 1.0) > 1e-12)
    c.fail(path, "spin amplitudes are not normalized");
}

inline void check_times(Checker &c, const json &t, const std::string &path) {
  if (t.is_array()) {
    if (t.size() < gtfd::kMinSeriesLength)
      c.fail(path, "needs at least " + std::to_string(gtfd::kMinSeriesLength) + " time points");
    for (std::size_t k = 0; k < t.size(); ++k)
      if (!t[k].is_number()) {
        c.fail(path + "[" + std::to_string(k) + "]", "must be a number");
        return;
      }
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k].get<double>() > t[k - 1].get<double>())) {
        c.fail(path, "times must be strictly increasing");
        return;
      }
    return;
  }
  if (!c.object(t, path))
    return;
  const auto start = c.number(c.field(t, path, "start", true), path + ".start");
  const auto stop = c.number(c.field(t, path, "stop", true), path + ".stop");
  c.integer(c.field(t, path, "count", true), path + ".count", static_cast<long long>(gtfd::kMinSeriesLength));
  if (start && stop && !(*stop > *start))
    c.fail(path + ".stop", "must exceed start");
}

inline void check_matrix_ref(Checker &c, const json &j, const std::string &path) {
  if (j.is_string() || j.is_array() || (j.is_object() && j.contains("rows")))
    return;
  c.fail(path, "must be a matrix file path or an inline matrix");
}

inline void check_algebra_ref(Checker &c, const json &j, const std::string &path) {
  if (j.is_string() || (j.is_object() && j.contains("generators")))
    return;
  c.fail(path, "must be an algebra file path or an inline algebra");
}

inline void check_rational(Checker &c, const json &j, const std::string &path) {
  if (j.is_number_integer())
    return;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      const liealg::Integer num(s.substr(0, slash));
      const liealg::Integer den(slash == std::string::npos ? "1" : s.substr(slash + 1));
      if (den != 0)
        return;
    } catch (const std::exception &) {
    }
  }
  c.fail(path, "must be an integer or a \"p/q\" string");
}

inline void check_spinbath(Checker &c, const json &doc) {
  std::optional<long long> n_bath;
  if (const json *m = c.field(doc, "$", "model", true); m && c.object(*m, "$.model")) {
    n_bath = c.integer(c.field(*m, "$.model", "n_bath", true), "$.model.n_bath", 1);
    if (const json *g = c.field(*m, "$.model", "couplings", true)) {
      if (g->is_array()) {
        for (std::size_t i = 0; i < g->size(); ++i)
          c.number(&(*g)[i], "$.model.couplings[" + std::to_string(i) + "]");
        if (n_bath && g->size() != static_cast<std::size_t>(*n_bath))
          c.fail("$.model.couplings", "length must equal n_bath");
      } else if (g->is_object() && g->contains("random")) {
        const json &r = g->at("random");
        const std::string p = "$.model.couplings.random";
        if (c.object(r, p)) {
          const auto lo = c.number(c.field(r, p, "low", true), p + ".low");
          const auto hi = c.number(c.field(r, p, "high", true), p + ".high");
          c.integer(c.field(r, p, "seed", false), p + ".seed", 0);
          if (lo && hi && *hi < *lo)
            c.fail(p + ".high", "must be >= low");
        }
      } else {
        c.fail("$.model.couplings", "must be an array of numbers or {\"random\": {...}}");
      }
    }
    if (const json *init = c.field(*m, "$.model", "initial", false); init && c.object(*init, "$.model.initial")) {
      if (const json *p = c.field(*init, "$.model.initial", "central", false)) {
        if (!(p->is_string() && p->get<std::string>() == "balanced"))
          check_spin(c, *p, "$.model.initial.central");
      }
      if (const json *b = c.field(*init, "$.model.initial", "bath", false)) {
        if (b->is_string()) {
          c.one_of(b, "$.model.initial.bath", {"balanced", "random"});
        } else if (b->is_array()) {
          if (n_bath && b->size() != static_cast<std::size_t>(*n_bath))
            c.fail("$.model.initial.bath", "needs one spin per bath spin");
          for (std::size_t i = 0; i < b->size(); ++i)
            check_spin(c, (*b)[i], "$.model.initial.bath[" + std::to_string(i) + "]");
        } else {
          c.fail("$.model.initial.bath", "must be \"balanced\", \"random\" or an array of spins");
        }
      }
      c.integer(c.field(*init, "$.model.initial", "seed", false), "$.model.initial.seed", 0);
    }
  }

  if (const json *p = c.field(doc, "$", "partition", true); p && c.object(*p, "$.partition")) {
    const json *type = c.field(*p, "$.partition", "type", true);
    c.one_of(type, "$.partition.type", {"dec1", "dec2", "dec3", "custom"});
    const std::string t = type && type->is_string() ? type->get<std::string>() : "";
    const long long hi = n_bath.value_or(1LL << 20);
    auto index = [&](const char *key, long long lo, long long top) {
      const std::string path = std::string("$.partition.") + key;
      if (auto v = c.integer(c.field(*p, "$.partition", key, true), path, lo); v && *v > top)
        c.fail(path, "must be <= " + std::to_string(top));
    };
    if (t == "dec2")
      index("j", 1, hi);
    else if (t == "dec3")
      index("p", 1, hi);
    else if (t == "custom") {
      const json *s = c.field(*p, "$.partition", "system", true);
      if (s && (!s->is_array() || s->empty()))
        c.fail("$.partition.system", "must be a non-empty array of factor indices");
      else if (s)
        for (std::size_t i = 0; i < s->size(); ++i)
          if (auto v = c.integer(&(*s)[i], "$.partition.system[" + std::to_string(i) + "]", 0); v && *v > hi)
            c.fail("$.partition.system[" + std::to_string(i) + "]", "factor index out of range");
    }
  }

  if (const json *t = c.field(doc, "$", "times", true))
    check_times(c, *t, "$.times");
  c.one_of(c.field(doc, "$", "observables", false), "$.observables", {"pauli", "collective"});
  c.one_of(c.field(doc, "$", "path", false), "$.path", {"automatic", "analytic", "vector", "dense"});
  c.integer(c.field(doc, "$", "max_system_factors", false), "$.max_system_factors", 1);
  if (const json *d = c.field(doc, "$", "detection", false); d && c.object(*d, "$.detection")) {
    if (auto f = c.number(c.field(*d, "$.detection", "window_fraction", false), "$.detection.window_fraction");
        f && !(*f > 0.0 && *f < 1.0))
      c.fail("$.detection.window_fraction", "must lie in (0, 1)");
    c.positive(c.field(*d, "$.detection", "band_tol", false), "$.detection.band_tol");
    c.positive(c.field(*d, "$.detection", "recurrence_guard", false), "$.detection.recurrence_guard");
  }
}

inline void check_mhi(Checker &c, const json &doc) {
  if (const json *h = c.field(doc, "$", "hamiltonian", true))
    check_matrix_ref(c, *h, "$.hamiltonian");
  if (const json *obs = c.field(doc, "$", "observables", false)) {
    if (!obs->is_array()) {
      c.fail("$.observables", "must be an array");
    } else {
      for (std::size_t i = 0; i < obs->size(); ++i) {
        const std::string p = "$.observables[" + std::to_string(i) + "]";
        if (!c.object((*obs)[i], p))
          continue;
        if (const json *l = c.field((*obs)[i], p, "label", true); l && !l->is_string())
          c.fail(p + ".label", "must be a string");
        if (const json *m = c.field((*obs)[i], p, "matrix", true))
          check_matrix_ref(c, *m, p + ".matrix");
      }
    }
  }
  if (const json *csp = c.field(doc, "$", "csp", false); csp && c.object(*csp, "$.csp")) {
    const json *s = c.field(*csp, "$.csp", "split", true);
    if (s && (!s->is_array() || s->empty()))
      c.fail("$.csp.split", "must be a non-empty array of factor indices");
    else if (s)
      for (std::size_t i = 0; i < s->size(); ++i)
        c.integer(&(*s)[i], "$.csp.split[" + std::to_string(i) + "]", 0);
  }
  c.positive(c.field(doc, "$", "group_tol", false), "$.group_tol");
  c.positive(c.field(doc, "$", "tol", false), "$.tol");
}

inline void check_polys(Checker &c, const json &list, const std::string &path) {
  if (!list.is_array()) {
    c.fail(path, "must be an array");
    return;
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!c.object(list[i], p))
      continue;
    c.field(list[i], p, "label", true);
    const json *terms = c.field(list[i], p, "terms", true);
    if (!terms)
      continue;
    if (!terms->is_array()) {
      c.fail(p + ".terms", "must be an array");
      continue;
    }
    for (std::size_t k = 0; k < terms->size(); ++k) {
      const std::string tp = p + ".terms[" + std::to_string(k) + "]";
      const json &t = (*terms)[k];
      if (!c.object(t, tp))
        continue;
      if (const json *w = c.field(t, tp, "word", true); w && !w->is_array())
        c.fail(tp + ".word", "must be an array of generator names");
      if (const json *re = c.field(t, tp, "re", false))
        check_rational(c, *re, tp + ".re");
      if (const json *im = c.field(t, tp, "im", false))
        check_rational(c, *im, tp + ".im");
    }
  }
}

inline void check_liealg(Checker &c, const json &doc) {
  const json *pipe = c.field(doc, "$", "pipeline", true);
  c.one_of(pipe, "$.pipeline", {"poincare_galilei", "custom"});
  if (pipe && pipe->is_string() && pipe->get<std::string>() == "custom") {
    if (const json *a = c.field(doc, "$", "algebra", true))
      check_algebra_ref(c, *a, "$.algebra");
    if (const json *e = c.field(doc, "$", "extend", false); e && !e->is_string())
      c.fail("$.extend", "must be a generator name");
    if (const json *r = c.field(doc, "$", "replace", false); r && c.object(*r, "$.replace")) {
      c.field(*r, "$.replace", "old", true);
      c.field(*r, "$.replace", "new", true);
      if (const json *comb = c.field(*r, "$.replace", "combination", true); comb && c.object(*comb, "$.replace.combination"))
        for (const auto &[k, v] : comb->items())
          check_rational(c, v, "$.replace.combination." + k);
    }
    if (const json *s = c.field(doc, "$", "schedule", true); s && c.object(*s, "$.schedule"))
      for (const auto &[k, v] : s->items())
        if (!v.is_number_integer())
          c.fail("$.schedule." + k, "must be an integer power");
    if (const json *t = c.field(doc, "$", "compare_to", false))
      check_algebra_ref(c, *t, "$.compare_to");
    if (const json *m = c.field(doc, "$", "mapping", false); m && !m->is_object())
      c.fail("$.mapping", "must be an object of name pairs");
  }
  if (const json *p = c.field(doc, "$", "casimirs", false))
    check_polys(c, *p, "$.casimirs");
}

} // namespace detail

inline std::vector<Diagnostic> validate(const json &doc) {
  detail::Checker c;
  if (!doc.is_object()) {
    c.fail("$", "config must be a JSON object");
    return c.out;
  }
  c.integer(c.field(doc, "$", "seed", false), "$.seed", 0);
  const json *kind = c.field(doc, "$", "kind", true);
  c.one_of(kind, "$.kind", {"spinbath_gtfd", "mhi_context", "liealg_contract"});
  if (!kind || !kind->is_string())
    return c.out;
  const auto k = kind->get<std::string>();
  if (k == "spinbath_gtfd")
    detail::check_spinbath(c, doc);
  else if (k == "mhi_context")
    detail::check_mhi(c, doc);
  else if (k == "liealg_contract")
    detail::check_liealg(c, doc);
  return c.out;
}

inline std::vector<Diagnostic> validate(const ExperimentConfig &cfg) { return validate(cfg.doc); }

/// Parse errors come back as a single diagnostic at "$". Throws only if the
/// file cannot be read.
inline std::vector<Diagnostic> validate_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return validate(json::parse(ss.str()));
  } catch (const json::parse_error &e) {
    return {{"$", std::string("not valid JSON: ") + e.what()}};
  }
}

//------------------------------------------------------------------------------
// Pipelines
//------------------------------------------------------------------------------

namespace detail {

class OutputDir {
public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string &name, const std::string &content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    out << content;
    if (!out)
      throw std::runtime_error("write failed for '" + (dir_ / name).string() + "'");
    files_.push_back(name);
  }
  void write_json(const std::string &name, const json &j) { write(name, j.dump(2) + "\n"); }

  const std::vector<std::string> &files() const { return files_; }

private:
  fs::path dir_;
  std::vector<std::string> files_;
};

inline std::uint64_t seed_of(const json &doc) { return doc.value("seed", std::uint64_t{0}); }

inline std::vector<double> time_grid(const json &t) {
  if (t.is_array())
    return t.get<std::vector<double>>();
  const double a = t.at("start").get<double>();
  const double b = t.at("stop").get<double>();
  const auto n = t.at("count").get<std::size_t>();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return out;
}

inline spinbath::SpinAmplitudes spin(const json &j) { return {amplitude(j[0]), amplitude(j[1])}; }

inline qcore::Operator load_matrix(const json &ref, const fs::path &base) {
  if (ref.is_string()) {
    fs::path p = ref.get<std::string>();
    return qcore::load_operator((p.is_absolute() ? p : base / p).string());
  }
  return qcore::operator_from_json(ref);
}

inline liealg::LieAlgebra load_algebra(const json &ref, const fs::path &base) {
  if (ref.is_string()) {
    fs::path p = ref.get<std::string>();
    std::ifstream in(p.is_absolute() ? p : base / p);
    if (!in)
      throw std::runtime_error("cannot read algebra file '" + p.string() + "'");
    return liealg::algebra_from_json(json::parse(in));
  }
  return liealg::algebra_from_json(ref);
}

inline liealg::Scalar rational(const json &j) {
  if (j.is_number_integer())
    return liealg::Scalar(j.get<long long>());
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  const liealg::Integer num(s.substr(0, slash));
  const liealg::Integer den(slash == std::string::npos ? "1" : s.substr(slash + 1));
  return liealg::Scalar(liealg::GaussianRational(liealg::Rational(num, den)));
}

struct SpinbathSetup {
  spinbath::SpinBathModel model;
  spinbath::ProductState state;
  spinbath::Partition partition;
  std::uint64_t coupling_seed = 0;
  std::optional<std::uint64_t> state_seed;
};

inline SpinbathSetup spinbath_setup(const json &doc) {
  const std::uint64_t seed = seed_of(doc);
  const json &m = doc.at("model");
  const auto n = m.at("n_bath").get<std::size_t>();
  const json &g = m.at("couplings");
  std::uint64_t coupling_seed = seed;
  std::vector<double> couplings;
  if (g.is_array()) {
    couplings = g.get<std::vector<double>>();
  } else {
    const json &r = g.at("random");
    coupling_seed = r.value("seed", seed);
    couplings = spinbath::random_couplings(n, r.at("low").get<double>(), r.at("high").get<double>(), coupling_seed);
  }
  spinbath::SpinBathModel model(std::move(couplings));

  auto state = spinbath::balanced_state(n);
  std::optional<std::uint64_t> state_seed;
  if (m.contains("initial")) {
    const json &init = m.at("initial");
    if (init.contains("bath")) {
      const json &b = init.at("bath");
      if (b.is_string() && b.get<std::string>() == "random") {
        state_seed = init.value("seed", seed + 1);
        state = spinbath::random_state(n, *state_seed);
      } else if (b.is_array()) {
        state.bath.clear();
        for (const auto &s : b)
          state.bath.push_back(spin(s));
      }
    }
    if (init.contains("central") && init.at("central").is_array())
      state.p = spin(init.at("central"));
  }

  const json &p = doc.at("partition");
  const auto type = p.at("type").get<std::string>();
  spinbath::PartitionSpec spec = spinbath::partition_spec::Dec1{};
  if (type == "dec2")
    spec = spinbath::partition_spec::Dec2{p.at("j").get<std::size_t>()};
  else if (type == "dec3")
    spec = spinbath::partition_spec::Dec3{p.at("p").get<std::size_t>()};
  else if (type == "custom")
    spec = spinbath::partition_spec::Custom{p.at("system").get<std::vector<std::size_t>>()};
  auto partition = spinbath::make_partition(model, spec);
  return {std::move(model), std::move(state), std::move(partition), coupling_seed, state_seed};
}

inline gtfd::EvolutionPath evolution_path(const json &doc) {
  const auto p = doc.value("path", std::string("automatic"));
  if (p == "analytic")
    return gtfd::EvolutionPath::analytic;
  if (p == "vector")
    return gtfd::EvolutionPath::vector;
  if (p == "dense")
    return gtfd::EvolutionPath::dense;
  return gtfd::EvolutionPath::automatic;
}

inline json run_spinbath(const json &doc, OutputDir &out) {
  auto setup = spinbath_setup(doc);
  const auto sig = setup.model.sig();
  const auto space = doc.value("observables", std::string("pauli")) == "collective"
                         ? gtfd::collective_space(setup.partition, sig)
                         : gtfd::relevant_space(setup.partition, sig, doc.value("max_system_factors",
                                                                                 gtfd::kDefaultMaxSystemFactors));
  const auto times = time_grid(doc.at("times"));
  const auto path = evolution_path(doc);
  if (setup.model.qubits() > spinbath::kVectorQubitCap && !(setup.partition.system.size() == 1))
    throw qcore::DimensionError("model has " + std::to_string(setup.model.qubits()) +
                                " qubits; exact evolution is capped at " + std::to_string(spinbath::kVectorQubitCap));
  const auto traj = gtfd::spinbath_trajectory(setup.model, setup.state, setup.partition, path);
  const auto series = gtfd::expectation_series(traj, space, times);

  gtfd::DetectionParams params;
  if (doc.contains("detection")) {
    const json &d = doc.at("detection");
    params.window_fraction = d.value("window_fraction", params.window_fraction);
    params.band_tol = d.value("band_tol", params.band_tol);
    params.recurrence_guard = d.value("recurrence_guard", params.recurrence_guard);
  }
  const auto verdict = gtfd::detect_equilibrium(series, params);
  std::optional<gtfd::PointerBasis> basis;
  const std::size_t sys_dim = space.system_sig().total();
  const bool basis_fits = sys_dim <= kPointerBasisMaxDim;
  if (verdict.status == gtfd::Status::decoheres && basis_fits)
    basis = gtfd::pointer_basis(verdict, gtfd::average_reduced_state(traj, times, verdict.window));

  out.write("series.csv", series.to_csv());
  auto vj = gtfd::verdict_json(verdict, series.labels, basis);
  out.write_json("verdict.json", vj);

  json couplings = setup.model.couplings;
  json r{{"status", vj["status"]},
         {"residual", verdict.residual},
         {"system", setup.partition.system},
         {"qubits", setup.model.qubits()},
         {"couplings", couplings},
         {"coupling_seed", setup.coupling_seed},
         {"observables", series.labels},
         {"time_points", times.size()}};
  r["state_seed"] = setup.state_seed ? json(*setup.state_seed) : json(nullptr);
  if (verdict.status == gtfd::Status::decoheres && !basis_fits)
    r["pointer_basis_skipped"] = "system dimension " + std::to_string(sys_dim) + " exceeds " +
                                 std::to_string(kPointerBasisMaxDim);
  return r;
}

inline json run_mhi(const json &doc, const fs::path &base, OutputDir &out) {
  const auto h = load_matrix(doc.at("hamiltonian"), base);
  const double group_tol = doc.value("group_tol", qcore::kGroupTol);
  const double tol = doc.value("tol", 1e-10);
  const auto ctx = mhi::preferred_context(h, group_tol);

  json report{{"eigenvalues", ctx.eigenvalues()}, {"multiplicities", ctx.multiplicities()}, {"group_tol", group_tol}};
  json candidates = json::array();
  if (doc.contains("observables"))
    for (const auto &o : doc.at("observables")) {
      const auto op = load_matrix(o.at("matrix"), base);
      candidates.push_back({{"label", o.at("label")}, {"actual_valued", mhi::is_actual_valued(op, ctx, tol)}});
    }
  report["candidates"] = std::move(candidates);
  if (doc.contains("csp")) {
    const auto split = doc.at("csp").at("split").get<std::vector<std::size_t>>();
    const auto c = mhi::csp_check(h, split, tol);
    report["csp"] = {{"split", split},
                     {"decomposable", c.decomposable},
                     {"interaction_norm", c.interaction_norm},
                     {"h1", qcore::to_json(c.h1)},
                     {"h2", qcore::to_json(c.h2)}};
  } else {
    report["csp"] = nullptr;
  }
  out.write_json("context.json", report);

  std::size_t accepted = 0;
  for (const auto &c : report["candidates"])
    accepted += c["actual_valued"].get<bool>() ? 1 : 0;
  return {{"context_size", ctx.size()},
          {"candidates", report["candidates"].size()},
          {"actual_valued", accepted},
          {"csp_decomposable", report["csp"].is_null() ? json(nullptr) : report["csp"]["decomposable"]}};
}

inline liealg::NcPoly poly_from_json(const json &j, const liealg::LieAlgebra &alg) {
  liealg::NcPoly p;
  for (const auto &t : j.at("terms")) {
    liealg::Word w;
    for (const auto &g : t.at("word"))
      w.push_back(alg.index(g.get<std::string>()));
    const auto re = t.contains("re") ? rational(t.at("re")) : liealg::Scalar(1);
    const auto im = t.contains("im") ? rational(t.at("im")) : liealg::Scalar(0);
    p.add(std::move(w), re + im * liealg::Scalar::i());
  }
  return p;
}

/// H^2 - P.P in the Poincare generators.
inline json mass_shell_json() {
  json terms = json::array({{{"word", {"H", "H"}}}});
  for (const char *p : {"P1", "P2", "P3"})
    terms.push_back({{"word", {p, p}}, {"re", -1}});
  return json::array({{{"label", "mass_shell"}, {"terms", terms}}});
}

inline json run_liealg(const json &doc, const fs::path &base, OutputDir &out) {
  using namespace liealg;
  const bool builtin = doc.at("pipeline").get<std::string>() == "poincare_galilei";

  LieAlgebra original = builtin ? poincare() : load_algebra(doc.at("algebra"), base);
  LieAlgebra extended = original;
  if (builtin)
    extended = extend_trivially(original, "M");
  else if (doc.contains("extend"))
    extended = extend_trivially(original, doc.at("extend").get<std::string>());

  BasisChange change;
  for (const auto &g : extended.generators())
    change.new_generators.push_back({g, {{g, Scalar(1)}}});
  if (builtin) {
    change = shifted_energy_change(extended);
  } else if (doc.contains("replace")) {
    const json &r = doc.at("replace");
    std::map<std::string, Scalar> comb;
    for (const auto &[k, v] : r.at("combination").items())
      comb[k] = rational(v);
    change = replace_generator(extended, r.at("old").get<std::string>(), r.at("new").get<std::string>(), comb);
  }
  const LieAlgebra rebased = change_basis(extended, change);

  std::map<std::string, int> schedule;
  if (builtin)
    schedule = contraction_schedule();
  else
    for (const auto &[k, v] : doc.at("schedule").items())
      schedule[k] = v.get<int>();
  const LieAlgebra rescaled = rescale(rebased, schedule);
  const LieAlgebra contracted = contract(rescaled);

  json report{{"original", to_json(original)},
              {"extended", to_json(extended)},
              {"rebased", to_json(rebased)},
              {"rescaled", to_json(rescaled)},
              {"contracted", to_json(contracted)},
              {"schedule", schedule}};

  std::optional<LieAlgebra> target;
  std::map<std::string, std::string> mapping;
  if (builtin) {
    target = extended_galilei();
    mapping = galilei_mapping(contracted);
  } else if (doc.contains("compare_to")) {
    target = load_algebra(doc.at("compare_to"), base);
    if (doc.contains("mapping"))
      mapping = doc.at("mapping").get<std::map<std::string, std::string>>();
    else
      for (const auto &g : contracted.generators())
        mapping[g] = g;
  }
  if (target) {
    report["isomorphic"] = same_structure(contracted, *target, mapping);
    report["mapping"] = mapping;
  } else {
    report["isomorphic"] = nullptr;
  }

  json casimirs = json::array();
  const json polys = doc.contains("casimirs") ? doc.at("casimirs") : (builtin ? mass_shell_json() : json::array());
  for (const auto &pj : polys) {
    const auto p = poly_from_json(pj, original);
    const auto in_new = express_in_basis(p, extended, change, rebased);
    json comps = json::array();
    for (const auto &c : contract_casimir(in_new, rebased, schedule))
      comps.push_back({{"eps_power", c.power},
                       {"poly", c.poly.to_string(contracted)},
                       {"is_casimir", is_casimir(c.poly, contracted)}});
    casimirs.push_back({{"label", pj.at("label")},
                        {"is_casimir_before", is_casimir(p, original)},
                        {"rebased", in_new.to_string(rebased)},
                        {"components", std::move(comps)}});
  }
  report["casimirs"] = std::move(casimirs);
  out.write_json("contraction.json", report);
  return {{"isomorphic", report["isomorphic"]},
          {"contracted_dim", contracted.dim()},
          {"casimirs", report["casimirs"].size()}};
}

} // namespace detail

/// Runs a validated config and writes its outputs plus report.json into
/// out_dir. Throws ValidationError on schema problems; any other exception is
/// a runtime failure.
inline RunReport run(const ExperimentConfig &cfg, const fs::path &out_dir) {
  if (auto diags = validate(cfg); !diags.empty())
    throw ValidationError(std::move(diags));
  const auto t0 = std::chrono::steady_clock::now();
  detail::OutputDir out(out_dir);
  const auto kind = cfg.doc.at("kind").get<std::string>();
  json results;
  if (kind == "spinbath_gtfd")
    results = detail::run_spinbath(cfg.doc, out);
  else if (kind == "mhi_context")
    results = detail::run_mhi(cfg.doc, cfg.base_dir, out);
  else
    results = detail::run_liealg(cfg.doc, cfg.base_dir, out);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunReport rr;
  rr.manifest = out.files();
  rr.manifest.push_back("report.json");
  rr.report = {{"kind", kind},
               {"version", kVersion},
               {"seed", cfg.doc.contains("seed") ? cfg.doc.at("seed") : json(nullptr)},
               {"wall_time_s", wall},
               {"results", std::move(results)},
               {"manifest", rr.manifest},
               {"config", cfg.text}};
  out.write_json("report.json", rr.report);
  return rr;
}

} // namespace decolab::experiment

#endif
