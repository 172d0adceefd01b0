#ifndef DECOLAB_GTFD_HPP
#define DECOLAB_GTFD_HPP

// Closed-system decoherence in three steps:
//   1. pick a space of relevant observables O_S (x) I_E,
//   2. track their expectation values along the unitary evolution,
//   3. decide whether those values settle to equilibrium and, if so, read the
//      pointer basis off the equilibrium reduced state.
//
// Finite baths recur, so "settles" means: over the trailing window of a finite
// horizon, every tracked value stays inside a band of width band_tol.

#include "decolab/matrix_json.hpp"
#include "decolab/parallel.hpp"
#include "decolab/qcore.hpp"
#include "decolab/spinbath.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace decolab::gtfd {

using qcore::cplx;
using qcore::DensityMatrix;
using qcore::DimSignature;
using qcore::Operator;
using spinbath::Partition;

//------------------------------------------------------------------------------
// Relevant observables
//------------------------------------------------------------------------------

struct Observable {
  std::string label;
  Operator local; // acts on the system factors, in increasing factor order
};

class RelevantSpace {
public:
  RelevantSpace(Partition partition, DimSignature full_sig, std::vector<Observable> generators)
      : partition_(std::move(partition)), full_sig_(std::move(full_sig)), generators_(std::move(generators)) {
    if (partition_.factors() != full_sig_.size())
      throw qcore::DimensionError("partition covers " + std::to_string(partition_.factors()) +
                                  " factors, signature has " + std::to_string(full_sig_.size()));
    const auto sys_sig = system_sig();
    for (const auto &g : generators_) {
      if (g.local.sig() != sys_sig)
        throw qcore::DimensionError("observable " + g.label + " does not act on the system factors");
      if (!g.local.is_hermitian())
        throw qcore::NotHermitianError("relevant observable " + g.label + " is not hermitian");
    }
  }

  const Partition &partition() const { return partition_; }
  const DimSignature &full_sig() const { return full_sig_; }
  DimSignature system_sig() const { return full_sig_.subset(partition_.system); }
  const std::vector<Observable> &generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto &g : generators_)
      out.push_back(g.label);
    return out;
  }

  /// O_S (x) I_E on the full space.
  Operator padded(std::size_t i) const {
    return qcore::embed(generators_.at(i).local, partition_.system, full_sig_);
  }

private:
  Partition partition_;
  DimSignature full_sig_;
  std::vector<Observable> generators_;
};

namespace detail {

inline const Operator &pauli(char c) {
  static const Operator i = Operator::identity(DimSignature({2}));
  static const Operator x = qcore::pauli_x();
  static const Operator y = qcore::pauli_y();
  static const Operator z = qcore::pauli_z();
  switch (c) {
  case 'X':
    return x;
  case 'Y':
    return y;
  case 'Z':
    return z;
  default:
    return i;
  }
}

inline Operator pauli_string(const std::string &label) {
  std::vector<Operator> ops;
  for (char c : label)
    ops.push_back(pauli(c));
  return qcore::tensor_product(ops);
}

inline void require_qubit_system(const Partition &p, const DimSignature &sig) {
  for (auto f : p.system)
    if (sig[f] != 2)
      throw qcore::DimensionError("Pauli observables need qubit system factors");
}

} // namespace detail

inline constexpr std::size_t kDefaultMaxSystemFactors = 4;

/// Full Pauli-string basis on the system factors: 4^|S| generators including
/// the identity.
inline RelevantSpace relevant_space(const Partition &partition, const DimSignature &full_sig,
                                    std::size_t max_system_factors = kDefaultMaxSystemFactors) {
  const std::size_t s = partition.system.size();
  if (s > max_system_factors)
    throw std::length_error("relevant space: system has " + std::to_string(s) +
                            " factors, generating-set cap is " + std::to_string(max_system_factors));
  detail::require_qubit_system(partition, full_sig);
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::vector<Observable> gens;
  const std::size_t count = std::size_t{1} << (2 * s);
  for (std::size_t code = 0; code < count; ++code) {
    std::string label(s, 'I');
    for (std::size_t k = 0; k < s; ++k)
      label[k] = kLetters[(code >> (2 * (s - 1 - k))) & 3U];
    gens.push_back({label, detail::pauli_string(label)});
  }
  return RelevantSpace(partition, full_sig, std::move(gens));
}

/// Collective observables {I, X..X, Y..Y, Z..Z} on the whole system block.
/// Coincides with the full Pauli basis when |S| = 1.
inline RelevantSpace collective_space(const Partition &partition, const DimSignature &full_sig) {
  detail::require_qubit_system(partition, full_sig);
  const std::size_t s = partition.system.size();
  std::vector<Observable> gens;
  for (char c : {'I', 'X', 'Y', 'Z'}) {
    const std::string label(s, c);
    gens.push_back({label, detail::pauli_string(label)});
  }
  return RelevantSpace(partition, full_sig, std::move(gens));
}

//------------------------------------------------------------------------------
// Trajectories of the reduced state
//------------------------------------------------------------------------------

/// t -> rho_S(t). Must be safe to call concurrently.
using ReducedTrajectory = std::function<DensityMatrix(double)>;

inline ReducedTrajectory dense_trajectory(const DensityMatrix &rho0, const Operator &h,
                                          std::vector<std::size_t> system) {
  auto prop = std::make_shared<const qcore::Propagator>(h);
  if (rho0.dim() != h.dim())
    throw qcore::DimensionError("initial state and Hamiltonian dimensions differ");
  return [prop, rho0, system = std::move(system)](double t) {
    return qcore::partial_trace(prop->apply(rho0, t), system);
  };
}

inline ReducedTrajectory vector_trajectory(const qcore::StateVector &psi0, const qcore::DiagonalOperator &h,
                                           std::vector<std::size_t> system) {
  auto prop = std::make_shared<const qcore::Propagator>(h);
  if (psi0.dim() != h.dim())
    throw qcore::DimensionError("initial state and Hamiltonian dimensions differ");
  return [prop, psi0, system = std::move(system)](double t) {
    return qcore::reduced_state(prop->apply(psi0, t), system);
  };
}

enum class EvolutionPath { automatic, analytic, vector, dense };

/// Spin-bath trajectory. The analytic path covers single-spin systems
/// ({P} or {P_j}); the vector path evolves the full 2^(N+1) state exactly; the
/// dense path evolves the full density matrix.
inline ReducedTrajectory spinbath_trajectory(const spinbath::SpinBathModel &model,
                                             const spinbath::ProductState &ps, const Partition &partition,
                                             EvolutionPath path = EvolutionPath::automatic) {
  ps.validate(model.n_bath);
  const bool single = partition.system.size() == 1;
  if (path == EvolutionPath::automatic)
    path = single ? EvolutionPath::analytic : EvolutionPath::vector;
  switch (path) {
  case EvolutionPath::analytic: {
    if (!single)
      throw std::invalid_argument("analytic path needs a single-spin system");
    const std::size_t s = partition.system.front();
    if (s == 0)
      return [model, ps](double t) { return spinbath::central_reduced_state(model, ps, t); };
    return [model, ps, s](double t) { return spinbath::bath_reduced_state(model, ps, s, t); };
  }
  case EvolutionPath::vector:
    return vector_trajectory(spinbath::initial_vector(model, ps), spinbath::build_hamiltonian(model),
                             partition.system);
  case EvolutionPath::dense:
  default:
    return dense_trajectory(spinbath::initial_state(model, ps), spinbath::build_hamiltonian(model).to_operator(),
                            partition.system);
  }
}

//------------------------------------------------------------------------------
// Expectation series
//------------------------------------------------------------------------------

struct ExpectationSeries {
  std::vector<double> times;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values; // values[observable][time]

  void validate() const {
    if (times.empty())
      throw std::invalid_argument("expectation series has no time points");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1]))
        throw std::invalid_argument("expectation series times must be strictly increasing");
    if (labels.size() != values.size())
      throw std::invalid_argument("expectation series label/column count mismatch");
    for (const auto &v : values)
      if (v.size() != times.size())
        throw std::invalid_argument("expectation series column length mismatch");
  }

  /// CSV with header "t,<label>..." and 17 significant digits.
  std::string to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << 't';
    for (const auto &l : labels)
      os << ',' << l;
    os << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
      os << times[k];
      for (const auto &col : values)
        os << ',' << col[k];
      os << '\n';
    }
    return os.str();
  }
};

inline void require_increasing(const std::vector<double> &times) {
  if (times.empty())
    throw std::invalid_argument("time grid is empty");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
}

/// <O_S>_{rho_S(t)} for every generator and time point.
inline ExpectationSeries expectation_series(const ReducedTrajectory &traj, const RelevantSpace &space,
                                            const std::vector<double> &times) {
  require_increasing(times);
  ExpectationSeries out{times, space.labels(),
                        std::vector<std::vector<double>>(space.size(), std::vector<double>(times.size()))};
  parallel_for(times.size(), [&](std::size_t k) {
    const auto rho_s = traj(times[k]);
    for (std::size_t i = 0; i < space.size(); ++i)
      out.values[i][k] = qcore::expectation(rho_s, space.generators()[i].local).real();
  });
  return out;
}

inline ExpectationSeries expectation_series(const DensityMatrix &rho0, const Operator &h,
                                            const RelevantSpace &space, const std::vector<double> &times) {
  return expectation_series(dense_trajectory(rho0, h, space.partition().system), space, times);
}

/// Closed-system route: Tr(rho(t) (O_S (x) I_E)) on the full space.
inline ExpectationSeries closed_expectation_series(const DensityMatrix &rho0, const Operator &h,
                                                   const RelevantSpace &space, const std::vector<double> &times) {
  require_increasing(times);
  const qcore::Propagator prop(h);
  std::vector<Operator> padded;
  for (std::size_t i = 0; i < space.size(); ++i)
    padded.push_back(space.padded(i));
  ExpectationSeries out{times, space.labels(),
                        std::vector<std::vector<double>>(space.size(), std::vector<double>(times.size()))};
  parallel_for(times.size(), [&](std::size_t k) {
    const auto rho = prop.apply(rho0, times[k]);
    for (std::size_t i = 0; i < padded.size(); ++i)
      out.values[i][k] = qcore::expectation(rho, padded[i]).real();
  });
  return out;
}

//------------------------------------------------------------------------------
// Coarse-grained state
//------------------------------------------------------------------------------

/// rho_G = rho_S (x) I_E / d_E, laid out in the original factor order.
inline DensityMatrix coarse_grained_state(const DensityMatrix &rho, const Partition &partition) {
  if (partition.factors() != rho.sig().size())
    throw qcore::DimensionError("partition does not match the state's factors");
  const auto rho_s = qcore::partial_trace(rho, partition.system);
  const double d_env = static_cast<double>(rho.dim()) / static_cast<double>(rho_s.dim());
  auto g = qcore::embed(rho_s.op(), partition.system, rho.sig()) * cplx(1.0 / d_env);
  return DensityMatrix(std::move(g), DensityMatrix::Trusted{});
}

//------------------------------------------------------------------------------
// Equilibrium detection
//------------------------------------------------------------------------------

enum class Status { decoheres, no_decoherence, undecided };

inline std::string to_string(Status s) {
  switch (s) {
  case Status::decoheres:
    return "decoheres";
  case Status::no_decoherence:
    return "no_decoherence";
  default:
    return "undecided";
  }
}

struct DetectionParams {
  double window_fraction = 0.5;
  double band_tol = 0.05;
  double recurrence_guard = 0.5;
};

struct EquilibriumVerdict {
  Status status = Status::undecided;
  std::optional<std::vector<double>> equilibrium_values;
  std::pair<double, double> window{0.0, 0.0};
  double residual = 0.0;
};

inline constexpr std::size_t kMinSeriesLength = 16;

/// Trailing window: t >= t_end - f (t_end - t_0). Leading window: the mirror
/// image at the start of the series.
///   decoheres       max trailing peak-to-peak spread <= band_tol
///   no_decoherence  some observable's trailing spread > guard * leading spread
///   undecided       otherwise
inline EquilibriumVerdict detect_equilibrium(const ExpectationSeries &series, const DetectionParams &params = {}) {
  series.validate();
  if (series.times.size() < kMinSeriesLength)
    throw std::invalid_argument("equilibrium detection needs at least " + std::to_string(kMinSeriesLength) +
                                " time points");
  if (!(params.window_fraction > 0.0 && params.window_fraction < 1.0))
    throw std::invalid_argument("window_fraction must lie in (0, 1)");

  const double t0 = series.times.front();
  const double t1 = series.times.back();
  const double span = (t1 - t0) * params.window_fraction;
  const auto trail_begin = static_cast<std::size_t>(
      std::lower_bound(series.times.begin(), series.times.end(), t1 - span) - series.times.begin());
  const auto lead_end = static_cast<std::size_t>(
      std::upper_bound(series.times.begin(), series.times.end(), t0 + span) - series.times.begin());

  auto spread = [](const std::vector<double> &v, std::size_t b, std::size_t e) {
    const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(b),
                                              v.begin() + static_cast<std::ptrdiff_t>(e));
    return *hi - *lo;
  };

  EquilibriumVerdict out;
  out.window = {series.times[trail_begin], t1};
  bool recurs = false;
  std::vector<double> means;
  for (const auto &col : series.values) {
    const double trail = spread(col, trail_begin, col.size());
    const double lead = spread(col, 0, lead_end);
    out.residual = std::max(out.residual, trail);
    if (trail > params.recurrence_guard * lead)
      recurs = true;
    double sum = 0.0;
    for (std::size_t k = trail_begin; k < col.size(); ++k)
      sum += col[k];
    means.push_back(sum / static_cast<double>(col.size() - trail_begin));
  }
  if (out.residual <= params.band_tol) {
    out.status = Status::decoheres;
    out.equilibrium_values = std::move(means);
  } else if (recurs) {
    out.status = Status::no_decoherence;
  }
  return out;
}

/// Time average of rho_S(t) over the grid points inside [window.first, window.second].
inline DensityMatrix average_reduced_state(const ReducedTrajectory &traj, const std::vector<double> &times,
                                           std::pair<double, double> window) {
  std::vector<double> sel;
  for (double t : times)
    if (t >= window.first && t <= window.second)
      sel.push_back(t);
  if (sel.empty())
    throw std::invalid_argument("no time points inside the averaging window");
  const auto first = traj(sel.front());
  qcore::Matrix acc = first.matrix();
  for (std::size_t k = 1; k < sel.size(); ++k)
    acc += traj(sel[k]).matrix();
  acc /= static_cast<double>(sel.size());
  return DensityMatrix(Operator(std::move(acc), first.sig()), DensityMatrix::Trusted{});
}

//------------------------------------------------------------------------------
// Pointer basis
//------------------------------------------------------------------------------

struct PointerBasis {
  qcore::SpectralDecomposition decomposition;
  bool degenerate = false;
};

inline PointerBasis pointer_basis(const EquilibriumVerdict &verdict, const DensityMatrix &rho_star,
                                  double group_tol = qcore::kGroupTol) {
  if (verdict.status != Status::decoheres)
    throw std::logic_error("pointer basis requested for a verdict that is not 'decoheres'");
  auto dec = qcore::spectral_projectors(rho_star.op(), group_tol);
  const bool degenerate = dec.degenerate();
  return {std::move(dec), degenerate};
}

//------------------------------------------------------------------------------
// Reports
//------------------------------------------------------------------------------

inline nlohmann::json verdict_json(const EquilibriumVerdict &v, const std::vector<std::string> &labels,
                                   const std::optional<PointerBasis> &basis = std::nullopt) {
  nlohmann::json j;
  j["status"] = to_string(v.status);
  j["window"] = {v.window.first, v.window.second};
  j["residual"] = v.residual;
  if (v.equilibrium_values) {
    nlohmann::json eq = nlohmann::json::object();
    for (std::size_t i = 0; i < labels.size(); ++i)
      eq[labels[i]] = (*v.equilibrium_values)[i];
    j["equilibrium_values"] = std::move(eq);
  } else {
    j["equilibrium_values"] = nullptr;
  }
  if (basis) {
    nlohmann::json pb;
    pb["degenerate"] = basis->degenerate;
    nlohmann::json groups = nlohmann::json::array();
    for (const auto &g : basis->decomposition.groups) {
      groups.push_back({{"eigenvalue", g.eigenvalue},
                        {"multiplicity", g.multiplicity},
                        {"projector", qcore::to_json(g.projector)}});
    }
    pb["groups"] = std::move(groups);
    j["pointer_basis"] = std::move(pb);
  } else {
    j["pointer_basis"] = nullptr;
  }
  return j;
}

} // namespace decolab::gtfd

#endif
