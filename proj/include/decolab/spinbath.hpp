#ifndef DECOLAB_SPINBATH_HPP
#define DECOLAB_SPINBATH_HPP

// Central spin P coupled to N non-interacting bath spins P_1..P_N:
//
//   H = sum_i (g_i / 2) sigma_z^(P) sigma_z^(i)
//
// Factor order is [P, P_1, ..., P_N]. |0> is spin up (sigma_z = +1). Self
// Hamiltonians are zero, so H is diagonal in the computational basis and the
// off-diagonal element <0|rho_P(t)|1> equals a * conj(b) * r(t) with
//
//   r(t) = prod_i [ cos(g_i t) - i (|alpha_i|^2 - |beta_i|^2) sin(g_i t) ].

#include "decolab/qcore.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace decolab::spinbath {

using qcore::cplx;

/// Largest total qubit count for the state-vector path.
inline constexpr std::size_t kVectorQubitCap = 24;

struct SpinBathModel {
  std::size_t n_bath = 0;
  std::vector<double> couplings;

  SpinBathModel() = default;
  explicit SpinBathModel(std::vector<double> g) : n_bath(g.size()), couplings(std::move(g)) {
    if (n_bath == 0)
      throw std::invalid_argument("spin-bath model needs at least one bath spin");
  }

  std::size_t qubits() const { return n_bath + 1; }
  qcore::DimSignature sig() const { return qcore::DimSignature::qubits(qubits()); }
};

/// Couplings drawn i.i.d. uniform(low, high) from a seeded mt19937_64.
inline std::vector<double> random_couplings(std::size_t n, double low, double high, std::uint64_t seed) {
  if (!(low < high))
    throw std::invalid_argument("random couplings need low < high");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(low, high);
  std::vector<double> g(n);
  for (auto &x : g)
    x = dist(rng);
  return g;
}

using SpinAmplitudes = std::pair<cplx, cplx>; // (up, down)

struct ProductState {
  SpinAmplitudes p;
  std::vector<SpinAmplitudes> bath;

  void validate(std::size_t n_bath) const {
    if (bath.size() != n_bath)
      throw std::invalid_argument("product state has " + std::to_string(bath.size()) +
                                  " bath amplitude pairs, model has " + std::to_string(n_bath));
    auto check = [](const SpinAmplitudes &s, const std::string &who) {
      const double n = std::norm(s.first) + std::norm(s.second);
      if (std::abs(n - 1.0) > 1e-12)
        throw qcore::InvalidStateError(who + " amplitudes are not normalized (|a|^2+|b|^2 = " +
                                       std::to_string(n) + ")");
    };
    check(p, "central spin");
    for (std::size_t i = 0; i < bath.size(); ++i)
      check(bath[i], "bath spin " + std::to_string(i + 1));
  }
};

inline SpinAmplitudes balanced_spin() {
  const double s = 1.0 / std::sqrt(2.0);
  return {cplx(s), cplx(s)};
}

/// Every spin in (|0> + |1>)/sqrt(2).
inline ProductState balanced_state(std::size_t n_bath) {
  return {balanced_spin(), std::vector<SpinAmplitudes>(n_bath, balanced_spin())};
}

/// Haar-random bath spins, central spin balanced.
inline ProductState random_state(std::size_t n_bath, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpinAmplitudes> bath(n_bath);
  for (auto &s : bath) {
    const double cos_theta = 2.0 * u(rng) - 1.0;
    const double phi = 2.0 * M_PI * u(rng);
    const double up = std::sqrt((1.0 + cos_theta) / 2.0);
    const double down = std::sqrt((1.0 - cos_theta) / 2.0);
    s = {cplx(up), std::polar(down, phi)};
  }
  return {balanced_spin(), std::move(bath)};
}

//------------------------------------------------------------------------------
// Hamiltonian and states
//------------------------------------------------------------------------------

/// Diagonal of H, indexed by bitstrings with P as the most significant bit.
inline qcore::DiagonalOperator build_hamiltonian(const SpinBathModel &model) {
  if (model.n_bath == 0)
    throw std::invalid_argument("build_hamiltonian: N must be at least 1");
  if (model.couplings.size() != model.n_bath)
    throw std::invalid_argument("build_hamiltonian: couplings length must equal N");
  const std::size_t n = model.qubits();
  if (n > kVectorQubitCap)
    throw qcore::DimensionError("spin-bath with " + std::to_string(n) + " qubits exceeds the cap of " +
                                std::to_string(kVectorQubitCap));
  const std::size_t d = std::size_t{1} << n;
  Eigen::VectorXd e(static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < d; ++x) {
    const double sp = ((x >> (n - 1)) & 1U) ? -1.0 : 1.0;
    double acc = 0.0;
    for (std::size_t i = 1; i <= model.n_bath; ++i) {
      const double si = ((x >> (n - 1 - i)) & 1U) ? -1.0 : 1.0;
      acc += 0.5 * model.couplings[i - 1] * sp * si;
    }
    e(static_cast<Eigen::Index>(x)) = acc;
  }
  return qcore::DiagonalOperator(std::move(e), model.sig());
}

/// |psi_0> = (a|0> + b|1>) (x) prod_i (alpha_i|0> + beta_i|1>).
inline qcore::StateVector initial_vector(const SpinBathModel &model, const ProductState &ps) {
  ps.validate(model.n_bath);
  if (model.qubits() > kVectorQubitCap)
    throw qcore::DimensionError("initial state exceeds the state-vector cap");
  qcore::Vector v(2);
  v << ps.p.first, ps.p.second;
  for (const auto &s : ps.bath) {
    qcore::Vector next(v.size() * 2);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      next(2 * k) = v(k) * s.first;
      next(2 * k + 1) = v(k) * s.second;
    }
    v = std::move(next);
  }
  v.normalize();
  return qcore::StateVector(std::move(v), model.sig());
}

/// rho_0 = |psi_0><psi_0| (dense; capped at 13 qubits).
inline qcore::DensityMatrix initial_state(const SpinBathModel &model, const ProductState &ps) {
  if (model.qubits() > qcore::kDenseQubitCap)
    throw qcore::DimensionError("dense initial state exceeds the cap of " +
                                std::to_string(qcore::kDenseQubitCap) + " qubits");
  const auto psi = initial_vector(model, ps);
  return psi.to_density();
}

//------------------------------------------------------------------------------
// Partitions
//------------------------------------------------------------------------------

struct Partition {
  std::vector<std::size_t> system;
  std::vector<std::size_t> environment;

  Partition(std::vector<std::size_t> sys, std::size_t n_factors) {
    if (sys.empty())
      throw std::invalid_argument("partition system must be non-empty");
    system = qcore::detail::normalize_indices(sys, n_factors);
    if (system.size() != sys.size())
      throw std::invalid_argument("partition system has duplicate factor indices");
    environment = qcore::detail::complement(system, n_factors);
  }

  std::size_t factors() const { return system.size() + environment.size(); }
};

namespace partition_spec {
/// S = P, E = all bath spins.
struct Dec1 {};
/// S = P_j, E = P and the other bath spins.
struct Dec2 {
  std::size_t j;
};
/// S = P_1..P_p, E = P and P_{p+1}..P_N.
struct Dec3 {
  std::size_t p;
};
struct Custom {
  std::vector<std::size_t> system;
};
} // namespace partition_spec

using PartitionSpec =
    std::variant<partition_spec::Dec1, partition_spec::Dec2, partition_spec::Dec3, partition_spec::Custom>;

inline Partition make_partition(const SpinBathModel &model, const PartitionSpec &spec) {
  namespace ps = partition_spec;
  const std::size_t n = model.qubits();
  const std::size_t big_n = model.n_bath;
  return std::visit(
      [&](const auto &s) -> Partition {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ps::Dec1>) {
          return Partition({0}, n);
        } else if constexpr (std::is_same_v<T, ps::Dec2>) {
          if (s.j < 1 || s.j > big_n)
            throw std::out_of_range("dec2: j must lie in [1, " + std::to_string(big_n) + "]");
          return Partition({s.j}, n);
        } else if constexpr (std::is_same_v<T, ps::Dec3>) {
          if (s.p < 1 || s.p > big_n)
            throw std::out_of_range("dec3: p must lie in [1, " + std::to_string(big_n) + "]");
          std::vector<std::size_t> sys(s.p);
          for (std::size_t i = 0; i < s.p; ++i)
            sys[i] = i + 1;
          return Partition(std::move(sys), n);
        } else {
          if (s.system.empty())
            throw std::invalid_argument("custom partition: empty system");
          for (auto i : s.system)
            if (i >= n)
              throw std::out_of_range("custom partition: factor " + std::to_string(i) + " out of range");
          return Partition(s.system, n);
        }
      },
      spec);
}

//------------------------------------------------------------------------------
// Analytic fast path
//------------------------------------------------------------------------------

inline cplx coherence_factor(const SpinBathModel &model, const ProductState &ps, double t) {
  ps.validate(model.n_bath);
  cplx r(1.0, 0.0);
  for (std::size_t i = 0; i < model.n_bath; ++i) {
    const double c = std::norm(ps.bath[i].first) - std::norm(ps.bath[i].second);
    const double w = model.couplings[i] * t;
    r *= cplx(std::cos(w), -c * std::sin(w));
  }
  return r;
}

/// rho_P(t) from the coherence factor.
inline qcore::DensityMatrix central_reduced_state(const SpinBathModel &model, const ProductState &ps,
                                                  double t) {
  const auto [a, b] = ps.p;
  const cplx off = a * std::conj(b) * coherence_factor(model, ps, t);
  qcore::Matrix m(2, 2);
  m << std::norm(a), off, std::conj(off), std::norm(b);
  return qcore::DensityMatrix(qcore::Operator(m), qcore::DensityMatrix::Trusted{});
}

/// rho_{P_j}(t): bath spin j sees a phase +-g_j t depending on the branch of P,
/// so its coherence is alpha_j conj(beta_j) (|a|^2 e^{-i g_j t} + |b|^2 e^{i g_j t}).
inline qcore::DensityMatrix bath_reduced_state(const SpinBathModel &model, const ProductState &ps,
                                               std::size_t j, double t) {
  ps.validate(model.n_bath);
  if (j < 1 || j > model.n_bath)
    throw std::out_of_range("bath spin index out of range");
  const auto [alpha, beta] = ps.bath[j - 1];
  const double w = model.couplings[j - 1] * t;
  const cplx off = alpha * std::conj(beta) *
                   (std::norm(ps.p.first) * std::polar(1.0, -w) + std::norm(ps.p.second) * std::polar(1.0, w));
  qcore::Matrix m(2, 2);
  m << std::norm(alpha), off, std::conj(off), std::norm(beta);
  return qcore::DensityMatrix(qcore::Operator(m), qcore::DensityMatrix::Trusted{});
}

} // namespace decolab::spinbath

#endif
