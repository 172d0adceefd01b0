#ifndef DECOLAB_QCORE_HPP
#define DECOLAB_QCORE_HPP

// Dense complex linear algebra over tensor-product Hilbert spaces.
//
// Factor ordering follows the Kronecker convention: factor 0 is the slowest
// varying index, so for qubits the basis index is the bitstring with factor 0
// as the most significant bit.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace decolab::qcore {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kGroupTol = 1e-8;

/// Largest number of qubits for which full dense operators are materialized.
inline constexpr std::size_t kDenseQubitCap = 13;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InvalidStateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

//------------------------------------------------------------------------------
// DimSignature
//------------------------------------------------------------------------------

class DimSignature {
public:
  explicit DimSignature(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
    if (factors_.empty())
      throw DimensionError("dimension signature must have at least one factor");
    for (auto d : factors_)
      if (d < 2)
        throw DimensionError("every tensor factor must have dimension >= 2, got " +
                             std::to_string(d));
  }

  static DimSignature qubits(std::size_t n) { return DimSignature(std::vector<std::size_t>(n, 2)); }

  std::size_t size() const { return factors_.size(); }
  std::size_t operator[](std::size_t i) const { return factors_.at(i); }
  const std::vector<std::size_t> &factors() const { return factors_; }

  std::size_t total() const {
    return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1},
                           std::multiplies<>());
  }

  /// Signature restricted to the given factor indices, in the given order.
  DimSignature subset(std::span<const std::size_t> idx) const {
    std::vector<std::size_t> out;
    out.reserve(idx.size());
    for (auto i : idx) {
      if (i >= factors_.size())
        throw DimensionError("factor index " + std::to_string(i) + " out of range");
      out.push_back(factors_[i]);
    }
    return DimSignature(std::move(out));
  }

  DimSignature concat(const DimSignature &other) const {
    auto out = factors_;
    out.insert(out.end(), other.factors_.begin(), other.factors_.end());
    return DimSignature(std::move(out));
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < factors_.size(); ++i)
      os << (i ? "," : "") << factors_[i];
    os << ']';
    return os.str();
  }

  friend bool operator==(const DimSignature &, const DimSignature &) = default;

private:
  std::vector<std::size_t> factors_;
};

//------------------------------------------------------------------------------
// Operator
//------------------------------------------------------------------------------

class Operator {
public:
  Operator(Matrix m, DimSignature sig) : m_(std::move(m)), sig_(std::move(sig)) {
    const auto d = static_cast<Eigen::Index>(sig_.total());
    if (m_.rows() != d || m_.cols() != d)
      throw DimensionError("matrix is " + std::to_string(m_.rows()) + "x" +
                           std::to_string(m_.cols()) + " but signature " + sig_.to_string() +
                           " has total dimension " + std::to_string(d));
  }

  /// Single-factor operator; the signature is the matrix side.
  explicit Operator(Matrix m) : Operator(m, DimSignature({static_cast<std::size_t>(m.rows())})) {}

  static Operator identity(const DimSignature &sig) {
    const auto d = static_cast<Eigen::Index>(sig.total());
    return Operator(Matrix::Identity(d, d), sig);
  }
  static Operator zero(const DimSignature &sig) {
    const auto d = static_cast<Eigen::Index>(sig.total());
    return Operator(Matrix::Zero(d, d), sig);
  }

  const Matrix &matrix() const { return m_; }
  const DimSignature &sig() const { return sig_; }
  std::size_t dim() const { return sig_.total(); }

  Operator adjoint() const { return Operator(m_.adjoint(), sig_); }
  cplx trace() const { return m_.trace(); }

  double hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  bool is_hermitian(double tol = kHermitianTol) const { return hermiticity_error() <= tol; }

  bool is_diagonal() const {
    for (Eigen::Index j = 0; j < m_.cols(); ++j)
      for (Eigen::Index i = 0; i < m_.rows(); ++i)
        if (i != j && m_(i, j) != cplx(0.0))
          return false;
    return true;
  }

  /// Frobenius distance; signatures must agree in total dimension.
  double distance(const Operator &o) const {
    check_same_dim(o);
    return (m_ - o.m_).norm();
  }
  double max_abs_diff(const Operator &o) const {
    check_same_dim(o);
    return (m_ - o.m_).cwiseAbs().maxCoeff();
  }

  Operator operator+(const Operator &o) const {
    check_same_dim(o);
    return Operator(m_ + o.m_, sig_);
  }
  Operator operator-(const Operator &o) const {
    check_same_dim(o);
    return Operator(m_ - o.m_, sig_);
  }
  Operator operator*(const Operator &o) const {
    check_same_dim(o);
    return Operator(m_ * o.m_, sig_);
  }
  Operator operator*(cplx s) const { return Operator(m_ * s, sig_); }
  friend Operator operator*(cplx s, const Operator &o) { return o * s; }

  void check_same_dim(const Operator &o) const {
    if (dim() != o.dim())
      throw DimensionError("dimension mismatch: " + std::to_string(dim()) + " vs " +
                           std::to_string(o.dim()));
  }

private:
  Matrix m_;
  DimSignature sig_;
};

inline Operator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(m);
}
inline Operator pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return Operator(m);
}
inline Operator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(m);
}

//------------------------------------------------------------------------------
// Index bookkeeping
//------------------------------------------------------------------------------

namespace detail {

inline std::vector<std::size_t> strides(const DimSignature &sig) {
  std::vector<std::size_t> s(sig.size());
  std::size_t acc = 1;
  for (std::size_t k = sig.size(); k-- > 0;) {
    s[k] = acc;
    acc *= sig[k];
  }
  return s;
}

inline std::vector<std::size_t> complement(std::span<const std::size_t> keep, std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto k : keep)
    in[k] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i])
      out.push_back(i);
  return out;
}

/// Sorted, de-duplicated, range-checked copy of a factor index set.
inline std::vector<std::size_t> normalize_indices(std::span<const std::size_t> idx, std::size_t n) {
  std::vector<std::size_t> out(idx.begin(), idx.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (auto i : out)
    if (i >= n)
      throw DimensionError("factor index " + std::to_string(i) + " out of range for " +
                           std::to_string(n) + " factors");
  return out;
}

/// For every environment configuration e, the full basis indices whose kept
/// part runs over 0..d_keep-1 in order. groups[e][k] is the full index.
inline std::vector<std::vector<std::size_t>> split_indices(const DimSignature &sig,
                                                           std::span<const std::size_t> keep) {
  const auto env = complement(keep, sig.size());
  const auto st = strides(sig);
  const auto keep_sig_total = sig.subset(keep).total();
  std::size_t env_total = 1;
  for (auto e : env)
    env_total *= sig[e];

  // offsets of the kept and environment sub-indices in the full index
  auto offsets = [&](std::span<const std::size_t> facs, std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t rem = c, o = 0;
      for (std::size_t k = facs.size(); k-- > 0;) {
        const auto f = facs[k];
        o += (rem % sig[f]) * st[f];
        rem /= sig[f];
      }
      off[c] = o;
    }
    return off;
  };
  const auto keep_off = offsets(keep, keep_sig_total);
  const auto env_off = offsets(env, env_total);

  std::vector<std::vector<std::size_t>> groups(env_total, std::vector<std::size_t>(keep_sig_total));
  for (std::size_t e = 0; e < env_total; ++e)
    for (std::size_t k = 0; k < keep_sig_total; ++k)
      groups[e][k] = env_off[e] + keep_off[k];
  return groups;
}

inline Matrix partial_trace_matrix(const Matrix &m, const DimSignature &sig,
                                   std::span<const std::size_t> keep) {
  const auto groups = split_indices(sig, keep);
  const auto dk = static_cast<Eigen::Index>(groups.front().size());
  Matrix out = Matrix::Zero(dk, dk);
  for (const auto &g : groups)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index i = 0; i < dk; ++i)
        out(i, j) += m(static_cast<Eigen::Index>(g[i]), static_cast<Eigen::Index>(g[j]));
  return out;
}

} // namespace detail

//------------------------------------------------------------------------------
// Composition and reduction
//------------------------------------------------------------------------------

inline Operator tensor_product(std::span<const Operator> ops) {
  if (ops.empty())
    throw std::invalid_argument("tensor_product of an empty sequence");
  Matrix acc = ops.front().matrix();
  auto sig = ops.front().sig();
  for (std::size_t k = 1; k < ops.size(); ++k) {
    const Matrix &b = ops[k].matrix();
    Matrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
    acc = std::move(next);
    sig = sig.concat(ops[k].sig());
  }
  return Operator(std::move(acc), std::move(sig));
}

inline Operator tensor_product(std::initializer_list<Operator> ops) {
  return tensor_product(std::span<const Operator>(ops.begin(), ops.size()));
}

/// Partial trace of an arbitrary operator, keeping the listed factors in
/// their original relative order.
inline Operator partial_trace(const Operator &op, std::span<const std::size_t> keep) {
  if (keep.empty())
    throw DimensionError("partial trace needs a non-empty set of kept factors");
  const auto k = detail::normalize_indices(keep, op.sig().size());
  return Operator(detail::partial_trace_matrix(op.matrix(), op.sig(), k), op.sig().subset(k));
}

/// Places `local` on the factors `positions` (in that order) of `sig`, with
/// the identity on every other factor.
inline Operator embed(const Operator &local, std::span<const std::size_t> positions,
                      const DimSignature &sig) {
  const auto pos = detail::normalize_indices(positions, sig.size());
  if (pos.size() != positions.size() || !std::equal(pos.begin(), pos.end(), positions.begin()))
    throw DimensionError("embed positions must be strictly increasing");
  if (sig.subset(pos) != local.sig())
    throw DimensionError("local operator signature " + local.sig().to_string() +
                         " does not match target factors " + sig.subset(pos).to_string());
  const auto groups = detail::split_indices(sig, pos);
  const auto d = static_cast<Eigen::Index>(sig.total());
  Matrix out = Matrix::Zero(d, d);
  const auto dk = static_cast<Eigen::Index>(groups.front().size());
  for (const auto &g : groups)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index i = 0; i < dk; ++i)
        out(static_cast<Eigen::Index>(g[i]), static_cast<Eigen::Index>(g[j])) = local.matrix()(i, j);
  return Operator(std::move(out), sig);
}

inline Operator commutator(const Operator &a, const Operator &b) { return a * b - b * a; }

//------------------------------------------------------------------------------
// DensityMatrix
//------------------------------------------------------------------------------

class DensityMatrix {
public:
  /// Validated construction: hermitian, unit trace, eigenvalues >= -tol.
  explicit DensityMatrix(Operator op, double tol = kHermitianTol) : op_(std::move(op)) {
    if (!op_.is_hermitian(tol))
      throw InvalidStateError("density matrix is not hermitian (error " +
                              std::to_string(op_.hermiticity_error()) + ")");
    const auto tr = op_.trace();
    if (std::abs(tr - cplx(1.0)) > tol)
      throw InvalidStateError("density matrix trace is " + std::to_string(tr.real()));
    const Matrix h = (op_.matrix() + op_.matrix().adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTol)
      throw InvalidStateError("density matrix has negative eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()));
  }

  /// Skips validation. Only for operations that provably preserve the state
  /// invariants (unitary evolution, partial trace, convex combination).
  struct Trusted {};
  DensityMatrix(Operator op, Trusted) : op_(std::move(op)) {}

  static DensityMatrix pure(const Vector &psi, const DimSignature &sig) {
    const double n = psi.norm();
    if (std::abs(n - 1.0) > kTraceTol)
      throw InvalidStateError("state vector is not normalized (norm " + std::to_string(n) + ")");
    return DensityMatrix(Operator(psi * psi.adjoint(), sig), Trusted{});
  }

  static DensityMatrix maximally_mixed(const DimSignature &sig) {
    const auto d = sig.total();
    return DensityMatrix(Operator::identity(sig) * cplx(1.0 / static_cast<double>(d)), Trusted{});
  }

  /// Hermitian part with negative eigenvalues clamped to zero and the trace
  /// renormalized to one.
  static DensityMatrix clamped(const Operator &op) {
    const Matrix h = (op.matrix() + op.matrix().adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const double s = ev.sum();
    if (s <= 0.0)
      throw InvalidStateError("cannot renormalize an operator with no positive spectrum");
    ev /= s;
    Matrix m = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix(Operator(std::move(m), op.sig()), Trusted{});
  }

  const Operator &op() const { return op_; }
  const Matrix &matrix() const { return op_.matrix(); }
  const DimSignature &sig() const { return op_.sig(); }
  std::size_t dim() const { return op_.dim(); }

  double purity() const { return (op_.matrix() * op_.matrix()).trace().real(); }

private:
  Operator op_;
};

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
  return DensityMatrix(partial_trace(rho.op(), keep), DensityMatrix::Trusted{});
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

inline DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b) {
  return DensityMatrix(tensor_product({a.op(), b.op()}), DensityMatrix::Trusted{});
}

/// Tr(rho O), computed in O(d^2).
inline cplx expectation(const DensityMatrix &rho, const Operator &o) {
  if (rho.dim() != o.dim())
    throw DimensionError("expectation: state has dimension " + std::to_string(rho.dim()) +
                         ", observable " + std::to_string(o.dim()));
  return rho.matrix().cwiseProduct(o.matrix().transpose()).sum();
}

//------------------------------------------------------------------------------
// Pure states
//------------------------------------------------------------------------------

class StateVector {
public:
  StateVector(Vector amps, DimSignature sig) : amps_(std::move(amps)), sig_(std::move(sig)) {
    if (amps_.size() != static_cast<Eigen::Index>(sig_.total()))
      throw DimensionError("state vector length does not match signature " + sig_.to_string());
    if (std::abs(amps_.norm() - 1.0) > kTraceTol)
      throw InvalidStateError("state vector is not normalized");
  }

  const Vector &amplitudes() const { return amps_; }
  const DimSignature &sig() const { return sig_; }
  std::size_t dim() const { return sig_.total(); }

  DensityMatrix to_density() const { return DensityMatrix::pure(amps_, sig_); }

private:
  Vector amps_;
  DimSignature sig_;
};

/// Reduced state Tr_E |psi><psi| without forming the full projector.
inline DensityMatrix reduced_state(const StateVector &psi, std::span<const std::size_t> keep) {
  if (keep.empty())
    throw DimensionError("reduced state needs a non-empty set of kept factors");
  const auto k = detail::normalize_indices(keep, psi.sig().size());
  const auto groups = detail::split_indices(psi.sig(), k);
  const auto dk = static_cast<Eigen::Index>(groups.front().size());
  // column e holds the kept amplitudes for environment configuration e
  Matrix m(dk, static_cast<Eigen::Index>(groups.size()));
  for (std::size_t e = 0; e < groups.size(); ++e)
    for (Eigen::Index i = 0; i < dk; ++i)
      m(i, static_cast<Eigen::Index>(e)) = psi.amplitudes()(static_cast<Eigen::Index>(groups[e][i]));
  Matrix r = m * m.adjoint();
  return DensityMatrix(Operator(std::move(r), psi.sig().subset(k)), DensityMatrix::Trusted{});
}

//------------------------------------------------------------------------------
// Diagonal operators (fast path)
//------------------------------------------------------------------------------

/// A real diagonal operator stored as its 2^n-style spectrum vector.
class DiagonalOperator {
public:
  DiagonalOperator(Eigen::VectorXd diag, DimSignature sig) : diag_(std::move(diag)), sig_(std::move(sig)) {
    if (diag_.size() != static_cast<Eigen::Index>(sig_.total()))
      throw DimensionError("diagonal length does not match signature " + sig_.to_string());
  }

  const Eigen::VectorXd &diagonal() const { return diag_; }
  const DimSignature &sig() const { return sig_; }
  std::size_t dim() const { return sig_.total(); }

  Operator to_operator() const {
    if (dim() > (std::size_t{1} << kDenseQubitCap))
      throw DimensionError("operator of dimension " + std::to_string(dim()) +
                           " exceeds the dense cap");
    return Operator(diag_.cast<cplx>().asDiagonal(), sig_);
  }

private:
  Eigen::VectorXd diag_;
  DimSignature sig_;
};

//------------------------------------------------------------------------------
// Spectral analysis
//------------------------------------------------------------------------------

struct SpectralGroup {
  double eigenvalue;
  Operator projector;
  std::size_t multiplicity;
};

struct SpectralDecomposition {
  std::vector<SpectralGroup> groups;

  std::size_t size() const { return groups.size(); }
  bool degenerate() const {
    return std::any_of(groups.begin(), groups.end(),
                       [](const SpectralGroup &g) { return g.multiplicity > 1; });
  }
  /// Sum_i f(lambda_i) P_i.
  template <class F> Operator apply(F &&f) const {
    auto out = Operator::zero(groups.front().projector.sig());
    for (const auto &g : groups)
      out = out + g.projector * cplx(f(g.eigenvalue));
    return out;
  }
  Operator reconstruct() const {
    return apply([](double x) { return x; });
  }
};

inline void require_hermitian(const Operator &h, const char *what) {
  if (!h.is_hermitian())
    throw NotHermitianError(std::string(what) + ": operator is not hermitian (error " +
                            std::to_string(h.hermiticity_error()) + ")");
}

/// Eigenvalues clustered by single linkage on the sorted spectrum: a new group
/// starts whenever the gap to the previous eigenvalue is >= group_tol.
inline SpectralDecomposition spectral_projectors(const Operator &h, double group_tol = kGroupTol) {
  require_hermitian(h, "spectral_projectors");
  if (!(group_tol > 0.0))
    throw std::invalid_argument("spectral_projectors: group_tol must be positive");
  const Matrix herm = (h.matrix() + h.matrix().adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  const auto &ev = es.eigenvalues();
  const auto &vecs = es.eigenvectors();

  SpectralDecomposition out;
  Eigen::Index start = 0;
  const Eigen::Index n = ev.size();
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || ev(i) - ev(i - 1) >= group_tol) {
      const Eigen::Index len = i - start;
      const auto block = vecs.middleCols(start, len);
      const double mean = ev.segment(start, len).mean();
      out.groups.push_back(
          {mean, Operator(block * block.adjoint(), h.sig()), static_cast<std::size_t>(len)});
      start = i;
    }
  }
  return out;
}

/// exp(i * s * G) for hermitian G.
inline Operator unitary_exp(const Operator &g, double s) {
  require_hermitian(g, "unitary_exp");
  const Matrix herm = (g.matrix() + g.matrix().adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  const Vector phases = (es.eigenvalues() * s).unaryExpr([](double x) { return std::polar(1.0, x); });
  return Operator(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint(), g.sig());
}

//------------------------------------------------------------------------------
// Evolution
//------------------------------------------------------------------------------

/// Time-independent propagator for rho -> e^{-iHt} rho e^{iHt}. Diagonalizes
/// once, so repeated evaluation over a time grid is cheap. A diagonal H takes
/// the exact per-basis-state phase path.
class Propagator {
public:
  enum class Method { automatic, spectral };

  explicit Propagator(const Operator &h, Method method = Method::automatic) : sig_(h.sig()) {
    require_hermitian(h, "evolve");
    if (method == Method::automatic && h.is_diagonal()) {
      energies_ = h.matrix().diagonal().real();
      return;
    }
    const Matrix herm = (h.matrix() + h.matrix().adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors();
  }

  explicit Propagator(const DiagonalOperator &h) : sig_(h.sig()), energies_(h.diagonal()) {}

  bool diagonal_path() const { return !basis_.has_value(); }

  DensityMatrix apply(const DensityMatrix &rho, double t) const {
    check(rho.dim());
    if (t == 0.0)
      return rho;
    const Vector u = phases(t);
    if (diagonal_path()) {
      Matrix m = u.asDiagonal() * rho.matrix() * u.adjoint().asDiagonal();
      return DensityMatrix(Operator(std::move(m), rho.sig()), DensityMatrix::Trusted{});
    }
    const Matrix &v = *basis_;
    Matrix in_eig = v.adjoint() * rho.matrix() * v;
    in_eig = u.asDiagonal() * in_eig * u.adjoint().asDiagonal();
    Matrix m = v * in_eig * v.adjoint();
    return DensityMatrix(Operator(std::move(m), rho.sig()), DensityMatrix::Trusted{});
  }

  StateVector apply(const StateVector &psi, double t) const {
    check(psi.dim());
    const Vector u = phases(t);
    if (diagonal_path())
      return StateVector(u.cwiseProduct(psi.amplitudes()), psi.sig());
    const Matrix &v = *basis_;
    Vector c = v.adjoint() * psi.amplitudes();
    return StateVector(v * u.cwiseProduct(c), psi.sig());
  }

private:
  Vector phases(double t) const {
    return energies_.unaryExpr([t](double e) { return std::polar(1.0, -e * t); });
  }
  void check(std::size_t d) const {
    if (d != sig_.total())
      throw DimensionError("evolve: state dimension " + std::to_string(d) +
                           " does not match Hamiltonian dimension " + std::to_string(sig_.total()));
  }

  DimSignature sig_;
  Eigen::VectorXd energies_;
  std::optional<Matrix> basis_;
};

inline DensityMatrix evolve(const DensityMatrix &rho0, const Operator &h, double t) {
  return Propagator(h).apply(rho0, t);
}

inline StateVector evolve(const StateVector &psi0, const DiagonalOperator &h, double t) {
  return Propagator(h).apply(psi0, t);
}

} // namespace decolab::qcore

#endif
