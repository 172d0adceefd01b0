#ifndef DECOLAB_MHI_HPP
#define DECOLAB_MHI_HPP

// Actual-valued observables under the modal-Hamiltonian reading: the
// preferred context of H is the commutative algebra spanned by the spectral
// projectors of H. An observable belongs to it iff it is a function of those
// projectors, i.e. it commutes with H and does not split any degenerate
// eigenspace.

#include "decolab/qcore.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace decolab::mhi {

using qcore::cplx;
using qcore::Operator;

struct PreferredContext {
  qcore::SpectralDecomposition decomposition;
  double group_tol = qcore::kGroupTol;

  std::vector<double> eigenvalues() const {
    std::vector<double> out;
    for (const auto &g : decomposition.groups)
      out.push_back(g.eigenvalue);
    return out;
  }
  std::vector<std::size_t> multiplicities() const {
    std::vector<std::size_t> out;
    for (const auto &g : decomposition.groups)
      out.push_back(g.multiplicity);
    return out;
  }
  const Operator &projector(std::size_t i) const { return decomposition.groups.at(i).projector; }
  std::size_t size() const { return decomposition.size(); }

  /// sum_i c_i P_i.
  Operator element(std::span<const double> coeffs) const {
    if (coeffs.size() != size())
      throw std::invalid_argument("context element needs one coefficient per projector");
    auto out = Operator::zero(projector(0).sig());
    for (std::size_t i = 0; i < size(); ++i)
      out = out + projector(i) * cplx(coeffs[i]);
    return out;
  }
};

inline PreferredContext preferred_context(const Operator &h, double group_tol = qcore::kGroupTol) {
  return {qcore::spectral_projectors(h, group_tol), group_tol};
}

/// True iff O = sum_i P_i O P_i and every block P_i O P_i is a multiple of P_i.
inline bool is_actual_valued(const Operator &o, const PreferredContext &ctx, double tol = 1e-10) {
  if (o.dim() != ctx.projector(0).dim())
    throw qcore::DimensionError("observable and context dimensions differ");
  qcore::Matrix blocks = qcore::Matrix::Zero(o.matrix().rows(), o.matrix().cols());
  for (const auto &g : ctx.decomposition.groups) {
    const qcore::Matrix &p = g.projector.matrix();
    const qcore::Matrix c = p * o.matrix() * p;
    const cplx lambda = c.trace() / static_cast<double>(g.multiplicity);
    if ((c - lambda * p).norm() > tol)
      return false;
    blocks += c;
  }
  return (o.matrix() - blocks).norm() <= tol;
}

struct CspReport {
  bool decomposable = false;
  Operator h1;
  Operator h2;
  double interaction_norm = 0.0;
};

/// Frobenius projection of H onto span{A (x) I, I (x) B} for the bipartition
/// (first, rest). H^1 = Tr_2 H / d_2, H^2 = Tr_1 H / d_1 - Tr H / d I (so H^2 is
/// traceless), and the interaction norm is the size of what is left.
inline CspReport csp_check(const Operator &h, std::span<const std::size_t> first, double tol = 1e-10) {
  const auto &sig = h.sig();
  const auto part1 = qcore::detail::normalize_indices(first, sig.size());
  if (part1.empty() || part1.size() != first.size() || part1.size() == sig.size())
    throw std::invalid_argument("csp_check: split must be a proper, non-empty set of distinct factors");
  const auto part2 = qcore::detail::complement(part1, sig.size());
  const double d1 = static_cast<double>(sig.subset(part1).total());
  const double d2 = static_cast<double>(sig.subset(part2).total());

  const Operator h1 = qcore::partial_trace(h, part1) * cplx(1.0 / d2);
  Operator h2 = qcore::partial_trace(h, part2) * cplx(1.0 / d1);
  h2 = h2 - Operator::identity(h2.sig()) * (h.trace() / (d1 * d2));

  const Operator local = qcore::embed(h1, part1, sig) + qcore::embed(h2, part2, sig);
  const double residual = (h.matrix() - local.matrix()).norm();
  return {residual <= tol, h1, h2, residual};
}

inline CspReport csp_check(const Operator &h, std::initializer_list<std::size_t> first, double tol = 1e-10) {
  return csp_check(h, std::span<const std::size_t>(first.begin(), first.size()), tol);
}

/// Conjugates every context projector by exp(i G theta) and checks that each
/// one is left unchanged to 1e-10.
inline bool context_invariance(const Operator &h, const Operator &g, std::span<const double> params,
                               double group_tol = qcore::kGroupTol) {
  if (h.dim() != g.dim())
    throw qcore::DimensionError("context_invariance: H and G dimensions differ");
  qcore::require_hermitian(g, "context_invariance");
  const auto ctx = preferred_context(h, group_tol);
  for (double theta : params) {
    const auto u = qcore::unitary_exp(g, theta);
    for (const auto &grp : ctx.decomposition.groups) {
      const qcore::Matrix moved = u.matrix() * grp.projector.matrix() * u.matrix().adjoint();
      if ((moved - grp.projector.matrix()).cwiseAbs().maxCoeff() > 1e-10)
        return false;
    }
  }
  return true;
}

} // namespace decolab::mhi

#endif
