#ifndef DECOLAB_LIEALG_BUILTINS_HPP
#define DECOLAB_LIEALG_BUILTINS_HPP

#include "decolab/liealg/algebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace decolab::liealg {

namespace detail {

inline std::string idx(const char *base, int i) { return std::string(base) + std::to_string(i); }

/// eps_{ijk} for i != j, returning k through the out-parameter.
inline int levi_civita(int i, int j, int &k) {
  k = 6 - i - j;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

/// [J_i, X_j] = i eps_ijk X_k for a vector operator X (X may be J itself).
inline void add_rotation_action(std::vector<BracketSpec> &br, const char *x) {
  const bool self = std::string(x) == "J";
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j || (self && j < i))
        continue;
      int k = 0;
      const int s = levi_civita(i, j, k);
      br.push_back({idx("J", i), idx(x, j), {{idx(x, k), Scalar::i() * Scalar(s)}}});
    }
}

inline std::vector<std::string> spacetime_generators() {
  return {"H", "P1", "P2", "P3", "J1", "J2", "J3", "K1", "K2", "K3"};
}

} // namespace detail

/// su(2): [J_i, J_j] = i eps_ijk J_k.
inline LieAlgebra su2() {
  std::vector<BracketSpec> br;
  detail::add_rotation_action(br, "J");
  return LieAlgebra({"J1", "J2", "J3"}, br);
}

inline LieAlgebra abelian(std::size_t n) {
  std::vector<std::string> g;
  for (std::size_t i = 1; i <= n; ++i)
    g.push_back("X" + std::to_string(i));
  return LieAlgebra(std::move(g), std::vector<BracketSpec>{});
}

/// Poincare algebra iso(1,3), generators H, P1..P3, J1..J3, K1..K3.
///
///   [J_i, J_j] = i eps_ijk J_k     [J_i, P_j] = i eps_ijk P_k
///   [J_i, K_j] = i eps_ijk K_k     [K_i, K_j] = -i eps_ijk J_k
///   [P_i, K_j] = -i delta_ij H     [K_i, H]   = i P_i
///   [P_i, P_j] = [P_i, H] = [J_i, H] = 0
///
/// Mostly-minus metric; the boost sign is fixed by [P_i, K_j] = -i delta_ij H,
/// which also gives [K_i, H] = i P_i, the same sign the Galilei boost has.
inline LieAlgebra poincare() {
  std::vector<BracketSpec> br;
  detail::add_rotation_action(br, "J");
  detail::add_rotation_action(br, "P");
  detail::add_rotation_action(br, "K");
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      int k = 0;
      const int s = detail::levi_civita(i, j, k);
      br.push_back({detail::idx("K", i), detail::idx("K", j), {{detail::idx("J", k), Scalar::i() * Scalar(-s)}}});
    }
  for (int i = 1; i <= 3; ++i) {
    br.push_back({detail::idx("P", i), detail::idx("K", i), {{"H", -Scalar::i()}}});
    br.push_back({detail::idx("K", i), "H", {{detail::idx("P", i), Scalar::i()}}});
  }
  return LieAlgebra(detail::spacetime_generators(), br);
}

/// Mass-extended Galilei algebra, generators H, P1..P3, J1..J3, K1..K3, M.
/// Same rotation action as poincare(), commuting boosts,
/// [P_i, K_j] = -i delta_ij M, [K_i, H] = i P_i, M central.
inline LieAlgebra extended_galilei() {
  std::vector<BracketSpec> br;
  detail::add_rotation_action(br, "J");
  detail::add_rotation_action(br, "P");
  detail::add_rotation_action(br, "K");
  for (int i = 1; i <= 3; ++i) {
    br.push_back({detail::idx("P", i), detail::idx("K", i), {{"M", -Scalar::i()}}});
    br.push_back({detail::idx("K", i), "H", {{detail::idx("P", i), Scalar::i()}}});
  }
  auto gens = detail::spacetime_generators();
  gens.push_back("M");
  return LieAlgebra(std::move(gens), br);
}

/// The contraction pipeline on the trivially extended Poincare algebra.
struct ContractionPipeline {
  LieAlgebra poincare;
  LieAlgebra extended;   // + central M
  LieAlgebra rebased;    // H replaced by Hb = H - M
  LieAlgebra rescaled;   // X' = eps^k X
  LieAlgebra contracted; // eps -> 0
};

inline const std::string kShiftedEnergy = "Hb";

/// J' = J, P' = eps P, K' = eps K, Hb' = Hb, M' = eps^2 M.
inline std::map<std::string, int> contraction_schedule() {
  std::map<std::string, int> s{{kShiftedEnergy, 0}, {"M", 2}};
  for (int i = 1; i <= 3; ++i) {
    s[detail::idx("P", i)] = 1;
    s[detail::idx("J", i)] = 0;
    s[detail::idx("K", i)] = 1;
  }
  return s;
}

inline BasisChange shifted_energy_change(const LieAlgebra &extended) {
  return replace_generator(extended, "H", kShiftedEnergy, {{"H", Scalar(1)}, {"M", Scalar(-1)}});
}

inline ContractionPipeline run_contraction_pipeline() {
  auto p = poincare();
  auto ext = extend_trivially(p, "M");
  auto reb = change_basis(ext, shifted_energy_change(ext));
  auto res = rescale(reb, contraction_schedule());
  auto con = contract(res);
  return {std::move(p), std::move(ext), std::move(reb), std::move(res), std::move(con)};
}

/// Primed contracted names -> extended_galilei() names (Hb' -> H, X' -> X).
inline std::map<std::string, std::string> galilei_mapping(const LieAlgebra &contracted) {
  std::map<std::string, std::string> m;
  for (const auto &g : contracted.generators()) {
    std::string base = g;
    if (!base.empty() && base.back() == '\'')
      base.pop_back();
    m[g] = base == kShiftedEnergy ? "H" : base;
  }
  return m;
}

} // namespace decolab::liealg

#endif
