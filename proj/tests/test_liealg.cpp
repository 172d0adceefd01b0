#include "decolab/liealg/builtins.hpp"
#include "decolab/liealg/json.hpp"
#include "decolab/liealg/ncpoly.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace decolab::liealg;

namespace {

const Scalar I = Scalar::i();

NcPoly word(const LieAlgebra &alg, std::initializer_list<const char *> names, Scalar c = Scalar(1)) {
  Word w;
  for (const char *n : names)
    w.push_back(alg.index(n));
  return NcPoly(std::move(w), std::move(c));
}

LieElement elem(const LieAlgebra &alg, std::initializer_list<std::pair<const char *, Scalar>> terms) {
  LieElement e;
  for (const auto &[n, c] : terms)
    e.add(alg.index(n), c);
  return e;
}

std::map<std::string, std::string> identity_mapping(const LieAlgebra &a) { return name_mapping(a, a.generators()); }

/// sum_i X_i X_i for X in {P, K, ...}; `suffix` selects primed names.
NcPoly square(const LieAlgebra &alg, const std::string &base, const std::string &suffix = "") {
  NcPoly out;
  for (int i = 1; i <= 3; ++i) {
    const auto g = alg.index(base + std::to_string(i) + suffix);
    out = out + NcPoly(Word{g, g});
  }
  return out;
}

/// H^2 - P.P in whatever algebra carries generators named H and P1..P3.
NcPoly mass_shell(const LieAlgebra &alg) { return word(alg, {"H", "H"}) - square(alg, "P"); }

NcPoly random_cubic(const LieAlgebra &alg, std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::size_t> gen(0, alg.dim() - 1);
  std::uniform_int_distribution<int> len(0, 3), num(-5, 5), den(1, 4), terms(1, 6);
  NcPoly p;
  const int n = terms(rng);
  for (int t = 0; t < n; ++t) {
    Word w;
    const int l = t == 0 ? 3 : len(rng);
    for (int k = 0; k < l; ++k)
      w.push_back(gen(rng));
    p.add(w, Scalar(GaussianRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)))));
  }
  return p;
}

} // namespace

TEST_CASE("algebra construction and validation") {
  CHECK_FALSE(abelian(4).jacobi_violation());
  CHECK(abelian(4).table().empty());
  const auto s = su2();
  CHECK_FALSE(s.jacobi_violation());
  CHECK(s.bracket("J1", "J2") == elem(s, {{"J3", I}}));
  CHECK(s.bracket("J3", "J1") == elem(s, {{"J2", I}}));
  CHECK(s.bracket("J2", "J1") == elem(s, {{"J3", -I}}));

  SECTION("tampered su(2) is rejected with the failing triple") {
    std::vector<BracketSpec> br{{"J1", "J2", {{"J3", I}, {"J1", Scalar(1)}}},
                                {"J2", "J3", {{"J1", I}}},
                                {"J3", "J1", {{"J2", I}}}};
    try {
      LieAlgebra({"J1", "J2", "J3"}, br);
      FAIL("tampered algebra accepted");
    } catch (const JacobiError &e) {
      CHECK(e.a == "J1");
      CHECK(e.b == "J2");
      CHECK(e.c == "J3");
    }
  }
  SECTION("malformed input") {
    CHECK_THROWS_AS(LieAlgebra({"A", "B"}, {{"A", "C", {}}}), UnknownGeneratorError);
    CHECK_THROWS_AS(LieAlgebra({"A", "B"}, {{"A", "B", {{"Z", Scalar(1)}}}}), UnknownGeneratorError);
    CHECK_THROWS(LieAlgebra({"A", "A"}, std::vector<BracketSpec>{}));
    CHECK_THROWS(LieAlgebra({}, std::vector<BracketSpec>{}));
    CHECK_THROWS(LieAlgebra({"A", "B"}, {{"A", "A", {{"B", Scalar(1)}}}}));
    CHECK_THROWS(LieAlgebra({"A", "B"}, {{"A", "B", {{"B", Scalar(1)}}}, {"B", "A", {{"B", Scalar(-1)}}}}));
  }
}

TEST_CASE("poincare and its trivial extension") {
  const auto p = poincare();
  CHECK(p.dim() == 10);
  CHECK_FALSE(p.jacobi_violation());
  CHECK(p.bracket("J1", "P2") == elem(p, {{"P3", I}}));
  CHECK(p.bracket("K1", "K2") == elem(p, {{"J3", -I}}));
  CHECK(p.bracket("P2", "K2") == elem(p, {{"H", -I}}));
  CHECK(p.bracket("P1", "K2").is_zero());
  CHECK(p.bracket("K3", "H") == elem(p, {{"P3", I}}));
  for (const char *g : {"P1", "P2", "P3", "J1", "J2", "J3"})
    CHECK(p.bracket(g, "H").is_zero());

  const auto ext = extend_trivially(p, "M");
  CHECK(ext.dim() == 11);
  CHECK_FALSE(ext.jacobi_violation());
  for (const auto &g : ext.generators())
    CHECK(ext.bracket(g, "M").is_zero());
  CHECK_THROWS(extend_trivially(ext, "M"));
}

TEST_CASE("change_basis") {
  const auto ext = extend_trivially(poincare(), "M");
  SECTION("identity map") {
    const auto same = change_basis(ext, replace_generator(ext, "H", "H", {{"H", Scalar(1)}}));
    CHECK(same.generators() == ext.generators());
    CHECK(same.table() == ext.table());
  }
  SECTION("shifted energy") {
    const auto reb = change_basis(ext, shifted_energy_change(ext));
    CHECK_FALSE(reb.jacobi_violation());
    CHECK(reb.generators()[0] == "Hb");
    // [P_i, K_j] = -i delta_ij (Hb + M); all other brackets keep their form.
    CHECK(reb.bracket("P1", "K1") == elem(reb, {{"Hb", -I}, {"M", -I}}));
    CHECK(reb.bracket("P1", "K2").is_zero());
    CHECK(reb.bracket("K2", "Hb") == elem(reb, {{"P2", I}}));
    CHECK(reb.bracket("K1", "K2") == elem(reb, {{"J3", -I}}));
    for (const auto &g : reb.generators())
      CHECK(reb.bracket(g, "M").is_zero());

    const auto back = change_basis(reb, replace_generator(reb, "Hb", "H", {{"Hb", Scalar(1)}, {"M", Scalar(1)}}));
    CHECK(back.generators() == ext.generators());
    CHECK(back.table() == ext.table());
  }
  SECTION("errors") {
    CHECK_THROWS(change_basis(ext, replace_generator(ext, "H", "Z", {{"M", Scalar(1)}})));
    CHECK_THROWS(change_basis(ext, BasisChange{}));
    CHECK_THROWS_AS(replace_generator(ext, "Q", "Z", {}), UnknownGeneratorError);
  }
}

TEST_CASE("rescale and contract") {
  const auto pipe = run_contraction_pipeline();
  const auto &r = pipe.rescaled;
  const Scalar e2 = Scalar::eps(2);
  SECTION("rescaled brackets") {
    CHECK_FALSE(r.jacobi_violation());
    CHECK(r.bracket("P1'", "K1'") == elem(r, {{"Hb'", -I * e2}, {"M'", -I}}));
    CHECK(r.bracket("P3'", "K2'").is_zero());
    CHECK(r.bracket("K1'", "K2'") == elem(r, {{"J3'", -I * e2}}));
    CHECK(r.bracket("K2'", "Hb'") == elem(r, {{"P2'", I}}));
    CHECK(r.bracket("J1'", "K2'") == elem(r, {{"K3'", I}}));
  }
  SECTION("zero schedule leaves the algebra unchanged") {
    std::map<std::string, int> zero;
    for (const auto &g : pipe.extended.generators())
      zero[g] = 0;
    const auto same = rescale(pipe.extended, zero, "");
    CHECK(same.table() == pipe.extended.table());
    CHECK_THROWS(rescale(pipe.extended, {{"H", 0}}));
    zero["Q"] = 1;
    CHECK_THROWS_AS(rescale(pipe.extended, zero), UnknownGeneratorError);
  }
  SECTION("contracted brackets") {
    const auto &c = pipe.contracted;
    CHECK_FALSE(c.jacobi_violation());
    CHECK(c.bracket("P2'", "K2'") == elem(c, {{"M'", -I}}));
    for (const char *a : {"K1'", "K2'", "K3'"})
      for (const char *b : {"K1'", "K2'", "K3'"})
        CHECK(c.bracket(a, b).is_zero());
    CHECK(c.bracket("K1'", "Hb'") == elem(c, {{"P1'", I}}));
  }
  SECTION("eps-free algebras are unchanged, poles are rejected") {
    CHECK(contract(poincare()).table() == poincare().table());
    const auto p = poincare();
    std::map<std::string, int> bad;
    for (const auto &g : p.generators())
      bad[g] = g[0] == 'K' ? -1 : 0;
    CHECK_THROWS_AS(contract(rescale(p, bad)), std::domain_error);
  }
  SECTION("contracted algebra is the extended Galilei algebra") {
    const auto g = extended_galilei();
    CHECK_FALSE(g.jacobi_violation());
    for (const auto &x : g.generators())
      CHECK(g.bracket(x, "M").is_zero());
    CHECK(same_structure(pipe.contracted, g, galilei_mapping(pipe.contracted)));
    CHECK_FALSE(same_structure(pipe.rescaled, g, galilei_mapping(pipe.rescaled)));
  }
  SECTION("Jacobi is exact at every stage") {
    for (const auto *alg : {&pipe.poincare, &pipe.extended, &pipe.rebased, &pipe.rescaled, &pipe.contracted})
      CHECK_FALSE(alg->jacobi_violation());
  }
  SECTION("rescaling before the change of basis gives the same contraction") {
    auto sched = contraction_schedule();
    sched.erase(kShiftedEnergy);
    sched["H"] = 0;
    const auto res_ext = rescale(pipe.extended, sched);
    // Hb' = H' - M with M = eps^-2 M'.
    const auto reb = change_basis(
        res_ext, replace_generator(res_ext, "H'", "Hb'", {{"H'", Scalar(1)}, {"M'", -Scalar::eps(-2)}}));
    CHECK(reb.generators() == pipe.rescaled.generators());
    CHECK(reb.table() == pipe.rescaled.table());
    const auto con = contract(reb);
    CHECK(same_structure(con, pipe.contracted, identity_mapping(con)));
  }
}

TEST_CASE("same_structure") {
  const auto s = su2();
  CHECK(same_structure(s, s, identity_mapping(s)));
  CHECK_FALSE(same_structure(s, abelian(3), name_mapping(s, {"X1", "X2", "X3"})));
  CHECK(same_structure(abelian(3), abelian(3), {{"X1", "X2"}, {"X2", "X3"}, {"X3", "X1"}}));
  // A relabeling that reverses orientation flips the sign of i eps_ijk.
  CHECK_FALSE(same_structure(s, s, {{"J1", "J2"}, {"J2", "J1"}, {"J3", "J3"}}));
  CHECK_THROWS(same_structure(s, s, {{"J1", "J1"}}));
  CHECK_THROWS(same_structure(s, s, {{"J1", "J1"}, {"J2", "J1"}, {"J3", "J3"}}));
}

TEST_CASE("nc_normal_form") {
  const auto s = su2();
  SECTION("ordered words are unchanged") {
    const auto p = word(s, {"J1", "J2", "J2", "J3"}) + word(s, {"J1"}, Scalar(3));
    CHECK(nc_normal_form(p, s) == p);
  }
  SECTION("single rewrite in su(2)") {
    CHECK(nc_normal_form(word(s, {"J2", "J1"}), s) == word(s, {"J1", "J2"}) - word(s, {"J3"}, I));
  }
  SECTION("J3 J2 J1 by deterministic and random orders") {
    const auto p = word(s, {"J3", "J2", "J1"});
    const auto ref = nc_normal_form(p, s);
    CHECK(ref.is_ordered());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      CHECK(nc_normal_form(p, s, rng) == ref);
    }
  }
  SECTION("confluence and idempotence on random cubics") {
    const auto p = poincare();
    std::mt19937_64 rng(17), r1(1), r2(2);
    for (int t = 0; t < 50; ++t) {
      const auto poly = random_cubic(p, rng);
      const auto nf = nc_normal_form(poly, p);
      CHECK(nf.is_ordered());
      CHECK(nc_normal_form(nf, p) == nf);
      CHECK(nc_normal_form(poly, p, r1) == nf);
      CHECK(nc_normal_form(poly, p, r2) == nf);
    }
  }
  SECTION("foreign generators are rejected") {
    CHECK_THROWS(nc_normal_form(NcPoly(Word{7}), s));
  }
}

TEST_CASE("is_casimir") {
  const auto p = poincare();
  const auto g = extended_galilei();
  CHECK(is_casimir(word(g, {"M"}), g));
  CHECK(is_casimir(mass_shell(p), p));
  CHECK_FALSE(is_casimir(word(p, {"H"}), p));
  CHECK(is_casimir(square(su2(), "J"), su2()));
  CHECK_FALSE(is_casimir(word(su2(), {"J3", "J3"}), su2()));

  SECTION("internal energy M H - P.P/2 in extended Galilei") {
    const auto w = word(g, {"M", "H"}) - square(g, "P") * Scalar::rational(1, 2);
    CHECK(is_casimir(w, g));
  }
  SECTION("spin candidate (M J - K x P)^2 in extended Galilei") {
    auto component = [&](int i, int sign) {
      const int j = i % 3 + 1, k = j % 3 + 1;
      const auto K = [](int n) { return "K" + std::to_string(n); };
      const auto P = [](int n) { return "P" + std::to_string(n); };
      NcPoly out(Word{g.index("M"), g.index("J" + std::to_string(i))});
      const auto kp = NcPoly(Word{g.index(K(j)), g.index(P(k))}) - NcPoly(Word{g.index(K(k)), g.index(P(j))});
      return out + kp * Scalar(sign);
    };
    auto spin_sq = [&](int sign) {
      NcPoly out;
      for (int i = 1; i <= 3; ++i)
        out = out + component(i, sign) * component(i, sign);
      return out;
    };
    CHECK(is_casimir(spin_sq(-1), g));
    CHECK_FALSE(is_casimir(spin_sq(+1), g));
  }
}

TEST_CASE("contract_casimir") {
  const auto pipe = run_contraction_pipeline();
  const auto sched = contraction_schedule();
  const auto &reb = pipe.rebased;
  const auto &con = pipe.contracted;

  SECTION("mass shell") {
    const auto in_rebased = express_in_basis(mass_shell(pipe.extended), pipe.extended,
                                             shifted_energy_change(pipe.extended), reb);
    CHECK(in_rebased == nc_normal_form(word(reb, {"Hb", "Hb"}) + word(reb, {"Hb", "M"}, Scalar(2)) +
                                           word(reb, {"M", "M"}) - square(reb, "P"),
                                       reb));
    CHECK(is_casimir(in_rebased, reb));

    const auto comps = contract_casimir(in_rebased, reb, sched);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0].power == -4);
    CHECK(comps[0].poly == word(con, {"M'", "M'"}));
    CHECK(comps[1].power == -2);
    CHECK(comps[1].poly == word(con, {"Hb'", "M'"}, Scalar(2)) - square(con, "P", "'"));
    CHECK(comps[2].power == 0);
    CHECK(is_casimir(comps[0].poly, con));
    CHECK(is_casimir(comps[1].poly, con));
    // The eps^0 remainder Hb'^2 is not invariant in the limit.
    CHECK_FALSE(is_casimir(comps[2].poly, con));
  }
  SECTION("central charge") {
    const auto comps = contract_casimir(word(reb, {"M"}), reb, sched);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].power == -2);
    CHECK(is_casimir(comps[0].poly, con));
  }
  SECTION("schedule must cover the algebra") {
    CHECK_THROWS(contract_casimir(word(reb, {"M"}), reb, {{"M", 2}}));
  }
}

TEST_CASE("algebra JSON round trip") {
  const auto pipe = run_contraction_pipeline();
  for (const auto *alg : {&pipe.poincare, &pipe.rebased, &pipe.rescaled, &pipe.contracted}) {
    const auto back = algebra_from_json(nlohmann::json::parse(to_json(*alg).dump()));
    CHECK(back.generators() == alg->generators());
    CHECK(back.table() == alg->table());
  }
  nlohmann::json bad = to_json(su2());
  bad["brackets"]["J1,J2"].push_back({{"gen", "J1"}, {"re_num", 1}});
  CHECK_THROWS_AS(algebra_from_json(bad), JacobiError);
  bad = to_json(su2());
  bad["brackets"]["J1J2"] = nlohmann::json::array();
  CHECK_THROWS(algebra_from_json(bad));
}
