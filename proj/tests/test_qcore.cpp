#include "decolab/matrix_json.hpp"
#include "decolab/qcore.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace decolab::qcore;
using testsupport::kron;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

} // namespace

TEST_CASE("DimSignature bookkeeping") {
  const DimSignature s({2, 3, 2});
  CHECK(s.total() == 12);
  CHECK(s.size() == 3);
  CHECK(s.subset(std::vector<std::size_t>{0, 2}) == DimSignature({2, 2}));
  CHECK(s.concat(DimSignature({5})) == DimSignature({2, 3, 2, 5}));
  CHECK_THROWS_AS(DimSignature(std::vector<std::size_t>{}), DimensionError);
  CHECK_THROWS_AS(DimSignature({2, 1}), DimensionError);
  CHECK_THROWS_AS(Operator(Matrix::Zero(3, 3), DimSignature({2})), DimensionError);
}

TEST_CASE("tensor_product") {
  SECTION("identity times identity") {
    const auto i2 = Operator::identity(DimSignature({2}));
    const auto r = tensor_product({i2, i2});
    CHECK(r.max_abs_diff(Operator::identity(DimSignature({2, 2}))) == 0.0);
  }
  SECTION("sigma_z times sigma_z") {
    const auto r = tensor_product({pauli_z(), pauli_z()});
    CHECK(r.max_abs_diff(Operator(diag({1, -1, -1, 1}), DimSignature({2, 2}))) == 0.0);
  }
  SECTION("signature concatenation") {
    std::mt19937_64 rng(3);
    const auto a = testsupport::random_hermitian(rng, DimSignature({2}));
    const auto b = testsupport::random_hermitian(rng, DimSignature({2, 3}));
    const auto r = tensor_product({a, b});
    CHECK(r.sig() == DimSignature({2, 2, 3}));
    CHECK(r.dim() == 12);
    CHECK((r.matrix() - kron(a.matrix(), b.matrix())).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("empty sequence") {
    CHECK_THROWS(tensor_product(std::span<const Operator>{}));
  }
}

TEST_CASE("partial_trace") {
  std::mt19937_64 rng(11);
  SECTION("product state factorizes") {
    for (int rep = 0; rep < 10; ++rep) {
      const auto a = testsupport::random_density(rng, DimSignature({2}));
      const auto b = testsupport::random_density(rng, DimSignature({3, 2}));
      const auto ab = tensor_product(a, b);
      CHECK(partial_trace(ab, {0}).op().max_abs_diff(a.op()) < 1e-12);
      CHECK(partial_trace(ab, {1, 2}).op().max_abs_diff(b.op()) < 1e-12);
    }
  }
  SECTION("Bell state reduces to I/2") {
    Vector phi = Vector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::pure(phi, DimSignature({2, 2}));
    const auto r = partial_trace(rho, {0});
    Matrix half = Matrix::Identity(2, 2) * 0.5;
    CHECK((r.matrix() - half).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("matches the index-loop oracle on mixed dimensions") {
    const std::vector<std::size_t> dims{2, 3, 2};
    const auto rho = testsupport::random_density(rng, DimSignature(dims));
    const std::vector<std::vector<std::size_t>> keeps{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (const auto &keep : keeps) {
      const auto r = partial_trace(rho, keep);
      const Matrix o = testsupport::partial_trace_oracle(rho.matrix(), dims, keep);
      CHECK((r.matrix() - o).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(std::abs(r.op().trace() - cplx(1.0)) < 1e-12);
    }
  }
  SECTION("kept factors are reported in increasing order") {
    const auto rho = testsupport::random_density(rng, DimSignature({2, 3}));
    const std::vector<std::size_t> reversed{1, 0};
    CHECK(partial_trace(rho, reversed).op().max_abs_diff(rho.op()) < 1e-15);
  }
  SECTION("errors") {
    const auto rho = testsupport::random_density(rng, DimSignature({2, 2}));
    CHECK_THROWS(partial_trace(rho, {}));
    CHECK_THROWS(partial_trace(rho, {2}));
  }
}

TEST_CASE("expectation") {
  std::mt19937_64 rng(5);
  const auto rho = testsupport::random_density(rng, DimSignature::qubits(3));
  CHECK(std::abs(expectation(rho, Operator::identity(rho.sig())) - cplx(1.0)) < 1e-12);

  Vector up = Vector::Zero(2);
  up(0) = 1.0;
  CHECK(std::abs(expectation(DensityMatrix::pure(up, DimSignature({2})), pauli_z()) - cplx(1.0)) < 1e-15);

  SECTION("equals Tr(rho O) and is real for hermitian O") {
    const auto o = testsupport::random_hermitian(rng, rho.sig());
    const cplx e = expectation(rho, o);
    CHECK(std::abs(e - (rho.matrix() * o.matrix()).trace()) < 1e-12);
    CHECK(std::abs(e.imag()) < 1e-12);
  }
  SECTION("O_S (x) I_E against the reduced state") {
    const auto os = testsupport::random_hermitian(rng, DimSignature({2}));
    for (std::size_t site = 0; site < 3; ++site) {
      const std::vector<std::size_t> pos{site};
      const auto padded = embed(os, pos, rho.sig());
      CHECK(std::abs(expectation(rho, padded) - expectation(partial_trace(rho, pos), os)) < 1e-12);
    }
  }
  SECTION("linearity") {
    const auto o1 = testsupport::random_hermitian(rng, rho.sig());
    const auto o2 = testsupport::random_hermitian(rng, rho.sig());
    const cplx a(0.3, -1.2), b(-2.0, 0.5);
    CHECK(std::abs(expectation(rho, o1 * a + o2 * b) - (a * expectation(rho, o1) + b * expectation(rho, o2))) <
          1e-12);
  }
  CHECK_THROWS_AS(expectation(rho, pauli_z()), DimensionError);
}

TEST_CASE("embed places the local operator on the named factors") {
  std::mt19937_64 rng(7);
  const auto a = testsupport::random_hermitian(rng, DimSignature({2, 3}));
  const DimSignature sig({2, 2, 3});
  const std::vector<std::size_t> pos{0, 2};
  const auto e = embed(a, pos, sig);
  // Oracle: A on (0,2) with identity on 1 equals a permutation of A (x) I.
  for (std::size_t x = 0; x < 12; ++x)
    for (std::size_t y = 0; y < 12; ++y) {
      const auto dx = testsupport::digits(x, {2, 2, 3});
      const auto dy = testsupport::digits(y, {2, 2, 3});
      const cplx expected = dx[1] == dy[1] ? a.matrix()(static_cast<Eigen::Index>(dx[0] * 3 + dx[2]),
                                                        static_cast<Eigen::Index>(dy[0] * 3 + dy[2]))
                                           : cplx(0.0);
      CHECK(e.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) == expected);
    }
  const std::vector<std::size_t> unsorted{2, 0};
  CHECK_THROWS_AS(embed(a, unsorted, sig), DimensionError);
}

TEST_CASE("DensityMatrix validation") {
  CHECK_THROWS_AS(DensityMatrix(Operator(diag({0.5, 0.6}))), InvalidStateError);
  CHECK_THROWS_AS(DensityMatrix(Operator(diag({1.5, -0.5}))), InvalidStateError);
  Matrix nh(2, 2);
  nh << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityMatrix(Operator(nh)), InvalidStateError);
  CHECK_NOTHROW(DensityMatrix(Operator(diag({1.0 + 5e-11, -5e-11}))));
  const auto c = DensityMatrix::clamped(Operator(diag({1.2, -0.2})));
  CHECK(std::abs(c.matrix()(0, 0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(c.matrix()(1, 1)) < 1e-15);
  CHECK(DensityMatrix::maximally_mixed(DimSignature::qubits(2)).purity() == Catch::Approx(0.25));
}

TEST_CASE("evolve") {
  std::mt19937_64 rng(13);
  const DimSignature sig = DimSignature::qubits(2);
  const auto rho0 = testsupport::random_density(rng, sig);
  const auto h = testsupport::random_hermitian(rng, sig);

  SECTION("t = 0 is the identity") { CHECK(evolve(rho0, h, 0.0).op().max_abs_diff(rho0.op()) == 0.0); }

  SECTION("stationary states") {
    const auto f = spectral_projectors(h).apply([](double x) { return std::exp(-x); });
    const DensityMatrix stat(f * cplx(1.0 / f.trace().real()), DensityMatrix::Trusted{});
    for (double t : {0.3, 2.0, 17.5})
      CHECK(evolve(stat, h, t).op().max_abs_diff(stat.op()) < 1e-12);
  }

  SECTION("diag(0,1) rotates |+><+| by e^{it}") {
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::pure(plus, DimSignature({2}));
    for (double t : {0.1, 1.0, 4.2}) {
      const auto r = evolve(rho, Operator(diag({0.0, 1.0})), t);
      CHECK(std::abs(r.matrix()(0, 1) - 0.5 * std::polar(1.0, t)) < 1e-15);
    }
  }

  SECTION("matches the matrix-exponential oracle") {
    for (double t : {0.0, 0.7, 3.3, -1.1}) {
      const Matrix o = testsupport::evolve_oracle(rho0.matrix(), h.matrix(), t);
      CHECK((evolve(rho0, h, t).matrix() - o).cwiseAbs().maxCoeff() < 1e-11);
    }
  }

  SECTION("preserves trace, hermiticity and spectrum") {
    const auto r = evolve(rho0, h, 5.0);
    CHECK(std::abs(r.op().trace() - cplx(1.0)) < 1e-10);
    CHECK(r.op().is_hermitian(1e-10));
    Eigen::SelfAdjointEigenSolver<Matrix> e0(rho0.matrix()), e1(r.matrix());
    CHECK((e0.eigenvalues() - e1.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("diagonal fast path agrees with the spectral path") {
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto s = DimSignature::qubits(n);
      const auto r0 = testsupport::random_density(rng, s);
      Eigen::VectorXd e(static_cast<Eigen::Index>(s.total()));
      for (Eigen::Index i = 0; i < e.size(); ++i)
        e(i) = std::normal_distribution<double>(0.0, 1.0)(rng);
      const DiagonalOperator dh(e, s);
      const Propagator fast(dh.to_operator());
      const Propagator slow(dh.to_operator(), Propagator::Method::spectral);
      CHECK(fast.diagonal_path());
      CHECK_FALSE(slow.diagonal_path());
      for (double t : {0.5, 3.0, 11.0})
        CHECK(fast.apply(r0, t).op().max_abs_diff(slow.apply(r0, t).op()) < 1e-12);
    }
  }

  SECTION("state-vector route") {
    Eigen::VectorXd e(4);
    e << 0.3, -1.0, 2.0, 0.1;
    const DiagonalOperator dh(e, sig);
    Vector psi = testsupport::random_matrix(rng, 4).col(0);
    psi.normalize();
    const StateVector sv(psi, sig);
    const auto a = evolve(sv, dh, 1.7).to_density();
    const auto b = evolve(sv.to_density(), dh.to_operator(), 1.7);
    CHECK(a.op().max_abs_diff(b.op()) < 1e-13);
    CHECK(reduced_state(sv, std::vector<std::size_t>{1}).op().max_abs_diff(
              partial_trace(sv.to_density(), {1}).op()) < 1e-14);
  }

  SECTION("non-hermitian H") {
    Matrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(evolve(DensityMatrix::maximally_mixed(DimSignature({2})), Operator(bad), 1.0),
                    NotHermitianError);
  }
}

TEST_CASE("spectral_projectors") {
  SECTION("identity is one group") {
    const auto d = spectral_projectors(Operator::identity(DimSignature::qubits(2)));
    REQUIRE(d.size() == 1);
    CHECK(d.groups[0].multiplicity == 4);
    CHECK(d.groups[0].eigenvalue == Catch::Approx(1.0));
    CHECK(d.groups[0].projector.max_abs_diff(Operator::identity(DimSignature::qubits(2))) < 1e-14);
  }
  SECTION("diag(1,1,2)") {
    const auto d = spectral_projectors(Operator(diag({1, 1, 2})));
    REQUIRE(d.size() == 2);
    CHECK(d.groups[0].eigenvalue == Catch::Approx(1.0));
    CHECK(d.groups[0].multiplicity == 2);
    CHECK(d.groups[0].projector.max_abs_diff(Operator(diag({1, 1, 0}))) < 1e-14);
    CHECK(d.groups[1].multiplicity == 1);
    CHECK(d.groups[1].projector.max_abs_diff(Operator(diag({0, 0, 1}))) < 1e-14);
    CHECK(d.degenerate());
  }
  SECTION("grouping tolerance") {
    CHECK(spectral_projectors(Operator(diag({1.0, 1.0 + 1e-9, 2.0}))).size() == 2);
    CHECK(spectral_projectors(Operator(diag({1.0, 1.0 + 1e-6, 2.0}))).size() == 3);
    CHECK(spectral_projectors(Operator(diag({1.0, 1.0 + 1e-6, 2.0})), 1e-5).size() == 2);
    CHECK_THROWS(spectral_projectors(Operator(diag({1.0})), 0.0));
  }
  SECTION("random hermitian: completeness, orthogonality, reconstruction") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
      const auto h = testsupport::random_hermitian(rng, DimSignature({2, 3}));
      const auto d = spectral_projectors(h);
      auto sum = Operator::zero(h.sig());
      for (std::size_t i = 0; i < d.size(); ++i) {
        sum = sum + d.groups[i].projector;
        for (std::size_t j = 0; j < d.size(); ++j) {
          const auto pp = d.groups[i].projector * d.groups[j].projector;
          const auto expect = i == j ? d.groups[i].projector : Operator::zero(h.sig());
          CHECK(pp.max_abs_diff(expect) < 1e-10);
        }
        if (i > 0)
          CHECK(d.groups[i].eigenvalue > d.groups[i - 1].eigenvalue);
      }
      CHECK(sum.max_abs_diff(Operator::identity(h.sig())) < 1e-12);
      CHECK(d.reconstruct().max_abs_diff(h) < 1e-10);
    }
  }
  SECTION("non-hermitian input") {
    Matrix bad(2, 2);
    bad << 1, 2, 3, 4;
    CHECK_THROWS_AS(spectral_projectors(Operator(bad)), NotHermitianError);
  }
}

TEST_CASE("commutator") {
  std::mt19937_64 rng(19);
  const auto a = testsupport::random_hermitian(rng, DimSignature({3}));
  CHECK(commutator(a, a).max_abs_diff(Operator::zero(a.sig())) == 0.0);
  CHECK(commutator(pauli_x(), pauli_y()).max_abs_diff(pauli_z() * cplx(0.0, 2.0)) < 1e-15);
  const auto f = spectral_projectors(a).apply([](double x) { return x * x * x - 2.0 * x; });
  CHECK(commutator(a, f).max_abs_diff(Operator::zero(a.sig())) < 1e-10);
  CHECK_THROWS_AS(commutator(a, pauli_x()), DimensionError);
}

TEST_CASE("unitary_exp") {
  std::mt19937_64 rng(23);
  const auto g = testsupport::random_hermitian(rng, DimSignature({2, 2}));
  const Matrix oracle = (cplx(0.0, 0.8) * g.matrix()).exp();
  CHECK((unitary_exp(g, 0.8).matrix() - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix JSON round trip") {
  std::mt19937_64 rng(29);
  const auto h = testsupport::random_hermitian(rng, DimSignature({2, 3}));
  const auto back = operator_from_json(to_json(h));
  CHECK(back.sig() == h.sig());
  CHECK(back.max_abs_diff(h) == 0.0);

  const auto bare = operator_from_json(nlohmann::json::parse("[[1, 0], [0, [-1, 0]]]"));
  CHECK(bare.max_abs_diff(pauli_z()) == 0.0);
  CHECK_THROWS(operator_from_json(nlohmann::json::parse("[[1, 0], [0]]")));
  CHECK_THROWS(operator_from_json(nlohmann::json::parse(R"({"sig": [2, 2], "rows": [[1, 0], [0, 1]]})")));
}
