#include <doctest.h>

#include <random>

#include "qindex/expectation.hpp"
#include "qindex/subalgebra.hpp"
#include "support.hpp"

using namespace qindex;
using namespace testsupport;

namespace {

// E(x) = e_11 x e_11 on M_2 with A = B.
ConditionalExpectation corner_map() {
  const MultiMatrixAlgebra m2({2});
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  return ConditionalExpectation(StarHomomorphism(LinearMap::identity(m2)), m);
}

}  // namespace

TEST_CASE("validate_expectation") {
  CHECK(validate_expectation(identity_expectation(2)).ok);
  CHECK(validate_expectation(pinching_expectation(2)).ok);
  CHECK(validate_expectation(trace_expectation(3)).ok);
  const auto bad = validate_expectation(corner_map());
  CHECK_FALSE(bad.ok);
  CHECK(bad.reason == "unitality");

  // Unital, idempotent and bimodular, but x -> tr(rho x) with an indefinite rho.
  CMatrix m = trace_expectation(2).matrix();
  m(0, 1) = m(0, 2) = m(3, 1) = m(3, 2) = 1.0;
  const auto indefinite = validate_expectation(ConditionalExpectation(trace_expectation(2).inclusion(), m));
  CHECK_FALSE(indefinite.ok);
  CHECK(indefinite.reason == "positivity");
}

TEST_CASE("canonical_expectation") {
  SUBCASE("C in M_2 with tr/2 is the normalized trace") {
    const auto e = trace_expectation(2);
    const auto c = canonical_expectation(e.inclusion(), TraceWeights({0.5}));
    CHECK(max_entry(c.matrix() - e.matrix()) < 1e-12);
  }
  SUBCASE("diagonal in M_2 gives the pinching") {
    const auto e = pinching_expectation(2);
    const auto c = canonical_expectation(e.inclusion(), TraceWeights({0.5}));
    CHECK(max_entry(c.matrix() - e.matrix()) < 1e-12);
  }
  SUBCASE("A = B gives the identity") {
    const auto e = identity_expectation(3);
    const auto c = canonical_expectation(e.inclusion(), TraceWeights({1.0}));
    CHECK(max_entry(c.matrix() - CMatrix::Identity(9, 9)) < 1e-12);
  }
  SUBCASE("tau-preserving on random inclusions") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 10; ++k) {
      const auto r = random_inclusion(rng);
      const auto e = canonical_expectation(r.inclusion, r.tau);
      CHECK(validate_expectation(e, 1e-9).ok);
      const auto x = AlgebraElement::random(e.algebra(), rng);
      CHECK(std::abs(r.tau(e.apply(x)) - r.tau(x)) < 1e-9);
    }
  }
}

TEST_CASE("quasi-bases and the Watatani index") {
  SUBCASE("identity: a single element, index 1") {
    const auto e = identity_expectation(3);
    const auto qb = find_quasi_basis(e);
    REQUIRE(qb.basis);
    CHECK(qb.basis->elements.size() == 1);
    const auto idx = watatani_index(e, *qb.basis);
    CHECK(idx.norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("pinching: the hand quasi-basis {1, e_12 + e_21}") {
    const auto e = pinching_expectation(2);
    const MultiMatrixAlgebra m2({2});
    QuasiBasis hand{{AlgebraElement::identity(m2),
                     AlgebraElement::matrix_unit(m2, 0, 0, 1) + AlgebraElement::matrix_unit(m2, 0, 1, 0)}};
    CHECK(quasi_basis_defect(e, hand) < 1e-14);
    const auto idx = watatani_index(e, hand);
    CHECK((idx.element - AlgebraElement::identity(m2) * Complex(2.0)).norm() < 1e-14);
    CHECK(idx.central);
    CHECK(idx.in_subalgebra);

    const auto found = find_quasi_basis(e);
    REQUIRE(found.basis);
    CHECK(quasi_basis_defect(e, *found.basis) < 1e-9);
    CHECK(watatani_index(e, *found.basis).norm == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("normalized trace on M_2: {sqrt2 e_ij}") {
    const auto e = trace_expectation(2);
    const MultiMatrixAlgebra m2({2});
    QuasiBasis hand;
    for (const auto& u : matrix_unit_basis(m2)) hand.elements.push_back(u * Complex(std::sqrt(2.0)));
    CHECK(quasi_basis_defect(e, hand) < 1e-14);
    CHECK((watatani_index(e, hand).element - AlgebraElement::identity(m2) * Complex(4.0)).norm() < 1e-13);
    const auto found = find_quasi_basis(e);
    REQUIRE(found.basis);
    CHECK(watatani_index(e, *found.basis).norm == doctest::Approx(4.0).epsilon(1e-10));
  }
  SUBCASE("non-faithful expectation has no quasi-basis") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    const auto e = state_expectation(rho);
    CHECK(validate_expectation(e).ok);
    const auto qb = find_quasi_basis(e);
    CHECK_FALSE(qb.basis);
    CHECK_FALSE(qb.diagnostic.empty());
  }
  SUBCASE("index element is central and matches the Bratteli oracle") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 8; ++k) {
      const auto r = random_inclusion(rng);
      const auto e = canonical_expectation(r.inclusion, r.tau);
      const auto qb = find_quasi_basis(e, r.tau);
      REQUIRE(qb.basis);
      const auto idx = watatani_index(e, *qb.basis);
      CHECK(idx.central);
      CHECK(idx.positive_invertible);
      const auto expected = bratteli_index(r.k, r.tau.weights());
      for (int s = 0; s < e.algebra().num_blocks(); ++s) {
        const int m = e.algebra().block_size(s);
        CHECK(max_entry(idx.element.block(s) - expected[static_cast<size_t>(s)] * CMatrix::Identity(m, m)) < 1e-8);
      }
    }
  }
}

TEST_CASE("scalar index") {
  CHECK(scalar_index(pinching_expectation(2)).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(scalar_index(trace_expectation(2)).value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(scalar_index(identity_expectation(2)).value == doctest::Approx(1.0).epsilon(1e-12));

  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  const auto inf = scalar_index(state_expectation(rho));
  CHECK_FALSE(inf.finite);
  CHECK(std::isinf(inf.value));

  // Oracle for faithful states on M_n: Index^s = tr(rho^{-1}).
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 4; ++n) {
    const CMatrix r = random_density(n, rng);
    const double expected = r.inverse().trace().real();
    CHECK(scalar_index(state_expectation(r)).value == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("probabilistic index bounds") {
  SUBCASE("pinching: (1,1)/sqrt2 attains 2") {
    CVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(pimsner_popa_ratio(pinching_expectation(2), 0, v) == doctest::Approx(2.0));
    const auto b = probabilistic_index_bounds(pinching_expectation(2), 2000, 0);
    CHECK(b.lower == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("normalized trace on M_n: n, strictly below n^2") {
    for (int n = 2; n <= 4; ++n) {
      const auto b = probabilistic_index_bounds(trace_expectation(n), 2000, 0);
      CHECK(b.lower == doctest::Approx(n).epsilon(1e-6));
      CHECK(b.upper == doctest::Approx(n * n).epsilon(1e-9));
    }
  }
  SUBCASE("identity") {
    const auto b = probabilistic_index_bounds(identity_expectation(2), 200, 0);
    CHECK(b.lower == doctest::Approx(1.0));
    CHECK(b.upper == doctest::Approx(1.0));
  }
  SUBCASE("deterministic in the seed") {
    std::mt19937_64 rng(2);
    const auto e = state_expectation(random_density(3, rng));
    const auto a = probabilistic_index_bounds(e, 500, 9);
    const auto b = probabilistic_index_bounds(e, 500, 9);
    CHECK(a.lower == b.lower);
    CHECK(a.seed == 9);
  }
  SUBCASE("non-faithful: infinite") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    const auto b = probabilistic_index_bounds(state_expectation(rho), 200, 0);
    CHECK_FALSE(b.finite);
  }
}

TEST_CASE("equivariantize") {
  const MultiMatrixAlgebra m2({2});
  CMatrix swap = CMatrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  const auto z2 = FiniteGroupAction::generate(
      std::vector<StarHomomorphism>{StarHomomorphism::inner(element_of(m2, {swap}))});
  CHECK(z2.order() == 2);

  SUBCASE("trivial group leaves E alone") {
    const auto e = trace_expectation(2);
    const auto t = equivariantize(e, FiniteGroupAction::trivial(m2));
    CHECK(max_entry(t.matrix() - e.matrix()) < 1e-14);
  }
  SUBCASE("x_11 averaged over the swap is the normalized trace") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    const auto t = equivariantize(state_expectation(rho), z2);
    CHECK(max_entry(t.matrix() - trace_expectation(2).matrix()) < 1e-14);
  }
  SUBCASE("pinching is already equivariant under diag(1,-1)") {
    CMatrix z = CMatrix::Identity(2, 2);
    z(1, 1) = -1.0;
    const auto g = FiniteGroupAction::generate(
        std::vector<StarHomomorphism>{StarHomomorphism::inner(element_of(m2, {z}))});
    const auto e = pinching_expectation(2);
    CHECK(max_entry(equivariantize(e, g).matrix() - e.matrix()) < 1e-14);
  }
  SUBCASE("actions that move A are rejected") {
    std::mt19937_64 rng(1);
    const auto u = element_of(m2, {random_unitary(2, rng)});
    CHECK_THROWS_AS(FiniteGroupAction::generate(std::vector<StarHomomorphism>{StarHomomorphism::inner(u)}, 50), Error);
    // The swap maps the diagonal onto itself; the Hadamard (an involution) does not.
    CMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    h /= std::sqrt(2.0);
    const auto g = FiniteGroupAction::generate(
        std::vector<StarHomomorphism>{StarHomomorphism::inner(element_of(m2, {h}))});
    CHECK_THROWS_AS(equivariantize(pinching_expectation(2), g), Error);
    CHECK_NOTHROW(equivariantize(pinching_expectation(2), z2));
  }
}

TEST_CASE("restrict_to_intermediate") {
  const auto e = trace_expectation(2);
  const MultiMatrixAlgebra m2({2});
  SUBCASE("C = diagonal: (x_11 + x_22)/2 with index 2") {
    std::vector<AlgebraElement> diag{AlgebraElement::matrix_unit(m2, 0, 0, 0), AlgebraElement::matrix_unit(m2, 0, 1, 1)};
    const auto r = restrict_to_intermediate(e, diag);
    CHECK(r.embedding.source().dim() == 2);
    CHECK(validate_expectation(r.expectation, 1e-9).ok);
    const auto qb = find_quasi_basis(r.expectation);
    REQUIRE(qb.basis);
    CHECK(watatani_index(r.expectation, *qb.basis).norm == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("C = B gives E back") {
    const auto r = restrict_to_intermediate(e, matrix_unit_basis(m2));
    const auto qb = find_quasi_basis(r.expectation);
    REQUIRE(qb.basis);
    CHECK(watatani_index(r.expectation, *qb.basis).norm == doctest::Approx(4.0).epsilon(1e-9));
  }
  SUBCASE("C = A gives the identity on A") {
    std::vector<AlgebraElement> scalars{AlgebraElement::identity(m2)};
    const auto r = restrict_to_intermediate(e, scalars);
    CHECK(r.expectation.algebra().dim() == 1);
    CHECK(std::abs(r.expectation.matrix()(0, 0) - 1.0) < 1e-12);
  }
  SUBCASE("non-subalgebras are rejected") {
    std::vector<AlgebraElement> bad{AlgebraElement::identity(m2), AlgebraElement::matrix_unit(m2, 0, 0, 1)};
    CHECK_THROWS_AS(restrict_to_intermediate(e, bad), Error);
  }
}

TEST_CASE("q-system comultiplication check") {
  for (const auto& e : {pinching_expectation(2), identity_expectation(2), trace_expectation(2)}) {
    const auto qb = find_quasi_basis(e);
    REQUIRE(qb.basis);
    CHECK(qsystem_comultiplication_check(e, *qb.basis));
  }
}

TEST_CASE("index report ordering") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 6; ++k) {
    const auto r = random_inclusion(rng);
    const auto e = canonical_expectation(r.inclusion, r.tau);
    const auto rep = compute_index_report(e, r.tau, 300, 1);
    REQUIRE(rep.index);
    CHECK(rep.probabilistic.lower <= rep.probabilistic.upper);
    CHECK(rep.probabilistic.upper <= rep.scalar.value + 1e-12);
    CHECK(std::abs(rep.scalar.value - rep.index_norm) <= 1e-7);
  }
}
