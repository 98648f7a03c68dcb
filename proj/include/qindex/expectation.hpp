#pragma once

// Conditional expectations E: B -> A between multimatrix algebras and the
// index invariants attached to them: quasi-bases and the Watatani index
// element, the scalar index (complete positivity) and certified bounds on the
// probabilistic (Pimsner-Popa) index.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qindex/algebra.hpp"

namespace qindex {

// E is stored as a linear map on the coefficient space of B whose range lies
// in the image of the inclusion A -> B.
class ConditionalExpectation {
 public:
  ConditionalExpectation() = default;
  ConditionalExpectation(StarHomomorphism inclusion, CMatrix map);

  const StarHomomorphism& inclusion() const { return inclusion_; }
  const MultiMatrixAlgebra& algebra() const { return inclusion_.target(); }
  const MultiMatrixAlgebra& subalgebra() const { return inclusion_.source(); }
  const CMatrix& matrix() const { return map_.matrix; }
  const LinearMap& map() const { return map_; }

  AlgebraElement apply(const AlgebraElement& x) const { return map_.apply(x); }

 private:
  StarHomomorphism inclusion_;
  LinearMap map_;
};

struct ExpectationCheck {
  bool ok = true;
  // First failed axiom: "range", "unitality", "idempotence", "bimodularity"
  // or "positivity". Empty when ok.
  std::string reason;
  double defect = 0.0;
};

ExpectationCheck validate_expectation(const ConditionalExpectation& e, double tol = 1e-10);

// The tau-preserving expectation onto the image of the inclusion, built as the
// orthogonal projection in the GNS inner product of tau. Throws a Validation
// error if the projection fails to be bimodular.
ConditionalExpectation canonical_expectation(const StarHomomorphism& inclusion,
                                             const TraceWeights& tau);

// upper: B -> C, lower: C -> A (lower.algebra() == upper.subalgebra()).
ConditionalExpectation compose_expectations(const ConditionalExpectation& upper,
                                            const ConditionalExpectation& lower);

struct QuasiBasis {
  std::vector<AlgebraElement> elements;
};

// max over matrix units x of || sum_i u_i E(u_i^* x) - x ||.
double quasi_basis_defect(const ConditionalExpectation& e, const QuasiBasis& qb);

struct QuasiBasisResult {
  std::optional<QuasiBasis> basis;
  double min_eigenvalue = 0.0;  // of the frame operator on the spanning subset used
  double max_eigenvalue = 0.0;
  int spanning_used = 0;
  std::string diagnostic;
};

inline constexpr double kFrameInvertibility = 1e-10;

// Frame-operator construction. The spanning set is consumed greedily; once the
// frame operator S is well conditioned the remaining elements are dropped. The
// returned u_k = S^{-1/2} v_k form a quasi-basis (verified to 1e-9).
QuasiBasisResult find_quasi_basis(const ConditionalExpectation& e, const TraceWeights& tau,
                                  std::span<const AlgebraElement> spanning);
// Spanning set {1} followed by all matrix units of B.
QuasiBasisResult find_quasi_basis(const ConditionalExpectation& e, const TraceWeights& tau);
QuasiBasisResult find_quasi_basis(const ConditionalExpectation& e);

struct WatataniIndex {
  AlgebraElement element;
  double norm = 0.0;
  bool central = false;         // commutes with all of B within 1e-8
  double centrality_defect = 0.0;
  bool in_subalgebra = false;   // E(Index E) = Index E within 1e-8
  bool positive_invertible = false;
};

WatataniIndex watatani_index(const ConditionalExpectation& e, const QuasiBasis& qb);

struct ScalarIndex {
  double value = 0.0;  // +inf when not finite
  bool finite = true;
};

// min{c : cE - id completely positive}, computed block by block from the Choi
// pencil. Infinite when the Choi vector of the identity leaves the range of
// the Choi matrix of E.
ScalarIndex scalar_index(const ConditionalExpectation& e);

struct ProbabilisticIndexBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool finite = true;
  std::uint64_t seed = 0;
  int iterations = 0;
};

// Value of v^* E(vv^*)^+ v for a vector v living in block t of B (+inf when v
// is outside the range of E(vv^*)). Every v gives a lower bound for the
// probabilistic index.
double pimsner_popa_ratio(const ConditionalExpectation& e, int block, const CVector& v);

ProbabilisticIndexBounds probabilistic_index_bounds(const ConditionalExpectation& e, int budget,
                                                    std::uint64_t seed = 0);

// A finite group of *-automorphisms of one multimatrix algebra, closed under
// composition and containing the identity.
class FiniteGroupAction {
 public:
  explicit FiniteGroupAction(std::vector<StarHomomorphism> elements);

  // Closure of the generators under composition.
  static FiniteGroupAction generate(std::span<const StarHomomorphism> generators,
                                    int max_order = 10000);
  static FiniteGroupAction trivial(const MultiMatrixAlgebra& alg);

  const std::vector<StarHomomorphism>& elements() const { return elements_; }
  int order() const { return static_cast<int>(elements_.size()); }

 private:
  std::vector<StarHomomorphism> elements_;
};

// x -> |G|^{-1} sum_g g^{-1}(E(g(x))). Rejects actions that do not map the
// image of A onto itself.
ConditionalExpectation equivariantize(const ConditionalExpectation& e,
                                      const FiniteGroupAction& action);

struct IntermediateRestriction {
  StarHomomorphism embedding;          // C -> B
  ConditionalExpectation expectation;  // C -> A
};

// Restriction of E to the intermediate subalgebra spanned by c_spanning.
IntermediateRestriction restrict_to_intermediate(const ConditionalExpectation& e,
                                                 std::span<const AlgebraElement> c_spanning,
                                                 std::uint64_t seed = 0x5eed);

// m m^*(1) = sum v_i v_i^* agrees with the Watatani index and, when the index
// is scalar, E(Index E) = Index E.
bool qsystem_comultiplication_check(const ConditionalExpectation& e, const QuasiBasis& qb,
                                    double tol = 1e-9);

struct IndexReport {
  std::optional<WatataniIndex> index;
  int quasi_basis_size = 0;
  ScalarIndex scalar;
  ProbabilisticIndexBounds probabilistic;
  double index_norm = 0.0;  // +inf when no quasi-basis exists
};

IndexReport compute_index_report(const ConditionalExpectation& e, const TraceWeights& tau,
                                 int budget, std::uint64_t seed);

}  // namespace qindex
