#pragma once

// Weight-lattice data of simple Lie types: P/Q via the Smith normal form of
// the Cartan matrix, subgroups of P/Q, and the intermediate lattices
// Q <= Lambda <= P they correspond to. Coordinates are fundamental weights
// throughout, so P = Z^r and Q is spanned by the columns of the Cartan matrix.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qindex/error.hpp"

namespace qindex {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct LieType {
  char family = 'A';  // A, B, C, D, E, F or G
  int rank = 1;

  std::string name() const { return family + std::to_string(rank); }
};

// Accepts "A3", "A_3", "e8" and the like; rejects unsupported types.
LieType parse_lie_type(std::string_view text);

// Standard Cartan matrix with a_ij = <alpha_i^vee, alpha_j> (Bourbaki
// numbering), so column j is alpha_j in fundamental-weight coordinates.
IntMatrix standard_cartan(const LieType& type);

struct CartanData {
  LieType type;
  IntMatrix cartan;
};

CartanData make_cartan(const LieType& type);
// Throws Validation unless the matrix is the standard one with det > 0.
void validate_cartan(const CartanData& data);

std::int64_t determinant(const IntMatrix& m);

// U * A * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ...
struct SmithForm {
  IntMatrix U;
  IntMatrix V;
  IntMatrix D;
};

SmithForm smith_normal_form(const IntMatrix& a);

// Row-style Hermite normal form of the lattice spanned by the rows of
// `rows`: upper triangular, positive pivots, entries above each pivot reduced
// into [0, pivot). Zero rows are dropped.
IntMatrix hermite_normal_form(const IntMatrix& rows);

// True iff v is an integer combination of the rows of an HNF basis.
bool in_row_lattice(const IntMatrix& hnf, const IntVector& v);

struct FiniteAbelianGroup {
  std::vector<std::int64_t> invariant_factors;  // all > 1, each dividing the next

  std::int64_t order() const;
};

struct CenterGroup {
  FiniteAbelianGroup group;
  SmithForm snf;
  std::vector<int> coordinates;  // positions of the factors in diag(D)
};

CenterGroup center_group(const CartanData& data);
// The same for any nonsingular integer matrix whose columns span Q in P = Z^r.
CenterGroup center_group(const IntMatrix& root_columns);

inline constexpr std::int64_t kSubgroupLimit = 10000;

struct Subgroup {
  IntMatrix lattice;  // HNF rows of the lifted lattice between D Z^k and Z^k
  std::int64_t order = 1;
  std::vector<std::vector<std::int64_t>> generators;  // invariant-factor coordinates
};

// Every subgroup once, ordered by decreasing order, then lexicographic HNF.
std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup& group,
                                          std::int64_t limit = kSubgroupLimit);

struct SublatticeSpec {
  IntMatrix generators;  // HNF rows spanning Lambda in fundamental-weight coordinates
  std::int64_t index_in_P = 1;
  Subgroup subgroup;     // Lambda / Q inside P / Q
};

// One entry per subgroup of P/Q, sorted by index then lexicographic HNF.
std::vector<SublatticeSpec> classify_subgroups(const CartanData& data);
std::vector<SublatticeSpec> classify_lattices(const CenterGroup& center);

// Whether the weight lambda, reduced modulo Q, lies in Lambda / Q.
bool irrep_membership(const CenterGroup& center, std::span<const std::int64_t> weight,
                      const SublatticeSpec& lattice);

struct TorusCrosscheck {
  long n = 1;
  long d = 1;
  std::int64_t lattice_index = 1;
  double watatani_index = 0.0;
  double defect = 0.0;
  int quasi_basis_size = 0;
  bool ok = false;
};

// Lattice index of the order-d subgroup of Z/n against the Watatani index of
// the canonical expectation for group_algebra_inclusion(n, d).
TorusCrosscheck crosscheck_torus_index(long n, long d);

}  // namespace qindex
