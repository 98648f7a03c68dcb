#pragma once

#include <cstdint>
#include <span>

#include "qindex/algebra.hpp"

namespace qindex {

// Left and right multiplication by a as matrices on coefficient vectors.
CMatrix left_multiplication(const AlgebraElement& a);
CMatrix right_multiplication(const AlgebraElement& a);

// Orthonormal basis (columns) of the span of the given coefficient vectors.
CMatrix orthonormal_span(const CMatrix& vectors, double rel_tol = 1e-10);

// Distance from x to the column span of an orthonormal basis q.
double distance_to_span(const CMatrix& q, const CVector& x);

// Wedderburn decomposition of the unital *-subalgebra C of B spanned by the
// given elements: returns an injective unital *-homomorphism from a
// multimatrix algebra onto C. Throws a Validation error if the span is not a
// unital *-subalgebra.
StarHomomorphism decompose_subalgebra(const MultiMatrixAlgebra& ambient,
                                      std::span<const AlgebraElement> spanning,
                                      std::uint64_t seed = 0x5eed);

}  // namespace qindex
