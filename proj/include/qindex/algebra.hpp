#pragma once

// Finite-dimensional C*-algebras realised as multimatrix algebras
// M_{m_1} + ... + M_{m_T}, together with their elements, linear maps between
// them, tracial weights and Choi data.
//
// Coefficient vectors are laid out block by block; inside block t the entry
// (i, j) sits at offset(t) + i * m_t + j.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qindex/error.hpp"

namespace qindex {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultHermitianTol = 1e-9;

class MultiMatrixAlgebra {
 public:
  MultiMatrixAlgebra() = default;
  explicit MultiMatrixAlgebra(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_size(int t) const { return blocks_.at(t); }
  // Offset of block t inside a coefficient vector.
  int offset(int t) const { return offsets_.at(t); }
  // Sum of m_t^2.
  int dim() const { return dim_; }

  bool operator==(const MultiMatrixAlgebra& other) const {
    return blocks_ == other.blocks_;
  }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(MultiMatrixAlgebra parent, std::vector<CMatrix> blocks);

  static AlgebraElement zero(const MultiMatrixAlgebra& alg);
  static AlgebraElement identity(const MultiMatrixAlgebra& alg);
  static AlgebraElement matrix_unit(const MultiMatrixAlgebra& alg, int t, int i, int j);
  static AlgebraElement from_vector(const MultiMatrixAlgebra& alg, const CVector& coeffs);
  // Entries with independent standard normal real and imaginary parts.
  static AlgebraElement random(const MultiMatrixAlgebra& alg, std::mt19937_64& rng);

  const MultiMatrixAlgebra& parent() const { return parent_; }
  const CMatrix& block(int t) const { return blocks_.at(t); }
  CMatrix& block(int t) { return blocks_.at(t); }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  CVector to_vector() const;
  AlgebraElement adjoint() const;
  // Operator norm: largest singular value over all blocks.
  double norm() const;
  bool is_self_adjoint(double tol = kDefaultHermitianTol) const;
  // True iff every block is a multiple of the identity with the same scalar.
  bool is_scalar(double tol) const;
  Complex scalar_part() const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs += rhs; }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs -= rhs; }
  friend AlgebraElement operator*(AlgebraElement lhs, Complex s) { return lhs *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement rhs) { return rhs *= s; }
  friend AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs);

 private:
  MultiMatrixAlgebra parent_;
  std::vector<CMatrix> blocks_;
};

// Every matrix unit e^t_{ij}, in coefficient-vector order.
std::vector<AlgebraElement> matrix_unit_basis(const MultiMatrixAlgebra& alg);

// A complex-linear map between multimatrix algebras, stored as a
// target.dim() x source.dim() matrix acting on coefficient vectors.
struct LinearMap {
  MultiMatrixAlgebra source;
  MultiMatrixAlgebra target;
  CMatrix matrix;

  LinearMap() = default;
  LinearMap(MultiMatrixAlgebra src, MultiMatrixAlgebra tgt, CMatrix m);

  static LinearMap identity(const MultiMatrixAlgebra& alg);
  AlgebraElement apply(const AlgebraElement& x) const;
};

// outer after inner.
LinearMap compose(const LinearMap& outer, const LinearMap& inner);

struct HomomorphismCheck {
  bool ok = true;
  std::string reason;  // "unital", "multiplicative", "adjoint" or "injective"
  double defect = 0.0;
};

class StarHomomorphism {
 public:
  StarHomomorphism() = default;
  // Verifies the *-homomorphism axioms on matrix units; throws on failure.
  explicit StarHomomorphism(LinearMap map, double tol = 1e-10);

  static HomomorphismCheck check(const LinearMap& map, double tol = 1e-10);
  // x -> u x u^* for a unitary u of the algebra.
  static StarHomomorphism inner(const AlgebraElement& unitary);

  const MultiMatrixAlgebra& source() const { return map_.source; }
  const MultiMatrixAlgebra& target() const { return map_.target; }
  const CMatrix& matrix() const { return map_.matrix; }
  const LinearMap& map() const { return map_; }
  AlgebraElement apply(const AlgebraElement& x) const { return map_.apply(x); }
  // Images of the matrix units of the source; they span the image subalgebra.
  std::vector<AlgebraElement> image_basis() const;

 private:
  LinearMap map_;
};

StarHomomorphism compose(const StarHomomorphism& outer, const StarHomomorphism& inner);

// Faithful tracial functional tau(x) = sum_t w_t tr(x_t).
class TraceWeights {
 public:
  TraceWeights() = default;
  explicit TraceWeights(std::vector<double> weights);

  // w_t = 1 for every block (the unnormalised matrix trace).
  static TraceWeights matrix_trace(const MultiMatrixAlgebra& alg);
  // w_t = 1 / sum_s m_s so that tau(1) = 1 with equal weight per matrix entry.
  static TraceWeights normalized(const MultiMatrixAlgebra& alg);

  const std::vector<double>& weights() const { return weights_; }
  Complex operator()(const AlgebraElement& x) const;
  // Diagonal of the Gram matrix of the GNS inner product <x, y> = tau(x^* y)
  // on coefficient vectors.
  RVector gns_diagonal(const MultiMatrixAlgebra& alg) const;

 private:
  std::vector<double> weights_;
};

// True iff x is positive semidefinite up to -tol. Throws on non-self-adjoint
// input (difference from x^* above hermitian_tol).
bool is_positive(const AlgebraElement& x, double tol,
                 double hermitian_tol = kDefaultHermitianTol);

// True iff ||[x, a]|| <= tol for every a in the spanning set.
bool commutes_with_algebra(const AlgebraElement& x, std::span<const AlgebraElement> spanning,
                           double tol);

struct ChoiBlock {
  int source_block = 0;
  int target_block = 0;
  // sum_{ij} Phi(e^t_{ij})_s (x) e_{ij}, of size m_s * m_t.
  CMatrix matrix;
};

// One Choi matrix per (source block, target block). The map is completely
// positive iff every returned matrix is positive semidefinite.
std::vector<ChoiBlock> choi_blocks(const LinearMap& map);

bool is_completely_positive(const LinearMap& map, double tol);

struct GroupAlgebraInclusion {
  StarHomomorphism inclusion;
  TraceWeights source_trace;  // Haar probability on the smaller algebra
  TraceWeights target_trace;  // Haar probability on C(Z/n)
  long n = 1;
  long d = 1;
};

// Inclusion of the functions on Z/n that are invariant under translation by
// the subgroup dZ/nZ, i.e. C(Z/d) -> C(Z/n), f -> f(x mod d). In the Fourier
// picture this is C*(Lambda) in C*(Z/n) with Lambda the subgroup of order d,
// so the Haar-preserving expectation has index n/d.
GroupAlgebraInclusion group_algebra_inclusion(long n, long d);

// Eigenvalues of a Hermitian matrix (ascending).
RVector hermitian_eigenvalues(const CMatrix& h);

}  // namespace qindex
