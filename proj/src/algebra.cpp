#include "qindex/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qindex {

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  require(!blocks_.empty(), "multimatrix algebra needs at least one block");
  offsets_.reserve(blocks_.size());
  for (int m : blocks_) {
    require(m >= 1, "block sizes must be positive");
    offsets_.push_back(dim_);
    dim_ += m * m;
  }
}

AlgebraElement::AlgebraElement(MultiMatrixAlgebra parent, std::vector<CMatrix> blocks)
    : parent_(std::move(parent)), blocks_(std::move(blocks)) {
  require(static_cast<int>(blocks_.size()) == parent_.num_blocks(),
          "element block count does not match its algebra");
  for (int t = 0; t < parent_.num_blocks(); ++t) {
    const int m = parent_.block_size(t);
    require(blocks_[t].rows() == m && blocks_[t].cols() == m,
            "element block shape does not match its algebra");
  }
}

AlgebraElement AlgebraElement::zero(const MultiMatrixAlgebra& alg) {
  std::vector<CMatrix> blocks;
  for (int m : alg.blocks()) blocks.push_back(CMatrix::Zero(m, m));
  return AlgebraElement(alg, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const MultiMatrixAlgebra& alg) {
  std::vector<CMatrix> blocks;
  for (int m : alg.blocks()) blocks.push_back(CMatrix::Identity(m, m));
  return AlgebraElement(alg, std::move(blocks));
}

AlgebraElement AlgebraElement::matrix_unit(const MultiMatrixAlgebra& alg, int t, int i, int j) {
  require(t >= 0 && t < alg.num_blocks(), "matrix unit block out of range");
  require(i >= 0 && j >= 0 && i < alg.block_size(t) && j < alg.block_size(t),
          "matrix unit index out of range");
  auto e = zero(alg);
  e.blocks_[t](i, j) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::from_vector(const MultiMatrixAlgebra& alg, const CVector& coeffs) {
  require(coeffs.size() == alg.dim(), "coefficient vector length does not match algebra");
  std::vector<CMatrix> blocks;
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    CMatrix b(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b(i, j) = coeffs(alg.offset(t) + i * m + j);
    blocks.push_back(std::move(b));
  }
  return AlgebraElement(alg, std::move(blocks));
}

AlgebraElement AlgebraElement::random(const MultiMatrixAlgebra& alg, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  auto x = zero(alg);
  for (auto& b : x.blocks_)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = Complex(normal(rng), normal(rng));
  return x;
}

CVector AlgebraElement::to_vector() const {
  CVector v(parent_.dim());
  for (int t = 0; t < parent_.num_blocks(); ++t) {
    const int m = parent_.block_size(t);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) v(parent_.offset(t) + i * m + j) = blocks_[t](i, j);
  }
  return v;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<CMatrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(parent_, std::move(blocks));
}

double AlgebraElement::norm() const {
  double best = 0.0;
  for (const auto& b : blocks_) {
    Eigen::JacobiSVD<CMatrix> svd(b);
    if (svd.singularValues().size() > 0) best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

bool AlgebraElement::is_self_adjoint(double tol) const {
  for (const auto& b : blocks_)
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

bool AlgebraElement::is_scalar(double tol) const {
  const Complex s = scalar_part();
  for (const auto& b : blocks_) {
    const CMatrix diff = b - s * CMatrix::Identity(b.rows(), b.cols());
    if (diff.cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

Complex AlgebraElement::scalar_part() const {
  Complex total = 0.0;
  int size = 0;
  for (const auto& b : blocks_) {
    total += b.trace();
    size += static_cast<int>(b.rows());
  }
  return total / static_cast<double>(size);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  require(parent_ == rhs.parent_, "adding elements of different algebras");
  for (size_t t = 0; t < blocks_.size(); ++t) blocks_[t] += rhs.blocks_[t];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  require(parent_ == rhs.parent_, "subtracting elements of different algebras");
  for (size_t t = 0; t < blocks_.size(); ++t) blocks_[t] -= rhs.blocks_[t];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs) {
  require(lhs.parent_ == rhs.parent_, "multiplying elements of different algebras");
  std::vector<CMatrix> blocks;
  blocks.reserve(lhs.blocks_.size());
  for (size_t t = 0; t < lhs.blocks_.size(); ++t) blocks.push_back(lhs.blocks_[t] * rhs.blocks_[t]);
  return AlgebraElement(lhs.parent_, std::move(blocks));
}

std::vector<AlgebraElement> matrix_unit_basis(const MultiMatrixAlgebra& alg) {
  std::vector<AlgebraElement> basis;
  basis.reserve(alg.dim());
  for (int t = 0; t < alg.num_blocks(); ++t)
    for (int i = 0; i < alg.block_size(t); ++i)
      for (int j = 0; j < alg.block_size(t); ++j)
        basis.push_back(AlgebraElement::matrix_unit(alg, t, i, j));
  return basis;
}

LinearMap::LinearMap(MultiMatrixAlgebra src, MultiMatrixAlgebra tgt, CMatrix m)
    : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
  require(matrix.rows() == target.dim() && matrix.cols() == source.dim(),
          "linear map matrix has the wrong shape");
}

LinearMap LinearMap::identity(const MultiMatrixAlgebra& alg) {
  return LinearMap(alg, alg, CMatrix::Identity(alg.dim(), alg.dim()));
}

AlgebraElement LinearMap::apply(const AlgebraElement& x) const {
  require(x.parent() == source, "linear map applied to an element of the wrong algebra");
  return AlgebraElement::from_vector(target, matrix * x.to_vector());
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  require(inner.target == outer.source, "composing maps with mismatched algebras");
  return LinearMap(inner.source, outer.target, outer.matrix * inner.matrix);
}

HomomorphismCheck StarHomomorphism::check(const LinearMap& map, double tol) {
  HomomorphismCheck report;
  auto flag = [&](const char* reason, double defect) {
    if (report.ok && defect > tol) {
      report.ok = false;
      report.reason = reason;
      report.defect = defect;
    }
  };

  const auto one_src = AlgebraElement::identity(map.source);
  const auto one_tgt = AlgebraElement::identity(map.target);
  flag("unital", (map.apply(one_src) - one_tgt).norm());

  const auto basis = matrix_unit_basis(map.source);
  std::vector<AlgebraElement> images;
  images.reserve(basis.size());
  for (const auto& e : basis) images.push_back(map.apply(e));

  for (size_t a = 0; a < basis.size() && report.ok; ++a) {
    flag("adjoint", (map.apply(basis[a].adjoint()) - images[a].adjoint()).norm());
    for (size_t b = 0; b < basis.size() && report.ok; ++b) {
      const auto lhs = map.apply(basis[a] * basis[b]);
      flag("multiplicative", (lhs - images[a] * images[b]).norm());
    }
  }

  if (report.ok && map.source.dim() > 0) {
    Eigen::JacobiSVD<CMatrix> svd(map.matrix);
    const double smallest = svd.singularValues()(svd.singularValues().size() - 1);
    if (smallest < tol) {
      report.ok = false;
      report.reason = "injective";
      report.defect = smallest;
    }
  }
  return report;
}

StarHomomorphism::StarHomomorphism(LinearMap map, double tol) : map_(std::move(map)) {
  const auto report = check(map_, tol);
  if (!report.ok) {
    std::ostringstream os;
    os << "not a unital injective *-homomorphism (" << report.reason << " defect "
       << report.defect << ")";
    fail(ErrorKind::Validation, os.str());
  }
}

StarHomomorphism StarHomomorphism::inner(const AlgebraElement& unitary) {
  const auto& alg = unitary.parent();
  const auto basis = matrix_unit_basis(alg);
  const auto u_star = unitary.adjoint();
  CMatrix m(alg.dim(), alg.dim());
  for (size_t k = 0; k < basis.size(); ++k)
    m.col(static_cast<Eigen::Index>(k)) = (unitary * basis[k] * u_star).to_vector();
  return StarHomomorphism(LinearMap(alg, alg, std::move(m)));
}

std::vector<AlgebraElement> StarHomomorphism::image_basis() const {
  std::vector<AlgebraElement> out;
  for (const auto& e : matrix_unit_basis(map_.source)) out.push_back(map_.apply(e));
  return out;
}

StarHomomorphism compose(const StarHomomorphism& outer, const StarHomomorphism& inner) {
  return StarHomomorphism(compose(outer.map(), inner.map()));
}

TraceWeights::TraceWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_) require(w > 0.0 && std::isfinite(w), "trace weights must be positive");
}

TraceWeights TraceWeights::matrix_trace(const MultiMatrixAlgebra& alg) {
  return TraceWeights(std::vector<double>(alg.num_blocks(), 1.0));
}

TraceWeights TraceWeights::normalized(const MultiMatrixAlgebra& alg) {
  double total = 0.0;
  for (int m : alg.blocks()) total += m;
  return TraceWeights(std::vector<double>(alg.num_blocks(), 1.0 / total));
}

Complex TraceWeights::operator()(const AlgebraElement& x) const {
  require(static_cast<int>(weights_.size()) == x.parent().num_blocks(),
          "trace weights do not match the algebra");
  Complex total = 0.0;
  for (int t = 0; t < x.parent().num_blocks(); ++t) total += weights_[t] * x.block(t).trace();
  return total;
}

RVector TraceWeights::gns_diagonal(const MultiMatrixAlgebra& alg) const {
  require(static_cast<int>(weights_.size()) == alg.num_blocks(),
          "trace weights do not match the algebra");
  RVector diag(alg.dim());
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    diag.segment(alg.offset(t), m * m).setConstant(weights_[t]);
  }
  return diag;
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  if (h.rows() == 0) return RVector();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

bool is_positive(const AlgebraElement& x, double tol, double hermitian_tol) {
  if (!x.is_self_adjoint(hermitian_tol))
    fail(ErrorKind::InvalidArgument, "positivity test on a non-self-adjoint element");
  for (const auto& b : x.blocks()) {
    const CMatrix h = 0.5 * (b + b.adjoint());
    if (hermitian_eigenvalues(h)(0) < -tol) return false;
  }
  return true;
}

bool commutes_with_algebra(const AlgebraElement& x, std::span<const AlgebraElement> spanning,
                           double tol) {
  for (const auto& a : spanning) {
    require(a.parent() == x.parent(), "commutator of elements in different algebras");
    if ((x * a - a * x).norm() > tol) return false;
  }
  return true;
}

std::vector<ChoiBlock> choi_blocks(const LinearMap& map) {
  std::vector<ChoiBlock> out;
  const auto& src = map.source;
  const auto& tgt = map.target;
  for (int t = 0; t < src.num_blocks(); ++t) {
    const int mt = src.block_size(t);
    for (int s = 0; s < tgt.num_blocks(); ++s) {
      const int ms = tgt.block_size(s);
      CMatrix c = CMatrix::Zero(ms * mt, ms * mt);
      for (int i = 0; i < mt; ++i) {
        for (int j = 0; j < mt; ++j) {
          // Column of the map matrix holding Phi(e^t_{ij}).
          const auto col = map.matrix.col(src.offset(t) + i * mt + j);
          for (int a = 0; a < ms; ++a)
            for (int b = 0; b < ms; ++b) c(a * mt + i, b * mt + j) = col(tgt.offset(s) + a * ms + b);
        }
      }
      out.push_back({t, s, std::move(c)});
    }
  }
  return out;
}

bool is_completely_positive(const LinearMap& map, double tol) {
  for (const auto& block : choi_blocks(map)) {
    if ((block.matrix - block.matrix.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    const CMatrix h = 0.5 * (block.matrix + block.matrix.adjoint());
    if (h.rows() > 0 && hermitian_eigenvalues(h)(0) < -tol) return false;
  }
  return true;
}

GroupAlgebraInclusion group_algebra_inclusion(long n, long d) {
  require(n >= 1 && d >= 1, "group orders must be positive");
  require(n % d == 0, "subgroup parameter must divide the group order");
  const MultiMatrixAlgebra small(std::vector<int>(static_cast<size_t>(d), 1));
  const MultiMatrixAlgebra big(std::vector<int>(static_cast<size_t>(n), 1));
  CMatrix m = CMatrix::Zero(n, d);
  for (long x = 0; x < n; ++x) m(x, x % d) = 1.0;
  GroupAlgebraInclusion out;
  out.inclusion = StarHomomorphism(LinearMap(small, big, std::move(m)));
  out.source_trace = TraceWeights(std::vector<double>(static_cast<size_t>(d), 1.0 / d));
  out.target_trace = TraceWeights(std::vector<double>(static_cast<size_t>(n), 1.0 / n));
  out.n = n;
  out.d = d;
  return out;
}

}  // namespace qindex
