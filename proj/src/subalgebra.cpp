#include "qindex/subalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qindex {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Spectral projections of a self-adjoint element, one per cluster of equal
// eigenvalues, restricted to the range of `support` (all of B when empty).
std::vector<AlgebraElement> spectral_projections(const AlgebraElement& h,
                                                 const AlgebraElement* support) {
  const auto& alg = h.parent();
  struct Eig {
    double value;
    int block;
    CVector vector;
  };
  std::vector<Eig> eigs;
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    CMatrix basis = CMatrix::Identity(m, m);
    if (support) {
      Eigen::SelfAdjointEigenSolver<CMatrix> ps(0.5 * (support->block(t) + support->block(t).adjoint()));
      std::vector<int> cols;
      for (int i = 0; i < m; ++i)
        if (ps.eigenvalues()(i) > 0.5) cols.push_back(i);
      basis.resize(m, static_cast<Eigen::Index>(cols.size()));
      for (size_t c = 0; c < cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = ps.eigenvectors().col(cols[c]);
    }
    if (basis.cols() == 0) continue;
    const CMatrix hb = h.block(t);
    const CMatrix compressed = basis.adjoint() * (0.5 * (hb + hb.adjoint())) * basis;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(compressed);
    for (Eigen::Index i = 0; i < compressed.rows(); ++i)
      eigs.push_back({solver.eigenvalues()(i), t, basis * solver.eigenvectors().col(i)});
  }
  std::sort(eigs.begin(), eigs.end(), [](const Eig& a, const Eig& b) { return a.value < b.value; });

  double spread = eigs.empty() ? 0.0 : eigs.back().value - eigs.front().value;
  const double gap = 1e-7 * (1.0 + spread);
  std::vector<AlgebraElement> projections;
  for (size_t i = 0; i < eigs.size();) {
    auto p = AlgebraElement::zero(alg);
    size_t j = i;
    while (j < eigs.size() && eigs[j].value - eigs[i].value <= gap) {
      p.block(eigs[j].block) += eigs[j].vector * eigs[j].vector.adjoint();
      ++j;
    }
    projections.push_back(std::move(p));
    i = j;
  }
  return projections;
}

AlgebraElement random_combination(const MultiMatrixAlgebra& alg, const CMatrix& basis,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector c(basis.cols());
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = Complex(normal(rng), normal(rng));
  auto x = AlgebraElement::from_vector(alg, basis * c);
  return (x + x.adjoint()) * Complex(0.5);
}

}  // namespace

CMatrix left_multiplication(const AlgebraElement& a) {
  const auto& alg = a.parent();
  CMatrix out = CMatrix::Zero(alg.dim(), alg.dim());
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    out.block(alg.offset(t), alg.offset(t), m * m, m * m) = kron(a.block(t), CMatrix::Identity(m, m));
  }
  return out;
}

CMatrix right_multiplication(const AlgebraElement& a) {
  const auto& alg = a.parent();
  CMatrix out = CMatrix::Zero(alg.dim(), alg.dim());
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    out.block(alg.offset(t), alg.offset(t), m * m, m * m) =
        kron(CMatrix::Identity(m, m), a.block(t).transpose());
  }
  return out;
}

CMatrix orthonormal_span(const CMatrix& vectors, double rel_tol) {
  if (vectors.cols() == 0) return CMatrix(vectors.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

double distance_to_span(const CMatrix& q, const CVector& x) {
  if (q.cols() == 0) return x.norm();
  return (x - q * (q.adjoint() * x)).norm();
}

StarHomomorphism decompose_subalgebra(const MultiMatrixAlgebra& ambient,
                                      std::span<const AlgebraElement> spanning,
                                      std::uint64_t seed) {
  constexpr double tol = 1e-8;
  require(!spanning.empty(), "empty spanning set for a subalgebra");
  CMatrix raw(ambient.dim(), static_cast<Eigen::Index>(spanning.size()));
  for (size_t k = 0; k < spanning.size(); ++k) {
    require(spanning[k].parent() == ambient, "spanning element lives in another algebra");
    raw.col(static_cast<Eigen::Index>(k)) = spanning[k].to_vector();
  }
  const CMatrix q = orthonormal_span(raw);
  const auto r = q.cols();

  std::vector<AlgebraElement> basis;
  for (Eigen::Index k = 0; k < r; ++k) basis.push_back(AlgebraElement::from_vector(ambient, q.col(k)));

  auto reject = [](const std::string& why) {
    fail(ErrorKind::Validation, "spanning set is not a unital *-subalgebra: " + why);
  };
  if (distance_to_span(q, AlgebraElement::identity(ambient).to_vector()) > tol) reject("missing unit");
  for (const auto& a : basis) {
    if (distance_to_span(q, a.adjoint().to_vector()) > tol) reject("not closed under adjoint");
    for (const auto& b : basis)
      if (distance_to_span(q, (a * b).to_vector()) > tol) reject("not closed under products");
  }

  // Centre of C: coefficient vectors c with [sum_k c_k q_k, q_l] = 0 for all l.
  CMatrix constraints = CMatrix::Zero(r * ambient.dim(), r);
  for (Eigen::Index l = 0; l < r; ++l) {
    const CMatrix comm = left_multiplication(basis[l]) - right_multiplication(basis[l]);
    // [z, q_l] = z q_l - q_l z = (R_{q_l} - L_{q_l}) z
    constraints.block(l * ambient.dim(), 0, ambient.dim(), r) = -comm * q;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> normal(constraints.adjoint() * constraints);
  const double top = std::max(1.0, normal.eigenvalues()(r - 1));
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index k = 0; k < r; ++k)
    if (normal.eigenvalues()(k) < 1e-10 * top) null_cols.push_back(k);
  CMatrix centre(ambient.dim(), static_cast<Eigen::Index>(null_cols.size()));
  for (size_t k = 0; k < null_cols.size(); ++k)
    centre.col(static_cast<Eigen::Index>(k)) = q * normal.eigenvectors().col(null_cols[k]);

  std::mt19937_64 rng(seed);
  struct Factor {
    int size;
    std::vector<AlgebraElement> units;  // row-major k x k matrix units
  };
  std::vector<Factor> factors;

  constexpr int kAttempts = 8;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kAttempts) reject("could not separate the simple summands");
    factors.clear();
    const auto z = random_combination(ambient, centre, rng);
    const auto central = spectral_projections(z, nullptr);
    if (static_cast<Eigen::Index>(central.size()) != centre.cols()) continue;

    bool good = true;
    for (const auto& p : central) {
      CMatrix corner(ambient.dim(), r);
      for (Eigen::Index k = 0; k < r; ++k) corner.col(k) = (p * basis[k] * p).to_vector();
      const CMatrix pq = orthonormal_span(corner);
      const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(pq.cols()))));
      if (k * k != pq.cols()) reject("summand dimension is not a perfect square");

      const auto h = random_combination(ambient, pq, rng);
      const auto minimal = spectral_projections(h, &p);
      if (static_cast<int>(minimal.size()) != k) {
        good = false;
        break;
      }

      Factor f{k, std::vector<AlgebraElement>(static_cast<size_t>(k * k))};
      std::vector<AlgebraElement> first_row(static_cast<size_t>(k));
      first_row[0] = minimal[0];
      for (int j = 1; j < k; ++j) {
        AlgebraElement best;
        double best_norm = -1.0;
        for (const auto& b : basis) {
          auto y = minimal[0] * b * minimal[j];
          const double nrm = y.norm();
          if (nrm > best_norm) {
            best_norm = nrm;
            best = std::move(y);
          }
        }
        if (best_norm < tol) reject("minimal projections are not equivalent");
        first_row[j] = best * Complex(1.0 / best_norm);
      }
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          f.units[static_cast<size_t>(i * k + j)] = first_row[i].adjoint() * first_row[j];
      factors.push_back(std::move(f));
    }
    if (good) break;
  }

  std::vector<int> sizes;
  for (const auto& f : factors) sizes.push_back(f.size);
  const MultiMatrixAlgebra abstract(sizes);
  CMatrix m(ambient.dim(), abstract.dim());
  Eigen::Index col = 0;
  for (const auto& f : factors)
    for (const auto& u : f.units) m.col(col++) = u.to_vector();
  return StarHomomorphism(LinearMap(abstract, ambient, std::move(m)), tol);
}

}  // namespace qindex
