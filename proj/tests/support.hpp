#pragma once

// Fixtures and independent oracles shared by the test binaries.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qindex/algebra.hpp"
#include "qindex/expectation.hpp"

namespace testsupport {

using namespace qindex;

inline AlgebraElement element_of(const MultiMatrixAlgebra& alg, std::vector<CMatrix> blocks) {
  return AlgebraElement(alg, std::move(blocks));
}

// Haar-random unitary via QR of a Ginibre matrix.
inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

// Unital inclusion A -> B with multiplicities k[s][t] (B block s contains
// k[s][t] copies of A block t, in order), conjugated by one unitary per B block.
inline StarHomomorphism multiplicity_inclusion(const std::vector<int>& a_blocks,
                                               const std::vector<std::vector<int>>& k,
                                               const std::vector<CMatrix>& unitaries) {
  std::vector<int> b_blocks;
  for (const auto& row : k) {
    int size = 0;
    for (size_t t = 0; t < a_blocks.size(); ++t) size += row[t] * a_blocks[t];
    b_blocks.push_back(size);
  }
  const MultiMatrixAlgebra a(a_blocks), b(b_blocks);
  CMatrix m = CMatrix::Zero(b.dim(), a.dim());
  int col = 0;
  for (size_t t = 0; t < a_blocks.size(); ++t)
    for (int i = 0; i < a_blocks[t]; ++i)
      for (int j = 0; j < a_blocks[t]; ++j, ++col) {
        auto image = AlgebraElement::zero(b);
        for (size_t s = 0; s < k.size(); ++s) {
          int offset = 0;
          for (size_t u = 0; u < t; ++u) offset += k[s][u] * a_blocks[u];
          CMatrix plain = CMatrix::Zero(b_blocks[s], b_blocks[s]);
          for (int c = 0; c < k[s][t]; ++c) plain(offset + c * a_blocks[t] + i, offset + c * a_blocks[t] + j) = 1.0;
          const CMatrix& u = unitaries.empty() ? CMatrix::Identity(b_blocks[s], b_blocks[s]) : unitaries[s];
          image.block(static_cast<int>(s)) = u * plain * u.adjoint();
        }
        m.col(col) = image.to_vector();
      }
  return StarHomomorphism(LinearMap(a, b, m));
}

inline ConditionalExpectation identity_expectation(int n) {
  const MultiMatrixAlgebra b({n});
  return ConditionalExpectation(StarHomomorphism(LinearMap::identity(b)), CMatrix::Identity(b.dim(), b.dim()));
}

// diag(C^n) in M_n, E = keep the diagonal.
inline ConditionalExpectation pinching_expectation(int n) {
  std::vector<int> ones(static_cast<size_t>(n), 1);
  std::vector<std::vector<int>> k(1, std::vector<int>(static_cast<size_t>(n), 1));
  auto inc = multiplicity_inclusion(ones, k, {});
  CMatrix m = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) m(i * n + i, i * n + i) = 1.0;
  return ConditionalExpectation(inc, m);
}

// C in M_n, E(x) = tr(x)/n.
inline ConditionalExpectation trace_expectation(int n) {
  auto inc = multiplicity_inclusion({1}, {{n}}, {});
  CMatrix m = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i * n + i, j * n + j) = 1.0 / n;
  return ConditionalExpectation(inc, m);
}

// C in M_n, E(x) = tr(rho x).
inline ConditionalExpectation state_expectation(const CMatrix& rho) {
  const int n = static_cast<int>(rho.rows());
  auto inc = multiplicity_inclusion({1}, {{n}}, {});
  CMatrix m = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(i * n + i, a * n + b) = rho(b, a);
  return ConditionalExpectation(inc, m);
}

inline CMatrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  CMatrix rho = g * g.adjoint() + 0.05 * CMatrix::Identity(n, n);
  return rho / rho.trace().real();
}

struct RandomInclusion {
  std::vector<int> a_blocks;
  std::vector<std::vector<int>> k;
  StarHomomorphism inclusion;
  TraceWeights tau;
};

// A: at most 2 blocks of size <= 2; B: 1 or 2 blocks; multiplicities 0..2.
inline RandomInclusion random_inclusion(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 2), size(1, 2), mult(0, 2);
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  for (;;) {
    RandomInclusion r;
    const int na = count(rng), nb = count(rng);
    for (int t = 0; t < na; ++t) r.a_blocks.push_back(size(rng));
    r.k.assign(static_cast<size_t>(nb), std::vector<int>(static_cast<size_t>(na)));
    for (auto& row : r.k)
      for (auto& x : row) x = mult(rng);
    bool ok = true;
    for (const auto& row : r.k) {
      int s = 0;
      for (int x : row) s += x;
      ok = ok && s > 0;
    }
    for (int t = 0; t < na; ++t) {
      int s = 0;
      for (const auto& row : r.k) s += row[static_cast<size_t>(t)];
      ok = ok && s > 0;
    }
    if (!ok) continue;
    std::vector<CMatrix> us;
    std::vector<double> w;
    for (const auto& row : r.k) {
      int m = 0;
      for (int t = 0; t < na; ++t) m += row[static_cast<size_t>(t)] * r.a_blocks[static_cast<size_t>(t)];
      us.push_back(random_unitary(m, rng));
      w.push_back(weight(rng));
    }
    r.inclusion = multiplicity_inclusion(r.a_blocks, r.k, us);
    r.tau = TraceWeights(w);
    return r;
  }
}

// Index of the tau-preserving expectation, block by block on B, from the
// Bratteli data alone: with v_t = sum_s k_st w_s the weight of a minimal
// projection of A, the index on block s is sum_t k_st v_t / w_s.
inline std::vector<double> bratteli_index(const std::vector<std::vector<int>>& k,
                                          const std::vector<double>& w) {
  const size_t nb = k.size(), na = k.empty() ? 0 : k[0].size();
  std::vector<double> v(na, 0.0), out(nb, 0.0);
  for (size_t t = 0; t < na; ++t)
    for (size_t s = 0; s < nb; ++s) v[t] += k[s][t] * w[s];
  for (size_t s = 0; s < nb; ++s) {
    for (size_t t = 0; t < na; ++t) out[s] += k[s][t] * v[t];
    out[s] /= w[s];
  }
  return out;
}

inline double max_entry(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_of(const std::vector<double>& xs) {
  double m = -INFINITY;
  for (double x : xs) m = std::max(m, x);
  return m;
}

// Monomial unitary D P with P the permutation matrix of perm (P e_j = e_perm[j]).
inline CMatrix monomial(const std::vector<int>& perm, const std::vector<Complex>& phases) {
  const int n = static_cast<int>(perm.size());
  CMatrix u = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) u(perm[static_cast<size_t>(j)], j) = phases[static_cast<size_t>(perm[static_cast<size_t>(j)])];
  return u;
}

enum class ActionGroup { Z2, Z3, Z2xZ2 };

inline const char* group_name(ActionGroup g) {
  switch (g) {
    case ActionGroup::Z2: return "Z/2";
    case ActionGroup::Z3: return "Z/3";
    case ActionGroup::Z2xZ2: return "Z/2 x Z/2";
  }
  return "?";
}

// A finite group acting on M_n (n = 2 or 3) by conjugation with monomial
// unitaries. Phases are drawn so that the generated group has the intended
// order: u^|g| must be a scalar, so the phases along each cycle multiply to
// the same value.
inline FiniteGroupAction random_monomial_action(ActionGroup g, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const MultiMatrixAlgebra alg({n});
  auto inner = [&](const CMatrix& u) { return StarHomomorphism::inner(element_of(alg, {u})); };
  auto phase = [](double t) { return std::polar(1.0, t); };
  std::vector<StarHomomorphism> gens;
  const double t = angle(rng);
  switch (g) {
    case ActionGroup::Z2: {
      std::vector<int> perm{1, 0};
      std::vector<Complex> ph{phase(t), phase(-t)};
      if (n == 3) {
        perm.push_back(2);
        ph.push_back(std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0);
      }
      gens.push_back(inner(monomial(perm, ph)));
      break;
    }
    case ActionGroup::Z3: {
      if (n == 2) {
        const int k = std::uniform_int_distribution<int>(1, 2)(rng);
        gens.push_back(inner(monomial({0, 1}, {phase(t), phase(t + 2.0 * std::numbers::pi * k / 3.0)})));
      } else {
        gens.push_back(inner(monomial({1, 2, 0}, {phase(t), phase(angle(rng)), phase(angle(rng))})));
      }
      break;
    }
    case ActionGroup::Z2xZ2: {
      if (n == 2) {
        gens.push_back(inner(monomial({0, 1}, {1.0, -1.0})));
        gens.push_back(inner(monomial({1, 0}, {phase(t), phase(-t)})));
      } else {
        const int skip = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int k = 0; k < 3; ++k) {
          if (k == skip) continue;
          std::vector<Complex> ph(3, 1.0);
          ph[static_cast<size_t>(k)] = -1.0;
          gens.push_back(inner(monomial({0, 1, 2}, ph)));
        }
      }
      break;
    }
  }
  return FiniteGroupAction::generate(gens);
}

}  // namespace testsupport
