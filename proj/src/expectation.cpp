#include "qindex/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qindex/subalgebra.hpp"

namespace qindex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Hermitian square root and inverse square root of a positive definite matrix.
struct RootPair {
  CMatrix root;
  CMatrix inv_root;
  double min_eig;
  double max_eig;
};

RootPair hermitian_roots(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h));
  const RVector& ev = solver.eigenvalues();
  const CMatrix& u = solver.eigenvectors();
  RootPair out{CMatrix(), CMatrix(), ev(0), ev(ev.size() - 1)};
  if (out.min_eig <= 0.0) return out;
  const RVector s = ev.cwiseSqrt();
  out.root = u * s.cast<Complex>().asDiagonal() * u.adjoint();
  out.inv_root = u * s.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
  return out;
}

// Coefficient vector of the functional tau, i.e. tau(x) = w . x.
CVector trace_functional(const MultiMatrixAlgebra& alg, const TraceWeights& tau) {
  require(static_cast<int>(tau.weights().size()) == alg.num_blocks(),
          "trace weights do not match the algebra");
  CVector w = CVector::Zero(alg.dim());
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    for (int i = 0; i < m; ++i) w(alg.offset(t) + i * m + i) = tau.weights()[t];
  }
  return w;
}

// Gram matrix of <x, y> = phi(x^* y) on matrix units, phi given by its
// coefficient vector.
CMatrix functional_gram(const MultiMatrixAlgebra& alg, const CVector& phi) {
  CMatrix g = CMatrix::Zero(alg.dim(), alg.dim());
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    const int o = alg.offset(t);
    // (e_{ij})^* e_{i j'} = e_{j j'}
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int jp = 0; jp < m; ++jp) g(o + i * m + j, o + i * m + jp) = phi(o + j * m + jp);
  }
  return g;
}

CMatrix frame_term(const CMatrix& e, const AlgebraElement& v) {
  return left_multiplication(v) * e * left_multiplication(v.adjoint());
}

// Projector onto the image of the inclusion, orthogonal for the plain
// Hilbert-Schmidt inner product.
CMatrix image_projector(const StarHomomorphism& inclusion) {
  const CMatrix q = orthonormal_span(inclusion.matrix());
  return q * q.adjoint();
}

// Left inverse of an injective inclusion matrix.
CMatrix left_inverse(const CMatrix& m) {
  return (m.adjoint() * m).ldlt().solve(m.adjoint());
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

ConditionalExpectation::ConditionalExpectation(StarHomomorphism inclusion, CMatrix map)
    : inclusion_(std::move(inclusion)),
      map_(inclusion_.target(), inclusion_.target(), std::move(map)) {}

ExpectationCheck validate_expectation(const ConditionalExpectation& e, double tol) {
  ExpectationCheck report;
  auto flag = [&](const char* reason, double defect) {
    if (report.ok && defect > tol) {
      report.ok = false;
      report.reason = reason;
      report.defect = defect;
    }
  };
  const auto& b = e.algebra();
  const CMatrix& m = e.matrix();
  const CMatrix proj = image_projector(e.inclusion());

  flag("range", max_abs(m - proj * m));
  const auto one = AlgebraElement::identity(b);
  flag("unitality", (e.apply(one) - one).norm());
  flag("idempotence", max_abs(m * m - m));
  if (report.ok) {
    for (const auto& a : e.inclusion().image_basis()) {
      const CMatrix la = left_multiplication(a);
      const CMatrix ra = right_multiplication(a);
      flag("bimodularity", max_abs(m * la - la * m));
      flag("bimodularity", max_abs(m * ra - ra * m));
      if (!report.ok) break;
    }
  }
  if (report.ok && !is_completely_positive(e.map(), tol)) {
    report.ok = false;
    report.reason = "positivity";
    double worst = 0.0;
    for (const auto& block : choi_blocks(e.map()))
      worst = std::max(worst, -hermitian_eigenvalues(hermitian_part(block.matrix))(0));
    report.defect = worst;
  }
  return report;
}

ConditionalExpectation canonical_expectation(const StarHomomorphism& inclusion,
                                             const TraceWeights& tau) {
  const auto& b = inclusion.target();
  const RVector w = tau.gns_diagonal(b);
  const CMatrix& j = inclusion.matrix();
  const auto wd = w.cast<Complex>().asDiagonal();
  // P = J (J^* W J)^{-1} J^* W
  const CMatrix gram = j.adjoint() * wd * j;
  CMatrix p = j * gram.ldlt().solve(j.adjoint() * wd);
  ConditionalExpectation e(inclusion, std::move(p));
  const auto check = validate_expectation(e, 1e-9);
  if (!check.ok) {
    std::ostringstream os;
    os << "tau-orthogonal projection is not a conditional expectation (" << check.reason
       << " defect " << check.defect << "); the trace is not compatible with this inclusion";
    fail(ErrorKind::Validation, os.str());
  }
  return e;
}

ConditionalExpectation compose_expectations(const ConditionalExpectation& upper,
                                            const ConditionalExpectation& lower) {
  require(upper.subalgebra() == lower.algebra(), "expectations do not form a tower");
  const CMatrix& jc = upper.inclusion().matrix();
  CMatrix map = jc * lower.matrix() * left_inverse(jc) * upper.matrix();
  return ConditionalExpectation(compose(upper.inclusion(), lower.inclusion()), std::move(map));
}

double quasi_basis_defect(const ConditionalExpectation& e, const QuasiBasis& qb) {
  const auto& b = e.algebra();
  CMatrix reconstruction = CMatrix::Zero(b.dim(), b.dim());
  for (const auto& u : qb.elements) reconstruction += frame_term(e.matrix(), u);
  return max_abs(reconstruction - CMatrix::Identity(b.dim(), b.dim()));
}

QuasiBasisResult find_quasi_basis(const ConditionalExpectation& e, const TraceWeights& tau,
                                  std::span<const AlgebraElement> spanning) {
  const auto& b = e.algebra();
  const int n = b.dim();
  QuasiBasisResult result;

  // GNS space of phi = tau o E.
  const CVector phi = e.matrix().transpose() * trace_functional(b, tau);
  const auto roots = hermitian_roots(functional_gram(b, phi));
  const bool faithful = roots.min_eig > 1e-12 * std::max(1.0, roots.max_eig);

  constexpr double kPruneCondition = 1e-6;
  CMatrix s = CMatrix::Zero(n, n);
  std::vector<AlgebraElement> used;
  RVector spectrum;
  for (const auto& v : spanning) {
    require(v.parent() == b, "spanning element lives in another algebra");
    s += frame_term(e.matrix(), v);
    used.push_back(v);
    if (!faithful) continue;
    spectrum = hermitian_eigenvalues(hermitian_part(roots.root * s * roots.inv_root));
    const double top = spectrum(n - 1);
    if (top > 0.0 && spectrum(0) >= kPruneCondition * top) break;
  }
  result.spanning_used = static_cast<int>(used.size());

  if (!faithful) {
    Eigen::JacobiSVD<CMatrix> svd(s);
    result.min_eigenvalue = svd.singularValues()(n - 1);
    result.max_eigenvalue = svd.singularValues()(0);
    result.diagnostic = "tau o E is not faithful; frame operator is singular";
    return result;
  }
  result.min_eigenvalue = spectrum(0);
  result.max_eigenvalue = spectrum(n - 1);
  if (!(spectrum(0) >= kFrameInvertibility * spectrum(n - 1)) || spectrum(n - 1) <= 0.0) {
    result.diagnostic = "frame operator is numerically singular";
    return result;
  }

  // S^{-1/2} through the orthonormal coordinates of the GNS space.
  const CMatrix s_hat = hermitian_part(roots.root * s * roots.inv_root);
  const auto s_roots = hermitian_roots(s_hat);
  const CMatrix t = roots.inv_root * s_roots.inv_root * roots.root;

  QuasiBasis qb;
  for (const auto& v : used) {
    auto u = AlgebraElement::from_vector(b, t * v.to_vector());
    if (u.norm() > 1e-12) qb.elements.push_back(std::move(u));
  }
  const double defect = quasi_basis_defect(e, qb);
  if (defect > 1e-9) {
    std::ostringstream os;
    os << "quasi-basis verification failed (defect " << defect << ")";
    result.diagnostic = os.str();
    return result;
  }
  result.basis = std::move(qb);
  return result;
}

QuasiBasisResult find_quasi_basis(const ConditionalExpectation& e, const TraceWeights& tau) {
  std::vector<AlgebraElement> spanning{AlgebraElement::identity(e.algebra())};
  for (auto& u : matrix_unit_basis(e.algebra())) spanning.push_back(std::move(u));
  return find_quasi_basis(e, tau, spanning);
}

QuasiBasisResult find_quasi_basis(const ConditionalExpectation& e) {
  return find_quasi_basis(e, TraceWeights::matrix_trace(e.algebra()));
}

WatataniIndex watatani_index(const ConditionalExpectation& e, const QuasiBasis& qb) {
  const auto& b = e.algebra();
  WatataniIndex out;
  out.element = AlgebraElement::zero(b);
  for (const auto& u : qb.elements) out.element += u * u.adjoint();
  out.norm = out.element.norm();

  double worst = 0.0;
  for (const auto& x : matrix_unit_basis(b))
    worst = std::max(worst, (out.element * x - x * out.element).norm());
  out.centrality_defect = worst;
  out.central = worst <= 1e-8;
  out.in_subalgebra = (e.apply(out.element) - out.element).norm() <= 1e-8;

  out.positive_invertible = out.element.is_self_adjoint(1e-8);
  if (out.positive_invertible) {
    for (const auto& blk : out.element.blocks())
      if (hermitian_eigenvalues(hermitian_part(blk))(0) <= 1e-12) out.positive_invertible = false;
  }
  return out;
}

ScalarIndex scalar_index(const ConditionalExpectation& e) {
  const auto& b = e.algebra();
  ScalarIndex out{1.0, true};
  double best = 0.0;
  for (const auto& block : choi_blocks(e.map())) {
    if (block.source_block != block.target_block) continue;
    const int m = b.block_size(block.source_block);
    // Choi vector of the identity map: sum_a e_a (x) e_a.
    CVector omega = CVector::Zero(m * m);
    for (int a = 0; a < m; ++a) omega(a * m + a) = 1.0;

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(block.matrix));
    const RVector& ev = solver.eigenvalues();
    const double top = ev(ev.size() - 1);
    if (top <= 0.0) return {kInf, false};
    const CVector coeffs = solver.eigenvectors().adjoint() * omega;
    double value = 0.0;
    double outside = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (ev(k) > 1e-10 * top) {
        value += std::norm(coeffs(k)) / ev(k);
      } else {
        outside += std::norm(coeffs(k));
      }
    }
    if (std::sqrt(outside) > 1e-8 * omega.norm()) return {kInf, false};
    best = std::max(best, value);
  }
  out.value = best;
  return out;
}

double pimsner_popa_ratio(const ConditionalExpectation& e, int block, const CVector& v) {
  const auto& b = e.algebra();
  const int m = b.block_size(block);
  require(v.size() == m, "vector length does not match the block");
  auto vv = AlgebraElement::zero(b);
  vv.block(block) = v * v.adjoint();
  const CMatrix image = hermitian_part(e.apply(vv).block(block));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(image);
  const RVector& ev = solver.eigenvalues();
  const double top = ev(m - 1);
  if (top <= 0.0) return kInf;
  const CVector coeffs = solver.eigenvectors().adjoint() * v;
  double value = 0.0;
  double outside = 0.0;
  for (int k = 0; k < m; ++k) {
    if (ev(k) > 1e-12 * top) {
      value += std::norm(coeffs(k)) / ev(k);
    } else {
      outside += std::norm(coeffs(k));
    }
  }
  if (std::sqrt(outside) > 1e-9 * v.norm()) return kInf;
  return value;
}

namespace {

// Ascent direction for f(v) = v^* M(v)^+ v with M(v) = E(vv^*) restricted to
// the block: w - K v, where w = M^+ v and K is the block of E^dagger(ww^*).
CVector ratio_gradient(const ConditionalExpectation& e, const CMatrix& e_adjoint, int block,
                       const CVector& v) {
  const auto& b = e.algebra();
  auto vv = AlgebraElement::zero(b);
  vv.block(block) = v * v.adjoint();
  const CMatrix image = hermitian_part(e.apply(vv).block(block));
  const CMatrix pinv = image.completeOrthogonalDecomposition().pseudoInverse();
  const CVector w = pinv * v;
  auto ww = AlgebraElement::zero(b);
  ww.block(block) = w * w.adjoint();
  const auto k = AlgebraElement::from_vector(b, e_adjoint * ww.to_vector());
  return w - k.block(block) * v;
}

}  // namespace

ProbabilisticIndexBounds probabilistic_index_bounds(const ConditionalExpectation& e, int budget,
                                                    std::uint64_t seed) {
  require(budget >= 0, "iteration budget must be non-negative");
  const auto& b = e.algebra();
  ProbabilisticIndexBounds out;
  out.seed = seed;
  const auto upper = scalar_index(e);
  out.upper = upper.value;
  out.finite = upper.finite;

  double best = 0.0;
  auto consider = [&](int block, const CVector& v) {
    const double f = pimsner_popa_ratio(e, block, v);
    best = std::max(best, f);
    return f;
  };

  // Deterministic candidates: basis vectors and the flat vector of every block.
  for (int t = 0; t < b.num_blocks(); ++t) {
    const int m = b.block_size(t);
    for (int i = 0; i < m; ++i) consider(t, CVector::Unit(m, i));
    consider(t, CVector::Constant(m, Complex(1.0 / std::sqrt(static_cast<double>(m)))));
  }

  const CMatrix e_adjoint = e.matrix().adjoint();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int starts = std::max(1, std::min(32, budget / 100));
  const int steps_per_start = budget / starts;
  int iterations = 0;

  for (int s = 0; s < starts && std::isfinite(best); ++s) {
    const int t = s % b.num_blocks();
    const int m = b.block_size(t);
    CVector v(m);
    for (int i = 0; i < m; ++i) v(i) = Complex(normal(rng), normal(rng));
    v.normalize();
    double f = consider(t, v);
    double step = 1.0;
    for (int it = 0; it < steps_per_start && std::isfinite(f); ++it) {
      ++iterations;
      const CVector g = ratio_gradient(e, e_adjoint, t, v);
      // Tangential part; f is scale invariant so radial motion is wasted.
      const CVector tangent = g - v * v.dot(g).real();
      if (tangent.norm() < 1e-14) break;
      bool improved = false;
      double trial_step = std::min(1.0, 2.0 * step);
      for (int back = 0; back < 40; ++back, trial_step *= 0.5) {
        CVector candidate = v + trial_step * tangent / std::max(1.0, tangent.norm());
        candidate.normalize();
        const double fc = pimsner_popa_ratio(e, t, candidate);
        if (fc > f) {
          v = candidate;
          f = fc;
          step = trial_step;
          improved = true;
          break;
        }
      }
      best = std::max(best, f);
      if (!improved) break;
    }
  }
  out.iterations = iterations;
  // Rounding can push a ratio a few ulps past the scalar index.
  out.lower = std::isfinite(out.upper) ? std::min(best, out.upper) : best;
  if (!std::isfinite(best)) {
    out.upper = kInf;
    out.finite = false;
  }
  return out;
}

FiniteGroupAction::FiniteGroupAction(std::vector<StarHomomorphism> elements)
    : elements_(std::move(elements)) {
  require(!elements_.empty(), "a group action needs at least the identity");
  const auto& alg = elements_.front().source();
  auto find = [&](const CMatrix& m) {
    for (size_t k = 0; k < elements_.size(); ++k)
      if (max_abs(elements_[k].matrix() - m) <= 1e-9) return static_cast<int>(k);
    return -1;
  };
  for (const auto& g : elements_) {
    if (!(g.source() == alg) || !(g.target() == alg))
      fail(ErrorKind::Validation, "group element is not an automorphism of a single algebra");
  }
  if (find(CMatrix::Identity(alg.dim(), alg.dim())) < 0)
    fail(ErrorKind::Validation, "group action is missing the identity");
  for (const auto& g : elements_)
    for (const auto& h : elements_)
      if (find(g.matrix() * h.matrix()) < 0)
        fail(ErrorKind::Validation, "group action is not closed under composition");
}

FiniteGroupAction FiniteGroupAction::generate(std::span<const StarHomomorphism> generators,
                                              int max_order) {
  require(!generators.empty(), "no generators given");
  const auto& alg = generators.front().source();
  std::vector<StarHomomorphism> elements{StarHomomorphism(LinearMap::identity(alg))};
  for (size_t next = 0; next < elements.size(); ++next) {
    for (const auto& g : generators) {
      CMatrix product = g.matrix() * elements[next].matrix();
      bool known = false;
      for (const auto& h : elements)
        if (max_abs(h.matrix() - product) <= 1e-9) {
          known = true;
          break;
        }
      if (known) continue;
      if (static_cast<int>(elements.size()) >= max_order)
        fail(ErrorKind::Validation, "generated group exceeds the order limit");
      elements.emplace_back(LinearMap(alg, alg, std::move(product)));
    }
  }
  return FiniteGroupAction(std::move(elements));
}

FiniteGroupAction FiniteGroupAction::trivial(const MultiMatrixAlgebra& alg) {
  return FiniteGroupAction({StarHomomorphism(LinearMap::identity(alg))});
}

ConditionalExpectation equivariantize(const ConditionalExpectation& e,
                                      const FiniteGroupAction& action) {
  const auto& b = e.algebra();
  const CMatrix proj = image_projector(e.inclusion());
  CMatrix total = CMatrix::Zero(b.dim(), b.dim());
  for (const auto& g : action.elements()) {
    if (!(g.source() == b))
      fail(ErrorKind::Validation, "group acts on a different algebra");
    if (max_abs(g.matrix() * proj - proj * g.matrix() * proj) > 1e-9)
      fail(ErrorKind::Validation, "group element does not map the subalgebra onto itself");
    const CMatrix inverse = g.matrix().fullPivLu().inverse();
    total += inverse * e.matrix() * g.matrix();
  }
  total /= static_cast<double>(action.order());
  return ConditionalExpectation(e.inclusion(), std::move(total));
}

IntermediateRestriction restrict_to_intermediate(const ConditionalExpectation& e,
                                                 std::span<const AlgebraElement> c_spanning,
                                                 std::uint64_t seed) {
  auto embedding = decompose_subalgebra(e.algebra(), c_spanning, seed);
  const CMatrix& jc = embedding.matrix();
  const CMatrix q = orthonormal_span(jc);
  for (const auto& a : e.inclusion().image_basis())
    if (distance_to_span(q, a.to_vector()) > 1e-8)
      fail(ErrorKind::Validation, "intermediate algebra does not contain the subalgebra");
  const CMatrix jc_inv = left_inverse(jc);
  StarHomomorphism a_into_c(
      LinearMap(e.subalgebra(), embedding.source(), jc_inv * e.inclusion().matrix()), 1e-8);
  CMatrix restricted = jc_inv * e.matrix() * jc;
  ConditionalExpectation ec(std::move(a_into_c), std::move(restricted));
  return {std::move(embedding), std::move(ec)};
}

bool qsystem_comultiplication_check(const ConditionalExpectation& e, const QuasiBasis& qb,
                                    double tol) {
  const auto& b = e.algebra();
  // m^*(1) = sum_i v_i (x) v_i^*, m(x (x) y) = xy.
  auto mm_star = AlgebraElement::zero(b);
  for (const auto& v : qb.elements) mm_star += v * v.adjoint();
  const auto index = watatani_index(e, qb);
  if ((mm_star - index.element).norm() > tol) return false;
  if (index.element.is_scalar(tol) && (e.apply(index.element) - index.element).norm() > tol)
    return false;
  return true;
}

IndexReport compute_index_report(const ConditionalExpectation& e, const TraceWeights& tau,
                                 int budget, std::uint64_t seed) {
  IndexReport report;
  report.scalar = scalar_index(e);
  report.probabilistic = probabilistic_index_bounds(e, budget, seed);
  report.index_norm = kInf;
  if (!report.scalar.finite) return report;
  auto qb = find_quasi_basis(e, tau);
  if (!qb.basis) return report;
  report.quasi_basis_size = static_cast<int>(qb.basis->elements.size());
  report.index = watatani_index(e, *qb.basis);
  report.index_norm = report.index->norm;
  return report;
}

}  // namespace qindex
