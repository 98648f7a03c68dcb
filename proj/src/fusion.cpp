#include "qindex/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qindex {

namespace {

int find_label(const std::vector<std::string>& labels, std::string_view label) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) fail(ErrorKind::InvalidArgument, "unknown label '" + std::string(label) + "'");
  return static_cast<int>(it - labels.begin());
}

void check_unique(const std::vector<std::string>& labels, const char* what) {
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorKind::InvalidArgument, std::string("duplicate ") + what + " label");
}

}  // namespace

FusionRing::FusionRing(std::vector<std::string> labels, int unit, std::vector<int> dual,
                       std::vector<int> mult)
    : labels_(std::move(labels)), unit_(unit), dual_(std::move(dual)), mult_(std::move(mult)) {
  const size_t r = labels_.size();
  require(r > 0, "fusion ring needs at least one simple object");
  check_unique(labels_, "fusion ring");
  require(unit_ >= 0 && static_cast<size_t>(unit_) < r, "unit label out of range");
  require(dual_.size() == r, "dual table has the wrong length");
  for (int d : dual_) require(d >= 0 && static_cast<size_t>(d) < r, "dual label out of range");
  require(mult_.size() == r * r * r, "multiplicity tensor has the wrong size");
  for (int x : mult_) require(x >= 0, "fusion multiplicities must be nonnegative");
}

int FusionRing::index_of(std::string_view label) const { return find_label(labels_, label); }

Eigen::MatrixXd FusionRing::fusion_matrix(int u) const {
  Eigen::MatrixXd m(rank(), rank());
  for (int v = 0; v < rank(); ++v)
    for (int w = 0; w < rank(); ++w) m(v, w) = N(u, v, w);
  return m;
}

FusionModule::FusionModule(FusionRing ring, std::vector<std::string> labels, std::vector<int> action)
    : ring_(std::move(ring)), labels_(std::move(labels)), action_(std::move(action)) {
  const size_t s = labels_.size();
  require(s > 0, "module needs at least one simple object");
  check_unique(labels_, "module");
  require(action_.size() == static_cast<size_t>(ring_.rank()) * s * s,
          "action tensor has the wrong size");
  for (int x : action_) require(x >= 0, "action multiplicities must be nonnegative");
}

int FusionModule::index_of(std::string_view label) const { return find_label(labels_, label); }

Eigen::MatrixXd FusionModule::action_matrix(int u) const {
  Eigen::MatrixXd m(size(), size());
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) m(i, j) = n(u, i, j);
  return m;
}

StructureCheck validate_fusion(const FusionRing& ring) {
  const int r = ring.rank();
  const int one = ring.unit();
  auto violation = [&](const std::string& what) { return StructureCheck{false, what}; };
  auto names = [&](std::initializer_list<int> xs) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (int x : xs) {
      os << (first ? "" : ",") << ring.label(x);
      first = false;
    }
    os << ")";
    return os.str();
  };

  for (int v = 0; v < r; ++v)
    for (int w = 0; w < r; ++w) {
      const int delta = v == w ? 1 : 0;
      if (ring.N(one, v, w) != delta || ring.N(v, one, w) != delta)
        return violation("unit: N_{1V}^W or N_{V1}^W differs from delta at " + names({v, w}));
    }
  for (int u = 0; u < r; ++u)
    if (ring.dual(ring.dual(u)) != u) return violation("dual: not an involution at " + names({u}));
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < r; ++v) {
      const int expected = v == ring.dual(u) ? 1 : 0;
      if (ring.N(u, v, one) != expected)
        return violation("duality: N_{UV}^1 differs from delta_{V,dual U} at " + names({u, v}));
    }
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < r; ++v)
      for (int w = 0; w < r; ++w)
        if (ring.N(ring.dual(u), w, v) != ring.N(u, v, w))
          return violation("frobenius: N_{dual U,W}^V differs from N_{UV}^W at " + names({u, v, w}));
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < r; ++v)
      for (int w = 0; w < r; ++w)
        for (int y = 0; y < r; ++y) {
          long lhs = 0, rhs = 0;
          for (int x = 0; x < r; ++x) {
            lhs += static_cast<long>(ring.N(u, v, x)) * ring.N(x, w, y);
            rhs += static_cast<long>(ring.N(v, w, x)) * ring.N(u, x, y);
          }
          if (lhs != rhs) return violation("associativity at " + names({u, v, w, y}));
        }
  return {};
}

StructureCheck validate_module(const FusionModule& module) {
  const auto& ring = module.ring();
  if (auto rc = validate_fusion(ring); !rc.ok) return {false, "ring: " + rc.violation};
  const int r = ring.rank();
  const int s = module.size();
  auto names = [&](int u, int i, int j) {
    return "(" + ring.label(u) + "," + module.label(i) + "," + module.label(j) + ")";
  };
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      if (module.n(ring.unit(), i, j) != (i == j ? 1 : 0))
        return {false, "unit: n_{1,i}^j differs from delta at " + names(ring.unit(), i, j)};
  for (int u = 0; u < r; ++u)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        if (module.n(ring.dual(u), j, i) != module.n(u, i, j))
          return {false, "conjugate transpose: n_{dual U,j}^i differs from n_{U,i}^j at " + names(u, i, j)};
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < r; ++v)
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          long lhs = 0, rhs = 0;
          for (int x = 0; x < r; ++x) lhs += static_cast<long>(ring.N(u, v, x)) * module.n(x, i, j);
          for (int k = 0; k < s; ++k) rhs += static_cast<long>(module.n(v, i, k)) * module.n(u, k, j);
          if (lhs != rhs)
            return {false, "mixed associativity at (" + ring.label(u) + "," + ring.label(v) + "," +
                               module.label(i) + "," + module.label(j) + ")"};
        }
  return {};
}

double character_defect(const FusionRing& ring, std::span<const double> dims) {
  require(static_cast<int>(dims.size()) == ring.rank(), "dimension vector has the wrong length");
  double worst = 0.0;
  for (int u = 0; u < ring.rank(); ++u)
    for (int v = 0; v < ring.rank(); ++v) {
      double lhs = 0.0;
      for (int w = 0; w < ring.rank(); ++w) lhs += ring.N(u, v, w) * dims[w];
      worst = std::max(worst, std::abs(lhs - dims[u] * dims[v]));
    }
  return worst;
}

std::vector<double> pf_dimensions(const FusionRing& ring) {
  const int r = ring.rank();
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(r, r);
  for (int u = 0; u < r; ++u) total += ring.fusion_matrix(u);
  // sum_u N_u is symmetric for a ring with duality and Frobenius reciprocity;
  // symmetrising keeps the solver well defined on invalid input too.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (total + total.transpose()));
  Eigen::VectorXd v = solver.eigenvectors().col(r - 1);
  const double pivot = v(ring.unit());
  if (std::abs(pivot) < 1e-14)
    fail(ErrorKind::Validation, "Perron-Frobenius vector vanishes on the unit");
  v /= pivot;
  std::vector<double> dims(v.data(), v.data() + r);
  for (int u = 0; u < r; ++u)
    if (!(dims[u] > 0.0))
      fail(ErrorKind::Validation, "Perron-Frobenius vector is not strictly positive at " + ring.label(u));
  const double defect = character_defect(ring, dims);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "Perron-Frobenius vector is not a character (defect " << defect << ")";
    fail(ErrorKind::Validation, os.str());
  }
  return dims;
}

const char* to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::Ok: return "ok";
    case TraceStatus::NoSolution: return "no solution";
    case TraceStatus::NoPositiveSolution: return "no positive solution";
    case TraceStatus::Decomposable: return "solution space dimension > 1 (decomposable module)";
  }
  return "unknown";
}

ModuleTraceResult module_trace_solve(const FusionModule& module, std::span<const double> ring_dims,
                                     int normalization) {
  const auto& ring = module.ring();
  const int r = ring.rank();
  const int s = module.size();
  require(static_cast<int>(ring_dims.size()) == r, "ring dimension vector has the wrong length");
  require(normalization >= 0 && normalization < s, "normalization label out of range");

  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r) * s, s);
  for (int u = 0; u < r; ++u)
    for (int i = 0; i < s; ++i) {
      const Eigen::Index row = static_cast<Eigen::Index>(u) * s + i;
      for (int j = 0; j < s; ++j) system(row, j) += module.n(u, i, j);
      system(row, i) -= ring_dims[u];
    }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  ModuleTraceResult result;
  result.nullity = s - rank;
  if (result.nullity == 0) {
    result.status = TraceStatus::NoSolution;
    return result;
  }
  if (result.nullity > 1) {
    result.status = TraceStatus::Decomposable;
    return result;
  }
  Eigen::VectorXd m = svd.matrixV().col(s - 1);
  if (std::abs(m(normalization)) < 1e-14) {
    result.status = TraceStatus::NoPositiveSolution;
    return result;
  }
  m /= m(normalization);
  for (int i = 0; i < s; ++i)
    if (!(m(i) > 1e-12)) {
      result.status = TraceStatus::NoPositiveSolution;
      return result;
    }
  result.status = TraceStatus::Ok;
  result.trace = ModuleTrace{std::vector<double>(m.data(), m.data() + s), normalization};
  return result;
}

std::complex<double> plancherel_weight(const ModuleTrace& trace,
                                       std::span<const std::complex<double>> a) {
  require(a.size() == trace.values.size(), "Plancherel argument has the wrong length");
  std::complex<double> total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) total += trace.values[i] * trace.values[i] * a[i];
  return total;
}

std::vector<std::vector<int>> equivalence_classes(const FusionModule& module,
                                                  std::span<const int> subring) {
  const auto& ring = module.ring();
  std::vector<bool> in_sub(static_cast<size_t>(ring.rank()), false);
  for (int u : subring) {
    require(u >= 0 && u < ring.rank(), "subring label out of range");
    in_sub[static_cast<size_t>(u)] = true;
  }
  for (int u : subring) {
    if (!in_sub[static_cast<size_t>(ring.dual(u))])
      fail(ErrorKind::InvalidArgument, "subring is not closed under duals at " + ring.label(u));
    for (int v : subring)
      for (int w = 0; w < ring.rank(); ++w)
        if (ring.N(u, v, w) != 0 && !in_sub[static_cast<size_t>(w)])
          fail(ErrorKind::InvalidArgument, "subring is not closed under fusion: " + ring.label(u) +
                                               " x " + ring.label(v) + " contains " + ring.label(w));
  }

  const int s = module.size();
  std::vector<int> parent(static_cast<size_t>(s));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
    return x;
  };
  for (int u : subring)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        if (module.n(u, j, i) != 0) {
          const int a = find(i), b = find(j);
          if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
        }

  std::vector<std::vector<int>> classes;
  std::vector<int> slot(static_cast<size_t>(s), -1);
  for (int i = 0; i < s; ++i) {
    const int root = find(i);
    if (slot[static_cast<size_t>(root)] < 0) {
      slot[static_cast<size_t>(root)] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<size_t>(slot[static_cast<size_t>(root)])].push_back(i);
  }
  return classes;
}

MultiplicityFunctor MultiplicityFunctor::identity(int size) {
  require(size > 0, "functor on an empty module");
  return {Eigen::MatrixXi::Identity(size, size), {}, {}};
}

MultiplicityFunctor MultiplicityFunctor::action(const FusionModule& module, int u) {
  require(u >= 0 && u < module.ring().rank(), "ring label out of range");
  const int s = module.size();
  MultiplicityFunctor f{Eigen::MatrixXi(s, s), {}, {}};
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) f.dims(j, i) = module.n(u, i, j);
  return f;
}

std::vector<double> functor_dimension(const MultiplicityFunctor& f, const ModuleTrace& trace) {
  const int s = f.size();
  require(static_cast<int>(trace.values.size()) == s, "functor and trace sizes differ");
  std::vector<double> out(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) {
    double total = 0.0;
    for (int j = 0; j < s; ++j) total += f.dims(j, i) * trace.values[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = total / trace.values[static_cast<size_t>(i)];
  }
  return out;
}

LocalConstancy check_locally_constant(std::span<const double> d_f,
                                      const std::vector<std::vector<int>>& partition, double tol) {
  LocalConstancy out;
  for (size_t c = 0; c < partition.size(); ++c) {
    double lo = INFINITY, hi = -INFINITY;
    for (int i : partition[c]) {
      require(i >= 0 && static_cast<size_t>(i) < d_f.size(), "partition label out of range");
      lo = std::min(lo, d_f[static_cast<size_t>(i)]);
      hi = std::max(hi, d_f[static_cast<size_t>(i)]);
    }
    const double spread = partition[c].empty() ? 0.0 : hi - lo;
    if (spread > tol && out.ok) {
      out.ok = false;
      out.violating_class = static_cast<int>(c);
      out.spread = spread;
    } else if (out.ok) {
      out.spread = std::max(out.spread, spread);
    }
  }
  return out;
}

std::vector<StandardComponent> standard_solution_components(const MultiplicityFunctor& f,
                                                            const ModuleTrace& trace) {
  const int s = f.size();
  require(static_cast<int>(trace.values.size()) == s, "functor and trace sizes differ");
  std::vector<StandardComponent> out;
  out.reserve(static_cast<size_t>(s) * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      StandardComponent c;
      c.i = i;
      c.j = j;
      c.multiplicity = f.dims(j, i);
      const double mi = trace.values[static_cast<size_t>(i)];
      const double mj = trace.values[static_cast<size_t>(j)];
      c.norm_r_sq = mj / mi * c.multiplicity;
      c.norm_rbar_sq = mi / mj * c.multiplicity;
      const int n = c.multiplicity;
      c.r = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
      c.rbar = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
      for (int a = 0; a < n; ++a) {
        c.r(a * n + a) = std::sqrt(mj / mi);
        c.rbar(a * n + a) = std::sqrt(mi / mj);
      }
      out.push_back(std::move(c));
    }
  return out;
}

std::vector<StandardComponent> standard_solution_components(const FusionModule& module,
                                                            const ModuleTrace& trace, int u) {
  return standard_solution_components(MultiplicityFunctor::action(module, u), trace);
}

MultiplicityFunctor with_standard_vectors(MultiplicityFunctor f, const ModuleTrace& trace) {
  const int s = f.size();
  f.r.assign(static_cast<size_t>(s) * s, {});
  f.rbar.assign(static_cast<size_t>(s) * s, {});
  for (auto& c : standard_solution_components(f, trace)) {
    const size_t slot = static_cast<size_t>(c.j) * s + c.i;
    f.r[slot] = std::move(c.r);
    f.rbar[slot] = std::move(c.rbar);
  }
  return f;
}

FunctorTraceResult functor_trace(const MultiplicityFunctor& f, const ModuleTrace& trace,
                                 std::span<const Eigen::MatrixXcd> eta, double tol) {
  const int s = f.size();
  require(f.has_vectors(), "functor_trace needs explicit solution vectors");
  require(static_cast<int>(trace.values.size()) == s, "functor and trace sizes differ");
  require(eta.size() == static_cast<size_t>(s) * s, "eta needs one block per (j, i)");

  FunctorTraceResult out;
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      const size_t slot = static_cast<size_t>(j) * s + i;
      const int n = f.dims(j, i);
      const auto& block = eta[slot];
      require(block.rows() == n && block.cols() == n, "eta block has the wrong size");
      const double mi = trace.values[static_cast<size_t>(i)];
      const double mj = trace.values[static_cast<size_t>(j)];
      if (n == 0) continue;
      out.closed_form += mi * mj * block.trace().real();

      const auto& r = f.r[slot];
      const auto& rbar = f.rbar[slot];
      require(r.size() == n * n && rbar.size() == n * n, "solution vector has the wrong length");
      // (id (x) eta) on conj(H) (x) H and (eta (x) id) on H (x) conj(H).
      Eigen::VectorXcd left_image(n * n), right_image(n * n);
      for (int a = 0; a < n; ++a) {
        left_image.segment(a * n, n) = block * r.segment(a * n, n);
      }
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
          std::complex<double> acc = 0.0;
          for (int c = 0; c < n; ++c) acc += block(a, c) * rbar(c * n + b);
          right_image(a * n + b) = acc;
        }
      out.left += mi * mi * r.dot(left_image).real();
      out.right += mj * mj * rbar.dot(right_image).real();
    }
  out.agree = std::abs(out.left - out.closed_form) <= tol && std::abs(out.right - out.closed_form) <= tol;
  return out;
}

UniformFiniteness uniformly_finite_check(const Eigen::MatrixXi& dims) {
  UniformFiniteness out;
  for (Eigen::Index i = 0; i < dims.rows(); ++i) {
    require((dims.row(i).array() >= 0).all(), "multiplicities must be nonnegative");
    out.max_row_sum = std::max<long>(out.max_row_sum, dims.row(i).sum());
  }
  for (Eigen::Index j = 0; j < dims.cols(); ++j)
    out.max_col_sum = std::max<long>(out.max_col_sum, dims.col(j).sum());
  return out;
}

JonesMembership jones_membership(double d, double tol) {
  require(d > 0.0 && std::isfinite(d), "Jones membership needs a positive finite value");
  JonesMembership out;
  if (d >= 4.0 - tol) {
    out.member = true;
    out.continuum = true;
    return out;
  }
  auto value = [](int n) {
    const double c = std::cos(std::numbers::pi / n);
    return 4.0 * c * c;
  };
  const double half = std::sqrt(std::min(d, 4.0)) / 2.0;
  const double estimate = std::numbers::pi / std::acos(std::clamp(half, -1.0, 1.0));
  const long centre = std::lround(estimate);
  for (long n = std::max(3L, centre - 2); n <= centre + 2; ++n) {
    if (std::abs(d - value(static_cast<int>(n))) <= tol) {
      out.member = true;
      out.witness = static_cast<int>(n);
      return out;
    }
  }
  return out;
}

double qsystem_degree(std::span<const double> ring_dims, int x) {
  require(x >= 0 && static_cast<size_t>(x) < ring_dims.size(), "label out of range");
  return ring_dims[static_cast<size_t>(x)] * ring_dims[static_cast<size_t>(x)];
}

}  // namespace qindex
