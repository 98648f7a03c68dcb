#include "qindex/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "qindex/expectation.hpp"

namespace qindex {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

bool lex_less(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
  return false;
}

std::vector<std::int64_t> flatten(const IntMatrix& m) {
  std::vector<std::int64_t> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

IntMatrix integer_inverse(const IntMatrix& u) {
  const Eigen::MatrixXd inv = u.cast<double>().inverse();
  IntMatrix out(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j) out(i, j) = std::llround(inv(i, j));
  if (u * out != IntMatrix::Identity(u.rows(), u.cols()))
    fail(ErrorKind::Validation, "transform is not unimodular");
  return out;
}

}  // namespace

LieType parse_lie_type(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != '_' && !std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 2 || !std::isalpha(static_cast<unsigned char>(s[0])))
    fail(ErrorKind::InvalidArgument, "cannot parse Lie type '" + std::string(text) + "'");
  LieType t;
  t.family = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  const std::string digits = s.substr(1);
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
      digits.size() > 3)
    fail(ErrorKind::InvalidArgument, "cannot parse Lie type '" + std::string(text) + "'");
  t.rank = std::stoi(digits);
  bool ok = false;
  switch (t.family) {
    case 'A': ok = t.rank >= 1; break;
    case 'B': ok = t.rank >= 2; break;
    case 'C': ok = t.rank >= 2; break;
    case 'D': ok = t.rank >= 3; break;
    case 'E': ok = t.rank >= 6 && t.rank <= 8; break;
    case 'F': ok = t.rank == 4; break;
    case 'G': ok = t.rank == 2; break;
    default: break;
  }
  if (!ok) fail(ErrorKind::InvalidArgument, "unsupported Lie type '" + std::string(text) + "'");
  return t;
}

IntMatrix standard_cartan(const LieType& type) {
  const int r = type.rank;
  IntMatrix a = IntMatrix::Zero(r, r);
  for (int i = 0; i < r; ++i) a(i, i) = 2;
  auto link = [&](int i, int j) { a(i - 1, j - 1) = a(j - 1, i - 1) = -1; };
  switch (type.family) {
    case 'A':
    case 'B':
    case 'C':
      for (int i = 1; i < r; ++i) link(i, i + 1);
      if (type.family == 'B') a(r - 1, r - 2) = -2;
      if (type.family == 'C') a(r - 2, r - 1) = -2;
      break;
    case 'D':
      for (int i = 1; i < r - 1; ++i) link(i, i + 1);
      link(r - 2, r);
      break;
    case 'E':
      link(1, 3);
      link(2, 4);
      for (int i = 3; i < r; ++i) link(i, i + 1);
      break;
    case 'F':
      link(1, 2);
      link(2, 3);
      link(3, 4);
      a(2, 1) = -2;
      break;
    case 'G':
      link(1, 2);
      a(0, 1) = -3;
      break;
    default:
      fail(ErrorKind::InvalidArgument, "unsupported Lie family");
  }
  return a;
}

CartanData make_cartan(const LieType& type) { return {type, standard_cartan(type)}; }

std::int64_t determinant(const IntMatrix& m) {
  require(m.rows() == m.cols(), "determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  const auto snf = smith_normal_form(m);
  std::int64_t det = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i) det *= snf.D(i, i);
  const double sign = m.cast<double>().determinant();
  return sign < 0 ? -det : det;
}

void validate_cartan(const CartanData& data) {
  const IntMatrix expected = standard_cartan(data.type);
  if (data.cartan.rows() != expected.rows() || data.cartan.cols() != expected.cols() ||
      data.cartan != expected)
    fail(ErrorKind::Validation, "matrix is not the standard Cartan matrix of " + data.type.name());
  if (determinant(data.cartan) <= 0) fail(ErrorKind::Validation, "Cartan matrix has det <= 0");
}

SmithForm smith_normal_form(const IntMatrix& a) {
  const Eigen::Index m = a.rows(), n = a.cols();
  SmithForm s{IntMatrix::Identity(m, m), IntMatrix::Identity(n, n), a};
  IntMatrix& d = s.D;
  auto swap_rows = [&](Eigen::Index i, Eigen::Index j) {
    d.row(i).swap(d.row(j));
    s.U.row(i).swap(s.U.row(j));
  };
  auto swap_cols = [&](Eigen::Index i, Eigen::Index j) {
    d.col(i).swap(d.col(j));
    s.V.col(i).swap(s.V.col(j));
  };
  const Eigen::Index steps = std::min(m, n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (;;) {
      // Move the smallest nonzero entry of the trailing block to (t, t).
      Eigen::Index pi = -1, pj = -1;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (d(i, j) != 0 && (pi < 0 || std::abs(d(i, j)) < std::abs(d(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) return s;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        const std::int64_t q = floor_div(d(i, t), d(t, t));
        d.row(i) -= q * d.row(t);
        s.U.row(i) -= q * s.U.row(t);
        if (d(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        const std::int64_t q = floor_div(d(t, j), d(t, t));
        d.col(j) -= q * d.col(t);
        s.V.col(j) -= q * s.V.col(t);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      d.row(t) += d.row(bad);
      s.U.row(t) += s.U.row(bad);
    }
    if (d(t, t) < 0) {
      d.row(t) *= -1;
      s.U.row(t) *= -1;
    }
  }
  return s;
}

IntMatrix hermite_normal_form(const IntMatrix& rows) {
  IntMatrix h = rows;
  const Eigen::Index n = h.rows(), k = h.cols();
  Eigen::Index pivot_row = 0;
  std::vector<Eigen::Index> pivot_cols;
  for (Eigen::Index c = 0; c < k && pivot_row < n; ++c) {
    for (;;) {
      Eigen::Index best = -1;
      for (Eigen::Index i = pivot_row; i < n; ++i)
        if (h(i, c) != 0 && (best < 0 || std::abs(h(i, c)) < std::abs(h(best, c)))) best = i;
      if (best < 0) break;
      h.row(pivot_row).swap(h.row(best));
      bool done = true;
      for (Eigen::Index i = pivot_row + 1; i < n; ++i) {
        h.row(i) -= floor_div(h(i, c), h(pivot_row, c)) * h.row(pivot_row);
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(pivot_row, c) == 0) continue;
    if (h(pivot_row, c) < 0) h.row(pivot_row) *= -1;
    for (Eigen::Index i = 0; i < pivot_row; ++i)
      h.row(i) -= floor_div(h(i, c), h(pivot_row, c)) * h.row(pivot_row);
    pivot_cols.push_back(c);
    ++pivot_row;
  }
  return h.topRows(pivot_row);
}

bool in_row_lattice(const IntMatrix& hnf, const IntVector& v) {
  IntVector rest = v;
  for (Eigen::Index r = 0; r < hnf.rows(); ++r) {
    Eigen::Index c = 0;
    while (c < hnf.cols() && hnf(r, c) == 0) ++c;
    if (c == hnf.cols()) continue;
    for (Eigen::Index j = 0; j < c; ++j)
      if (rest(j) != 0) return false;
    if (rest(c) % hnf(r, c) != 0) return false;
    rest -= (rest(c) / hnf(r, c)) * hnf.row(r).transpose();
  }
  return rest.isZero();
}

std::int64_t FiniteAbelianGroup::order() const {
  std::int64_t o = 1;
  for (auto d : invariant_factors) o *= d;
  return o;
}

CenterGroup center_group(const IntMatrix& root_columns) {
  require(root_columns.rows() == root_columns.cols() && root_columns.rows() > 0,
          "root matrix must be square and nonempty");
  CenterGroup c;
  c.snf = smith_normal_form(root_columns);
  for (Eigen::Index i = 0; i < c.snf.D.rows(); ++i) {
    const auto d = c.snf.D(i, i);
    if (d == 0) fail(ErrorKind::Validation, "root lattice does not have full rank");
    if (d != 1) {
      c.group.invariant_factors.push_back(d);
      c.coordinates.push_back(static_cast<int>(i));
    }
  }
  return c;
}

CenterGroup center_group(const CartanData& data) {
  validate_cartan(data);
  return center_group(data.cartan);
}

std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup& group, std::int64_t limit) {
  const auto& f = group.invariant_factors;
  for (auto d : f) require(d >= 1, "invariant factors must be positive");
  const std::int64_t order = group.order();
  if (order > limit)
    fail(ErrorKind::InvalidArgument,
         "group of order " + std::to_string(order) + " exceeds the enumeration limit " + std::to_string(limit));
  const auto k = static_cast<Eigen::Index>(f.size());

  IntMatrix base = IntMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) base(i, i) = f[static_cast<size_t>(i)];

  std::vector<IntVector> elements;
  for (std::int64_t e = 0; e < order; ++e) {
    IntVector v(k);
    std::int64_t rest = e;
    for (Eigen::Index i = k; i-- > 0;) {
      v(i) = rest % f[static_cast<size_t>(i)];
      rest /= f[static_cast<size_t>(i)];
    }
    elements.push_back(v);
  }

  std::map<std::vector<std::int64_t>, IntMatrix> found;
  std::vector<IntMatrix> queue{hermite_normal_form(base)};
  found.emplace(flatten(queue[0]), queue[0]);
  for (size_t head = 0; head < queue.size(); ++head) {
    const IntMatrix current = queue[head];
    for (const auto& g : elements) {
      if (in_row_lattice(current, g)) continue;
      IntMatrix stacked(current.rows() + 1, k);
      stacked << current, g.transpose();
      IntMatrix h = hermite_normal_form(stacked);
      if (found.emplace(flatten(h), h).second) queue.push_back(std::move(h));
    }
  }

  std::vector<Subgroup> out;
  for (const auto& [key, h] : found) {
    Subgroup s;
    s.lattice = h;
    std::int64_t index = 1;
    for (Eigen::Index i = 0; i < k; ++i) index *= h(i, i);
    s.order = order / index;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      std::vector<std::int64_t> g(static_cast<size_t>(k));
      bool zero = true;
      for (Eigen::Index i = 0; i < k; ++i) {
        g[static_cast<size_t>(i)] = positive_mod(h(r, i), f[static_cast<size_t>(i)]);
        zero = zero && g[static_cast<size_t>(i)] == 0;
      }
      if (!zero) s.generators.push_back(std::move(g));
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order != b.order) return a.order > b.order;
    return lex_less(a.lattice, b.lattice);
  });
  return out;
}

std::vector<SublatticeSpec> classify_lattices(const CenterGroup& center) {
  const IntMatrix u_inv = integer_inverse(center.snf.U);
  const Eigen::Index r = center.snf.U.rows();
  const std::int64_t order = center.group.order();
  std::vector<SublatticeSpec> out;
  for (auto& sub : enumerate_subgroups(center.group)) {
    // Lifted lattice in SNF coordinates: free in trivial coordinates, the
    // subgroup lattice in the others. Lambda is its image under U^{-1}.
    IntMatrix lifted = IntMatrix::Zero(r, r);
    std::vector<bool> nontrivial(static_cast<size_t>(r), false);
    for (int c : center.coordinates) nontrivial[static_cast<size_t>(c)] = true;
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < r; ++i)
      if (!nontrivial[static_cast<size_t>(i)]) lifted(row++, i) = 1;
    for (Eigen::Index s = 0; s < sub.lattice.rows(); ++s, ++row)
      for (size_t c = 0; c < center.coordinates.size(); ++c)
        lifted(row, center.coordinates[c]) = sub.lattice(s, static_cast<Eigen::Index>(c));
    const IntMatrix lambda_rows = (u_inv * lifted.transpose()).transpose();

    SublatticeSpec spec;
    spec.generators = hermite_normal_form(lambda_rows);
    spec.index_in_P = order / sub.order;
    spec.subgroup = std::move(sub);
    out.push_back(std::move(spec));
  }
  std::sort(out.begin(), out.end(), [](const SublatticeSpec& a, const SublatticeSpec& b) {
    if (a.index_in_P != b.index_in_P) return a.index_in_P < b.index_in_P;
    return lex_less(a.generators, b.generators);
  });
  return out;
}

std::vector<SublatticeSpec> classify_subgroups(const CartanData& data) {
  return classify_lattices(center_group(data));
}

bool irrep_membership(const CenterGroup& center, std::span<const std::int64_t> weight,
                      const SublatticeSpec& lattice) {
  const Eigen::Index r = center.snf.U.rows();
  require(static_cast<Eigen::Index>(weight.size()) == r, "weight has the wrong rank");
  IntVector lambda(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    require(weight[static_cast<size_t>(i)] >= 0, "weight must be dominant");
    lambda(i) = weight[static_cast<size_t>(i)];
  }
  const IntVector x = center.snf.U * lambda;
  const auto& f = center.group.invariant_factors;
  IntVector reduced(static_cast<Eigen::Index>(f.size()));
  for (size_t c = 0; c < f.size(); ++c)
    reduced(static_cast<Eigen::Index>(c)) = positive_mod(x(center.coordinates[c]), f[c]);
  return in_row_lattice(lattice.subgroup.lattice, reduced);
}

TorusCrosscheck crosscheck_torus_index(long n, long d) {
  require(n >= 1 && d >= 1 && n % d == 0, "crosscheck needs d | n");
  TorusCrosscheck out;
  out.n = n;
  out.d = d;

  IntMatrix torus(1, 1);
  torus(0, 0) = n;
  bool matched = false;
  for (const auto& spec : classify_lattices(center_group(torus)))
    if (spec.subgroup.order == d) {
      out.lattice_index = spec.index_in_P;
      matched = true;
    }
  if (!matched) fail(ErrorKind::Validation, "no subgroup of the expected order");

  const auto model = group_algebra_inclusion(n, d);
  const auto e = canonical_expectation(model.inclusion, model.target_trace);
  const auto qb = find_quasi_basis(e, model.target_trace);
  if (!qb.basis) fail(ErrorKind::Infinite, "no quasi-basis: " + qb.diagnostic);
  const auto index = watatani_index(e, *qb.basis);
  out.watatani_index = index.norm;
  out.quasi_basis_size = static_cast<int>(qb.basis->elements.size());
  out.defect = std::abs(index.norm - static_cast<double>(out.lattice_index));
  out.ok = out.defect <= 1e-9 && out.lattice_index * d == n;
  return out;
}

}  // namespace qindex
