#include <doctest.h>

#include <algorithm>
#include <set>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "qindex/lattice.hpp"

using namespace qindex;
using namespace testsupport;

namespace {

std::vector<std::int64_t> indices(const std::vector<SublatticeSpec>& rows) {
  std::vector<std::int64_t> out;
  for (const auto& r : rows) out.push_back(r.index_in_P);
  return out;
}

IntVector column(const IntMatrix& m, Eigen::Index j) { return m.col(j); }

}  // namespace

TEST_CASE("Lie type parsing") {
  CHECK(parse_lie_type("A3").name() == "A3");
  CHECK(parse_lie_type("e_8").name() == "E8");
  CHECK_THROWS_AS(parse_lie_type("B1"), Error);
  CHECK_THROWS_AS(parse_lie_type("E9"), Error);
  CHECK_THROWS_AS(parse_lie_type("X2"), Error);
  CHECK_THROWS_AS(parse_lie_type("A"), Error);
}

TEST_CASE("Cartan data") {
  const auto g2 = standard_cartan(parse_lie_type("G2"));
  CHECK(g2(0, 1) == -3);
  CHECK(g2(1, 0) == -1);
  auto bad = make_cartan(parse_lie_type("A2"));
  bad.cartan(0, 1) = 0;
  CHECK_THROWS_AS(validate_cartan(bad), Error);

  // |P/Q| = det(Cartan) for every supported type.
  const std::vector<std::pair<std::string, std::int64_t>> table{
      {"A1", 2}, {"A4", 5}, {"B2", 2}, {"B5", 2}, {"C3", 2}, {"D4", 4}, {"D5", 4},
      {"E6", 3}, {"E7", 2}, {"E8", 1}, {"F4", 1}, {"G2", 1}};
  for (const auto& [name, det] : table) {
    const auto data = make_cartan(parse_lie_type(name));
    CHECK(determinant(data.cartan) == det);
    CHECK(std::llround(data.cartan.cast<double>().determinant()) == det);
    CHECK(center_group(data).group.order() == det);
  }
}

TEST_CASE("Smith normal form") {
  for (const char* name : {"A3", "B4", "C4", "D4", "D6", "E6", "E7", "F4", "G2"}) {
    const auto a = standard_cartan(parse_lie_type(name));
    const auto s = smith_normal_form(a);
    CHECK(s.U * a * s.V == s.D);
    CHECK(std::abs(s.U.cast<double>().determinant()) == doctest::Approx(1.0));
    CHECK(std::abs(s.V.cast<double>().determinant()) == doctest::Approx(1.0));
    for (Eigen::Index i = 0; i < s.D.rows(); ++i)
      for (Eigen::Index j = 0; j < s.D.cols(); ++j)
        if (i != j) CHECK(s.D(i, j) == 0);
    for (Eigen::Index i = 0; i + 1 < s.D.rows(); ++i) CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
  }
  CHECK(center_group(make_cartan(parse_lie_type("A1"))).group.invariant_factors == std::vector<std::int64_t>{2});
  CHECK(center_group(make_cartan(parse_lie_type("A3"))).group.invariant_factors == std::vector<std::int64_t>{4});
  CHECK(center_group(make_cartan(parse_lie_type("D4"))).group.invariant_factors == std::vector<std::int64_t>{2, 2});
  CHECK(center_group(make_cartan(parse_lie_type("D5"))).group.invariant_factors == std::vector<std::int64_t>{4});
}

TEST_CASE("Hermite normal form") {
  IntMatrix rows(3, 2);
  rows << 4, 6, 2, 2, 0, 4;
  const auto h = hermite_normal_form(rows);
  CHECK(h.rows() == 2);
  CHECK(h(1, 0) == 0);
  CHECK(h(0, 0) > 0);
  CHECK(h(1, 1) > 0);
  CHECK(h(0, 1) >= 0);
  CHECK(h(0, 1) < h(1, 1));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) CHECK(in_row_lattice(h, rows.row(r).transpose()));
  IntVector v(2);
  v << 1, 0;
  CHECK_FALSE(in_row_lattice(h, v));
}

TEST_CASE("subgroup enumeration against brute force") {
  for (const auto& f : std::vector<std::vector<std::int64_t>>{
           {}, {2}, {4}, {6}, {12}, {2, 2}, {2, 4}, {3, 3}, {2, 2, 2}, {2, 6}}) {
    const auto subs = enumerate_subgroups(FiniteAbelianGroup{f});
    const auto oracle = brute_force_subgroups(f);
    CHECK(subs.size() == oracle.size());
    std::multiset<std::int64_t> orders_a, orders_b;
    for (const auto& s : subs) orders_a.insert(s.order);
    for (const auto& s : oracle) orders_b.insert(static_cast<std::int64_t>(s.size()));
    CHECK(orders_a == orders_b);
  }
  CHECK(enumerate_subgroups(FiniteAbelianGroup{{4}}).size() == 3);
  CHECK(enumerate_subgroups(FiniteAbelianGroup{{2, 2}}).size() == 5);
  CHECK(enumerate_subgroups(FiniteAbelianGroup{{}}).size() == 1);
  CHECK_THROWS_AS(enumerate_subgroups(FiniteAbelianGroup{{20000}}), Error);
}

TEST_CASE("classification table") {
  CHECK(indices(classify_subgroups(make_cartan(parse_lie_type("A1")))) == std::vector<std::int64_t>{1, 2});
  CHECK(indices(classify_subgroups(make_cartan(parse_lie_type("A3")))) == std::vector<std::int64_t>{1, 2, 4});
  CHECK(indices(classify_subgroups(make_cartan(parse_lie_type("D4")))) == std::vector<std::int64_t>{1, 2, 2, 2, 4});
  CHECK(indices(classify_subgroups(make_cartan(parse_lie_type("E6")))) == std::vector<std::int64_t>{1, 3});
  CHECK(indices(classify_subgroups(make_cartan(parse_lie_type("E8")))) == std::vector<std::int64_t>{1});

  for (const char* name : {"A1", "A3", "A5", "B3", "C4", "D4", "D5", "D6", "E6", "E7", "E8", "F4", "G2"}) {
    const auto data = make_cartan(parse_lie_type(name));
    const auto center = center_group(data);
    const auto rows = classify_subgroups(data);
    CHECK(rows.size() == brute_force_subgroups(center.group.invariant_factors).size());
    std::set<std::vector<std::int64_t>> distinct;
    for (const auto& r : rows) {
      // Q <= Lambda: every root lies in Lambda.
      for (Eigen::Index j = 0; j < data.cartan.cols(); ++j) CHECK(in_row_lattice(r.generators, column(data.cartan, j)));
      // [P : Lambda] = det of the HNF basis.
      std::int64_t det = 1;
      for (Eigen::Index i = 0; i < r.generators.rows(); ++i) det *= r.generators(i, i);
      CHECK(det == r.index_in_P);
      CHECK(r.index_in_P * r.subgroup.order == center.group.order());
      distinct.insert(std::vector<std::int64_t>(r.generators.data(), r.generators.data() + r.generators.size()));
    }
    CHECK(distinct.size() == rows.size());
    CHECK(rows.front().index_in_P == 1);
    CHECK(rows.back().index_in_P == center.group.order());
  }
}

TEST_CASE("index multiplicativity along chains") {
  for (const char* name : {"A3", "A5", "D4", "D6"}) {
    const auto rows = classify_subgroups(make_cartan(parse_lie_type(name)));
    for (const auto& small : rows)
      for (const auto& big : rows) {
        bool contained = true;
        for (Eigen::Index r = 0; r < small.generators.rows(); ++r)
          contained = contained && in_row_lattice(big.generators, small.generators.row(r).transpose());
        if (!contained) continue;
        // [Lambda_2 : Lambda_1] from the determinants of the bases.
        std::int64_t ds = 1, db = 1;
        for (Eigen::Index i = 0; i < small.generators.rows(); ++i) ds *= small.generators(i, i);
        for (Eigen::Index i = 0; i < big.generators.rows(); ++i) db *= big.generators(i, i);
        CHECK(ds % db == 0);
        CHECK(small.index_in_P == big.index_in_P * (ds / db));
      }
  }
}

TEST_CASE("irrep membership") {
  const auto a1 = make_cartan(parse_lie_type("A1"));
  const auto c = center_group(a1);
  const auto rows = classify_subgroups(a1);
  const auto& q = rows.back();
  CHECK(irrep_membership(c, std::vector<std::int64_t>{2}, q));
  CHECK_FALSE(irrep_membership(c, std::vector<std::int64_t>{1}, q));
  CHECK_THROWS_AS(irrep_membership(c, std::vector<std::int64_t>{-1}, q), Error);

  for (const char* name : {"A3", "D4", "E6", "B3"}) {
    const auto data = make_cartan(parse_lie_type(name));
    const auto center = center_group(data);
    const auto lattices = classify_subgroups(data);
    const int r = static_cast<int>(data.cartan.rows());
    std::vector<std::vector<std::int64_t>> weights;
    for (int k = 0; k < 30; ++k) {
      std::vector<std::int64_t> w(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i) w[static_cast<size_t>(i)] = (k * (i + 3) + i * i) % 4;
      weights.push_back(w);
    }
    for (const auto& lat : lattices) {
      for (const auto& w : weights) {
        // Oracle: direct membership of lambda in the Hermite basis of Lambda.
        IntVector v(r);
        for (int i = 0; i < r; ++i) v(i) = w[static_cast<size_t>(i)];
        const bool direct = in_row_lattice(lat.generators, v);
        CHECK(irrep_membership(center, w, lat) == direct);
        CHECK(irrep_membership(center, w, lattices.front()));
      }
      CHECK(irrep_membership(center, std::vector<std::int64_t>(static_cast<size_t>(r), 0), lat));
      for (const auto& a : weights)
        for (const auto& b : weights)
          if (irrep_membership(center, a, lat) && irrep_membership(center, b, lat)) {
            std::vector<std::int64_t> sum(a.size());
            for (size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
            CHECK(irrep_membership(center, sum, lat));
          }
    }
  }
}

TEST_CASE("torus crosscheck") {
  const auto a = crosscheck_torus_index(4, 2);
  CHECK(a.ok);
  CHECK(a.lattice_index == 2);
  CHECK(crosscheck_torus_index(1, 1).lattice_index == 1);
  const auto c = crosscheck_torus_index(6, 2);
  CHECK(c.lattice_index == 3);
  CHECK(c.watatani_index == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(crosscheck_torus_index(6, 4), Error);
}
