#include "qindex/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace qindex {

TLJData gen_tlj(int n) {
  require(n >= 3, "TLJ(n) needs n >= 3");
  const int k = n - 2;
  const int r = k + 1;
  std::vector<std::string> labels;
  std::vector<int> dual(static_cast<size_t>(r));
  for (int a = 0; a < r; ++a) {
    labels.push_back(std::to_string(a));
    dual[static_cast<size_t>(a)] = a;
  }
  std::vector<int> mult(static_cast<size_t>(r) * r * r, 0);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        const bool allowed = std::abs(a - b) <= c && c <= std::min(a + b, 2 * k - a - b) && (a + b + c) % 2 == 0;
        mult[(static_cast<size_t>(a) * r + b) * r + c] = allowed ? 1 : 0;
      }
  std::vector<double> dims;
  const double s = std::sin(std::numbers::pi / n);
  for (int a = 0; a < r; ++a) dims.push_back(std::sin((a + 1) * std::numbers::pi / n) / s);
  return {FusionRing(std::move(labels), 0, std::move(dual), std::move(mult)), std::move(dims)};
}

std::vector<int> pointed_coordinates(std::span<const int> factors, int index) {
  std::vector<int> coords(factors.size());
  for (size_t k = factors.size(); k-- > 0;) {
    coords[k] = index % factors[k];
    index /= factors[k];
  }
  return coords;
}

int pointed_index(std::span<const int> factors, std::span<const int> coords) {
  int index = 0;
  for (size_t k = 0; k < factors.size(); ++k) {
    const int f = factors[k];
    index = index * f + ((coords[k] % f) + f) % f;
  }
  return index;
}

namespace {

int group_order(std::span<const int> factors) {
  require(!factors.empty(), "pointed ring needs at least one invariant factor");
  long order = 1;
  for (int f : factors) {
    require(f >= 1, "invariant factors must be >= 1");
    order *= f;
    require(order <= 4096, "pointed ring is too large");
  }
  return static_cast<int>(order);
}

int add(std::span<const int> factors, int g, int h) {
  auto a = pointed_coordinates(factors, g);
  const auto b = pointed_coordinates(factors, h);
  for (size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return pointed_index(factors, a);
}

int negate(std::span<const int> factors, int g) {
  auto a = pointed_coordinates(factors, g);
  for (int& x : a) x = -x;
  return pointed_index(factors, a);
}

std::string pointed_label(std::span<const int> factors, int g) {
  std::string out;
  const auto c = pointed_coordinates(factors, g);
  for (size_t k = 0; k < c.size(); ++k) out += (k ? "." : "") + std::to_string(c[k]);
  return out;
}

}  // namespace

FusionRing gen_pointed(std::span<const int> factors) {
  const int order = group_order(factors);
  std::vector<std::string> labels;
  std::vector<int> dual;
  std::vector<int> mult(static_cast<size_t>(order) * order * order, 0);
  for (int g = 0; g < order; ++g) {
    labels.push_back(pointed_label(factors, g));
    dual.push_back(negate(factors, g));
    for (int h = 0; h < order; ++h) mult[(static_cast<size_t>(g) * order + h) * order + add(factors, g, h)] = 1;
  }
  return FusionRing(std::move(labels), 0, std::move(dual), std::move(mult));
}

FusionModule gen_regular_module(const FusionRing& ring) {
  return FusionModule(ring, ring.labels(), ring.multiplicities());
}

FusionModule gen_quotient_module(std::span<const int> factors, std::span<const int> subgroup) {
  const int order = group_order(factors);
  std::set<int> h(subgroup.begin(), subgroup.end());
  for (int g : h) require(g >= 0 && g < order, "subgroup element out of range");
  if (!h.count(0)) fail(ErrorKind::InvalidArgument, "subgroup must contain the identity");
  for (int a : h)
    for (int b : h)
      if (!h.count(add(factors, a, negate(factors, b))))
        fail(ErrorKind::InvalidArgument, "elements do not form a subgroup");

  std::vector<int> coset_of(static_cast<size_t>(order), -1);
  std::vector<std::string> labels;
  for (int g = 0; g < order; ++g) {
    if (coset_of[static_cast<size_t>(g)] >= 0) continue;
    const int id = static_cast<int>(labels.size());
    labels.push_back("[" + pointed_label(factors, g) + "]");
    for (int x : h) coset_of[static_cast<size_t>(add(factors, g, x))] = id;
  }
  const int s = static_cast<int>(labels.size());
  std::vector<int> representative(static_cast<size_t>(s), -1);
  for (int g = order; g-- > 0;) representative[static_cast<size_t>(coset_of[static_cast<size_t>(g)])] = g;

  std::vector<int> action(static_cast<size_t>(order) * s * s, 0);
  for (int u = 0; u < order; ++u)
    for (int i = 0; i < s; ++i) {
      const int j = coset_of[static_cast<size_t>(add(factors, u, representative[static_cast<size_t>(i)]))];
      action[(static_cast<size_t>(u) * s + i) * s + j] = 1;
    }
  return FusionModule(gen_pointed(factors), std::move(labels), std::move(action));
}

}  // namespace qindex
