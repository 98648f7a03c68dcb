#pragma once

#include <span>
#include <vector>

#include "qindex/fusion.hpp"

namespace qindex {

struct TLJData {
  FusionRing ring;
  std::vector<double> dims;  // sin((a+1) pi / n) / sin(pi / n)
};

// Temperley-Lieb-Jones fusion data at loop parameter 2 cos(pi/n): labels
// "0".."n-2", truncated SU(2) fusion rules, all labels self-dual.
TLJData gen_tlj(int n);

// Group ring of Z/d_1 x ... x Z/d_r. Labels are the coordinates joined by
// '.', e.g. "1.0"; elements are ordered with the last coordinate fastest.
FusionRing gen_pointed(std::span<const int> factors);

// Coordinates of the group element with the given label index.
std::vector<int> pointed_coordinates(std::span<const int> factors, int index);
int pointed_index(std::span<const int> factors, std::span<const int> coords);

FusionModule gen_regular_module(const FusionRing& ring);

// Cosets of the subgroup (given by element indices) acted on by translation.
// Coset labels are "[g]" for the smallest member g. Throws InvalidArgument if
// the elements do not form a subgroup.
FusionModule gen_quotient_module(std::span<const int> factors, std::span<const int> subgroup);

}  // namespace qindex
