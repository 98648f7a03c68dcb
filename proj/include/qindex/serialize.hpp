#pragma once

// JSON documents for algebras, elements, homomorphisms, expectations, fusion
// rings and fusion modules. Schema errors raise ErrorKind::Parse with a JSON
// pointer to the offending value; structural failures (e.g. a matrix that is
// not a *-homomorphism) raise ErrorKind::Validation.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qindex/expectation.hpp"
#include "qindex/fusion.hpp"

namespace qindex {

using Json = nlohmann::ordered_json;

// Parses text; syntax errors report line and column.
Json parse_json(std::string_view text);

MultiMatrixAlgebra algebra_from_json(const Json& j, const std::string& path = "");
Json to_json(const MultiMatrixAlgebra& alg);

AlgebraElement element_from_json(const MultiMatrixAlgebra& alg, const Json& j,
                                 const std::string& path = "");
Json to_json(const AlgebraElement& x);

// Row-major flattened complex matrix; entries are [re, im] or plain numbers.
CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols,
                         const std::string& path);
Json matrix_to_json(const CMatrix& m);

StarHomomorphism homomorphism_from_json(const Json& j, const std::string& path = "");
Json to_json(const StarHomomorphism& h);

struct ExpectationSpec {
  ConditionalExpectation expectation;
  std::optional<TraceWeights> trace;  // per-block weights on B
};

ExpectationSpec expectation_from_json(const Json& j);
Json to_json(const ConditionalExpectation& e, const std::optional<TraceWeights>& trace = {});

FusionRing ring_from_json(const Json& j, const std::string& path = "");
Json to_json(const FusionRing& ring);

FusionModule module_from_json(const Json& j, const std::string& path = "");
Json to_json(const FusionModule& module);

}  // namespace qindex
