#include <doctest.h>

#include <random>

#include "qindex/generators.hpp"
#include "qindex/serialize.hpp"
#include "support.hpp"

using namespace qindex;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("algebra and element round trip") {
  const MultiMatrixAlgebra alg({2, 1});
  CHECK(to_json(alg).dump() == R"({"blocks":[2,1]})");
  CHECK(algebra_from_json(to_json(alg)) == alg);
  std::mt19937_64 rng(1);
  const auto x = AlgebraElement::random(alg, rng);
  const auto y = element_from_json(alg, parse_json(to_json(x).dump()));
  CHECK((x - y).norm() == 0.0);
}

TEST_CASE("complex entries may be plain numbers") {
  const auto j = parse_json(R"({"blocks":[[1, [0, 2], 3, 4.5]]})");
  const auto x = element_from_json(MultiMatrixAlgebra({2}), j);
  CHECK(x.block(0)(0, 1) == Complex(0.0, 2.0));
  CHECK(x.block(0)(1, 1) == Complex(4.5, 0.0));
}

TEST_CASE("expectation round trip") {
  const auto e = testsupport::pinching_expectation(2);
  const auto text = to_json(e, TraceWeights({0.5})).dump();
  const auto spec = expectation_from_json(parse_json(text));
  CHECK((spec.expectation.matrix() - e.matrix()).norm() == 0.0);
  REQUIRE(spec.trace);
  CHECK(spec.trace->weights() == std::vector<double>{0.5});
  CHECK(to_json(spec.expectation, spec.trace).dump() == text);
}

TEST_CASE("schema errors carry a JSON pointer") {
  CHECK(kind_of([] { algebra_from_json(parse_json(R"({"blox":[1]})")); }) == ErrorKind::Parse);
  const auto msg = message_of([] { algebra_from_json(parse_json(R"({"blocks":[1, "x"]})")); });
  CHECK(msg.find("/blocks/1") != std::string::npos);
  const auto msg2 = message_of([] {
    expectation_from_json(parse_json(
        R"({"inclusion":{"source":{"blocks":[1]},"target":{"blocks":[2]},"matrix":[1,0,0]},"map":[]})"));
  });
  CHECK(msg2.find("/inclusion/matrix") != std::string::npos);
}

TEST_CASE("syntax errors report line and column") {
  const auto msg = message_of([] { parse_json("{\n  \"a\": [1,\n}"); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(kind_of([] { parse_json("{"); }) == ErrorKind::Parse);
}

TEST_CASE("non-homomorphisms fail validation, not parsing") {
  const auto j = parse_json(R"({"source":{"blocks":[1]},"target":{"blocks":[2]},"matrix":[1,0,0,0]})");
  CHECK(kind_of([&] { homomorphism_from_json(j); }) == ErrorKind::Validation);
}

TEST_CASE("fusion ring and module round trip") {
  for (const auto& ring : {gen_tlj(5).ring, gen_pointed(std::vector<int>{2, 2})}) {
    const auto back = ring_from_json(parse_json(to_json(ring).dump()));
    CHECK(back.labels() == ring.labels());
    CHECK(back.multiplicities() == ring.multiplicities());
    CHECK(back.unit() == ring.unit());
    const auto m = gen_regular_module(ring);
    const auto mb = module_from_json(parse_json(to_json(m).dump()));
    CHECK(mb.action() == m.action());
    CHECK(mb.labels() == m.labels());
  }
  const auto q = gen_quotient_module(std::vector<int>{4}, std::vector<int>{0, 2});
  CHECK(module_from_json(to_json(q)).action() == q.action());
}

TEST_CASE("fusion schema errors") {
  CHECK(kind_of([] { ring_from_json(parse_json(R"({"irr":["a,b"],"unit":"a,b","dual":{},"N":{}})")); }) ==
        ErrorKind::Parse);
  const auto msg = message_of([] {
    ring_from_json(parse_json(R"({"irr":["1","x"],"unit":"1","dual":{"1":"1","x":"x"},"N":{"1,y":{"x":1}}})"));
  });
  CHECK(msg.find("unknown label 'y'") != std::string::npos);
  CHECK(message_of([] {
          ring_from_json(parse_json(R"({"irr":["1","x"],"unit":"1","dual":{"1":"1"},"N":{}})"));
        }).find("missing dual") != std::string::npos);
  CHECK(kind_of([] {
          ring_from_json(parse_json(R"({"irr":["1"],"unit":"1","dual":{"1":"1"},"N":{"1,1":{"1":-1}}})"));
        }) == ErrorKind::Parse);
}
