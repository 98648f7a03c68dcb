#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "qindex/qindex.h"

namespace {

nlohmann::json take(char* s) {
  REQUIRE(s != nullptr);
  auto j = nlohmann::json::parse(s);
  qindex_string_free(s);
  return j;
}

const char* kPinching =
    R"({"inclusion":{"source":{"blocks":[1,1]},"target":{"blocks":[2]},
        "matrix":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]},
        "map":[1,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,1]})";

const char* kVectorState =
    R"({"inclusion":{"source":{"blocks":[1]},"target":{"blocks":[2]},"matrix":[1,0,0,1]},
        "map":[1,0,0,0, 0,0,0,0, 0,0,0,0, 1,0,0,0]})";

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::strlen(qindex_version()) > 0);
  qindex_expectation* e = nullptr;
  CHECK(qindex_expectation_from_json("{", &e) == QINDEX_ERR_PARSE);
  CHECK(e == nullptr);
  CHECK(std::string(qindex_last_error()).find("line 1") != std::string::npos);
  CHECK(qindex_expectation_from_json(nullptr, &e) == QINDEX_ERR_INVALID_ARGUMENT);
}

TEST_CASE("index compute") {
  qindex_expectation* e = nullptr;
  REQUIRE(qindex_expectation_from_json(kPinching, &e) == QINDEX_OK);
  char* out = nullptr;
  REQUIRE(qindex_index_compute(e, 1e-9, 500, 0, &out) == QINDEX_OK);
  const auto j = take(out);
  CHECK(j["index_norm"].get<double>() == doctest::Approx(2.0));
  CHECK(j["scalar_index"].get<double>() == doctest::Approx(2.0));
  CHECK(j["seed"] == 0);
  qindex_expectation_free(e);

  REQUIRE(qindex_expectation_from_json(kVectorState, &e) == QINDEX_OK);
  CHECK(qindex_index_compute(e, 1e-9, 500, 0, &out) == QINDEX_ERR_INFINITE);
  CHECK(take(out)["scalar_index"].is_null());
  CHECK(std::string(qindex_last_error()) == "infinite scalar index");
  qindex_expectation_free(e);
}

TEST_CASE("invalid expectations are reported as validation errors") {
  std::string text = kPinching;
  text.replace(text.find("0,0,0,1]}"), 9, "0,0,0,0]}");
  qindex_expectation* e = nullptr;
  REQUIRE(qindex_expectation_from_json(text.c_str(), &e) == QINDEX_OK);
  char* out = nullptr;
  CHECK(qindex_index_compute(e, 1e-9, 100, 0, &out) == QINDEX_ERR_VALIDATION);
  CHECK(out == nullptr);
  CHECK(std::string(qindex_last_error()).find("unitality") != std::string::npos);
  qindex_expectation_free(e);
}

TEST_CASE("fusion round trip through handles") {
  qindex_ring* ring = nullptr;
  REQUIRE(qindex_generate_tlj(4, &ring) == QINDEX_OK);
  CHECK(qindex_ring_validate(ring) == QINDEX_OK);
  char* text = nullptr;
  REQUIRE(qindex_ring_to_json(ring, &text) == QINDEX_OK);
  qindex_ring* again = nullptr;
  REQUIRE(qindex_ring_from_json(text, &again) == QINDEX_OK);
  qindex_string_free(text);

  qindex_module* module = nullptr;
  REQUIRE(qindex_generate_regular(again, &module) == QINDEX_OK);
  char* out = nullptr;
  REQUIRE(qindex_fusion_trace(module, &out) == QINDEX_OK);
  const auto j = take(out);
  CHECK(j["m"][1].get<double>() == doctest::Approx(std::sqrt(2.0)));

  const char* sub[] = {"0", "2"};
  REQUIRE(qindex_fusion_descent(module, "1", sub, 2, 1e-9, &out) == QINDEX_OK);
  const auto d = take(out);
  CHECK(d["locally_constant"] == true);
  CHECK(d["classes"].size() == 2);
  CHECK(qindex_fusion_descent(module, "7", sub, 2, 1e-9, &out) == QINDEX_ERR_INVALID_ARGUMENT);

  qindex_module_free(module);
  qindex_ring_free(again);
  qindex_ring_free(ring);
  CHECK(qindex_generate_tlj(2, &ring) == QINDEX_ERR_INVALID_ARGUMENT);
}

TEST_CASE("quotient and pointed generators") {
  const int factors[] = {4};
  const int subgroup[] = {0, 2};
  qindex_module* m = nullptr;
  REQUIRE(qindex_generate_quotient(factors, 1, subgroup, 2, &m) == QINDEX_OK);
  CHECK(qindex_module_validate(m) == QINDEX_OK);
  qindex_module_free(m);
  const int bad[] = {0, 1};
  CHECK(qindex_generate_quotient(factors, 1, bad, 2, &m) == QINDEX_ERR_INVALID_ARGUMENT);
}

TEST_CASE("jones, classify and crosscheck") {
  char* out = nullptr;
  REQUIRE(qindex_jones(2.618033988, 1e-9, &out) == QINDEX_OK);
  auto j = take(out);
  CHECK(j["member"] == true);
  CHECK(j["witness"] == 5);
  REQUIRE(qindex_jones(3.5, 1e-9, &out) == QINDEX_OK);
  CHECK(take(out)["member"] == false);

  REQUIRE(qindex_classify("D4", &out) == QINDEX_OK);
  CHECK(take(out).size() == 5);
  CHECK(qindex_classify("Z9", &out) == QINDEX_ERR_INVALID_ARGUMENT);

  const int64_t w[] = {1};
  REQUIRE(qindex_classify_irrep("A1", w, 1, "Q", &out) == QINDEX_OK);
  CHECK(take(out)["member"] == false);
  REQUIRE(qindex_classify_irrep("A1", w, 1, "P", &out) == QINDEX_OK);
  CHECK(take(out)["member"] == true);
  CHECK(qindex_classify_irrep("A1", w, 1, "9", &out) == QINDEX_ERR_INVALID_ARGUMENT);

  REQUIRE(qindex_crosscheck_torus(12, 4, &out) == QINDEX_OK);
  j = take(out);
  CHECK(j["lattice_index"] == 3);
  CHECK(j["ok"] == true);
}
