#include "qindex/serialize.hpp"

#include <algorithm>
#include <set>

namespace qindex {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::Parse, what + " at " + (path.empty() ? std::string("/") : path));
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string child(const std::string& path, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return path + "/" + escaped;
}

std::string child(const std::string& path, size_t index) { return path + "/" + std::to_string(index); }

const Json& array_of(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long>();
}

double real(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

const std::string& text(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get_ref<const std::string&>();
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected [re, im]");
  return {real(j[0], child(path, 0)), real(j[1], child(path, 1))};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::vector<std::string> label_list(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  const auto& arr = array_of(j, path);
  std::set<std::string> seen;
  for (size_t k = 0; k < arr.size(); ++k) {
    const auto p = child(path, k);
    const auto& s = text(arr[k], p);
    if (s.empty()) schema_error(p, "empty label");
    if (s.find(',') != std::string::npos) schema_error(p, "labels may not contain ','");
    if (!seen.insert(s).second) schema_error(p, "duplicate label '" + s + "'");
    out.push_back(s);
  }
  if (out.empty()) schema_error(path, "expected at least one label");
  return out;
}

int label_index(const std::vector<std::string>& labels, const std::string& label, const std::string& path) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) schema_error(path, "unknown label '" + label + "'");
  return static_cast<int>(it - labels.begin());
}

std::pair<std::string, std::string> split_pair(const std::string& key, const std::string& path) {
  const auto comma = key.find(',');
  if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos)
    schema_error(path, "expected a key of the form \"X,Y\"");
  return {key.substr(0, comma), key.substr(comma + 1)};
}

}  // namespace

Json parse_json(std::string_view input) {
  try {
    return Json::parse(input.begin(), input.end());
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1, column = 1;
    const size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, input.size());
    for (size_t k = 0; k < stop; ++k) {
      if (input[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(ErrorKind::Parse, "malformed JSON at line " + std::to_string(line) + ", column " +
                               std::to_string(column) + ": " + e.what());
  }
}

MultiMatrixAlgebra algebra_from_json(const Json& j, const std::string& path) {
  const auto p = child(path, "blocks");
  const auto& arr = array_of(field(j, "blocks", path), p);
  if (arr.empty()) schema_error(p, "an algebra needs at least one block");
  std::vector<int> blocks;
  for (size_t k = 0; k < arr.size(); ++k) {
    const long m = integer(arr[k], child(p, k));
    if (m < 1 || m > 64) schema_error(child(p, k), "block sizes must lie in 1..64");
    blocks.push_back(static_cast<int>(m));
  }
  return MultiMatrixAlgebra(std::move(blocks));
}

Json to_json(const MultiMatrixAlgebra& alg) { return Json{{"blocks", alg.blocks()}}; }

AlgebraElement element_from_json(const MultiMatrixAlgebra& alg, const Json& j, const std::string& path) {
  const auto p = child(path, "blocks");
  const auto& arr = array_of(field(j, "blocks", path), p);
  if (static_cast<int>(arr.size()) != alg.num_blocks()) schema_error(p, "wrong number of blocks");
  std::vector<CMatrix> blocks;
  for (int t = 0; t < alg.num_blocks(); ++t) {
    const int m = alg.block_size(t);
    blocks.push_back(matrix_from_json(arr[static_cast<size_t>(t)], m, m, child(p, static_cast<size_t>(t))));
  }
  return AlgebraElement(alg, std::move(blocks));
}

Json to_json(const AlgebraElement& x) {
  Json blocks = Json::array();
  for (int t = 0; t < x.parent().num_blocks(); ++t) blocks.push_back(matrix_to_json(x.block(t)));
  return Json{{"blocks", blocks}};
}

CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& path) {
  const auto& arr = array_of(j, path);
  if (static_cast<Eigen::Index>(arr.size()) != rows * cols)
    schema_error(path, "expected " + std::to_string(rows * cols) + " entries (" + std::to_string(rows) +
                           " x " + std::to_string(cols) + " row-major), got " + std::to_string(arr.size()));
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = static_cast<size_t>(r * cols + c);
      m(r, c) = complex_from_json(arr[k], child(path, k));
    }
  return m;
}

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(r, c)));
  return out;
}

StarHomomorphism homomorphism_from_json(const Json& j, const std::string& path) {
  const auto source = algebra_from_json(field(j, "source", path), child(path, "source"));
  const auto target = algebra_from_json(field(j, "target", path), child(path, "target"));
  CMatrix m = matrix_from_json(field(j, "matrix", path), target.dim(), source.dim(), child(path, "matrix"));
  return StarHomomorphism(LinearMap(source, target, std::move(m)));
}

Json to_json(const StarHomomorphism& h) {
  return Json{{"source", to_json(h.source())}, {"target", to_json(h.target())}, {"matrix", matrix_to_json(h.map().matrix)}};
}

ExpectationSpec expectation_from_json(const Json& j) {
  auto inclusion = homomorphism_from_json(field(j, "inclusion", ""), "/inclusion");
  const MultiMatrixAlgebra b = inclusion.target();
  CMatrix map = matrix_from_json(field(j, "map", ""), b.dim(), b.dim(), "/map");
  ExpectationSpec spec{ConditionalExpectation(std::move(inclusion), std::move(map)), std::nullopt};
  if (j.contains("trace")) {
    const auto& arr = array_of(j["trace"], "/trace");
    if (static_cast<int>(arr.size()) != b.num_blocks()) schema_error("/trace", "expected one weight per block of B");
    std::vector<double> w;
    for (size_t k = 0; k < arr.size(); ++k) {
      const double x = real(arr[k], child("/trace", k));
      if (!(x > 0.0)) schema_error(child("/trace", k), "trace weights must be positive");
      w.push_back(x);
    }
    spec.trace = TraceWeights(std::move(w));
  }
  return spec;
}

Json to_json(const ConditionalExpectation& e, const std::optional<TraceWeights>& trace) {
  Json out{{"inclusion", to_json(e.inclusion())}, {"map", matrix_to_json(e.matrix())}};
  if (trace) out["trace"] = trace->weights();
  return out;
}

FusionRing ring_from_json(const Json& j, const std::string& path) {
  const auto labels = label_list(field(j, "irr", path), child(path, "irr"));
  const int r = static_cast<int>(labels.size());
  const int unit = label_index(labels, text(field(j, "unit", path), child(path, "unit")), child(path, "unit"));

  const auto dp = child(path, "dual");
  const auto& dual_json = field(j, "dual", path);
  if (!dual_json.is_object()) schema_error(dp, "expected an object");
  std::vector<int> dual(static_cast<size_t>(r), -1);
  for (const auto& [key, value] : dual_json.items()) {
    const int u = label_index(labels, key, dp);
    dual[static_cast<size_t>(u)] = label_index(labels, text(value, child(dp, key)), child(dp, key));
  }
  for (int u = 0; u < r; ++u)
    if (dual[static_cast<size_t>(u)] < 0) schema_error(dp, "missing dual of '" + labels[static_cast<size_t>(u)] + "'");

  const auto np = child(path, "N");
  const auto& n_json = field(j, "N", path);
  if (!n_json.is_object()) schema_error(np, "expected an object");
  std::vector<int> mult(static_cast<size_t>(r) * r * r, 0);
  for (const auto& [key, row] : n_json.items()) {
    const auto kp = child(np, key);
    const auto [us, vs] = split_pair(key, kp);
    const int u = label_index(labels, us, kp), v = label_index(labels, vs, kp);
    if (!row.is_object()) schema_error(kp, "expected an object");
    for (const auto& [wkey, value] : row.items()) {
      const auto wp = child(kp, wkey);
      const int w = label_index(labels, wkey, wp);
      const long x = integer(value, wp);
      if (x < 0) schema_error(wp, "multiplicities must be nonnegative");
      mult[(static_cast<size_t>(u) * r + v) * r + w] = static_cast<int>(x);
    }
  }
  return FusionRing(labels, unit, std::move(dual), std::move(mult));
}

Json to_json(const FusionRing& ring) {
  Json dual = Json::object();
  for (int u = 0; u < ring.rank(); ++u) dual[ring.label(u)] = ring.label(ring.dual(u));
  Json n = Json::object();
  for (int u = 0; u < ring.rank(); ++u)
    for (int v = 0; v < ring.rank(); ++v) {
      Json row = Json::object();
      for (int w = 0; w < ring.rank(); ++w)
        if (ring.N(u, v, w) != 0) row[ring.label(w)] = ring.N(u, v, w);
      if (!row.empty()) n[ring.label(u) + "," + ring.label(v)] = row;
    }
  return Json{{"irr", ring.labels()}, {"unit", ring.label(ring.unit())}, {"dual", dual}, {"N", n}};
}

FusionModule module_from_json(const Json& j, const std::string& path) {
  auto ring = ring_from_json(field(j, "ring", path), child(path, "ring"));
  const auto labels = label_list(field(j, "irrM", path), child(path, "irrM"));
  const int s = static_cast<int>(labels.size());
  const auto np = child(path, "n");
  const auto& n_json = field(j, "n", path);
  if (!n_json.is_object()) schema_error(np, "expected an object");
  std::vector<int> action(static_cast<size_t>(ring.rank()) * s * s, 0);
  for (const auto& [key, row] : n_json.items()) {
    const auto kp = child(np, key);
    const auto [us, is] = split_pair(key, kp);
    const int u = label_index(ring.labels(), us, kp), i = label_index(labels, is, kp);
    if (!row.is_object()) schema_error(kp, "expected an object");
    for (const auto& [jkey, value] : row.items()) {
      const auto jp = child(kp, jkey);
      const int t = label_index(labels, jkey, jp);
      const long x = integer(value, jp);
      if (x < 0) schema_error(jp, "multiplicities must be nonnegative");
      action[(static_cast<size_t>(u) * s + i) * s + t] = static_cast<int>(x);
    }
  }
  return FusionModule(std::move(ring), labels, std::move(action));
}

Json to_json(const FusionModule& module) {
  const auto& ring = module.ring();
  Json n = Json::object();
  for (int u = 0; u < ring.rank(); ++u)
    for (int i = 0; i < module.size(); ++i) {
      Json row = Json::object();
      for (int j = 0; j < module.size(); ++j)
        if (module.n(u, i, j) != 0) row[module.label(j)] = module.n(u, i, j);
      if (!row.empty()) n[ring.label(u) + "," + module.label(i)] = row;
    }
  return Json{{"ring", to_json(ring)}, {"irrM", module.labels()}, {"n", n}};
}

}  // namespace qindex
