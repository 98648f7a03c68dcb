#include "qindex/qindex.h"

#include <cmath>
#include <cstring>
#include <string>

#include "qindex/expectation.hpp"
#include "qindex/fusion.hpp"
#include "qindex/generators.hpp"
#include "qindex/lattice.hpp"
#include "qindex/serialize.hpp"

struct qindex_expectation {
  qindex::ExpectationSpec spec;
};

struct qindex_ring {
  qindex::FusionRing ring;
};

struct qindex_module {
  qindex::FusionModule module;
};

namespace {

using qindex::Json;

thread_local std::string last_error;

qindex_status status_of(qindex::ErrorKind kind) {
  switch (kind) {
    case qindex::ErrorKind::Parse: return QINDEX_ERR_PARSE;
    case qindex::ErrorKind::Validation: return QINDEX_ERR_VALIDATION;
    case qindex::ErrorKind::Infinite: return QINDEX_ERR_INFINITE;
    case qindex::ErrorKind::InvalidArgument: return QINDEX_ERR_INVALID_ARGUMENT;
  }
  return QINDEX_ERR_INTERNAL;
}

template <class F>
qindex_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const qindex::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return QINDEX_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return QINDEX_ERR_INTERNAL;
  }
}

qindex_status argument_error(const char* what) {
  last_error = what;
  return QINDEX_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const Json& j, char** out) { *out = copy_string(j.dump()); }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

const qindex::SublatticeSpec& pick_lattice(const std::vector<qindex::SublatticeSpec>& rows,
                                           const std::string& which) {
  if (which == "P") return rows.front();
  if (which == "Q") return rows.back();
  size_t pos = 0;
  long k = -1;
  try {
    k = std::stol(which, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != which.size() || k < 0 || static_cast<size_t>(k) >= rows.size())
    qindex::fail(qindex::ErrorKind::InvalidArgument,
                 "subgroup must be P, Q or a row number below " + std::to_string(rows.size()));
  return rows[static_cast<size_t>(k)];
}

Json lattice_row(const qindex::SublatticeSpec& spec) {
  Json gens = Json::array();
  for (const auto& g : spec.subgroup.generators) gens.push_back(g);
  Json lattice = Json::array();
  for (Eigen::Index r = 0; r < spec.generators.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < spec.generators.cols(); ++c) row.push_back(spec.generators(r, c));
    lattice.push_back(row);
  }
  return Json{{"subgroup", gens}, {"lattice_generators", lattice}, {"index", spec.index_in_P}};
}

const char* status_token(qindex::TraceStatus s) {
  switch (s) {
    case qindex::TraceStatus::Ok: return "ok";
    case qindex::TraceStatus::NoSolution: return "no_solution";
    case qindex::TraceStatus::NoPositiveSolution: return "no_positive_solution";
    case qindex::TraceStatus::Decomposable: return "decomposable";
  }
  return "unknown";
}

}  // namespace

extern "C" {

const char* qindex_version(void) { return "0.1.0"; }

const char* qindex_last_error(void) { return last_error.c_str(); }

void qindex_string_free(char* s) { delete[] s; }

qindex_status qindex_expectation_from_json(const char* json, qindex_expectation** out) {
  if (!json || !out) return argument_error("null argument");
  return guarded([&] {
    auto spec = qindex::expectation_from_json(qindex::parse_json(json));
    *out = new qindex_expectation{std::move(spec)};
    return QINDEX_OK;
  });
}

void qindex_expectation_free(qindex_expectation* e) { delete e; }

qindex_status qindex_expectation_validate(const qindex_expectation* e, double tol) {
  if (!e) return argument_error("null argument");
  return guarded([&] {
    const auto check = qindex::validate_expectation(e->spec.expectation, tol);
    if (!check.ok) {
      last_error = "not a conditional expectation: " + check.reason + " fails (defect " +
                   std::to_string(check.defect) + ")";
      return QINDEX_ERR_VALIDATION;
    }
    return QINDEX_OK;
  });
}

qindex_status qindex_index_compute(const qindex_expectation* e, double tol, int budget, uint64_t seed,
                                   char** out_json) {
  if (!e || !out_json) return argument_error("null argument");
  if (!(tol > 0.0) || budget < 1) return argument_error("tol must be positive and budget at least 1");
  *out_json = nullptr;
  const qindex_status valid = qindex_expectation_validate(e, tol);
  if (valid != QINDEX_OK) return valid;
  return guarded([&] {
    const auto& ex = e->spec.expectation;
    const auto tau = e->spec.trace ? *e->spec.trace : qindex::TraceWeights::matrix_trace(ex.algebra());
    const auto report = qindex::compute_index_report(ex, tau, budget, seed);
    Json j;
    j["index_norm"] = finite_or_null(report.index_norm);
    j["scalar_index"] = finite_or_null(report.scalar.value);
    j["prob_lower"] = finite_or_null(report.probabilistic.lower);
    j["prob_upper"] = finite_or_null(report.probabilistic.upper);
    j["quasi_basis_size"] = report.quasi_basis_size;
    j["seed"] = seed;
    emit(j, out_json);
    if (!report.scalar.finite) {
      last_error = "infinite scalar index";
      return QINDEX_ERR_INFINITE;
    }
    if (!report.index) {
      last_error = "no quasi-basis exists (infinite Watatani index)";
      return QINDEX_ERR_INFINITE;
    }
    return QINDEX_OK;
  });
}

qindex_status qindex_crosscheck_torus(long n, long d, char** out_json) {
  if (!out_json) return argument_error("null argument");
  return guarded([&] {
    const auto c = qindex::crosscheck_torus_index(n, d);
    emit(Json{{"n", c.n},
              {"d", c.d},
              {"lattice_index", c.lattice_index},
              {"watatani_index", c.watatani_index},
              {"defect", c.defect},
              {"quasi_basis_size", c.quasi_basis_size},
              {"ok", c.ok}},
         out_json);
    if (!c.ok) {
      last_error = "lattice and Watatani indices disagree";
      return QINDEX_ERR_VALIDATION;
    }
    return QINDEX_OK;
  });
}

qindex_status qindex_ring_from_json(const char* json, qindex_ring** out) {
  if (!json || !out) return argument_error("null argument");
  return guarded([&] {
    *out = new qindex_ring{qindex::ring_from_json(qindex::parse_json(json))};
    return QINDEX_OK;
  });
}

qindex_status qindex_ring_to_json(const qindex_ring* ring, char** out_json) {
  if (!ring || !out_json) return argument_error("null argument");
  return guarded([&] {
    emit(qindex::to_json(ring->ring), out_json);
    return QINDEX_OK;
  });
}

qindex_status qindex_ring_validate(const qindex_ring* ring) {
  if (!ring) return argument_error("null argument");
  return guarded([&] {
    const auto check = qindex::validate_fusion(ring->ring);
    if (!check.ok) {
      last_error = "invalid fusion ring: " + check.violation;
      return QINDEX_ERR_VALIDATION;
    }
    return QINDEX_OK;
  });
}

void qindex_ring_free(qindex_ring* ring) { delete ring; }

qindex_status qindex_module_from_json(const char* json, qindex_module** out) {
  if (!json || !out) return argument_error("null argument");
  return guarded([&] {
    *out = new qindex_module{qindex::module_from_json(qindex::parse_json(json))};
    return QINDEX_OK;
  });
}

qindex_status qindex_module_to_json(const qindex_module* module, char** out_json) {
  if (!module || !out_json) return argument_error("null argument");
  return guarded([&] {
    emit(qindex::to_json(module->module), out_json);
    return QINDEX_OK;
  });
}

qindex_status qindex_module_validate(const qindex_module* module) {
  if (!module) return argument_error("null argument");
  return guarded([&] {
    const auto check = qindex::validate_module(module->module);
    if (!check.ok) {
      last_error = "invalid fusion module: " + check.violation;
      return QINDEX_ERR_VALIDATION;
    }
    return QINDEX_OK;
  });
}

void qindex_module_free(qindex_module* module) { delete module; }

qindex_status qindex_generate_tlj(int n, qindex_ring** out) {
  if (!out) return argument_error("null argument");
  return guarded([&] {
    *out = new qindex_ring{qindex::gen_tlj(n).ring};
    return QINDEX_OK;
  });
}

qindex_status qindex_generate_pointed(const int* factors, size_t count, qindex_ring** out) {
  if (!out || (!factors && count)) return argument_error("null argument");
  return guarded([&] {
    *out = new qindex_ring{qindex::gen_pointed(std::span<const int>(factors, count))};
    return QINDEX_OK;
  });
}

qindex_status qindex_generate_regular(const qindex_ring* ring, qindex_module** out) {
  if (!ring || !out) return argument_error("null argument");
  return guarded([&] {
    *out = new qindex_module{qindex::gen_regular_module(ring->ring)};
    return QINDEX_OK;
  });
}

qindex_status qindex_generate_quotient(const int* factors, size_t count, const int* subgroup,
                                       size_t subgroup_size, qindex_module** out) {
  if (!out || (!factors && count) || (!subgroup && subgroup_size)) return argument_error("null argument");
  return guarded([&] {
    *out = new qindex_module{qindex::gen_quotient_module(std::span<const int>(factors, count),
                                                         std::span<const int>(subgroup, subgroup_size))};
    return QINDEX_OK;
  });
}

qindex_status qindex_fusion_trace(const qindex_module* module, char** out_json) {
  if (!module || !out_json) return argument_error("null argument");
  *out_json = nullptr;
  const qindex_status valid = qindex_module_validate(module);
  if (valid != QINDEX_OK) return valid;
  return guarded([&] {
    const auto& m = module->module;
    const auto dims = qindex::pf_dimensions(m.ring());
    const auto result = qindex::module_trace_solve(m, dims);
    Json j;
    j["status"] = status_token(result.status);
    j["nullity"] = result.nullity;
    j["irrM"] = m.labels();
    j["m"] = result.trace ? Json(result.trace->values) : Json(nullptr);
    j["ring_dims"] = dims;
    emit(j, out_json);
    if (result.status != qindex::TraceStatus::Ok) {
      last_error = std::string("no module trace: ") + qindex::to_string(result.status);
      return QINDEX_ERR_INFINITE;
    }
    return QINDEX_OK;
  });
}

qindex_status qindex_fusion_descent(const qindex_module* module, const char* object,
                                    const char* const* subring, size_t subring_size, double tol,
                                    char** out_json) {
  if (!module || !object || !out_json || (!subring && subring_size)) return argument_error("null argument");
  *out_json = nullptr;
  const qindex_status valid = qindex_module_validate(module);
  if (valid != QINDEX_OK) return valid;
  return guarded([&] {
    const auto& m = module->module;
    const auto& ring = m.ring();
    const int u = ring.index_of(object);
    std::vector<int> sub;
    for (size_t k = 0; k < subring_size; ++k) sub.push_back(ring.index_of(subring[k]));

    const auto dims = qindex::pf_dimensions(ring);
    const auto solved = qindex::module_trace_solve(m, dims);
    if (!solved.trace) {
      last_error = std::string("no module trace: ") + qindex::to_string(solved.status);
      return QINDEX_ERR_INFINITE;
    }
    const auto classes = qindex::equivalence_classes(m, sub);
    const auto d_f = qindex::functor_dimension(qindex::MultiplicityFunctor::action(m, u), *solved.trace);
    const auto check = qindex::check_locally_constant(d_f, classes, tol);

    Json class_json = Json::array();
    for (const auto& c : classes) {
      Json names = Json::array();
      for (int i : c) names.push_back(m.label(i));
      class_json.push_back(names);
    }
    Json sub_json = Json::array();
    for (int s : sub) sub_json.push_back(ring.label(s));
    Json j;
    j["object"] = ring.label(u);
    j["subring"] = sub_json;
    j["classes"] = class_json;
    j["m"] = solved.trace->values;
    j["d_F"] = d_f;
    j["locally_constant"] = check.ok;
    j["violating_class"] = check.ok ? Json(nullptr) : Json(check.violating_class);
    j["spread"] = check.spread;
    emit(j, out_json);
    return QINDEX_OK;
  });
}

qindex_status qindex_jones(double value, double tol, char** out_json) {
  if (!out_json) return argument_error("null argument");
  return guarded([&] {
    const auto r = qindex::jones_membership(value, tol);
    emit(Json{{"member", r.member},
              {"witness", r.witness > 0 ? Json(r.witness) : Json(nullptr)},
              {"continuum", r.continuum}},
         out_json);
    return QINDEX_OK;
  });
}

qindex_status qindex_classify(const char* lie_type, char** out_json) {
  if (!lie_type || !out_json) return argument_error("null argument");
  return guarded([&] {
    const auto data = qindex::make_cartan(qindex::parse_lie_type(lie_type));
    Json rows = Json::array();
    for (const auto& spec : qindex::classify_subgroups(data)) rows.push_back(lattice_row(spec));
    emit(rows, out_json);
    return QINDEX_OK;
  });
}

qindex_status qindex_classify_irrep(const char* lie_type, const int64_t* weight, size_t rank,
                                    const char* subgroup, char** out_json) {
  if (!lie_type || !subgroup || !out_json || (!weight && rank)) return argument_error("null argument");
  return guarded([&] {
    const auto data = qindex::make_cartan(qindex::parse_lie_type(lie_type));
    const auto center = qindex::center_group(data);
    const auto rows = qindex::classify_lattices(center);
    const auto& spec = pick_lattice(rows, subgroup);
    std::vector<std::int64_t> w(weight, weight + rank);
    const bool member = qindex::irrep_membership(center, w, spec);
    emit(Json{{"lie_type", data.type.name()},
              {"weight", w},
              {"subgroup", subgroup},
              {"index", spec.index_in_P},
              {"member", member}},
         out_json);
    return QINDEX_OK;
  });
}

}  // extern "C"
