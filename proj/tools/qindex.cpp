// qindex command-line front end. Talks to the engines only through the C API.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qindex/qindex.h"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kParse = 1, kValidation = 2, kInfinite = 3, kInternal = 4 };

int log_level() {
  const char* env = std::getenv("QINDEX_LOG");
  if (!env) return 0;
  const std::string v = env;
  if (v == "debug" || v == "2") return 2;
  if (v == "info" || v == "1") return 1;
  return 0;
}

void log(int level, const std::string& message) {
  if (log_level() >= level) std::cerr << "qindex: " << message << "\n";
}

int exit_code(qindex_status s) {
  switch (s) {
    case QINDEX_OK: return kOk;
    case QINDEX_ERR_PARSE: return kParse;
    case QINDEX_ERR_VALIDATION:
    case QINDEX_ERR_INVALID_ARGUMENT: return kValidation;
    case QINDEX_ERR_INFINITE: return kInfinite;
    case QINDEX_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Run {
  std::vector<std::string> argv;
  std::string inputs;  // concatenated input documents, for the digest
  Json tolerances = Json::object();
  Json seed = nullptr;
  std::string report_path;
  std::string output_path;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

struct Failure {
  int code;
};

std::string read_file(Run& run, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw Failure{kParse};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  run.inputs += ss.str();
  log(2, "read " + path + " (" + std::to_string(ss.str().size()) + " bytes)");
  return ss.str();
}

void check(qindex_status s, const char* context) {
  if (s == QINDEX_OK) return;
  std::cerr << "error: " << context << ": " << qindex_last_error() << "\n";
  throw Failure{exit_code(s)};
}

// Takes ownership of a C string from the library.
std::string take(char* s) {
  if (!s) return {};
  std::string out = s;
  qindex_string_free(s);
  return out;
}

int finish(Run& run, const std::string& payload, int code) {
  log(1, "exit " + std::to_string(code) + " after " +
             std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count()) +
             " s");
  if (!payload.empty()) {
    if (run.output_path.empty()) {
      std::cout << payload << "\n";
    } else {
      std::ofstream out(run.output_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << run.output_path << "\n";
        return kParse;
      }
      out << payload << "\n";
      log(1, "wrote " + run.output_path);
    }
  }
  if (!run.report_path.empty()) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count();
    char digest[32];
    std::snprintf(digest, sizeof digest, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a(run.inputs)));
    Json report;
    report["schema"] = "qindex.run_report/1";
    report["version"] = qindex_version();
    report["command"] = run.argv;
    report["input_digest"] = digest;
    report["results"] = payload.empty() ? Json(nullptr) : Json::parse(payload);
    report["exit_code"] = code;
    report["tolerances"] = run.tolerances;
    report["seed"] = run.seed;
    report["wall_time_s"] = wall;
    std::ofstream out(run.report_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << run.report_path << "\n";
      return code == kOk ? kParse : code;
    }
    out << report.dump(2) << "\n";
  }
  return code;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

qindex_ring* load_ring(Run& run, const std::string& path) {
  qindex_ring* ring = nullptr;
  check(qindex_ring_from_json(read_file(run, path).c_str(), &ring), path.c_str());
  const qindex_status s = qindex_ring_validate(ring);
  if (s != QINDEX_OK) {
    qindex_ring_free(ring);
    check(s, path.c_str());
  }
  return ring;
}

// A module file, or the regular module of --ring when path is "regular".
qindex_module* load_module(Run& run, const std::string& ring_path, const std::string& path) {
  qindex_module* module = nullptr;
  if (path == "regular") {
    if (ring_path.empty()) {
      std::cerr << "error: --module regular needs --ring\n";
      throw Failure{kParse};
    }
    qindex_ring* ring = load_ring(run, ring_path);
    const qindex_status s = qindex_generate_regular(ring, &module);
    qindex_ring_free(ring);
    check(s, "regular module");
    return module;
  }
  check(qindex_module_from_json(read_file(run, path).c_str(), &module), path.c_str());
  if (!ring_path.empty()) {
    // The module document embeds its ring; an explicit --ring must agree.
    qindex_ring* ring = load_ring(run, ring_path);
    char* ring_text = nullptr;
    char* module_text = nullptr;
    qindex_ring_to_json(ring, &ring_text);
    qindex_module_to_json(module, &module_text);
    qindex_ring_free(ring);
    const Json given = Json::parse(take(ring_text));
    const Json embedded = Json::parse(take(module_text))["ring"];
    if (given != embedded) {
      qindex_module_free(module);
      std::cerr << "error: --ring differs from the ring embedded in " << path << "\n";
      throw Failure{kValidation};
    }
  }
  return module;
}

}  // namespace

int main(int argc, char** argv) {
  Run run;
  for (int k = 0; k < argc; ++k) run.argv.emplace_back(k == 0 ? "qindex" : argv[k]);

  CLI::App app{"Index computations for finite inclusions, fusion modules and weight lattices"};
  app.set_version_flag("--version", std::string(qindex_version()));
  app.require_subcommand(1);
  app.add_option("--report", run.report_path, "Write a full run report (with timing) to this path");

  // index
  auto* index = app.add_subcommand("index", "Conditional expectations and their index");
  index->require_subcommand(1);
  auto* compute = index->add_subcommand("compute", "Watatani, scalar and probabilistic index of an expectation");
  std::string spec_path;
  double tol = 1e-9;
  int budget = 2000;
  std::uint64_t seed = 0;
  compute->add_option("--spec", spec_path, "Expectation JSON document")->required();
  compute->add_option("--tol", tol, "Validation tolerance")->capture_default_str();
  compute->add_option("--budget", budget, "Probabilistic index search budget")->capture_default_str();
  compute->add_option("--seed", seed, "Random seed")->capture_default_str();
  compute->add_option("-o,--output", run.output_path, "Write the result here instead of stdout");

  auto* cross = index->add_subcommand("crosscheck", "Lattice index vs Watatani index on Z/n");
  long cross_n = 1, cross_d = 1;
  cross->add_option("--n", cross_n, "Order of the cyclic group")->required();
  cross->add_option("--d", cross_d, "Order of the subgroup (divides n)")->required();

  // fusion
  auto* fusion = app.add_subcommand("fusion", "Fusion rings and module categories");
  fusion->require_subcommand(1);
  auto* generate = fusion->add_subcommand("generate", "Write fixture fusion data");
  generate->require_subcommand(1);
  generate->add_option("-o,--output", run.output_path, "Output path");
  auto* gen_tlj = generate->add_subcommand("tlj", "Temperley-Lieb-Jones fusion ring TLJ(n)");
  int tlj_n = 3;
  gen_tlj->add_option("--n", tlj_n, "n >= 3")->required();
  gen_tlj->add_option("-o,--output", run.output_path, "Output path");
  auto* gen_pointed = generate->add_subcommand("pointed", "Group ring of a finite abelian group");
  std::string factors;
  gen_pointed->add_option("--factors", factors, "Invariant factors, e.g. 2,2")->required();
  gen_pointed->add_option("-o,--output", run.output_path, "Output path");
  auto* gen_regular = generate->add_subcommand("regular", "Regular module of a ring");
  std::string ring_path;
  gen_regular->add_option("--ring", ring_path, "Fusion ring JSON")->required();
  gen_regular->add_option("-o,--output", run.output_path, "Output path");
  auto* gen_quotient = generate->add_subcommand("quotient", "Coset module of a pointed ring");
  std::string subgroup_list;
  gen_quotient->add_option("--factors", factors, "Invariant factors")->required();
  gen_quotient->add_option("--subgroup", subgroup_list, "Subgroup elements as label indices, e.g. 0,2")->required();
  gen_quotient->add_option("-o,--output", run.output_path, "Output path");

  auto* trace = fusion->add_subcommand("trace", "Module trace and Perron-Frobenius dimensions");
  std::string module_path;
  trace->add_option("--ring", ring_path, "Fusion ring JSON");
  trace->add_option("--module", module_path, "Module JSON, or 'regular'")->required();
  trace->add_option("-o,--output", run.output_path, "Output path");

  auto* jones = fusion->add_subcommand("jones", "Membership in the Jones index set");
  double jones_value = 0.0;
  double jones_tol = 1e-9;
  jones->add_option("--value", jones_value, "Candidate index value")->required();
  jones->add_option("--tol", jones_tol, "Tolerance")->capture_default_str();

  auto* descent = fusion->add_subcommand("descent", "Local constancy of d_F on subring classes");
  std::string object;
  std::string subring;
  double descent_tol = 1e-9;
  descent->add_option("--ring", ring_path, "Fusion ring JSON");
  descent->add_option("--module", module_path, "Module JSON, or 'regular'")->required();
  descent->add_option("--object", object, "Ring label U of the functor U (x) -")->required();
  descent->add_option("--subring", subring, "Subring labels, e.g. 0,2")->required();
  descent->add_option("--tol", descent_tol, "Tolerance")->capture_default_str();

  // classify
  auto* classify = app.add_subcommand("classify", "Intermediate lattices Q <= Lambda <= P");
  classify->require_subcommand(0, 1);
  std::string lie_type;
  classify->add_option("--lie-type", lie_type, "Lie type, e.g. A3, D4, E6");
  auto* irrep = classify->add_subcommand("irrep", "Whether an irrep's weights lie in Lambda");
  std::string weight;
  std::string which = "P";
  irrep->add_option("--lie-type", lie_type, "Lie type")->required();
  irrep->add_option("--weight", weight, "Highest weight in fundamental-weight coordinates, e.g. 1,0,2")->required();
  irrep->add_option("--subgroup", which, "P, Q or a row number of the classification")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    std::string payload;
    int code = kOk;
    if (compute->parsed()) {
      run.tolerances["tol"] = tol;
      run.tolerances["budget"] = budget;
      run.seed = seed;
      log(1, "index compute: spec=" + spec_path + " seed=" + std::to_string(seed));
      qindex_expectation* e = nullptr;
      check(qindex_expectation_from_json(read_file(run, spec_path).c_str(), &e), spec_path.c_str());
      char* out = nullptr;
      const qindex_status s = qindex_index_compute(e, tol, budget, seed, &out);
      qindex_expectation_free(e);
      payload = take(out);
      if (s == QINDEX_ERR_INFINITE) {
        std::cerr << "error: " << qindex_last_error() << "\n";
        code = kInfinite;
      } else {
        check(s, spec_path.c_str());
      }
    } else if (cross->parsed()) {
      run.tolerances["index"] = 1e-9;
      char* out = nullptr;
      const qindex_status s = qindex_crosscheck_torus(cross_n, cross_d, &out);
      payload = take(out);
      if (s != QINDEX_OK) {
        std::cerr << "error: " << qindex_last_error() << "\n";
        code = exit_code(s);
      }
    } else if (gen_tlj->parsed() || gen_pointed->parsed() || gen_regular->parsed() || gen_quotient->parsed()) {
      char* out = nullptr;
      if (gen_tlj->parsed()) {
        qindex_ring* ring = nullptr;
        check(qindex_generate_tlj(tlj_n, &ring), "tlj");
        check(qindex_ring_to_json(ring, &out), "tlj");
        qindex_ring_free(ring);
      } else if (gen_pointed->parsed()) {
        std::vector<int> f;
        for (const auto& x : split(factors)) f.push_back(std::stoi(x));
        qindex_ring* ring = nullptr;
        check(qindex_generate_pointed(f.data(), f.size(), &ring), "pointed");
        check(qindex_ring_to_json(ring, &out), "pointed");
        qindex_ring_free(ring);
      } else if (gen_regular->parsed()) {
        qindex_module* module = load_module(run, ring_path, "regular");
        check(qindex_module_to_json(module, &out), "regular");
        qindex_module_free(module);
      } else {
        std::vector<int> f, h;
        for (const auto& x : split(factors)) f.push_back(std::stoi(x));
        for (const auto& x : split(subgroup_list)) h.push_back(std::stoi(x));
        qindex_module* module = nullptr;
        check(qindex_generate_quotient(f.data(), f.size(), h.data(), h.size(), &module), "quotient");
        check(qindex_module_to_json(module, &out), "quotient");
        qindex_module_free(module);
      }
      payload = take(out);
    } else if (trace->parsed()) {
      qindex_module* module = load_module(run, ring_path, module_path);
      char* out = nullptr;
      const qindex_status s = qindex_fusion_trace(module, &out);
      qindex_module_free(module);
      payload = take(out);
      if (s == QINDEX_ERR_INFINITE) {
        std::cerr << "error: " << qindex_last_error() << "\n";
        code = kInfinite;
      } else {
        check(s, "trace");
      }
    } else if (jones->parsed()) {
      run.tolerances["tol"] = jones_tol;
      char* out = nullptr;
      check(qindex_jones(jones_value, jones_tol, &out), "jones");
      payload = take(out);
    } else if (descent->parsed()) {
      run.tolerances["tol"] = descent_tol;
      qindex_module* module = load_module(run, ring_path, module_path);
      const auto labels = split(subring);
      std::vector<const char*> ptrs;
      for (const auto& l : labels) ptrs.push_back(l.c_str());
      char* out = nullptr;
      const qindex_status s =
          qindex_fusion_descent(module, object.c_str(), ptrs.data(), ptrs.size(), descent_tol, &out);
      qindex_module_free(module);
      check(s, "descent");
      payload = take(out);
    } else if (irrep->parsed()) {
      std::vector<int64_t> w;
      for (const auto& x : split(weight)) w.push_back(std::stoll(x));
      char* out = nullptr;
      check(qindex_classify_irrep(lie_type.c_str(), w.data(), w.size(), which.c_str(), &out), "irrep");
      payload = take(out);
    } else if (classify->parsed()) {
      if (lie_type.empty()) {
        std::cerr << "error: classify needs --lie-type\n";
        return finish(run, "", kParse);
      }
      char* out = nullptr;
      check(qindex_classify(lie_type.c_str(), &out), "classify");
      payload = take(out);
    }
    return finish(run, payload, code);
  } catch (const Failure& f) {
    return finish(run, "", f.code);
  } catch (const std::invalid_argument&) {
    std::cerr << "error: expected a comma-separated list of integers\n";
    return finish(run, "", kParse);
  } catch (const std::out_of_range&) {
    std::cerr << "error: integer out of range\n";
    return finish(run, "", kParse);
  }
}
