#pragma once

// Theorem-verification suites over generated instances. Each suite turns one
// instance into a list of check records; a batch run merges the records in
// instance-digest order so that reports do not depend on thread scheduling.

#include "centrelat/json_io.hpp"

#include <string>
#include <vector>

namespace centrelat::suites {

using io::json;

struct SuiteConfig {
  Tolerances tol;
  double eps = 0.1;  // step-approximation accuracy
  /// Phase grid used by the modulus oracle in the norms suite.
  int phase_grid_bits = 16;
};

struct Record {
  std::string suite;
  std::string tag;       // the property verified
  std::string instance;  // digest of the instance
  std::string check;
  bool pass = false;
  double max_deviation = 0.0;
  json witness;
};

struct SuiteReport {
  std::vector<std::string> suites;
  std::vector<Record> records;
  bool pass = true;
  double elapsed_ms = 0.0;
};

/// cstar, norms, fpr, polar, localize, integral, riesz, spectral, calculus,
/// eigen, commutant, compactness.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// FNV-1a 64 of the canonical (sorted-key) serialization, as 16 hex digits.
std::string digest(const json& instance);

/// Records of one suite on one instance. Suites that do not apply to the
/// instance kind return no records; malformed instances give one failing
/// "load" record.
std::vector<Record> run_suite(const std::string& suite, const json& instance, const SuiteConfig& config);

/// Thread count from CENTRELAT_THREADS (capped by the hardware), at least 1.
unsigned thread_cap();

SuiteReport run_suites(const std::vector<json>& instances, const std::vector<std::string>& suites,
                       const SuiteConfig& config, unsigned threads = thread_cap());

json to_json(const Record& record);
json summary_json(const SuiteReport& report);

}  // namespace centrelat::suites
