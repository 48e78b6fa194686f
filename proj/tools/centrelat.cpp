// centrelat: generate instances, run verification suites, compute spectral
// objects. Exit codes: 0 success, 1 a check failed, 2 usage or input error.

#include "centrelat/generate.hpp"
#include "centrelat/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace centrelat;
using io::json;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// A JSON array, or one JSON value per nonempty line.
std::vector<json> read_instances(const std::string& path) {
  const std::string text = read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  if (text[first] == '[') {
    json all = json::parse(text);
    return {all.begin(), all.end()};
  }
  // A single document may span lines; otherwise one document per line.
  if (json::accept(text)) return {json::parse(text)};
  std::vector<json> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(json::parse(line));
  return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  auto value = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("--dim expects N or LO..HI, got '" + text + "'");
    return std::stoul(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::size_t n = value(text);
    return {n, n};
  }
  return {value(text.substr(0, dots)), value(text.substr(dots + 2))};
}

int fail(const json& report) {
  std::cout << report.dump() << '\n';
  std::cerr << "centrelat: " << report.dump() << '\n';
  return kFail;
}

// --- calc -----------------------------------------------------------------

json polar_json(const CentralOperator& t) {
  const PolarFactors f = polar(t);
  return {{"P", io::to_json(f.positive)}, {"U", io::to_json(f.unitary)}};
}

int calc_atomic(const CentralOperator& t, const std::string& request, const std::string& function, double eps) {
  const OperatorSpectralMeasure mu_t = build_mu_T(t);
  json out;
  if (request == "spectrum") {
    out = {{"spectrum", io::to_json(mu_t.spectrum())}};
  } else if (request == "mu") {
    out = {{"mu_T", io::to_json(mu_t)}};
  } else if (request == "rho") {
    const auto names = builtin_function_names();
    if (std::find(names.begin(), names.end(), function) == names.end())
      throw UsageError("rho needs --f NAME with NAME a builtin function");
    const CentralOperator r = rho_T(mu_t, builtin_function(function));
    out = {{"function", function}, {"rho", io::to_json(r)}};
  } else if (request == "polar") {
    out = {{"polar", polar_json(t)}};
  } else if (request == "eigen") {
    const EigenExpansion e = eigen_expansion(mu_t);
    const MinimalPolynomialReport p = minimal_polynomial(mu_t, 1e-10);
    json parts = json::array();
    for (const auto& c : e.components)
      parts.push_back({{"value", io::to_json(c.value)}, {"projection", io::to_json(c.projection.symbol().real().eval())}});
    out = {{"eigen",
            {{"components", parts},
             {"reconstruction_deviation", e.reconstruction_deviation},
             {"identity_deviation", e.identity_deviation},
             {"minimal_polynomial_degree", p.degree}}}};
  } else if (request == "freudenthal") {
    const StepApproximation s = freudenthal_approx(mu_t, eps, StepMode::coarse);
    json projections = json::array();
    for (const auto& q : s.projections) projections.push_back(io::to_json(q.symbol().real().eval()));
    json coefficients = json::array();
    for (Complex c : s.coefficients) coefficients.push_back(io::to_json(c));
    out = {{"freudenthal",
            {{"eps", eps}, {"coefficients", coefficients}, {"projections", projections}, {"error", s.error}}}};
  } else {
    throw UsageError("unknown request '" + request + "'");
  }
  std::cout << out.dump() << '\n';
  return 0;
}

int calc_sequence(const SequenceCentralOperator& op, const std::string& request, double eps) {
  try {
    validate_certificate(op);
  } catch (const CertificateError& e) {
    return fail({{"error", "certificate rejected"}, {"detail", e.what()}, {"witness_index", e.witness_index()}});
  }
  json out;
  if (request == "spectrum") {
    const Spectrum s = sequence_spectrum(op);
    json head = json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(s.attained.size(), 16); ++k) head.push_back(io::to_json(s.attained[k]));
    json acc = json::array();
    for (Complex a : s.accumulation) acc.push_back(io::to_json(a));
    out = {{"spectrum", {{"attained_prefix", head}, {"attained_count", s.attained.size()}, {"accumulation", acc}}}};
  } else if (request == "freudenthal") {
    const SequenceStepApproximation s = freudenthal_approx(op, eps);
    json coefficients = json::array();
    for (Complex c : s.coefficients) coefficients.push_back(io::to_json(c));
    out = {{"freudenthal",
            {{"eps", eps},
             {"coefficients", coefficients},
             {"cells", s.cells},
             {"prefix_terms", s.prefix_terms},
             {"error", s.error},
             {"coefficients_in_spectrum", s.coefficients_in_spectrum}}}};
  } else if (request == "compactness") {
    const CompactnessVerdict v = compactness_check(op);
    out = {{"compactness", {{"compact", v.compact}, {"reason", v.reason}}}};
  } else {
    throw UsageError("request '" + request + "' is not available for sequence operators");
  }
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_calc(const std::string& path, const std::string& request, const std::string& function, double eps,
             const Tolerances& tol) {
  const std::vector<json> docs = read_instances(path);
  if (docs.size() != 1) throw UsageError("calc expects exactly one operator");
  const json& j = docs.front();
  if (j.value("kind", "") == "sequence") return calc_sequence(SequenceCentralOperator(io::sequence_from(j.at("sequence"))), request, eps);
  if (j.contains("rule")) return calc_sequence(SequenceCentralOperator(io::sequence_from(j)), request, eps);

  const json& op = j.contains("T") ? j.at("T") : j;
  LatticePtr lattice;
  if (j.contains("lattice")) lattice = io::lattice_from(j.at("lattice"));
  else if (op.contains("entries")) lattice = io::lattice_from({{"dim", op.at("entries").size()}});
  else if (op.contains("symbol")) lattice = io::lattice_from({{"dim", op.at("symbol").size()}});
  else throw StructuralError("expected an operator with 'symbol' or 'entries'");
  if (op.contains("entries")) {
    const CentralityVerdict v = is_central(io::regular_from(op, lattice), tol.exact);
    if (!v.central)
      return fail({{"error", "operator is not central"},
                   {"max_off_diagonal", v.max_off_diagonal},
                   {"row", v.row},
                   {"col", v.col}});
    return calc_atomic(*v.op, request, function, eps);
  }
  return calc_atomic(io::central_from(op, lattice), request, function, eps);
}

// --- verify / gen ---------------------------------------------------------

int cmd_verify(const std::vector<std::string>& files, std::vector<std::string> suites, const suites::SuiteConfig& config) {
  std::vector<json> instances;
  for (const auto& f : files) {
    auto batch = read_instances(f);
    instances.insert(instances.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
  }
  if (suites.empty()) suites = suites::suite_names();
  if (std::find(suites.begin(), suites.end(), "none") != suites.end()) {
    if (suites.size() > 1) throw UsageError("--suite none cannot be combined with other suites");
    suites.clear();
  }
  for (const auto& s : suites)
    if (!suites::is_suite(s)) throw UsageError("unknown suite '" + s + "'");

  const suites::SuiteReport report = suites::run_suites(instances, suites, config);
  const suites::Record* first_failure = nullptr;
  for (const auto& r : report.records) {
    std::cout << suites::to_json(r).dump() << '\n';
    if (!r.pass && !first_failure) first_failure = &r;
  }
  json summary = suites::summary_json(report);
  summary["summary"]["instances"] = instances.size();
  std::cout << summary.dump() << '\n';
  if (first_failure) {
    std::cerr << "centrelat: first failing record: " << suites::to_json(*first_failure).dump() << '\n';
    return kFail;
  }
  return 0;
}

int cmd_gen(const gen::GenOptions& options, const std::string& out_path) {
  if (options.mode != "sequence" && !options.rule.empty()) throw UsageError("--rule requires --mode sequence");
  if (options.count == 0) throw UsageError("--count must be positive");
  if (options.mode == "atomic" && (options.dim_lo == 0 || options.dim_lo > options.dim_hi))
    throw UsageError("--dim needs 1 <= LO <= HI");
  std::vector<json> batch;
  try {
    batch = gen::generate(options);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  for (const auto& j : batch) out << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral computations for central operators on coordinate lattices"};
  app.require_subcommand(1);

  gen::GenOptions gen_options;
  std::string dim = "4", out_path;
  auto* gen_cmd = app.add_subcommand("gen", "generate random instances as JSON lines");
  gen_cmd->add_option("--seed", gen_options.seed, "random seed");
  gen_cmd->add_option("--dim", dim, "dimension N or range LO..HI (atomic mode)");
  gen_cmd->add_option("--count", gen_options.count, "number of instances");
  gen_cmd->add_option("--mode", gen_options.mode, "atomic | sequence")->check(CLI::IsMember({"atomic", "sequence"}));
  gen_cmd->add_option("--rule", gen_options.rule, "sequence rule: reciprocal | constant | geometric | shifted_reciprocal");
  gen_cmd->add_option("-o,--out", out_path, "output file (default stdout)");

  suites::SuiteConfig config;
  std::vector<std::string> files, suite_list;
  auto* verify_cmd = app.add_subcommand("verify", "run verification suites, one JSON record per line");
  verify_cmd->add_option("files", files, "instance files (JSON lines or array; - for stdin)")->required();
  verify_cmd->add_option("--suite", suite_list, "suite to run (repeatable; none for an empty report)");

  std::string calc_file, request, function;
  auto* calc_cmd = app.add_subcommand("calc", "compute a spectral object of one operator");
  calc_cmd->add_option("file", calc_file, "operator or instance file")->required();
  calc_cmd->add_option("request", request, "spectrum | mu | rho | polar | eigen | freudenthal | compactness")
      ->required();
  calc_cmd->add_option("--f", function, "builtin function for rho");

  for (auto* cmd : {verify_cmd, calc_cmd}) {
    cmd->add_option("--tol-exact", config.tol.exact, "exact-class tolerance")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol-oracle", config.tol.oracle, "oracle-class tolerance")->check(CLI::NonNegativeNumber);
    cmd->add_option("--eps", config.eps, "step-approximation accuracy")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) {
      std::tie(gen_options.dim_lo, gen_options.dim_hi) = parse_range(dim);
      return cmd_gen(gen_options, out_path);
    }
    if (*verify_cmd) return cmd_verify(files, suite_list, config);
    return cmd_calc(calc_file, request, function, config.eps, config.tol);
  } catch (const UsageError& e) {
    std::cerr << "centrelat: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "centrelat: invalid JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const StructuralError& e) {
    std::cerr << "centrelat: malformed input: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    return fail({{"error", e.what()}});
  }
}
