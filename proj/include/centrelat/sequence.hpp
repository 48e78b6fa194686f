#pragma once

// Certified diagonal operators on a countable coordinate set ("sequence
// mode"). An instance is a rule i -> lambda_i (1-based) together with a
// certificate: a sup bound, the accumulation set, a tail rule t(N) with
// sup_{i > N} dist(lambda_i, accumulation) <= t(N), and optionally a
// multiplicity rule. Certificates are validated on sampled prefixes and
// windows and trusted beyond them.

#include "centrelat/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace centrelat {

/// Serializable description of a symbol rule.
///   reciprocal: lambda_i = offset + scale / i
///   constant:   lambda_i = value
///   geometric:  lambda_i = first * ratio^(i-1)
struct SymbolRuleSpec {
  std::string name;
  Complex scale{1.0};
  Complex offset{0.0};
  Complex value{0.0};
  Complex first{1.0};
  Complex ratio{0.5};
};

/// Serializable tail rule t(N).
///   reciprocal: c / (N + 1)
///   geometric:  c * r^N
///   zero:       0
struct TailRuleSpec {
  std::string name;
  double c = 1.0;
  double r = 0.5;
};

struct Multiplicity {
  bool infinite = false;
  std::size_t count = 0;
};

/// Serializable multiplicity rule, queried only at attained values.
///   simple:   every attained value has multiplicity 1
///   infinite: the listed values have infinite multiplicity, others 1
struct MultiplicitySpec {
  std::string name;
  std::vector<Complex> values;
};

struct SequenceSpec {
  SymbolRuleSpec rule;
  double sup = 0.0;
  TailRuleSpec tail;
  std::vector<Complex> accumulation;
  std::optional<MultiplicitySpec> multiplicity;
};

struct SequenceOptions {
  std::size_t prefix = 10'000;  // indices whose values are sampled directly
  std::size_t window = 10'000;  // indices checked past each N(eps)
  std::vector<double> schedule{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
};

struct CertificateReport {
  std::size_t indices_checked = 0;
  /// (eps, N(eps)) for each eps of the schedule.
  std::vector<std::pair<double, std::size_t>> thresholds;
  double max_bound_excess = 0.0;
};

class SequenceCentralOperator {
 public:
  /// Throws StructuralError for unknown rule names or malformed parameters.
  explicit SequenceCentralOperator(SequenceSpec spec);

  static SequenceCentralOperator reciprocal(Complex scale = 1.0, Complex offset = 0.0);
  static SequenceCentralOperator constant(Complex value);
  static SequenceCentralOperator geometric(Complex first, Complex ratio);

  const SequenceSpec& spec() const noexcept { return spec_; }
  /// lambda_i for i >= 1.
  Complex operator()(std::size_t i) const;
  double tail(std::size_t n) const;
  const std::vector<Complex>& accumulation() const noexcept { return spec_.accumulation; }
  double sup() const noexcept { return spec_.sup; }
  bool has_multiplicity_rule() const noexcept { return spec_.multiplicity.has_value(); }
  /// Throws CertificateError when there is no multiplicity rule.
  Multiplicity multiplicity(Complex lambda) const;

  /// Distance from lambda to the accumulation set (infinite if it is empty).
  double accumulation_distance(Complex lambda) const;

  /// The image under f, with accumulation f(A) and tail lipschitz * t(N).
  /// The result keeps this rule composed with f and is not serializable.
  SequenceCentralOperator mapped(const ScalarFunction& f, double lipschitz) const;

 private:
  SequenceSpec spec_;
  std::function<Complex(std::size_t)> rule_;
  std::function<double(std::size_t)> tail_;
};

/// Smallest N with t(N) < eps; throws CertificateError if t never gets there.
std::size_t threshold_index(const SequenceCentralOperator& op, double eps);

/// Validates the certificate: |lambda_i| <= sup on the prefix, t
/// nonincreasing, dist(lambda_i, A) <= t(N(eps)) on (N, N + window] for each
/// eps, and each accumulation point approached within eps in that window.
/// Throws CertificateError with the offending index.
CertificateReport validate_certificate(const SequenceCentralOperator& op, const SequenceOptions& options = {});

/// Attained values of the prefix (first-appearance order) together with the
/// accumulation set.
Spectrum sequence_spectrum(const SequenceCentralOperator& op, const SequenceOptions& options = {});

/// Accumulation points approached by values different from themselves, i.e.
/// limit points of sigma(T) as a set.
std::vector<Complex> set_limit_points(const SequenceCentralOperator& op, const SequenceOptions& options = {});

struct CompactnessVerdict {
  bool compact = false;
  bool limit_points_in_zero = false;
  bool finite_multiplicities = false;
  std::vector<Complex> limit_points;
  std::optional<Complex> infinite_value;  // a nonzero value of infinite multiplicity
  /// Independent view: the accumulation set lies in {0}.
  bool accumulation_in_zero = false;
  std::string reason;
};

/// Compact iff sigma(T) has no limit point except possibly 0 and every
/// nonzero value has finite multiplicity. A value repeated within the prefix
/// with no multiplicity rule raises CertificateError; without a rule a value
/// seen once is taken as simple.
CompactnessVerdict compactness_check(const SequenceCentralOperator& op, const SequenceOptions& options = {});

struct SequenceEigenQuery {
  bool in_spectrum = false;
  bool is_eigenvalue = false;
  bool isolated = false;
  /// Indices i <= prefix with lambda_i == lambda (the sampled part of P_lambda).
  std::vector<std::size_t> indices;
  std::optional<Multiplicity> multiplicity;
};

SequenceEigenQuery eigen_query(const SequenceCentralOperator& op, Complex lambda, double tol = 0.0,
                               const SequenceOptions& options = {});

/// A vector on the countable coordinates, z_i for i >= 1, with a bound on
/// sup_{i > N} |z_i|.
struct SequenceElement {
  std::function<Complex(std::size_t)> value;
  std::function<double(std::size_t)> tail;
};

struct ExpansionCheckpoint {
  std::size_t n = 0;
  double residual = 0.0;  // max over the window of |T z - S_n z|
  double bound = 0.0;     // max over the window of u_n
  bool dominated = false;
};

struct SequenceExpansionReport {
  WitnessVerdict operator_verdict;  // S_n -> T with u_n = t(n) 1
  WitnessVerdict vector_verdict;    // S_n z -> T z
  std::vector<ExpansionCheckpoint> checkpoints;
  bool holds = false;
};

/// Partial sums S_n = sum over the first n distinct values of lambda P_lambda,
/// checked on the coordinates 1..window for n = 1..terms, with witnesses
/// built from t(n). Requires the accumulation set to lie in {0}.
SequenceExpansionReport sequence_eigen_expansion(const SequenceCentralOperator& op, const SequenceElement& z,
                                                 std::vector<std::size_t> checkpoints = {10, 100, 1000},
                                                 std::size_t window = 1500, std::size_t terms = 1000);

struct SequenceStepApproximation {
  std::vector<Complex> coefficients;      // each attained by the sequence
  std::vector<std::string> cells;         // description of each projection
  std::size_t prefix_terms = 0;           // N: indices 1..N get exact cells
  double error = 0.0;                     // certified bound on sup_i |lambda_i - step_i|
  bool coefficients_in_spectrum = false;
};

/// Exact cells for the distinct values among lambda_1..lambda_N and one
/// cell per accumulation point for the indices beyond N, represented by an
/// attained value. N is the first candidate whose certified error is <= eps.
SequenceStepApproximation freudenthal_approx(const SequenceCentralOperator& op, double eps,
                                             const SequenceOptions& options = {});

struct AnnihilationReport {
  std::size_t candidates = 0;
  std::size_t annihilating = 0;  // candidates vanishing on the whole prefix
  /// Smallest degree of an annihilating candidate, if any.
  std::optional<std::size_t> degree;
};

/// Tries monic polynomials of degree <= max_degree: every product over a
/// subset of the first max_degree + 1 distinct values plus random monic
/// polynomials, and evaluates each on the prefix.
AnnihilationReport sequence_annihilation(const SequenceCentralOperator& op, std::size_t max_degree = 8,
                                         std::size_t random_candidates = 200, std::uint64_t seed = 0x9011,
                                         const SequenceOptions& options = {});

/// f_n(lambda) = 1 if Re lambda > 1/n else 0, against f = chi_{Re lambda > 0},
/// on the coordinates 1..window, with pointwise running-sup witnesses.
DominatedConvergenceReport sequence_threshold_convergence(const SequenceCentralOperator& op, std::size_t window = 600,
                                                          std::size_t terms = 800);

}  // namespace centrelat
