#include "centrelat/sequence.hpp"

#include "centrelat/random.hpp"

#include <limits>
#include <map>

namespace centrelat {

namespace {

using Key = std::pair<double, double>;
Key key(Complex z) { return {z.real(), z.imag()}; }

std::function<Complex(std::size_t)> make_rule(const SymbolRuleSpec& r) {
  if (r.name == "reciprocal") return [s = r.scale, o = r.offset](std::size_t i) { return o + s / double(i); };
  if (r.name == "constant") return [v = r.value](std::size_t) { return v; };
  if (r.name == "geometric") {
    if (!(std::abs(r.ratio) < 1.0)) throw StructuralError("geometric rule needs |ratio| < 1");
    // Subnormal terms lose their precision and start to coincide; they are
    // flushed to 0, within every tail bound.
    return [a = r.first, q = r.ratio](std::size_t i) {
      const Complex v = a * std::pow(q, double(i - 1));
      return std::abs(v) < std::numeric_limits<double>::min() ? Complex{} : v;
    };
  }
  throw StructuralError("unknown symbol rule '" + r.name + "'");
}

std::function<double(std::size_t)> make_tail(const TailRuleSpec& t) {
  if (!(t.c >= 0.0) || !std::isfinite(t.c)) throw StructuralError("tail constant must be finite and nonnegative");
  if (t.name == "reciprocal") return [c = t.c](std::size_t n) { return c / (double(n) + 1.0); };
  if (t.name == "geometric") {
    if (!(t.r >= 0.0 && t.r < 1.0)) throw StructuralError("geometric tail needs 0 <= r < 1");
    return [c = t.c, r = t.r](std::size_t n) { return c * std::pow(r, double(n)); };
  }
  if (t.name == "zero") return [](std::size_t) { return 0.0; };
  throw StructuralError("unknown tail rule '" + t.name + "'");
}

bool slack_le(double a, double b) { return a <= b + kExactTolerance * std::max({1.0, std::abs(a), std::abs(b)}); }

// Distinct prefix values in first-appearance order with their counts and
// the index of the first repetition.
struct PrefixValues {
  std::vector<Complex> values;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> first_index;
  std::vector<std::size_t> first_repeat;  // 0 when not repeated
  std::map<Key, std::size_t> position;
};

PrefixValues prefix_values(const SequenceCentralOperator& op, std::size_t prefix) {
  PrefixValues out;
  for (std::size_t i = 1; i <= prefix; ++i) {
    const Complex v = op(i);
    auto [it, inserted] = out.position.try_emplace(key(v), out.values.size());
    if (inserted) {
      out.values.push_back(v);
      out.counts.push_back(1);
      out.first_index.push_back(i);
      out.first_repeat.push_back(0);
    } else {
      const std::size_t k = it->second;
      if (out.counts[k]++ == 1) out.first_repeat[k] = i;
    }
  }
  return out;
}

}  // namespace

SequenceCentralOperator::SequenceCentralOperator(SequenceSpec spec)
    : spec_(std::move(spec)), rule_(make_rule(spec_.rule)), tail_(make_tail(spec_.tail)) {
  if (!(spec_.sup >= 0.0) || !std::isfinite(spec_.sup)) throw StructuralError("sup bound must be finite");
  if (spec_.multiplicity && spec_.multiplicity->name != "simple" && spec_.multiplicity->name != "infinite")
    throw StructuralError("unknown multiplicity rule '" + spec_.multiplicity->name + "'");
}

SequenceCentralOperator SequenceCentralOperator::reciprocal(Complex scale, Complex offset) {
  SequenceSpec s;
  s.rule = {.name = "reciprocal", .scale = scale, .offset = offset};
  s.sup = std::abs(offset) + std::abs(scale);
  s.tail = {.name = "reciprocal", .c = std::abs(scale)};
  s.accumulation = {offset};
  s.multiplicity = MultiplicitySpec{"simple", {}};
  return SequenceCentralOperator(std::move(s));
}

SequenceCentralOperator SequenceCentralOperator::constant(Complex value) {
  SequenceSpec s;
  s.rule = {.name = "constant", .value = value};
  s.sup = std::abs(value);
  s.tail = {.name = "zero"};
  s.accumulation = {value};
  s.multiplicity = MultiplicitySpec{"infinite", {value}};
  return SequenceCentralOperator(std::move(s));
}

SequenceCentralOperator SequenceCentralOperator::geometric(Complex first, Complex ratio) {
  SequenceSpec s;
  s.rule = {.name = "geometric", .first = first, .ratio = ratio};
  s.sup = std::abs(first);
  s.tail = {.name = "geometric", .c = std::abs(first), .r = std::abs(ratio)};
  s.accumulation = {0.0};
  s.multiplicity = MultiplicitySpec{"simple", {}};
  return SequenceCentralOperator(std::move(s));
}

Complex SequenceCentralOperator::operator()(std::size_t i) const {
  if (i == 0) throw DomainError("sequence indices start at 1");
  return rule_(i);
}

double SequenceCentralOperator::tail(std::size_t n) const { return tail_(n); }

Multiplicity SequenceCentralOperator::multiplicity(Complex lambda) const {
  if (!spec_.multiplicity) throw CertificateError("no multiplicity rule for value " + format_complex(lambda));
  const auto& m = *spec_.multiplicity;
  if (m.name == "infinite" && std::find(m.values.begin(), m.values.end(), lambda) != m.values.end())
    return {true, 0};
  return {false, 1};
}

double SequenceCentralOperator::accumulation_distance(Complex lambda) const {
  double d = std::numeric_limits<double>::infinity();
  for (Complex a : spec_.accumulation) d = std::min(d, std::abs(lambda - a));
  return d;
}

SequenceCentralOperator SequenceCentralOperator::mapped(const ScalarFunction& f, double lipschitz) const {
  auto eval = [f](Complex z) {
    const auto v = f(z);
    if (!v) throw DomainError("function is undefined at " + format_complex(z));
    return *v;
  };
  SequenceCentralOperator out = *this;
  double amax = 0.0, famax = 0.0;
  out.spec_.accumulation.clear();
  for (Complex a : spec_.accumulation) {
    amax = std::max(amax, std::abs(a));
    out.spec_.accumulation.push_back(eval(a));
    famax = std::max(famax, std::abs(out.spec_.accumulation.back()));
  }
  out.spec_.rule.name = "mapped";
  out.spec_.sup = famax + lipschitz * (spec_.sup + amax);
  out.spec_.multiplicity.reset();
  out.rule_ = [rule = rule_, eval](std::size_t i) { return eval(rule(i)); };
  out.tail_ = [tail = tail_, lipschitz](std::size_t n) { return lipschitz * tail(n); };
  return out;
}

// ---------------------------------------------------------------------------

std::size_t threshold_index(const SequenceCentralOperator& op, double eps) {
  if (op.tail(0) < eps) return 0;
  std::size_t hi = 1;
  while (!(op.tail(hi) < eps)) {
    if (hi > (std::size_t{1} << 60)) throw CertificateError("tail rule does not fall below " + std::to_string(eps));
    hi *= 2;
  }
  std::size_t lo = hi / 2;  // t(lo) >= eps
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (op.tail(mid) < eps ? hi : lo) = mid;
  }
  return hi;
}

CertificateReport validate_certificate(const SequenceCentralOperator& op, const SequenceOptions& options) {
  CertificateReport report;
  if (op.accumulation().empty()) throw CertificateError("a bounded infinite sequence needs an accumulation point");

  for (std::size_t i = 1; i <= options.prefix; ++i) {
    const Complex v = op(i);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw CertificateError("non-finite value", i);
    if (!slack_le(std::abs(v), op.sup())) throw CertificateError("value exceeds the sup bound", i);
  }
  report.indices_checked = options.prefix;

  for (std::size_t n = 0; n < options.prefix; ++n)
    if (op.tail(n + 1) > op.tail(n)) throw CertificateError("tail rule increases", n + 1);
  for (std::size_t n = options.prefix; n < (std::size_t{1} << 40); n *= 2)
    if (op.tail(2 * n) > op.tail(n)) throw CertificateError("tail rule increases", 2 * n);

  for (double eps : options.schedule) {
    const std::size_t n = threshold_index(op, eps);
    const double bound = op.tail(n);
    std::vector<bool> approached(op.accumulation().size(), false);
    for (std::size_t i = n + 1; i <= n + options.window; ++i) {
      const Complex v = op(i);
      const double d = op.accumulation_distance(v);
      report.max_bound_excess = std::max(report.max_bound_excess, d - bound);
      if (!slack_le(d, bound)) throw CertificateError("value is farther from the accumulation set than t(N)", i);
      for (std::size_t k = 0; k < approached.size(); ++k)
        approached[k] = approached[k] || std::abs(v - op.accumulation()[k]) <= eps;
    }
    for (std::size_t k = 0; k < approached.size(); ++k)
      if (!approached[k])
        throw CertificateError("accumulation point " + format_complex(op.accumulation()[k]) + " is not approached",
                               n + 1);
    report.thresholds.emplace_back(eps, n);
  }
  return report;
}

Spectrum sequence_spectrum(const SequenceCentralOperator& op, const SequenceOptions& options) {
  const PrefixValues p = prefix_values(op, options.prefix);
  Spectrum sigma;
  sigma.attained = p.values;
  sigma.multiplicity = p.counts;
  sigma.accumulation = op.accumulation();
  return sigma;
}

std::vector<Complex> set_limit_points(const SequenceCentralOperator& op, const SequenceOptions& options) {
  const double eps = options.schedule.empty() ? 1e-6 : options.schedule.back();
  const std::size_t n = threshold_index(op, eps);
  std::vector<Complex> out;
  for (Complex a : op.accumulation()) {
    for (std::size_t i = n + 1; i <= n + options.window; ++i) {
      const Complex v = op(i);
      if (v != a && std::abs(v - a) <= eps) {
        out.push_back(a);
        break;
      }
    }
  }
  return out;
}

CompactnessVerdict compactness_check(const SequenceCentralOperator& op, const SequenceOptions& options) {
  validate_certificate(op, options);
  CompactnessVerdict verdict;
  verdict.limit_points = set_limit_points(op, options);
  verdict.limit_points_in_zero =
      std::all_of(verdict.limit_points.begin(), verdict.limit_points.end(), [](Complex a) { return a == Complex{}; });
  verdict.accumulation_in_zero = std::all_of(op.accumulation().begin(), op.accumulation().end(),
                                             [](Complex a) { return a == Complex{}; });

  const PrefixValues p = prefix_values(op, options.prefix);
  verdict.finite_multiplicities = true;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    if (p.values[k] == Complex{}) continue;
    if (!op.has_multiplicity_rule()) {
      if (p.counts[k] > 1) throw CertificateError("repeated value with no multiplicity rule", p.first_repeat[k]);
      continue;
    }
    const Multiplicity m = op.multiplicity(p.values[k]);
    if (m.infinite) {
      if (verdict.finite_multiplicities) verdict.infinite_value = p.values[k];
      verdict.finite_multiplicities = false;
    } else if (p.counts[k] > m.count) {
      throw CertificateError("value occurs more often than its declared multiplicity", p.first_repeat[k]);
    }
  }

  verdict.compact = verdict.limit_points_in_zero && verdict.finite_multiplicities;
  if (!verdict.limit_points_in_zero) {
    for (Complex a : verdict.limit_points)
      if (a != Complex{}) {
        verdict.reason = "limit point " + format_complex(a) + " is not 0";
        break;
      }
  } else if (!verdict.finite_multiplicities) {
    verdict.reason = "eigenvalue " + format_complex(*verdict.infinite_value) + " has infinite multiplicity";
  } else {
    verdict.reason = "limit points in {0}, nonzero eigenvalues of finite multiplicity";
  }
  return verdict;
}

SequenceEigenQuery eigen_query(const SequenceCentralOperator& op, Complex lambda, double tol,
                               const SequenceOptions& options) {
  SequenceEigenQuery q;
  for (std::size_t i = 1; i <= options.prefix; ++i) {
    const Complex v = op(i);
    if (tol == 0.0 ? v == lambda : std::abs(v - lambda) <= tol) q.indices.push_back(i);
  }
  const bool near_accumulation = tol == 0.0 ? op.accumulation_distance(lambda) == 0.0
                                            : op.accumulation_distance(lambda) <= tol;
  q.is_eigenvalue = !q.indices.empty();
  q.in_spectrum = q.is_eigenvalue || near_accumulation;
  if (q.is_eigenvalue && op.has_multiplicity_rule()) q.multiplicity = op.multiplicity(op(q.indices.front()));
  if (q.in_spectrum) {
    const auto limits = set_limit_points(op, options);
    q.isolated = std::none_of(limits.begin(), limits.end(), [&](Complex a) {
      return tol == 0.0 ? a == lambda : std::abs(a - lambda) <= tol;
    });
  }
  return q;
}

// ---------------------------------------------------------------------------

SequenceExpansionReport sequence_eigen_expansion(const SequenceCentralOperator& op, const SequenceElement& z,
                                                 std::vector<std::size_t> checkpoints, std::size_t window,
                                                 std::size_t terms) {
  if (!std::all_of(op.accumulation().begin(), op.accumulation().end(), [](Complex a) { return a == Complex{}; }))
    throw PreconditionError("the expansion witness needs the accumulation set inside {0}");
  for (std::size_t c : checkpoints)
    if (c == 0 || c > terms) throw PreconditionError("checkpoint outside the range of partial sums");
  const auto w = static_cast<Eigen::Index>(window);

  ComplexVector lambda(w), zv(w);
  std::vector<std::size_t> rank(window);
  std::map<Key, std::size_t> seen;
  for (std::size_t i = 1; i <= window; ++i) {
    lambda[Eigen::Index(i - 1)] = op(i);
    zv[Eigen::Index(i - 1)] = z.value(i);
    rank[i - 1] = seen.try_emplace(key(op(i)), seen.size()).first->second;
  }
  const RealVector zmod = modulus(zv);
  const double zsup = std::max(zmod.maxCoeff(), z.tail(window));
  const ComplexVector tz = lambda.cwiseProduct(zv);

  std::vector<ComplexVector> sums, applied;
  ConvergenceWitness opw, vecw;
  opw.claim = "partial sums of lambda P_lambda -> T";
  vecw.claim = "partial sums of lambda P_lambda z -> T z";
  opw.tail = TailRule{[&op](std::size_t n) { return op.tail(n); }, "t(n)"};
  vecw.tail = TailRule{[&op, zsup](std::size_t n) { return op.tail(n) * zsup; }, "t(n) sup |z|"};
  for (std::size_t n = 1; n <= terms; ++n) {
    ComplexVector s(w);
    for (Eigen::Index i = 0; i < w; ++i) s[i] = rank[std::size_t(i)] < n ? lambda[i] : Complex{};
    applied.push_back(s.cwiseProduct(zv));
    sums.push_back(std::move(s));
    opw.dominating.push_back(RealVector::Constant(w, op.tail(n)));
    vecw.dominating.push_back(op.tail(n) * zmod);
  }

  SequenceExpansionReport report;
  report.operator_verdict = check_witness(sums, lambda, opw);
  report.vector_verdict = check_witness(applied, tz, vecw);
  for (std::size_t n : checkpoints) {
    ExpansionCheckpoint c;
    c.n = n;
    const RealVector residual = modulus(ComplexVector(tz - applied[n - 1]));
    c.residual = residual.maxCoeff();
    c.bound = vecw.dominating[n - 1].maxCoeff();
    c.dominated = true;
    for (Eigen::Index i = 0; i < w; ++i) c.dominated = c.dominated && slack_le(residual[i], vecw.dominating[n - 1][i]);
    report.checkpoints.push_back(c);
  }
  report.holds = report.operator_verdict.holds && report.vector_verdict.holds &&
                 std::all_of(report.checkpoints.begin(), report.checkpoints.end(),
                             [](const ExpansionCheckpoint& c) { return c.dominated; });
  return report;
}

SequenceStepApproximation freudenthal_approx(const SequenceCentralOperator& op, double eps,
                                             const SequenceOptions& options) {
  if (!(eps > 0.0)) throw DomainError("step approximation needs eps > 0");
  validate_certificate(op, options);
  const auto& acc = op.accumulation();
  const std::size_t limit = threshold_index(op, eps / 2);

  auto nearest_point = [&](Complex v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < acc.size(); ++k)
      if (std::abs(v - acc[k]) < std::abs(v - acc[best])) best = k;
    return best;
  };

  // Certified error of the tail cells for a given N, with their representatives.
  auto attempt = [&](std::size_t n, std::vector<std::size_t>& reps) {
    reps.assign(acc.size(), 0);
    double error = 0.0;
    for (std::size_t i = n + 1; i <= n + options.window; ++i) {
      const std::size_t k = nearest_point(op(i));
      if (reps[k] == 0) reps[k] = i;
      error = std::max(error, std::abs(op(i) - op(reps[k])));
    }
    const double beyond = op.tail(n + options.window);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (reps[k] == 0) return std::numeric_limits<double>::infinity();
      error = std::max(error, beyond + std::abs(acc[k] - op(reps[k])));
    }
    return error;
  };

  std::vector<std::size_t> candidates;
  for (std::size_t n = 0; n <= std::min<std::size_t>(64, limit); ++n) candidates.push_back(n);
  for (std::size_t n = 128; n < limit; n *= 2) candidates.push_back(n);
  candidates.push_back(limit);

  for (std::size_t n : candidates) {
    std::vector<std::size_t> reps;
    const double error = attempt(n, reps);
    if (!(error <= eps)) continue;
    SequenceStepApproximation out;
    out.prefix_terms = n;
    out.error = error;
    const PrefixValues p = prefix_values(op, n);
    for (Complex v : p.values) {
      out.coefficients.push_back(v);
      out.cells.push_back("i <= " + std::to_string(n) + " with lambda_i = " + format_complex(v));
    }
    for (std::size_t k = 0; k < acc.size(); ++k) {
      out.coefficients.push_back(op(reps[k]));
      out.cells.push_back("i > " + std::to_string(n) + " nearest to " + format_complex(acc[k]) +
                          ", represented by lambda_" + std::to_string(reps[k]));
    }
    out.coefficients_in_spectrum = true;  // every coefficient is some lambda_i
    return out;
  }
  throw PreconditionError("no step approximation within eps on the checked window");
}

AnnihilationReport sequence_annihilation(const SequenceCentralOperator& op, std::size_t max_degree,
                                         std::size_t random_candidates, std::uint64_t seed,
                                         const SequenceOptions& options) {
  const PrefixValues p = prefix_values(op, options.prefix);
  const std::vector<Complex>& values = p.values;
  AnnihilationReport report;

  auto test = [&](const std::vector<Complex>& roots) {
    ++report.candidates;
    for (Complex v : values) {
      Complex acc = 1.0;
      for (Complex r : roots) acc *= v - r;
      if (acc != Complex{}) return;
    }
    ++report.annihilating;
    if (!report.degree || roots.size() < *report.degree) report.degree = roots.size();
  };

  const std::size_t pool = std::min(values.size(), max_degree + 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pool); ++mask) {
    std::vector<Complex> roots;
    for (std::size_t k = 0; k < pool; ++k)
      if ((mask >> k) & 1U) roots.push_back(values[k]);
    if (roots.size() <= max_degree) test(roots);
  }
  Rng rng(seed);
  for (std::size_t c = 0; c < random_candidates; ++c) {
    std::vector<Complex> roots(1 + rng.index(max_degree));
    for (Complex& r : roots) r = rng.coin() ? values[rng.index(values.size())] : op.sup() * rng.unit_disc();
    test(roots);
  }
  return report;
}

DominatedConvergenceReport sequence_threshold_convergence(const SequenceCentralOperator& op, std::size_t window,
                                                          std::size_t terms) {
  const auto w = static_cast<Eigen::Index>(window);
  ComplexVector values(w), z(w);
  for (Eigen::Index i = 0; i < w; ++i) {
    values[i] = op(std::size_t(i) + 1);
    z[i] = 1.0 / double(i + 1);
  }
  FunctionSequence seq;
  seq.length = terms;
  seq.term = [](std::size_t n, Complex l) -> std::optional<Complex> { return l.real() > 1.0 / double(n) ? 1.0 : 0.0; };
  const ScalarFunction limit = [](Complex l) -> std::optional<Complex> { return l.real() > 0.0 ? 1.0 : 0.0; };
  return dominated_convergence_on_values(values, seq, limit, 1.0, z, false);
}

}  // namespace centrelat
