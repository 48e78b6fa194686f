#include "centrelat/spectral.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <limits>
#include <numeric>

namespace centrelat {

namespace {

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double scaled_matrix_deviation(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

// Commutator [A, X] relative to the sizes of A and X.
double commutator_deviation(const ComplexMatrix& a, const ComplexMatrix& x) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, x.cwiseAbs().maxCoeff());
  return (a * x - x * a).cwiseAbs().maxCoeff() / scale;
}

ComplexVector spectrum_values(const Spectrum& sigma) {
  ComplexVector out(static_cast<Eigen::Index>(sigma.size()));
  for (std::size_t k = 0; k < sigma.size(); ++k) out[Eigen::Index(k)] = sigma.attained[k];
  return out;
}

}  // namespace

GelfandTransform gelfand(const CentralOperator& t) { return {t.symbol(), t.order_unit_norm()}; }

GelfandReport verify_gelfand(const CentralOperator& s, const CentralOperator& t) {
  GelfandReport report;
  const GelfandTransform hat_t = gelfand(t);
  report.isometry_deviation = deviation(norms(t, 0).order_unit, hat_t.values.cwiseAbs().maxCoeff());
  report.star_deviation = max_deviation(gelfand(t.conj()).values, ComplexVector(hat_t.values.conjugate()));
  report.multiplicative_deviation =
      max_deviation(gelfand(s * t).values, ComplexVector(gelfand(s).values.cwiseProduct(hat_t.values)));
  report.unit_deviation = max_deviation(gelfand(CentralOperator::identity(t.lattice())).values,
                                        ComplexVector::Ones(hat_t.values.size()));
  const double norm = t.order_unit_norm();
  report.cstar_deviation = deviation((t * t.conj()).order_unit_norm(), norm * norm);
  return report;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> Spectrum::find(Complex lambda, double tol) const {
  for (std::size_t k = 0; k < attained.size(); ++k) {
    if (tol == 0.0 ? attained[k] == lambda : std::abs(attained[k] - lambda) <= tol) return k;
  }
  return std::nullopt;
}

bool Spectrum::contains(Complex lambda, double tol) const {
  if (find(lambda, tol)) return true;
  return std::any_of(accumulation.begin(), accumulation.end(),
                     [&](Complex a) { return tol == 0.0 ? a == lambda : std::abs(a - lambda) <= tol; });
}

Spectrum spectrum(const CentralOperator& t, SpectrumOptions options) {
  const auto n = static_cast<std::size_t>(t.dim());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(t[a], t[b]); });

  // Cluster coordinates: exact equality, or eps-closeness taken transitively.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool same = options.merge_eps > 0.0 ? std::abs(t[a] - t[b]) <= options.merge_eps : t[a] == t[b];
      if (same) parent[root(b)] = root(a);
    }
  }

  std::vector<std::size_t> cluster_of(n, n);
  std::vector<Complex> sums;
  std::vector<std::size_t> counts;
  for (std::size_t i : order) {
    const std::size_t r = root(i);
    if (cluster_of[r] == n) {
      cluster_of[r] = sums.size();
      sums.emplace_back();
      counts.push_back(0);
    }
    sums[cluster_of[r]] += t[i];
    ++counts[cluster_of[r]];
  }
  std::vector<Complex> value(sums.size());
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (options.merge_eps > 0.0) {
      value[c] = sums[c] / static_cast<double>(counts[c]);
    } else {
      // Exact mode: every member is the same value; avoid re-rounding.
      for (std::size_t i = 0; i < n; ++i)
        if (cluster_of[root(i)] == c) {
          value[c] = t[i];
          break;
        }
    }
  }

  std::vector<std::size_t> rank(value.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return lex_less(value[a], value[b]); });
  std::vector<std::size_t> position(value.size());
  for (std::size_t k = 0; k < rank.size(); ++k) position[rank[k]] = k;

  Spectrum sigma;
  sigma.attained.resize(value.size());
  sigma.multiplicity.resize(value.size());
  for (std::size_t c = 0; c < value.size(); ++c) {
    sigma.attained[position[c]] = value[c];
    sigma.multiplicity[position[c]] = counts[c];
  }
  sigma.label.resize(n);
  for (std::size_t i = 0; i < n; ++i) sigma.label[i] = position[cluster_of[root(i)]];
  return sigma;
}

SpectralRadiusReport spectral_radius_checks(const CentralOperator& t, const Spectrum& sigma, double tol) {
  SpectralRadiusReport report;
  for (Complex l : sigma.attained) report.radius = std::max(report.radius, std::abs(l));
  report.norm = t.order_unit_norm();
  report.radius_equals_norm = close(report.radius, report.norm, tol);

  const auto all = [&](auto pred) { return std::all_of(sigma.attained.begin(), sigma.attained.end(), pred); };
  const bool real_spectrum = all([](Complex l) { return l.imag() == 0.0; });
  const bool selfadjoint = t == t.conj();
  report.real_iff_selfadjoint = real_spectrum == selfadjoint;

  const bool nonnegative_spectrum = all([](Complex l) { return l.imag() == 0.0 && l.real() >= 0.0; });
  bool positive = true;
  for (Eigen::Index i = 0; i < t.symbol().size(); ++i)
    positive = positive && t.symbol()[i].imag() == 0.0 && t.symbol()[i].real() >= 0.0;
  report.nonnegative_iff_positive = nonnegative_spectrum == positive;

  const bool on_circle = all([&](Complex l) { return std::abs(std::abs(l) - 1.0) <= tol; });
  const bool unimodular = max_deviation(t.modulus().symbol(), ComplexVector::Ones(t.symbol().size())) <= tol;
  report.circle_iff_unimodular = on_circle == unimodular;
  return report;
}

Spectrum union_spectrum(const CentralOperator& t, const std::vector<PrincipalIdeal>& generators) {
  std::vector<bool> covered(t.dim(), false);
  for (const auto& g : generators) {
    if (g.dim() != t.dim()) throw StructuralError("union_spectrum: generator dimension mismatch");
    for (std::size_t i : g.support()) covered[i] = true;
  }
  for (std::size_t i = 0; i < covered.size(); ++i)
    if (!covered[i])
      throw PreconditionError("generators do not generate E: coordinate " + std::to_string(i) + " is uncovered");

  // T restricted to J_u multiplies the coordinates of the support; the union
  // of these finite spectra is closed.
  std::vector<Complex> values;
  for (const auto& g : generators)
    for (std::size_t i : g.support()) values.push_back(t[i]);
  const auto lattice = CoordinateLattice::max_norm(values.size());
  ComplexVector symbol(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) symbol[Eigen::Index(k)] = values[k];
  Spectrum merged = spectrum(CentralOperator(lattice, std::move(symbol)));
  merged.label.clear();
  merged.multiplicity.clear();
  return merged;
}

LatticeValuedMeasure global_spectral_measure(const LatticePtr& lattice) {
  const std::size_t n = lattice->dim();
  std::vector<RealVector> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(RealVector::Unit(Eigen::Index(n), Eigen::Index(i)));
  return {FiniteMeasurableSpace::discrete(n), centre_lattice(n), std::move(values)};
}

// ---------------------------------------------------------------------------

OperatorSpectralMeasure::OperatorSpectralMeasure(CentralOperator base, Spectrum sigma, LatticeValuedMeasure measure)
    : base_(std::move(base)), sigma_(std::move(sigma)), measure_(std::move(measure)) {
  if (measure_.space().size() != sigma_.size()) throw StructuralError("spectral measure lives on the wrong space");
}

CentralOperator OperatorSpectralMeasure::projection(std::size_t k) const {
  return {base_.lattice(), measure_.atom_value(k).cast<Complex>()};
}

CentralOperator OperatorSpectralMeasure::projection(const PointSet& values) const {
  return {base_.lattice(), measure_(values).cast<Complex>()};
}

OperatorSpectralMeasure build_mu_T(const CentralOperator& t, SpectrumOptions options) {
  Spectrum sigma = spectrum(t, options);
  std::vector<std::string> labels;
  labels.reserve(sigma.size());
  for (Complex l : sigma.attained) labels.push_back(format_complex(l));
  const FiniteMeasurableSpace target(sigma.size(),
                                     [&] {
                                       std::vector<std::vector<std::size_t>> atoms(sigma.size());
                                       for (std::size_t k = 0; k < sigma.size(); ++k) atoms[k] = {k};
                                       return atoms;
                                     }(),
                                     std::move(labels));
  // mu_T(Delta) = mu((T^)^-1(Delta)).
  LatticeValuedMeasure measure = image_measure(global_spectral_measure(t.lattice()), sigma.label, target);
  return {t, std::move(sigma), std::move(measure)};
}

SpectralMeasureReport verify_spectral_measure(const OperatorSpectralMeasure& mu_t, double tol) {
  SpectralMeasureReport report;
  const std::size_t m = mu_t.size();
  const auto n = static_cast<Eigen::Index>(mu_t.base().dim());
  const auto& mu = mu_t.measure();

  report.idempotent_positive = true;
  report.pairwise_disjoint = true;
  RealVector sum = RealVector::Zero(n);
  ComplexVector recon = ComplexVector::Zero(n);
  for (std::size_t k = 0; k < m; ++k) {
    const RealVector& p = mu.atom_value(k);
    report.idempotent_positive = report.idempotent_positive && (p.array() >= 0.0).all() &&
                                 max_deviation(p.cwiseProduct(p), p) <= tol;
    for (std::size_t l = k + 1; l < m; ++l)
      report.pairwise_disjoint = report.pairwise_disjoint && mu.atom_value(l).cwiseProduct(p).cwiseAbs().maxCoeff() <= tol;
    sum += p;
    recon += mu_t.spectrum().attained[k] * p.cast<Complex>();
  }
  report.sums_to_identity = max_deviation(sum, RealVector::Ones(n)) <= tol;
  report.reconstruction_deviation = max_deviation(recon, mu_t.base().symbol());

  report.positive_on_open = true;
  for (std::size_t k = 0; k < m; ++k)
    report.positive_on_open = report.positive_on_open && mu.atom_value(k).maxCoeff() > 0.0;

  // Product law on pairs of subsets of sigma(T).
  auto subset = [&](std::uint64_t mask) {
    PointSet s(m, false);
    for (std::size_t k = 0; k < m; ++k) s[k] = (mask >> k) & 1U;
    return s;
  };
  report.product_law = true;
  auto check_pair = [&](const PointSet& a, const PointSet& b) {
    PointSet both(m);
    for (std::size_t k = 0; k < m; ++k) both[k] = a[k] && b[k];
    return max_deviation(mu(both), RealVector(mu(a).cwiseProduct(mu(b)))) <= tol;
  };
  if (m <= 8) {
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t a = 0; a < limit && report.product_law; ++a)
      for (std::uint64_t b = a; b < limit && report.product_law; ++b) report.product_law = check_pair(subset(a), subset(b));
  } else {
    Rng rng(0x5ec7 + m);
    for (int s = 0; s < 256 && report.product_law; ++s) {
      PointSet a(m), b(m);
      for (std::size_t k = 0; k < m; ++k) {
        a[k] = rng.coin();
        b[k] = rng.coin();
      }
      report.product_law = check_pair(a, b);
    }
  }
  return report;
}

UniquenessOracleResult enumerate_admissible_measures(const CentralOperator& t, const Spectrum& sigma,
                                                     std::size_t max_candidates) {
  const std::size_t n = t.dim();
  const std::size_t m = sigma.size();
  if (m == 0) throw PreconditionError("empty spectrum");
  double count = std::pow(double(m), double(n));
  if (count > double(max_candidates)) throw PreconditionError("enumeration exceeds the candidate budget");

  // A unital spectral measure with 0/1 diagonal values is a partition of the
  // coordinates into blocks labelled by spectrum values (empty blocks
  // allowed), i.e., an assignment coordinate -> spectrum position.
  const FiniteMeasurableSpace space = FiniteMeasurableSpace::discrete(m);
  std::vector<ExactComplex> id_table(m);
  for (std::size_t k = 0; k < m; ++k) id_table[k] = to_exact(sigma.attained[k]);
  std::vector<ExactComplex> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = to_exact(t[i]);
  const Rational one(1), zero(0);

  UniquenessOracleResult result;
  std::vector<std::size_t> assignment(n, 0);
  for (;;) {
    std::vector<std::vector<Rational>> values(m, std::vector<Rational>(n, zero));
    for (std::size_t i = 0; i < n; ++i) values[assignment[i]][i] = one;
    const ExactMeasure nu(space, n, std::move(values));
    ++result.candidates;

    bool unital = true;
    for (std::size_t i = 0; i < n && unital; ++i) {
      Rational s = 0;
      for (std::size_t k = 0; k < m; ++k) s += nu.atom_value(k)[i];
      unital = s == one;
    }
    if (unital && is_spectral_exact(nu) && integrate_exact(id_table, nu) == target) {
      ++result.admissible;
      result.matches.push_back(assignment);
    }

    std::size_t pos = 0;
    while (pos < n && ++assignment[pos] == m) assignment[pos++] = 0;
    if (pos == n) break;
  }
  return result;
}

bool vanishing_lemma_holds(const OperatorSpectralMeasure& mu_t, const std::vector<PointSet>& blocks,
                           const ComplexElement& z) {
  const std::size_t m = mu_t.size();
  PointSet all(m, false);
  bool each_zero = true;
  for (const auto& b : blocks) {
    if (b.size() != m) throw StructuralError("vanishing lemma: block has the wrong size");
    for (std::size_t k = 0; k < m; ++k) {
      if (b[k] && all[k]) throw PreconditionError("vanishing lemma: blocks are not pairwise disjoint");
      all[k] = all[k] || b[k];
    }
    each_zero = each_zero && mu_t.projection(b).apply(z) == ComplexElement::zero(z.lattice());
  }
  const bool union_zero = mu_t.projection(all).apply(z) == ComplexElement::zero(z.lattice());
  return union_zero == each_zero;
}

// ---------------------------------------------------------------------------

ScalarFunction builtin_function(std::string_view name) {
  using R = std::optional<Complex>;
  if (name == "identity") return [](Complex z) -> R { return z; };
  if (name == "conj") return [](Complex z) -> R { return std::conj(z); };
  if (name == "abs") return [](Complex z) -> R { return std::abs(z); };
  if (name == "sqrt") return [](Complex z) -> R { return z.imag() == 0.0 && z.real() >= 0.0 ? Complex(std::sqrt(z.real())) : std::sqrt(z); };
  if (name == "square") return [](Complex z) -> R { return z * z; };
  if (name == "exp") return [](Complex z) -> R { return std::exp(z); };
  if (name == "one") return [](Complex) -> R { return Complex(1.0); };
  if (name == "zero") return [](Complex) -> R { return Complex(0.0); };
  if (name == "inverse") return [](Complex z) -> R {
    if (z == Complex{}) return std::nullopt;
    return 1.0 / z;
  };
  if (name == "real") return [](Complex z) -> R { return z.real(); };
  if (name == "imag") return [](Complex z) -> R { return z.imag(); };
  if (name == "phase") return [](Complex z) -> R { return z == Complex{} ? Complex(1.0) : z / std::abs(z); };
  if (name == "indicator_nonzero") return [](Complex z) -> R { return z == Complex{} ? 0.0 : 1.0; };
  throw DomainError("unknown builtin function '" + std::string(name) + "'");
}

std::vector<std::string> builtin_function_names() {
  return {"identity", "conj", "abs", "sqrt", "square", "exp", "one", "zero", "inverse", "real", "imag", "phase",
          "indicator_nonzero"};
}

MeasurableFunction tabulate(const OperatorSpectralMeasure& mu_t, const ScalarFunction& f) {
  ComplexVector table(static_cast<Eigen::Index>(mu_t.size()));
  for (std::size_t k = 0; k < mu_t.size(); ++k) {
    const Complex lambda = mu_t.spectrum().attained[k];
    const auto v = f(lambda);
    if (!v) throw DomainError("function is undefined at spectrum value " + format_complex(lambda));
    table[Eigen::Index(k)] = *v;
  }
  return {mu_t.space(), std::move(table)};
}

CentralOperator rho_T(const OperatorSpectralMeasure& mu_t, const MeasurableFunction& f) {
  const ComplexElement integral = integrate(f, mu_t.measure());
  return {mu_t.base().lattice(), integral.values()};
}

CentralOperator rho_T(const OperatorSpectralMeasure& mu_t, const ScalarFunction& f) {
  return rho_T(mu_t, tabulate(mu_t, f));
}

CentralOperator kernel_projection(const OperatorSpectralMeasure& mu_t, const MeasurableFunction& f) {
  PointSet zeros(mu_t.size(), false);
  for (std::size_t k = 0; k < mu_t.size(); ++k) zeros[k] = f(k) == Complex{};
  return mu_t.projection(zeros);
}

CalculusReport verify_calculus(const OperatorSpectralMeasure& mu_t, const MeasurableFunction& f,
                               const MeasurableFunction& g, double tol) {
  CalculusReport report;
  const auto& space = mu_t.space();
  const auto& t = mu_t.base();
  const CentralOperator rf = rho_T(mu_t, f);
  const CentralOperator rg = rho_T(mu_t, g);

  const MeasurableFunction fg(space, f.table().cwiseProduct(g.table()));
  report.multiplicative_deviation = max_deviation(rho_T(mu_t, fg).symbol(), (rf * rg).symbol());
  report.star_deviation = max_deviation(rho_T(mu_t, f.conj()).symbol(), rf.conj().symbol());
  report.unit_deviation =
      max_deviation(rho_T(mu_t, MeasurableFunction::constant(space, 1.0)).symbol(), ComplexVector::Ones(t.symbol().size()));
  const MeasurableFunction id(space, spectrum_values(mu_t.spectrum()));
  report.identity_deviation = max_deviation(rho_T(mu_t, id).symbol(), t.symbol());
  report.modulus_deviation = max_deviation(rho_T(mu_t, f.abs()).symbol(), rf.modulus().symbol());

  // int f dmu_T = int f o T^ dmu over the structure space.
  const LatticeValuedMeasure mu = global_spectral_measure(t.lattice());
  const MeasurableFunction composed = pullback(f, mu_t.spectrum().label, mu.space());
  report.image_measure_deviation = max_deviation(integrate(f, mu_t.measure()).values(), integrate(composed, mu).values());

  // sigma(rho(f)) = f(sigma(T)).
  const Spectrum image = spectrum(rf);
  std::vector<Complex> mapped(f.table().data(), f.table().data() + f.table().size());
  std::sort(mapped.begin(), mapped.end(), lex_less);
  mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
  report.spectral_mapping = mapped == image.attained;

  // ker rho(f) against an LU null space of the dense matrix.
  const CentralOperator p = kernel_projection(mu_t, f);
  const ComplexMatrix rm = rf.matrix();
  Eigen::FullPivLU<ComplexMatrix> lu(rm);
  lu.setThreshold(std::numeric_limits<double>::min());
  const auto kernel_dim = static_cast<std::size_t>(lu.dimensionOfKernel());
  std::size_t rank_p = 0;
  for (Eigen::Index i = 0; i < p.symbol().size(); ++i) rank_p += p.symbol()[i] == Complex{1.0} ? 1 : 0;
  bool kernel_ok = kernel_dim == rank_p && (rm * p.matrix()).cwiseAbs().maxCoeff() == 0.0;
  if (kernel_ok && kernel_dim > 0) {
    const ComplexMatrix basis = lu.kernel();
    kernel_ok = scaled_matrix_deviation(p.matrix() * basis, basis) <= tol;
  }
  report.kernel_formula = kernel_ok;

  bool null_ae = true;
  for (std::size_t k = 0; k < mu_t.size(); ++k)
    if (mu_t.measure().atom_value(k).maxCoeff() > 0.0 && f(k) != Complex{}) null_ae = false;
  report.zero_iff_null = (rf.symbol().cwiseAbs().maxCoeff() == 0.0) == null_ae;
  return report;
}

// ---------------------------------------------------------------------------

DominatedConvergenceReport dominated_convergence_on_values(const ComplexVector& values,
                                                           const FunctionSequence& sequence,
                                                           const ScalarFunction& limit, double bound,
                                                           const ComplexVector& z, bool uniform) {
  if (z.size() != values.size()) throw StructuralError("dominated convergence: z has the wrong dimension");
  if (sequence.length == 0) throw PreconditionError("dominated convergence: empty function sequence");
  const Eigen::Index n = values.size();
  const std::size_t length = sequence.length;

  ComplexVector f_limit(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = limit(values[i]);
    if (!v) throw DomainError("limit function is undefined at " + format_complex(values[i]));
    f_limit[i] = *v;
  }
  std::vector<ComplexVector> terms(length, ComplexVector(n));
  std::vector<RealVector> gaps(length, RealVector(n));
  for (std::size_t m = 0; m < length; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto v = sequence.term(m + 1, values[i]);
      if (!v) throw DomainError("f_" + std::to_string(m + 1) + " is undefined at " + format_complex(values[i]));
      if (std::abs(*v) > bound * (1.0 + kExactTolerance))
        throw PreconditionError("f_" + std::to_string(m + 1) + " exceeds the declared uniform bound at " +
                                format_complex(values[i]));
      terms[m][i] = *v;
      gaps[m][i] = std::abs(*v - f_limit[i]);
    }
  }

  const double tail_floor = sequence.tail ? sequence.tail->bound(length + 1) : 0.0;
  DominatedConvergenceReport report;
  auto& witness = report.operator_witness;
  witness.claim = "rho_T(f_n) -> rho_T(f) in sigma-order";
  witness.tail = sequence.tail;
  witness.dominating.assign(length, RealVector(n));
  RealVector running = RealVector::Constant(n, tail_floor);
  for (std::size_t m = length; m-- > 0;) {
    running = running.cwiseMax(gaps[m]);
    witness.dominating[m] = uniform ? RealVector::Constant(n, running.size() ? running.maxCoeff() : 0.0) : running;
  }
  report.operator_verdict = check_witness(terms, f_limit, witness);

  ConvergenceWitness vector_witness;
  vector_witness.claim = "rho_T(f_n) z -> rho_T(f) z in sigma-order";
  const RealVector zmod = modulus(z);
  const double zsup = n ? zmod.maxCoeff() : 0.0;
  if (sequence.tail) {
    vector_witness.tail = TailRule{[b = sequence.tail->bound, zsup](std::size_t k) { return b(k) * zsup; },
                                   "tail rule scaled by max |z|"};
  }
  std::vector<ComplexVector> applied(length);
  for (std::size_t m = 0; m < length; ++m) {
    applied[m] = terms[m].cwiseProduct(z);
    vector_witness.dominating.push_back(witness.dominating[m].cwiseProduct(zmod));
  }
  report.vector_verdict = check_witness(applied, ComplexVector(f_limit.cwiseProduct(z)), vector_witness);
  report.holds = report.operator_verdict.holds && report.vector_verdict.holds;
  return report;
}

DominatedConvergenceReport dominated_convergence_on_values(const ComplexVector& values,
                                                           const FunctionSequence& sequence,
                                                           const ScalarFunction& limit, double bound,
                                                           const ComplexVector& z) {
  return dominated_convergence_on_values(values, sequence, limit, bound, z, false);
}

DominatedConvergenceReport dominated_convergence_calculus(const OperatorSpectralMeasure& mu_t,
                                                          const FunctionSequence& sequence,
                                                          const ScalarFunction& limit, double bound,
                                                          const ComplexElement& z) {
  // Every spectrum value of an atomic operator carries mu_T mass, so the
  // occupied values are all symbol entries; the witness is a multiple of I.
  return dominated_convergence_on_values(mu_t.base().symbol(), sequence, limit, bound, z.values(), true);
}

// ---------------------------------------------------------------------------

EigenExpansion eigen_expansion(const OperatorSpectralMeasure& mu_t) {
  EigenExpansion expansion;
  const auto& t = mu_t.base();
  const auto n = t.symbol().size();
  ComplexVector recon = ComplexVector::Zero(n);
  ComplexVector ident = ComplexVector::Zero(n);
  for (std::size_t k = 0; k < mu_t.size(); ++k) {
    EigenComponent c{mu_t.spectrum().attained[k], mu_t.projection(k)};
    recon += c.value * c.projection.symbol();
    ident += c.projection.symbol();
    expansion.components.push_back(std::move(c));
  }
  expansion.reconstruction_deviation = max_deviation(recon, t.symbol());
  expansion.identity_deviation = max_deviation(ident, ComplexVector::Ones(n));
  return expansion;
}

namespace {
const CentralOperator& expansion_base_check(const EigenExpansion& e, const ComplexElement& z) {
  if (e.components.empty()) throw PreconditionError("empty eigen expansion");
  if (e.components.front().projection.dim() != z.dim()) throw StructuralError("element dimension mismatch");
  return e.components.front().projection;
}

CentralOperator reassemble(const EigenExpansion& e) {
  CentralOperator t = 0.0 * e.components.front().projection;
  for (const auto& c : e.components) t = t + c.value * c.projection;
  return t;
}
}  // namespace

ComponentReport decompose(const EigenExpansion& expansion, const ComplexElement& z) {
  expansion_base_check(expansion, z);
  const CentralOperator t = reassemble(expansion);
  ComponentReport report;
  ComplexElement sum = ComplexElement::zero(z.lattice());
  for (const auto& c : expansion.components) {
    ComplexElement zk = c.projection.apply(z);
    const ComplexElement residual = t.apply(zk) - c.value * zk;
    report.kernel_residual = std::max(report.kernel_residual, modulus(residual).maxCoeff());
    sum = sum + zk;
    report.components.push_back(std::move(zk));
  }
  report.reassembly_deviation = max_deviation(sum.values(), z.values());
  return report;
}

UniquenessReport check_component_uniqueness(const EigenExpansion& expansion, const ComplexElement& z,
                                            const std::vector<ComplexElement>& claimed, double tol) {
  expansion_base_check(expansion, z);
  UniquenessReport report;
  if (claimed.size() != expansion.components.size()) return report;
  const CentralOperator t = reassemble(expansion);
  ComplexElement sum = ComplexElement::zero(z.lattice());
  bool valid = true;
  for (std::size_t k = 0; k < claimed.size(); ++k) {
    const auto& w = claimed[k];
    const Complex lambda = expansion.components[k].value;
    const double scale = std::max({1.0, std::abs(lambda), t.order_unit_norm()}) * std::max(1.0, modulus(w).maxCoeff());
    valid = valid && modulus(t.apply(w) - lambda * w).maxCoeff() <= tol * scale;
    sum = sum + w;
  }
  report.claim_valid = valid && max_deviation(sum.values(), z.values()) <= tol;
  if (!report.claim_valid) return report;
  report.matches_projections = true;
  for (std::size_t k = 0; k < claimed.size(); ++k) {
    const ComplexElement pz = expansion.components[k].projection.apply(z);
    report.matches_projections = report.matches_projections && max_deviation(pz.values(), claimed[k].values()) <= tol;
  }
  return report;
}

MinimalPolynomialReport minimal_polynomial(const OperatorSpectralMeasure& mu_t, double tol) {
  MinimalPolynomialReport report;
  report.roots = mu_t.spectrum().attained;
  report.degree = report.roots.size();
  report.coefficients = {Complex(1.0)};
  for (Complex r : report.roots) {
    std::vector<Complex> next(report.coefficients.size() + 1, Complex{});
    for (std::size_t k = 0; k < report.coefficients.size(); ++k) {
      next[k + 1] += report.coefficients[k];
      next[k] -= r * report.coefficients[k];
    }
    report.coefficients = std::move(next);
  }

  const ComplexMatrix tm = mu_t.base().matrix();
  const auto n = tm.rows();
  const double norm = mu_t.base().order_unit_norm();
  auto product = [&](std::optional<std::size_t> skip) {
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    double scale = 1.0;
    for (std::size_t k = 0; k < report.roots.size(); ++k) {
      if (skip && *skip == k) continue;
      p = p * (tm - report.roots[k] * ComplexMatrix::Identity(n, n));
      scale *= norm + std::abs(report.roots[k]);
    }
    return std::make_pair(p, std::max(scale, std::numeric_limits<double>::min()));
  };
  const auto [p, scale] = product(std::nullopt);
  report.residual = p.cwiseAbs().maxCoeff() / scale;
  report.annihilates = report.residual <= tol;
  report.minimal = true;
  for (std::size_t k = 0; k < report.roots.size(); ++k)
    report.minimal = report.minimal && product(k).first.cwiseAbs().maxCoeff() > 0.0;
  return report;
}

EigenQuery eigen_query(const OperatorSpectralMeasure& mu_t, Complex lambda, double tol) {
  const auto k = mu_t.spectrum().find(lambda, tol);
  if (!k) return {false, false, false, 0.0 * CentralOperator::identity(mu_t.base().lattice())};
  CentralOperator p = mu_t.projection(*k);
  const bool nonzero = p.symbol().cwiseAbs().maxCoeff() > 0.0;
  // A finite spectrum has only isolated points.
  return {true, nonzero, true, std::move(p)};
}

// ---------------------------------------------------------------------------

StepApproximation freudenthal_approx(const OperatorSpectralMeasure& mu_t, double eps, StepMode mode) {
  if (!(eps > 0.0)) throw DomainError("step approximation needs eps > 0");
  const auto& values = mu_t.spectrum().attained;
  const std::size_t m = values.size();

  std::vector<std::size_t> centre_of(m);
  std::vector<std::size_t> centres;
  if (mode == StepMode::exact) {
    centres.resize(m);
    std::iota(centres.begin(), centres.end(), std::size_t{0});
    std::iota(centre_of.begin(), centre_of.end(), std::size_t{0});
  } else {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(values[a]) < std::abs(values[b]); });
    for (std::size_t k : order) {
      const bool covered = std::any_of(centres.begin(), centres.end(),
                                       [&](std::size_t c) { return std::abs(values[k] - values[c]) <= eps; });
      if (!covered) centres.push_back(k);
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < centres.size(); ++c)
        if (std::abs(values[k] - values[centres[c]]) < std::abs(values[k] - values[centres[best]])) best = c;
      centre_of[k] = best;
    }
  }

  StepApproximation approx;
  CentralOperator sum = 0.0 * CentralOperator::identity(mu_t.base().lattice());
  for (std::size_t c = 0; c < centres.size(); ++c) {
    PointSet cell(m, false);
    for (std::size_t k = 0; k < m; ++k) cell[k] = (mode == StepMode::exact ? centre_of[k] == c : centre_of[k] == c);
    CentralOperator q = mu_t.projection(cell);
    approx.coefficients.push_back(values[centres[c]]);
    sum = sum + values[centres[c]] * q;
    approx.projections.push_back(std::move(q));
  }
  approx.error = (mu_t.base() - sum).order_unit_norm();
  return approx;
}

// ---------------------------------------------------------------------------

CommutantReport commutant_check(const OperatorSpectralMeasure& mu_t, const RegularOperator& xi, double tol,
                                std::uint64_t seed) {
  const auto& t = mu_t.base();
  if (xi.dim() != t.dim()) throw StructuralError("commutant_check: dimension mismatch");
  CommutantReport report;
  const ComplexMatrix& x = xi.entries();
  const auto& space = mu_t.space();

  report.deviations[0] = commutator_deviation(t.matrix(), x);
  report.deviations[1] = commutator_deviation(t.conj().matrix(), x);

  const ComplexVector lambdas = spectrum_values(mu_t.spectrum());
  for (std::size_t k = 0; k <= t.dim(); ++k) {
    const ComplexVector pow_id = lambdas.unaryExpr([k](Complex l) { return std::pow(l, static_cast<int>(k)); });
    for (const ComplexVector& table : {pow_id, ComplexVector(pow_id.conjugate())}) {
      const CentralOperator r = rho_T(mu_t, MeasurableFunction(space, table));
      report.deviations[2] = std::max(report.deviations[2], commutator_deviation(r.matrix(), x));
    }
  }
  for (std::size_t k = 0; k < mu_t.size(); ++k)
    report.deviations[3] = std::max(report.deviations[3], commutator_deviation(mu_t.projection(k).matrix(), x));

  Rng rng(seed);
  for (int s = 0; s < 4; ++s) {
    ComplexVector table(lambdas.size());
    for (Eigen::Index k = 0; k < table.size(); ++k) table[k] = rng.unit_disc();
    const CentralOperator r = rho_T(mu_t, MeasurableFunction(space, table));
    report.deviations[4] = std::max(report.deviations[4], commutator_deviation(r.matrix(), x));
  }
  for (int c = 0; c < 5; ++c) report.conditions[c] = report.deviations[c] <= tol;

  const double xscale = std::max(1.0, x.cwiseAbs().maxCoeff());
  report.block_supported = true;
  const auto& label = mu_t.spectrum().label;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (label[std::size_t(i)] != label[std::size_t(j)] && std::abs(x(i, j)) > tol * xscale)
        report.block_supported = false;
  return report;
}

}  // namespace centrelat
