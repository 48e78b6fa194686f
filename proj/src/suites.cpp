#include "centrelat/suites.hpp"

#include "centrelat/generate.hpp"
#include "centrelat/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

namespace centrelat::suites {

namespace {

const std::vector<std::string> kSuites{"cstar",    "norms",    "fpr",     "polar", "localize",  "integral",
                                       "riesz",    "spectral", "calculus", "eigen", "commutant", "compactness"};

struct Atomic {
  LatticePtr lattice;
  CentralOperator t;
  CentralOperator s;
  RegularOperator x;
  ComplexElement z;
  RealVector u;
  LatticeValuedMeasure measure;
  json mu_t;
  std::uint64_t seed;
};

Atomic load_atomic(const json& inst) {
  const LatticePtr lattice = io::lattice_from(inst.at("lattice"));
  return {lattice,
          io::central_from(inst.at("T"), lattice),
          io::central_from(inst.at("S"), lattice),
          io::regular_from(inst.at("X"), lattice),
          io::element_from(inst.at("z"), lattice),
          io::real_vector_from(inst.at("u")),
          io::measure_from(inst.at("measure"), lattice),
          inst.value("mu_T", json()),
          inst.value("seed", std::uint64_t{1})};
}

class Sink {
 public:
  Sink(std::string suite, std::string digest) : suite_(std::move(suite)), digest_(std::move(digest)) {}

  void add(std::string tag, std::string check, bool pass, double dev = 0.0, json witness = json::object()) {
    out_.push_back({suite_, std::move(tag), digest_, std::move(check), pass, std::isfinite(dev) ? dev : 1e300,
                    std::move(witness)});
  }
  /// Pass iff dev <= tol.
  void within(std::string tag, std::string check, double dev, double tol, json witness = json::object()) {
    add(std::move(tag), std::move(check), dev <= tol, dev, std::move(witness));
  }
  std::vector<Record> take() { return std::move(out_); }

 private:
  std::string suite_;
  std::string digest_;
  std::vector<Record> out_;
};

double symbol_deviation(const CentralOperator& a, const CentralOperator& b) {
  return max_deviation(a.symbol(), b.symbol());
}

/// max over i of (a_i - b_i)_+ scaled.
double excess(const RealVector& a, const RealVector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    worst = std::max(worst, (a[i] - b[i]) / std::max({1.0, std::abs(a[i]), std::abs(b[i])}));
  return worst;
}

json complex_list(const std::vector<Complex>& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(io::to_json(z));
  return out;
}

// --- cstar ------------------------------------------------------------------

void cstar(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const GelfandReport g = verify_gelfand(a.s, a.t);
  const double tol = c.tol.exact;
  sink.within("C*-identity", "||T conj(T)|| = ||T||^2", g.cstar_deviation, tol,
              {{"norm", a.t.order_unit_norm()}});
  sink.within("Gelfand isometry", "||T|| = sup |T^|", g.isometry_deviation, tol);
  sink.within("Gelfand *-map", "conj(T)^ = conj(T^)", g.star_deviation, tol);
  sink.within("Gelfand multiplicativity", "(ST)^ = S^ T^", g.multiplicative_deviation, tol);
  sink.within("Gelfand unit", "I^ = 1", g.unit_deviation, tol);
}

// --- norms ------------------------------------------------------------------

void norms_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const NormReport n = norms(a.t, 1000, a.seed, tol);
  const double over = std::max(0.0, n.sampled_max_ratio - n.order_unit) / std::max(1.0, n.order_unit);
  sink.add("norm coincidence", "order unit = operator = regular norm, attained at a basis vector",
           n.certified && n.regular == n.order_unit,
           std::max(over, deviation(n.attained_ratio, n.order_unit)),
           {{"order_unit", n.order_unit},
            {"attaining_index", n.attaining_index},
            {"attained_ratio", n.attained_ratio},
            {"sampled_max_ratio", n.sampled_max_ratio},
            {"samples", n.samples}});

  const double mult = std::max(symbol_deviation((a.s * a.t).modulus(), a.s.modulus() * a.t.modulus()),
                               symbol_deviation((a.t * a.t.conj()).modulus(), a.t.modulus() * a.t.modulus()));
  sink.within("modulus multiplicativity", "|ST| = |S||T| and |T conj T| = |T|^2", mult, tol);

  const RealVector mz = modulus(a.z);
  const RealVector expected = modulus(a.t.symbol()).cwiseProduct(mz);
  const ComplexElement zmod = ComplexElement::real(a.lattice, mz);
  double four = 0.0;
  for (const RealVector& got : {modulus(a.t.apply(a.z)), modulus(a.t.conj().apply(a.z)), modulus(a.t.modulus().apply(a.z)),
                                modulus(a.t.apply(a.z.conj())), modulus(a.t.apply(zmod))})
    four = std::max(four, max_deviation(got, expected));
  sink.within("four equalities", "|Tz| = |T||z| under conj and modulus substitutions", four, tol);

  const RealVector dense = modulus(a.x.apply(a.z));
  const RealVector bound = operator_modulus(a.x).entries().real() * mz;
  sink.within("dense modulus inequality", "|Xz| <= |X||z|", excess(dense, bound), tol);

  const OperatorNormBounds b = operator_norm_bounds(a.x, 200, a.seed);
  sink.add("dense norm bounds", "sampled lower bound <= row-sum upper bound",
           b.sampled_lower <= b.row_sum_upper * (1.0 + tol), 0.0,
           {{"lower", b.sampled_lower}, {"upper", std::isfinite(b.row_sum_upper) ? json(b.row_sum_upper) : json("inf")}});

  const RealVector grid = oracle::phase_grid_modulus(a.z.re(), a.z.im(), c.phase_grid_bits);
  sink.within("modulus oracle", "closed-form modulus vs sup over phases", max_deviation(mz, grid), c.tol.oracle);

  Rng rng(a.seed ^ 0x1a77);
  sink.add("lattice norm", "|x| <= |y| implies ||x|| <= ||y|| (spot check)", spot_check_lattice_norm(*a.lattice, rng));
}

// --- fpr --------------------------------------------------------------------

void fpr_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const auto n = static_cast<Eigen::Index>(a.t.dim());
  ComplexMatrix pattern = a.x.entries();
  std::optional<std::pair<Eigen::Index, Eigen::Index>> outside;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (a.s.symbol()[i] != a.t.symbol()[j]) {
        pattern(i, j) = 0.0;
        if (!outside) outside = {i, j};
      }
  const RegularOperator xp(a.lattice, pattern);
  const FprVerdict v = fpr_check(a.s, a.t, xp, tol);
  sink.add("FPR transfer", "SX = XT implies conj(S) X = X conj(T)",
           v.commutes && v.conjugate_commutes && v.implication_holds && v.entrywise_consistent,
           std::max(v.commutator_deviation, v.conjugate_deviation),
           {{"commutes", v.commutes}, {"conjugate_commutes", v.conjugate_commutes}});

  const FprVerdict raw = fpr_check(a.s, a.t, a.x, tol);
  sink.add("FPR implication", "implication and entrywise form on the raw operator",
           raw.implication_holds && raw.entrywise_consistent, raw.conjugate_deviation,
           {{"commutes", raw.commutes}});

  if (outside) {
    ComplexMatrix faulty = pattern;
    faulty(outside->first, outside->second) = 1.0;
    const FprVerdict f = fpr_check(a.s, a.t, RegularOperator(a.lattice, faulty), tol);
    json w = {{"injected", {outside->first, outside->second}}};
    if (f.first_violation) w["reported"] = {f.first_violation->first, f.first_violation->second};
    sink.add("FPR fault detection", "an entry off the commutation pattern breaks SX = XT",
             !f.commutes && f.first_violation.has_value() && f.implication_holds, f.commutator_deviation, w);
  }
}

// --- polar ------------------------------------------------------------------

void polar_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const PolarFactors f = polar(a.t);
  bool shape = true;
  for (Eigen::Index i = 0; i < a.t.symbol().size(); ++i) {
    const Complex p = f.positive.symbol()[i], u = f.unitary.symbol()[i];
    shape = shape && p.imag() == 0.0 && p.real() >= 0.0 && close(std::abs(u), 1.0, tol);
    if (a.t.symbol()[i] == Complex{}) shape = shape && u == Complex(1.0);
  }
  const double dev = std::max(symbol_deviation(f.positive * f.unitary, a.t), symbol_deviation(f.positive, a.t.modulus()));
  sink.add("polar decomposition", "T = PU, P = |T|, |U| = I, U = 1 on the kernel", shape && dev <= tol, dev);

  if (a.s.is_invertible() && a.t.is_invertible()) {
    const PolarFactors st = polar(a.s * a.t), ps = polar(a.s);
    const double m = std::max(symbol_deviation(st.positive, ps.positive * f.positive),
                              symbol_deviation(st.unitary, ps.unitary * f.unitary));
    sink.add("polar homomorphism", "T -> P and T -> U multiplicative on invertibles",
             m <= tol && st.positive.is_invertible() && st.unitary.is_invertible(), m);
  }
}

// --- localize ---------------------------------------------------------------

void localize_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const PrincipalIdeal ideal(a.u);
  const Localization loc = localize(a.t, ideal, c.tol.exact);
  double restriction = 0.0;
  for (std::size_t k = 0; k < loc.support.size(); ++k)
    restriction = std::max(restriction, deviation(loc.symbol[Eigen::Index(k)], a.t[loc.support[k]]));
  sink.add("localisation", "M(T) on J_u commutes with conj and modulus, ||Tu||_u = sup |M(T)|",
           loc.conjugate_compatible && loc.modulus_compatible && loc.isometric && restriction <= c.tol.exact,
           std::max(restriction, deviation(loc.image_ideal_norm, loc.symbol_sup)),
           {{"support", loc.support}, {"ideal_norm", loc.image_ideal_norm}});

  const ComplexElement uz = ComplexElement::real(a.lattice, a.u);
  sink.within("ideal unit", "||u||_u = 1", deviation(ideal_norm(uz, ideal), 1.0), c.tol.exact);
}

// --- integral ---------------------------------------------------------------

void integral_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const auto& mu = a.measure;
  const auto& space = mu.space();
  Rng rng(a.seed ^ 0x171e);
  const MeasurableFunction f = gen::random_function(rng, space);
  const ComplexElement integral = integrate(f, mu);

  // Split each atom level r into r1 + r2 and integrate the refinement.
  auto refined = [&](const RealVector& h) {
    ElementaryFunction phi;
    for (std::size_t at = 0; at < space.atom_count(); ++at) {
      const double r = h[Eigen::Index(space.atoms()[at].front())];
      if (r <= 0.0) continue;
      const double r1 = r * rng.uniform();
      const PointSet set = space.set_of_atoms({at});
      phi.terms.emplace_back(r1, set);
      phi.terms.emplace_back(r - r1, set);
    }
    return integrate_elementary(phi, mu);
  };
  const RealVector re = f.table().real(), im = f.table().imag();
  const RealVector alt_re = refined(re.cwiseMax(0.0)) - refined((-re).cwiseMax(0.0));
  const RealVector alt_im = refined(im.cwiseMax(0.0)) - refined((-im).cwiseMax(0.0));
  sink.within("decomposition independence", "integral independent of the elementary decomposition",
              std::max(max_deviation(alt_re, integral.re()), max_deviation(alt_im, integral.im())), tol);

  const RealVector abs_integral = integrate(f.abs(), mu).re();
  sink.within("triangle inequality", "|int f| <= int |f|", excess(modulus(integral), abs_integral), tol);

  const std::size_t targets = 1 + rng.index(3);
  std::vector<std::size_t> map(space.size());
  for (const auto& atom : space.atoms()) {
    const std::size_t to = rng.index(targets);
    for (std::size_t p : atom) map[p] = to;
  }
  const FiniteMeasurableSpace target = FiniteMeasurableSpace::discrete(targets);
  const LatticeValuedMeasure image = image_measure(mu, map, target);
  const MeasurableFunction g = gen::random_function(rng, target);
  sink.within("change of variables", "int g d(map mu) = int g o map dmu",
              max_deviation(integrate(g, image).values(), integrate(pullback(g, map, space), mu).values()), tol);

  std::vector<std::size_t> left, right;
  for (std::size_t at = 0; at < space.atom_count(); ++at) {
    const double pick = rng.uniform();
    if (pick < 0.4) left.push_back(at);
    else if (pick < 0.8) right.push_back(at);
  }
  std::vector<std::size_t> both = left;
  both.insert(both.end(), right.begin(), right.end());
  const PointSet l = space.set_of_atoms(left), r = space.set_of_atoms(right), lr = space.set_of_atoms(both);
  sink.within("additivity", "mu(A u B) = mu(A) + mu(B) for disjoint A, B",
              max_deviation(mu(lr), RealVector(mu(l) + mu(r))), tol);
  sink.add("empty set", "mu(empty) = 0", mu(PointSet(space.size(), false)).cwiseAbs().maxCoeff() == 0.0);

  // Dominated convergence: f_n = (1 + 1/n) f with u_n = sum_a |f(a)|/n mu(a).
  ConvergenceWitness w;
  std::vector<ComplexVector> values;
  const RealVector mu_abs = abs_integral;
  const double fmax = f.table().cwiseAbs().maxCoeff();
  const double total = mu.total().size() ? mu.total().maxCoeff() : 0.0;
  for (std::size_t n = 1; n <= 64; ++n) {
    const MeasurableFunction fn(space, ComplexVector((1.0 + 1.0 / double(n)) * f.table()));
    values.push_back(integrate(fn, mu).values());
    w.dominating.push_back(mu_abs / double(n));
  }
  w.tail = TailRule{[fmax, total](std::size_t n) { return fmax * total / double(n); }, "max|f| mu(X) / n"};
  const WitnessVerdict v = check_witness(values, integral.values(), w, {c.tol.witness, tol});
  sink.add("dominated convergence", "int f_n -> int f with running-sup witness", v.holds, v.max_excess,
           {{"reason", v.reason}});

  if (space.atom_count() <= 10) {
    const RegularityReport reg = check_regularity(mu);
    sink.add("regularity", "inner and outer regular at every measurable set", reg.inner_regular && reg.outer_regular,
             0.0, {{"sets", reg.sets_checked}});
  }
}

// --- riesz ------------------------------------------------------------------

void riesz_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const auto& mu = a.measure;
  const auto& space = mu.space();
  const auto dim = static_cast<Eigen::Index>(a.lattice->dim());
  RealMatrix w(dim, Eigen::Index(space.size()));
  for (std::size_t p = 0; p < space.size(); ++p) {
    const auto& atom = space.atoms()[space.atom_of(p)];
    w.col(Eigen::Index(p)) = mu.atom_value(space.atom_of(p)) / double(atom.size());
  }
  const PositiveMap pi = [w](const RealVector& f) -> RealVector { return w * f; };
  const LatticeValuedMeasure rep = riesz_represent(pi, space, a.lattice);
  double recovered = 0.0;
  for (std::size_t at = 0; at < space.atom_count(); ++at)
    recovered = std::max(recovered, max_deviation(rep.atom_value(at), mu.atom_value(at)));
  Rng rng(a.seed ^ 0x7e5);
  const RieszReport r = verify_riesz(pi, rep, rng, 100, 64, tol);
  sink.add("Riesz representation", "pi(f) = int f dmu with sup/inf recovery formulas",
           r.representation_deviation <= tol && recovered <= tol && r.sup_formula && r.inf_formula,
           std::max(r.representation_deviation, recovered), {{"sets", r.sets_checked}});

  const LatticeValuedMeasure zero = riesz_represent([dim](const RealVector&) { return RealVector(RealVector::Zero(dim)); },
                                                    space, a.lattice);
  bool all_zero = true;
  for (std::size_t at = 0; at < space.atom_count(); ++at) all_zero = all_zero && zero.atom_value(at).isZero(0.0);
  sink.add("Riesz zero map", "pi = 0 gives the zero measure", all_zero);

  const std::size_t points = 2 + rng.index(5);
  std::vector<std::size_t> sigma(a.lattice->dim());
  for (auto& s : sigma) s = rng.index(points);
  const PositiveMap hom = [sigma, dim](const RealVector& f) {
    RealVector out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) out[i] = f[Eigen::Index(sigma[std::size_t(i)])];
    return out;
  };
  const LatticeValuedMeasure spectral = riesz_represent(hom, FiniteMeasurableSpace::discrete(points), a.lattice);
  const SpectralVerdict sv = is_spectral(spectral, coordinatewise_product, tol);
  sink.add("Riesz homomorphism", "a multiplicative pi yields a spectral measure", sv.spectral, sv.max_deviation);

  bool guarded = false;
  try {
    riesz_represent([w](const RealVector& f) -> RealVector { return -(w * f) - RealVector::Ones(w.rows()); }, space,
                    a.lattice);
  } catch (const PositivityError&) {
    guarded = true;
  }
  sink.add("Riesz positivity", "a map negative on an indicator is rejected", guarded);
}

// --- spectral ---------------------------------------------------------------

std::vector<std::vector<bool>> all_assignments_blocks(std::size_t m, std::uint64_t code, std::size_t& blocks) {
  // code in base (m + 1): digit k = 0 leaves value k out, d > 0 puts it in block d - 1.
  std::vector<std::vector<bool>> out(m, std::vector<bool>(m, false));
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t d = code % (m + 1);
    code /= m + 1;
    if (d > 0) out[d - 1][k] = true;
  }
  std::vector<std::vector<bool>> nonempty;
  for (auto& b : out)
    if (std::find(b.begin(), b.end(), true) != b.end()) nonempty.push_back(std::move(b));
  blocks = nonempty.size();
  return nonempty;
}

void spectral_atomic(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const Spectrum sigma = spectrum(a.t);
  Rng rng(a.seed ^ 0x5bec);

  const std::vector<Complex> eig = oracle::dense_eigenvalues(a.t.matrix(), rng);
  const double h = oracle::hausdorff(sigma.attained, eig) / std::max(1.0, a.t.order_unit_norm());
  sink.within("spectral permanence", "symbol spectrum vs dense eigenvalues", h, c.tol.oracle,
              {{"spectrum", complex_list(sigma.attained)}});

  const SpectralRadiusReport sr = spectral_radius_checks(a.t, sigma, tol);
  sink.add("spectral radius", "r(T) = ||T|| and the real / positive / unimodular equivalences", sr.holds(),
           deviation(sr.radius, sr.norm));

  // Band union over a random cover by three generators.
  const std::size_t n = a.t.dim();
  std::vector<RealVector> gens(3, RealVector::Zero(Eigen::Index(n)));
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (auto& g : gens)
      if (rng.coin(0.4)) {
        g[Eigen::Index(i)] = rng.uniform(0.1, 2.0);
        any = true;
      }
    if (!any) gens[rng.index(3)][Eigen::Index(i)] = 1.0;
  }
  std::vector<PrincipalIdeal> cover;
  for (auto& g : gens)
    if (g.maxCoeff() > 0.0) cover.emplace_back(g);
  std::vector<PrincipalIdeal> basis;
  for (std::size_t i = 0; i < n; ++i) basis.emplace_back(RealVector::Unit(Eigen::Index(n), Eigen::Index(i)));
  const bool band = union_spectrum(a.t, cover).attained == sigma.attained &&
                    union_spectrum(a.t, basis).attained == sigma.attained &&
                    union_spectrum(a.t, {PrincipalIdeal(RealVector::Ones(Eigen::Index(n)))}).attained == sigma.attained;
  sink.add("band union", "closure of the union of restricted spectra = sigma(T)", band, 0.0,
           {{"generators", cover.size()}});

  const LatticeValuedMeasure global = global_spectral_measure(a.lattice);
  const SpectralVerdict gv = is_spectral(global, coordinatewise_product, tol);
  const ComplexElement recon = integrate(MeasurableFunction(global.space(), a.t.symbol()), global);
  const double gdev = max_deviation(recon.values(), a.t.symbol());
  sink.add("global spectral measure", "mu spectral, mu(X) = I, T = int T^ dmu", gv.spectral && global.total().isOnes(0.0) && gdev <= tol,
           gdev);

  const OperatorSpectralMeasure mu_t = build_mu_T(a.t);
  const SpectralMeasureReport mr = verify_spectral_measure(mu_t, tol);
  sink.add("spectral measure mu_T", "projections, disjointness, mu_T(sigma) = I, product law, mu_T > 0, T = sum lambda P",
           mr.holds(tol), mr.reconstruction_deviation);

  if (!a.mu_t.is_null()) {
    std::vector<Complex> stored_values;
    try {
      const LatticeValuedMeasure stored = io::stored_spectral_measure(a.mu_t, n, stored_values);
      const SpectralVerdict sv = is_spectral(stored, coordinatewise_product, tol);
      json w = {{"max_deviation", sv.max_deviation}};
      if (sv.first_failure) w["atoms"] = {sv.first_failure->first, sv.first_failure->second};
      sink.add("spectral measure (stored)", "product_law", sv.spectral, sv.max_deviation, w);
      bool same = stored_values == sigma.attained;
      for (std::size_t k = 0; same && k < mu_t.size(); ++k)
        same = stored.atom_value(k) == mu_t.measure().atom_value(k);
      sink.add("spectral measure (stored)", "stored mu_T equals the rebuilt mu_T", same);
    } catch (const Error& e) {
      sink.add("spectral measure (stored)", "product_law", false, 1.0, {{"error", e.what()}});
    }
  }

  if (n <= 6) {
    const UniquenessOracleResult u = enumerate_admissible_measures(a.t, sigma);
    const bool unique = u.admissible == 1 && u.matches.front() == sigma.label;
    sink.add("mu_T uniqueness", "exactly one admissible measure, equal to mu_T", unique, 0.0,
             {{"candidates", u.candidates}, {"admissible", u.admissible}});
  }

  if (sigma.size() <= 4) {
    const std::size_t m = sigma.size();
    std::uint64_t families = 1;
    for (std::size_t k = 0; k < m; ++k) families *= m + 1;
    const ComplexElement z0 = (CentralOperator::identity(a.lattice) - mu_t.projection(0)).apply(a.z);
    bool ok = true;
    for (std::uint64_t code = 0; code < families && ok; ++code) {
      std::size_t count = 0;
      const auto blocks = all_assignments_blocks(m, code, count);
      ok = vanishing_lemma_holds(mu_t, blocks, a.z) && vanishing_lemma_holds(mu_t, blocks, z0);
    }
    sink.add("vanishing lemma", "mu_T(union D_n) z = 0 iff each mu_T(D_n) z = 0 (all disjoint families)", ok, 0.0,
             {{"families", families}});
  }

  const StepApproximation exact = freudenthal_approx(mu_t, c.eps, StepMode::exact);
  const StepApproximation coarse = freudenthal_approx(mu_t, c.eps, StepMode::coarse);
  auto in_sigma = [&](const StepApproximation& s) {
    return std::all_of(s.coefficients.begin(), s.coefficients.end(), [&](Complex v) { return sigma.find(v).has_value(); });
  };
  sink.add("step approximation", "exact: error 0 with |sigma| terms; coarse: error <= eps, coefficients in sigma",
           exact.error == 0.0 && exact.coefficients.size() == sigma.size() && coarse.error <= c.eps && in_sigma(coarse) &&
               in_sigma(exact),
           coarse.error, {{"coarse_terms", coarse.coefficients.size()}, {"eps", c.eps}});
}

void spectral_sequence(const SequenceCentralOperator& op, Sink& sink, const SuiteConfig& c) {
  try {
    const CertificateReport r = validate_certificate(op);
    json thresholds = json::array();
    for (auto [eps, n] : r.thresholds) thresholds.push_back({eps, n});
    sink.add("sequence certificate", "sup bound, monotone tail, window distances, approached accumulation", true,
             std::max(0.0, r.max_bound_excess), {{"thresholds", thresholds}, {"indices", r.indices_checked}});
  } catch (const CertificateError& e) {
    sink.add("sequence certificate", "sup bound, monotone tail, window distances, approached accumulation", false, 1.0,
             {{"error", e.what()}, {"witness_index", e.witness_index()}});
    return;
  }
  const Spectrum sigma = sequence_spectrum(op);
  bool closed = true;
  for (Complex a : sigma.accumulation) closed = closed && sigma.contains(a);
  sink.add("sequence spectrum", "attained prefix values plus the accumulation set", closed && !sigma.attained.empty(),
           0.0, {{"attained", sigma.attained.size()}, {"accumulation", complex_list(sigma.accumulation)}});

  const SequenceStepApproximation s = freudenthal_approx(op, c.eps);
  sink.add("step approximation", "certified error <= eps, coefficients attained",
           s.error <= c.eps && s.coefficients_in_spectrum, s.error,
           {{"terms", s.coefficients.size()}, {"prefix", s.prefix_terms}});
}

// --- calculus ---------------------------------------------------------------

FunctionSequence make_sequence(std::function<Complex(std::size_t, Complex)> term, std::size_t length,
                               std::function<double(std::size_t)> tail, std::string what) {
  FunctionSequence s;
  s.term = [term](std::size_t n, Complex l) -> std::optional<Complex> { return term(n, l); };
  s.length = length;
  s.tail = TailRule{std::move(tail), std::move(what)};
  return s;
}

void calculus_atomic(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const OperatorSpectralMeasure mu_t = build_mu_T(a.t);
  const auto& space = mu_t.space();
  Rng rng(a.seed ^ 0xca1c);
  ComplexVector ft(static_cast<Eigen::Index>(mu_t.size())), gt(ft.size());
  for (Eigen::Index k = 0; k < ft.size(); ++k) {
    ft[k] = rng.coin(0.3) ? Complex{} : gen::random_scalar(rng);
    gt[k] = gen::random_scalar(rng);
  }
  const CalculusReport r = verify_calculus(mu_t, MeasurableFunction(space, ft), MeasurableFunction(space, gt), tol);
  sink.add("functional calculus", "unital *-homomorphism, rho(id) = T, modulus, image measure", r.holds(tol),
           std::max({r.multiplicative_deviation, r.star_deviation, r.unit_deviation, r.identity_deviation,
                     r.modulus_deviation, r.image_measure_deviation}));
  sink.add("spectral mapping", "sigma(rho(f)) = f(sigma(T)) exactly", r.spectral_mapping);
  sink.add("kernel formula", "ker rho(f) = mu_T({f = 0}) E_C against an LU null space", r.kernel_formula);
  sink.add("null functions", "rho(f) = 0 iff f = 0 mu_T-a.e.", r.zero_iff_null);

  bool builtins = true, guarded = true;
  json skipped = json::array();
  for (const auto& name : builtin_function_names()) {
    const ScalarFunction f = builtin_function(name);
    bool defined = true;
    for (Complex l : mu_t.spectrum().attained) defined = defined && f(l).has_value();
    if (!defined) {
      skipped.push_back(name);
      try {
        rho_T(mu_t, f);
        guarded = false;
      } catch (const DomainError&) {
      }
      continue;
    }
    const CentralOperator rf = rho_T(mu_t, f);
    for (std::size_t i = 0; i < a.t.dim(); ++i) builtins = builtins && rf[i] == *f(a.t[i]);
  }
  sink.add("builtin calculus", "rho(f) has symbol f(symbol) for every builtin f", builtins && guarded, 0.0,
           {{"undefined", skipped}});

  const double norm = a.t.order_unit_norm();
  const ScalarFunction id = builtin_function("identity");
  const std::vector<std::pair<std::string, FunctionSequence>> schedule{
      {"f_n = f", make_sequence([](std::size_t, Complex l) { return l; }, 32, [](std::size_t) { return 0.0; }, "0")},
      {"f_n = lambda + 1/n", make_sequence([](std::size_t n, Complex l) { return l + 1.0 / double(n); }, 64,
                                           [](std::size_t n) { return 1.0 / double(n); }, "1/n")},
      {"f_n = lambda n/(n+1)",
       make_sequence([](std::size_t n, Complex l) { return l * (double(n) / double(n + 1)); }, 64,
                     [norm](std::size_t n) { return norm / double(n + 1); }, "||T||/(n+1)")},
      {"f_n = lambda 1{|lambda| <= n ||T||/4}",
       make_sequence([norm](std::size_t n, Complex l) { return std::abs(l) <= double(n) * norm / 4.0 ? l : Complex{}; },
                     16, [norm](std::size_t n) { return n < 4 ? norm : 0.0; }, "||T|| before n = 4, then 0")}};
  for (const auto& [what, seq] : schedule) {
    const DominatedConvergenceReport d = dominated_convergence_calculus(mu_t, seq, id, norm + 1.0, a.z);
    sink.add("dominated convergence", what, d.holds, std::max(d.operator_verdict.max_excess, d.vector_verdict.max_excess),
             {{"operator", d.operator_verdict.reason}, {"vector", d.vector_verdict.reason}});
  }
  bool bound_guard = false;
  try {
    dominated_convergence_calculus(mu_t, schedule[1].second, id, 0.5 * norm, a.z);
  } catch (const PreconditionError&) {
    bound_guard = true;
  }
  sink.add("dominated convergence", "a violated uniform bound is rejected", bound_guard || norm == 0.0);
}

void calculus_sequence(const SequenceCentralOperator& op, Sink& sink, const SuiteConfig&) {
  const auto& rule = op.spec().rule;
  if (rule.name == "reciprocal" && rule.offset == Complex{} && rule.scale.imag() == 0.0 && rule.scale.real() > 0.0) {
    const DominatedConvergenceReport d = sequence_threshold_convergence(op);
    sink.add("dominated convergence", "chi{lambda > 1/n} -> chi{lambda > 0} a.e. on a coordinate window", d.holds,
             d.operator_verdict.max_excess, {{"operator", d.operator_verdict.reason}, {"vector", d.vector_verdict.reason}});
  }
  const ScalarFunction square = builtin_function("square");
  const double radius = op.sup();
  const SequenceCentralOperator mapped = op.mapped(square, 2.0 * radius);
  try {
    validate_certificate(mapped);
    const Spectrum before = sequence_spectrum(op), after = sequence_spectrum(mapped);
    std::vector<Complex> image;
    std::set<std::pair<double, double>> seen;
    for (Complex l : before.attained) {
      const Complex v = l * l;
      if (seen.insert({v.real(), v.imag()}).second) image.push_back(v);
    }
    bool acc = after.accumulation.size() == before.accumulation.size();
    for (std::size_t k = 0; acc && k < before.accumulation.size(); ++k)
      acc = after.accumulation[k] == before.accumulation[k] * before.accumulation[k];
    sink.add("spectral mapping", "sigma(f(T)) = f(sigma(T)) for f = square, certificate of the image",
             image == after.attained && acc, 0.0, {{"attained", image.size()}});
  } catch (const CertificateError& e) {
    sink.add("spectral mapping", "sigma(f(T)) = f(sigma(T)) for f = square, certificate of the image", false, 1.0,
             {{"error", e.what()}});
  }
}

// --- eigen ------------------------------------------------------------------

void eigen_atomic(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const OperatorSpectralMeasure mu_t = build_mu_T(a.t);
  const EigenExpansion e = eigen_expansion(mu_t);
  sink.within("eigenvalue expansion", "T = sum lambda P_lambda and I = sum P_lambda",
              std::max(e.reconstruction_deviation, e.identity_deviation), tol);

  const ComponentReport d = decompose(e, a.z);
  const double scale = std::max(1.0, a.t.order_unit_norm()) * std::max(1.0, modulus(a.z).maxCoeff());
  sink.within("eigen components", "(T - lambda) P_lambda z = 0 and sum P_lambda z = z",
              std::max(d.kernel_residual / scale, d.reassembly_deviation), tol);

  const UniquenessReport same = check_component_uniqueness(e, a.z, d.components, tol);
  bool alternative_rejected = true;
  if (d.components.size() >= 2) {
    // Move part of z between two components: still sums to z but is not an
    // eigen-decomposition.
    std::vector<ComplexElement> other = d.components;
    const ComplexElement shift = mu_t.projection(0).apply(a.z);
    if (modulus(shift).maxCoeff() > 0.0) {
      other[0] = other[0] - shift;
      other[1] = other[1] + shift;
      alternative_rejected = !check_component_uniqueness(e, a.z, other, tol).claim_valid;
    }
  }
  sink.add("component uniqueness", "a valid decomposition is the projection decomposition",
           same.claim_valid && same.matches_projections && alternative_rejected);

  const MinimalPolynomialReport p = minimal_polynomial(mu_t, 1e-10);
  sink.add("minimal polynomial", "prod (x - lambda) annihilates T, no proper factor does, degree = |sigma|",
           p.annihilates && p.minimal && p.degree == mu_t.size(), p.residual, {{"degree", p.degree}});

  bool queries = true, disjoint = true;
  const auto n = static_cast<Eigen::Index>(a.t.dim());
  for (std::size_t k = 0; k < mu_t.size(); ++k) {
    const Complex l = mu_t.spectrum().attained[k];
    const EigenQuery q = eigen_query(mu_t, l);
    const ComplexMatrix shifted = a.t.matrix() - l * ComplexMatrix::Identity(n, n);
    const std::size_t rank = mu_t.spectrum().multiplicity[k];
    queries = queries && q.in_spectrum && q.is_eigenvalue && q.isolated && q.projection == mu_t.projection(k) &&
              oracle::kernel_dimension(shifted) == rank;
    for (std::size_t j = k + 1; j < mu_t.size(); ++j)
      disjoint = disjoint && (mu_t.projection(k) * mu_t.projection(j)).symbol().isZero(0.0);
  }
  Complex outside = a.t.order_unit_norm() + 1.0;
  const EigenQuery none = eigen_query(mu_t, outside);
  queries = queries && !none.in_spectrum && !none.is_eigenvalue && none.projection.symbol().isZero(0.0);
  sink.add("eigenvalue query", "P_lambda != 0 exactly on sigma(T), ker(T - lambda) = P_lambda E_C", queries);
  sink.add("eigen-band disjointness", "P_lambda P_mu = 0 for lambda != mu", disjoint);
}

void eigen_sequence(const SequenceCentralOperator& op, Sink& sink, const SuiteConfig&) {
  const bool at_zero = std::all_of(op.accumulation().begin(), op.accumulation().end(),
                                   [](Complex a) { return a == Complex{}; });
  if (at_zero) {
    SequenceElement z{[](std::size_t i) { return Complex(1.0 / (double(i) * double(i))); },
                      [](std::size_t n) { return 1.0 / ((double(n) + 1.0) * (double(n) + 1.0)); }};
    const SequenceExpansionReport r = sequence_eigen_expansion(op, z);
    json cps = json::array();
    for (const auto& cp : r.checkpoints) cps.push_back({{"n", cp.n}, {"residual", cp.residual}, {"bound", cp.bound}});
    sink.add("eigenvalue expansion", "partial sums dominated by the witness built from t(n)", r.holds, 0.0,
             {{"checkpoints", cps}, {"operator", r.operator_verdict.reason}, {"vector", r.vector_verdict.reason}});
  }

  const AnnihilationReport ann = sequence_annihilation(op);
  const Spectrum sigma = sequence_spectrum(op);
  const bool finite = set_limit_points(op).empty();
  const bool expected = finite ? ann.degree == sigma.size() : ann.annihilating == 0;
  sink.add("annihilating polynomial", finite ? "finite spectrum: minimal degree = |sigma|"
                                             : "infinite spectrum: no monic polynomial of degree <= 8 annihilates",
           expected, 0.0, {{"candidates", ann.candidates}, {"annihilating", ann.annihilating}});

  bool queries = true;
  for (Complex a : op.accumulation()) {
    const SequenceEigenQuery q = eigen_query(op, a);
    queries = queries && q.in_spectrum && q.is_eigenvalue == !q.indices.empty();
  }
  const SequenceEigenQuery first = eigen_query(op, op(1));
  queries = queries && first.in_spectrum && first.is_eigenvalue;
  sink.add("eigenvalue query", "accumulation points lie in sigma; eigenvalue iff attained", queries);
}

// --- commutant --------------------------------------------------------------

void commutant_suite(const Atomic& a, Sink& sink, const SuiteConfig& c) {
  const double tol = c.tol.exact;
  const OperatorSpectralMeasure mu_t = build_mu_T(a.t);
  const auto& label = mu_t.spectrum().label;
  const auto n = static_cast<Eigen::Index>(a.t.dim());
  Rng rng(a.seed ^ 0xc033);

  ComplexMatrix block = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (label[std::size_t(i)] == label[std::size_t(j)]) block(i, j) = Complex(rng.normal(), rng.normal());
  const ComplexMatrix tm = a.t.matrix();
  const ComplexMatrix poly = tm * tm - 2.0 * tm + 3.0 * ComplexMatrix::Identity(n, n);

  auto report = [&](const std::string& what, const ComplexMatrix& xi, std::optional<bool> expect) {
    const CommutantReport r = commutant_check(mu_t, RegularOperator(a.lattice, xi), tol, a.seed);
    const double worst = *std::max_element(std::begin(r.deviations), std::end(r.deviations));
    const bool ok = r.all_agree() && (!expect || r.conditions[0] == *expect);
    json devs = json::array();
    for (double d : r.deviations) devs.push_back(d);
    sink.add("commutant equivalences", what, ok, worst, {{"commutes", r.conditions[0]}, {"deviations", devs}});
  };
  report("block matrix on the lambda-classes: all five conditions hold", block, true);
  report("polynomial in T: all five conditions hold", poly, true);
  report("dense random operator: the five conditions agree", a.x.entries(),
         mu_t.size() >= 2 ? std::optional<bool>(false) : std::optional<bool>(true));
}

// --- compactness ------------------------------------------------------------

void compactness_sequence(const SequenceCentralOperator& op, Sink& sink) {
  try {
    const CompactnessVerdict v = compactness_check(op);
    const bool consistent = v.compact == (v.accumulation_in_zero && v.finite_multiplicities);
    sink.add("compactness criterion", "compact iff limit points in {0} and finite nonzero multiplicities", consistent,
             0.0, {{"compact", v.compact}, {"reason", v.reason}, {"limit_points", complex_list(v.limit_points)}});
  } catch (const CertificateError& e) {
    sink.add("compactness criterion", "compact iff limit points in {0} and finite nonzero multiplicities", false, 1.0,
             {{"error", e.what()}, {"witness_index", e.witness_index()}});
  }
}

}  // namespace

const std::vector<std::string>& suite_names() { return kSuites; }

bool is_suite(const std::string& name) { return std::find(kSuites.begin(), kSuites.end(), name) != kSuites.end(); }

std::string digest(const json& instance) {
  const std::string text = instance.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Record> run_suite(const std::string& suite, const json& instance, const SuiteConfig& config) {
  Sink sink(suite, digest(instance));
  try {
    const std::string kind = instance.value("kind", std::string("atomic"));
    if (kind == "sequence") {
      const SequenceCentralOperator op(io::sequence_from(instance.at("sequence")));
      if (suite == "spectral") spectral_sequence(op, sink, config);
      else if (suite == "calculus") calculus_sequence(op, sink, config);
      else if (suite == "eigen") eigen_sequence(op, sink, config);
      else if (suite == "compactness") compactness_sequence(op, sink);
    } else {
      const Atomic a = load_atomic(instance);
      if (suite == "cstar") cstar(a, sink, config);
      else if (suite == "norms") norms_suite(a, sink, config);
      else if (suite == "fpr") fpr_suite(a, sink, config);
      else if (suite == "polar") polar_suite(a, sink, config);
      else if (suite == "localize") localize_suite(a, sink, config);
      else if (suite == "integral") integral_suite(a, sink, config);
      else if (suite == "riesz") riesz_suite(a, sink, config);
      else if (suite == "spectral") spectral_atomic(a, sink, config);
      else if (suite == "calculus") calculus_atomic(a, sink, config);
      else if (suite == "eigen") eigen_atomic(a, sink, config);
      else if (suite == "commutant") commutant_suite(a, sink, config);
      else if (suite == "compactness") sink.add("compactness criterion", "atomic operators are compact", is_compact(a.t));
    }
  } catch (const std::exception& e) {
    sink.add("load", "instance could be evaluated", false, 1.0, {{"error", e.what()}});
  }
  return sink.take();
}

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CENTRELAT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) hw = std::min(hw, static_cast<unsigned>(v));
  }
  return hw;
}

SuiteReport run_suites(const std::vector<json>& instances, const std::vector<std::string>& suites,
                       const SuiteConfig& config, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suites = suites;
  std::vector<std::vector<Record>> per_instance(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < instances.size(); k = next++)
      for (const auto& s : suites) {
        auto records = run_suite(s, instances[k], config);
        per_instance[k].insert(per_instance[k].end(), std::make_move_iterator(records.begin()),
                               std::make_move_iterator(records.end()));
      }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(instances.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Deterministic merge: by digest, ties kept in input order.
  std::vector<std::pair<std::string, std::size_t>> order;
  for (std::size_t k = 0; k < instances.size(); ++k) order.emplace_back(digest(instances[k]), k);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [d, k] : order)
    for (auto& r : per_instance[k]) {
      report.pass = report.pass && r.pass;
      report.records.push_back(std::move(r));
    }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json to_json(const Record& r) {
  return {{"suite", r.suite},
          {"tag", r.tag},
          {"instance", r.instance},
          {"check", r.check},
          {"verdict", r.pass ? "pass" : "fail"},
          {"max_deviation", r.max_deviation},
          {"witness", r.witness}};
}

json summary_json(const SuiteReport& report) {
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += r.pass ? 0 : 1;
  return {{"summary",
           {{"suites", report.suites},
            {"records", report.records.size()},
            {"failed", failed},
            {"aggregate", report.pass ? "pass" : "fail"},
            {"elapsed_ms", report.elapsed_ms}}}};
}

}  // namespace centrelat::suites
