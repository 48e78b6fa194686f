#include "centrelat/generate.hpp"
#include "centrelat/oracles.hpp"
#include "centrelat/spectral.hpp"

#include <doctest.h>

#include <set>

using namespace centrelat;

namespace {

ComplexVector cvec(std::initializer_list<Complex> v) {
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex x : v) out[i++] = x;
  return out;
}

CentralOperator diag(std::initializer_list<Complex> v) {
  return CentralOperator(CoordinateLattice::max_norm(v.size()), cvec(v));
}

std::vector<Complex> values(std::initializer_list<Complex> v) { return {v}; }

MeasurableFunction table(const OperatorSpectralMeasure& mu_t, std::initializer_list<Complex> v) {
  return MeasurableFunction(mu_t.space(), cvec(v));
}

}  // namespace

TEST_CASE("Gelfand transform") {
  const LatticePtr l = CoordinateLattice::max_norm(3);
  CHECK(gelfand(CentralOperator::identity(l)).values == ComplexVector::Ones(3));
  const GelfandTransform g = gelfand(diag({{1, 1}, 2.0}));
  CHECK(g.values == cvec({{1, 1}, 2.0}));
  CHECK(g.sup_norm == 2.0);

  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const LatticePtr lr = gen::random_lattice(rng, 1 + rng.index(32));
    const GelfandReport r = verify_gelfand(gen::random_central(rng, lr), gen::random_central(rng, lr));
    CHECK(r.holds());
  }
}

TEST_CASE("spectrum") {
  const Spectrum s = spectrum(diag({1.0, 1.0, 2.0}));
  CHECK(s.attained == values({1.0, 2.0}));
  CHECK(s.multiplicity == std::vector<std::size_t>{2, 1});
  CHECK(s.label == std::vector<std::size_t>{0, 0, 1});

  const CentralOperator one = diag({{0.3, 0.4}});
  CHECK(spectrum(one).attained == values({{0.3, 0.4}}));
  Rng rng(2);
  const auto eig = oracle::dense_eigenvalues(one.matrix(), rng);
  CHECK(oracle::hausdorff(eig, {{0.3, 0.4}}) <= kOracleTolerance);

  // Merging close values uses the multiplicity-weighted mean.
  const Spectrum merged = spectrum(diag({1.0, 1.0 + 1e-14, 1.0 + 1e-14, 5.0}), {1e-12});
  CHECK(merged.size() == 2);
  CHECK(merged.attained[0].real() == doctest::Approx(1.0 + 2e-14 / 3.0));
  CHECK(merged.multiplicity[0] == 3);
}

TEST_CASE("spectral permanence against dense eigenvalues") {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CentralOperator t = gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(16)));
    const double scale = std::max(1.0, t.order_unit_norm());
    worst = std::max(worst, oracle::hausdorff(spectrum(t).attained, oracle::dense_eigenvalues(t.matrix(), rng)) / scale);
  }
  CHECK(worst <= kOracleTolerance);
}

TEST_CASE("spectral radius and spectral characterisations") {
  const Complex i{0, 1};
  auto check = [](const CentralOperator& t) {
    const SpectralRadiusReport r = spectral_radius_checks(t, spectrum(t));
    CHECK(r.holds());
    return r;
  };
  CHECK(check(diag({1.0, -3.0})).radius == 3.0);
  check(diag({i, -1.0, std::polar(1.0, 0.3)}));
  check(diag({0.0, 2.0}));
  check(diag({{1, 1e-300}}));
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) check(gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(8))));
}

TEST_CASE("band union") {
  RealVector sym(8);
  const LatticePtr l = CoordinateLattice::max_norm(8);
  const CentralOperator t(l, cvec({1.0, 2.0, 1.0, {0, 3}, 4.0, 2.0, {0, 3}, 7.0}));
  const Spectrum full = spectrum(t);

  std::vector<PrincipalIdeal> basis;
  for (Eigen::Index k = 0; k < 8; ++k) basis.emplace_back(RealVector::Unit(8, k));
  CHECK(union_spectrum(t, basis).attained == full.attained);
  CHECK(union_spectrum(t, {PrincipalIdeal(RealVector::Ones(8))}).attained == full.attained);

  RealVector a = RealVector::Zero(8), b = RealVector::Zero(8), c = RealVector::Zero(8);
  a.head(4).setConstant(0.5);
  b.segment(3, 3).setConstant(2.0);
  c.tail(3).setConstant(1.0);
  CHECK(union_spectrum(t, {PrincipalIdeal(a), PrincipalIdeal(b), PrincipalIdeal(c)}).attained == full.attained);

  CHECK_THROWS_AS(union_spectrum(t, {PrincipalIdeal(a), PrincipalIdeal(c)}), PreconditionError);
}

TEST_CASE("global spectral measure") {
  Rng rng(5);
  const LatticePtr l = gen::random_lattice(rng, 6);
  const LatticeValuedMeasure mu = global_spectral_measure(l);
  CHECK(mu.total() == RealVector::Ones(6));
  CHECK(mu(PointSet(6, false)) == RealVector::Zero(6));
  CHECK(is_spectral(mu).spectral);
  for (std::size_t a = 0; a < 6; ++a) CHECK(mu.atom_value(a).sum() > 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    const CentralOperator t = gen::random_central(rng, l);
    const ComplexElement r = integrate(MeasurableFunction(mu.space(), t.symbol()), mu);
    CHECK(max_deviation(r.values(), t.symbol()) <= kExactTolerance);
  }
}

TEST_CASE("operator spectral measure") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 1.0, 2.0}));
  CHECK(mu_t.projection(0) == diag({1.0, 1.0, 0.0}));
  CHECK(mu_t.projection(1) == diag({0.0, 0.0, 1.0}));
  CHECK(verify_spectral_measure(mu_t).holds());

  const LatticePtr l = CoordinateLattice::max_norm(4);
  const OperatorSpectralMeasure scalar = build_mu_T(CentralOperator::scalar(l, Complex(2, -1)));
  CHECK(scalar.size() == 1);
  CHECK(scalar.projection(0) == CentralOperator::identity(l));

  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const CentralOperator t = gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(12)));
    const SpectralMeasureReport r = verify_spectral_measure(build_mu_T(t));
    CHECK(r.holds());
    CHECK(r.reconstruction_deviation == 0.0);
  }
}

TEST_CASE("uniqueness of mu_T by exhaustive enumeration") {
  Rng rng(7);
  const LatticePtr l = CoordinateLattice::max_norm(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CentralOperator t(l, gen::repeated_symbol(rng, 5));
    const Spectrum s = spectrum(t);
    const UniquenessOracleResult u = enumerate_admissible_measures(t, s);
    CHECK(u.admissible == 1);
    REQUIRE(u.matches.size() == 1);
    CHECK(u.matches.front() == s.label);
    std::size_t expected = 1;
    for (int k = 0; k < 5; ++k) expected *= s.size();
    CHECK(u.candidates <= expected);
  }
  const CentralOperator big(CoordinateLattice::max_norm(12), ComplexVector::LinSpaced(12, 1.0, 12.0));
  CHECK_THROWS_AS(enumerate_admissible_measures(big, spectrum(big), 1000), PreconditionError);
}

TEST_CASE("vanishing lemma") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 2.0, 3.0, 2.0}));
  const LatticePtr l = mu_t.base().lattice();
  RealVector z(4);
  z << 1, 0, 0, 0;
  const ComplexElement e1 = ComplexElement::real(l, z);
  CHECK(vanishing_lemma_holds(mu_t, {{false, true, false}, {false, false, true}}, e1));
  CHECK(vanishing_lemma_holds(mu_t, {{true, false, false}, {false, true, false}}, e1));
  CHECK(vanishing_lemma_holds(mu_t, {{true, true, true}}, ComplexElement::zero(l)));
}

TEST_CASE("functional calculus examples") {
  const OperatorSpectralMeasure a = build_mu_T(diag({0.0, 1.0, 4.0}));
  const CentralOperator root = rho_T(a, builtin_function("sqrt"));
  CHECK(root == diag({0.0, 1.0, 2.0}));
  CHECK(spectrum(root).attained == values({0.0, 1.0, 2.0}));
  CHECK(rho_T(a, builtin_function("one")) == CentralOperator::identity(a.base().lattice()));
  CHECK(rho_T(a, builtin_function("identity")) == a.base());
  CHECK_THROWS_AS(rho_T(a, builtin_function("inverse")), DomainError);
  CHECK_THROWS_AS(builtin_function("nope"), DomainError);

  const OperatorSpectralMeasure b = build_mu_T(diag({1.0, 2.0, 2.0}));
  const MeasurableFunction f = table(b, {0.0, 5.0});
  CHECK(kernel_projection(b, f) == diag({1.0, 0.0, 0.0}));
  const ComplexMatrix kernel = oracle::kernel_basis(rho_T(b, f).matrix());
  REQUIRE(kernel.cols() == 1);
  CHECK(std::abs(kernel(0, 0)) == doctest::Approx(1.0));
  CHECK(kernel.col(0).tail(2).isZero(0.0));

  const CalculusReport r = verify_calculus(b, f, table(b, {{0, 1}, -2.0}));
  CHECK(r.holds());
}

TEST_CASE("functional calculus on random data") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const CentralOperator t = gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(10)));
    const OperatorSpectralMeasure mu_t = build_mu_T(t);
    ComplexVector f(Eigen::Index(mu_t.size())), g(f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k) {
      f[k] = rng.coin(0.3) ? Complex{} : gen::random_scalar(rng);
      g[k] = gen::random_scalar(rng);
    }
    const CalculusReport r =
        verify_calculus(mu_t, MeasurableFunction(mu_t.space(), f), MeasurableFunction(mu_t.space(), g));
    CHECK(r.holds());
    // Independent spectral-mapping oracle: distinct values of f over the symbol.
    std::set<std::pair<double, double>> image;
    for (std::size_t i = 0; i < t.dim(); ++i) {
      const Complex v = f[Eigen::Index(mu_t.spectrum().label[i])];
      image.insert({v.real(), v.imag()});
    }
    CHECK(spectrum(rho_T(mu_t, MeasurableFunction(mu_t.space(), f))).size() == image.size());
  }
}

TEST_CASE("dominated convergence of the calculus") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 2.0, {0, 1}}));
  const ScalarFunction id = builtin_function("identity");
  const ComplexElement z = ComplexElement::from_values(mu_t.base().lattice(), cvec({1.0, -2.0, 0.5}));

  FunctionSequence same;
  same.term = [](std::size_t, Complex l) -> std::optional<Complex> { return l; };
  same.length = 10;
  const DominatedConvergenceReport a = dominated_convergence_calculus(mu_t, same, id, 3.0, z);
  CHECK(a.holds);
  for (const auto& u : a.operator_witness.dominating) CHECK(u.isZero(0.0));

  FunctionSequence shifted;
  shifted.term = [](std::size_t n, Complex l) -> std::optional<Complex> { return l + 1.0 / double(n); };
  shifted.length = 50;
  shifted.tail = TailRule{[](std::size_t n) { return 1.0 / double(n); }, "1/n"};
  const DominatedConvergenceReport b = dominated_convergence_calculus(mu_t, shifted, id, 3.0, z);
  CHECK(b.holds);
  for (std::size_t n = 1; n <= 50; ++n)
    CHECK(max_deviation(b.operator_witness.dominating[n - 1], RealVector::Constant(3, 1.0 / double(n))) <=
          kExactTolerance);

  // Without the tail rule the last term 1/50 does not certify decay.
  shifted.tail.reset();
  CHECK_FALSE(dominated_convergence_calculus(mu_t, shifted, id, 3.0, z).holds);

  CHECK_THROWS_AS(dominated_convergence_calculus(mu_t, same, id, 1.5, z), PreconditionError);
}

TEST_CASE("eigenvalue expansion") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 1.0, 2.0}));
  const EigenExpansion e = eigen_expansion(mu_t);
  CHECK(e.reconstruction_deviation == 0.0);
  CHECK(e.identity_deviation == 0.0);
  const LatticePtr l = mu_t.base().lattice();
  const ComplexElement z = ComplexElement::from_values(l, cvec({1.0, 1.0, 1.0}));
  const ComponentReport d = decompose(e, z);
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0].values() == cvec({1.0, 1.0, 0.0}));
  CHECK(d.components[1].values() == cvec({0.0, 0.0, 1.0}));
  CHECK(d.kernel_residual == 0.0);
  const UniquenessReport u = check_component_uniqueness(e, z, d.components);
  CHECK(u.claim_valid);
  CHECK(u.matches_projections);
  const std::vector<ComplexElement> wrong{ComplexElement::from_values(l, cvec({1.0, 0.0, 1.0})),
                                          ComplexElement::from_values(l, cvec({0.0, 1.0, 0.0}))};
  CHECK_FALSE(check_component_uniqueness(e, z, wrong).claim_valid);

  const MinimalPolynomialReport p = minimal_polynomial(mu_t);
  CHECK(p.degree == 2);
  CHECK(p.annihilates);
  CHECK(p.minimal);
  CHECK(p.residual == 0.0);
  CHECK(p.coefficients == values({2.0, -3.0, 1.0}));

  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const OperatorSpectralMeasure m = build_mu_T(gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(10))));
    const MinimalPolynomialReport q = minimal_polynomial(m);
    CHECK(q.degree == m.size());
    CHECK(q.annihilates);
    CHECK(q.minimal);
    CHECK(q.residual <= 1e-10);
  }
}

TEST_CASE("eigenvalue queries") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 2.0}));
  const EigenQuery one = eigen_query(mu_t, 1.0);
  CHECK(one.in_spectrum);
  CHECK(one.is_eigenvalue);
  CHECK(one.isolated);
  CHECK(one.projection == diag({1.0, 0.0}));
  const EigenQuery none = eigen_query(mu_t, 3.0);
  CHECK_FALSE(none.in_spectrum);
  CHECK_FALSE(none.is_eigenvalue);
  CHECK(none.projection == diag({0.0, 0.0}));

  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const CentralOperator t = gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(10)));
    const OperatorSpectralMeasure m = build_mu_T(t);
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Complex l = m.spectrum().attained[k];
      const auto n = static_cast<Eigen::Index>(t.dim());
      const ComplexMatrix shifted = t.matrix() - l * ComplexMatrix::Identity(n, n);
      CHECK(oracle::kernel_dimension(shifted) == m.spectrum().multiplicity[k]);
      for (std::size_t j = k + 1; j < m.size(); ++j) CHECK((m.projection(k) * m.projection(j)).symbol().isZero(0.0));
    }
  }
}

TEST_CASE("step approximation") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 1.0, 2.0, {0, -3}}));
  const StepApproximation exact = freudenthal_approx(mu_t, 0.25);
  CHECK(exact.error == 0.0);
  CHECK(exact.coefficients.size() == 3);

  const StepApproximation wide = freudenthal_approx(mu_t, 5.0, StepMode::coarse);
  CHECK(wide.error <= 5.0);
  REQUIRE_FALSE(wide.coefficients.empty());
  CHECK(wide.coefficients.front() == Complex(1.0));  // the spectrum value nearest 0
  for (Complex c : wide.coefficients) CHECK(mu_t.spectrum().find(c).has_value());
  CHECK_THROWS_AS(freudenthal_approx(mu_t, 0.0), DomainError);

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const OperatorSpectralMeasure m = build_mu_T(gen::random_central(rng, CoordinateLattice::max_norm(1 + rng.index(16))));
    const double eps = std::max(1e-3, m.base().order_unit_norm() * rng.uniform());
    const StepApproximation s = freudenthal_approx(m, eps, StepMode::coarse);
    CHECK(s.error <= eps);
    CentralOperator sum = CentralOperator::scalar(m.base().lattice(), 0.0);
    for (std::size_t k = 0; k < s.coefficients.size(); ++k) sum = sum + s.coefficients[k] * s.projections[k];
    CHECK(deviation((m.base() - sum).order_unit_norm(), s.error) <= kExactTolerance);
  }
}

TEST_CASE("commutant equivalences") {
  const OperatorSpectralMeasure mu_t = build_mu_T(diag({1.0, 1.0, 2.0}));
  const LatticePtr l = mu_t.base().lattice();
  ComplexMatrix block = ComplexMatrix::Zero(3, 3);
  block.topLeftCorner(2, 2) << 1.0, 2.0, Complex(0, 1), -1.0;
  block(2, 2) = 4.0;
  const CommutantReport in = commutant_check(mu_t, RegularOperator(l, block));
  CHECK(in.all_agree());
  CHECK(in.conditions[0]);

  ComplexMatrix off = block;
  off(0, 2) = 1.0;
  const CommutantReport out = commutant_check(mu_t, RegularOperator(l, off));
  CHECK(out.all_agree());
  for (bool c : out.conditions) CHECK_FALSE(c);
  CHECK_FALSE(out.block_supported);

  const ComplexMatrix t = mu_t.base().matrix();
  const ComplexMatrix poly = t * t * t - 3.0 * t + ComplexMatrix::Identity(3, 3);
  const CommutantReport p = commutant_check(mu_t, RegularOperator(l, poly));
  CHECK(p.all_agree());
  CHECK(p.conditions[0]);
}
