#include "centrelat/generate.hpp"
#include "centrelat/order_integral.hpp"

#include <doctest.h>

using namespace centrelat;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("measurable spaces") {
  const FiniteMeasurableSpace s(4, {{0, 2}, {1}, {3}});
  CHECK(s.atom_count() == 3);
  CHECK(s.is_measurable(make_point_set(4, {0, 2})));
  CHECK_FALSE(s.is_measurable(make_point_set(4, {0})));
  CHECK_THROWS_AS(s.atoms_in(make_point_set(4, {0})), MeasurabilityError);
  CHECK_THROWS_AS(FiniteMeasurableSpace(3, {{0, 1}}), StructuralError);
  CHECK_THROWS_AS(FiniteMeasurableSpace(3, {{0, 1}, {1, 2}}), StructuralError);
}

TEST_CASE("measures") {
  const LatticePtr e = CoordinateLattice::max_norm(2);
  const LatticeValuedMeasure mu(FiniteMeasurableSpace::discrete(3), e, {vec({1, 0}), vec({0, 2}), vec({1, 1})});
  CHECK(mu(PointSet(3, false)) == vec({0, 0}));
  CHECK(mu(make_point_set(3, {0, 2})) == mu(make_point_set(3, {0})) + mu(make_point_set(3, {2})));
  CHECK(mu.total() == vec({2, 3}));
  CHECK_THROWS_AS(LatticeValuedMeasure(FiniteMeasurableSpace::discrete(1), e, {vec({1, -1})}), PositivityError);
  CHECK_THROWS_AS(LatticeValuedMeasure(FiniteMeasurableSpace::discrete(2), e, {vec({1, 1})}), StructuralError);
}

TEST_CASE("integral of elementary functions") {
  const LatticePtr e = CoordinateLattice::max_norm(2);
  const FiniteMeasurableSpace x = FiniteMeasurableSpace::discrete(2);
  const LatticeValuedMeasure mu(x, e, {vec({1, 0}), vec({0, 2})});
  ElementaryFunction phi;
  phi.terms = {{3.0, make_point_set(2, {0})}, {1.0, make_point_set(2, {1})}};
  CHECK(integrate_elementary(phi, mu) == vec({3, 2}));

  ComplexVector table(2);
  table << 3.0, 1.0;
  CHECK(integrate(MeasurableFunction(x, table), mu).re() == vec({3, 2}));
  const ComplexElement zero = integrate(MeasurableFunction::constant(x, 0.0), mu);
  CHECK(zero.re() == vec({0, 0}));
  CHECK(zero.im() == vec({0, 0}));

  const FiniteMeasurableSpace coarse(2, {{0, 1}});
  ComplexVector bad(2);
  bad << 1.0, 2.0;
  CHECK_THROWS_AS(MeasurableFunction(coarse, bad), MeasurabilityError);
  CHECK_THROWS_AS(MeasurableFunction(x, table, 2.0), DomainError);
}

TEST_CASE("integral laws on random data") {
  Rng rng(101);
  const LatticePtr e = CoordinateLattice::max_norm(4);
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteMeasurableSpace x = FiniteMeasurableSpace::discrete(6);
    std::vector<RealVector> values;
    for (int a = 0; a < 6; ++a) {
      RealVector v(4);
      for (auto& c : v) c = rng.coin(0.25) ? 0.0 : rng.uniform(0, 2);
      values.push_back(v);
    }
    const LatticeValuedMeasure mu(x, e, values);
    const MeasurableFunction f = gen::random_function(rng, x);
    const ComplexElement i = integrate(f, mu);

    // Direct sum over atoms as the independent reference.
    ComplexVector direct = ComplexVector::Zero(4);
    for (std::size_t a = 0; a < 6; ++a) direct += f(a) * values[a].cast<Complex>();
    CHECK(max_deviation(i.values(), direct) <= kExactTolerance);

    // A second elementary decomposition: split every level into two pieces.
    const RealVector pos = f.table().real().cwiseMax(0.0);
    ElementaryFunction split;
    for (std::size_t a = 0; a < 6; ++a) {
      const double r = pos[Eigen::Index(a)];
      if (r == 0.0) continue;
      const double r1 = r * rng.uniform();
      split.terms.emplace_back(r1, make_point_set(6, {a}));
      split.terms.emplace_back(r - r1, make_point_set(6, {a}));
    }
    CHECK(max_deviation(integrate_elementary(split, mu), integrate_elementary(level_set_decomposition(pos), mu)) <=
          kExactTolerance);

    const RealVector lhs = modulus(i), rhs = integrate(f.abs(), mu).re();
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(lhs[k] <= rhs[k] + kExactTolerance * std::max(1.0, rhs[k]));

    // Change of variables through a random 6 -> 3 map.
    std::vector<std::size_t> map(6);
    for (auto& m : map) m = rng.index(3);
    const FiniteMeasurableSpace y = FiniteMeasurableSpace::discrete(3);
    const LatticeValuedMeasure image = image_measure(mu, map, y);
    const MeasurableFunction g = gen::random_function(rng, y);
    CHECK(max_deviation(integrate(g, image).values(), integrate(pullback(g, map, x), mu).values()) <= kExactTolerance);
  }
}

TEST_CASE("image measures") {
  const LatticePtr e = CoordinateLattice::max_norm(2);
  const FiniteMeasurableSpace x = FiniteMeasurableSpace::discrete(3);
  const LatticeValuedMeasure mu(x, e, {vec({1, 0}), vec({0, 2}), vec({1, 1})});
  const LatticeValuedMeasure same = image_measure(mu, {0, 1, 2}, x);
  for (std::size_t a = 0; a < 3; ++a) CHECK(same.atom_value(a) == mu.atom_value(a));
  const LatticeValuedMeasure point = image_measure(mu, {0, 0, 0}, FiniteMeasurableSpace::discrete(1));
  CHECK(point.atom_value(0) == mu.total());
  CHECK_THROWS_AS(image_measure(mu, {0, 0, 4}, FiniteMeasurableSpace::discrete(2)), StructuralError);
}

TEST_CASE("spectral measures") {
  const LatticePtr e = CoordinateLattice::max_norm(3);
  const FiniteMeasurableSpace x = FiniteMeasurableSpace::discrete(2);
  CHECK(is_spectral(LatticeValuedMeasure(x, e, {vec({1, 0, 1}), vec({0, 1, 0})})).spectral);

  const LatticeValuedMeasure half(FiniteMeasurableSpace::discrete(1), CoordinateLattice::max_norm(2), {vec({0.5, 0})});
  const SpectralVerdict v = is_spectral(half);
  CHECK_FALSE(v.spectral);
  CHECK_FALSE(v.idempotent[0]);
  CHECK(v.max_deviation == doctest::Approx(0.25));

  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(8), m = 1 + rng.index(5);
    std::vector<RealVector> values(m, RealVector::Zero(Eigen::Index(n)));
    for (std::size_t i = 0; i < n; ++i) values[rng.index(m)][Eigen::Index(i)] = 1.0;
    const LatticeValuedMeasure mu(FiniteMeasurableSpace::discrete(m), CoordinateLattice::max_norm(n), values);
    CHECK(is_spectral(mu).spectral);
    CHECK(is_spectral_exact(ExactMeasure::from(mu)));
  }
}

TEST_CASE("Riesz representation") {
  const LatticePtr e = CoordinateLattice::max_norm(2);
  const FiniteMeasurableSpace x = FiniteMeasurableSpace::discrete(2);
  const PositiveMap pi = [](const RealVector& f) { return vec({f[0] + f[1], f[1]}); };
  const LatticeValuedMeasure mu = riesz_represent(pi, x, e);
  CHECK(mu.atom_value(0) == vec({1, 0}));
  CHECK(mu.atom_value(1) == vec({1, 1}));
  Rng rng(3);
  const RieszReport r = verify_riesz(pi, mu, rng);
  CHECK(r.representation_deviation <= kExactTolerance);
  CHECK(r.sup_formula);
  CHECK(r.inf_formula);

  // A measure that disagrees with pi on an atom is caught.
  const LatticeValuedMeasure wrong(x, e, {vec({1, 0}), vec({0, 1})});
  CHECK(verify_riesz(pi, wrong, rng).representation_deviation > 0.1);

  const LatticeValuedMeasure zero = riesz_represent([](const RealVector&) { return vec({0, 0}); }, x, e);
  CHECK(zero.atom_value(0) == vec({0, 0}));
  CHECK(zero.atom_value(1) == vec({0, 0}));

  const PositiveMap hom = [](const RealVector& f) { return vec({f[1], f[0]}); };
  CHECK(is_spectral(riesz_represent(hom, x, e)).spectral);

  CHECK_THROWS_AS(riesz_represent([](const RealVector& f) { return vec({-f[0], f[1]}); }, x, e), PositivityError);
}

TEST_CASE("regularity on discrete spaces") {
  Rng rng(8);
  const LatticeValuedMeasure mu = gen::random_measure(rng, CoordinateLattice::max_norm(3));
  const RegularityReport r = check_regularity(mu);
  CHECK(r.inner_regular);
  CHECK(r.outer_regular);
  CHECK(r.sets_checked == (std::size_t{1} << mu.space().atom_count()));
}

TEST_CASE("exact rational mode") {
  CHECK(to_rational(0.1) != Rational(1, 10));
  CHECK(to_rational(0.5) == Rational(1, 2));
  const FiniteMeasurableSpace x = FiniteMeasurableSpace::discrete(2);
  const ExactMeasure mu(x, 2, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  CHECK(is_spectral_exact(mu));
  const auto i = integrate_exact({to_exact(Complex(0.25, 1)), to_exact(Complex(3, 0))}, mu);
  CHECK(i[0] == ExactComplex{Rational(1, 4), Rational(1)});
  CHECK(i[1] == ExactComplex{Rational(3), Rational(0)});
  const ExactMeasure half(FiniteMeasurableSpace::discrete(1), 1, {{Rational(1, 2)}});
  CHECK_FALSE(is_spectral_exact(half));
}
