#include "centrelat/lattice.hpp"
#include "centrelat/oracles.hpp"
#include "centrelat/random.hpp"

#include <doctest.h>

using namespace centrelat;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ComplexVector random_values(Rng& rng, std::size_t n) {
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (auto& z : v) z = Complex(rng.normal(), rng.normal());
  return v;
}

}  // namespace

TEST_CASE("modulus closed form") {
  CHECK(modulus(vec({3, -1}), vec({4, 0})) == vec({5, 1}));
  CHECK(modulus(vec({0, 0}), vec({0, 0})) == vec({0, 0}));
  CHECK_THROWS_AS(modulus(vec({1, 2}), vec({1})), StructuralError);
}

TEST_CASE("modulus against the phase-grid oracle") {
  const RealVector re = vec({1, 2}), im = vec({1, -2});
  const RealVector m = modulus(re, im);
  CHECK(m[0] == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(m[1] == doctest::Approx(2.82842712).epsilon(1e-8));
  CHECK(max_deviation(m, oracle::phase_grid_modulus(re, im)) <= kOracleTolerance);

  Rng rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.index(32);
    const ComplexVector z = random_values(rng, n);
    worst = std::max(worst, max_deviation(modulus(z), oracle::phase_grid_modulus(z.real(), z.imag(), 12)));
  }
  CHECK(worst <= kOracleTolerance);
}

TEST_CASE("complexification laws") {
  Rng rng(5);
  const LatticePtr l = CoordinateLattice::max_norm(6);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexElement z = ComplexElement::from_values(l, random_values(rng, 6));
    const ComplexElement w = ComplexElement::from_values(l, random_values(rng, 6));
    CHECK(z.conj().conj() == z);
    CHECK(modulus(z) == modulus(z.conj()));
    const Complex c(rng.normal(), rng.normal());
    CHECK(max_deviation(modulus(c * z), RealVector(std::abs(c) * modulus(z))) <= kExactTolerance);
    const RealVector lhs = modulus(z + w), rhs = modulus(z) + modulus(w);
    for (Eigen::Index i = 0; i < lhs.size(); ++i) CHECK(lhs[i] <= rhs[i] * (1 + kExactTolerance));
  }
}

TEST_CASE("lattice operations") {
  const LatticePair p = lattice_ops(vec({1, -2}), vec({0, 5}));
  CHECK(p.join == vec({1, 5}));
  CHECK(p.meet == vec({0, -2}));
  const LatticePair same = lattice_ops(vec({3, 4}), vec({3, 4}));
  CHECK(same.join == vec({3, 4}));
  CHECK(same.meet == vec({3, 4}));

  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    RealVector x(5), y(5);
    for (Eigen::Index i = 0; i < 5; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const LatticePair q = lattice_ops(x, y);
    CHECK(((q.join - x).array() >= 0).all());
    CHECK(((q.join - y).array() >= 0).all());
    CHECK(q.join + q.meet == x + y);
  }
  CHECK_THROWS_AS(lattice_ops(vec({1}), vec({1, 2})), StructuralError);
}

TEST_CASE("lattice norms") {
  const LatticePtr w = CoordinateLattice::weighted_p(vec({1, 2}), 2.0);
  CHECK(w->norm(vec({3, 4})) == doctest::Approx(std::sqrt(9.0 + 32.0)));
  const LatticePtr wi = CoordinateLattice::weighted_p(vec({1, 2}), std::numeric_limits<double>::infinity());
  CHECK(wi->norm(vec({3, 4})) == 8.0);
  CHECK(CoordinateLattice::max_norm(3)->norm(vec({1, 7, 2})) == 7.0);
  CHECK_THROWS(CoordinateLattice::weighted_p(vec({1, 0}), 2.0));
  CHECK_THROWS(CoordinateLattice::weighted_p(vec({1, 1}), 0.5));
  CHECK_THROWS(CoordinateLattice::max_norm(0));
  CHECK_THROWS_AS(named_user_norm("nope"), DomainError);

  Rng rng(3);
  const std::vector<LatticePtr> lattices{CoordinateLattice::max_norm(5),
                                         CoordinateLattice::weighted_p(vec({1, 2, 0.5, 3, 1}), 1.0),
                                         CoordinateLattice::weighted_p(vec({1, 2, 0.5, 3, 1}), 3.5),
                                         CoordinateLattice::make(5, named_user_norm("max_plus_mean")),
                                         CoordinateLattice::make(5, named_user_norm("l1_l2_blend"))};
  for (const auto& l : lattices) CHECK(spot_check_lattice_norm(*l, rng, 500));
}

TEST_CASE("ideal norm") {
  const LatticePtr l = CoordinateLattice::max_norm(3);
  const PrincipalIdeal j(vec({1, 2, 0}));
  CHECK(j.support() == std::vector<std::size_t>{0, 1});
  CHECK(ideal_norm(ComplexElement::real(l, vec({1, 2, 0})), j) == 1.0);
  CHECK(ideal_norm(ComplexElement::real(l, vec({2, 2, 0})), j) == 2.0);
  const ComplexElement z(l, vec({0, 3, 0}), vec({0, 4, 0}));
  const double oracle_value = oracle::phase_grid_modulus(z.re(), z.im())[1] / 2.0;
  CHECK(oracle_value == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(ideal_norm(z, j) == 2.5);

  CHECK(j.first_outside(ComplexElement::real(l, vec({0, 0, 1})).values()) == std::optional<std::size_t>(2));
  CHECK_THROWS_AS(ideal_norm(ComplexElement::real(l, vec({0, 0, 1})), j), DomainError);
  CHECK_THROWS_AS(PrincipalIdeal(vec({0, 0})), DomainError);
  CHECK_THROWS_AS(PrincipalIdeal(vec({1, -1})), DomainError);

  Rng rng(17);
  const PrincipalIdeal u(vec({0.5, 1.5, 2.0, 0}));
  const LatticePtr l4 = CoordinateLattice::max_norm(4);
  for (int trial = 0; trial < 200; ++trial) {
    ComplexVector a = random_values(rng, 4), b = random_values(rng, 4);
    a[3] = b[3] = 0.0;
    const double na = ideal_norm(a, u), nb = ideal_norm(b, u);
    CHECK(ideal_norm(ComplexVector(a + b), u) <= (na + nb) * (1 + kExactTolerance));
    const Complex c(rng.normal(), rng.normal());
    CHECK(deviation(ideal_norm(ComplexVector(c * a), u), std::abs(c) * na) <= kExactTolerance);
    // Shrinking the modulus coordinatewise cannot increase the norm.
    ComplexVector smaller = a;
    for (auto& v : smaller) v *= rng.uniform();
    CHECK(ideal_norm(smaller, u) <= na * (1 + kExactTolerance));
  }
}

TEST_CASE("convergence witness") {
  const auto n = 20;
  const ComplexVector limit = ComplexVector::Constant(3, Complex(1.0, -1.0));
  auto witness = [&](auto term) {
    ConvergenceWitness w;
    for (int k = 1; k <= n; ++k) w.dominating.push_back(term(k));
    return w;
  };
  auto shifted = [&](double scale) {
    std::vector<ComplexVector> values;
    for (int k = 1; k <= n; ++k) {
      ComplexVector v = limit;
      v[0] += scale / k;
      values.push_back(v);
    }
    return values;
  };

  SUBCASE("constant sequence with zero witness") {
    const std::vector<ComplexVector> values(n, limit);
    CHECK(check_witness(values, limit, witness([](int) { return RealVector::Zero(3).eval(); })).holds);
  }
  SUBCASE("exact domination with a tail rule") {
    ConvergenceWitness w = witness([](int k) { return RealVector(RealVector::Unit(3, 0) / double(k)); });
    w.tail = TailRule{[](std::size_t m) { return 1.0 / double(m); }, "1/n"};
    CHECK(check_witness(shifted(1.0), limit, w).holds);
    w.tail.reset();
    const WitnessVerdict v = check_witness(shifted(1.0), limit, w);
    CHECK_FALSE(v.holds);  // 1/20 is not below the witness tolerance
  }
  SUBCASE("half the gap fails at the first index") {
    const WitnessVerdict v =
        check_witness(shifted(1.0), limit, witness([](int k) { return RealVector(RealVector::Unit(3, 0) / (2.0 * k)); }));
    CHECK_FALSE(v.holds);
    CHECK(v.violation_index == std::optional<std::size_t>(1));
    CHECK(v.max_excess == doctest::Approx(0.5));
  }
  SUBCASE("an increasing dominating sequence is rejected") {
    ConvergenceWitness w = witness([](int k) { return RealVector(RealVector::Constant(3, double(k))); });
    const WitnessVerdict v = check_witness(std::vector<ComplexVector>(n, limit), limit, w);
    CHECK_FALSE(v.holds);
    CHECK(v.violation_index == std::optional<std::size_t>(2));
  }
  SUBCASE("a tail rule that does not decay is rejected") {
    ConvergenceWitness w = witness([](int k) { return RealVector(RealVector::Unit(3, 0) / double(k)); });
    w.tail = TailRule{[](std::size_t) { return 1.0; }, "1"};
    CHECK_FALSE(check_witness(shifted(1.0), limit, w).holds);
  }
}
