#include "centrelat/generate.hpp"
#include "centrelat/operators.hpp"
#include "centrelat/oracles.hpp"

#include <doctest.h>

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

const Complex I{0.0, 1.0};

}  // namespace

TEST_CASE("operator modulus") {
  const CentralOperator t = diag({{3, 4}, -2.0});
  CHECK(t.modulus() == diag({5.0, 2.0}));
  CHECK(operator_modulus(t.to_regular()).entries() == diag({5.0, 2.0}).matrix());
  CHECK(diag({0.0, 0.0}).modulus() == diag({0.0, 0.0}));

  // Dense 3x3: the phase-sampling oracle approaches (|T| x)_i from below.
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix m = gen::random_dense(rng, 3);
    const LatticePtr l = CoordinateLattice::max_norm(3);
    RealVector x(3);
    for (auto& v : x) v = rng.uniform(0.1, 2.0);
    const RealVector closed = operator_modulus(RegularOperator(l, m)).entries().real() * x;
    const RealVector sampled = oracle::phase_sampled_modulus(m, x, rng);
    for (Eigen::Index i = 0; i < 3; ++i) {
      CHECK(sampled[i] <= closed[i] * (1 + kExactTolerance));
      CHECK(closed[i] - sampled[i] <= 1e-4 * std::max(1.0, closed[i]));
    }
  }
}

TEST_CASE("centrality") {
  const LatticePtr l = CoordinateLattice::max_norm(2);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = Complex(1, 1);
  m(1, 1) = 2.0;
  const CentralityVerdict v = is_central(RegularOperator(l, m));
  REQUIRE(v.central);
  CHECK(v.op->symbol() == cvec({{1, 1}, 2.0}));

  m(0, 1) = 0.1;
  const CentralityVerdict off = is_central(RegularOperator(l, m), 1e-12);
  CHECK_FALSE(off.central);
  CHECK(off.max_off_diagonal == doctest::Approx(0.1));
  CHECK(off.row == 0);
  CHECK(off.col == 1);

  Rng rng(4);
  const LatticePtr l6 = CoordinateLattice::max_norm(6);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix noisy = gen::random_central(rng, l6).matrix();
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 6; ++j)
        if (i != j) noisy(i, j) = 1e-15 * Complex(rng.normal(), rng.normal()) / 8.0;
    CHECK(is_central(RegularOperator(l6, noisy), 1e-12).central);
  }
}

TEST_CASE("norm coincidence") {
  const NormReport r = norms(diag({{1, 1}, -2.0}));
  CHECK(r.order_unit == 2.0);
  CHECK(r.operator_norm == 2.0);
  CHECK(r.regular == 2.0);
  CHECK(r.certified);

  const NormReport zero = norms(diag({0.0, 0.0, 0.0}));
  CHECK(zero.order_unit == 0.0);
  CHECK(zero.operator_norm == 0.0);
  CHECK(zero.regular == 0.0);

  RealVector w(3);
  w << 1.0, 1.0, 1.0;
  const LatticePtr l3 = CoordinateLattice::weighted_p(w, 3.0);
  const NormReport p3 = norms(CentralOperator(l3, cvec({0.5, -3.0 * I, 1.0})), 1000, 99);
  CHECK(p3.attaining_index == 1);
  CHECK(p3.attained_ratio == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(p3.sampled_max_ratio <= 3.0 + 1e-12);
  CHECK(p3.certified);

  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticePtr l = gen::random_lattice(rng, 1 + rng.index(16));
    const NormReport n = norms(gen::random_central(rng, l), 200, trial);
    CHECK(n.certified);
  }
}

TEST_CASE("modulus laws") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticePtr l = gen::random_lattice(rng, 1 + rng.index(10));
    const CentralOperator s = gen::random_central(rng, l), t = gen::random_central(rng, l);
    // Exact-class: equal up to rounding of the complex products.
    CHECK(max_deviation((s * t).modulus().symbol(), (s.modulus() * t.modulus()).symbol()) <= kExactTolerance);
    CHECK(max_deviation((t * t.conj()).modulus().symbol(), (t.modulus() * t.modulus()).symbol()) <= kExactTolerance);
    const ComplexElement z = gen::random_element(rng, l);
    const RealVector expected = modulus(t.symbol()).cwiseProduct(modulus(z));
    CHECK(max_deviation(modulus(t.apply(z)), expected) <= kExactTolerance);
    CHECK(max_deviation(modulus(t.conj().apply(z.conj())), expected) <= kExactTolerance);
    CHECK(max_deviation(modulus(t.modulus().apply(ComplexElement::real(l, modulus(z)))), expected) <= kExactTolerance);

    const RegularOperator x(l, gen::random_dense(rng, l->dim()));
    const RealVector lhs = modulus(x.apply(z));
    const RealVector rhs = operator_modulus(x).entries().real() * modulus(z);
    for (Eigen::Index i = 0; i < lhs.size(); ++i) CHECK(lhs[i] <= rhs[i] + kExactTolerance * std::max(1.0, rhs[i]));
  }
}

TEST_CASE("dense norm bounds") {
  Rng rng(2);
  const LatticePtr l = CoordinateLattice::max_norm(4);
  const RegularOperator x(l, gen::random_dense(rng, 4));
  const OperatorNormBounds b = operator_norm_bounds(x, 500, 3);
  CHECK(b.sampled_lower > 0.0);
  CHECK(b.sampled_lower <= b.row_sum_upper * (1 + kExactTolerance));
}

TEST_CASE("Fuglede-Putnam-Rosenblum transfer") {
  const LatticePtr l2 = CoordinateLattice::max_norm(2);
  SUBCASE("identity") {
    Rng rng(1);
    const RegularOperator x(l2, gen::random_dense(rng, 2));
    const FprVerdict v = fpr_check(CentralOperator::identity(l2), CentralOperator::identity(l2), x);
    CHECK(v.commutes);
    CHECK(v.conjugate_commutes);
    CHECK(v.implication_holds);
  }
  SUBCASE("antidiagonal transfer") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = Complex(1, 2);
    m(1, 0) = Complex(-3, 0.5);
    const FprVerdict v = fpr_check(diag({I, 2.0}), diag({2.0, I}), RegularOperator(l2, m));
    CHECK(v.commutes);
    CHECK(v.conjugate_commutes);
    CHECK(v.entrywise_consistent);
  }
  SUBCASE("all-ones fails with the first violation reported") {
    const FprVerdict v = fpr_check(diag({1.0, 2.0}), diag({3.0, 4.0}), RegularOperator(l2, ComplexMatrix::Ones(2, 2)));
    CHECK_FALSE(v.commutes);
    CHECK(v.implication_holds);
    REQUIRE(v.first_violation.has_value());
    CHECK(*v.first_violation == std::pair<std::size_t, std::size_t>{0, 0});
  }
  SUBCASE("random commuting triples") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + rng.index(6);
      const LatticePtr l = CoordinateLattice::max_norm(n);
      const ComplexVector sv = gen::repeated_symbol(rng, n);
      ComplexVector tv = gen::random_symbol(rng, n);
      for (Eigen::Index i = 0; i < tv.size(); ++i)
        if (rng.coin()) tv[i] = sv[Eigen::Index(rng.index(n))];
      ComplexMatrix m = gen::random_dense(rng, n);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          if (sv[i] != tv[j]) m(i, j) = 0.0;
      const FprVerdict v = fpr_check(CentralOperator(l, sv), CentralOperator(l, tv), RegularOperator(l, m));
      CHECK(v.commutes);
      CHECK(v.conjugate_commutes);
    }
  }
}

TEST_CASE("polar decomposition") {
  const PolarFactors f = polar(diag({{3, 4}, 2.0 * I}));
  CHECK(f.positive == diag({5.0, 2.0}));
  CHECK(max_deviation(f.unitary.symbol(), cvec({Complex(3, 4) / 5.0, I})) <= kExactTolerance);

  const LatticePtr l = CoordinateLattice::max_norm(3);
  const PolarFactors id = polar(CentralOperator::identity(l));
  CHECK(id.positive == CentralOperator::identity(l));
  CHECK(id.unitary == CentralOperator::identity(l));

  const PolarFactors k = polar(diag({0.0, -2.0}));
  CHECK(k.positive == diag({0.0, 2.0}));
  CHECK(k.unitary == diag({1.0, -1.0}));

  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticePtr lr = CoordinateLattice::max_norm(1 + rng.index(8));
    const CentralOperator s = gen::random_central(rng, lr), t = gen::random_central(rng, lr);
    const PolarFactors pt = polar(t);
    CHECK(max_deviation((pt.positive * pt.unitary).symbol(), t.symbol()) <= kExactTolerance);
    CHECK(max_deviation(pt.unitary.modulus().symbol(), ComplexVector::Ones(t.symbol().size())) <= kExactTolerance);
    if (s.is_invertible() && t.is_invertible()) {
      const PolarFactors ps = polar(s), pst = polar(s * t);
      CHECK(max_deviation(pst.positive.symbol(), (ps.positive * pt.positive).symbol()) <= kExactTolerance);
      CHECK(max_deviation(pst.unitary.symbol(), (ps.unitary * pt.unitary).symbol()) <= kExactTolerance);
    }
  }
}

TEST_CASE("localisation") {
  const LatticePtr l = CoordinateLattice::max_norm(3);
  const CentralOperator t(l, cvec({3.0, 4.0 * I, 7.0}));
  RealVector u(3);
  u << 1, 2, 0;
  const Localization loc = localize(t, PrincipalIdeal(u));
  CHECK(loc.support == std::vector<std::size_t>{0, 1});
  CHECK(loc.symbol == cvec({3.0, 4.0 * I}));
  CHECK(loc.image_ideal_norm == 4.0);
  CHECK(loc.conjugate_compatible);
  CHECK(loc.modulus_compatible);
  CHECK(loc.isometric);

  const Localization e1 = localize(t, PrincipalIdeal(RealVector::Unit(3, 0)));
  CHECK(e1.symbol == cvec({3.0}));

  Rng rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticePtr lr = gen::random_lattice(rng, 1 + rng.index(12));
    const CentralOperator tr = gen::random_central(rng, lr);
    RealVector g(static_cast<Eigen::Index>(lr->dim()));
    for (auto& v : g) v = rng.uniform(0.1, 3.0);
    const PrincipalIdeal j(g);
    const Localization full = localize(tr, j);
    CHECK(max_deviation(full.symbol, tr.symbol()) <= kExactTolerance);
    const ComplexElement tu = tr.apply(ComplexElement::real(lr, g));
    CHECK(deviation(ideal_norm(tu, j), norms(tr, 10).order_unit) <= kExactTolerance);
  }
}
