#include "centrelat/operators.hpp"

#include <limits>

namespace centrelat {

RegularOperator::RegularOperator(LatticePtr lattice, ComplexMatrix entries)
    : lattice_(std::move(lattice)), entries_(std::move(entries)) {
  if (!lattice_) throw StructuralError("operator needs a lattice");
  const auto n = static_cast<Eigen::Index>(lattice_->dim());
  if (entries_.rows() != n || entries_.cols() != n)
    throw StructuralError("operator matrix is " + std::to_string(entries_.rows()) + "x" +
                          std::to_string(entries_.cols()) + ", lattice has dimension " + std::to_string(n));
  if (!entries_.allFinite()) throw StructuralError("operator matrix has non-finite entries");
}

RegularOperator RegularOperator::identity(LatticePtr lattice) {
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  return {std::move(lattice), ComplexMatrix::Identity(n, n)};
}

ComplexElement RegularOperator::apply(const ComplexElement& z) const {
  if (z.dim() != dim()) throw StructuralError("operator and element differ in dimension");
  return ComplexElement::from_values(lattice_, entries_ * z.values());
}

RegularOperator RegularOperator::conj() const { return {lattice_, entries_.conjugate()}; }

RegularOperator operator*(const RegularOperator& a, const RegularOperator& b) {
  if (a.dim() != b.dim()) throw StructuralError("operators differ in dimension");
  return {a.lattice_, a.entries_ * b.entries_};
}

RegularOperator operator-(const RegularOperator& a, const RegularOperator& b) {
  if (a.dim() != b.dim()) throw StructuralError("operators differ in dimension");
  return {a.lattice_, a.entries_ - b.entries_};
}

// ---------------------------------------------------------------------------

CentralOperator::CentralOperator(LatticePtr lattice, ComplexVector symbol)
    : lattice_(std::move(lattice)), symbol_(std::move(symbol)) {
  if (!lattice_) throw StructuralError("operator needs a lattice");
  if (static_cast<std::size_t>(symbol_.size()) != lattice_->dim())
    throw StructuralError("symbol has " + std::to_string(symbol_.size()) + " entries, lattice has dimension " +
                          std::to_string(lattice_->dim()));
  if (!symbol_.allFinite()) throw StructuralError("symbol has non-finite entries");
}

CentralOperator CentralOperator::identity(LatticePtr lattice) {
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  return {std::move(lattice), ComplexVector::Ones(n)};
}

CentralOperator CentralOperator::scalar(LatticePtr lattice, Complex c) {
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  return {std::move(lattice), ComplexVector::Constant(n, c)};
}

CentralOperator CentralOperator::projection(LatticePtr lattice, const std::vector<bool>& mask) {
  if (mask.size() != lattice->dim()) throw StructuralError("projection mask has the wrong size");
  ComplexVector symbol(static_cast<Eigen::Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) symbol[Eigen::Index(i)] = mask[i] ? 1.0 : 0.0;
  return {std::move(lattice), std::move(symbol)};
}

CentralOperator CentralOperator::conj() const { return {lattice_, symbol_.conjugate()}; }

CentralOperator CentralOperator::modulus() const {
  return {lattice_, centrelat::modulus(symbol_).cast<Complex>()};
}

RegularOperator CentralOperator::to_regular() const { return {lattice_, matrix()}; }

ComplexMatrix CentralOperator::matrix() const { return symbol_.asDiagonal(); }

ComplexElement CentralOperator::apply(const ComplexElement& z) const {
  if (z.dim() != dim()) throw StructuralError("operator and element differ in dimension");
  return ComplexElement::from_values(lattice_, symbol_.cwiseProduct(z.values()));
}

bool CentralOperator::is_invertible() const {
  for (Eigen::Index i = 0; i < symbol_.size(); ++i)
    if (symbol_[i] == Complex{}) return false;
  return true;
}

CentralOperator CentralOperator::inverse() const {
  ComplexVector inv(symbol_.size());
  for (Eigen::Index i = 0; i < symbol_.size(); ++i) {
    if (symbol_[i] == Complex{}) throw DomainError("central operator vanishes at coordinate " + std::to_string(i));
    inv[i] = 1.0 / symbol_[i];
  }
  return {lattice_, std::move(inv)};
}

double CentralOperator::order_unit_norm() const { return centrelat::modulus(symbol_).maxCoeff(); }

namespace {
void require_same_dim(const CentralOperator& a, const CentralOperator& b) {
  if (a.dim() != b.dim()) throw StructuralError("central operators differ in dimension");
}
}  // namespace

CentralOperator operator*(const CentralOperator& a, const CentralOperator& b) {
  require_same_dim(a, b);
  return {a.lattice_, a.symbol_.cwiseProduct(b.symbol_)};
}

CentralOperator operator+(const CentralOperator& a, const CentralOperator& b) {
  require_same_dim(a, b);
  return {a.lattice_, a.symbol_ + b.symbol_};
}

CentralOperator operator-(const CentralOperator& a, const CentralOperator& b) {
  require_same_dim(a, b);
  return {a.lattice_, a.symbol_ - b.symbol_};
}

CentralOperator operator*(Complex c, const CentralOperator& t) { return {t.lattice_, c * t.symbol_}; }

// ---------------------------------------------------------------------------

RegularOperator operator_modulus(const RegularOperator& t) {
  return {t.lattice(), t.entries().cwiseAbs().cast<Complex>()};
}

CentralityVerdict is_central(const RegularOperator& t, double tol) {
  CentralityVerdict verdict;
  const auto& m = t.entries();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j) continue;
      const double a = std::abs(m(i, j));
      if (a > verdict.max_off_diagonal) {
        verdict.max_off_diagonal = a;
        verdict.row = static_cast<std::size_t>(i);
        verdict.col = static_cast<std::size_t>(j);
      }
    }
  }
  verdict.central = verdict.max_off_diagonal <= tol;
  if (verdict.central) verdict.op.emplace(t.lattice(), m.diagonal());
  return verdict;
}

namespace {

ComplexVector random_test_vector(Rng& rng, Eigen::Index n) {
  ComplexVector z(n);
  // Mix sparse and spread vectors; magnitudes span several decades.
  const bool sparse = rng.coin(0.3);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sparse && rng.coin(0.6)) {
      z[i] = 0.0;
      continue;
    }
    z[i] = std::polar(std::pow(10.0, rng.uniform(-2.0, 1.0)), rng.phase());
  }
  if (z.cwiseAbs().maxCoeff() == 0.0) z[Eigen::Index(rng.index(std::size_t(n)))] = 1.0;
  return z;
}

}  // namespace

NormReport norms(const CentralOperator& t, std::size_t samples, std::uint64_t seed, double tol) {
  NormReport report;
  const auto& lattice = *t.lattice();
  const RealVector mods = modulus(t.symbol());
  Eigen::Index k = 0;
  report.order_unit = mods.maxCoeff(&k);
  report.regular = report.order_unit;
  report.attaining_index = static_cast<std::size_t>(k);

  const auto n = static_cast<Eigen::Index>(t.dim());
  RealVector e = RealVector::Zero(n);
  e[k] = 1.0;
  RealVector te = RealVector::Zero(n);
  te[k] = mods[k];
  report.attained_ratio = lattice.norm(te) / lattice.norm(e);

  Rng rng(seed);
  double worst = report.attained_ratio;
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexVector z = random_test_vector(rng, n);
    const double ratio = lattice.norm(modulus(ComplexVector(t.symbol().cwiseProduct(z)))) / lattice.norm(modulus(z));
    worst = std::max(worst, ratio);
  }
  report.samples = samples;
  report.sampled_max_ratio = worst;
  report.operator_norm = report.attained_ratio;
  report.certified = close(report.attained_ratio, report.order_unit, tol) &&
                     worst <= report.order_unit + tol * std::max(1.0, report.order_unit);
  return report;
}

OperatorNormBounds operator_norm_bounds(const RegularOperator& t, std::size_t samples, std::uint64_t seed) {
  OperatorNormBounds bounds;
  const auto& lattice = *t.lattice();
  const auto n = static_cast<Eigen::Index>(t.dim());
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexVector z = random_test_vector(rng, n);
    const ComplexVector tz = t.entries() * z;
    bounds.sampled_lower = std::max(bounds.sampled_lower, lattice.norm(modulus(tz)) / lattice.norm(modulus(z)));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    RealVector e = RealVector::Zero(n);
    e[j] = 1.0;
    bounds.sampled_lower =
        std::max(bounds.sampled_lower, lattice.norm(modulus(ComplexVector(t.entries().col(j)))) / lattice.norm(e));
  }

  const RealMatrix abs = t.entries().cwiseAbs();
  std::visit(
      [&](const auto& spec) {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, MaxNorm>) {
          bounds.row_sum_upper = abs.rowwise().sum().maxCoeff();
        } else if constexpr (std::is_same_v<S, WeightedPNorm>) {
          // ||x|| = ||D x||_p with D = diag(w^(1/p)); bound ||D|T|D^-1||_p.
          const bool inf = std::isinf(spec.p);
          RealVector d(n);
          for (Eigen::Index i = 0; i < n; ++i) d[i] = inf ? spec.weights[i] : std::pow(spec.weights[i], 1.0 / spec.p);
          const RealMatrix b = d.asDiagonal() * abs * d.cwiseInverse().asDiagonal();
          const double row = b.rowwise().sum().maxCoeff();
          const double col = b.colwise().sum().maxCoeff();
          bounds.row_sum_upper = inf ? row : std::pow(col, 1.0 / spec.p) * std::pow(row, 1.0 - 1.0 / spec.p);
        } else {
          bounds.row_sum_upper = std::numeric_limits<double>::infinity();
        }
      },
      lattice.norm_spec());
  return bounds;
}

// ---------------------------------------------------------------------------

FprVerdict fpr_check(const CentralOperator& s, const CentralOperator& t, const RegularOperator& x, double tol) {
  if (s.dim() != t.dim() || s.dim() != x.dim()) throw StructuralError("fpr_check: dimension mismatch");
  FprVerdict verdict;
  const ComplexMatrix& xm = x.entries();
  const ComplexMatrix sm = s.matrix();
  const ComplexMatrix tm = t.matrix();
  const ComplexMatrix comm = sm * xm - xm * tm;
  const ComplexMatrix conj_comm = sm.conjugate() * xm - xm * tm.conjugate();

  const double scale = std::max(1.0, xm.cwiseAbs().maxCoeff()) *
                       std::max({1.0, s.order_unit_norm(), t.order_unit_norm()});
  verdict.commutator_deviation = comm.cwiseAbs().maxCoeff() / scale;
  verdict.conjugate_deviation = conj_comm.cwiseAbs().maxCoeff() / scale;
  verdict.commutes = verdict.commutator_deviation <= tol;
  verdict.conjugate_commutes = verdict.conjugate_deviation <= tol;
  verdict.implication_holds = !verdict.commutes || verdict.conjugate_commutes;

  bool entry_commutes = true;
  bool entry_conj_commutes = true;
  const auto n = xm.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex e = xm(i, j) * (s.symbol()[i] - t.symbol()[j]);
      const Complex c = xm(i, j) * (std::conj(s.symbol()[i]) - std::conj(t.symbol()[j]));
      if (std::abs(e) / scale > tol) {
        entry_commutes = false;
        if (!verdict.first_violation) verdict.first_violation = {std::size_t(i), std::size_t(j)};
      }
      if (std::abs(c) / scale > tol) entry_conj_commutes = false;
    }
  }
  verdict.entrywise_consistent = entry_commutes == verdict.commutes && entry_conj_commutes == verdict.conjugate_commutes;
  return verdict;
}

PolarFactors polar(const CentralOperator& t) {
  const auto n = t.symbol().size();
  ComplexVector p(n), u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::abs(t.symbol()[i]);
    p[i] = r;
    u[i] = r > 0.0 ? t.symbol()[i] / r : Complex{1.0, 0.0};
  }
  return {CentralOperator(t.lattice(), std::move(p)), CentralOperator(t.lattice(), std::move(u))};
}

Localization localize(const CentralOperator& t, const PrincipalIdeal& ideal, double tol) {
  if (ideal.dim() != t.dim()) throw StructuralError("localize: ideal and operator differ in dimension");
  Localization loc;
  loc.support = ideal.support();
  const auto m = static_cast<Eigen::Index>(loc.support.size());

  // M(T) = (T u)^ / u^ on the support; T u is in J_u because T is central.
  const ComplexVector u = ideal.generator().cast<Complex>();
  const auto restrict = [&](const ComplexVector& image) {
    ComplexVector out(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto i = static_cast<Eigen::Index>(loc.support[std::size_t(k)]);
      out[k] = image[i] / u[i];
    }
    return out;
  };
  const ComplexVector tu = t.symbol().cwiseProduct(u);
  loc.symbol = restrict(tu);
  const ComplexVector conj_symbol = restrict(t.conj().symbol().cwiseProduct(u));
  const ComplexVector mod_symbol = restrict(t.modulus().symbol().cwiseProduct(u));

  loc.conjugate_compatible = max_deviation(conj_symbol, ComplexVector(loc.symbol.conjugate())) <= tol;
  loc.modulus_compatible = max_deviation(mod_symbol, ComplexVector(loc.symbol.cwiseAbs().cast<Complex>())) <= tol;
  loc.image_ideal_norm = ideal_norm(tu, ideal);
  loc.symbol_sup = m ? loc.symbol.cwiseAbs().maxCoeff() : 0.0;
  loc.isometric = close(loc.image_ideal_norm, loc.symbol_sup, tol);
  return loc;
}

LatticePtr centre_lattice(std::size_t dim) { return CoordinateLattice::max_norm(dim); }

}  // namespace centrelat
