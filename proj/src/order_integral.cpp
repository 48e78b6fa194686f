#include "centrelat/order_integral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace centrelat {

PointSet make_point_set(std::size_t n, std::initializer_list<std::size_t> members) {
  PointSet set(n, false);
  for (std::size_t m : members) set.at(m) = true;
  return set;
}

FiniteMeasurableSpace FiniteMeasurableSpace::discrete(std::size_t n) {
  std::vector<std::vector<std::size_t>> atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = {i};
  return FiniteMeasurableSpace(n, std::move(atoms));
}

FiniteMeasurableSpace::FiniteMeasurableSpace(std::size_t n, std::vector<std::vector<std::size_t>> atoms,
                                             std::vector<std::string> labels)
    : atoms_(std::move(atoms)), atom_of_(n, n), labels_(std::move(labels)) {
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (atoms_[a].empty()) throw StructuralError("atom " + std::to_string(a) + " is empty");
    std::sort(atoms_[a].begin(), atoms_[a].end());
    for (std::size_t p : atoms_[a]) {
      if (p >= n) throw StructuralError("atom " + std::to_string(a) + " contains point " + std::to_string(p) +
                                        " outside a space of " + std::to_string(n) + " points");
      if (atom_of_[p] != n) throw StructuralError("point " + std::to_string(p) + " lies in two atoms");
      atom_of_[p] = a;
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (atom_of_[p] == n) throw StructuralError("point " + std::to_string(p) + " lies in no atom");
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t p = 0; p < n; ++p) labels_.push_back(std::to_string(p));
  } else if (labels_.size() != n) {
    throw StructuralError("label count does not match the number of points");
  }
}

bool FiniteMeasurableSpace::is_measurable(const PointSet& set) const {
  if (set.size() != size()) return false;
  for (const auto& atom : atoms_) {
    const bool first = set[atom.front()];
    for (std::size_t p : atom)
      if (set[p] != first) return false;
  }
  return true;
}

std::vector<std::size_t> FiniteMeasurableSpace::atoms_in(const PointSet& set) const {
  if (set.size() != size()) throw StructuralError("set mask has the wrong size");
  if (!is_measurable(set)) throw MeasurabilityError("set is not a union of atoms");
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    if (set[atoms_[a].front()]) out.push_back(a);
  return out;
}

PointSet FiniteMeasurableSpace::set_of_atoms(const std::vector<std::size_t>& atom_indices) const {
  PointSet set(size(), false);
  for (std::size_t a : atom_indices)
    for (std::size_t p : atoms_.at(a)) set[p] = true;
  return set;
}

// ---------------------------------------------------------------------------

LatticeValuedMeasure::LatticeValuedMeasure(FiniteMeasurableSpace space, LatticePtr values_lattice,
                                           std::vector<RealVector> atom_values)
    : space_(std::move(space)), lattice_(std::move(values_lattice)), values_(std::move(atom_values)) {
  if (!lattice_) throw StructuralError("measure needs a value lattice");
  if (values_.size() != space_.atom_count())
    throw StructuralError("measure has " + std::to_string(values_.size()) + " atom values for " +
                          std::to_string(space_.atom_count()) + " atoms");
  for (std::size_t a = 0; a < values_.size(); ++a) {
    if (static_cast<std::size_t>(values_[a].size()) != lattice_->dim())
      throw StructuralError("value of atom " + std::to_string(a) + " has the wrong dimension");
    for (Eigen::Index i = 0; i < values_[a].size(); ++i) {
      if (!std::isfinite(values_[a][i])) throw StructuralError("measure value is not finite");
      if (values_[a][i] < 0.0)
        throw PositivityError("measure value of atom " + std::to_string(a) + " is negative at coordinate " +
                              std::to_string(i));
    }
  }
}

LatticeValuedMeasure LatticeValuedMeasure::zero(FiniteMeasurableSpace space, LatticePtr values_lattice) {
  const auto m = static_cast<Eigen::Index>(values_lattice->dim());
  std::vector<RealVector> values(space.atom_count(), RealVector::Zero(m));
  return {std::move(space), std::move(values_lattice), std::move(values)};
}

RealVector LatticeValuedMeasure::operator()(const PointSet& set) const {
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(value_dim()));
  for (std::size_t a : space_.atoms_in(set)) out += values_[a];
  return out;
}

RealVector LatticeValuedMeasure::total() const {
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(value_dim()));
  for (const auto& v : values_) out += v;
  return out;
}

// ---------------------------------------------------------------------------

MeasurableFunction::MeasurableFunction(const FiniteMeasurableSpace& space, ComplexVector table,
                                       std::optional<double> bound)
    : table_(std::move(table)) {
  if (static_cast<std::size_t>(table_.size()) != space.size())
    throw StructuralError("function table has " + std::to_string(table_.size()) + " entries for " +
                          std::to_string(space.size()) + " points");
  if (!table_.allFinite()) throw StructuralError("function table has non-finite entries");
  for (std::size_t a = 0; a < space.atom_count(); ++a) {
    const auto& atom = space.atoms()[a];
    const Complex v = table_[Eigen::Index(atom.front())];
    for (std::size_t p : atom)
      if (table_[Eigen::Index(p)] != v)
        throw MeasurabilityError("function is not constant on atom " + std::to_string(a));
  }
  const double sup = table_.size() ? table_.cwiseAbs().maxCoeff() : 0.0;
  if (bound) {
    if (sup > *bound) throw DomainError("function exceeds its declared bound");
    bound_ = *bound;
  } else {
    bound_ = sup;
  }
}

MeasurableFunction MeasurableFunction::indicator(const FiniteMeasurableSpace& space, const PointSet& set) {
  if (!space.is_measurable(set)) throw MeasurabilityError("indicator of a non-measurable set");
  ComplexVector table(static_cast<Eigen::Index>(space.size()));
  for (std::size_t p = 0; p < space.size(); ++p) table[Eigen::Index(p)] = set[p] ? 1.0 : 0.0;
  return {space, std::move(table)};
}

MeasurableFunction MeasurableFunction::constant(const FiniteMeasurableSpace& space, Complex c) {
  return {space, ComplexVector::Constant(static_cast<Eigen::Index>(space.size()), c)};
}

MeasurableFunction MeasurableFunction::conj() const {
  MeasurableFunction out = *this;
  out.table_ = table_.conjugate();
  return out;
}

MeasurableFunction MeasurableFunction::abs() const {
  MeasurableFunction out = *this;
  out.table_ = table_.cwiseAbs().cast<Complex>();
  return out;
}

// ---------------------------------------------------------------------------

RealVector integrate_elementary(const ElementaryFunction& phi, const LatticeValuedMeasure& mu) {
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(mu.value_dim()));
  for (const auto& [r, set] : phi.terms) {
    if (r < 0.0) throw DomainError("elementary function has a negative coefficient");
    out += r * mu(set);
  }
  return out;
}

ElementaryFunction level_set_decomposition(const RealVector& table) {
  std::map<double, PointSet> levels;
  const auto n = static_cast<std::size_t>(table.size());
  for (std::size_t p = 0; p < n; ++p) {
    const double v = table[Eigen::Index(p)];
    if (v < 0.0) throw DomainError("level-set decomposition of a function with negative values");
    if (v == 0.0) continue;
    auto [it, inserted] = levels.try_emplace(v, PointSet(n, false));
    it->second[p] = true;
  }
  ElementaryFunction phi;
  for (auto& [v, set] : levels) phi.terms.emplace_back(v, std::move(set));
  return phi;
}

namespace {

RealVector integrate_real(const RealVector& table, const LatticeValuedMeasure& mu) {
  const RealVector pos = table.cwiseMax(0.0);
  const RealVector neg = (-table).cwiseMax(0.0);
  return integrate_elementary(level_set_decomposition(pos), mu) - integrate_elementary(level_set_decomposition(neg), mu);
}

}  // namespace

ComplexElement integrate(const MeasurableFunction& f, const LatticeValuedMeasure& mu) {
  if (f.size() != mu.space().size()) throw MeasurabilityError("function and measure live on different spaces");
  // Revalidate measurability against mu's sigma-algebra.
  [[maybe_unused]] const MeasurableFunction checked(mu.space(), f.table());
  return {mu.values_lattice(), integrate_real(f.table().real(), mu), integrate_real(f.table().imag(), mu)};
}

LatticeValuedMeasure image_measure(const LatticeValuedMeasure& mu, const std::vector<std::size_t>& map,
                                   const FiniteMeasurableSpace& target) {
  const auto& source = mu.space();
  if (map.size() != source.size())
    throw StructuralError("map has " + std::to_string(map.size()) + " entries for " +
                          std::to_string(source.size()) + " points");
  for (std::size_t p = 0; p < map.size(); ++p)
    if (map[p] >= target.size())
      throw StructuralError("map sends point " + std::to_string(p) + " to " + std::to_string(map[p]) +
                            ", outside the target space");
  std::vector<RealVector> values;
  values.reserve(target.atom_count());
  for (std::size_t a = 0; a < target.atom_count(); ++a) {
    PointSet preimage(source.size(), false);
    for (std::size_t p = 0; p < source.size(); ++p) preimage[p] = target.atom_of(map[p]) == a;
    if (!source.is_measurable(preimage))
      throw MeasurabilityError("preimage of target atom " + std::to_string(a) + " is not measurable");
    values.push_back(mu(preimage));
  }
  return {target, mu.values_lattice(), std::move(values)};
}

MeasurableFunction pullback(const MeasurableFunction& f, const std::vector<std::size_t>& map,
                            const FiniteMeasurableSpace& source) {
  if (map.size() != source.size()) throw StructuralError("map does not cover the source space");
  ComplexVector table(static_cast<Eigen::Index>(source.size()));
  for (std::size_t p = 0; p < map.size(); ++p) {
    if (map[p] >= f.size()) throw StructuralError("map leaves the domain of the function");
    table[Eigen::Index(p)] = f(map[p]);
  }
  return {source, std::move(table)};
}

RealVector coordinatewise_product(const RealVector& a, const RealVector& b) { return a.cwiseProduct(b); }

SpectralVerdict is_spectral(const LatticeValuedMeasure& mu, const LatticeProduct& product, double tol) {
  SpectralVerdict verdict;
  const std::size_t atoms = mu.space().atom_count();
  const RealVector zero = RealVector::Zero(static_cast<Eigen::Index>(mu.value_dim()));
  verdict.idempotent.assign(atoms, false);
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t b = a; b < atoms; ++b) {
      const RealVector lhs = a == b ? mu.atom_value(a) : zero;
      const RealVector rhs = product(mu.atom_value(a), mu.atom_value(b));
      const double dev = max_deviation(lhs, rhs);
      verdict.max_deviation = std::max(verdict.max_deviation, dev);
      if (a == b) verdict.idempotent[a] = dev <= tol;
      if (dev > tol && !verdict.first_failure) verdict.first_failure = {a, b};
    }
  }
  verdict.spectral = !verdict.first_failure.has_value();
  return verdict;
}

LatticeValuedMeasure riesz_represent(const PositiveMap& pi, const FiniteMeasurableSpace& space,
                                     LatticePtr values_lattice) {
  std::vector<RealVector> values;
  values.reserve(space.atom_count());
  for (std::size_t a = 0; a < space.atom_count(); ++a) {
    RealVector chi = RealVector::Zero(static_cast<Eigen::Index>(space.size()));
    for (std::size_t p : space.atoms()[a]) chi[Eigen::Index(p)] = 1.0;
    RealVector v = pi(chi);
    if (static_cast<std::size_t>(v.size()) != values_lattice->dim())
      throw StructuralError("positive map returned a vector of the wrong dimension");
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] < 0.0)
        throw PositivityError("positive map is negative on the indicator of atom " + std::to_string(a) +
                              " at coordinate " + std::to_string(i));
    values.push_back(std::move(v));
  }
  return {space, std::move(values_lattice), std::move(values)};
}

namespace {

// Random table in [lo, hi], constant on atoms; `allowed` restricts the atoms
// that may carry a value other than `outside`.
RealVector random_atom_table(const FiniteMeasurableSpace& space, Rng& rng, double lo, double hi,
                             const std::vector<bool>* allowed = nullptr, double outside = 0.0) {
  RealVector table(static_cast<Eigen::Index>(space.size()));
  for (std::size_t a = 0; a < space.atom_count(); ++a) {
    const bool free = !allowed || (*allowed)[a];
    // Hit the endpoints now and then: extremal values matter for sup/inf.
    double v = rng.uniform(lo, hi);
    if (rng.coin(0.15)) v = rng.coin() ? lo : hi;
    for (std::size_t p : space.atoms()[a]) table[Eigen::Index(p)] = free ? v : outside;
  }
  return table;
}

bool dominated(const RealVector& a, const RealVector& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] > b[i] + tol * std::max({1.0, std::abs(a[i]), std::abs(b[i])})) return false;
  return true;
}

std::vector<std::vector<bool>> atom_subsets(std::size_t atoms, Rng& rng, std::size_t max_atoms) {
  std::vector<std::vector<bool>> out;
  if (atoms <= max_atoms) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << atoms); ++mask) {
      std::vector<bool> s(atoms);
      for (std::size_t a = 0; a < atoms; ++a) s[a] = (mask >> a) & 1U;
      out.push_back(std::move(s));
    }
  } else {
    for (int k = 0; k < 32; ++k) {
      std::vector<bool> s(atoms);
      for (std::size_t a = 0; a < atoms; ++a) s[a] = rng.coin();
      s[rng.index(atoms)] = true;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

RieszReport verify_riesz(const PositiveMap& pi, const LatticeValuedMeasure& mu, Rng& rng,
                         std::size_t function_samples, std::size_t formula_samples, double tol) {
  RieszReport report;
  const auto& space = mu.space();
  for (std::size_t s = 0; s < function_samples; ++s) {
    const RealVector f = random_atom_table(space, rng, -2.0, 2.0);
    const RealVector expected = pi(f);
    const ComplexElement got = integrate(MeasurableFunction(space, f.cast<Complex>()), mu);
    report.representation_deviation =
        std::max({report.representation_deviation, max_deviation(expected, got.re()), got.im().cwiseAbs().maxCoeff()});
  }

  report.sup_formula = true;
  report.inf_formula = true;
  for (const auto& chosen : atom_subsets(space.atom_count(), rng, 10)) {
    std::vector<std::size_t> atom_list;
    for (std::size_t a = 0; a < chosen.size(); ++a)
      if (chosen[a]) atom_list.push_back(a);
    const PointSet set = space.set_of_atoms(atom_list);
    const RealVector value = mu(set);
    RealVector chi = RealVector::Zero(static_cast<Eigen::Index>(space.size()));
    for (std::size_t p = 0; p < set.size(); ++p) chi[Eigen::Index(p)] = set[p] ? 1.0 : 0.0;

    // Open V: sup over 0 <= f <= 1 with supp f in V, attained at chi_V.
    bool sup_ok = max_deviation(pi(chi), value) <= tol;
    for (std::size_t s = 0; s < formula_samples && sup_ok; ++s)
      sup_ok = dominated(pi(random_atom_table(space, rng, 0.0, 1.0, &chosen, 0.0)), value, tol);
    // Compact K: inf over 0 <= f <= 1 with f = 1 on K, attained at chi_K.
    bool inf_ok = max_deviation(pi(chi), value) <= tol;
    std::vector<bool> complement(chosen.size());
    for (std::size_t a = 0; a < chosen.size(); ++a) complement[a] = !chosen[a];
    for (std::size_t s = 0; s < formula_samples && inf_ok; ++s) {
      RealVector f = random_atom_table(space, rng, 0.0, 1.0, &complement, 1.0);
      inf_ok = dominated(value, pi(f), tol);
    }
    report.sup_formula = report.sup_formula && sup_ok;
    report.inf_formula = report.inf_formula && inf_ok;
    ++report.sets_checked;
  }
  return report;
}

RegularityReport check_regularity(const LatticeValuedMeasure& mu, std::size_t max_atoms) {
  RegularityReport report{true, true, 0};
  const std::size_t atoms = mu.space().atom_count();
  if (atoms > max_atoms) throw PreconditionError("check_regularity: too many atoms for exhaustive enumeration");
  const std::uint64_t full = (std::uint64_t{1} << atoms) - 1;
  std::vector<RealVector> value(full + 1);
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    RealVector v = RealVector::Zero(static_cast<Eigen::Index>(mu.value_dim()));
    for (std::size_t a = 0; a < atoms; ++a)
      if ((mask >> a) & 1U) v += mu.atom_value(a);
    value[mask] = std::move(v);
  }
  for (std::uint64_t delta = 0; delta <= full; ++delta) {
    // Every subset of a finite discrete space is compact and open.
    RealVector inner = RealVector::Zero(static_cast<Eigen::Index>(mu.value_dim()));
    RealVector outer = value[full];
    for (std::uint64_t k = delta;; k = (k - 1) & delta) {
      inner = inner.cwiseMax(value[k]);
      if (k == 0) break;
    }
    for (std::uint64_t v = delta; v <= full; v = (v + 1) | delta) outer = outer.cwiseMin(value[v]);
    report.inner_regular = report.inner_regular && inner == value[delta];
    report.outer_regular = report.outer_regular && outer == value[delta];
    ++report.sets_checked;
  }
  return report;
}

// ---------------------------------------------------------------------------

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite double to a rational");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  boost::multiprecision::cpp_int numerator(scaled);
  boost::multiprecision::cpp_int denominator(1);
  if (exponent >= 0) {
    numerator <<= exponent;
  } else {
    denominator <<= -exponent;
  }
  return Rational(numerator, denominator);
}

ExactComplex to_exact(Complex z) { return {to_rational(z.real()), to_rational(z.imag())}; }

ExactMeasure::ExactMeasure(FiniteMeasurableSpace space, std::size_t value_dim,
                           std::vector<std::vector<Rational>> atom_values)
    : space_(std::move(space)), value_dim_(value_dim), values_(std::move(atom_values)) {
  if (values_.size() != space_.atom_count()) throw StructuralError("exact measure: atom count mismatch");
  for (const auto& v : values_) {
    if (v.size() != value_dim_) throw StructuralError("exact measure: value dimension mismatch");
    for (const auto& c : v)
      if (c < 0) throw PositivityError("exact measure has a negative value");
  }
}

ExactMeasure ExactMeasure::from(const LatticeValuedMeasure& mu) {
  std::vector<std::vector<Rational>> values;
  for (const auto& v : mu.atom_values()) {
    std::vector<Rational> row;
    row.reserve(std::size_t(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(to_rational(v[i]));
    values.push_back(std::move(row));
  }
  return {mu.space(), mu.value_dim(), std::move(values)};
}

std::vector<ExactComplex> integrate_exact(const std::vector<ExactComplex>& atom_table, const ExactMeasure& mu) {
  if (atom_table.size() != mu.space().atom_count()) throw StructuralError("exact integral: table size mismatch");
  std::vector<ExactComplex> out(mu.value_dim());
  for (std::size_t a = 0; a < atom_table.size(); ++a) {
    const auto& value = mu.atom_value(a);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (value[i] == 0) continue;
      out[i].re += atom_table[a].re * value[i];
      out[i].im += atom_table[a].im * value[i];
    }
  }
  return out;
}

bool is_spectral_exact(const ExactMeasure& mu) {
  const std::size_t atoms = mu.space().atom_count();
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t b = a; b < atoms; ++b) {
      for (std::size_t i = 0; i < mu.value_dim(); ++i) {
        const Rational product = mu.atom_value(a)[i] * mu.atom_value(b)[i];
        const Rational& expected = a == b ? mu.atom_value(a)[i] : Rational(0);
        if (product != expected) return false;
      }
    }
  }
  return true;
}

}  // namespace centrelat
