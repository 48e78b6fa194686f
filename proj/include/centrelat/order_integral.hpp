#pragma once

// Measures with values in the positive cone of an atomic lattice, on finite
// measurable spaces, and the order integral against them.

#include "centrelat/lattice.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace centrelat {

/// Subset of a finite point set, as a membership mask.
using PointSet = std::vector<bool>;

PointSet make_point_set(std::size_t n, std::initializer_list<std::size_t> members);

/// A finite set X = {0, ..., n-1} with the sigma-algebra generated by a
/// partition into atoms. The default is the power set (singleton atoms).
class FiniteMeasurableSpace {
 public:
  /// Power set on n points.
  static FiniteMeasurableSpace discrete(std::size_t n);

  /// Throws StructuralError unless `atoms` partitions {0, ..., n-1}.
  FiniteMeasurableSpace(std::size_t n, std::vector<std::vector<std::size_t>> atoms,
                        std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return atom_of_.size(); }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  const std::vector<std::vector<std::size_t>>& atoms() const noexcept { return atoms_; }
  std::size_t atom_of(std::size_t point) const { return atom_of_.at(point); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// A set is measurable iff it is a union of atoms.
  bool is_measurable(const PointSet& set) const;
  /// Atoms contained in a measurable set; throws MeasurabilityError otherwise.
  std::vector<std::size_t> atoms_in(const PointSet& set) const;
  /// The union of the given atoms.
  PointSet set_of_atoms(const std::vector<std::size_t>& atom_indices) const;

  friend bool operator==(const FiniteMeasurableSpace& a, const FiniteMeasurableSpace& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<std::vector<std::size_t>> atoms_;
  std::vector<std::size_t> atom_of_;
  std::vector<std::string> labels_;
};

/// mu : Omega -> E^+, stored by its values on atoms. Finite additivity is
/// built in; on a finite space it is the whole of sigma-additivity.
class LatticeValuedMeasure {
 public:
  /// Throws PositivityError for a negative coordinate, StructuralError on
  /// size mismatches.
  LatticeValuedMeasure(FiniteMeasurableSpace space, LatticePtr values_lattice, std::vector<RealVector> atom_values);

  static LatticeValuedMeasure zero(FiniteMeasurableSpace space, LatticePtr values_lattice);

  const FiniteMeasurableSpace& space() const noexcept { return space_; }
  const LatticePtr& values_lattice() const noexcept { return lattice_; }
  std::size_t value_dim() const noexcept { return lattice_->dim(); }
  const RealVector& atom_value(std::size_t atom) const { return values_.at(atom); }
  const std::vector<RealVector>& atom_values() const noexcept { return values_; }

  /// mu(Delta); throws MeasurabilityError if Delta is not a union of atoms.
  RealVector operator()(const PointSet& set) const;
  RealVector total() const;

 private:
  FiniteMeasurableSpace space_;
  LatticePtr lattice_;
  std::vector<RealVector> values_;
};

/// A bounded complex function on X, constant on atoms.
class MeasurableFunction {
 public:
  /// Throws MeasurabilityError if the table is not constant on some atom,
  /// DomainError if a value exceeds the declared bound.
  MeasurableFunction(const FiniteMeasurableSpace& space, ComplexVector table, std::optional<double> bound = {});

  static MeasurableFunction indicator(const FiniteMeasurableSpace& space, const PointSet& set);
  static MeasurableFunction constant(const FiniteMeasurableSpace& space, Complex c);

  const ComplexVector& table() const noexcept { return table_; }
  double bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(table_.size()); }
  Complex operator()(std::size_t point) const { return table_[Eigen::Index(point)]; }

  MeasurableFunction conj() const;
  /// |f| as a (real) measurable function.
  MeasurableFunction abs() const;

 private:
  ComplexVector table_;
  double bound_ = 0.0;
};

/// phi = sum_k r_k chi_{Delta_k} with r_k >= 0 and measurable Delta_k.
struct ElementaryFunction {
  std::vector<std::pair<double, PointSet>> terms;
};

/// sum_k r_k mu(Delta_k).
RealVector integrate_elementary(const ElementaryFunction& phi, const LatticeValuedMeasure& mu);

/// Level-set decomposition of a nonnegative measurable table:
/// sum over distinct positive values r of r chi_{f = r}.
ElementaryFunction level_set_decomposition(const RealVector& nonnegative_table);

/// The order integral: int f = int (Re f)^+ - int (Re f)^- + i (...), each
/// part integrated through its level-set decomposition. Throws
/// MeasurabilityError if f does not live on mu's space.
ComplexElement integrate(const MeasurableFunction& f, const LatticeValuedMeasure& mu);

/// The image measure under map : X -> Y, (map mu)(Delta) = mu(map^{-1}(Delta)).
/// Throws StructuralError if the map leaves the target, MeasurabilityError if
/// a preimage of a target atom is not measurable.
LatticeValuedMeasure image_measure(const LatticeValuedMeasure& mu, const std::vector<std::size_t>& map,
                                   const FiniteMeasurableSpace& target);

/// f o map, a measurable function on the source space.
MeasurableFunction pullback(const MeasurableFunction& f, const std::vector<std::size_t>& map,
                            const FiniteMeasurableSpace& source);

/// An associative product on the value lattice.
using LatticeProduct = std::function<RealVector(const RealVector&, const RealVector&)>;

/// The coordinatewise product, which is the product of Z(E) in the atomic model.
RealVector coordinatewise_product(const RealVector& a, const RealVector& b);

struct SpectralVerdict {
  bool spectral = false;
  double max_deviation = 0.0;
  /// First atom pair (a, b) where mu(a & b) != mu(a) mu(b).
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;
  /// Per atom: mu(atom)^2 == mu(atom).
  std::vector<bool> idempotent;
};

/// mu(A & B) = mu(A) mu(B) on all atom pairs, which suffices by bilinearity.
SpectralVerdict is_spectral(const LatticeValuedMeasure& mu, const LatticeProduct& product = coordinatewise_product,
                            double tol = kExactTolerance);

/// Positive linear map from real functions on X (as tables) into E.
using PositiveMap = std::function<RealVector(const RealVector&)>;

/// mu(Delta) = pi(chi_Delta) on the atoms of `space`. Throws PositivityError
/// when some pi(chi_atom) has a negative coordinate.
LatticeValuedMeasure riesz_represent(const PositiveMap& pi, const FiniteMeasurableSpace& space,
                                     LatticePtr values_lattice);

struct RieszReport {
  /// max over sampled f of the scaled deviation |pi(f) - int f dmu|.
  double representation_deviation = 0.0;
  /// mu(V) dominates every sampled admissible pi(f) and is attained at chi_V.
  bool sup_formula = false;
  /// mu(K) is dominated by every sampled admissible pi(f) and attained at chi_K.
  bool inf_formula = false;
  std::size_t sets_checked = 0;
};

/// Checks pi(f) = int f dmu on `function_samples` random f, and the open and
/// compact recovery formulas with `formula_samples` admissible f per set plus
/// the extremal indicator. On finite discrete X every set is open and compact.
RieszReport verify_riesz(const PositiveMap& pi, const LatticeValuedMeasure& mu, Rng& rng,
                         std::size_t function_samples = 100, std::size_t formula_samples = 64,
                         double tol = kExactTolerance);

struct RegularityReport {
  bool inner_regular = false;
  bool outer_regular = false;
  std::size_t sets_checked = 0;
};

/// Inner regularity (sup over compact subsets) and outer regularity (inf over
/// open supersets) at every measurable set, exhaustively over unions of atoms
/// when there are at most `max_atoms` atoms.
RegularityReport check_regularity(const LatticeValuedMeasure& mu, std::size_t max_atoms = 10);

// --- exact rational mode --------------------------------------------------

using Rational = boost::multiprecision::cpp_rational;

struct ExactComplex {
  Rational re;
  Rational im;
  friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
};

/// The exact rational value of a finite double.
Rational to_rational(double x);
ExactComplex to_exact(Complex z);

/// A measure with exact rational values, for enumeration oracles.
class ExactMeasure {
 public:
  ExactMeasure(FiniteMeasurableSpace space, std::size_t value_dim, std::vector<std::vector<Rational>> atom_values);

  static ExactMeasure from(const LatticeValuedMeasure& mu);

  const FiniteMeasurableSpace& space() const noexcept { return space_; }
  std::size_t value_dim() const noexcept { return value_dim_; }
  const std::vector<Rational>& atom_value(std::size_t atom) const { return values_.at(atom); }

 private:
  FiniteMeasurableSpace space_;
  std::size_t value_dim_;
  std::vector<std::vector<Rational>> values_;
};

/// Exact integral of a function given by its per-atom values.
std::vector<ExactComplex> integrate_exact(const std::vector<ExactComplex>& atom_table, const ExactMeasure& mu);

/// Product law with the coordinatewise product, decided exactly.
bool is_spectral_exact(const ExactMeasure& mu);

}  // namespace centrelat
