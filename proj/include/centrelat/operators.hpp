#pragma once

// Regular operators on E_C as complex matrices, and the centre Z(E_C), which
// in the atomic model consists exactly of the diagonal operators.

#include "centrelat/lattice.hpp"

#include <optional>
#include <vector>

namespace centrelat {

class RegularOperator {
 public:
  RegularOperator(LatticePtr lattice, ComplexMatrix entries);

  static RegularOperator identity(LatticePtr lattice);

  const LatticePtr& lattice() const noexcept { return lattice_; }
  std::size_t dim() const noexcept { return lattice_->dim(); }
  const ComplexMatrix& entries() const noexcept { return entries_; }

  ComplexElement apply(const ComplexElement& z) const;
  RegularOperator conj() const;

  friend RegularOperator operator*(const RegularOperator& a, const RegularOperator& b);
  friend RegularOperator operator-(const RegularOperator& a, const RegularOperator& b);

 private:
  LatticePtr lattice_;
  ComplexMatrix entries_;
};

/// A central operator, stored as its diagonal symbol (its Gelfand transform).
class CentralOperator {
 public:
  CentralOperator(LatticePtr lattice, ComplexVector symbol);

  static CentralOperator identity(LatticePtr lattice);
  static CentralOperator scalar(LatticePtr lattice, Complex c);
  /// The order projection onto the coordinates where mask is true.
  static CentralOperator projection(LatticePtr lattice, const std::vector<bool>& mask);

  const LatticePtr& lattice() const noexcept { return lattice_; }
  std::size_t dim() const noexcept { return lattice_->dim(); }
  const ComplexVector& symbol() const noexcept { return symbol_; }
  Complex operator[](std::size_t i) const { return symbol_[Eigen::Index(i)]; }

  CentralOperator conj() const;
  /// |T|, with symbol the coordinatewise modulus.
  CentralOperator modulus() const;

  RegularOperator to_regular() const;
  ComplexMatrix matrix() const;
  ComplexElement apply(const ComplexElement& z) const;

  bool is_invertible() const;
  /// Throws DomainError when some symbol entry vanishes.
  CentralOperator inverse() const;

  /// inf{ lambda >= 0 : |T| <= lambda I } = max_i |symbol_i|.
  double order_unit_norm() const;

  friend CentralOperator operator*(const CentralOperator& a, const CentralOperator& b);
  friend CentralOperator operator+(const CentralOperator& a, const CentralOperator& b);
  friend CentralOperator operator-(const CentralOperator& a, const CentralOperator& b);
  friend CentralOperator operator*(Complex c, const CentralOperator& t);
  friend bool operator==(const CentralOperator& a, const CentralOperator& b) { return a.symbol_ == b.symbol_; }

 private:
  LatticePtr lattice_;
  ComplexVector symbol_;
};

/// Entrywise complex modulus: the modulus of T in L_r(E_C) for atomic E.
RegularOperator operator_modulus(const RegularOperator& t);

struct CentralityVerdict {
  bool central = false;
  double max_off_diagonal = 0.0;
  /// Position of the largest off-diagonal modulus (meaningful when dim > 1).
  std::size_t row = 0;
  std::size_t col = 0;
  std::optional<CentralOperator> op;
};

/// T is central iff every off-diagonal modulus is at most tol; the symbol is
/// then the diagonal.
CentralityVerdict is_central(const RegularOperator& t, double tol = kExactTolerance);

struct NormReport {
  double order_unit = 0.0;
  double operator_norm = 0.0;
  double regular = 0.0;
  /// Basis vector e_k at which ||T e_k|| / ||e_k|| attains the norm.
  std::size_t attaining_index = 0;
  double attained_ratio = 0.0;
  /// Largest ||T z|| / ||z|| over the random sample.
  double sampled_max_ratio = 0.0;
  std::size_t samples = 0;
  /// Attainment matched and no sample exceeded the order unit norm.
  bool certified = false;
};

/// Order unit, operator, and regular norm of a central operator. The operator
/// norm is certified: attained at a basis vector and not exceeded by any of
/// `samples` random vectors.
NormReport norms(const CentralOperator& t, std::size_t samples = 1000, std::uint64_t seed = 0x5eed,
                 double tol = kExactTolerance);

struct OperatorNormBounds {
  double sampled_lower = 0.0;
  /// Riesz-Thorin bound for |T| after conjugating by the lattice weights;
  /// the max row sum of |T| for the max norm. Infinite for user norms.
  double row_sum_upper = 0.0;
};

/// Certified bounds for the operator norm of a non-central regular operator.
OperatorNormBounds operator_norm_bounds(const RegularOperator& t, std::size_t samples = 1000,
                                        std::uint64_t seed = 0x5eed);

struct FprVerdict {
  bool commutes = false;            // S X = X T
  bool conjugate_commutes = false;  // conj(S) X = X conj(T)
  bool implication_holds = false;   // commutes => conjugate_commutes
  /// Entrywise form: X_ij (s_i - t_j) = 0 iff S X = X T, and likewise for the
  /// conjugates; true when both equivalences came out consistent.
  bool entrywise_consistent = false;
  double commutator_deviation = 0.0;
  double conjugate_deviation = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> first_violation;
};

FprVerdict fpr_check(const CentralOperator& s, const CentralOperator& t, const RegularOperator& x,
                     double tol = kExactTolerance);

struct PolarFactors {
  CentralOperator positive;  // P >= 0
  CentralOperator unitary;   // |U| = I
};

/// T = P U with P = |T|. U = symbol / |symbol| off the kernel and 1 on it.
PolarFactors polar(const CentralOperator& t);

struct Localization {
  std::vector<std::size_t> support;
  /// M(T): the symbol of T restricted to J_u, indexed along `support`.
  ComplexVector symbol;
  bool conjugate_compatible = false;  // M(conj T) = conj M(T)
  bool modulus_compatible = false;    // M(|T|) = |M(T)|
  double image_ideal_norm = 0.0;      // ||T u||_u
  double symbol_sup = 0.0;            // max |M(T)|
  bool isometric = false;
};

Localization localize(const CentralOperator& t, const PrincipalIdeal& ideal, double tol = kExactTolerance);

/// The centre Z(E) as a lattice: R^dim with the order unit (max) norm.
LatticePtr centre_lattice(std::size_t dim);

}  // namespace centrelat
