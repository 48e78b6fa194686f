#pragma once

// Finite-dimensional atomic Banach lattices R^n, their complexifications,
// principal order ideals, and certificates for sigma-order convergence.

#include "centrelat/random.hpp"
#include "centrelat/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace centrelat {

/// (sum_i w_i |x_i|^p)^(1/p); p may be +infinity, giving max_i w_i |x_i|.
struct WeightedPNorm {
  RealVector weights;
  double p = 2.0;
};

/// max_i |x_i|.
struct MaxNorm {};

/// A norm given by a rule on the vector of moduli. The rule must be a
/// lattice norm; spot_check_lattice_norm() exercises that on random data.
/// Rules are identified by name so that lattices stay serializable.
struct UserNorm {
  std::string name;
  std::function<double(const RealVector&)> rule;
};

using NormSpec = std::variant<WeightedPNorm, MaxNorm, UserNorm>;

/// Builtin user-table norms: "max_plus_mean" (max|x| + mean|x|) and
/// "l1_l2_blend" ((||x||_1 + ||x||_2) / 2). Throws DomainError otherwise.
UserNorm named_user_norm(const std::string& name);

class CoordinateLattice;
using LatticePtr = std::shared_ptr<const CoordinateLattice>;

/// R^dim with coordinatewise order and a lattice norm. Immutable.
class CoordinateLattice {
 public:
  CoordinateLattice(std::size_t dim, NormSpec spec);

  static LatticePtr make(std::size_t dim, NormSpec spec);
  static LatticePtr max_norm(std::size_t dim);
  static LatticePtr weighted_p(RealVector weights, double p);

  std::size_t dim() const noexcept { return dim_; }
  const NormSpec& norm_spec() const noexcept { return spec_; }

  /// Lattice norm evaluated on a vector of moduli (entries >= 0).
  double norm(const RealVector& moduli) const;

  std::string describe() const;

 private:
  std::size_t dim_;
  NormSpec spec_;
};

/// Randomized monotonicity check: |x| <= |y| implies ||x|| <= ||y||.
/// Returns false at the first counterexample.
bool spot_check_lattice_norm(const CoordinateLattice& lattice, Rng& rng, int trials = 256);

/// An element x + iy of the complexification E_C.
class ComplexElement {
 public:
  ComplexElement(LatticePtr lattice, RealVector re, RealVector im);

  static ComplexElement real(LatticePtr lattice, RealVector re);
  static ComplexElement from_values(LatticePtr lattice, const ComplexVector& values);
  static ComplexElement zero(LatticePtr lattice);
  static ComplexElement basis(LatticePtr lattice, std::size_t i);

  const LatticePtr& lattice() const noexcept { return lattice_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(re_.size()); }
  const RealVector& re() const noexcept { return re_; }
  const RealVector& im() const noexcept { return im_; }

  Complex operator[](std::size_t i) const { return {re_[Eigen::Index(i)], im_[Eigen::Index(i)]}; }
  ComplexVector values() const;

  ComplexElement conj() const;

  /// ||z|| := || |z| ||, the lattice norm of the modulus.
  double norm() const;

  friend ComplexElement operator+(const ComplexElement& a, const ComplexElement& b);
  friend ComplexElement operator-(const ComplexElement& a, const ComplexElement& b);
  friend ComplexElement operator*(Complex c, const ComplexElement& z);
  friend bool operator==(const ComplexElement& a, const ComplexElement& b);

 private:
  LatticePtr lattice_;
  RealVector re_;
  RealVector im_;
};

/// |z|_i = sqrt(re_i^2 + im_i^2).
RealVector modulus(const ComplexElement& z);
RealVector modulus(const ComplexVector& z);
/// Closed form from separate parts; throws StructuralError on size mismatch.
RealVector modulus(const RealVector& re, const RealVector& im);

struct LatticePair {
  RealVector join;
  RealVector meet;
};

/// Coordinatewise max and min.
LatticePair lattice_ops(const RealVector& x, const RealVector& y);

/// J_u = { z : |z| <= lambda u for some lambda }.
class PrincipalIdeal {
 public:
  /// Throws DomainError if u has a negative entry or is zero.
  explicit PrincipalIdeal(RealVector generator);

  const RealVector& generator() const noexcept { return generator_; }
  const std::vector<std::size_t>& support() const noexcept { return support_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(generator_.size()); }

  bool contains(const ComplexVector& z) const { return !first_outside(z).has_value(); }
  bool contains(const ComplexElement& z) const { return contains(z.values()); }

  /// First coordinate off the support where z is nonzero.
  std::optional<std::size_t> first_outside(const ComplexVector& z) const;

 private:
  RealVector generator_;
  std::vector<std::size_t> support_;
};

/// ||z||_u = max over the support of |z_i| / u_i.
/// Throws DomainError naming the coordinate when z is not in J_u.
double ideal_norm(const ComplexVector& z, const PrincipalIdeal& ideal);
double ideal_norm(const ComplexElement& z, const PrincipalIdeal& ideal);

/// Bound on the dominating sequence past its listed terms.
/// bound(n) >= max coordinate of u_m for every m >= n, and bound(n) -> 0.
struct TailRule {
  std::function<double(std::size_t)> bound;
  std::string description;
};

/// u_1 >= u_2 >= ... >= 0 with u_n -> 0, dominating |z_n - z|.
struct ConvergenceWitness {
  std::vector<RealVector> dominating;
  std::string claim;
  std::optional<TailRule> tail;
};

struct WitnessVerdict {
  bool holds = false;
  /// 1-based index of the first violated term, when there is one.
  std::optional<std::size_t> violation_index;
  std::string reason;
  /// Largest amount by which |z_n - z| exceeded u_n.
  double max_excess = 0.0;
};

struct WitnessOptions {
  double tolerance = kWitnessTolerance;
  /// Scaled rounding slack used in the domination comparison.
  double slack = kExactTolerance;
};

/// Checks that the witness certifies z_n -> z in sigma-order.
WitnessVerdict check_witness(std::span<const ComplexVector> values, const ComplexVector& limit,
                             const ConvergenceWitness& witness, WitnessOptions options = {});

}  // namespace centrelat
