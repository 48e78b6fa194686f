#include "centrelat/lattice.hpp"

#include <limits>
#include <sstream>

namespace centrelat {

std::string format_complex(Complex z) {
  std::ostringstream out;
  out.precision(17);
  out << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i)";
  return out.str();
}

UserNorm named_user_norm(const std::string& name) {
  if (name == "max_plus_mean") {
    return {name, [](const RealVector& a) {
              if (a.size() == 0) return 0.0;
              return a.maxCoeff() + a.sum() / static_cast<double>(a.size());
            }};
  }
  if (name == "l1_l2_blend") {
    return {name, [](const RealVector& a) { return 0.5 * (a.sum() + a.norm()); }};
  }
  throw DomainError("unknown user norm '" + name + "'");
}

CoordinateLattice::CoordinateLattice(std::size_t dim, NormSpec spec) : dim_(dim), spec_(std::move(spec)) {
  if (dim_ == 0) throw StructuralError("lattice dimension must be at least 1");
  if (auto* w = std::get_if<WeightedPNorm>(&spec_)) {
    if (static_cast<std::size_t>(w->weights.size()) != dim_)
      throw StructuralError("weight vector has " + std::to_string(w->weights.size()) +
                            " entries, lattice has dimension " + std::to_string(dim_));
    for (Eigen::Index i = 0; i < w->weights.size(); ++i) {
      if (!(w->weights[i] > 0.0) || !std::isfinite(w->weights[i]))
        throw DomainError("weight " + std::to_string(i) + " is not strictly positive");
    }
    if (!(w->p >= 1.0)) throw DomainError("norm exponent p must lie in [1, inf]");
  } else if (auto* u = std::get_if<UserNorm>(&spec_)) {
    if (!u->rule) throw StructuralError("user norm '" + u->name + "' has no rule");
  }
}

LatticePtr CoordinateLattice::make(std::size_t dim, NormSpec spec) {
  return std::make_shared<const CoordinateLattice>(dim, std::move(spec));
}

LatticePtr CoordinateLattice::max_norm(std::size_t dim) { return make(dim, MaxNorm{}); }

LatticePtr CoordinateLattice::weighted_p(RealVector weights, double p) {
  const auto dim = static_cast<std::size_t>(weights.size());
  return make(dim, WeightedPNorm{std::move(weights), p});
}

double CoordinateLattice::norm(const RealVector& moduli) const {
  if (static_cast<std::size_t>(moduli.size()) != dim_)
    throw StructuralError("norm argument has the wrong dimension");
  return std::visit(
      [&](const auto& spec) -> double {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, MaxNorm>) {
          return moduli.maxCoeff();
        } else if constexpr (std::is_same_v<S, WeightedPNorm>) {
          if (std::isinf(spec.p)) return spec.weights.cwiseProduct(moduli).maxCoeff();
          if (spec.p == 1.0) return spec.weights.dot(moduli);
          // Scale by the largest modulus so that large p does not overflow.
          const double top = moduli.maxCoeff();
          if (top == 0.0) return 0.0;
          double acc = 0.0;
          for (Eigen::Index i = 0; i < moduli.size(); ++i)
            acc += spec.weights[i] * std::pow(moduli[i] / top, spec.p);
          return top * std::pow(acc, 1.0 / spec.p);
        } else {
          return spec.rule(moduli);
        }
      },
      spec_);
}

std::string CoordinateLattice::describe() const {
  std::ostringstream out;
  out << "R^" << dim_ << " with ";
  std::visit(
      [&](const auto& spec) {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, MaxNorm>) {
          out << "max norm";
        } else if constexpr (std::is_same_v<S, WeightedPNorm>) {
          out << "weighted l^" << spec.p << " norm";
        } else {
          out << "user norm '" << spec.name << "'";
        }
      },
      spec_);
  return out.str();
}

bool spot_check_lattice_norm(const CoordinateLattice& lattice, Rng& rng, int trials) {
  const auto n = static_cast<Eigen::Index>(lattice.dim());
  for (int t = 0; t < trials; ++t) {
    RealVector y(n), x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = rng.uniform(0.0, 10.0);
      x[i] = y[i] * rng.uniform();
    }
    if (lattice.norm(x) > lattice.norm(y) * (1.0 + kExactTolerance)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

ComplexElement::ComplexElement(LatticePtr lattice, RealVector re, RealVector im)
    : lattice_(std::move(lattice)), re_(std::move(re)), im_(std::move(im)) {
  if (!lattice_) throw StructuralError("complex element needs a lattice");
  if (re_.size() != im_.size())
    throw StructuralError("real part has " + std::to_string(re_.size()) + " entries, imaginary part has " +
                          std::to_string(im_.size()));
  if (static_cast<std::size_t>(re_.size()) != lattice_->dim())
    throw StructuralError("element dimension " + std::to_string(re_.size()) + " does not match lattice dimension " +
                          std::to_string(lattice_->dim()));
  if (!re_.allFinite() || !im_.allFinite()) throw StructuralError("element has non-finite entries");
}

ComplexElement ComplexElement::real(LatticePtr lattice, RealVector re) {
  RealVector im = RealVector::Zero(re.size());
  return {std::move(lattice), std::move(re), std::move(im)};
}

ComplexElement ComplexElement::from_values(LatticePtr lattice, const ComplexVector& values) {
  return {std::move(lattice), values.real(), values.imag()};
}

ComplexElement ComplexElement::zero(LatticePtr lattice) {
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  return {std::move(lattice), RealVector::Zero(n), RealVector::Zero(n)};
}

ComplexElement ComplexElement::basis(LatticePtr lattice, std::size_t i) {
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  if (i >= lattice->dim()) throw StructuralError("basis index out of range");
  RealVector re = RealVector::Zero(n);
  re[Eigen::Index(i)] = 1.0;
  return {std::move(lattice), std::move(re), RealVector::Zero(n)};
}

ComplexVector ComplexElement::values() const {
  ComplexVector out(re_.size());
  out.real() = re_;
  out.imag() = im_;
  return out;
}

ComplexElement ComplexElement::conj() const { return {lattice_, re_, -im_}; }

double ComplexElement::norm() const { return lattice_->norm(modulus(*this)); }

namespace {
void require_same_dim(const ComplexElement& a, const ComplexElement& b) {
  if (a.dim() != b.dim()) throw StructuralError("elements have different dimensions");
}
}  // namespace

ComplexElement operator+(const ComplexElement& a, const ComplexElement& b) {
  require_same_dim(a, b);
  return {a.lattice_, a.re_ + b.re_, a.im_ + b.im_};
}

ComplexElement operator-(const ComplexElement& a, const ComplexElement& b) {
  require_same_dim(a, b);
  return {a.lattice_, a.re_ - b.re_, a.im_ - b.im_};
}

ComplexElement operator*(Complex c, const ComplexElement& z) {
  return {z.lattice_, c.real() * z.re_ - c.imag() * z.im_, c.real() * z.im_ + c.imag() * z.re_};
}

bool operator==(const ComplexElement& a, const ComplexElement& b) {
  return a.dim() == b.dim() && a.re_ == b.re_ && a.im_ == b.im_;
}

RealVector modulus(const RealVector& re, const RealVector& im) {
  if (re.size() != im.size()) throw StructuralError("modulus: real and imaginary parts differ in length");
  RealVector out(re.size());
  for (Eigen::Index i = 0; i < re.size(); ++i) out[i] = std::hypot(re[i], im[i]);
  return out;
}

RealVector modulus(const ComplexElement& z) { return modulus(z.re(), z.im()); }

RealVector modulus(const ComplexVector& z) {
  RealVector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out[i] = std::abs(z[i]);
  return out;
}

LatticePair lattice_ops(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) throw StructuralError("lattice_ops: dimension mismatch");
  return {x.cwiseMax(y), x.cwiseMin(y)};
}

// ---------------------------------------------------------------------------

PrincipalIdeal::PrincipalIdeal(RealVector generator) : generator_(std::move(generator)) {
  for (Eigen::Index i = 0; i < generator_.size(); ++i) {
    if (!(generator_[i] >= 0.0) || !std::isfinite(generator_[i]))
      throw DomainError("ideal generator has a negative entry at coordinate " + std::to_string(i));
    if (generator_[i] > 0.0) support_.push_back(static_cast<std::size_t>(i));
  }
  if (support_.empty()) throw DomainError("ideal generator must be nonzero");
}

std::optional<std::size_t> PrincipalIdeal::first_outside(const ComplexVector& z) const {
  if (z.size() != generator_.size()) throw StructuralError("element and ideal generator differ in dimension");
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (generator_[i] == 0.0 && z[i] != Complex{}) return static_cast<std::size_t>(i);
  }
  return std::nullopt;
}

double ideal_norm(const ComplexVector& z, const PrincipalIdeal& ideal) {
  if (auto bad = ideal.first_outside(z))
    throw DomainError("element is not in the principal ideal: coordinate " + std::to_string(*bad) +
                      " is nonzero off the support of the generator");
  double best = 0.0;
  for (std::size_t i : ideal.support()) {
    const auto k = static_cast<Eigen::Index>(i);
    best = std::max(best, std::abs(z[k]) / ideal.generator()[k]);
  }
  return best;
}

double ideal_norm(const ComplexElement& z, const PrincipalIdeal& ideal) { return ideal_norm(z.values(), ideal); }

// ---------------------------------------------------------------------------

WitnessVerdict check_witness(std::span<const ComplexVector> values, const ComplexVector& limit,
                             const ConvergenceWitness& witness, WitnessOptions options) {
  WitnessVerdict verdict;
  const auto& u = witness.dominating;
  if (u.empty()) {
    verdict.reason = "witness has no dominating terms";
    return verdict;
  }
  if (values.size() != u.size()) {
    verdict.reason = "witness has " + std::to_string(u.size()) + " terms for " + std::to_string(values.size()) +
                     " sequence values";
    return verdict;
  }
  auto fail = [&](std::size_t n, std::string why) {
    if (!verdict.violation_index) {
      verdict.violation_index = n + 1;
      verdict.reason = std::move(why);
    }
  };
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u[n].size() != limit.size() || values[n].size() != limit.size()) {
      fail(n, "term has the wrong dimension");
      continue;
    }
    if ((u[n].array() < 0.0).any()) fail(n, "dominating term has a negative coordinate");
    if (n > 0 && (u[n].array() > u[n - 1].array()).any()) fail(n, "dominating sequence increases");
    for (Eigen::Index i = 0; i < limit.size(); ++i) {
      const double gap = std::abs(values[n][i] - limit[i]);
      const double scale = std::max({1.0, std::abs(values[n][i]), std::abs(limit[i])});
      const double excess = gap - u[n][i];
      if (excess > options.slack * scale) {
        verdict.max_excess = std::max(verdict.max_excess, excess);
        fail(n, "|z_n - z| exceeds u_n at coordinate " + std::to_string(i));
      }
    }
  }
  if (verdict.violation_index) return verdict;

  const double last = u.back().size() ? u.back().maxCoeff() : 0.0;
  if (witness.tail) {
    const auto& bound = witness.tail->bound;
    const std::size_t listed = u.size();
    if (last > bound(listed) * (1.0 + options.slack) + options.slack) {
      fail(listed - 1, "tail rule does not dominate the last listed term");
      return verdict;
    }
    double previous = bound(listed);
    bool reached = previous < options.tolerance;
    std::size_t n = listed;
    for (int step = 0; step < 60 && !reached; ++step) {
      if (n > (std::numeric_limits<std::size_t>::max() >> 2)) break;
      n *= 2;
      const double b = bound(n);
      if (b > previous) {
        verdict.reason = "tail rule increases at index " + std::to_string(n);
        return verdict;
      }
      previous = b;
      reached = b < options.tolerance;
    }
    if (!reached) {
      verdict.reason = "tail rule does not decay below the witness tolerance";
      return verdict;
    }
  } else if (!(last < options.tolerance)) {
    verdict.reason = "last dominating term is not below the witness tolerance and no tail rule is given";
    return verdict;
  }
  verdict.holds = true;
  return verdict;
}

}  // namespace centrelat
