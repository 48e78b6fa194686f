#include "centrelat/generate.hpp"

namespace centrelat::gen {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

LatticePtr random_lattice(Rng& rng, std::size_t dim) {
  const double pick = rng.uniform();
  if (pick < 0.2) return CoordinateLattice::max_norm(dim);
  if (pick < 0.35) return CoordinateLattice::make(dim, named_user_norm(rng.coin() ? "max_plus_mean" : "l1_l2_blend"));
  RealVector w(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.uniform(0.5, 2.0);
  static constexpr double kPs[] = {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  const double p = rng.coin(0.8) ? kPs[rng.index(4)] : rng.uniform(1.0, 6.0);
  return CoordinateLattice::weighted_p(std::move(w), p);
}

Complex random_scalar(Rng& rng) {
  const double scale = std::pow(10.0, double(rng.integer(-2, 2)));
  return scale * rng.unit_disc();
}

ComplexVector random_symbol(Rng& rng, std::size_t dim) {
  const std::size_t pool_size = 1 + rng.index(dim);
  std::vector<Complex> pool(pool_size);
  for (Complex& v : pool) {
    const double kind = rng.uniform();
    if (kind < 0.08) v = 0.0;
    else if (kind < 0.2) v = random_scalar(rng).real();
    else v = random_scalar(rng);
  }
  ComplexVector s(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = pool[rng.index(pool_size)];
  return s;
}

ComplexVector repeated_symbol(Rng& rng, std::size_t dim) {
  if (dim < 2) throw PreconditionError("a repeated symbol needs dim >= 2");
  ComplexVector s = random_symbol(rng, dim);
  const std::size_t a = rng.index(dim);
  std::size_t b = rng.index(dim - 1);
  if (b >= a) ++b;
  s[Eigen::Index(b)] = s[Eigen::Index(a)];
  return s;
}

CentralOperator random_central(Rng& rng, const LatticePtr& lattice) {
  return {lattice, random_symbol(rng, lattice->dim())};
}

ComplexMatrix random_dense(Rng& rng, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

ComplexElement random_element(Rng& rng, const LatticePtr& lattice) {
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  RealVector re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = rng.coin(0.3) ? 0.0 : std::pow(10.0, rng.uniform(-2.0, 1.0));
    re[i] = scale * rng.normal();
    im[i] = scale * rng.normal();
  }
  return {lattice, std::move(re), std::move(im)};
}

RealVector random_generator(Rng& rng, std::size_t dim) {
  RealVector u(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.coin(0.7) ? rng.uniform(0.1, 3.0) : 0.0;
  if (u.maxCoeff() <= 0.0) u[Eigen::Index(rng.index(dim))] = 1.0;
  return u;
}

LatticeValuedMeasure random_measure(Rng& rng, const LatticePtr& values_lattice) {
  const std::size_t points = 2 + rng.index(5);
  const std::size_t atom_count = 1 + rng.index(points);
  std::vector<std::vector<std::size_t>> atoms(atom_count);
  // Every atom gets one point first, the rest land at random.
  std::vector<std::size_t> order(points);
  for (std::size_t p = 0; p < points; ++p) order[p] = p;
  for (std::size_t p = points; p > 1; --p) std::swap(order[p - 1], order[rng.index(p)]);
  for (std::size_t p = 0; p < points; ++p) atoms[p < atom_count ? p : rng.index(atom_count)].push_back(order[p]);
  for (auto& a : atoms) std::sort(a.begin(), a.end());
  FiniteMeasurableSpace space(points, std::move(atoms));
  std::vector<RealVector> values;
  for (std::size_t a = 0; a < atom_count; ++a) {
    RealVector v(static_cast<Eigen::Index>(values_lattice->dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.coin(0.25) ? 0.0 : rng.uniform(0.0, 2.0);
    values.push_back(std::move(v));
  }
  return {std::move(space), values_lattice, std::move(values)};
}

MeasurableFunction random_function(Rng& rng, const FiniteMeasurableSpace& space) {
  ComplexVector table(static_cast<Eigen::Index>(space.size()));
  for (const auto& atom : space.atoms()) {
    const Complex v = rng.coin(0.15) ? Complex{} : random_scalar(rng);
    for (std::size_t p : atom) table[Eigen::Index(p)] = v;
  }
  return {space, std::move(table)};
}

const std::vector<std::string>& sequence_rule_names() {
  static const std::vector<std::string> names{"reciprocal", "constant", "geometric", "shifted_reciprocal"};
  return names;
}

SequenceSpec canonical_sequence(const std::string& rule) {
  if (rule == "reciprocal") return SequenceCentralOperator::reciprocal().spec();
  if (rule == "constant") return SequenceCentralOperator::constant(1.0).spec();
  if (rule == "geometric") return SequenceCentralOperator::geometric(1.0, 0.5).spec();
  if (rule == "shifted_reciprocal") return SequenceCentralOperator::reciprocal(1.0, 1.0).spec();
  throw DomainError("unknown sequence rule '" + rule + "'");
}

namespace {

SequenceSpec random_sequence(Rng& rng, const std::string& rule) {
  Complex a = rng.unit_disc();
  if (a == Complex{}) a = 1.0;
  if (rule == "reciprocal") return SequenceCentralOperator::reciprocal(a, 0.0).spec();
  if (rule == "constant") return SequenceCentralOperator::constant(a).spec();
  if (rule == "geometric") return SequenceCentralOperator::geometric(a, 0.9 * rng.unit_disc()).spec();
  return SequenceCentralOperator::reciprocal(a, random_scalar(rng)).spec();
}

}  // namespace

io::json generate_instance(const GenOptions& options, std::size_t index) {
  const std::uint64_t seed = mix(options.seed ^ mix(index));
  Rng rng(seed);
  io::json out;
  out["id"] = index;
  out["seed"] = seed;
  if (options.mode == "sequence") {
    out["kind"] = "sequence";
    // The first instances are the canonical ones: every family in turn, or
    // index 0 of a fixed family. Later instances draw random parameters.
    const auto& names = sequence_rule_names();
    const bool fixed = !options.rule.empty();
    std::string rule = fixed ? options.rule : (index < names.size() ? names[index] : names[rng.index(names.size())]);
    const bool canonical = fixed ? index == 0 : index < names.size();
    out["rule_family"] = rule;
    out["sequence"] = io::to_json(canonical ? canonical_sequence(rule) : random_sequence(rng, rule));
    return out;
  }
  if (options.mode != "atomic") throw DomainError("unknown mode '" + options.mode + "'");

  out["kind"] = "atomic";
  const std::size_t dim = options.dim_lo + rng.index(options.dim_hi - options.dim_lo + 1);
  const LatticePtr lattice = random_lattice(rng, dim);
  const CentralOperator t = random_central(rng, lattice);
  // S reuses some of T's values so that commutation patterns are nontrivial.
  ComplexVector s = random_symbol(rng, dim);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (rng.coin()) s[i] = t.symbol()[Eigen::Index(rng.index(dim))];
  out["lattice"] = io::to_json(*lattice);
  out["T"] = io::to_json(t);
  out["S"] = io::to_json(CentralOperator(lattice, s));
  out["X"] = io::to_json(RegularOperator(lattice, random_dense(rng, dim)));
  out["z"] = io::to_json(random_element(rng, lattice));
  out["u"] = io::to_json(random_generator(rng, dim));
  out["measure"] = io::to_json(random_measure(rng, lattice));
  out["mu_T"] = io::to_json(build_mu_T(t));
  return out;
}

std::vector<io::json> generate(const GenOptions& options) {
  if (options.dim_lo == 0 || options.dim_hi < options.dim_lo) throw DomainError("invalid dimension range");
  std::vector<io::json> out;
  out.reserve(options.count);
  for (std::size_t k = 0; k < options.count; ++k) out.push_back(generate_instance(options, k));
  return out;
}

}  // namespace centrelat::gen
