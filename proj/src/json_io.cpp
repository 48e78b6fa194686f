#include "centrelat/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace centrelat::io {

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw StructuralError(std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw StructuralError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t count(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw StructuralError(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

void check_dim(std::size_t got, std::size_t expected, const char* what) {
  if (got != expected)
    throw StructuralError(std::string(what) + " has " + std::to_string(got) + " entries, expected " +
                          std::to_string(expected));
}

/// Integral values are written as integers, so 1.0 prints as 1.
json scalar(double x) {
  if (x == 0.0) return 0;
  if (std::trunc(x) == x && std::abs(x) < 0x1p53) return static_cast<std::int64_t>(x);
  return x;
}

}  // namespace

json to_json(Complex z) { return json::array({scalar(z.real()), scalar(z.imag())}); }

Complex complex_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) throw StructuralError("complex numbers are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

ComplexVector complex_vector_from(const json& j) {
  if (!j.is_array()) throw StructuralError("expected an array of complex numbers");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = complex_from(j[i]);
  return v;
}

json to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar(v[i]));
  return out;
}

RealVector real_vector_from(const json& j) {
  if (!j.is_array()) throw StructuralError("expected an array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = number(j[i], "coordinate");
  return v;
}

json to_json(const NormSpec& spec) {
  if (std::holds_alternative<MaxNorm>(spec)) return {{"kind", "max"}};
  if (const auto* u = std::get_if<UserNorm>(&spec)) return {{"kind", "user"}, {"name", u->name}};
  const auto& w = std::get<WeightedPNorm>(spec);
  json p = std::isinf(w.p) ? json("inf") : json(w.p);
  return {{"kind", "weighted_p"}, {"weights", to_json(w.weights)}, {"p", p}};
}

NormSpec norm_from(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "max") return MaxNorm{};
  if (kind == "user") {
    try {
      return named_user_norm(field(j, "name").get<std::string>());
    } catch (const DomainError& e) {
      throw StructuralError(e.what());
    }
  }
  if (kind == "weighted_p") {
    const json& p = field(j, "p");
    const double pv = p.is_string() && p.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                                    : number(p, "p");
    return WeightedPNorm{real_vector_from(field(j, "weights")), pv};
  }
  throw StructuralError("unknown norm kind '" + kind + "'");
}

json to_json(const CoordinateLattice& lattice) {
  return {{"dim", lattice.dim()}, {"norm", to_json(lattice.norm_spec())}};
}

LatticePtr lattice_from(const json& j) {
  const std::size_t dim = count(field(j, "dim"), "dim");
  const NormSpec spec = j.contains("norm") ? norm_from(j.at("norm")) : NormSpec{MaxNorm{}};
  return CoordinateLattice::make(dim, spec);
}

json to_json(const ComplexElement& z) {
  json out = to_json(*z.lattice());
  out["re"] = to_json(z.re());
  out["im"] = to_json(z.im());
  return out;
}

ComplexElement element_from(const json& j) { return element_from(j, lattice_from(j)); }

ComplexElement element_from(const json& j, const LatticePtr& lattice) {
  RealVector re = real_vector_from(field(j, "re"));
  RealVector im = j.contains("im") ? real_vector_from(j.at("im")) : RealVector::Zero(re.size());
  check_dim(std::size_t(re.size()), lattice->dim(), "element real part");
  check_dim(std::size_t(im.size()), lattice->dim(), "element imaginary part");
  return {lattice, std::move(re), std::move(im)};
}

json to_json(const CentralOperator& t) { return {{"symbol", to_json(t.symbol())}}; }

CentralOperator central_from(const json& j, const LatticePtr& lattice) {
  ComplexVector symbol = complex_vector_from(field(j, "symbol"));
  check_dim(std::size_t(symbol.size()), lattice->dim(), "symbol");
  return {lattice, std::move(symbol)};
}

json to_json(const RegularOperator& t) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < t.entries().rows(); ++i) rows.push_back(to_json(ComplexVector(t.entries().row(i).transpose())));
  return {{"dim", t.dim()}, {"entries", rows}};
}

RegularOperator regular_from(const json& j, const LatticePtr& lattice) {
  const json& rows = field(j, "entries");
  if (!rows.is_array()) throw StructuralError("entries must be an array of rows");
  const auto n = static_cast<Eigen::Index>(lattice->dim());
  check_dim(rows.size(), lattice->dim(), "entries");
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ComplexVector row = complex_vector_from(rows[std::size_t(i)]);
    check_dim(std::size_t(row.size()), lattice->dim(), "entry row");
    m.row(i) = row.transpose();
  }
  return {lattice, std::move(m)};
}

json to_json(const LatticeValuedMeasure& mu) {
  const auto& space = mu.space();
  json points = json::array();
  for (std::size_t p = 0; p < space.size(); ++p)
    points.push_back(space.labels().empty() ? json(p) : json(space.labels()[p]));
  json values = json::object();
  for (std::size_t a = 0; a < space.atom_count(); ++a) values[std::to_string(a)] = to_json(mu.atom_value(a));
  return {{"points", points}, {"atoms", space.atoms()}, {"values", values}};
}

LatticeValuedMeasure measure_from(const json& j, const LatticePtr& values_lattice) {
  const json& points = field(j, "points");
  if (!points.is_array()) throw StructuralError("points must be an array");
  std::vector<std::string> labels;
  for (const auto& p : points) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  std::vector<std::vector<std::size_t>> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      std::vector<std::size_t> atom;
      for (const auto& p : a) atom.push_back(count(p, "atom member"));
      atoms.push_back(std::move(atom));
    }
  } else {
    for (std::size_t p = 0; p < points.size(); ++p) atoms.push_back({p});
  }
  FiniteMeasurableSpace space(points.size(), atoms, std::move(labels));
  const json& values = field(j, "values");
  std::vector<RealVector> atom_values(space.atom_count(), RealVector::Zero(Eigen::Index(values_lattice->dim())));
  for (const auto& [k, v] : values.items()) {
    std::size_t a = 0;
    try {
      a = std::stoul(k);
    } catch (const std::exception&) {
      throw StructuralError("measure value key '" + k + "' is not an atom index");
    }
    if (a >= space.atom_count()) throw StructuralError("measure value for unknown atom " + k);
    atom_values[a] = real_vector_from(v);
    check_dim(std::size_t(atom_values[a].size()), values_lattice->dim(), "measure value");
  }
  return {std::move(space), values_lattice, std::move(atom_values)};
}

json to_json(const OperatorSpectralMeasure& mu_t) {
  json projections = json::array();
  for (std::size_t k = 0; k < mu_t.size(); ++k) projections.push_back(to_json(mu_t.measure().atom_value(k)));
  json values = json::array();
  for (Complex l : mu_t.spectrum().attained) values.push_back(to_json(l));
  return {{"spectrum", values}, {"projections", projections}};
}

LatticeValuedMeasure stored_spectral_measure(const json& j, std::size_t dim, std::vector<Complex>& values) {
  const ComplexVector v = complex_vector_from(field(j, "spectrum"));
  values.assign(v.data(), v.data() + v.size());
  const json& projections = field(j, "projections");
  check_dim(projections.size(), values.size(), "projections");
  std::vector<RealVector> atom_values;
  for (const auto& p : projections) {
    atom_values.push_back(real_vector_from(p));
    check_dim(std::size_t(atom_values.back().size()), dim, "projection");
  }
  return {FiniteMeasurableSpace::discrete(values.size()), centre_lattice(dim), std::move(atom_values)};
}

json to_json(const SequenceSpec& spec) {
  json rule = {{"name", spec.rule.name}};
  if (spec.rule.name == "reciprocal") {
    rule["scale"] = to_json(spec.rule.scale);
    rule["offset"] = to_json(spec.rule.offset);
  } else if (spec.rule.name == "constant") {
    rule["value"] = to_json(spec.rule.value);
  } else if (spec.rule.name == "geometric") {
    rule["first"] = to_json(spec.rule.first);
    rule["ratio"] = to_json(spec.rule.ratio);
  } else {
    throw StructuralError("rule '" + spec.rule.name + "' has no serialized form");
  }
  json tail = {{"name", spec.tail.name}};
  if (spec.tail.name != "zero") tail["c"] = scalar(spec.tail.c);
  if (spec.tail.name == "geometric") tail["r"] = scalar(spec.tail.r);
  json acc = json::array();
  for (Complex a : spec.accumulation) acc.push_back(to_json(a));
  json out = {{"rule", rule}, {"sup", scalar(spec.sup)}, {"tail", tail}, {"accumulation", acc}};
  if (spec.multiplicity) {
    json values = json::array();
    for (Complex v : spec.multiplicity->values) values.push_back(to_json(v));
    out["multiplicity"] = {{"name", spec.multiplicity->name}, {"values", values}};
  }
  return out;
}

SequenceSpec sequence_from(const json& j) {
  SequenceSpec spec;
  const json& rule = field(j, "rule");
  spec.rule.name = rule.is_string() ? rule.get<std::string>() : field(rule, "name").get<std::string>();
  if (rule.is_object()) {
    if (rule.contains("scale")) spec.rule.scale = complex_from(rule["scale"]);
    if (rule.contains("offset")) spec.rule.offset = complex_from(rule["offset"]);
    if (rule.contains("value")) spec.rule.value = complex_from(rule["value"]);
    if (rule.contains("first")) spec.rule.first = complex_from(rule["first"]);
    if (rule.contains("ratio")) spec.rule.ratio = complex_from(rule["ratio"]);
  }
  spec.sup = number(field(j, "sup"), "sup");
  const json& tail = field(j, "tail");
  spec.tail.name = field(tail, "name").get<std::string>();
  if (tail.contains("c")) spec.tail.c = number(tail["c"], "tail constant");
  if (tail.contains("r")) spec.tail.r = number(tail["r"], "tail ratio");
  const ComplexVector acc = complex_vector_from(field(j, "accumulation"));
  spec.accumulation.assign(acc.data(), acc.data() + acc.size());
  if (j.contains("multiplicity") && !j["multiplicity"].is_null()) {
    MultiplicitySpec m;
    m.name = field(j["multiplicity"], "name").get<std::string>();
    if (j["multiplicity"].contains("values")) {
      const ComplexVector v = complex_vector_from(j["multiplicity"]["values"]);
      m.values.assign(v.data(), v.data() + v.size());
    }
    spec.multiplicity = std::move(m);
  }
  return spec;
}

json to_json(const Spectrum& sigma) {
  json out = json::array();
  for (Complex l : sigma.attained) out.push_back(to_json(l));
  return out;
}

}  // namespace centrelat::io
