#pragma once

// JSON forms of lattices, elements, operators, measures, and sequence
// certificates. Complex numbers are two-element arrays [re, im]. Malformed
// input raises StructuralError.

#include "centrelat/sequence.hpp"

#include <json.hpp>

namespace centrelat::io {

using nlohmann::json;

json to_json(Complex z);
Complex complex_from(const json& j);
json to_json(const ComplexVector& v);
ComplexVector complex_vector_from(const json& j);
json to_json(const RealVector& v);
RealVector real_vector_from(const json& j);

/// {"kind": "max"} | {"kind": "weighted_p", "weights": [...], "p": p or "inf"}
/// | {"kind": "user", "name": ...}
json to_json(const NormSpec& spec);
NormSpec norm_from(const json& j);

/// {"dim": n, "norm": {...}}; a missing norm means the max norm.
json to_json(const CoordinateLattice& lattice);
LatticePtr lattice_from(const json& j);

/// {"dim", "norm", "re", "im"}.
json to_json(const ComplexElement& z);
ComplexElement element_from(const json& j);
/// An element on a known lattice; "dim"/"norm" are optional then.
ComplexElement element_from(const json& j, const LatticePtr& lattice);

/// {"symbol": [[re, im], ...]}.
json to_json(const CentralOperator& t);
CentralOperator central_from(const json& j, const LatticePtr& lattice);

/// {"dim": n, "entries": [[[re, im], ...], ...]}.
json to_json(const RegularOperator& t);
RegularOperator regular_from(const json& j, const LatticePtr& lattice);

/// {"points": [labels], "atoms": [[points]], "values": {"atom": [coords]}}.
json to_json(const LatticeValuedMeasure& mu);
LatticeValuedMeasure measure_from(const json& j, const LatticePtr& values_lattice);

/// {"spectrum": [[re, im], ...], "projections": [[0/1 per coordinate], ...]}.
json to_json(const OperatorSpectralMeasure& mu_t);
/// The measure on the power set of the listed values, without validation of
/// the product law (so that a damaged file can be diagnosed).
LatticeValuedMeasure stored_spectral_measure(const json& j, std::size_t dim, std::vector<Complex>& values);

/// {"rule": {...}, "sup": s, "tail": {...}, "accumulation": [...], "multiplicity": {...}}.
json to_json(const SequenceSpec& spec);
SequenceSpec sequence_from(const json& j);

json to_json(const Spectrum& sigma);

}  // namespace centrelat::io
