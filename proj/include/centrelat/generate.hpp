#pragma once

// Random instances: lattices, central and dense operators, elements,
// measures, and sequence certificates, all driven by a seeded Rng.

#include "centrelat/json_io.hpp"
#include "centrelat/random.hpp"

#include <string>
#include <vector>

namespace centrelat::gen {

/// Max norm, a weighted p-norm (p in {1, 2, 3, inf} or uniform in [1, 6]),
/// or a builtin user norm.
LatticePtr random_lattice(Rng& rng, std::size_t dim);

/// Unit-disc values scaled by 10^k, k uniform in {-2..2}.
Complex random_scalar(Rng& rng);

/// A symbol drawn from a pool of at most `dim` values, so repeats are common.
/// Some pool entries are exactly 0 or real.
ComplexVector random_symbol(Rng& rng, std::size_t dim);

/// A symbol with at least one repeated value (needs dim >= 2).
ComplexVector repeated_symbol(Rng& rng, std::size_t dim);

CentralOperator random_central(Rng& rng, const LatticePtr& lattice);
ComplexMatrix random_dense(Rng& rng, std::size_t dim);
ComplexElement random_element(Rng& rng, const LatticePtr& lattice);
/// A nonnegative, nonzero generator, zero on a random subset.
RealVector random_generator(Rng& rng, std::size_t dim);
/// A measure on 2..6 points with a random atom partition.
LatticeValuedMeasure random_measure(Rng& rng, const LatticePtr& values_lattice);
/// A function constant on the atoms of `space`.
MeasurableFunction random_function(Rng& rng, const FiniteMeasurableSpace& space);

struct GenOptions {
  std::uint64_t seed = 1;
  std::size_t dim_lo = 4;
  std::size_t dim_hi = 4;
  std::size_t count = 1;
  std::string mode = "atomic";  // atomic | sequence
  std::string rule;             // sequence mode: reciprocal | constant | geometric | shifted_reciprocal
};

const std::vector<std::string>& sequence_rule_names();

/// The canonical sequence of a rule: 1/i, the constant 1, 2^{1-i}, 1 + 1/i.
SequenceSpec canonical_sequence(const std::string& rule);

/// Instance `index` of the batch; depends only on (options, index).
io::json generate_instance(const GenOptions& options, std::size_t index);

std::vector<io::json> generate(const GenOptions& options);

}  // namespace centrelat::gen
