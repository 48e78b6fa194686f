#pragma once

// Independent reference computations. None of these use the closed forms
// they are compared against.

#include "centrelat/random.hpp"
#include "centrelat/types.hpp"

#include <vector>

namespace centrelat::oracle {

/// sup over theta of x cos(theta) + y sin(theta) per coordinate: a grid of
/// 2^grid_bits angles followed by a golden-section search around the best one.
RealVector phase_grid_modulus(const RealVector& re, const RealVector& im, int grid_bits = 16);

/// Lower estimate of (|T| x)_i = sup{ |(T y)_i| : |y| <= x } from random
/// phases y_j = x_j e^{i phi_j}, followed by coordinate-ascent refinement of
/// the best sample for each row.
RealVector phase_sampled_modulus(const ComplexMatrix& t, const RealVector& x, Rng& rng, int samples = 10'000,
                                 int refinement_sweeps = 4);

/// Eigenvalues of the dense matrix Q T Q* for a random unitary Q.
std::vector<Complex> dense_eigenvalues(const ComplexMatrix& t, Rng& rng);

/// Hausdorff distance between two finite sets of complex numbers.
double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Dimension of the null space through a full-pivot LU with the given
/// relative threshold.
std::size_t kernel_dimension(const ComplexMatrix& t, double threshold = 1e-12);

/// A basis of the null space (columns).
ComplexMatrix kernel_basis(const ComplexMatrix& t, double threshold = 1e-12);

}  // namespace centrelat::oracle
