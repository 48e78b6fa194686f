#include "centrelat/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <limits>

namespace centrelat::oracle {

namespace {

double phase_objective(double x, double y, double theta) { return x * std::cos(theta) + y * std::sin(theta); }

double golden_max(double x, double y, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = phase_objective(x, y, c), fd = phase_objective(x, y, d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = phase_objective(x, y, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = phase_objective(x, y, d);
    }
  }
  return std::max({fc, fd, phase_objective(x, y, 0.5 * (a + b))});
}

}  // namespace

RealVector phase_grid_modulus(const RealVector& re, const RealVector& im, int grid_bits) {
  if (re.size() != im.size()) throw StructuralError("phase oracle: real and imaginary parts differ in length");
  const std::size_t grid = std::size_t{1} << grid_bits;
  const double step = 2.0 * M_PI / double(grid);
  RealVector out(re.size());
  for (Eigen::Index i = 0; i < re.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < grid; ++k) {
      const double v = phase_objective(re[i], im[i], double(k) * step);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    const double centre = double(arg) * step;
    out[i] = std::max(best, golden_max(re[i], im[i], centre - step, centre + step));
  }
  return out;
}

RealVector phase_sampled_modulus(const ComplexMatrix& t, const RealVector& x, Rng& rng, int samples,
                                 int refinement_sweeps) {
  const Eigen::Index n = t.cols();
  if (x.size() != n) throw StructuralError("phase oracle: dimension mismatch");
  RealVector best = RealVector::Zero(t.rows());
  std::vector<RealVector> best_phase(std::size_t(t.rows()), RealVector::Zero(n));
  for (int s = 0; s < samples; ++s) {
    RealVector phi(n);
    for (Eigen::Index j = 0; j < n; ++j) phi[j] = rng.phase();
    ComplexVector y(n);
    for (Eigen::Index j = 0; j < n; ++j) y[j] = std::polar(x[j], phi[j]);
    const ComplexVector ty = t * y;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (std::abs(ty[i]) > best[i]) {
        best[i] = std::abs(ty[i]);
        best_phase[std::size_t(i)] = phi;
      }
    }
  }
  // Coordinate ascent: rotating one phase at a time, with a local grid.
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    RealVector& phi = best_phase[std::size_t(i)];
    auto value = [&](const RealVector& p) {
      Complex acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) acc += t(i, j) * std::polar(x[j], p[j]);
      return std::abs(acc);
    };
    for (int sweep = 0; sweep < refinement_sweeps; ++sweep) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double step = 0.5;
        while (step > 1e-9) {
          bool moved = false;
          for (double sgn : {1.0, -1.0}) {
            RealVector trial = phi;
            trial[j] += sgn * step;
            if (value(trial) > value(phi)) {
              phi = trial;
              moved = true;
            }
          }
          if (!moved) step /= 2.0;
        }
      }
    }
    best[i] = std::max(best[i], value(phi));
  }
  return best;
}

std::vector<Complex> dense_eigenvalues(const ComplexMatrix& t, Rng& rng) {
  const Eigen::Index n = t.rows();
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ();
  const ComplexMatrix conjugated = q * t * q.adjoint();
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(conjugated, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue oracle did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Complex>& p, const std::vector<Complex>& q) {
    double worst = 0.0;
    for (Complex x : p) {
      double d = std::numeric_limits<double>::infinity();
      for (Complex y : q) d = std::min(d, std::abs(x - y));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::size_t kernel_dimension(const ComplexMatrix& t, double threshold) {
  Eigen::FullPivLU<ComplexMatrix> lu(t);
  lu.setThreshold(threshold);
  return static_cast<std::size_t>(lu.dimensionOfKernel());
}

ComplexMatrix kernel_basis(const ComplexMatrix& t, double threshold) {
  Eigen::FullPivLU<ComplexMatrix> lu(t);
  lu.setThreshold(threshold);
  return lu.kernel();
}

}  // namespace centrelat::oracle
