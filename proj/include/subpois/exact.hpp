#ifndef SUBPOIS_EXACT_HPP
#define SUBPOIS_EXACT_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subpois/kernels.hpp"
#include "subpois/specfun.hpp"

namespace subpois::exact {

using kernels::Interval;
using kernels::KernelSpec;

// Nystrom matrix sqrt(w_i w_j) K(x_i, x_j) on a Gauss-Legendre rule.
struct DiscretizedKernel {
  specfun::QuadratureRule rule;
  int n = 0;
  std::vector<double> matrix;  // row-major n x n
  std::string kernel;
  Interval window;
  double trace = 0.0;

  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * n + j]; }
  Eigen::MatrixXd as_matrix() const;
};

DiscretizedKernel discretize(const KernelSpec& spec, const Interval& window, int order);
DiscretizedKernel discretize(const std::function<double(double, double)>& kernel,
                             const Interval& window, int order, const std::string& id = "custom");

struct Spectrum {
  std::vector<double> eigenvalues;  // descending, clipped to [0, 1]
  double raw_out_of_range = 0.0;
  double abs_error = 0.0;  // bound on |computed - exact matrix eigenvalue|
  double trace = 0.0;
  int sweeps = 0;
  bool high_precision = false;
};

Spectrum spectrum(const DiscretizedKernel& d);
// Wraps known eigenvalues (sorted, clipped, validated).
Spectrum spectrum_from_values(std::vector<double> values, double abs_error = 0.0);
// Extended-precision Nystrom/Jacobi spectrum for sine, Airy and Bessel kernels.
Spectrum spectrum_high_precision(const KernelSpec& spec, const Interval& window, int order = 48);
// Spectrum used for exact counting: Nystrom for kernels on the line, the
// analytic disk eigenvalues for Ginibre (window [0, R] is the disk of radius R).
Spectrum spectrum_for(const KernelSpec& spec, const Interval& window, int order);

struct CountDistribution {
  std::vector<double> pmf;
  double truncation_error_bound = 0.0;  // sum of discarded eigenvalues
  double domination_mass = 0.0;         // Poisson mass dominating all neglected effects
  double eigen_floor = 1e-16;
};

CountDistribution count_distribution(const Spectrum& s, double floor = 1e-16);

// P(# >= n), upper bracket including the truncation mass.
double tail(const CountDistribution& c, int n);
double mean(const CountDistribution& c);
double variance(const CountDistribution& c);

// E exp(lambda #^2).  Throws TruncationError when the neglected mass moves
// the value by more than 1e-10 relative.
double exp_moment_sq(const CountDistribution& c, double lambda);
// Certified upper value of the same quantity.
double exp_moment_sq_upper(const CountDistribution& c, double lambda);

// E exp(lambda #^2) for a kernel on a window: double-precision spectrum
// first, extended precision when the double result cannot be certified.
struct MomentResult {
  double value = 0.0;
  bool high_precision = false;
};
MomentResult exact_exp_moment_sq(const KernelSpec& spec, const Interval& window, double lambda,
                                 int order = 200);

// prod_k (1 + (z - 1) lambda_k).
double generating_function(const Spectrum& s, double z);

double pfaffian(const Eigen::MatrixXd& m);

// Correlation function: determinant (scalar kernels) or Pfaffian of the
// particle-major 2n x 2n block matrix (matrix kernels).
double correlation_function(const KernelSpec& spec, const std::vector<double>& points);
double correlation_function(const KernelSpec& spec,
                            const std::vector<std::complex<double>>& points);

// gamma(k + 1, r^2) / k! for k = 0..kmax, descending.
std::vector<double> ginibre_disk_eigenvalues(double radius, int kmax);
// Eigenvalues of the polar-product Nystrom discretization on the disk.
std::vector<double> ginibre_nystrom_eigenvalues(double radius, int radial = 16, int angular = 64);

struct LegendrePartition {
  double formula = 0.0;
  std::optional<double> quadrature;
  double relative_mismatch = 0.0;
  bool flagged = false;
};

LegendrePartition legendre_partition(int n);

}  // namespace subpois::exact

#endif  // SUBPOIS_EXACT_HPP
