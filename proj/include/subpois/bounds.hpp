#ifndef SUBPOIS_BOUNDS_HPP
#define SUBPOIS_BOUNDS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subpois/kernels.hpp"

namespace subpois::bounds {

using kernels::GrowthEnvelope;
using kernels::Interval;
using kernels::KernelSpec;
using KernelFn = std::function<double(double, double)>;

// q(i, l - 1) = K[x_i; x_1, ..., x_l] for 1 <= l <= n, divided differences
// in the second argument.
struct DividedDifferenceTable {
  std::vector<double> points;
  Eigen::MatrixXd q;
};

DividedDifferenceTable divided_differences(const KernelFn& kernel,
                                           const std::vector<double>& points);

// prod_{i<j} (x_j - x_i).
double vandermonde(const std::vector<double>& points);

// det K(x_i, x_j) = vandermonde(x) * det Q.
double det_via_divided_differences(const KernelFn& kernel, const std::vector<double>& points);

struct DerivativeMaxBound {
  int order = 0;
  double value = 0.0;
  double log_value = 0.0;
};

double cauchy_coefficient_log_bound(const GrowthEnvelope& env, int l);
double cauchy_coefficient_bound(const GrowthEnvelope& env, int l);

// Envelope used by the chain: the reduced kernel for determinantal kernels,
// the matrix entries for Pfaffian ones.
GrowthEnvelope bound_envelope(const KernelSpec& spec, const Interval& window);

std::vector<DerivativeMaxBound> derivative_max_bounds(const KernelSpec& spec,
                                                      const Interval& window, int n);

// Log-space integral bounds; log_ml[l] = log m_l for l < n.
double scalar_integral_log_bound(int n, const Interval& window, const std::vector<double>& log_ml);
double matrix_integral_log_bound(int n, int r, const Interval& window,
                                 const std::vector<double>& log_ml);
double pfaffian_integral_log_bound(int n, const Interval& window,
                                   const std::vector<double>& log_ml_tilde);

// Everything the chained bounds need for one kernel and window.
struct ChainData {
  double sigma = 1.0;
  double log_length = 0.0;
  double log_sup_density = 0.0;
  bool pfaffian = false;
  GrowthEnvelope envelope;

  // log m_l from the Cauchy estimate.
  double log_ml(int l) const;
  // Upper bound on log |det K(x_i, x_j)| (or log |Pf|) for n points.
  double pointwise_log_bound(int n) const;
  // Upper bound on log P(#_I >= n).
  double tail_log_bound(int n) const;
};

ChainData chain_data(const KernelSpec& spec, const Interval& window);

double pointwise_det_log_bound(const KernelSpec& spec, const Interval& window, int n);
double tail_log_bound(const KernelSpec& spec, const Interval& window, int n);

struct BConstant {
  double value = 0.0;
  int argmax = 0;
  int n_max = 0;
  int audit_limit = 0;
};

// B = max_n (T(n) + n^2 log n / (2 sigma)) / n^2 with a turning-point
// certificate; throws CertificateError when the certificate fails.
BConstant b_constant_certified(const ChainData& chain, int n_max);
double b_constant(const KernelSpec& spec, const Interval& window, int n_max);

struct LaplaceBound {
  double t0 = 0.0;
  double s_t0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double log_value = 0.0;
  bool certified = false;
};

// Bound on log of int_1^inf exp(lambda t + b_tilde t - delta t log t) dt.
LaplaceBound laplace_integral_bound(double b_tilde, double delta, double lambda);

struct MomentParameters {
  double sigma = 1.0;
  double b = 0.0;
  double b_tilde = 0.0;
  double delta = 0.25;
};

MomentParameters moment_parameters(const KernelSpec& spec, const Interval& window, int n_max = 64);

double exp_moment_log_bound(const MomentParameters& params, double lambda);
double exp_moment_log_bound(const KernelSpec& spec, const Interval& window, double lambda);

struct CConstant {
  double c = 0.0;             // against exp(4 sigma lambda) - 1
  double c_sigma_form = 0.0;  // against exp(sigma lambda) - 1, uncertified
};

CConstant c_constant(const MomentParameters& params, double lambda_max);
double c_constant(const KernelSpec& spec, const Interval& window, double lambda_max);

double combination_d(double psi_at_1, double psi_prime_at_0);

// log E exp(lambda xi) for xi ~ Poisson(theta).
double poisson_exp_moment(double theta, double lambda);

struct BoundReport {
  std::string kernel;
  Interval window;
  double sigma = 1.0;
  double b = 0.0;
  double b_tilde = 0.0;
  double delta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c = 0.0;
  double c_sigma_form = 0.0;
  double d = 0.0;
  int n_max = 0;
  double lambda_max = 0.0;
  std::vector<std::pair<int, double>> table;
  std::vector<std::string> flags;
};

BoundReport bound_report(const KernelSpec& spec, const Interval& window, int n_max = 64,
                         double lambda_max = 3.0);

}  // namespace subpois::bounds

#endif  // SUBPOIS_BOUNDS_HPP
