#ifndef SUBPOIS_KERNELS_HPP
#define SUBPOIS_KERNELS_HPP

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "subpois/error.hpp"

namespace subpois::kernels {

// Compact interval [a, b] with a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  Interval() = default;
  Interval(double lo, double hi);

  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

// Constants (A, M, sigma) of |K~(p, z)| <= A exp(M |z - p|^sigma).
struct GrowthEnvelope {
  double amplitude = 1.0;
  double scale = 1.0;
  double order = 1.0;
};

enum class KernelKind { Sine, Bessel, Airy, Ginibre, SineSymplectic, AirySymplectic };

enum class Domain { RealLine, PositiveHalfLine, ComplexPlane };

class KernelSpec {
 public:
  KernelKind kind = KernelKind::Sine;
  double s = 0.0;  // Bessel parameter

  static KernelSpec sine() { return {KernelKind::Sine, 0.0}; }
  static KernelSpec bessel(double s);
  static KernelSpec airy() { return {KernelKind::Airy, 0.0}; }
  static KernelSpec ginibre() { return {KernelKind::Ginibre, 0.0}; }
  static KernelSpec sine4() { return {KernelKind::SineSymplectic, 0.0}; }
  static KernelSpec airy4() { return {KernelKind::AirySymplectic, 0.0}; }

  // Accepts "sine", "bessel:s=<real>", "airy", "ginibre", "sine4", "airy4".
  static KernelSpec parse(const std::string& id);
  std::string id() const;

  int block_size() const;
  Domain domain() const;
  bool has_factorization() const;
  bool is_pfaffian() const { return block_size() == 2; }
  bool is_planar() const { return kind == KernelKind::Ginibre; }
};

// K(x, y) = rho(x) rho(y) K~(x, y) on a window.
struct Factorization {
  std::function<double(double)> density;
  std::function<double(double, double)> reduced;
  double sup_density = 1.0;
};

double eval_scalar(const KernelSpec& spec, double x, double y);

// Same kernels in extended precision (long double or HighPrecision).
template <class Real>
Real eval_scalar_ext(const KernelSpec& spec, const Real& x, const Real& y);

Eigen::Matrix2d eval_matrix(const KernelSpec& spec, double x, double y);

std::complex<double> eval_complex(const KernelSpec& spec, std::complex<double> z,
                                  std::complex<double> w);

GrowthEnvelope growth_envelope(const KernelSpec& spec, const Interval& window = Interval());

Factorization factorization(const KernelSpec& spec, const Interval& window);

// Reduced kernel K~ (equal to K when rho = 1).
double reduced_kernel(const KernelSpec& spec, double x, double y);

double intensity(const KernelSpec& spec, double x);
double intensity(const KernelSpec& spec, std::complex<double> z);

// Bessel helpers: rho(x) = (x/4)^{s/2} and the envelope amplitude A_s on [a, b].
double bessel_density(double s, double x);
double bessel_envelope_amplitude(double s, const Interval& window);

// Sup over r >= 0 of Bi(r) exp(-kappa r^{3/2}) / sqrt 3 and the same for Bi'.
struct AiryMajorant {
  double kappa;
  double c0;
  double c1;
};
AiryMajorant airy_majorant(double kappa = 0.7);
double airy_envelope_amplitude(const Interval& window);

// Integral of the Airy kernel over u in [x, infinity) at fixed y.
double airy_kernel_tail(double x, double y);
// Partial derivative of the Airy kernel in its second argument.
double airy_kernel_dy(double x, double y);

}  // namespace subpois::kernels

#endif  // SUBPOIS_KERNELS_HPP
