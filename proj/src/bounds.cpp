#include "subpois/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "subpois/error.hpp"

namespace subpois::bounds {

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double log_sum_exp(std::initializer_list<double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double sum_prefix(const std::vector<double>& log_ml, int n) {
  if (static_cast<int>(log_ml.size()) < n) throw DomainError("integral bound: need n values of m_l");
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += log_ml[l];
  return s;
}

void check_n(int n) {
  if (n < 1) throw DomainError("bounds: n must be positive");
}

}  // namespace

DividedDifferenceTable divided_differences(const KernelFn& kernel,
                                           const std::vector<double>& points) {
  const int n = static_cast<int>(points.size());
  check_n(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(points[i] - points[j]) <= 1e-12)
        throw CoincidentPointsError("divided_differences: points must be pairwise distinct");
  DividedDifferenceTable table;
  table.points = points;
  table.q.resize(n, n);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    // d[j] holds K[x_i; x_j, ..., x_{j+k}] after step k; update in place.
    for (int j = 0; j < n; ++j) d[j] = kernel(points[i], points[j]);
    table.q(i, 0) = d[0];
    for (int k = 1; k < n; ++k) {
      for (int j = 0; j + k < n; ++j) d[j] = (d[j] - d[j + 1]) / (points[j] - points[j + k]);
      table.q(i, k) = d[0];
    }
  }
  return table;
}

double vandermonde(const std::vector<double>& points) {
  double v = 1.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) v *= points[j] - points[i];
  return v;
}

double det_via_divided_differences(const KernelFn& kernel, const std::vector<double>& points) {
  if (points.size() > 12) throw DomainError("det_via_divided_differences: at most 12 points");
  const DividedDifferenceTable t = divided_differences(kernel, points);
  return vandermonde(points) * t.q.partialPivLu().determinant();
}

double cauchy_coefficient_log_bound(const GrowthEnvelope& env, int l) {
  if (l < 0) throw DomainError("cauchy_coefficient_bound: l must be nonnegative");
  return std::log(env.amplitude) + (l + 1.0) - (l / env.order) * std::log((l + 1.0) / env.scale);
}

double cauchy_coefficient_bound(const GrowthEnvelope& env, int l) {
  return std::exp(cauchy_coefficient_log_bound(env, l));
}

GrowthEnvelope bound_envelope(const KernelSpec& spec, const Interval& window) {
  using kernels::KernelKind;
  switch (spec.kind) {
    case KernelKind::Sine:
    case KernelKind::Bessel:
    case KernelKind::Airy:
    case KernelKind::SineSymplectic:
      return kernels::growth_envelope(spec, window);
    default:
      break;
  }
  throw DomainError("chained bounds are not available for kernel " + spec.id());
}

std::vector<DerivativeMaxBound> derivative_max_bounds(const KernelSpec& spec,
                                                      const Interval& window, int n) {
  check_n(n);
  const ChainData chain = chain_data(spec, window);
  std::vector<DerivativeMaxBound> out;
  out.reserve(n);
  for (int l = 0; l < n; ++l) {
    const double lv = chain.log_ml(l);
    out.push_back({l, std::exp(lv), lv});
  }
  return out;
}

double scalar_integral_log_bound(int n, const Interval& window, const std::vector<double>& log_ml) {
  check_n(n);
  return 0.5 * n * (n + 1.0) * std::log(window.length()) + log_factorial(n) + sum_prefix(log_ml, n);
}

double matrix_integral_log_bound(int n, int r, const Interval& window,
                                 const std::vector<double>& log_ml) {
  check_n(n);
  if (r < 1) throw DomainError("matrix_integral_bound: r must be positive");
  return (n + r * 0.5 * n * (n - 1.0)) * std::log(window.length()) + log_factorial(r * n) +
         r * sum_prefix(log_ml, n);
}

double pfaffian_integral_log_bound(int n, const Interval& window,
                                   const std::vector<double>& log_ml_tilde) {
  check_n(n);
  return 0.5 * n * (n + 1.0) * std::log(window.length()) + 0.5 * log_factorial(2 * n) +
         sum_prefix(log_ml_tilde, n);
}

double ChainData::log_ml(int l) const { return cauchy_coefficient_log_bound(envelope, l); }

double ChainData::pointwise_log_bound(int n) const {
  check_n(n);
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += log_ml(l);
  const double vander = 0.5 * n * (n - 1.0) * log_length;
  if (pfaffian) return vander + 0.5 * log_factorial(2 * n) + s;
  return vander + log_factorial(n) + s + 2.0 * n * log_sup_density;
}

double ChainData::tail_log_bound(int n) const {
  if (n < 0) throw DomainError("tail_log_bound: n must be nonnegative");
  if (n == 0) return 0.0;
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += log_ml(l);
  const double vol = 0.5 * n * (n + 1.0) * log_length;
  if (pfaffian) return vol + 0.5 * log_factorial(2 * n) - log_factorial(n) + s;
  return vol + 2.0 * n * log_sup_density + s;
}

ChainData chain_data(const KernelSpec& spec, const Interval& window) {
  ChainData c;
  c.envelope = bound_envelope(spec, window);
  c.sigma = c.envelope.order;
  c.log_length = std::log(window.length());
  c.pfaffian = spec.is_pfaffian();
  if (!c.pfaffian) c.log_sup_density = std::log(kernels::factorization(spec, window).sup_density);
  return c;
}

double pointwise_det_log_bound(const KernelSpec& spec, const Interval& window, int n) {
  return chain_data(spec, window).pointwise_log_bound(n);
}

double tail_log_bound(const KernelSpec& spec, const Interval& window, int n) {
  if (n == 0) return 0.0;
  return chain_data(spec, window).tail_log_bound(n);
}

BConstant b_constant_certified(const ChainData& chain, int n_max) {
  if (n_max < 8) throw DomainError("b_constant: n_max must be at least 8");
  auto g = [&](int n) {
    const double nn = static_cast<double>(n) * n;
    return (chain.tail_log_bound(n) + nn * std::log(static_cast<double>(n)) / (2.0 * chain.sigma)) / nn;
  };
  std::vector<double> vals(n_max + 1);
  BConstant out;
  out.n_max = n_max;
  out.value = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    vals[n] = g(n);
    if (vals[n] > out.value) {
      out.value = vals[n];
      out.argmax = n;
    }
  }
  const int tail_start = (3 * n_max) / 4;
  if (out.argmax >= tail_start)
    throw CertificateError("b_constant: maximum lies in the last quarter of [1, n_max]; raise n_max");
  for (int n = tail_start; n < n_max; ++n)
    if (!(vals[n + 1] < vals[n]))
      throw CertificateError("b_constant: sequence not decreasing near n_max; raise n_max");
  out.audit_limit = 4 * n_max;
  for (int n = n_max + 1; n <= out.audit_limit; ++n)
    if (g(n) > out.value) throw CertificateError("b_constant: audit beyond n_max found a larger value");
  return out;
}

double b_constant(const KernelSpec& spec, const Interval& window, int n_max) {
  return b_constant_certified(chain_data(spec, window), n_max).value;
}

LaplaceBound laplace_integral_bound(double b_tilde, double delta, double lambda) {
  if (!(delta > 0.0)) throw DomainError("laplace_integral_bound: delta must be positive");
  LaplaceBound out;
  const double log_t0 = (lambda + b_tilde - delta) / delta;
  out.t0 = std::exp(log_t0);
  out.s_t0 = delta * out.t0;
  const double k = 1.0 / (delta * std::log(1.25));
  out.log_value = out.s_t0 + std::log(1.25 * out.t0 + k);
  // log u <= eta u + log(1/eta) - 1 applied to u = 5 t0 / 4 + k
  const double eta = 0.125;
  const double tau = std::exp((b_tilde - delta) / delta);
  out.c1 = (delta + 1.25 * eta) * tau;
  out.c2 = eta * k + std::log(1.0 / eta) - 1.0;
  out.certified = true;
  for (int i = 0; i <= 1000; ++i) {
    const double lam = 10.0 * i / 1000.0;
    const double t0 = std::exp((lam + b_tilde - delta) / delta);
    const double lhs = delta * t0 + std::log(1.25 * t0 + k);
    const double rhs = out.c1 * std::exp(lam / delta) + out.c2;
    if (lhs > rhs * (1.0 + 1e-12) + 1e-12) out.certified = false;
  }
  return out;
}

MomentParameters moment_parameters(const KernelSpec& spec, const Interval& window, int n_max) {
  const ChainData chain = chain_data(spec, window);
  MomentParameters p;
  p.sigma = chain.sigma;
  p.b = b_constant_certified(chain, n_max).value;
  p.b_tilde = p.b > 0.0 ? 4.0 * p.b : p.b;
  p.delta = 1.0 / (4.0 * p.sigma);
  return p;
}

double exp_moment_log_bound(const MomentParameters& params, double lambda) {
  if (lambda < 0.0) throw DomainError("exp_moment_log_bound: lambda must be positive");
  if (lambda == 0.0) return 0.0;
  const double first = std::log(std::expm1(lambda)) + std::min(0.0, params.b_tilde);
  const double second = std::log(lambda) + laplace_integral_bound(params.b_tilde, params.delta, lambda).log_value;
  return log_sum_exp({0.0, first, second});
}

double exp_moment_log_bound(const KernelSpec& spec, const Interval& window, double lambda) {
  return exp_moment_log_bound(moment_parameters(spec, window), lambda);
}

CConstant c_constant(const MomentParameters& params, double lambda_max) {
  if (!(lambda_max > 1.0)) throw DomainError("c_constant: lambda_max must exceed 1");
  const double e4 = 4.0 * params.sigma;
  CConstant out;
  auto scan = [&](int points, double& c, double& c_sigma) {
    for (int i = 1; i <= points; ++i) {
      const double lam = lambda_max * i / points;
      const double v = exp_moment_log_bound(params, lam);
      c = std::max(c, v / std::expm1(e4 * lam));
      c_sigma = std::max(c_sigma, v / std::expm1(params.sigma * lam));
    }
  };
  double c = 0.0, cp = 0.0;
  scan(200, c, cp);
  // smallest multiple of 1e-6 above the grid maximum
  auto round_up = [](double v) { return std::ceil(v * 1e6) / 1e6; };
  out.c = round_up(c);
  double audit = 0.0, audit_sigma = 0.0;
  scan(800, audit, audit_sigma);
  if (audit > out.c) out.c = round_up(audit);
  out.c_sigma_form = round_up(std::max(cp, audit_sigma));
  return out;
}

double c_constant(const KernelSpec& spec, const Interval& window, double lambda_max) {
  return c_constant(moment_parameters(spec, window), lambda_max).c;
}

double combination_d(double psi_at_1, double psi_prime_at_0) {
  if (!(psi_at_1 > 1.0)) throw DomainError("combination_d: requires psi(1) > 1");
  if (!(psi_prime_at_0 > 0.0)) throw DomainError("combination_d: requires psi'(0) > 0");
  return std::max(psi_at_1 / (psi_at_1 - 1.0), std::exp(psi_at_1) / psi_prime_at_0);
}

double poisson_exp_moment(double theta, double lambda) {
  if (!(theta > 0.0)) throw DomainError("poisson_exp_moment: theta must be positive");
  return theta * std::expm1(lambda);
}

BoundReport bound_report(const KernelSpec& spec, const Interval& window, int n_max,
                         double lambda_max) {
  const ChainData chain = chain_data(spec, window);
  BoundReport r;
  r.kernel = spec.id();
  r.window = window;
  r.sigma = chain.sigma;
  r.n_max = n_max;
  r.lambda_max = lambda_max;
  r.b = b_constant_certified(chain, n_max).value;
  MomentParameters p;
  p.sigma = chain.sigma;
  p.b = r.b;
  p.b_tilde = r.b > 0.0 ? 4.0 * r.b : r.b;
  p.delta = 1.0 / (4.0 * p.sigma);
  r.b_tilde = p.b_tilde;
  r.delta = p.delta;
  const LaplaceBound lb = laplace_integral_bound(p.b_tilde, p.delta, 1.0);
  r.c1 = lb.c1;
  r.c2 = lb.c2;
  const CConstant cc = c_constant(p, lambda_max);
  r.c = cc.c;
  r.c_sigma_form = cc.c_sigma_form;
  r.d = combination_d(std::exp(4.0 * p.sigma), 4.0 * p.sigma);
  for (int n = 1; n <= n_max; ++n) r.table.emplace_back(n, chain.tail_log_bound(n));
  r.flags.push_back(
      "exponent: certified constant c is fitted against exp(4*sigma*lambda)-1; "
      "c_sigma_form is the uncertified fit against exp(sigma*lambda)-1");
  r.flags.push_back("B_tilde = 4B because ceil(sqrt(t))^2 <= 4t for t >= 1");
  if (!lb.certified) r.flags.push_back("laplace: grid certificate for (c1, c2) failed");
  if (spec.kind == kernels::KernelKind::Airy)
    r.flags.push_back("airy: envelope constants depend on the window through max(|a|,|b|)");
  if (spec.is_pfaffian())
    r.flags.push_back("pfaffian: m_l includes the 1/l! factor of the Taylor coefficient");
  return r;
}

}  // namespace subpois::bounds
