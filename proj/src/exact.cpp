#include "subpois/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "subpois/error.hpp"
#include "subpois/linalg.hpp"
#include "subpois/precision.hpp"

namespace subpois::exact {

namespace {

constexpr double kBand = 1e-6;

Spectrum finish_spectrum(std::vector<double> values, double abs_error, double trace, int sweeps) {
  Spectrum s;
  s.abs_error = abs_error;
  s.trace = trace;
  s.sweeps = sweeps;
  double violation = 0.0;
  for (double v : values) {
    violation = std::max(violation, -v);
    violation = std::max(violation, v - 1.0);
  }
  s.raw_out_of_range = violation;
  if (violation > kBand)
    throw SpectrumRangeError("spectrum: eigenvalue outside [-1e-6, 1 + 1e-6] (violation " +
                             std::to_string(violation) + "); discretization is unconverged");
  for (double& v : values) v = std::clamp(v, 0.0, 1.0);
  std::sort(values.begin(), values.end(), std::greater<>());
  s.eigenvalues = std::move(values);
  return s;
}

struct MomentBracket {
  double lower;
  double upper;
};

MomentBracket moment_bracket(const CountDistribution& c, double lambda) {
  if (lambda < 0.0) throw DomainError("exp_moment_sq: lambda must be nonnegative");
  const int n = static_cast<int>(c.pmf.size());
  auto shifted = [&](int j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (c.pmf[k] <= 0.0) continue;
      const double kk = static_cast<double>(k + j);
      s += std::exp(lambda * kk * kk + std::log(c.pmf[k]));
    }
    return s;
  };
  MomentBracket b;
  b.lower = shifted(0);
  const double t = c.domination_mass;
  if (t == 0.0) {
    b.upper = b.lower;
    return b;
  }
  if (!std::isfinite(t)) {
    b.upper = std::numeric_limits<double>::infinity();
    return b;
  }
  double upper = 0.0;
  double log_weight = -t;  // log of e^{-t} t^j / j!
  for (int j = 0; j < 400; ++j) {
    if (j > 0) log_weight += std::log(t) - std::log(static_cast<double>(j));
    const double term = std::exp(log_weight) * shifted(j);
    upper += term;
    if (j > 0 && j > t && term <= 1e-18 * upper) break;
  }
  b.upper = upper;
  return b;
}

}  // namespace

Eigen::MatrixXd DiscretizedKernel::as_matrix() const {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = at(i, j);
  return m;
}

DiscretizedKernel discretize(const std::function<double(double, double)>& kernel,
                             const Interval& window, int order, const std::string& id) {
  if (order < 8) throw DomainError("discretize: order must be at least 8");
  DiscretizedKernel d;
  d.rule = specfun::gauss_legendre<double>(order, window.a, window.b);
  d.n = order;
  d.kernel = id;
  d.window = window;
  d.matrix.assign(static_cast<std::size_t>(order) * order, 0.0);
  std::vector<double> sw(order);
  for (int i = 0; i < order; ++i) sw[i] = std::sqrt(d.rule.weights[i]);
  for (int i = 0; i < order; ++i) {
    for (int j = i; j < order; ++j) {
      const double v = sw[i] * sw[j] * kernel(d.rule.nodes[i], d.rule.nodes[j]);
      d.matrix[static_cast<std::size_t>(i) * order + j] = v;
      d.matrix[static_cast<std::size_t>(j) * order + i] = v;
    }
  }
  for (int i = 0; i < order; ++i) d.trace += d.rule.weights[i] * kernel(d.rule.nodes[i], d.rule.nodes[i]);
  return d;
}

DiscretizedKernel discretize(const KernelSpec& spec, const Interval& window, int order) {
  if (spec.block_size() != 1 || spec.is_planar())
    throw DomainError("discretize: kernel " + spec.id() + " is not a scalar kernel on the line");
  const KernelSpec copy = spec;
  return discretize([copy](double x, double y) { return kernels::eval_scalar(copy, x, y); }, window,
                    order, spec.id());
}

Spectrum spectrum(const DiscretizedKernel& d) {
  const auto eig = linalg::jacobi_eigen<double>(d.matrix, d.n, false, 1e-14, 50);
  const double abs_error =
      eig.off_norm + d.n * std::numeric_limits<double>::epsilon() * std::max(1.0, eig.frobenius);
  return finish_spectrum(eig.values, abs_error, d.trace, eig.sweeps);
}

Spectrum spectrum_from_values(std::vector<double> values, double abs_error) {
  const double trace = std::accumulate(values.begin(), values.end(), 0.0);
  return finish_spectrum(std::move(values), abs_error, trace, 0);
}

Spectrum spectrum_high_precision(const KernelSpec& spec, const Interval& window, int order) {
  using HP = HighPrecision;
  if (spec.block_size() != 1 || spec.is_planar())
    throw DomainError("spectrum_high_precision: kernel " + spec.id() + " is not a scalar kernel");
  if (order < 8) throw DomainError("spectrum_high_precision: order must be at least 8");
  const auto rule = specfun::gauss_legendre<HP>(order, HP(window.a), HP(window.b));
  std::vector<HP> sw(order);
  for (int i = 0; i < order; ++i) sw[i] = sqrt(rule.weights[i]);
  std::vector<HP> m(static_cast<std::size_t>(order) * order);
  HP trace = 0;
  for (int i = 0; i < order; ++i) {
    for (int j = i; j < order; ++j) {
      const HP v = sw[i] * sw[j] * kernels::eval_scalar_ext<HP>(spec, rule.nodes[i], rule.nodes[j]);
      m[static_cast<std::size_t>(i) * order + j] = v;
      m[static_cast<std::size_t>(j) * order + i] = v;
      if (i == j) trace += v;
    }
  }
  const auto eig = linalg::jacobi_eigen<HP>(std::move(m), order, false, HP(1e-45), 60);
  std::vector<double> values(order);
  for (int i = 0; i < order; ++i) values[i] = to_double(eig.values[i]);
  const HP err = eig.off_norm + order * std::numeric_limits<HP>::epsilon() * (eig.frobenius > 1 ? eig.frobenius : HP(1));
  Spectrum s = finish_spectrum(std::move(values), to_double(err), to_double(trace), eig.sweeps);
  s.high_precision = true;
  return s;
}

Spectrum spectrum_for(const KernelSpec& spec, const Interval& window, int order) {
  if (spec.is_planar()) {
    if (window.a != 0.0) throw DomainError("ginibre: window must be [0, R], the disk of radius R");
    const double r = window.b;
    const int kmax = std::min(200, static_cast<int>(std::ceil(r * r + 12.0 * r + 60.0)));
    return spectrum_from_values(ginibre_disk_eigenvalues(r, kmax), 1e-15);
  }
  return spectrum(discretize(spec, window, order));
}

CountDistribution count_distribution(const Spectrum& s, double floor) {
  CountDistribution c;
  c.eigen_floor = floor;
  c.pmf = {1.0};
  double dominate = 0.0;
  for (double lam : s.eigenvalues) {
    if (lam > floor) {
      std::vector<double> next(c.pmf.size() + 1, 0.0);
      for (std::size_t k = 0; k < c.pmf.size(); ++k) {
        next[k] += (1.0 - lam) * c.pmf[k];
        next[k + 1] += lam * c.pmf[k];
      }
      c.pmf = std::move(next);
      if (s.abs_error > 0.0) {
        const double q = s.abs_error / std::max(0.0, 1.0 - lam);
        dominate += q >= 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-q);
      }
    } else {
      c.truncation_error_bound += lam;
      const double q = std::min(lam + s.abs_error, 1.0);
      dominate += q >= 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-q);
    }
  }
  c.domination_mass = dominate;
  return c;
}

double tail(const CountDistribution& c, int n) {
  if (n <= 0) return 1.0;
  double s = 0.0;
  for (std::size_t k = static_cast<std::size_t>(n); k < c.pmf.size(); ++k) s += c.pmf[k];
  return std::min(1.0, s + c.truncation_error_bound);
}

double mean(const CountDistribution& c) {
  double m = 0.0;
  for (std::size_t k = 0; k < c.pmf.size(); ++k) m += k * c.pmf[k];
  return m;
}

double variance(const CountDistribution& c) {
  const double m = mean(c);
  double v = 0.0;
  for (std::size_t k = 0; k < c.pmf.size(); ++k) v += (k - m) * (k - m) * c.pmf[k];
  return v;
}

double exp_moment_sq(const CountDistribution& c, double lambda) {
  const MomentBracket b = moment_bracket(c, lambda);
  if (!(b.upper - b.lower <= 1e-10 * b.lower))
    throw TruncationError("exp_moment_sq: neglected spectral mass is not controlled at lambda = " +
                          std::to_string(lambda));
  return b.lower;
}

double exp_moment_sq_upper(const CountDistribution& c, double lambda) {
  return moment_bracket(c, lambda).upper;
}

MomentResult exact_exp_moment_sq(const KernelSpec& spec, const Interval& window, double lambda,
                                 int order) {
  MomentResult r;
  const Spectrum s = spectrum_for(spec, window, order);
  try {
    r.value = exp_moment_sq(count_distribution(s), lambda);
    return r;
  } catch (const TruncationError&) {
    if (spec.is_planar()) throw;
  }
  const Spectrum hp = spectrum_high_precision(spec, window, 48);
  r.value = exp_moment_sq(count_distribution(hp, 1e-45), lambda);
  r.high_precision = true;
  return r;
}

double generating_function(const Spectrum& s, double z) {
  double g = 1.0;
  for (double lam : s.eigenvalues) g *= 1.0 + (z - 1.0) * lam;
  return g;
}

double pfaffian(const Eigen::MatrixXd& m) { return linalg::pfaffian(m); }

double correlation_function(const KernelSpec& spec, const std::vector<double>& points) {
  const int n = static_cast<int>(points.size());
  if (n > 16) throw DomainError("correlation_function: at most 16 points");
  if (n == 0) return 1.0;
  if (spec.is_planar()) {
    std::vector<std::complex<double>> z(points.begin(), points.end());
    return correlation_function(spec, z);
  }
  if (spec.block_size() == 1) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = kernels::eval_scalar(spec, points[i], points[j]);
    return linalg::determinant(m);
  }
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.block<2, 2>(2 * i, 2 * j) = kernels::eval_matrix(spec, points[i], points[j]);
  const double skew = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-9) throw NumericalError("correlation_function: block matrix is not antisymmetric");
  m = 0.5 * (m - m.transpose()).eval();
  return linalg::pfaffian(m);
}

double correlation_function(const KernelSpec& spec, const std::vector<std::complex<double>>& points) {
  if (!spec.is_planar()) {
    std::vector<double> x;
    for (const auto& z : points) x.push_back(z.real());
    return correlation_function(spec, x);
  }
  const int n = static_cast<int>(points.size());
  if (n > 16) throw DomainError("correlation_function: at most 16 points");
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = kernels::eval_complex(spec, points[i], points[j]);
  return n == 0 ? 1.0 : m.partialPivLu().determinant().real();
}

std::vector<double> ginibre_disk_eigenvalues(double radius, int kmax) {
  if (!(radius > 0.0 && radius <= 12.0)) throw DomainError("ginibre_disk_eigenvalues: requires 0 < r <= 12");
  if (kmax < 0 || kmax > 200) throw DomainError("ginibre_disk_eigenvalues: requires 0 <= kmax <= 200");
  std::vector<double> out(kmax + 1);
  for (int k = 0; k <= kmax; ++k) out[k] = specfun::incomplete_gamma_ratio(k, radius * radius);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> ginibre_nystrom_eigenvalues(double radius, int radial, int angular) {
  if (!(radius > 0.0 && radius <= 12.0)) throw DomainError("ginibre_nystrom_eigenvalues: requires 0 < r <= 12");
  const auto rule = specfun::gauss_legendre<double>(radial, 0.0, radius);
  const KernelSpec spec = KernelSpec::ginibre();
  const int n = radial * angular;
  std::vector<std::complex<double>> z(n);
  std::vector<double> sw(n);
  for (int a = 0; a < radial; ++a) {
    for (int b = 0; b < angular; ++b) {
      const double theta = 2.0 * std::numbers::pi * b / angular;
      const int idx = a * angular + b;
      z[idx] = std::polar(rule.nodes[a], theta);
      sw[idx] = std::sqrt(rule.weights[a] * rule.nodes[a] * 2.0 * std::numbers::pi / angular);
    }
  }
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = sw[i] * sw[j] * kernels::eval_complex(spec, z[i], z[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("ginibre_nystrom_eigenvalues: eigensolver failed");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

LegendrePartition legendre_partition(int n) {
  if (n < 1 || n > 6) throw DomainError("legendre_partition: requires 1 <= n <= 6");
  LegendrePartition out;
  double log_z = 0.5 * n * (n - 1.0) * std::log(static_cast<double>(n)) + 0.5 * n * (n + 1.0) * std::log(2.0);
  for (int k = 0; k < n; ++k) log_z += 2.0 * std::lgamma(k + 1.0) - std::lgamma(2.0 * k + 2.0);
  out.formula = std::exp(log_z);
  if (n <= 3) {
    const double half = 0.5 * n;
    const auto rule = specfun::gauss_legendre<double>(40, -half, half);
    const int m = static_cast<int>(rule.size());
    std::vector<int> idx(n, 0);
    double total = 0.0;
    while (true) {
      double w = 1.0, v = 1.0;
      for (int i = 0; i < n; ++i) {
        w *= rule.weights[idx[i]];
        for (int j = i + 1; j < n; ++j) {
          const double d = rule.nodes[idx[i]] - rule.nodes[idx[j]];
          v *= d * d;
        }
      }
      total += w * v;
      int pos = 0;
      while (pos < n && ++idx[pos] == m) idx[pos++] = 0;
      if (pos == n) break;
    }
    out.quadrature = total;
    out.relative_mismatch = std::abs(out.formula - total) / std::abs(total);
    out.flagged = out.relative_mismatch > 1e-6;
  }
  return out;
}

}  // namespace subpois::exact
