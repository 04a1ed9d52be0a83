#include "subpois/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace subpois::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Oscillatory expansion for Ai(-z), Ai'(-z), z >= 8.
void airy_oscillatory(double z, double& ai, double& aip) {
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const double chi = zeta - kPi / 4;
  double u = 1.0, v = 1.0;
  double su_even = 1.0, su_odd = 0.0, sv_even = 1.0, sv_odd = 0.0;
  double zpow = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    v = -(6.0 * k + 1) / (6.0 * k - 1) * u;
    zpow /= zeta;
    const double tu = u * zpow, tv = v * zpow;
    const double mag = std::max(std::abs(tu), std::abs(tv));
    if (mag > prev) break;
    prev = mag;
    // k even -> even sums with sign (-1)^{k/2}; k odd -> odd sums with sign (-1)^{(k-1)/2}
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      su_even += sign * tu;
      sv_even += sign * tv;
    } else {
      su_odd += sign * tu;
      sv_odd += sign * tv;
    }
    if (mag < 1e-17) break;
  }
  const double c = std::cos(chi), s = std::sin(chi);
  const double q = std::pow(z, 0.25);
  ai = (c * su_even + s * su_odd) / (std::sqrt(kPi) * q);
  aip = q * (s * sv_even - c * sv_odd) / std::sqrt(kPi);
}

// e^{zeta} K_nu(zeta) by the trapezoid rule on the cosh representation.
double scaled_bessel_k(double nu, double zeta) {
  const double h = 0.05;
  double sum = 0.5;
  for (int j = 1; j < 100000; ++j) {
    const double t = j * h;
    const double f = std::exp(-zeta * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
    sum += f;
    if (f < 1e-20 * sum) break;
  }
  return h * sum;
}

void check_airy_range(double x) {
  if (!(x >= kAiryAccuracy.range_lo && x <= kAiryAccuracy.range_hi))
    throw DomainError("airy: argument outside working range [-20, 15]");
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double whole,
                     double tol, int depth, const QuadratureRule& ref) {
  const double m = 0.5 * (a + b);
  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) s += ref.weights[i] * f(mid + half * ref.nodes[i]);
    return s * half;
  };
  const double left = panel(a, m), right = panel(m, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= tol || depth >= 50) return refined;
  return adaptive_step(f, a, m, left, 0.5 * tol, depth + 1, ref) +
         adaptive_step(f, m, b, right, 0.5 * tol, depth + 1, ref);
}

double hankel_j(double mu, double x) {
  double t = 1.0, p = 1.0, q = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  const double m4 = 4.0 * mu * mu;
  for (int k = 1; k < 200; ++k) {
    t *= (m4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    const double mag = std::abs(t);
    if (mag > prev) break;
    prev = mag;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sign * t;
    else
      q += sign * t;
    if (mag < 1e-17) break;
  }
  const double w = x - (0.5 * mu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(w) - q * std::sin(w));
}

double bessel_series(double nu, double x) {
  using ld = long double;
  const ld half = static_cast<ld>(x) / 2;
  const ld q = -half * half;
  ld term = std::exp(static_cast<ld>(nu) * std::log(half) - std::lgamma(static_cast<ld>(nu) + 1));
  ld sum = term;
  for (int m = 1; m < 2000; ++m) {
    term *= q / (static_cast<ld>(m) * (static_cast<ld>(m) + nu));
    sum += term;
    if (std::abs(term) <= std::numeric_limits<ld>::epsilon() * std::abs(sum) && m > half) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

void airy_ai_both(double x, double& ai, double& aip) {
  check_airy_range(x);
  if (x < -8.0) {
    airy_oscillatory(-x, ai, aip);
  } else if (x <= 6.0) {
    long double a, ap;
    detail::airy_maclaurin(static_cast<long double>(x), a, ap);
    ai = static_cast<double>(a);
    aip = static_cast<double>(ap);
  } else {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double decay = std::exp(-zeta);
    ai = std::sqrt(x / 3.0) / kPi * scaled_bessel_k(1.0 / 3.0, zeta) * decay;
    aip = -x / (kPi * std::sqrt(3.0)) * scaled_bessel_k(2.0 / 3.0, zeta) * decay;
  }
}

double airy_ai(double x) {
  double ai, aip;
  airy_ai_both(x, ai, aip);
  return ai;
}

double airy_ai_prime(double x) {
  double ai, aip;
  airy_ai_both(x, ai, aip);
  return aip;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_adaptive(f, b, a, abs_tol);
  static const QuadratureRule ref = gauss_legendre<double>(10, -1.0, 1.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double whole = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) whole += ref.weights[i] * f(mid + half * ref.nodes[i]);
  whole *= half;
  return adaptive_step(f, a, b, whole * 1.0, abs_tol, 0, ref);
}

double airy_tail_integral(double x, double abs_tol) {
  if (!(x >= kAiryTailAccuracy.range_lo && x <= kAiryTailAccuracy.range_hi))
    throw DomainError("airy_tail_integral: requires -10 <= x <= 15");
  double cut = std::max(x, 0.0);
  while (cut < 15.0 && airy_ai(cut) >= 1e-17) cut += 0.25;
  cut = std::min(cut, 15.0);
  const auto ai = [](double u) { return airy_ai(u); };
  if (x >= 0.0) return integrate_adaptive(ai, x, cut, abs_tol);
  return integrate_adaptive(ai, 0.0, cut, 0.5 * abs_tol) + integrate_adaptive(ai, x, 0.0, 0.5 * abs_tol);
}

double bessel_j(double nu, double x) {
  if (!(nu > -1.0)) throw DomainError("bessel_j: requires nu > -1");
  if (!(x >= 0.0 && x <= 200.0)) throw DomainError("bessel_j: requires 0 <= x <= 200");
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw DomainError("bessel_j: singular at x = 0 for negative order");
  }
  if (x <= 20.0 || nu >= x) return bessel_series(nu, x);
  if (nu < 1.0) return hankel_j(nu, x);
  const double mu = nu - std::floor(nu);
  const int steps = static_cast<int>(std::floor(nu));
  double jm = hankel_j(mu, x), j = hankel_j(mu + 1.0, x);
  for (int k = 1; k < steps; ++k) {
    const double jn = 2.0 * (mu + k) / x * j - jm;
    jm = j;
    j = jn;
  }
  return j;
}

double sinc(double t) { return sinc<double>(t); }

double sinc_derivative(double t) { return sinc_derivative<double>(t); }

double sinc_antiderivative(double t) {
  const double a = std::abs(t);
  double value;
  if (a <= 1.0) {
    // sum_k (-1)^k pi^{2k} a^{2k+1} / ((2k+1) (2k+1)!)
    const double u2 = kPi * kPi * a * a;
    double p = a;  // (-1)^k pi^{2k} a^{2k+1} / (2k+1)!
    value = a;
    for (int k = 1; k < 60; ++k) {
      p *= -u2 / ((2.0 * k) * (2.0 * k + 1));
      const double term = p / (2.0 * k + 1);
      value += term;
      if (std::abs(term) < 1e-18 * std::abs(value)) break;
    }
  } else {
    static const double is_one = sinc_antiderivative(1.0);
    static const QuadratureRule panel = gauss_legendre<double>(20, 0.0, 1.0);
    value = is_one;
    double lo = 1.0;
    while (lo < a) {
      const double hi = std::min(lo + 1.0, a), len = hi - lo;
      double s = 0.0;
      for (std::size_t i = 0; i < panel.size(); ++i)
        s += panel.weights[i] * sinc<double>(lo + len * panel.nodes[i]);
      value += s * len;
      lo = hi;
    }
  }
  return t < 0 ? -value : value;
}

double incomplete_gamma_ratio(int k, double x) {
  if (k < 0 || k > 200) throw DomainError("incomplete_gamma_ratio: requires 0 <= k <= 200");
  if (!(x >= 0.0)) throw DomainError("incomplete_gamma_ratio: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < k + 1.0) {
    const double lead = std::exp(-x + (k + 1.0) * std::log(x) - std::lgamma(k + 2.0));
    double term = 1.0, sum = 1.0;
    for (int i = 1; i < 10000; ++i) {
      term *= x / (k + 1.0 + i);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::min(1.0, lead * sum);
  }
  double q = 0.0;
  for (int j = 0; j <= k; ++j) q += std::exp(-x + j * std::log(x) - std::lgamma(j + 1.0));
  return std::max(0.0, 1.0 - q);
}

}  // namespace subpois::specfun
