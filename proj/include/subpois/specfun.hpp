#ifndef SUBPOIS_SPECFUN_HPP
#define SUBPOIS_SPECFUN_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "subpois/error.hpp"
#include "subpois/precision.hpp"

namespace subpois::specfun {

template <class Real>
struct BasicQuadratureRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  Real a{};
  Real b{};

  std::size_t size() const { return nodes.size(); }

  template <class F>
  Real integrate(F&& f) const {
    Real sum = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

using QuadratureRule = BasicQuadratureRule<double>;

struct EvalAccuracy {
  double abs_tol;
  double rel_tol;
  double range_lo;
  double range_hi;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr EvalAccuracy kSincAccuracy{1e-300, 1e-12, -kInf, kInf};
inline constexpr EvalAccuracy kSincAntiderivativeAccuracy{1e-300, 1e-10, -50.0, 50.0};
inline constexpr EvalAccuracy kBesselAccuracy{1e-300, 1e-10, 0.0, 200.0};
inline constexpr EvalAccuracy kAiryAccuracy{1e-300, 1e-9, -20.0, 15.0};
inline constexpr EvalAccuracy kAiryTailAccuracy{1e-12, 1e-9, -10.0, 15.0};

// Gauss-Legendre rule with n nodes on [a, b].
template <class Real = double>
BasicQuadratureRule<Real> gauss_legendre(int n, Real a, Real b) {
  using std::abs;
  using std::cos;
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  if (!(a < b)) throw DomainError("gauss_legendre: requires a < b");
  const Real eps = machine_epsilon<Real>();
  const Real pi = pi_v<Real>();
  std::vector<Real> t(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real z = cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      Real dp = n * (z * p1 - p0) / (z * z - 1);
      Real dz = p1 / dp;
      z -= dz;
      if (abs(dz) <= 8 * eps) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("gauss_legendre: Newton iteration did not converge");
    Real p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    Real dp = n * (z * p1 - p0) / (z * z - 1);
    Real wi = 2 / ((1 - z * z) * dp * dp);
    if (2 * i + 1 == n) z = 0;
    t[n - 1 - i] = z;
    t[i] = -z;
    w[n - 1 - i] = wi;
    w[i] = wi;
  }
  BasicQuadratureRule<Real> rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real mid = (a + b) / 2, half_len = (b - a) / 2;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half_len * t[i];
    rule.weights[i] = half_len * w[i];
  }
  return rule;
}

// sin(pi t) / (pi t).
template <class Real>
Real sinc(const Real& t) {
  using std::abs;
  using std::sin;
  const Real u = pi_v<Real>() * t;
  if (abs(t) < Real(1e-4)) {
    if constexpr (std::is_floating_point_v<Real>) {
      const Real v = u * u;
      return 1 - v / 6 * (1 - v / 20 * (1 - v / 42));
    } else {
      if (t == 0) return Real(1);
    }
  }
  return sin(u) / u;
}

// d/dt sinc(t).
template <class Real>
Real sinc_derivative(const Real& t) {
  using std::abs;
  using std::cos;
  using std::sin;
  const Real pi = pi_v<Real>();
  if (abs(t) < Real(0.25)) {
    // sum_{k>=1} (-1)^k 2k pi^{2k} t^{2k-1} / (2k+1)!
    const Real u2 = pi * t * pi * t;
    Real term = -pi * pi * t / 3;  // k = 1
    Real sum = term;
    const Real eps = machine_epsilon<Real>();
    for (int k = 2; k < 200; ++k) {
      term *= -u2 * Real(k) / (Real(k - 1) * (2 * k) * (2 * k + 1));
      sum += term;
      if (abs(term) <= eps * abs(sum)) break;
    }
    return sum;
  }
  const Real u = pi * t;
  return (u * cos(u) - sin(u)) / (u * t);
}

// Sums of (-x/4)^m / (m! Gamma(m + s + 1)); equals (x/4)^{-s/2} J_s(sqrt x).
template <class Real>
Real bessel_phi(const Real& s, const Real& x) {
  using std::abs;
  if (!(s > -1)) throw DomainError("bessel_phi: requires s > -1");
  const Real q = -x / 4;
  Real term = 1 / boost::math::tgamma(s + 1);
  Real sum = term;
  const Real eps = machine_epsilon<Real>();
  for (int m = 1; m < 2000; ++m) {
    term *= q / (Real(m) * (Real(m) + s));
    sum += term;
    if (abs(term) <= eps * abs(sum) && Real(m) > abs(q)) return sum;
  }
  throw NumericalError("bessel_phi: series did not converge");
}

// Positive majorant sum_m (r/4)^m / (m! Gamma(m + s + 1)).
template <class Real>
Real bessel_phi_majorant(const Real& s, const Real& r) {
  using std::abs;
  const Real q = r / 4;
  Real term = 1 / boost::math::tgamma(s + 1);
  Real sum = term;
  const Real eps = machine_epsilon<Real>();
  for (int m = 1; m < 4000; ++m) {
    term *= q / (Real(m) * (Real(m) + s));
    sum += term;
    if (term <= eps * sum && Real(m) > q) return sum;
  }
  throw NumericalError("bessel_phi_majorant: series did not converge");
}

namespace detail {

template <class Real>
Real airy_c1() {
  return from_decimal<Real>("0.35502805388781723926006318600418317639797917419917724");
}
template <class Real>
Real airy_c2() {
  return from_decimal<Real>("0.25881940379280679840518356018920396347909113835493458");
}

// Ai and Ai' from the two Maclaurin series.
template <class Real>
void airy_maclaurin(const Real& x, Real& ai, Real& aip) {
  using std::abs;
  const Real x3 = x * x * x;
  const Real eps = machine_epsilon<Real>();
  Real f = 1, tf = 1;
  Real g = x, tg = x;
  Real fp = 0, tfp = x * x / 2;
  Real gp = 1, tgp = 1;
  fp = tfp;
  for (int k = 1; k < 1000; ++k) {
    tf *= x3 / (Real(3 * k) * Real(3 * k - 1));
    tg *= x3 / (Real(3 * k + 1) * Real(3 * k));
    tgp *= x3 / (Real(3 * k - 2) * Real(3 * k));
    if (k >= 2) {
      tfp *= x3 / (Real(3 * k - 3) * Real(3 * k - 1));
      fp += tfp;
    }
    f += tf;
    g += tg;
    gp += tgp;
    const Real scale = abs(f) + abs(g) + abs(fp) + abs(gp);
    if (abs(tf) + abs(tg) + abs(tfp) + abs(tgp) <= eps * scale) break;
  }
  const Real c1 = airy_c1<Real>(), c2 = airy_c2<Real>();
  ai = c1 * f - c2 * g;
  aip = c1 * fp - c2 * gp;
}

}  // namespace detail

// Airy function Ai on [-20, 15].
double airy_ai(double x);
// Derivative Ai' on [-20, 15].
double airy_ai_prime(double x);
// Both at once.
void airy_ai_both(double x, double& ai, double& aip);

// Ai and Ai' by the Maclaurin series at any precision; accurate for |x| <= 8.
template <class Real>
void airy_ai_series(const Real& x, Real& ai, Real& aip) {
  detail::airy_maclaurin(x, ai, aip);
}

// Integral of Ai over [x, infinity) for -10 <= x <= 15.
double airy_tail_integral(double x, double abs_tol = 1e-12);

// Bessel function of the first kind J_nu(x), nu > -1, 0 <= x <= 200.
double bessel_j(double nu, double x);

double sinc(double t);
double sinc_derivative(double t);
// Integral of sinc over [0, t].
double sinc_antiderivative(double t);

// gamma(k + 1, x) / k!, the regularized lower incomplete gamma function.
double incomplete_gamma_ratio(int k, double x);

// Recursive split-interval refinement of a 10-point Gauss-Legendre rule.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12);

}  // namespace subpois::specfun

#endif  // SUBPOIS_SPECFUN_HPP
