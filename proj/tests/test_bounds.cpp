#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include "subpois/bounds.hpp"
#include "subpois/error.hpp"
#include "subpois/exact.hpp"
#include "subpois/kernels.hpp"
#include "subpois/specfun.hpp"
#include "support.hpp"

using namespace subpois;
using namespace subpois::bounds;
using kernels::Interval;
using kernels::KernelSpec;
using subpois::testing::Gen;

namespace {

const double kPi = boost::math::constants::pi<double>();
const double kE = boost::math::constants::e<double>();

KernelFn scalar(const KernelSpec& k) {
  return [k](double x, double y) { return kernels::eval_scalar(k, x, y); };
}

double direct_det(const KernelFn& f, const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = f(p[i], p[j]);
  return m.partialPivLu().determinant();
}

// d^3/dt^3 of sin(pi t)/(pi t) from its Maclaurin series, |t| <= 2.
double sinc_third(double t) {
  double s = 0.0, c = 1.0;  // c = (-1)^k pi^{2k} / (2k+1)!
  for (int k = 0; k < 40; ++k) {
    if (k >= 2) s += c * (2 * k) * (2 * k - 1) * (2 * k - 2) * std::pow(t, 2 * k - 3);
    c *= -kPi * kPi / ((2 * k + 2) * (2 * k + 3));
  }
  return s;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("divided difference tables") {
  const auto one = divided_differences([](double, double y) { return 0.5 + y; }, {0.7});
  CHECK(one.q(0, 0) == 1.2);
  const auto lin = divided_differences([](double, double y) { return y; }, {0.0, 1.0});
  CHECK(lin.q(0, 1) == 1.0);
  CHECK(lin.q(1, 1) == 1.0);
  const auto sq = divided_differences([](double, double y) { return y * y; }, {0.0, 1.0, 3.0});
  for (int i = 0; i < 3; ++i) CHECK(sq.q(i, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(divided_differences([](double, double y) { return y; }, {0.0, 0.0}),
                  CoincidentPointsError);
}

TEST_CASE("determinant through divided differences") {
  const KernelFn s = scalar(KernelSpec::sine());
  CHECK(det_via_divided_differences(s, {0.3}) == doctest::Approx(1.0));
  const double want = 1.0 - std::pow(specfun::sinc(0.4), 2);
  CHECK(std::abs(det_via_divided_differences(s, {0.0, 0.4}) - want) < 1e-10);
  const std::vector<double> p{0.0, 0.1, 0.3, 0.55, 0.9};
  const double d = direct_det(s, p);
  CHECK(std::abs(det_via_divided_differences(s, p) - d) <= 1e-6 * std::abs(d));
  CHECK(vandermonde({0.0, 1.0, 3.0}) == doctest::Approx(6.0));
}

TEST_CASE("Cauchy coefficient bound") {
  const kernels::GrowthEnvelope unit{1.0, 1.0, 1.0};
  CHECK(cauchy_coefficient_bound({2.5, 1.7, 1.3}, 0) == doctest::Approx(2.5 * kE).epsilon(1e-15));
  CHECK(cauchy_coefficient_bound(unit, 2) == doctest::Approx(std::exp(3.0) / 9.0).epsilon(1e-14));
  for (int n = 0; n <= 40; ++n) CHECK(-std::lgamma(n + 1.0) < cauchy_coefficient_log_bound(unit, n));
  CHECK_THROWS_AS(cauchy_coefficient_bound(unit, -1), DomainError);
}

TEST_CASE("derivative maxima for the sine kernel") {
  const auto b = derivative_max_bounds(KernelSpec::sine(), Interval(0, 1), 4);
  REQUIRE(b.size() == 4);
  CHECK(b[0].value == doctest::Approx(kE).epsilon(1e-14));
  CHECK(b[3].value == doctest::Approx(std::exp(4.0) * std::pow(4.0 / kPi, -3.0)).epsilon(1e-13));
  double worst = 0.0;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) worst = std::max(worst, std::abs(sinc_third(i / 199.0 - j / 199.0)) / 6.0);
  CHECK(worst <= b[3].value);
  CHECK_THROWS_AS(derivative_max_bounds(KernelSpec::ginibre(), Interval(0, 1), 2), DomainError);
}

TEST_CASE("integral bounds by substitution") {
  CHECK(scalar_integral_log_bound(1, Interval(0, 1), {0.0}) == doctest::Approx(0.0));
  CHECK(scalar_integral_log_bound(2, Interval(0, 2), {0.0, 0.0}) == doctest::Approx(std::log(16.0)));
  for (int n = 1; n <= 5; ++n) {
    const std::vector<double> ml(n, 0.3);
    CHECK(std::abs(matrix_integral_log_bound(n, 1, Interval(0, 1.7), ml) -
                   scalar_integral_log_bound(n, Interval(0, 1.7), ml)) < 1e-12);
  }
  CHECK(matrix_integral_log_bound(1, 2, Interval(0, 1), {0.0}) == doctest::Approx(std::log(2.0)));
  CHECK(matrix_integral_log_bound(2, 2, Interval(0, 1), {0.0, 0.0}) == doctest::Approx(std::log(24.0)));
  CHECK(pfaffian_integral_log_bound(1, Interval(0, 1), {0.0}) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(pfaffian_integral_log_bound(2, Interval(0, 1), {0.0, 0.0}) == doctest::Approx(0.5 * std::log(24.0)));
}

TEST_CASE("triple integral of the sine determinant") {
  const KernelFn s = scalar(KernelSpec::sine());
  const auto rule = specfun::gauss_legendre<double>(20, 0.0, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    for (std::size_t j = 0; j < rule.size(); ++j)
      for (std::size_t k = 0; k < rule.size(); ++k)
        total += rule.weights[i] * rule.weights[j] * rule.weights[k] *
                 direct_det(s, {rule.nodes[i], rule.nodes[j], rule.nodes[k]});
  const ChainData c = chain_data(KernelSpec::sine(), Interval(0, 1));
  CHECK(std::log(total) <= scalar_integral_log_bound(3, Interval(0, 1), {c.log_ml(0), c.log_ml(1), c.log_ml(2)}));
}

TEST_CASE("pointwise chain bounds") {
  CHECK(pointwise_det_log_bound(KernelSpec::sine(), Interval(0, 1), 1) == doctest::Approx(1.0));
  Gen g(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = g.separated_points(4, 0.0, 1.0, 0.01);
    CHECK(std::log(std::abs(direct_det(scalar(KernelSpec::sine()), p))) <
          pointwise_det_log_bound(KernelSpec::sine(), Interval(0, 1), 4));
    const double pf = exact::correlation_function(KernelSpec::sine4(), p);
    CHECK(std::log(std::abs(pf)) < pointwise_det_log_bound(KernelSpec::sine4(), Interval(0, 1), 4));
  }
}

TEST_CASE("tail bound") {
  const KernelSpec s = KernelSpec::sine();
  const Interval unit(0, 1);
  CHECK(tail_log_bound(s, unit, 0) == 0.0);
  CHECK(tail_log_bound(s, unit, 1) == doctest::Approx(1.0).epsilon(1e-14));
  // The chained bound rises before it decays on a unit window.
  std::vector<double> t;
  for (int n = 0; n <= 40; ++n) t.push_back(tail_log_bound(s, unit, n));
  CHECK(t[8] > t[4]);
  int first_below = -1;
  for (int n = 5; n <= 40 && first_below < 0; ++n)
    if (t[n] < t[4]) first_below = n;
  CHECK(first_below == 14);
  for (int n = 12; n < 40; ++n) CHECK(t[n + 1] < t[n]);

  const double b = b_constant(s, unit, 64);
  for (int n = 1; n <= 64; ++n)
    CHECK(tail_log_bound(s, unit, n) + n * n * std::log(double(n)) / 2.0 - b * n * n <= 1e-12);
  for (int n = 1; n <= 128; ++n) CHECK(std::isfinite(tail_log_bound(s, unit, n)));
}

TEST_CASE("B constant") {
  const KernelSpec s = KernelSpec::sine();
  const BConstant b1 = b_constant_certified(chain_data(s, Interval(0, 1)), 64);
  CHECK(std::isfinite(b1.value));
  CHECK(b1.argmax < 48);
  CHECK(b1.audit_limit == 256);
  CHECK(b_constant(s, Interval(0, 2), 64) >= b1.value);
  CHECK_THROWS_AS(b_constant(s, Interval(0, 1), 4), DomainError);
  CHECK_THROWS_AS(b_constant_certified(chain_data(s, Interval(0, 1)), 8), CertificateError);
  CHECK(std::isfinite(b_constant(KernelSpec::airy(), Interval(-1, 0), 64)));
  // Here g(n) peaks near n = 56, so the certificate needs a larger horizon.
  CHECK_THROWS_AS(b_constant(KernelSpec::bessel(0.5), Interval(1, 2), 64), CertificateError);
  CHECK(std::isfinite(b_constant(KernelSpec::bessel(0.5), Interval(1, 2), 128)));
  CHECK(std::isfinite(b_constant(KernelSpec::bessel(0.5), Interval(1, 3), 64)));
}

TEST_CASE("Laplace integral bound") {
  const LaplaceBound at_one = laplace_integral_bound(1.5, 2.0, 0.5);
  CHECK(at_one.t0 == doctest::Approx(1.0).epsilon(1e-15));
  for (double lam = 0.1; lam < 5; lam += 0.37) {
    const LaplaceBound l = laplace_integral_bound(0.8, 0.6, lam);
    CHECK(std::abs(l.s_t0 - 0.6 * l.t0) <= 1e-12 * l.s_t0);
    CHECK(l.certified);
  }
  const LaplaceBound l = laplace_integral_bound(1.0, 1.0, 1.0);
  const double integral = specfun::integrate_adaptive(
      [](double t) { return std::exp(2.0 * t - t * std::log(t)); }, 1.0, 10.0 * l.t0, 1e-12);
  CHECK(std::log(integral) <= l.log_value);
  CHECK_THROWS_AS(laplace_integral_bound(1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("exponential moment bound") {
  const KernelSpec s = KernelSpec::sine();
  const Interval unit(0, 1);
  CHECK(exp_moment_log_bound(s, unit, 0.0) == 0.0);
  // Small lambda: log(1 + lambda C), so the excess over log(lambda) settles to log C.
  const double c1 = exp_moment_log_bound(s, unit, 1e-30) - std::log(1e-30);
  const double c2 = exp_moment_log_bound(s, unit, 1e-60) - std::log(1e-60);
  CHECK(std::abs(c1 - c2) <= 1e-9 * std::abs(c1));
  const double exact = exact::exact_exp_moment_sq(s, unit, 0.5).value;
  CHECK(std::log(exact) <= exp_moment_log_bound(s, unit, 0.5));
  const MomentParameters p = moment_parameters(s, unit);
  CHECK(p.sigma == 1.0);
  CHECK(p.delta == 0.25);
  CHECK(p.b_tilde == doctest::Approx(4 * p.b));
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double v = exp_moment_log_bound(p, 0.15 * i);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("C constant") {
  const KernelSpec s = KernelSpec::sine();
  const MomentParameters p = moment_parameters(s, Interval(0, 1));
  const CConstant c = c_constant(p, 3.0);
  CHECK(std::isfinite(c.c));
  CHECK(c.c > 0.0);
  for (int i = 1; i <= 400; ++i) {
    const double lam = 3.0 * i / 400;
    CHECK(exp_moment_log_bound(p, lam) <= c.c * std::expm1(4.0 * p.sigma * lam));
  }
  CHECK(c_constant(s, Interval(0, 0.5), 3.0) <= c.c);
  CHECK_THROWS_AS(c_constant(p, 1.0), DomainError);
}

TEST_CASE("combination constant") {
  const double d = combination_d(kE, 1.0);
  CHECK(d == doctest::Approx(std::exp(kE)).epsilon(1e-15));
  for (int i = 0; i <= 100; ++i) {
    const double lam = 5.0 * i / 100, psi = std::exp(lam);
    const double lhs = std::min(std::exp(psi), 1 + lam * std::exp(psi));
    CHECK(std::log(lhs) <= d * (psi - 1) + 1e-12);
  }
  CHECK(combination_d(1.0 + 1e-9, 1.0) > 1e8);
  CHECK_THROWS_AS(combination_d(1.0, 1.0), DomainError);
}

TEST_CASE("Poisson exponential moment") {
  CHECK(poisson_exp_moment(2.0, 0.0) == 0.0);
  CHECK(poisson_exp_moment(1.0, std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  double series = 0.0, w = std::exp(-2.0);
  for (int k = 0; k <= 100; ++k) {
    series += std::exp(1.0 * k) * w;
    w *= 2.0 / (k + 1);
  }
  CHECK(std::abs(std::exp(poisson_exp_moment(2.0, 1.0)) - series) < 1e-10 * series);
}

TEST_CASE("bound report") {
  const BoundReport r = bound_report(KernelSpec::airy(), Interval(-1, 0), 64, 3.0);
  CHECK(r.sigma == 1.5);
  CHECK(r.table.size() == 64);
  CHECK(r.d == doctest::Approx(combination_d(std::exp(6.0), 6.0)));
  CHECK(r.c > 0);
  CHECK_THROWS_AS(bound_report(KernelSpec::ginibre(), Interval(0, 1)), DomainError);
}

}  // TEST_SUITE
