#include <doctest.h>

#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "subpois/error.hpp"
#include "subpois/precision.hpp"
#include "subpois/specfun.hpp"
#include "support.hpp"

using namespace subpois;
namespace sf = subpois::specfun;
using subpois::testing::rel_err;

namespace {
const double kPi = boost::math::constants::pi<double>();
}

TEST_SUITE("specfun") {

TEST_CASE("sinc values") {
  CHECK(sf::sinc(0.0) == 1.0);
  CHECK(std::abs(sf::sinc(1.0)) < 1e-16);
  CHECK(sf::sinc(0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(sf::sinc(1e-6) == doctest::Approx(1.0 - kPi * kPi * 1e-12 / 6.0).epsilon(1e-15));
  for (double t : {1e-5, 3e-3, 0.2, 2.5, 17.25}) CHECK(rel_err(sf::sinc(t), std::sin(kPi * t) / (kPi * t)) < 1e-12);
}

TEST_CASE("sinc derivative") {
  CHECK(sf::sinc_derivative(0.0) == 0.0);
  CHECK(sf::sinc_derivative(0.5) == doctest::Approx(-4.0 / kPi).epsilon(1e-13));
  const double h = 1e-5;
  const double fd = (sf::sinc(0.3 + h) - sf::sinc(0.3 - h)) / (2 * h);
  CHECK(std::abs(sf::sinc_derivative(0.3) - fd) < 1e-8);
}

TEST_CASE("sinc antiderivative") {
  CHECK(sf::sinc_antiderivative(0.0) == 0.0);
  for (double t : {0.3, 1.7, 9.0}) CHECK(sf::sinc_antiderivative(t) == -sf::sinc_antiderivative(-t));
  // Si(pi t) / pi from an extended-precision oracle.
  CHECK(rel_err(sf::sinc_antiderivative(0.3), 0.28558419739440044583) < 1e-13);
  CHECK(rel_err(sf::sinc_antiderivative(2.7), 0.51818354785540663467) < 1e-13);
  const double quad = sf::integrate_adaptive([](double u) { return sf::sinc(u); }, 0.0, 1.0, 1e-13);
  CHECK(std::abs(sf::sinc_antiderivative(1.0) - quad) < 1e-12);
  CHECK(std::abs(sf::sinc_antiderivative(50.0) - sf::integrate_adaptive([](double u) { return sf::sinc(u); },
                                                                         0.0, 50.0, 1e-13)) < 1e-10);
}

TEST_CASE("Airy function values") {
  const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  const double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
  CHECK(rel_err(sf::airy_ai(0.0), ai0) < 1e-14);
  CHECK(rel_err(sf::airy_ai_prime(0.0), aip0) < 1e-14);
  struct Row { double x, ai, aip; };
  // Extended-precision reference values.
  const Row rows[] = {
      {-5.0, 0.35076100902411431979, 0.32719281855444313679},
      {-10.0, 0.040241238486443190689, 0.9962650441327900559},
      {-15.0, 0.27821749087082892953, 0.27237420430864202083},
      {2.0, 0.034924130423274379135, -0.053090384433653631704},
      {5.5, 3.3685311908599814425e-5, -8.046339130556514338e-5},
      {6.5, 2.7958823432049135855e-6, -7.2319314666017925598e-6},
      {10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10},
  };
  for (const Row& r : rows) {
    CAPTURE(r.x);
    CHECK(rel_err(sf::airy_ai(r.x), r.ai) < 1e-11);
    CHECK(rel_err(sf::airy_ai_prime(r.x), r.aip) < 1e-11);
  }
}

TEST_CASE("Airy ODE residual") {
  const auto second = [](double x, double h) {
    return (sf::airy_ai(x + h) - 2 * sf::airy_ai(x) + sf::airy_ai(x - h)) / (h * h);
  };
  const double h = 1e-3;
  for (int k = -5; k <= 5; ++k) {
    const double x = k;
    const double plain = second(x, h);
    const double extrapolated = (4 * second(x, h / 2) - plain) / 3;
    CAPTURE(x);
    CHECK(std::abs(plain - x * sf::airy_ai(x)) < 1e-6);
    CHECK(std::abs(extrapolated - x * sf::airy_ai(x)) < 1e-8);
  }
}

TEST_CASE("Airy tail integral") {
  CHECK(std::abs(sf::airy_tail_integral(0.0) - 1.0 / 3.0) < 1e-12);
  const double t10 = sf::airy_tail_integral(10.0);
  CHECK(t10 > 0.0);
  CHECK(t10 < 1e-9);
  CHECK(rel_err(sf::airy_tail_integral(-2.0), 1.2351061593719397112) < 1e-12);
  CHECK(rel_err(sf::airy_tail_integral(1.5), 0.046546583424635772106) < 1e-12);
  const double loose = sf::airy_tail_integral(-10.0, 1e-10), tight = sf::airy_tail_integral(-10.0, 1e-12);
  CHECK(std::abs(loose - tight) < 1e-9);
  CHECK_THROWS_AS(sf::airy_tail_integral(-11.0), DomainError);
}

TEST_CASE("Bessel J") {
  CHECK(sf::bessel_j(0.0, 0.0) == 1.0);
  for (double x : {1.0, 4.0, 10.0})
    CHECK(std::abs(sf::bessel_j(0.5, x) - std::sqrt(2.0 / (kPi * x)) * std::sin(x)) < 1e-10);
  struct Row { double nu, x, j; };
  const Row rows[] = {
      {0.0, 1.0, 0.76519768655796655145},  {1.0, 2.5, 0.49709410246427403801},
      {2.5, 30.0, 0.14120285879928212036}, {0.0, 50.0, 0.055812327669251815005},
      {0.3, 25.0, 0.028287780084076882199}, {7.0, 3.0, 0.0025472944518046937591},
  };
  for (const Row& r : rows) {
    CAPTURE(r.nu);
    CAPTURE(r.x);
    CHECK(rel_err(sf::bessel_j(r.nu, r.x), r.j) < 1e-12);
  }
  CHECK_THROWS_AS(sf::bessel_j(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(sf::bessel_j(0.0, -1.0), DomainError);
}

TEST_CASE("Bessel series oracle at (0, 1)") {
  HighPrecision sum = 0, term = 1;
  const HighPrecision q = HighPrecision(-1) / 4;
  for (int m = 0; m < 60; ++m) {
    sum += term;
    term *= q / ((m + 1) * (m + 1));
  }
  CHECK(std::abs(sf::bessel_j(0.0, 1.0) - to_double(sum)) < 1e-15);
}

TEST_CASE("incomplete gamma ratio") {
  for (double x : {0.1, 1.0, 7.5}) CHECK(std::abs(sf::incomplete_gamma_ratio(0, x) - (1 - std::exp(-x))) < 1e-15);
  for (int k = 0; k <= 5; ++k) CHECK(sf::incomplete_gamma_ratio(k, 0.0) == 0.0);
  for (double x : {0.5, 1.0, 4.0}) {
    double term = std::exp(-x);
    for (int k = 1; k <= 20; ++k) {
      term *= x / k;
      CHECK(std::abs(sf::incomplete_gamma_ratio(k, x) - (sf::incomplete_gamma_ratio(k - 1, x) - term)) < 1e-12);
    }
  }
  // Regularized P(k + 1, x).
  CHECK(rel_err(sf::incomplete_gamma_ratio(2, 2.0), 0.32332358381693654053) < 1e-13);
  CHECK(rel_err(sf::incomplete_gamma_ratio(9, 4.0), 0.0081322427969338631557) < 1e-12);
}

TEST_CASE("Gauss-Legendre") {
  const auto r3 = sf::gauss_legendre<double>(3, -1.0, 1.0);
  CHECK(std::abs(r3.nodes[0] + std::sqrt(0.6)) < 1e-15);
  CHECK(r3.nodes[1] == 0.0);
  CHECK(std::abs(r3.weights[0] - 5.0 / 9.0) < 1e-15);
  CHECK(std::abs(r3.weights[1] - 8.0 / 9.0) < 1e-15);
  for (int n : {2, 5, 40}) {
    const auto r = sf::gauss_legendre<double>(n, -1.0, 1.0);
    CHECK(std::abs(r.integrate([](double x) { return x * x; }) - 2.0 / 3.0) < 1e-14);
  }
  const auto r = sf::gauss_legendre<double>(17, 0.0, 3.0);
  double w = 0.0;
  for (double v : r.weights) w += v;
  CHECK(std::abs(w - 3.0) < 1e-12);
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(std::abs((r.nodes[i] - 1.5) + (r.nodes[r.size() - 1 - i] - 1.5)) < 1e-14);
  CHECK_THROWS(sf::gauss_legendre<double>(0, 0.0, 1.0));
}

TEST_CASE("Gauss-Legendre in extended precision") {
  const auto r = sf::gauss_legendre<HighPrecision>(12, HighPrecision(0), HighPrecision(1));
  HighPrecision s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * pow(r.nodes[i], 23);
  CHECK(abs(s - HighPrecision(1) / 24) < HighPrecision("1e-45"));
}

}  // TEST_SUITE
