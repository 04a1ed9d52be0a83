#include <doctest.h>

#include <cmath>
#include <complex>

#include <boost/math/constants/constants.hpp>

#include "subpois/error.hpp"
#include "subpois/exact.hpp"
#include "subpois/kernels.hpp"
#include "subpois/specfun.hpp"
#include "support.hpp"

using namespace subpois;
using namespace subpois::kernels;
using subpois::testing::Gen;
using subpois::testing::rel_err;

namespace {
const double kPi = boost::math::constants::pi<double>();
}

TEST_SUITE("kernels") {

TEST_CASE("registry round trip") {
  for (const char* id : {"sine", "airy", "ginibre", "sine4", "airy4", "bessel:s=0.5", "bessel:s=-0.5"}) {
    const KernelSpec k = KernelSpec::parse(id);
    CHECK(KernelSpec::parse(k.id()).id() == k.id());
  }
  CHECK(KernelSpec::parse("bessel:s=2").s == 2.0);
  CHECK(KernelSpec::parse("sine4").block_size() == 2);
  CHECK(KernelSpec::parse("airy4").is_pfaffian());
  CHECK(KernelSpec::parse("ginibre").is_planar());
  CHECK(KernelSpec::parse("bessel:s=1").domain() == Domain::PositiveHalfLine);
  CHECK_THROWS_AS(KernelSpec::parse("cosine"), ConfigError);
  CHECK_THROWS_AS(KernelSpec::parse("bessel:s=-1"), ConfigError);
  CHECK_THROWS_AS(KernelSpec::parse("bessel:s=abc"), ConfigError);
  CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
}

TEST_CASE("sine kernel") {
  const KernelSpec k = KernelSpec::sine();
  for (double x : {-3.0, 0.0, 2.2}) CHECK(eval_scalar(k, x, x) == 1.0);
  CHECK(eval_scalar(k, 0.0, 0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
}

TEST_CASE("Airy kernel values") {
  const KernelSpec k = KernelSpec::airy();
  CHECK(rel_err(eval_scalar(k, -1.0, 0.5), 0.078732763397670284904) < 1e-12);
  CHECK(rel_err(eval_scalar(k, 0.7, 0.7), 0.014892809169784342938) < 1e-12);
  CHECK(rel_err(eval_scalar(k, -3.2, -3.2000001), 0.56185788878382370037) < 1e-10);
}

TEST_CASE("Airy diagonal against the small-offset limit") {
  const KernelSpec k = KernelSpec::airy();
  for (double x : {-4.0, -1.3, 0.0, 2.5}) {
    const double f1 = eval_scalar(k, x, x + 1e-3), f2 = eval_scalar(k, x, x + 1e-4),
                 f3 = eval_scalar(k, x, x + 1e-5);
    // Off-diagonal values are linear in h to leading order; eliminate it twice.
    const double r12 = (10 * f2 - f1) / 9, r23 = (10 * f3 - f2) / 9;
    const double limit = (100 * r23 - r12) / 99;
    CAPTURE(x);
    CHECK(std::abs(eval_scalar(k, x, x) - limit) < 1e-7);
  }
}

TEST_CASE("Bessel kernel values") {
  CHECK(rel_err(eval_scalar(KernelSpec::bessel(0.0), 0.5, 2.0), 0.18182580459362980877) < 1e-12);
  CHECK(rel_err(eval_scalar(KernelSpec::bessel(1.5), 1.0, 3.0), 0.012063213964154510464) < 1e-11);
  CHECK(rel_err(eval_scalar(KernelSpec::bessel(0.0), 2.0, 2.0), 0.15226767257197532349) < 1e-12);
  CHECK(rel_err(eval_scalar(KernelSpec::bessel(-0.5), 0.3, 0.9), 0.3620599501957391283) < 1e-12);
  CHECK_THROWS_AS(eval_scalar(KernelSpec::bessel(0.0), 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_scalar(KernelSpec::bessel(0.0), -1.0, 1.0), DomainError);
}

TEST_CASE("extended-precision evaluation agrees with double") {
  for (const KernelSpec& k : {KernelSpec::sine(), KernelSpec::airy(), KernelSpec::bessel(0.5)}) {
    for (auto [x, y] : {std::pair{0.3, 0.9}, std::pair{0.6, 0.6}}) {
      const double d = eval_scalar(k, x, y);
      const double hp = to_double(eval_scalar_ext<HighPrecision>(k, HighPrecision(x), HighPrecision(y)));
      CAPTURE(k.id());
      CHECK(std::abs(d - hp) < 1e-13);
    }
  }
}

TEST_CASE("symplectic sine kernel") {
  const KernelSpec k = KernelSpec::sine4();
  const Eigen::Matrix2d d = eval_matrix(k, 0.4, 0.4);
  CHECK(d(0, 0) == 0.0);
  CHECK(d(0, 1) == 0.5);
  CHECK(d(1, 0) == -0.5);
  CHECK(d(1, 1) == 0.0);
  CHECK(eval_matrix(k, 0.0, 0.3)(0, 1) == doctest::Approx(specfun::sinc(0.3) / 2).epsilon(1e-15));
  const Eigen::Matrix2d m = eval_matrix(k, 0.3, 1.1);
  CHECK(rel_err(m(0, 0), 0.28356018983184299787) < 1e-12);
  CHECK(rel_err(m(0, 1), 0.11693616047357981402) < 1e-12);
  CHECK(rel_err(m(1, 0), -0.11693616047357981402) < 1e-12);
  CHECK(rel_err(m(1, 1), 0.6518058220763169415) < 1e-12);
}

TEST_CASE("symplectic Airy kernel") {
  const KernelSpec k = KernelSpec::airy4();
  const Eigen::Matrix2d m = eval_matrix(k, 0.2, -0.5);
  CHECK(std::abs(m(0, 0) - 0.00382015676817245882) < 1e-11);
  CHECK(std::abs(m(0, 1) - 0.00968507880034984494) < 1e-11);
  CHECK(std::abs(m(1, 0) + 0.000334606876246893012) < 1e-11);
  CHECK(std::abs(m(1, 1) - 0.00700794069517824888) < 1e-11);

  const Eigen::Matrix2d z = eval_matrix(k, 0.0, 0.0);
  const double h = 1e-4;
  const double dy = (eval_scalar(KernelSpec::airy(), 0.0, h) - eval_scalar(KernelSpec::airy(), 0.0, -h)) / (2 * h);
  const double ai0 = specfun::airy_ai(0.0);
  CHECK(std::abs(z(1, 1) - (0.5 * dy + 0.25 * ai0 * ai0)) < 1e-8);
  CHECK(std::abs(z(0, 1) - 0.0039080707325138838) < 1e-11);
  CHECK_THROWS_AS(eval_matrix(k, -10.5, 0.0), DomainError);
  CHECK_THROWS_AS(eval_matrix(KernelSpec::sine(), 0.0, 0.0), DomainError);
}

TEST_CASE("Ginibre kernel") {
  const KernelSpec k = KernelSpec::ginibre();
  for (auto z : {std::complex<double>(0, 0), std::complex<double>(1.5, -2.0)})
    CHECK(std::abs(eval_complex(k, z, z) - 1.0 / kPi) < 1e-15);
  const std::complex<double> w(0.7, 1.1);
  CHECK(std::abs(eval_complex(k, 0.0, w) - std::exp(-0.5 * std::norm(w)) / kPi) < 1e-15);
  Gen g(11);
  for (int i = 0; i < 50; ++i) {
    const std::complex<double> a(g.uniform(-3, 3), g.uniform(-3, 3)), b(g.uniform(-3, 3), g.uniform(-3, 3));
    const double lhs = std::norm(eval_complex(k, a, b));
    CHECK(std::abs(lhs - std::exp(-std::norm(a - b)) / (kPi * kPi)) < 1e-12);
    CHECK(std::abs(eval_complex(k, a, b) - std::conj(eval_complex(k, b, a))) < 1e-15);
  }
  CHECK_THROWS_AS(eval_complex(k, 13.0, 0.0), DomainError);
}

TEST_CASE("growth envelopes") {
  const GrowthEnvelope s = growth_envelope(KernelSpec::sine());
  CHECK(s.order == 1.0);
  CHECK(s.amplitude == 1.0);
  CHECK(s.scale == doctest::Approx(kPi));
  CHECK(growth_envelope(KernelSpec::airy(), Interval(-1, 0)).order == 1.5);
  CHECK(growth_envelope(KernelSpec::ginibre()).order == 2.0);
  CHECK_THROWS_AS(growth_envelope(KernelSpec::airy4()), DomainError);

  // sinc(w) = sum (-1)^k (pi w)^{2k} / (2k+1)!, majorized by the series at |w|.
  for (double r = 0.0; r <= 6.0; r += 0.25)
    for (int j = 0; j < 16; ++j) {
      const std::complex<double> w = std::polar(r, 2 * kPi * j / 16);
      double maj = 0.0, term = 1.0;
      for (int m = 0; m < 80; ++m) {
        maj += term;
        term *= (kPi * r) * (kPi * r) / ((2 * m + 2) * (2 * m + 3));
      }
      const std::complex<double> pw = kPi * w;
      const double v = std::abs(w) == 0.0 ? 1.0 : std::abs(std::sin(pw) / pw);
      CHECK(v <= maj * (1 + 1e-12));
      CHECK(maj <= s.amplitude * std::exp(s.scale * r));
    }
}

TEST_CASE("factorizations") {
  const Factorization f = factorization(KernelSpec::sine(), Interval(0, 1));
  CHECK(f.sup_density == 1.0);
  CHECK(f.density(0.3) == 1.0);

  const Factorization b2 = factorization(KernelSpec::bessel(2.0), Interval(1, 4));
  CHECK(b2.sup_density == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b2.density(2.0) == doctest::Approx(0.5).epsilon(1e-15));

  const KernelSpec bh = KernelSpec::bessel(0.5);
  const Factorization b = factorization(bh, Interval(0.25, 1));
  Gen g(5);
  for (int i = 0; i < 20; ++i) {
    const double x = g.uniform(0.25, 1), y = g.uniform(0.25, 1);
    CHECK(rel_err(b.density(x) * b.density(y) * b.reduced(x, y), eval_scalar(bh, x, y)) < 1e-9);
  }
  CHECK_THROWS_AS(factorization(KernelSpec::bessel(-0.5), Interval(0, 1)), DomainError);
  CHECK_NOTHROW(factorization(KernelSpec::bessel(-0.5), Interval(0.1, 1)));
}

TEST_CASE("intensities") {
  CHECK(intensity(KernelSpec::sine(), 3.3) == 1.0);
  CHECK(intensity(KernelSpec::sine4(), -1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(exact::pfaffian(eval_matrix(KernelSpec::sine4(), 0.2, 0.2)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(intensity(KernelSpec::ginibre(), std::complex<double>(2.0, 1.0)) == doctest::Approx(1.0 / kPi));
}

}  // TEST_SUITE
