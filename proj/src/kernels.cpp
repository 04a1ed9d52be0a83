#include "subpois/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "subpois/precision.hpp"
#include "subpois/specfun.hpp"

namespace subpois::kernels {

namespace sf = subpois::specfun;

namespace {

constexpr double kPi = std::numbers::pi;

// Values and first derivatives of the two functions in a ratio-form kernel.
struct PairValues {
  double f, fp, g, gp;
};

template <class Eval>
double ratio_kernel(double x, double y, Eval&& eval) {
  const PairValues vx = eval(x), vy = eval(y);
  if (std::abs(x - y) >= 1e-4 * (1.0 + std::abs(x)) && std::abs(x - y) >= 1e-4 * (1.0 + std::abs(y)))
    return (vx.f * vy.g - vy.f * vx.g) / (x - y);
  if (x == y) return vx.fp * vx.g - vx.gp * vx.f;
  // divided differences as averages of the derivative over [lo, hi]
  const double lo = std::min(x, y), hi = std::max(x, y);
  static constexpr std::array<double, 3> tau{0.11270166537925831, 0.5, 0.88729833462074169};
  static constexpr std::array<double, 3> wt{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double df = 0.0, dg = 0.0;
  for (int i = 0; i < 3; ++i) {
    const PairValues v = eval(lo + tau[i] * (hi - lo));
    df += wt[i] * v.fp;
    dg += wt[i] * v.gp;
  }
  return df * 0.5 * (vx.g + vy.g) - dg * 0.5 * (vx.f + vy.f);
}

PairValues airy_pair(double v) {
  double ai, aip;
  sf::airy_ai_both(v, ai, aip);
  return {ai, aip, aip, v * ai};
}

void check_bessel_point(double x) {
  if (!(x > 0.0)) throw DomainError("bessel kernel: requires x > 0");
}

// a(x) = sqrt(x) J_{s+1}(sqrt x), b(x) = J_s(sqrt x).
PairValues bessel_pair(double s, double v) {
  const double u = std::sqrt(v);
  const double js = sf::bessel_j(s, u), js1 = sf::bessel_j(s + 1.0, u);
  return {u * js1, (u * js - s * js1) / (2.0 * u), js, (-js1 + s / u * js) / (2.0 * u)};
}

// Reduced Bessel pair: A~(x) = (x/4) phi_{s+1}(x), phi_s(x).
PairValues bessel_reduced_pair(double s, double v) {
  using ld = long double;
  const ld x = v, sl = s;
  const ld p0 = sf::bessel_phi<ld>(sl, x), p1 = sf::bessel_phi<ld>(sl + 1, x),
           p2 = sf::bessel_phi<ld>(sl + 2, x);
  return {static_cast<double>(x / 4 * p1), static_cast<double>(p1 / 4 - x / 16 * p2),
          static_cast<double>(p0), static_cast<double>(-p1 / 4)};
}

void check_scalar(const KernelSpec& spec) {
  if (spec.block_size() != 1 || spec.is_planar())
    throw DomainError("eval_scalar: kernel " + spec.id() + " is not a real scalar kernel");
}

template <class Real>
Real ratio_kernel_ext(const Real& x, const Real& y, const Real& fx, const Real& fpx, const Real& gx,
                      const Real& gpx, const Real& fy, const Real& gy) {
  if (x == y) return fpx * gx - gpx * fx;
  return (fx * gy - fy * gx) / (x - y);
}

double gamma_min(double s) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 8; ++k) m = std::min(m, std::tgamma(k + s + 1.0));
  // Gamma is increasing on [1.4616..., inf); the scan covers its minimum.
  return m;
}

}  // namespace

Interval::Interval(double lo, double hi) : a(lo), b(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw DomainError("Interval: requires finite a < b");
}

KernelSpec KernelSpec::bessel(double s) {
  if (!(s > -1.0) || !std::isfinite(s)) throw DomainError("Bessel kernel requires s > -1");
  return {KernelKind::Bessel, s};
}

KernelSpec KernelSpec::parse(const std::string& id) {
  if (id == "sine") return sine();
  if (id == "airy") return airy();
  if (id == "ginibre") return ginibre();
  if (id == "sine4") return sine4();
  if (id == "airy4") return airy4();
  const std::string prefix = "bessel:s=";
  if (id.rfind(prefix, 0) == 0) {
    const std::string num = id.substr(prefix.size());
    std::size_t used = 0;
    double s = 0.0;
    try {
      s = std::stod(num, &used);
    } catch (const std::exception&) {
      throw ConfigError("kernel id '" + id + "': malformed Bessel parameter");
    }
    if (used != num.size()) throw ConfigError("kernel id '" + id + "': malformed Bessel parameter");
    if (!(s > -1.0)) throw ConfigError("kernel id '" + id + "': Bessel requires s > -1");
    return bessel(s);
  }
  throw ConfigError("unknown kernel id '" + id + "'");
}

std::string KernelSpec::id() const {
  switch (kind) {
    case KernelKind::Sine: return "sine";
    case KernelKind::Airy: return "airy";
    case KernelKind::Ginibre: return "ginibre";
    case KernelKind::SineSymplectic: return "sine4";
    case KernelKind::AirySymplectic: return "airy4";
    case KernelKind::Bessel: {
      std::ostringstream os;
      os.precision(17);
      os << "bessel:s=" << s;
      return os.str();
    }
  }
  return "unknown";
}

int KernelSpec::block_size() const {
  return (kind == KernelKind::SineSymplectic || kind == KernelKind::AirySymplectic) ? 2 : 1;
}

Domain KernelSpec::domain() const {
  switch (kind) {
    case KernelKind::Bessel: return Domain::PositiveHalfLine;
    case KernelKind::Ginibre: return Domain::ComplexPlane;
    default: return Domain::RealLine;
  }
}

bool KernelSpec::has_factorization() const { return block_size() == 1; }

double eval_scalar(const KernelSpec& spec, double x, double y) {
  check_scalar(spec);
  switch (spec.kind) {
    case KernelKind::Sine:
      return sf::sinc(x - y);
    case KernelKind::Airy:
      return ratio_kernel(x, y, airy_pair);
    case KernelKind::Bessel: {
      check_bessel_point(x);
      check_bessel_point(y);
      const double s = spec.s;
      return 0.5 * ratio_kernel(x, y, [s](double v) { return bessel_pair(s, v); });
    }
    default:
      break;
  }
  throw DomainError("eval_scalar: unsupported kernel");
}

template <class Real>
Real eval_scalar_ext(const KernelSpec& spec, const Real& x, const Real& y) {
  using std::pow;
  check_scalar(spec);
  switch (spec.kind) {
    case KernelKind::Sine:
      return sf::sinc<Real>(x - y);
    case KernelKind::Airy: {
      Real ax, apx, ay, apy;
      sf::airy_ai_series<Real>(x, ax, apx);
      sf::airy_ai_series<Real>(y, ay, apy);
      return ratio_kernel_ext<Real>(x, y, ax, apx, apx, x * ax, ay, apy);
    }
    case KernelKind::Bessel: {
      if (!(x > 0) || !(y > 0)) throw DomainError("bessel kernel: requires x > 0");
      const Real s = Real(spec.s);
      const Real p0x = sf::bessel_phi<Real>(s, x), p1x = sf::bessel_phi<Real>(s + 1, x);
      const Real p0y = sf::bessel_phi<Real>(s, y), p1y = sf::bessel_phi<Real>(s + 1, y);
      Real reduced;
      if (x == y) {
        const Real p2x = sf::bessel_phi<Real>(s + 2, x);
        reduced = (p1x / 4 - x / 16 * p2x) * p0x + p1x / 4 * (x / 4 * p1x);
      } else {
        reduced = (x / 4 * p1x * p0y - y / 4 * p1y * p0x) / (x - y);
      }
      return pow(x / 4, s / 2) * pow(y / 4, s / 2) * reduced;
    }
    default:
      break;
  }
  throw DomainError("eval_scalar_ext: unsupported kernel");
}

template long double eval_scalar_ext<long double>(const KernelSpec&, const long double&,
                                                  const long double&);
template HighPrecision eval_scalar_ext<HighPrecision>(const KernelSpec&, const HighPrecision&,
                                                      const HighPrecision&);

double airy_kernel_tail(double x, double y) {
  double cut = std::max(x, 0.0);
  while (cut < 15.0 && sf::airy_ai(cut) >= 1e-17) cut += 0.25;
  cut = std::min(cut, 15.0);
  if (cut <= x) return 0.0;
  const auto integrand = [y](double u) { return ratio_kernel(u, y, airy_pair); };
  if (y > x && y < cut)
    return sf::integrate_adaptive(integrand, x, y, 5e-13) +
           sf::integrate_adaptive(integrand, y, cut, 5e-13);
  return sf::integrate_adaptive(integrand, x, cut, 1e-12);
}

double airy_kernel_dy(double x, double y) {
  double ax, apx;
  sf::airy_ai_both(x, ax, apx);
  if (std::abs(x - y) >= 1.0) {
    double ay, apy;
    sf::airy_ai_both(y, ay, apy);
    const double n = ax * apy - ay * apx;
    const double dn = ax * y * ay - apy * apx;
    return dn / (x - y) + n / ((x - y) * (x - y));
  }
  static const sf::QuadratureRule rule = sf::gauss_legendre<double>(16, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    const double v = x + t * (y - x);
    double av, apv;
    sf::airy_ai_both(v, av, apv);
    sum += rule.weights[i] * t * (ax * (av + v * apv) - v * av * apx);
  }
  return -sum;
}

Eigen::Matrix2d eval_matrix(const KernelSpec& spec, double x, double y) {
  Eigen::Matrix2d m;
  if (spec.kind == KernelKind::SineSymplectic) {
    const double t = x - y;
    const double s = sf::sinc(t);
    m << -sf::sinc_antiderivative(t), s, -s, sf::sinc_derivative(t);
    return 0.5 * m;
  }
  if (spec.kind == KernelKind::AirySymplectic) {
    if (x < -10.0 || y < -10.0 || x > 15.0 || y > 15.0)
      throw DomainError("airy4 kernel: arguments must lie in [-10, 15]");
    double ax, apx, ay, apy;
    sf::airy_ai_both(x, ax, apx);
    sf::airy_ai_both(y, ay, apy);
    const double tx = sf::airy_tail_integral(x), ty = sf::airy_tail_integral(y);
    const double kxy = ratio_kernel(x, y, airy_pair);
    const double kyx = ratio_kernel(y, x, airy_pair);
    m(0, 0) = -0.5 * airy_kernel_tail(x, y) + 0.25 * tx * ty;
    m(0, 1) = 0.5 * kxy - 0.25 * ay * tx;
    m(1, 0) = -(0.5 * kyx - 0.25 * ax * ty);
    m(1, 1) = 0.5 * airy_kernel_dy(x, y) + 0.25 * ax * ay;
    return m;
  }
  throw DomainError("eval_matrix: kernel " + spec.id() + " is not matrix-valued");
}

std::complex<double> eval_complex(const KernelSpec& spec, std::complex<double> z,
                                  std::complex<double> w) {
  if (spec.kind != KernelKind::Ginibre) throw DomainError("eval_complex: only the Ginibre kernel");
  if (std::abs(z) > 12.0 || std::abs(w) > 12.0)
    throw DomainError("eval_complex: arguments must satisfy |z| <= 12");
  const std::complex<double> e = z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w);
  return std::exp(e) / kPi;
}

double bessel_density(double s, double x) {
  if (x < 0.0) throw DomainError("bessel density: requires x >= 0");
  return std::pow(x / 4.0, s / 2.0);
}

double bessel_envelope_amplitude(double s, const Interval& window) {
  if (window.a < 0.0) throw DomainError("bessel envelope: window must lie in [0, inf)");
  const double phi = sf::bessel_phi_majorant<long double>(s, window.b);
  return phi * std::exp(window.b / 4.0) / (4.0 * (s + 1.0) * gamma_min(s));
}

AiryMajorant airy_majorant(double kappa) {
  if (!(kappa > 2.0 / 3.0)) throw DomainError("airy_majorant: kappa must exceed 2/3");
  using ld = long double;
  const ld c1 = sf::detail::airy_c1<ld>(), c2 = sf::detail::airy_c2<ld>();
  double best0 = 0.0, best1 = 0.0;
  double r_max = std::pow(60.0 / (kappa - 2.0 / 3.0), 2.0 / 3.0);
  r_max = std::min(std::max(r_max, 20.0), 400.0);
  const double step = 0.005;
  for (double r = 0.0; r <= r_max; r += step) {
    const ld x = r, x3 = x * x * x;
    ld f = 1, tf = 1, g = x, tg = x, fp = x * x / 2, tfp = fp, gp = 1, tgp = 1;
    for (int k = 1; k < 4000; ++k) {
      tf *= x3 / (ld(3 * k) * ld(3 * k - 1));
      tg *= x3 / (ld(3 * k + 1) * ld(3 * k));
      tgp *= x3 / (ld(3 * k - 2) * ld(3 * k));
      if (k >= 2) {
        tfp *= x3 / (ld(3 * k - 3) * ld(3 * k - 1));
        fp += tfp;
      }
      f += tf;
      g += tg;
      gp += tgp;
      if (tf + tg + tfp + tgp <= std::numeric_limits<ld>::epsilon() * (f + g + fp + gp)) break;
    }
    const ld damp = std::exp(-static_cast<ld>(kappa) * x * std::sqrt(x));
    best0 = std::max(best0, static_cast<double>((c1 * f + c2 * g) * damp));
    best1 = std::max(best1, static_cast<double>((c1 * fp + c2 * gp) * damp));
  }
  // margin for the grid sampling
  return {kappa, 1.01 * best0, 1.01 * best1};
}

double airy_envelope_amplitude(const Interval& window) {
  static const AiryMajorant mj = airy_majorant(0.7);
  const double p = std::max(std::abs(window.a), std::abs(window.b));
  const double k = mj.kappa;
  const double near = k * std::pow(p + 1.0, 1.5);
  const double far = k * std::sqrt(2.0) * std::pow(p, 1.5);
  return 2.0 * mj.c0 * mj.c1 * std::exp(k * std::pow(p, 1.5) + std::max(near, far));
}

GrowthEnvelope growth_envelope(const KernelSpec& spec, const Interval& window) {
  switch (spec.kind) {
    case KernelKind::Sine: return {1.0, kPi, 1.0};
    case KernelKind::SineSymplectic: return {kPi / 6.0, kPi, 1.0};
    case KernelKind::Bessel: return {bessel_envelope_amplitude(spec.s, window), 1.0, 1.0};
    case KernelKind::Airy: return {airy_envelope_amplitude(window), 1.0, 1.5};
    case KernelKind::Ginibre: return {1.0 / kPi, 1.0, 2.0};
    case KernelKind::AirySymplectic: break;
  }
  throw DomainError("growth_envelope: no envelope is available for " + spec.id());
}

double reduced_kernel(const KernelSpec& spec, double x, double y) {
  switch (spec.kind) {
    case KernelKind::Sine:
    case KernelKind::Airy:
      return eval_scalar(spec, x, y);
    case KernelKind::Bessel: {
      if (x < 0.0 || y < 0.0) throw DomainError("bessel reduced kernel: requires x, y >= 0");
      const double s = spec.s;
      return ratio_kernel(x, y, [s](double v) { return bessel_reduced_pair(s, v); });
    }
    case KernelKind::Ginibre:
      return std::exp(x * y) / kPi;
    default:
      break;
  }
  throw DomainError("reduced_kernel: kernel " + spec.id() + " has no scalar factorization");
}

Factorization factorization(const KernelSpec& spec, const Interval& window) {
  Factorization fac;
  switch (spec.kind) {
    case KernelKind::Sine:
    case KernelKind::Airy:
      fac.density = [](double) { return 1.0; };
      fac.sup_density = 1.0;
      break;
    case KernelKind::Bessel: {
      const double s = spec.s;
      if (window.a < 0.0) throw DomainError("bessel factorization: window must lie in [0, inf)");
      if (window.a == 0.0 && s != 0.0)
        throw DomainError("bessel factorization: rho vanishes or blows up at 0 unless s = 0");
      fac.density = [s](double x) { return bessel_density(s, x); };
      fac.sup_density = std::max(bessel_density(s, window.a), bessel_density(s, window.b));
      break;
    }
    case KernelKind::Ginibre: {
      if (window.a < 0.0) throw DomainError("ginibre factorization: radial window must be in [0, inf)");
      fac.density = [](double r) { return std::exp(-0.5 * r * r); };
      fac.sup_density = std::exp(-0.5 * window.a * window.a);
      break;
    }
    default:
      throw DomainError("factorization: kernel " + spec.id() + " is matrix-valued");
  }
  const KernelSpec copy = spec;
  fac.reduced = [copy](double x, double y) { return reduced_kernel(copy, x, y); };
  return fac;
}

double intensity(const KernelSpec& spec, double x) {
  if (spec.is_planar()) return intensity(spec, std::complex<double>(x, 0.0));
  if (spec.block_size() == 2) return eval_matrix(spec, x, x)(0, 1);
  return eval_scalar(spec, x, x);
}

double intensity(const KernelSpec& spec, std::complex<double> z) {
  if (!spec.is_planar()) return intensity(spec, z.real());
  return eval_complex(spec, z, z).real();
}

}  // namespace subpois::kernels
