#ifndef SUBPOIS_PRECISION_HPP
#define SUBPOIS_PRECISION_HPP

#include <cstdlib>
#include <limits>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace subpois {

// 50 significant decimal digits, expression templates off so that generic
// code can use `auto` freely.
using HighPrecision = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;

template <class Real>
Real pi_v() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

// Parses a decimal literal at the full precision of Real.
template <class Real>
Real from_decimal(const char* digits) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<Real>(std::strtold(digits, nullptr));
  } else {
    return Real(digits);
  }
}

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

}  // namespace subpois

#endif  // SUBPOIS_PRECISION_HPP
