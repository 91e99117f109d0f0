#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <complex>
#include <string>
#include <vector>

namespace lab {

/// Exact arbitrary-precision rational scalar. Coefficient construction in the
/// Bell-table and characteristic-polynomial code paths is exact; conversion to
/// floating point happens only at the root-finding / eigensolver boundary.
/// Expression templates are disabled so the type behaves as a plain scalar
/// inside Eigen expressions.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Small exact matrix. Eigen's dense 2D matrices do not mix with
/// multiprecision scalars at overload-resolution time, and the exact matrices
/// here stay tiny, so plain nested vectors carry them.
using MatrixQ = std::vector<std::vector<Rational>>;

inline Rational rational_pow(const Rational& base, int exp) {
  Rational acc(1), b = base;
  int e = exp;
  if (e < 0) {
    b = Rational(1) / b;
    e = -e;
  }
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

/// Parses "p/q", plain integers, or decimal strings like "-2.5".
Rational parse_rational(const std::string& text);

/// Scalar conversion helpers so templated code can move between exact and
/// floating coefficient types.
template <typename To, typename From>
To scalar_cast(const From& v) {
  return static_cast<To>(v);
}

template <>
inline double scalar_cast<double, Rational>(const Rational& v) {
  return to_double(v);
}

template <>
inline std::complex<double> scalar_cast<std::complex<double>, Rational>(const Rational& v) {
  return {to_double(v), 0.0};
}

template <>
inline std::complex<double> scalar_cast<std::complex<double>, double>(const double& v) {
  return {v, 0.0};
}

}  // namespace lab
