#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "qflag/rational.hpp"

namespace qflag {

enum class Backend { exact, floating };

inline const char* backend_name(Backend b) {
  return b == Backend::exact ? "exact" : "float";
}

// Deformation parameter with its backend tag. The defining value is always a
// rational in (0,1); the float backend carries the rounded double alongside.
struct QScalar {
  Backend backend = Backend::exact;
  Rat exact_value = Rat(1, 2);
  double float_value = 0.5;
};

inline QScalar make_q(Backend b, const Rat& v) {
  if (!(v > 0 && v < 1)) throw std::invalid_argument("q must lie in (0,1)");
  QScalar q;
  q.backend = b;
  q.exact_value = v;
  q.float_value = rat_dbl(v);
  return q;
}

inline QScalar default_q(Backend b) { return make_q(b, Rat(1, 2)); }

// ---- scalar shims shared by the two backends --------------------------------

template <Backend B>
struct ScalarOf;
template <>
struct ScalarOf<Backend::exact> {
  using real = Rat;
  using cplx = CRat;
};
template <>
struct ScalarOf<Backend::floating> {
  using real = double;
  using cplx = std::complex<double>;
};

inline Rat spow(const Rat& base, long e) { return rat_pow(base, e); }
inline double spow(double base, long e) { return std::pow(base, (double)e); }

template <class T>
T q_of(const QScalar& q);
template <>
inline Rat q_of<Rat>(const QScalar& q) { return q.exact_value; }
template <>
inline double q_of<double>(const QScalar& q) { return q.float_value; }

inline double sdbl(const Rat& x) { return rat_dbl(x); }
inline double sdbl(double x) { return x; }

// [m] at parameter q^d: (q^{dm} - q^{-dm}) / (q^d - q^{-d})
template <class T>
T q_integer(const T& q, long m, long d = 1) {
  if (m == 0) return T(0);
  return (spow(q, d * m) - spow(q, -d * m)) / (spow(q, d) - spow(q, -d));
}

template <class T>
T q_factorial(const T& q, long n, long d = 1) {
  T out(1);
  for (long k = 2; k <= n; ++k) out = out * q_integer(q, k, d);
  return out;
}

template <class T>
T q_binomial(const T& q, long n, long k, long d = 1) {
  if (k < 0 || k > n) return T(0);
  return q_factorial(q, n, d) / (q_factorial(q, k, d) * q_factorial(q, n - k, d));
}

}  // namespace qflag
