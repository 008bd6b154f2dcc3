#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qflag {

using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) { Rat r(num, den); r.canonicalize(); return r; }

inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline double rat_dbl(const Rat& r) { return r.get_d(); }

inline bool rat_is_int(const Rat& r) { return r.get_den() == 1; }

inline long rat_long(const Rat& r) {
  if (!rat_is_int(r) || !r.get_num().fits_slong_p()) throw std::overflow_error("rational is not a small integer");
  return r.get_num().get_si();
}

// r^e for integer e (e may be negative; r must be nonzero then).
inline Rat rat_pow(const Rat& r, long e) {
  if (e == 0) return Rat(1);
  if (r == 0) throw std::domain_error("0^e with e != 0");
  Rat base = e > 0 ? r : Rat(1) / r;
  unsigned long n = e > 0 ? (unsigned long)e : (unsigned long)(-e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), n);
  return Rat(num, den);  // already canonical: gcd(num,den)=1 is preserved by powers
}

// Complex numbers with exact rational real/imaginary parts.
struct CRat {
  Rat re, im;
  CRat() : re(0), im(0) {}
  CRat(const Rat& r) : re(r), im(0) {}
  CRat(long n) : re(n), im(0) {}
  CRat(const Rat& r, const Rat& i) : re(r), im(i) {}
  bool is_zero() const { return re == 0 && im == 0; }
};

inline CRat operator+(const CRat& a, const CRat& b) { return CRat(a.re + b.re, a.im + b.im); }
inline CRat operator-(const CRat& a, const CRat& b) { return CRat(a.re - b.re, a.im - b.im); }
inline CRat operator-(const CRat& a) { return CRat(-a.re, -a.im); }
inline CRat operator*(const CRat& a, const CRat& b) {
  return CRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
inline CRat operator/(const CRat& a, const CRat& b) {
  Rat n = b.re * b.re + b.im * b.im;
  if (n == 0) throw std::domain_error("division by zero CRat");
  return CRat((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}
inline bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
inline CRat conj(const CRat& a) { return CRat(a.re, -a.im); }
inline std::complex<double> crat_dbl(const CRat& a) { return {rat_dbl(a.re), rat_dbl(a.im)}; }

}  // namespace qflag
