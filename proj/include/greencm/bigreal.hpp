#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>

namespace greencm {

// Working precision in bits. Always passed explicitly.
struct Precision {
  mpfr_prec_t bits;
  explicit constexpr Precision(long b) : bits(static_cast<mpfr_prec_t>(b)) {}
  friend constexpr bool operator==(Precision, Precision) = default;
};

using Integer = mpz_class;
using Rational = mpq_class;

// Arbitrary-precision real backed by an mpfr_t.
//
// Values built from int/double without a Precision are exact literals
// (precision() == 0); mixed with a precision-p value they adopt p. An
// arithmetic result of two literals must be exact, otherwise std::logic_error.
class BigReal {
 public:
  BigReal();
  BigReal(int v);
  BigReal(long v);
  BigReal(long long v);
  BigReal(double v);
  BigReal(long v, Precision p);
  BigReal(double v, Precision p);
  BigReal(const Integer& v, Precision p);
  BigReal(const Rational& v, Precision p);
  BigReal(const BigReal& o);
  BigReal(BigReal&& o) noexcept;
  BigReal& operator=(const BigReal& o);
  BigReal& operator=(BigReal&& o) noexcept;
  ~BigReal();

  static BigReal parse(const std::string& s, Precision p);
  static BigReal pi(Precision p);
  static BigReal log2(Precision p);
  // Uninitialized-value slot at precision p, for direct mpfr_* calls.
  static BigReal withPrecision(Precision p);

  // 0 for exact literals.
  mpfr_prec_t precision() const { return prec_; }
  bool isLiteral() const { return prec_ == 0; }
  BigReal rounded(Precision p) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double toDouble() const;
  long toLong() const;  // round to nearest
  Integer roundToInteger() const;
  Integer floorToInteger() const;
  // Scientific notation with the given number of significant digits
  // (0 = enough to round-trip the working precision).
  std::string toString(int digits = 0) const;

  bool isZero() const { return mpfr_zero_p(v_) != 0; }
  bool isFinite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long exponent2() const;  // x = m * 2^e with 1/2 <= |m| < 1

  BigReal operator-() const;
  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

  // Bitwise identity: same precision and same value.
  bool identical(const BigReal& o) const;

 private:
  mpfr_t v_;
  mpfr_prec_t prec_ = 0;

  void assignLiteral(double v);
  template <typename Op>
  friend BigReal binaryOp(const BigReal& a, const BigReal& b, Op op);
  template <typename Op>
  friend BigReal unaryOp(const BigReal& a, Op op);
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal cosh(const BigReal& x);
BigReal sinh(const BigReal& x);
BigReal tanh(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal pow(const BigReal& x, long n);
BigReal ldexp(const BigReal& x, long e);
BigReal floor(const BigReal& x);
BigReal round(const BigReal& x);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);
// exp(pi x) style helpers
BigReal sqr(const BigReal& x);

Rational toRational(const BigReal& x);

// Complex pair over BigReal; just enough arithmetic for q-series and lattice sums.
struct BigComplex {
  BigReal re, im;
  BigComplex() = default;
  BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(BigReal r) : re(std::move(r)), im(0) {}

  BigComplex operator-() const { return {-re, -im}; }
  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator*(const BigReal& s, const BigComplex& z) { return {s * z.re, s * z.im}; }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
  BigComplex conj() const { return {re, -im}; }
  BigReal norm() const { return re * re + im * im; }  // |z|^2
};

BigReal abs(const BigComplex& z);
BigComplex expi(const BigReal& theta);  // e^{i theta}

}  // namespace greencm
