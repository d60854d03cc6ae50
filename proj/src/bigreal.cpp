#include "greencm/bigreal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace greencm {

namespace {
constexpr mpfr_prec_t kLiteralBits = 64;
}

BigReal::BigReal() {
  mpfr_init2(v_, kLiteralBits);
  mpfr_set_zero(v_, 1);
}

void BigReal::assignLiteral(double v) {
  mpfr_init2(v_, kLiteralBits);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

BigReal::BigReal(int v) {
  mpfr_init2(v_, kLiteralBits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(long v) {
  mpfr_init2(v_, kLiteralBits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(long long v) {
  mpfr_init2(v_, kLiteralBits);
  mpfr_set_sj(v_, static_cast<intmax_t>(v), MPFR_RNDN);
}

BigReal::BigReal(double v) {
  if (!std::isfinite(v)) throw std::domain_error("BigReal: non-finite literal");
  assignLiteral(v);
}

BigReal::BigReal(long v, Precision p) : prec_(p.bits) {
  mpfr_init2(v_, p.bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(double v, Precision p) : prec_(p.bits) {
  mpfr_init2(v_, p.bits);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

BigReal::BigReal(const Integer& v, Precision p) : prec_(p.bits) {
  mpfr_init2(v_, p.bits);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const Rational& v, Precision p) : prec_(p.bits) {
  mpfr_init2(v_, p.bits);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigReal::BigReal(const BigReal& o) : prec_(o.prec_) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

BigReal& BigReal::operator=(const BigReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    prec_ = o.prec_;
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
  mpfr_swap(v_, o.v_);
  std::swap(prec_, o.prec_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::withPrecision(Precision p) {
  BigReal r;
  mpfr_set_prec(r.v_, p.bits);
  mpfr_set_zero(r.v_, 1);
  r.prec_ = p.bits;
  return r;
}

BigReal BigReal::parse(const std::string& s, Precision p) {
  BigReal r = withPrecision(p);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    // mpfr_set_str returns nonzero only for malformed input
    throw std::invalid_argument("BigReal::parse: malformed number '" + s + "'");
  }
  return r;
}

BigReal BigReal::pi(Precision p) {
  BigReal r = withPrecision(p);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::log2(Precision p) {
  BigReal r = withPrecision(p);
  mpfr_const_log2(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::rounded(Precision p) const {
  BigReal r = withPrecision(p);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

double BigReal::toDouble() const { return mpfr_get_d(v_, MPFR_RNDN); }

long BigReal::toLong() const { return mpfr_get_si(v_, MPFR_RNDN); }

Integer BigReal::roundToInteger() const {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

Integer BigReal::floorToInteger() const {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

long BigReal::exponent2() const { return isZero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

std::string BigReal::toString(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (isZero()) return "0";
  if (digits <= 0) {
    mpfr_prec_t bits = prec_ > 0 ? prec_ : mpfr_get_prec(v_);
    digits = static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 1;
  }
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
  std::string m(raw);
  mpfr_free_str(raw);
  std::string out;
  size_t i = 0;
  if (m[0] == '-') {
    out.push_back('-');
    i = 1;
  }
  out.push_back(m[i]);
  if (m.size() > i + 1) {
    out.push_back('.');
    out.append(m.substr(i + 1));
  }
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

template <typename Op>
BigReal binaryOp(const BigReal& a, const BigReal& b, Op op) {
  mpfr_prec_t p = std::max(a.prec_, b.prec_);
  BigReal r;
  if (p > 0) {
    mpfr_set_prec(r.v_, p);
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.prec_ = p;
    return r;
  }
  mpfr_set_prec(r.v_, 2 * std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)) + 64);
  if (op(r.v_, a.v_, b.v_, MPFR_RNDN) != 0) {
    throw std::logic_error("BigReal: inexact operation on two literal operands");
  }
  return r;
}

template <typename Op>
BigReal unaryOp(const BigReal& a, Op op) {
  BigReal r;
  if (a.prec_ > 0) {
    mpfr_set_prec(r.v_, a.prec_);
    op(r.v_, a.v_, MPFR_RNDN);
    r.prec_ = a.prec_;
    return r;
  }
  mpfr_set_prec(r.v_, 2 * mpfr_get_prec(a.v_) + 64);
  if (op(r.v_, a.v_, MPFR_RNDN) != 0) {
    throw std::logic_error("BigReal: inexact function of a literal operand");
  }
  return r;
}

BigReal BigReal::operator-() const { return unaryOp(*this, mpfr_neg); }
BigReal& BigReal::operator+=(const BigReal& o) { return *this = *this + o; }
BigReal& BigReal::operator-=(const BigReal& o) { return *this = *this - o; }
BigReal& BigReal::operator*=(const BigReal& o) { return *this = *this * o; }
BigReal& BigReal::operator/=(const BigReal& o) { return *this = *this / o; }

BigReal operator+(const BigReal& a, const BigReal& b) { return binaryOp(a, b, mpfr_add); }
BigReal operator-(const BigReal& a, const BigReal& b) { return binaryOp(a, b, mpfr_sub); }
BigReal operator*(const BigReal& a, const BigReal& b) { return binaryOp(a, b, mpfr_mul); }
BigReal operator/(const BigReal& a, const BigReal& b) {
  if (b.isZero()) throw std::domain_error("BigReal: division by zero");
  return binaryOp(a, b, mpfr_div);
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool BigReal::identical(const BigReal& o) const {
  return prec_ == o.prec_ && mpfr_get_prec(v_) == mpfr_get_prec(o.v_) &&
         (mpfr_equal_p(v_, o.v_) != 0 || (mpfr_nan_p(v_) && mpfr_nan_p(o.v_)));
}

BigReal abs(const BigReal& x) { return unaryOp(x, mpfr_abs); }
BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative BigReal");
  return unaryOp(x, mpfr_sqrt);
}
BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw std::domain_error("log of non-positive BigReal");
  return unaryOp(x, mpfr_log);
}
BigReal log1p(const BigReal& x) { return unaryOp(x, mpfr_log1p); }
BigReal exp(const BigReal& x) { return unaryOp(x, mpfr_exp); }
BigReal cosh(const BigReal& x) { return unaryOp(x, mpfr_cosh); }
BigReal sinh(const BigReal& x) { return unaryOp(x, mpfr_sinh); }
BigReal tanh(const BigReal& x) { return unaryOp(x, mpfr_tanh); }
BigReal sin(const BigReal& x) { return unaryOp(x, mpfr_sin); }
BigReal cos(const BigReal& x) { return unaryOp(x, mpfr_cos); }
BigReal floor(const BigReal& x) {
  return unaryOp(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { return mpfr_floor(r, a); });
}
BigReal round(const BigReal& x) {
  return unaryOp(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { return mpfr_round(r, a); });
}
BigReal atan2(const BigReal& y, const BigReal& x) { return binaryOp(y, x, mpfr_atan2); }
BigReal sqr(const BigReal& x) { return x * x; }

BigReal pow(const BigReal& x, long n) {
  return unaryOp(x, [n](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_pow_si(r, a, n, rnd); });
}

BigReal ldexp(const BigReal& x, long e) {
  return unaryOp(x, [e](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_mul_2si(r, a, e, rnd); });
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

Rational toRational(const BigReal& x) {
  if (!x.isFinite()) throw std::domain_error("toRational: non-finite value");
  if (x.isZero()) return Rational(0);
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
  Rational q(m);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  q.canonicalize();
  return q;
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  BigReal r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  BigReal n = b.norm();
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

BigReal abs(const BigComplex& z) { return sqrt(z.norm()); }

BigComplex expi(const BigReal& theta) { return {cos(theta), sin(theta)}; }

}  // namespace greencm
