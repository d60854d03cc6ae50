#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "greencm/bigreal.hpp"

namespace greencm {

// Univariate polynomial over Q; coeffs[i] multiplies x^i. Trailing zeros trimmed.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  static Poly monomial(const Rational& c, int deg);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  friend Poly operator*(const Rational& s, const Poly& p);
  bool operator==(const Poly& o) const { return c_ == o.c_; }

  Poly derivative() const;
  Rational operator()(const Rational& x) const;
  BigReal operator()(const BigReal& x) const;
  std::string toString() const;

 private:
  std::vector<Rational> c_;
  void trim();
};

// Polynomial in X, Y over Q; key (i, j) for X^i Y^j.
class BivarPoly {
 public:
  using Key = std::pair<int, int>;
  BivarPoly() = default;
  static BivarPoly monomial(const Rational& c, int i, int j);
  static BivarPoly X() { return monomial(1, 1, 0); }
  static BivarPoly Y() { return monomial(1, 0, 1); }
  static BivarPoly constant(const Rational& c) { return monomial(c, 0, 0); }

  const std::map<Key, Rational>& terms() const { return t_; }
  Rational coeff(int i, int j) const;
  bool isZero() const { return t_.empty(); }
  int totalDegree() const;

  BivarPoly operator+(const BivarPoly& o) const;
  BivarPoly operator-(const BivarPoly& o) const;
  BivarPoly operator*(const BivarPoly& o) const;
  friend BivarPoly operator*(const Rational& s, const BivarPoly& p);
  bool operator==(const BivarPoly& o) const { return t_ == o.t_; }

  BivarPoly dX() const;
  BivarPoly dY() const;
  BivarPoly swapped() const;  // P(Y, X)
  Rational operator()(const Rational& x, const Rational& y) const;
  // Exact division; throws std::logic_error on nonzero remainder.
  BivarPoly divideExact(const BivarPoly& d) const;
  std::string toString() const;

 private:
  std::map<Key, Rational> t_;
  void add(const Key& k, const Rational& c);
};

// Generalized binomial a(a-1)...(a-s+1)/s! for rational a.
Rational binomial(const Rational& a, long s);

// 2^{-r} sum_s C(r,s)^2 (x-1)^{r-s} (x+1)^s
Poly legendreP(int r);
// (-1)^{r0} sum_{s<=r0} C(r0-r-1/2, r0-s) C(r-r0-1/2, s) x^{r-2s}, r0 = floor(r/2)
Poly legendrePAlt(int r);

BivarPoly qKernel(int r, const Rational& k1, const Rational& k2);
BivarPoly qTilde(int r);

// Legendre function of the second kind Q_r(t), t > 1, at the precision of t.
BigReal legendreQ(int r, const BigReal& t);
// Closed form (1/2) P_r(t) log((t+1)/(t-1)) - W_{r-1}(t) at the precision of t.
BigReal legendreQClosedForm(int r, const BigReal& t);
// Integral of Q_r over [T, infinity), r >= 1.
BigReal legendreQTailIntegral(int r, const BigReal& T);

struct RCConstants {
  int r = 0;
  Rational k1, k2;
  std::vector<Rational> c;  // c_0 .. c_r
};

// Polynomial in (m1, m2, u), u = 1/(4 pi v); key {i, j, a}.
using TriPoly = std::map<std::array<int, 3>, Rational>;

RCConstants rcConstants(int r, const Rational& k1, const Rational& k2);
// LHS - RHS of the decomposition identity applied to e(m1 z1 + m2 z2),
// with the given constants; identically zero iff the identity holds.
TriPoly rcResidual(const RCConstants& rc);

}  // namespace greencm
