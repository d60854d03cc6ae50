#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencm/bigreal.hpp"
#include "greencm/quadfield.hpp"

namespace greencm {

// Truncated Laurent series sum_{n >= lead} a_n q^n + O(q^order) over Q.
class QSeries {
 public:
  QSeries() = default;
  QSeries(long lead, std::vector<Rational> coeffs, long order, int weight = 0);
  static QSeries monomial(const Rational& c, long exponent, long order, int weight = 0);

  long lead() const { return lead_; }
  long order() const { return order_; }
  int weight() const { return weight_; }
  // Coefficient of q^n; throws std::out_of_range at or beyond the truncation.
  Rational coeff(long n) const;
  // Smallest exponent with a nonzero coefficient (order() if none).
  long valuation() const;

  QSeries truncated(long order) const;
  QSeries withWeight(int w) const;

  QSeries operator+(const QSeries& o) const;
  QSeries operator-(const QSeries& o) const;
  QSeries operator*(const QSeries& o) const;
  friend QSeries operator*(const Rational& s, const QSeries& f);
  QSeries inverse() const;
  QSeries pow(long n) const;

  // Equal coefficients up to the common truncation.
  bool agreesWith(const QSeries& o) const;

  BigComplex evaluate(const BigComplex& q) const;

 private:
  long lead_ = 0;
  std::vector<Rational> c_;  // c_[i] is the coefficient of q^{lead_ + i}
  long order_ = 0;
  int weight_ = 0;
};

// Weakly holomorphic input form at level 1 of weight -2r: c(-m) for m >= 1.
struct PrincipalPart {
  std::map<long, Rational> coeffs;
  int r = 0;
  Rational constantTerm = 0;
};

Rational bernoulli(int k);
Integer divisorSigma(int k, long n);

// Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, k >= 4 even.
QSeries eisenstein(int k, long order);
QSeries delta(long order);
// j = E4^3 / Delta
QSeries jFunction(long order);

// Unique f = q^{-m} + O(1) of weight -2r on SL2(Z) with no other pole terms
// (for r = 0 also without constant term). Throws std::domain_error if the
// weight admits no such form.
QSeries faberBasis(int r, long m, long order);

// sum_m c(-m) faberBasis(r, m) + constantTerm
QSeries formFromPrincipalPart(const PrincipalPart& pp, long order);
PrincipalPart principalPartOf(const QSeries& f, int r);

// j at the root of a positive definite form, after exact reduction.
BigComplex evalJ(const QuadForm& form, Precision p);
// j at a point of the upper half plane, reduced numerically.
BigComplex evalJ(const BigComplex& z, Precision p);

// Reduce a positive definite form (exact SL2(Z) action on its root).
QuadForm reduceForm(QuadForm f);

nlohmann::json toJson(const QSeries& f);
QSeries qseriesFromJson(const nlohmann::json& j);

}  // namespace greencm
