#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "greencm/bigreal.hpp"

namespace greencm {

// x + y*sqrt(D) with exact rational coordinates; D is a nonsquare integer of
// either sign (real quadratic fields and the imaginary fields of CM points).
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(Integer D, Rational x, Rational y = 0);

  const Integer& D() const { return D_; }
  const Rational& x() const { return x_; }
  const Rational& y() const { return y_; }

  FieldElement conj() const { return {D_, x_, -y_}; }
  Rational norm() const { return x_ * x_ - Rational(D_) * y_ * y_; }
  Rational trace() const { return 2 * x_; }
  bool isZero() const { return x_ == 0 && y_ == 0; }
  bool isRational() const { return y_ == 0; }
  // In the maximal order: (X + Y sqrt D)/2 with X, Y integral, X = YD mod 2.
  bool isIntegral() const;
  // Both real embeddings positive (D > 0 only).
  bool isTotallyPositive() const;

  FieldElement operator-() const { return {D_, -x_, -y_}; }
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const Rational& s, const FieldElement& a) { return {a.D_, s * a.x_, s * a.y_}; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.D_ == b.D_ && a.x_ == b.x_ && a.y_ == b.y_;
  }
  FieldElement pow(long n) const;

  // Real embedding x + sign*y*sqrt(D) (D > 0).
  BigReal embed(Precision p, int sign = 1) const;
  // "x + y√D" with reduced fractions, e.g. "1/2 - 1/12√12".
  std::string toString() const;

 private:
  Integer D_ = 1;
  Rational x_ = 0, y_ = 0;
};

// Extended Kronecker symbol (a/n).
int kronecker(long a, long n);
bool isFundamentalDiscriminant(long d);
// Number of roots of unity in the imaginary quadratic order of discriminant d.
int unitCount(long d);

// Minimal totally positive unit > 1 of norm 1 in the maximal order of Q(sqrt D).
FieldElement fundamentalUnit(const Integer& D);

enum class SplitType { Split, Inert, Ramified };
std::string toString(SplitType s);

// Prime ideal of the maximal order of F above p. For split p the two
// primes are told apart by the p-adic root of the minimal polynomial of the
// order generator: branch 0 takes the smaller residue, labels "p" and "p'".
struct PrimeIdeal {
  long p = 0;
  SplitType type = SplitType::Inert;
  int branch = 0;
  std::string label() const;
  long residueDegree() const { return type == SplitType::Inert ? 2 : 1; }
  Integer absNorm() const;
  PrimeIdeal conjugate() const;
  friend auto operator<=>(const PrimeIdeal&, const PrimeIdeal&) = default;
};

struct PlaceData {
  long p = 0;
  SplitType splittingInF = SplitType::Inert;
  std::vector<PrimeIdeal> primesAbove;
  std::vector<SplitType> splittingInE;  // per prime above, for E/F
};

struct FieldData {
  long d1 = 0, d2 = 0;
  Integer D;
  FieldElement epsilon;  // fundamental unit
  BigReal sqrtD;

  // Validates coprime negative fundamental d1 != d2 with d1*d2 nonsquare.
  FieldData(long d1, long d2, Precision p);

  // Order generator omega = (1+sqrt D)/2 or sqrt(D/4); minimal polynomial
  // X^2 - trOmega X + nmOmega.
  long trOmega() const;
  Integer nmOmega() const;
  PlaceData place(long p) const;
  PrimeIdeal primeIdeal(long p, int branch = 0) const;
  // E/F local character at a prime of F: +1 split, -1 inert, 0 ramified.
  int chiE(const PrimeIdeal& P) const;
  // The d_i prime to p, used to write O_E = O_F[Theta] locally.
  long coprimeDisc(long p) const;
};

// omega-coordinates: a = (U + V omega)/den, den > 0.
struct OmegaCoords {
  Integer U, V, den;
};
OmegaCoords omegaCoords(const FieldElement& a);

// p-adic root (mod p^K) of the omega minimal polynomial for branch b of a split p.
Integer splitRoot(const FieldData& F, long p, int branch, unsigned long K);

// ord_P(a) for a != 0.
long ord(const FieldElement& a, const PrimeIdeal& P, const FieldData& F);

// Trial factorization of a nonzero integer into (prime, exponent).
std::vector<std::pair<long, long>> factorInteger(const Integer& n);

// Prime ideals P with ord_P(a) != 0, sorted.
std::vector<PrimeIdeal> supportPrimes(const FieldElement& a, const FieldData& F);

// lambda in the inverse different, totally positive, Tr(lambda) = m; sorted
// by the coefficient of sqrt D.
std::vector<FieldElement> traceEnumerate(long m, const FieldData& F);

// Default alpha = -1/sqrt(D) (first embedding negative, second positive).
FieldElement defaultAlpha(const FieldData& F);

// Finite places where t/alpha is not a local norm from E.
std::vector<PrimeIdeal> diffSet(const FieldElement& t, const FieldElement& alpha, const FieldData& F);

// Generator of P found by bounded search (x + y sqrt D)/2 with |Nm| = Nm(P);
// for split P it has ord 1 at P and 0 at P'. UnsupportedInstance if none.
FieldElement primeGenerator(const PrimeIdeal& P, const FieldData& F);

struct GeneratorResult {
  FieldElement gamma;  // normalized: 1 <= |gamma/gamma'| < eps^2, gamma > 0
  FieldElement raw;    // product of prime generators before unit normalization
  long unitShift = 0;  // gamma = raw * eps^unitShift (up to sign)
};
GeneratorResult generatorWithValuations(const std::map<PrimeIdeal, long>& valuations, const FieldData& F);

// Binary quadratic form ax^2 + bxy + cy^2.
struct QuadForm {
  long a = 1, b = 0, c = 1;
  long disc() const { return b * b - 4 * a * c; }
  friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

// Root z = (-b + sqrt d)/(2a) of a positive definite form.
struct CMPoint {
  QuadForm form;
  long d() const { return form.disc(); }
  FieldElement exact() const;  // element of Q(sqrt d)
  BigComplex z(Precision p) const;
};

struct CMPointSet {
  long d = 0;
  std::vector<QuadForm> reducedForms;
  std::vector<CMPoint> points;
  long classNumber = 0;
  int unitCount = 0;
};

CMPointSet classGroup(long d);

}  // namespace greencm
