#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencm/bigreal.hpp"
#include "greencm/polyops.hpp"
#include "greencm/qexp.hpp"
#include "greencm/quadfield.hpp"

namespace greencm {

// Normalized local Whittaker function as a polynomial in X = Nm(v)^{-s}.
struct WhittakerPoly {
  PrimeIdeal place;
  FieldElement t;
  std::vector<Rational> coeffs;
  bool derivativeKnown = true;  // false: only the value at X = 1 is certified

  Rational value() const;              // X = 1, i.e. s = 0
  Rational derivativeInX() const;      // d/dX at X = 1
  // d/ds at s = 0 divided by log Nm(v): -(d/dX at 1).
  Rational derivativeOverLog() const;
};

// Local factor for the maximal lattice at P, with t~ = t/alpha.
WhittakerPoly localWhittakerPoly(const PrimeIdeal& P, const FieldElement& t, const FieldElement& alpha,
                                 const FieldData& F);

// (#{x mod P^k : Nm(x) = t~ mod P^k} / q^k) * q/(q - chi), q = Nm(P).
Rational countingOracle(const PrimeIdeal& P, const FieldElement& t, const FieldElement& alpha, const FieldData& F,
                        long k);
// countingOracle at increasing k until two consecutive levels agree past ord.
Rational stabilizedCount(const PrimeIdeal& P, const FieldElement& t, const FieldElement& alpha, const FieldData& F);

struct WTildeResult {
  std::vector<PrimeIdeal> diff;
  Rational value = 0;  // 0 when |Diff| > 1
  std::optional<PrimeIdeal> diffPrime;
};
WTildeResult wTilde(const FieldElement& t, const FieldElement& alpha, const FieldData& F);

// Lambda(0, chi) = sqrt(D_E/D)/pi^2 L(1, chi_d1) L(1, chi_d2).
Rational lambdaChi(long d1, long d2);

// Finite Q(sqrt D)-linear combination of logarithms.
struct LogAtom {
  enum Kind { Prime, PrimeRatio, Unit } kind = Prime;
  long p = 0;  // Prime: log p; PrimeRatio: log|pi/pi'| for the branch-0 prime above p
  friend auto operator<=>(const LogAtom&, const LogAtom&) = default;
  std::string toString() const;
};

class LogCombination {
 public:
  explicit LogCombination(Integer D = 1) : D_(std::move(D)) {}
  void add(const LogAtom& atom, const FieldElement& coeff);
  LogCombination& operator+=(const LogCombination& o);
  LogCombination scaled(const FieldElement& s) const;
  bool isZero() const { return terms_.empty(); }
  const std::map<LogAtom, FieldElement>& terms() const { return terms_; }
  BigReal evaluate(const FieldData& F, Precision p) const;
  std::string toString() const;

 private:
  Integer D_;
  std::map<LogAtom, FieldElement> terms_;
};

struct Instance {
  long d1 = -4, d2 = -3;
  int r = 0;
  PrincipalPart f;
  Rational globalConstant = -1;  // calibrated
  Rational degree = 1;           // deg Z(W)
  std::optional<FieldElement> alpha;
  Precision precision{256};
};

struct LambdaTerm {
  long m = 0;
  FieldElement lambda;
  std::vector<PrimeIdeal> diff;
  Rational wtilde = 0;
  FieldElement weight;  // c(-m) m^r P_r((lambda - lambda')/m)
  std::optional<PrimeIdeal> diffPrime;
};

struct AveragePrediction {
  LogCombination symbolic;
  BigReal value;
  std::vector<LambdaTerm> terms;
  bool complete = true;
  std::vector<std::string> notes;
};

AveragePrediction predictAverage(const Instance& inst);

struct FactorPrediction {
  long m = 0;
  FieldElement lambda;
  std::vector<PrimeIdeal> diff;
  Rational wtilde = 0;
  FieldElement weight;
  std::map<PrimeIdeal, Rational> valuations;  // +W~ at the Diff prime, -W~ at its conjugate
  std::optional<FieldElement> generator;      // normalized gamma0 (or its power by the W~ denominator)
  long generatorPower = 1;
  long unitShift = 0;
};

struct DifferencePrediction {
  LogCombination symbolic;
  BigReal value;  // P
  std::vector<FactorPrediction> ledger;
  BigReal unitLog;    // log eps
  BigReal unitBasis;  // sqrt(D)^r log eps
  bool complete = true;
  std::vector<std::string> notes;
};

DifferencePrediction predictDifference(const Instance& inst);
// P recomputed from an explicit (possibly edited) ledger.
DifferencePrediction differenceFromLedger(const Instance& inst, std::vector<FactorPrediction> ledger);

FieldElement legendreAt(int r, const FieldElement& x);

nlohmann::json ledgerToJson(const std::vector<FactorPrediction>& ledger);

}  // namespace greencm
