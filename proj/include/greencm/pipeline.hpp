#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencm/eiscoeff.hpp"
#include "greencm/greens.hpp"
#include "greencm/numerics.hpp"

namespace greencm {

struct InstanceConfig {
  long d1 = -4, d2 = -3;
  int r = 0;
  long level = 1;
  PrincipalPart principalPart;
  bool constantTermGiven = false;
  long precisionBits = 256;
  std::string tol = "1e-8";             // average residual bound
  std::string greenTol;                 // lattice-sum target; empty: tol / 100
  std::string recognitionTol = "1e-4";  // |kappa(V - P) - k U| / kappa
  long kappaMax = 96;
  long maxUnitExponent = 50;
  long cutoffBudget = 1L << 20;
  unsigned threads = 0;

  Precision precision() const { return Precision(precisionBits); }
  BigReal tolerance() const;
  BigReal greenTolerance() const;
  BigReal recognitionTolerance() const;
};

InstanceConfig parseConfig(const std::string& tomlText);
InstanceConfig loadConfig(const std::string& path);
nlohmann::json configToJson(const InstanceConfig& c);
// Full instance checks: coprime fundamental d1 != d2, r = 0 => no constant term.
void validateInstance(const InstanceConfig& c);

struct Calibration {
  int version = 1;
  Rational globalConstant = -1;
  Rational degree = 1;
  nlohmann::json details = nlohmann::json::object();
};

std::string defaultCalibrationPath();
Calibration loadCalibration(const std::string& path);
void saveCalibration(const Calibration& c, const std::string& path);

Instance makeInstance(const InstanceConfig& c, const Calibration& cal);

struct VerificationReport {
  nlohmann::json lhs = nlohmann::json::array();
  std::optional<BigReal> lhsValue;
  std::optional<BigReal> rhsPrediction;
  std::optional<BigReal> residual;
  std::optional<long> unitExponent;
  std::optional<long> kappaUsed;
  std::string verdict = "inconclusive";  // verified | inconclusive | mismatch
  std::vector<std::string> notes;
  nlohmann::json provenance = nlohmann::json::object();
  nlohmann::json toJson() const;
};

nlohmann::json greenValueToJson(const GreenValue& g);

nlohmann::json cmdGreenEval(const InstanceConfig& c, long z1Index, long z2Index);
nlohmann::json cmdCmPoints(const InstanceConfig& c);
nlohmann::json cmdPredictFactorization(const InstanceConfig& c, const Calibration& cal);

// Plus identity averaged over all CM pairs.
VerificationReport cmdVerifyAverage(const InstanceConfig& c, const Calibration& cal);

struct DifferenceOptions {
  // Negate the first nonzero valuation of this ledger entry (negative control).
  std::optional<size_t> flipValuation;
};
VerificationReport cmdVerifyDifference(const InstanceConfig& c, const Calibration& cal,
                                       const DifferenceOptions& opts = {});

// r = 0 averaged left side: (2 / h1 h2) sum_pairs -4 c(-1) log|j(z1) - j(z2)|.
BigReal averagedLhsR0(long d1, long d2, const Rational& c1, Precision p);

struct CalibrationInstance {
  long d1, d2;
  BigReal lhs, rhsUnit;  // rhsUnit: predictAverage with global constant 1
  std::optional<Relation> relation;
  std::optional<Rational> constant;
  BigReal residual;
};
struct CalibrationResult {
  std::vector<CalibrationInstance> instances;
  std::optional<Rational> constant;  // common value, if all agree
  bool consistent = false;
  nlohmann::json toJson() const;
};
CalibrationResult runCalibration(const std::vector<std::pair<long, long>>& pairs, Precision p, const BigReal& tol);

struct SelfTestResult {
  std::vector<std::pair<std::string, bool>> checks;
  bool passed() const;
};
SelfTestResult runSelfTest();

}  // namespace greencm
