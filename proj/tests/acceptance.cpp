// Acceptance criteria A1-A8. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <iostream>
#include <random>
#include <sstream>

#include "greencm/discform.hpp"
#include "greencm/eiscoeff.hpp"
#include "greencm/errors.hpp"
#include "greencm/pipeline.hpp"
#include "oracles.hpp"

using namespace greencm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string config(const std::string& name) { return std::string(GREENCM_CONFIG_DIR) + "/" + name; }

bool isOddPrime(long n) {
  if (n < 3 || n % 2 == 0) return false;
  for (long d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

const std::vector<std::pair<long, long>> kInstances = {{-4, -3}, {-4, -7}, {-3, -8}};

// A1: r = 0 calibration, a single global constant across the instances.
Outcome a1() {
  Calibration stored = loadCalibration(defaultCalibrationPath());
  CalibrationResult res = runCalibration(kInstances, Precision(640), BigReal(Rational(1, 1), Precision(640)) /
                                                                        pow(BigReal(10L, Precision(640)), 40));
  std::ostringstream os;
  for (const auto& in : res.instances)
    os << "(" << in.d1 << "," << in.d2 << ") C=" << (in.constant ? in.constant->get_str() : "none")
       << " residual=" << in.residual.toString(3) << "; ";
  bool ok = res.consistent && res.constant && *res.constant == stored.globalConstant;
  os << "stored C=" << stored.globalConstant.get_str();
  return {ok, os.str()};
}

Outcome verdictOutcome(const VerificationReport& rep) {
  std::ostringstream os;
  os << "verdict=" << rep.verdict;
  if (rep.residual) os << " residual=" << rep.residual->toString(4);
  if (rep.kappaUsed) os << " kappa=" << *rep.kappaUsed;
  if (rep.unitExponent) os << " k=" << *rep.unitExponent;
  return {rep.verdict == "verified", os.str()};
}

// A2: averaged identity at r = 2.
Outcome a2() {
  InstanceConfig c = loadConfig(config("a2_r2.toml"));
  return verdictOutcome(cmdVerifyAverage(c, loadCalibration(defaultCalibrationPath())));
}

// A3: difference identity at r = 1 up to a unit.
Outcome a3() {
  InstanceConfig c = loadConfig(config("a3_r1.toml"));
  return verdictOutcome(cmdVerifyDifference(c, loadCalibration(defaultCalibrationPath())));
}

Instance makeInst(long d1, long d2, int r, std::map<long, Rational> coeffs) {
  Instance in;
  in.d1 = d1;
  in.d2 = d2;
  in.r = r;
  in.f.r = r;
  in.f.coeffs = std::move(coeffs);
  in.precision = Precision(128);
  return in;
}

// A4: sign-forced structural zeros.
Outcome a4() {
  int zeros = 0, wrong = 0;
  const std::vector<std::pair<long, long>> pairs = {{-4, -3}, {-4, -7}, {-3, -8}, {-4, -11}};
  for (auto [d1, d2] : pairs) {
    for (int r : {1, 3}) {
      AveragePrediction a = predictAverage(makeInst(d1, d2, r, {{1, Rational(1)}, {2, Rational(-3)}}));
      (a.symbolic.isZero() && a.value.isZero()) ? ++zeros : ++wrong;
    }
    for (int r : {2, 4}) {
      DifferencePrediction d = predictDifference(makeInst(d1, d2, r, {{1, Rational(1)}, {3, Rational(2)}}));
      (d.symbolic.isZero() && d.value.isZero()) ? ++zeros : ++wrong;
    }
  }
  return {wrong == 0 && zeros >= 3, std::to_string(zeros) + " structural zeros, " + std::to_string(wrong) + " failures"};
}

// A5: local Whittaker closed forms against the counting oracle; Diff parity.
Outcome a5() {
  long compared = 0, bad = 0, diffs = 0, evenDiffs = 0;
  std::string firstBad;
  auto compare = [&](const PrimeIdeal& P, const FieldElement& t, const FieldElement& a, const FieldData& F) {
    Rational closed = localWhittakerPoly(P, t, a, F).value();
    Rational counted = stabilizedCount(P, t, a, F);
    ++compared;
    if (closed != counted) {
      if (firstBad.empty()) firstBad = P.label() + " t=" + t.toString();
      ++bad;
    }
  };
  for (auto [d1, d2] : kInstances) {
    FieldData F(d1, d2, Precision(64));
    FieldElement a = defaultAlpha(F);
    for (long p = 3; p <= 50; ++p) {
      if (!isOddPrime(p)) continue;
      for (const auto& P : F.place(p).primesAbove) {
        if (F.chiE(P) == 0) continue;
        FieldElement g = primeGenerator(P, F), pw(F.D, 1);
        for (int o = 0; o <= 6; ++o) {
          compare(P, a * pw, a, F);
          pw = pw * g;
        }
      }
    }
    for (long m = 1; m <= 6; ++m)
      for (const auto& lam : traceEnumerate(m, F)) {
        ++diffs;
        if (diffSet(lam, a, F).size() % 2 == 0) ++evenDiffs;
        for (const auto& P : supportPrimes(lam / a, F))
          if (isOddPrime(P.p) && P.p <= 50 && F.chiE(P) != 0) compare(P, lam, a, F);
      }
  }
  std::ostringstream os;
  os << compared << " local factors compared, " << bad << " disagree";
  if (!firstBad.empty()) os << " (first: " << firstBad << ")";
  os << "; " << diffs << " Diff sets, " << evenDiffs << " even";
  return {bad == 0 && evenDiffs == 0 && compared > 0, os.str()};
}

// A6: lattice enumeration against the naive box loop.
Outcome a6() {
  const Precision p(100);
  const long T = 1000;
  const std::vector<QuadForm> forms = {{1, 0, 1}, {1, 1, 1}, {1, 1, 2}, {1, 0, 2}, {2, 1, 3}, {1, 1, 3}};
  std::mt19937_64 rng(20240601);
  int done = 0, bad = 0;
  std::string firstBad;
  while (done < 20) {
    long N = 1 + static_cast<long>(rng() % 3), m = 1 + static_cast<long>(rng() % 4);
    int r = 1 + static_cast<int>(rng() % 3);
    const QuadForm& z1 = forms[rng() % forms.size()];
    const QuadForm& z2 = forms[rng() % forms.size()];
    if (heckeIncidence(m, z1, z2, N)) continue;
    EvalRequest req;
    req.N = N;
    req.m = m;
    req.r = r;
    req.z1 = z1;
    req.z2 = z2;
    req.precision = p;
    req.tol = BigReal(1e-6, p);
    auto terms = enumerateTerms(req, Rational(0), Rational(T));
    oracle::NaiveSum naive = oracle::naiveGreen(N, m, r, z1, z2, T, p);
    GreenValue g = greenMAtCutoff(req, T);
    bool ok = terms == naive.terms && g.partialSum.identical(naive.value);
    if (!ok) {
      ++bad;
      if (firstBad.empty()) {
        std::ostringstream os;
        os << "N=" << N << " m=" << m << " r=" << r << " terms " << terms.size() << " vs " << naive.terms.size();
        firstBad = os.str();
      }
    }
    ++done;
  }
  std::string d = std::to_string(done) + " configurations at T=" + std::to_string(T) + ", " + std::to_string(bad) +
                  " differ";
  if (!firstBad.empty()) d += " (first: " + firstBad + ")";
  return {bad == 0, d};
}

// A7: Weil representation relations and the level-one lift.
Outcome a7() {
  const Precision p(160);
  const BigReal tol(1e-30, p);
  BigReal worst(0L, p);
  for (long N = 1; N <= 12; ++N) {
    ComplexMatrix S = weilS(N, p), T = weilT(N, p), I = ComplexMatrix::identity(N * N, p);
    ComplexMatrix S2 = S * S, ST = S * T;
    for (const BigReal& e : {maxAbsDiff(S2 * S2, I), maxAbsDiff(ST * ST * ST, S2), maxAbsDiff(S * S.adjoint(), I),
                             maxAbsDiff(T * T.adjoint(), I)})
      if (e > worst) worst = e;
    for (long a = 1; a < N; ++a) {
      if (std::gcd(a, N) != 1) continue;
      ComplexMatrix U = unitAction(N, a, p);
      for (const BigReal& e : {maxAbsDiff(U * S, S * U), maxAbsDiff(U * T, T * U)})
        if (e > worst) worst = e;
    }
  }
  bool lift = true;
  for (int k = 0; k <= 2; ++k) {
    QSeries f = faberBasis(k, 1, 8);
    lift = lift && sc(vvLiftLevelOne(f)).agreesWith(f);
  }
  PrincipalPart pp;
  pp.r = 1;
  pp.coeffs = {{1, Rational(-7, 3)}, {2, Rational(5)}};
  lift = lift && principalPartOf(sc(vvLiftLevelOne(formFromPrincipalPart(pp, 8))), 1).coeffs == pp.coeffs;
  return {worst < tol && lift, "max relation defect " + worst.toString(3) + (lift ? ", lift round-trips" : ", lift fails")};
}

// A8: polynomial and Legendre-function identities.
Outcome a8() {
  int bad = 0;
  for (int r = 0; r <= 20; ++r)
    if (!(legendreP(r) == legendrePAlt(r))) ++bad;
  for (int r = 0; r <= 10; ++r) {
    BivarPoly q = qKernel(r, 1, 1);
    BivarPoly x = BivarPoly::X(), y = BivarPoly::Y();
    if (!((q * (x + y)).dX().dY() == Rational(r + 1) * (q.dX() + q.dY()))) ++bad;
  }
  const Precision p(192);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.02, 3.0);
  BigReal worst(0L, p);
  for (int i = 0; i < 20; ++i) {
    int r = static_cast<int>(rng() % 6);
    BigReal t = BigReal(1L, p) + BigReal(std::exp(U(rng)) - 1, p);
    BigReal b = oracle::quadratureQ(r, t, p, BigReal(1e-45, p));
    BigReal e = abs(legendreQ(r, t) - b) / abs(b);
    if (e > worst) worst = e;
  }
  if (!(worst < BigReal(1e-40, p))) ++bad;
  for (int r = 0; r <= 4; ++r) {
    if (!rcResidual(rcConstants(r, -2 * r, Rational(1, 2))).empty()) ++bad;
    if (!rcResidual(rcConstants(r, -2 * r - 1, Rational(-1, 2))).empty()) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " identity failures, worst quadrature error " + worst.toString(3)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s  %s  [%.1fs]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
