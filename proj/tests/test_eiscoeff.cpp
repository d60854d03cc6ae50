#include <doctest.h>

#include "greencm/eiscoeff.hpp"
#include "greencm/errors.hpp"
#include "greencm/local_ring.hpp"
#include "greencm/pipeline.hpp"

using namespace greencm;

namespace {

Instance instance(long d1, long d2, int r, std::map<long, Rational> coeffs = {{1, Rational(1)}}) {
  Instance inst;
  inst.d1 = d1;
  inst.d2 = d2;
  inst.r = r;
  inst.f.r = r;
  inst.f.coeffs = std::move(coeffs);
  inst.precision = Precision(192);
  return inst;
}

bool isPrime(long n) {
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return n > 1;
}

const std::vector<std::pair<long, long>> kPairs = {{-4, -3}, {-4, -7}, {-3, -8}, {-4, -11}, {-7, -8}, {-3, -7}};

}  // namespace

TEST_SUITE("eiscoeff") {
  TEST_CASE("local Whittaker polynomials: basic shapes") {
    FieldData F(-4, -3, Precision(64));
    FieldElement a = defaultAlpha(F);
    // 11 splits in Q(sqrt 3) and is inert in Q(i), so both primes above 11 are inert in E/F
    PrimeIdeal P11 = F.primeIdeal(11, 0);
    REQUIRE(F.chiE(P11) == -1);
    FieldElement g11 = primeGenerator(P11, F);
    WhittakerPoly w1 = localWhittakerPoly(P11, a * g11, a, F);
    CHECK(w1.coeffs == std::vector<Rational>{1, -1});
    CHECK(w1.value() == 0);
    CHECK(w1.derivativeOverLog() == 1);
    // 13 splits everywhere
    PrimeIdeal P13 = F.primeIdeal(13, 0);
    REQUIRE(F.chiE(P13) == 1);
    FieldElement g13 = primeGenerator(P13, F);
    WhittakerPoly w2 = localWhittakerPoly(P13, a * g13 * g13, a, F);
    CHECK(w2.coeffs == std::vector<Rational>{1, 1, 1});
    CHECK(w2.value() == 3);
    WhittakerPoly w0 = localWhittakerPoly(P13, a, a, F);
    CHECK(w0.coeffs == std::vector<Rational>{1});
    // outside the lattice
    CHECK(localWhittakerPoly(P13, a / g13, a, F).value() == 0);
    CHECK_THROWS(localWhittakerPoly(P13, FieldElement(12, 0), a, F));
  }

  TEST_CASE("Hensel lifting agrees with literal enumeration") {
    FieldData F(-4, -3, Precision(64));
    FieldElement a = defaultAlpha(F);
    // split (13), inert in F (5, 7), ramified in F (3) and in E (3 is ramified in Q(sqrt -3))
    for (long p : {13L, 5L, 7L, 3L, 11L}) {
      PrimeIdeal P = F.primeIdeal(p, 0);
      NormForm N = normFormAt(P, F);
      for (long k = 1; k <= 3; ++k) {
        LocalRing R(P, F, static_cast<unsigned long>(k + 2));
        double size = std::pow(static_cast<double>(R.q()), 2.0 * k);
        if (size > 5e5) continue;
        auto reps = R.representatives(k);
        size_t step = std::max<size_t>(1, reps.size() / 40);
        for (size_t i = 0; i < reps.size(); i += step)
          CHECK_MESSAGE(henselNormCount(R, N, reps[i], k) == bruteForceNormCount(R, N, reps[i], k),
                        "p=" << p << " k=" << k << " i=" << i);
      }
    }
    (void)a;
  }

  TEST_CASE("closed forms match the counting oracle") {
    for (auto [d1, d2] : kPairs) {
      FieldData F(d1, d2, Precision(64));
      FieldElement a = defaultAlpha(F);
      // p = 2 included: for (-3, -7) it is unramified in E/F
      for (long p = 2; p <= 31; ++p) {
        if (!isPrime(p)) continue;
        for (int branch = 0; branch < (F.place(p).splittingInF == SplitType::Split ? 2 : 1); ++branch) {
          PrimeIdeal P = F.primeIdeal(p, branch);
          if (F.chiE(P) == 0) continue;
          FieldElement g = primeGenerator(P, F);
          FieldElement pw(F.D, 1);
          for (int o = 0; o <= 3; ++o) {
            FieldElement t = a * pw;
            if (std::pow(static_cast<double>(P.type == SplitType::Inert ? p * p : p), 2.0 * (o + 1)) < 5e6)
              CHECK_MESSAGE(localWhittakerPoly(P, t, a, F).value() == stabilizedCount(P, t, a, F),
                            P.label() << " o=" << o);
            pw = pw * g;
          }
        }
      }
    }
  }

  TEST_CASE("dyadic place unramified in E/F") {
    FieldData F(-3, -7, Precision(64));
    FieldElement a = defaultAlpha(F);
    PrimeIdeal P = F.primeIdeal(2, 0);
    REQUIRE(F.chiE(P) != 0);
    FieldElement g = primeGenerator(P, F), pw(F.D, 1);
    for (int o = 0; o <= 4; ++o) {
      CHECK(localWhittakerPoly(P, a * pw, a, F).value() == stabilizedCount(P, a * pw, a, F));
      pw = pw * g;
    }
  }

  TEST_CASE("counting oracle stabilizes") {
    FieldData F(-4, -3, Precision(64));
    FieldElement a = defaultAlpha(F);
    PrimeIdeal P = F.primeIdeal(13, 0);
    FieldElement t = a * primeGenerator(P, F);
    CHECK(countingOracle(P, t, a, F, 2) == countingOracle(P, t, a, F, 3));
    CHECK(countingOracle(P, t, a, F, 2) == 2);
    CHECK_THROWS(countingOracle(P, t, a, F, 0));
  }

  TEST_CASE("W~ for a single inert Diff prime of order one") {
    // W~ = 4 (o + 1)/2 prod_{v != P} W_v(1); the pure case o = 1 with trivial
    // remaining factors gives 4
    int seen = 0, pure = 0;
    for (auto [d1, d2] : kPairs) {
      FieldData F(d1, d2, Precision(64));
      FieldElement a = defaultAlpha(F);
      for (long m = 1; m <= 8; ++m)
        for (const auto& lam : traceEnumerate(m, F)) {
          WTildeResult w = wTilde(lam, a, F);
          if (w.diff.size() != 1) {
            CHECK(w.value == 0);
            continue;
          }
          REQUIRE(w.diffPrime);
          const PrimeIdeal& P = *w.diffPrime;
          if (F.chiE(P) != -1) continue;
          long o = ord(lam / a, P, F);
          CHECK(o % 2 == 1);
          Rational want(2 * (o + 1));
          bool trivial = true;
          for (const auto& Q : supportPrimes(lam / a, F)) {
            if (Q == P) continue;
            double q = static_cast<double>(Q.type == SplitType::Inert ? Q.p * Q.p : Q.p);
            if (std::pow(q, 2.0 * (std::abs(ord(lam / a, Q, F)) + 2)) > 5e6) {
              trivial = false;
              want = -1;
              break;
            }
            Rational c = stabilizedCount(Q, lam, a, F);
            if (c != 1) trivial = false;
            want *= c;
          }
          if (want < 0) continue;
          CHECK_MESSAGE(w.value == want, lam.toString());
          ++seen;
          if (o == 1 && trivial) {
            CHECK(w.value == 4);
            ++pure;
          }
        }
    }
    CHECK(seen > 10);
    CHECK(pure > 0);
  }

  TEST_CASE("Lambda(0, chi)") {
    CHECK(lambdaChi(-4, -3) == Rational(1, 6));
    for (auto [d1, d2] : kPairs) CHECK(lambdaChi(d1, d2) == lambdaChi(d2, d1));
    // sqrt(D_E/D)/(|d1 d2|) = 1, times 4 h1 h2 / (w1 w2)
    CHECK(lambdaChi(-4, -7) == Rational(1, 2));
    CHECK(lambdaChi(-4, -23) == Rational(3, 2));
  }

  TEST_CASE("structural zeros") {
    int zeros = 0;
    for (auto [d1, d2] : kPairs) {
      for (int r : {1, 3}) {
        AveragePrediction a = predictAverage(instance(d1, d2, r));
        CHECK(a.symbolic.isZero());
        CHECK(a.value.isZero());
        ++zeros;
      }
      for (int r : {2, 4}) {
        DifferencePrediction d = predictDifference(instance(d1, d2, r, {{1, Rational(1)}, {2, Rational(2)}}));
        CHECK(d.symbolic.isZero());
        CHECK(d.value.isZero());
        ++zeros;
      }
    }
    CHECK(zeros >= 3);
  }

  TEST_CASE("ledger: conjugate valuations cancel and generators are normalized") {
    for (auto [d1, d2] : kPairs) {
      FieldData F(d1, d2, Precision(128));
      DifferencePrediction d = predictDifference(instance(d1, d2, 1));
      CHECK_FALSE(d.ledger.empty());
      BigReal e2 = sqr(F.epsilon.embed(Precision(128)));
      for (const auto& fp : d.ledger) {
        std::map<long, Rational> byP;
        for (const auto& [P, v] : fp.valuations) byP[P.p] += v;
        for (const auto& [p, s] : byP) CHECK(s == 0);
        if (!fp.generator) continue;
        CHECK(abs(fp.generator->norm()) == 1);
        for (const auto& [P, v] : fp.valuations)
          CHECK(Rational(ord(*fp.generator, P, F)) == v * fp.generatorPower);
        BigReal ratio = abs(fp.generator->embed(Precision(128), 1) / fp.generator->embed(Precision(128), -1));
        CHECK(ratio >= BigReal(1L, Precision(128)));
        CHECK(ratio < e2);
      }
      // the symbolic form and the numeric value are the same number
      CHECK(abs(d.symbolic.evaluate(F, Precision(192)) - d.value) < BigReal(1e-50, Precision(192)));
    }
  }

  TEST_CASE("r = 0 average equals the closed-form Borcherds side") {
    Precision p(256);
    for (auto [d1, d2] : kPairs) {
      AveragePrediction a = predictAverage([&] {
        Instance i = instance(d1, d2, 0);
        i.precision = p;
        return i;
      }());
      BigReal lhs = averagedLhsR0(d1, d2, Rational(1), p);
      CHECK_MESSAGE(abs(a.value - lhs) < BigReal(1e-60, p), d1 << "," << d2);
    }
  }
}
