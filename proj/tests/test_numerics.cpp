#include <doctest.h>

#include <random>
#include <thread>

#include "greencm/errors.hpp"
#include "greencm/numerics.hpp"

using namespace greencm;

TEST_SUITE("numerics") {
  TEST_CASE("literal arithmetic must stay exact") {
    BigReal a = BigReal(3) + BigReal(4);
    CHECK(a.isLiteral());
    CHECK(a == BigReal(7));
    CHECK_THROWS_AS(BigReal(1) / BigReal(3), std::logic_error);
    BigReal b = BigReal(1) / BigReal(1L, Precision(128));
    CHECK(b.precision() == 128);
  }

  TEST_CASE("sumCompensated: cancellation keeps the tiny term") {
    Precision p(256);
    BigReal tiny = ldexp(BigReal(1L, p), -200);
    std::vector<BigReal> v = {BigReal(1L, p), BigReal(-1L, p), tiny};
    BigReal s = sumCompensated(v);
    CHECK(s.identical(tiny));
  }

  TEST_CASE("sumCompensated: a million copies of 0.1") {
    Precision p(256);
    BigReal tenth = BigReal::parse("0.1", p);
    std::vector<BigReal> v(1000000, tenth);
    BigReal s = sumCompensated(v);
    // exact rational oracle
    Rational exact = toRational(tenth) * 1000000;
    BigReal err = abs(s - BigReal(exact, Precision(512)));
    CHECK(err / BigReal(100000L, p) <= ldexp(BigReal(1L, p), -240));
    CHECK(abs(s - BigReal(100000L, p)) / BigReal(100000L, p) <= ldexp(BigReal(1L, p), -240));
  }

  TEST_CASE("sumCompensated: empty and mixed precisions") {
    std::vector<BigReal> none;
    CHECK(sumCompensated(none).isZero());
    std::vector<BigReal> mixed = {BigReal(1L, Precision(128)), BigReal(1L, Precision(256))};
    CHECK_THROWS_AS(sumCompensated(mixed), ConfigurationError);
  }

  TEST_CASE("exact accumulation is independent of order and threading") {
    Precision p(160);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<BigReal> v;
    for (int i = 0; i < 4000; ++i) v.push_back(ldexp(BigReal(U(rng), p), static_cast<long>(rng() % 80) - 40));
    ExactAccumulator serial;
    for (const auto& x : v) serial.add(x);
    ExactAccumulator rev;
    for (auto it = v.rbegin(); it != v.rend(); ++it) rev.add(*it);
    CHECK(serial.result(p).identical(rev.result(p)));

    std::vector<ExactAccumulator> parts(4);
    std::vector<std::thread> th;
    for (int t = 0; t < 4; ++t)
      th.emplace_back([&, t] {
        for (size_t i = t; i < v.size(); i += 4) parts[t].add(v[i]);
      });
    for (auto& x : th) x.join();
    ExactAccumulator merged;
    for (auto& part : parts) merged.add(part);
    CHECK(serial.result(p).identical(merged.result(p)));
  }

  TEST_CASE("integerRelation: small log relations") {
    Precision p(320);
    BigReal l2 = log(BigReal(2L, p)), l3 = log(BigReal(3L, p)), l4 = log(BigReal(4L, p)), l12 = log(BigReal(12L, p));
    std::vector<BigReal> a = {l2, l4};
    auto r = integerRelation(a, Integer(10), BigReal(1e-20));
    REQUIRE(r);
    CHECK(r->coefficients == std::vector<Integer>{2, -1});
    CHECK(r->certified);
    std::vector<BigReal> b = {l2, l3, l12};
    r = integerRelation(b, Integer(10), BigReal(1e-20));
    REQUIRE(r);
    CHECK(r->coefficients == std::vector<Integer>{2, 1, -1});
  }

  TEST_CASE("integerRelation: 1 and pi have no small relation") {
    Precision p50(170);  // about 50 digits
    std::vector<BigReal> v = {BigReal(1L, p50), BigReal::pi(p50)};
    CHECK_FALSE(integerRelation(v, Integer(1000000), BigReal(1e-12)));
    // higher-precision reduction oracle agrees
    Precision hi(512);
    std::vector<BigReal> w = {BigReal(1L, hi), BigReal::pi(hi)};
    CHECK_FALSE(integerRelation(w, Integer(1000000), BigReal(1e-30)));
  }

  TEST_CASE("integerRelation: tolerance below the noise floor is refused") {
    Precision p(128);
    std::vector<BigReal> v = {log(BigReal(2L, p)), log(BigReal(4L, p))};
    CHECK_THROWS_AS(integerRelation(v, Integer(10), BigReal(1e-30)), ConfigurationError);
  }

  TEST_CASE("integerRelation: recovery of random planted relations") {
    Precision p(200);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> coef(-1000, 1000);
    const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    int recovered = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      long p1 = primes[rng() % 12], p2;
      do p2 = primes[rng() % 12];
      while (p2 == p1);
      long n1 = coef(rng), n2 = coef(rng);
      if (n1 == 0) n1 = 1;
      BigReal v1 = log(BigReal(p1, p)), v2 = log(BigReal(p2, p));
      BigReal v3 = BigReal(n1, p) * v1 + BigReal(n2, p) * v2;
      std::vector<BigReal> v = {v1, v2, v3};
      auto r = integerRelation(v, Integer(1000), BigReal(1e-15));
      if (!r) continue;
      std::vector<Integer> want = {n1, n2, -1};
      if (n1 < 0)
        for (auto& x : want) x = -x;
      if (r->coefficients == want) ++recovered;
    }
    CHECK(recovered == trials);
  }

  TEST_CASE("integerRelation: unrelated logs are never certified") {
    Precision p(512);
    const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
      std::vector<long> ps(primes, primes + 14);
      std::shuffle(ps.begin(), ps.end(), rng);
      std::vector<BigReal> v = {log(BigReal(ps[0], p)), log(BigReal(ps[1], p)), log(BigReal(ps[2], p))};
      auto r = integerRelation(v, Integer(1000), BigReal(1e-30));
      CHECK((!r || !r->certified));
    }
  }

  TEST_CASE("nearestIntegerCheck") {
    Precision p(128);
    auto k = nearestIntegerCheck(BigReal::parse("3.0000000001", p), BigReal(1e-6));
    REQUIRE(k);
    CHECK(*k == 3);
    CHECK_FALSE(nearestIntegerCheck(BigReal(2.5, p), BigReal(0.4)));
    CHECK(*nearestIntegerCheck(BigReal(-7.00001, p), BigReal(1e-3)) == -7);
    CHECK_THROWS(nearestIntegerCheck(BigReal(1L, p), BigReal(0.5)));
  }

  TEST_CASE("LLL reduces a skewed basis") {
    std::vector<std::vector<Integer>> b = {{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}};
    lllReduce(b);
    // |det| = 3 is preserved; the first vector is short.
    std::vector<long> norms;
    for (auto& row : b) {
      Integer s = 0;
      for (auto& x : row) s += x * x;
      norms.push_back(s.get_si());
    }
    std::sort(norms.begin(), norms.end());
    CHECK(norms[0] <= 3);
    Integer det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                  b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    CHECK(abs(det) == 3);
  }
}
