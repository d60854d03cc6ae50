#include <doctest.h>

#include <random>

#include "greencm/errors.hpp"
#include "greencm/greens.hpp"
#include "oracles.hpp"

using namespace greencm;

namespace {

EvalRequest request(long m, int r, QuadForm z1, QuadForm z2, Precision p, double tol = 1e-4) {
  EvalRequest req;
  req.m = m;
  req.r = r;
  req.z1 = z1;
  req.z2 = z2;
  req.precision = p;
  req.tol = BigReal(tol, p);
  req.threads = 2;
  return req;
}

// Tail-bounded agreement of two adaptive evaluations.
bool agree(const GreenValue& a, const GreenValue& b, double extra) {
  BigReal slack = abs(a.tailEstimate) + abs(b.tailEstimate) + BigReal(extra, Precision(a.value.precision()));
  return abs(a.value - b.value) < slack;
}

}  // namespace

TEST_SUITE("greens") {
  TEST_CASE("hyperbolic cosine argument") {
    Precision p(128);
    QuadForm i{1, 0, 1}, twoI{1, 0, 4};
    BigReal t = coshArg(1, 0, 0, 1, 1, 1, i, twoI, p);
    CHECK(abs(t - BigReal(1.25, p)) < BigReal(1e-35, p));
    CHECK_THROWS_AS(coshArg(1, 0, 0, 1, 1, 1, i, i, p), SingularConfiguration);
    CHECK_THROWS_AS(coshArg(1, 1, 0, 2, 1, 1, i, twoI, p), std::invalid_argument);
  }

  TEST_CASE("exact rewrite equals the defining formula") {
    Precision p(170);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> U(-30, 30);
    const std::vector<QuadForm> forms = {{1, 0, 1}, {1, 1, 1}, {1, 1, 2}, {2, 1, 3}, {1, 0, 5}, {2, 2, 3}, {3, 2, 5}};
    int done = 0;
    while (done < 1000) {
      long N = 1 + static_cast<long>(rng() % 3), m = 1 + static_cast<long>(rng() % 4);
      long a = U(rng), c = U(rng), d = U(rng);
      if (c == 0) continue;
      long num = a * d - m;
      if (num % (N * c)) continue;
      long b = num / (N * c);
      const QuadForm& f1 = forms[rng() % forms.size()];
      const QuadForm& f2 = forms[rng() % forms.size()];
      if (f1.disc() == f2.disc()) continue;
      CoshArgExact e = coshArgExact({a, b, c, d}, N, m, f1, f2);
      BigReal viaExact = e.value(p);
      BigReal viaComplex = coshArgNumeric({a, b, c, d}, N, m, CMPoint{f1}.z(p), CMPoint{f2}.z(p));
      CHECK(abs(viaExact - viaComplex) < BigReal(1e-45, p) * viaExact);
      oracle::TExact o = oracle::tExact(a, b, c, d, N, m, f1, f2);
      CHECK(abs(o.value(p) - viaExact) < BigReal(1e-45, p) * viaExact);
      // exact comparisons agree with the independent exact form
      Rational T(static_cast<long>(viaExact.toDouble()) + 1);
      CHECK((e.compare(T) <= 0) == o.atMost(T));
      ++done;
    }
  }

  TEST_CASE("term sets and sums agree with the naive loop") {
    Precision p(100);
    struct Cfg {
      long N, m;
      int r;
      QuadForm z1, z2;
    };
    const std::vector<Cfg> cfgs = {{1, 1, 1, {1, 0, 1}, {1, 1, 1}},
                                   {1, 2, 2, {1, 0, 1}, {1, 1, 2}},
                                   {1, 3, 1, {1, 1, 1}, {1, 0, 2}},
                                   {2, 1, 2, {1, 1, 1}, {1, 0, 1}},
                                   {3, 2, 3, {1, 0, 1}, {2, 1, 3}}};
    for (const auto& c : cfgs) {
      EvalRequest req = request(c.m, c.r, c.z1, c.z2, p);
      req.N = c.N;
      const long T = 200;
      auto terms = enumerateTerms(req, Rational(0), Rational(T));
      oracle::NaiveSum naive = oracle::naiveGreen(c.N, c.m, c.r, c.z1, c.z2, T, p);
      CHECK(terms == naive.terms);
      GreenValue g = greenMAtCutoff(req, T);
      CHECK(g.partialSum.identical(naive.value));
      CHECK(g.terms == static_cast<long>(naive.terms.size()));
      // gamma and -gamma both appear
      for (const auto& t : terms)
        CHECK(std::binary_search(terms.begin(), terms.end(), LatticeTerm{-t.a, -t.b, -t.c, -t.d}));
    }
  }

  TEST_CASE("thread count does not change the sum") {
    Precision p(128);
    EvalRequest req = request(2, 2, {1, 0, 1}, {1, 1, 1}, p);
    req.threads = 1;
    GreenValue a = greenMAtCutoff(req, 400);
    req.threads = 3;
    GreenValue b = greenMAtCutoff(req, 400);
    CHECK(a.partialSum.identical(b.partialSum));
  }

  TEST_CASE("term density") {
    CHECK(*termDensity(1, 1) == 12);
    CHECK(*termDensity(1, 2) == 36);
    CHECK(*termDensity(2, 1) == 4);  // index 3 in SL2(Z)
    CHECK_FALSE(termDensity(2, 2));
    // counted terms in a shell grow like density * T
    Precision p(64);
    EvalRequest req = request(1, 1, {1, 0, 1}, {1, 1, 1}, p);
    auto terms = enumerateTerms(req, Rational(2000), Rational(4000));
    double ratio = static_cast<double>(terms.size()) / 2000.0;
    CHECK(ratio == doctest::Approx(12.0).epsilon(0.1));
  }

  TEST_CASE("symmetry and modular invariance, r = 2") {
    Precision p(128);
    QuadForm i{1, 0, 1}, rho{1, 1, 1};
    GreenValue a = greenM(request(1, 2, i, rho, p, 1e-6));
    GreenValue b = greenM(request(1, 2, rho, i, p, 1e-6));
    CHECK(a.converged);
    CHECK(agree(a, b, 1e-6));
    // z2 -> z2 + 1 is the form (a, b - 2a, ...), z2 -> -1/z2 is (c, -b, a)
    QuadForm f{2, 1, 3};
    QuadForm shifted{2, -3, 4};
    QuadForm inverted{3, -1, 2};
    GreenValue g0 = greenM(request(1, 2, i, f, p, 1e-6));
    GreenValue g1 = greenM(request(1, 2, i, shifted, p, 1e-6));
    GreenValue g2 = greenM(request(1, 2, i, inverted, p, 1e-6));
    CHECK(agree(g0, g1, 1e-6));
    CHECK(agree(g0, g2, 1e-6));
    CHECK(g0.fittedExponent == doctest::Approx(-2.0).epsilon(0.1));
  }

  TEST_CASE("greenF is linear in the principal part") {
    Precision p(128);
    QuadForm i{1, 0, 1}, rho{1, 1, 1};
    PrincipalPart f;
    f.r = 2;
    f.coeffs = {{1, Rational(2)}, {2, Rational(1)}};
    BigReal tol(1e-6, p);
    GreenValue F = greenF(1, f, i, rho, tol, p);
    GreenValue g1 = greenM(request(1, 2, i, rho, p, 1e-7));
    GreenValue g2 = greenM(request(2, 2, i, rho, p, 1e-7));
    BigReal want = BigReal(2L, p) * g1.value + BigReal(4L, p) * g2.value;
    CHECK(abs(F.value - want) < BigReal(3e-6, p));
    CHECK(F.converged);
  }

  TEST_CASE("a tolerance beyond the cutoff budget is reported, not hidden") {
    Precision p(128);
    EvalRequest req = request(1, 1, {1, 0, 1}, {1, 1, 1}, p, 1e-12);
    req.maxCutoff = 1024;
    GreenValue g = greenM(req);
    CHECK_FALSE(g.converged);
    CHECK(g.value.isFinite());
  }

  TEST_CASE("each term is a Laplace eigenfunction") {
    // y^2 (d_xx + d_yy) G = s(s-1) G, s = r + 1, on a fixed term set
    Precision p(256);
    for (int r : {1, 2}) {
      EvalRequest req = request(1, r, {1, 0, 1}, {1, 1, 1}, p);
      auto terms = enumerateTerms(req, Rational(0), Rational(60));
      BigComplex z1 = CMPoint{QuadForm{1, 0, 1}}.z(p), z2 = CMPoint{QuadForm{1, 1, 1}}.z(p);
      BigReal h(1e-4, p);
      auto at = [&](const BigReal& dx, const BigReal& dy) {
        return sumTermsAt(terms, r, 1, 1, BigComplex(z1.re + dx, z1.im + dy), z2);
      };
      BigReal zero(0L, p);
      BigReal G = at(zero, zero);
      BigReal lap = (at(h, zero) + at(-h, zero) + at(zero, h) + at(zero, -h) - BigReal(4L, p) * G) / (h * h);
      BigReal lhs = sqr(z1.im) * lap;
      BigReal rhs = BigReal(static_cast<long>((r + 1) * r), p) * G;
      CHECK(abs(lhs - rhs) < BigReal(1e-6, p) * abs(rhs));
    }
  }

  TEST_CASE("Hecke incidence") {
    QuadForm i{1, 0, 1}, rho{1, 1, 1};
    for (long m = 1; m <= 12; ++m) CHECK_FALSE(heckeIncidence(m, i, rho, 1));
    CHECK(heckeIncidence(1, i, i, 1));
    CHECK(heckeIncidence(2, i, i, 1));     // (1 1; -1 1) fixes i
    CHECK(heckeIncidence(2, i, {1, 0, 4}, 1));  // (1 0; 0 2) sends 2i to i
    CHECK_FALSE(heckeIncidence(1, i, {1, 0, 4}, 1));
    // m = 3: 3 is not a sum of two squares, so no matrix of determinant 3 fixes i
    CHECK_FALSE(heckeIncidence(3, i, i, 1));
    EvalRequest req = request(1, 1, i, i, Precision(64));
    CHECK_THROWS_AS(greenM(req), SingularConfiguration);
  }

  TEST_CASE("r = 0 closed form") {
    Precision p(256);
    QuadForm i{1, 0, 1}, rho{1, 1, 1}, twoI{1, 0, 4};
    CHECK(abs(borcherdsR0(i, rho, p) - log(BigReal(1728L, p))) < BigReal(1e-50, p));
    CHECK(borcherdsR0(i, rho, p) == borcherdsR0(rho, i, p));
    CHECK(abs(borcherdsR0(twoI, i, p) - log(BigReal(287496L - 1728L, p))) < BigReal(1e-50, p));
    CHECK_THROWS_AS(borcherdsR0(i, i, p), SingularConfiguration);
  }

  TEST_CASE("invalid requests") {
    Precision p(64);
    CHECK_THROWS_AS(greenM(request(1, 0, {1, 0, 1}, {1, 1, 1}, p)), ConfigurationError);
    CHECK_THROWS_AS(greenM(request(0, 1, {1, 0, 1}, {1, 1, 1}, p)), ConfigurationError);
  }
}
