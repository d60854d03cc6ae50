#include <doctest.h>

#include <random>

#include "greencm/polyops.hpp"
#include "oracles.hpp"

using namespace greencm;

namespace {

BivarPoly X() { return BivarPoly::X(); }
BivarPoly Y() { return BivarPoly::Y(); }

}  // namespace

TEST_SUITE("polyops") {
  TEST_CASE("Legendre polynomials: small cases") {
    CHECK(legendreP(0) == Poly({1}));
    CHECK(legendreP(1) == Poly({0, 1}));
    CHECK(legendreP(2) == Poly({Rational(-1, 2), 0, Rational(3, 2)}));
  }

  TEST_CASE("Legendre polynomials: both formulas and the recurrence, r <= 20") {
    for (int r = 0; r <= 20; ++r) CHECK_MESSAGE(legendreP(r) == legendrePAlt(r), "r = " << r);
    Poly x({0, 1});
    for (int r = 1; r < 20; ++r) {
      Poly lhs = Rational(r + 1) * legendreP(r + 1);
      Poly rhs = Rational(2 * r + 1) * (x * legendreP(r)) - Rational(r) * legendreP(r - 1);
      CHECK(lhs == rhs);
    }
    for (int r = 0; r <= 20; ++r) CHECK(legendreP(r)(Rational(1)) == 1);
  }

  TEST_CASE("generalized binomial") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(Rational(1, 2), 2) == Rational(-1, 8));
    CHECK(binomial(Rational(-1, 2), 3) == Rational(-5, 16));
    CHECK(binomial(7, 0) == 1);
  }

  TEST_CASE("Rankin-Cohen kernels") {
    CHECK(qKernel(0, 3, 5) == BivarPoly::constant(1));
    CHECK(qKernel(1, 1, 1) == X() - Y());
    BivarPoly q2 = X() * X() - Rational(4) * (X() * Y()) + Y() * Y();
    CHECK(qKernel(2, 1, 1) == q2);
    // (X+Y)^2 P_2((X-Y)/(X+Y)) = (3 (X-Y)^2 - (X+Y)^2)/2
    BivarPoly s = X() + Y(), d = X() - Y();
    CHECK(Rational(1, 2) * (Rational(3) * (d * d) - s * s) == q2);
  }

  TEST_CASE("kernel parity under swapping, r <= 10") {
    for (int r = 0; r <= 10; ++r) {
      BivarPoly q = qKernel(r, 1, 1);
      CHECK(q.swapped() == (r % 2 ? Rational(-1) * q : q));
    }
  }

  TEST_CASE("modified kernels") {
    CHECK(qTilde(0) == BivarPoly::constant(1));
    CHECK(qTilde(1) == X() + Y());
    CHECK(qTilde(2) == X() * X() - Rational(4) * (X() * Y()) + Y() * Y());
    BivarPoly q3 = qTilde(3);
    CHECK(q3 == X() * X() * X() - Rational(7) * (X() * X() * Y()) - Rational(7) * (X() * Y() * Y()) +
                    Y() * Y() * Y());
    CHECK_THROWS_AS(X().divideExact(X() + Y()), std::logic_error);
  }

  TEST_CASE("differential identity of the kernels, r <= 10") {
    for (int r = 0; r <= 10; ++r) {
      BivarPoly q = qKernel(r, 1, 1);
      BivarPoly lhs = (q * (X() + Y())).dX().dY();
      BivarPoly rhs = Rational(r + 1) * (q.dX() + q.dY());
      CHECK_MESSAGE(lhs == rhs, "r = " << r);
    }
  }

  TEST_CASE("legendreQ: closed values") {
    Precision p(192);
    BigReal q0 = legendreQ(0, BigReal(3L, p));
    CHECK(abs(q0 - log(BigReal(2L, p)) / BigReal(2L, p)) < BigReal(1e-50, p));
    BigReal q1 = legendreQ(1, BigReal(2L, p));
    CHECK(abs(q1 - (log(BigReal(3L, p)) - BigReal(1L, p))) < BigReal(1e-50, p));
    CHECK_THROWS(legendreQ(1, BigReal(1L, p)));
    CHECK_THROWS(legendreQ(1, BigReal(2)));
  }

  TEST_CASE("legendreQ against double-exponential quadrature") {
    Precision p(192);
    BigReal tol(1e-45, p);
    {
      BigReal t = BigReal(1.5, p);
      CHECK(abs(legendreQ(2, t) - oracle::quadratureQ(2, t, p, tol)) < BigReal(1e-40, p));
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.02, 3.0);
    for (int i = 0; i < 8; ++i) {
      int r = static_cast<int>(rng() % 6);
      BigReal t = BigReal(1L, p) + BigReal(std::exp(U(rng)) - 1, p);
      BigReal a = legendreQ(r, t), b = oracle::quadratureQ(r, t, p, tol);
      CHECK_MESSAGE(abs(a - b) < BigReal(1e-40, p) * abs(b), "r=" << r << " t=" << t.toString(8));
    }
  }

  TEST_CASE("legendreQ: both branches agree near the switch") {
    Precision p(256);
    for (int r = 1; r <= 6; ++r)
      for (double t : {1.9, 2.0, 2.1, 3.5}) {
        BigReal T(t, p);
        BigReal a = legendreQ(r, T), b = legendreQClosedForm(r, T);
        CHECK(abs(a - b) < BigReal(1e-60, p) * abs(a));
      }
  }

  TEST_CASE("legendreQ decay t^{r+1} Q_r(t)") {
    Precision p(256);
    for (int r = 0; r <= 4; ++r) {
      // limit 2^r (r!)^2 / (2r+1)!
      Integer num = 1, den = 1;
      for (int i = 1; i <= r; ++i) num *= 2 * i * i;
      for (int i = 1; i <= 2 * r + 1; ++i) den *= i;
      BigReal lim(Rational(num, den), p);
      BigReal a = legendreQ(r, BigReal(1000L, p)) * pow(BigReal(1000L, p), r + 1);
      BigReal b = legendreQ(r, BigReal(1000000L, p)) * pow(BigReal(1000000L, p), r + 1);
      CHECK(abs(b - lim) < abs(a - lim));
      CHECK(abs(b / lim - BigReal(1L, p)) < BigReal(1e-11, p));
    }
  }

  TEST_CASE("tail integral matches numerical integration") {
    Precision p(128);
    for (int r = 1; r <= 3; ++r) {
      BigReal T(50L, p);
      BigReal I = legendreQTailIntegral(r, T);
      // Simpson rule on u = 1/t in [0, 1/T]; the integrand tends to 1/3 (r = 1) or 0.
      const int n = 2000;
      BigReal h = BigReal(1L, p) / (T * BigReal(static_cast<long>(n), p));
      BigReal s(0L, p);
      for (int i = 0; i <= n; ++i) {
        BigReal u = h * BigReal(static_cast<long>(i), p);
        BigReal f = i == 0 ? BigReal(Rational(r == 1 ? 1 : 0, 3), p) : legendreQ(r, BigReal(1L, p) / u) / (u * u);
        long w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += BigReal(w, p) * f;
      }
      s *= h / BigReal(3L, p);
      CHECK(abs(I - s) < BigReal(1e-12, p) * abs(I));
    }
  }

  TEST_CASE("Rankin-Cohen decomposition constants") {
    auto c0 = rcConstants(0, Rational(1, 2), Rational(-1, 2));
    REQUIRE(c0.c.size() == 1);
    CHECK(c0.c[0] == 1);
    for (int r = 1; r <= 4; ++r) {
      for (auto [k1, k2] : std::vector<std::pair<Rational, Rational>>{{Rational(-2 * r), Rational(1, 2)},
                                                                      {Rational(-2 * r - 1), Rational(-1, 2)}}) {
        auto rc = rcConstants(r, k1, k2);
        CHECK(rc.c.size() == static_cast<size_t>(r + 1));
        CHECK(rcResidual(rc).empty());
      }
    }
    auto h = rcConstants(1, Rational(-5, 2), Rational(1, 2));
    CHECK(rcResidual(h).empty());
    CHECK(h.c[0] == Rational(5, 4));
    CHECK(h.c[1] == Rational(1, 2));
    // outside k1 + k2 + 2r < 2 the constants are not defined
    CHECK_THROWS(rcConstants(2, Rational(-5, 2), Rational(1, 2)));
    CHECK_THROWS(rcConstants(0, 1, 1));
    // a perturbed constant leaves a nonzero residual
    auto bad = rcConstants(2, -4, Rational(1, 2));
    bad.c[0] += 1;
    CHECK_FALSE(rcResidual(bad).empty());
  }
}
