#include <doctest.h>

#include "greencm/discform.hpp"
#include "greencm/errors.hpp"

using namespace greencm;

namespace {

const Precision kP(160);

bool close(const ComplexMatrix& A, const ComplexMatrix& B, double tol = 1e-30) {
  return maxAbsDiff(A, B) < BigReal(tol, kP);
}

}  // namespace

TEST_SUITE("discform") {
  TEST_CASE("finite quadratic module") {
    FiniteQuadModule L(6);
    CHECK(L.size() == 36);
    CHECK(L.qvalue(L.index(2, 5)) == Rational(2, 3));
    long mu = L.index(1, 2);
    CHECK(L.element(L.negate(mu)) == std::pair<long, long>{5, 4});
    // (x, y) = Q(x + y) - Q(x) - Q(y) mod 1
    long x = L.index(1, 2), y = L.index(3, 1);
    Rational b = L.bilinear(x, y);
    CHECK(b >= 0);
    CHECK(b < 1);
    CHECK(b == Rational(1 * 1 + 3 * 2, 6) - 1);
  }

  TEST_CASE("level one is trivial") {
    CHECK(close(weilT(1, kP), ComplexMatrix::identity(1, kP)));
    CHECK(close(weilS(1, kP), ComplexMatrix::identity(1, kP)));
  }

  TEST_CASE("level two T is diagonal") {
    ComplexMatrix T = weilT(2, kP);
    FiniteQuadModule L(2);
    for (long i = 0; i < 4; ++i) {
      auto [b, c] = L.element(i);
      long want = (b * c) % 2 ? -1 : 1;
      CHECK(abs(T.re(i, i) - BigReal(want, kP)) < BigReal(1e-40, kP));
      CHECK(abs(T.im(i, i)) < BigReal(1e-40, kP));
    }
  }

  TEST_CASE("S^2 acts as mu -> -mu at level three") {
    ComplexMatrix S = weilS(3, kP);
    ComplexMatrix S2 = S * S;
    FiniteQuadModule L(3);
    ComplexMatrix P = ComplexMatrix::zero(9, 9, kP);
    for (long i = 0; i < 9; ++i) P.re(L.negate(i), i) = BigReal(1L, kP);
    CHECK(close(S2, P));
  }

  TEST_CASE("Weil representation relations, N <= 6") {
    for (long N = 1; N <= 6; ++N) {
      ComplexMatrix S = weilS(N, kP), T = weilT(N, kP);
      ComplexMatrix I = ComplexMatrix::identity(N * N, kP);
      ComplexMatrix S2 = S * S;
      CHECK(close(S2 * S2, I));
      ComplexMatrix ST = S * T;
      CHECK(close(ST * ST * ST, S2));
      CHECK(close(S * S.adjoint(), I));
      CHECK(close(T * T.adjoint(), I));
      for (long a = 1; a < N; ++a) {
        if (std::gcd(a, N) != 1) continue;
        ComplexMatrix U = unitAction(N, a, kP);
        CHECK(close(U * S, S * U));
        CHECK(close(U * T, T * U));
      }
    }
    CHECK_THROWS_AS(unitAction(6, 2, kP), ConfigurationError);
  }

  TEST_CASE("trace map") {
    TraceMap id = traceMap(3, 3);
    CHECK(close(id.toMatrix(kP), ComplexMatrix::identity(9, kP)));
    CHECK_THROWS_AS(traceMap(2, 3), ConfigurationError);
    // <Tr(e_mu), phi>_M = <e_mu, phi restricted>_L on basis vectors
    for (auto [Nc, Nf] : std::vector<std::pair<long, long>>{{1, 2}, {1, 3}, {2, 4}, {2, 6}, {3, 6}}) {
      TraceMap tr = traceMap(Nc, Nf);
      FiniteQuadModule L(Nc);
      for (long mu = 0; mu < L.size(); ++mu)
        for (long nu = 0; nu < L.size(); ++nu) {
          Rational lhs = pairing(tr.columns[mu], inclusionOfSchwartz(Nc, Nf, nu));
          CHECK(lhs == (mu == nu ? 1 : 0));
        }
      // intertwining with S and T
      ComplexMatrix M = tr.toMatrix(kP);
      CHECK(close(weilS(Nf, kP) * M, M * weilS(Nc, kP)));
      CHECK(close(weilT(Nf, kP) * M, M * weilT(Nc, kP)));
    }
  }

  TEST_CASE("vector-valued lift at level one") {
    QSeries f = faberBasis(1, 1, 6);
    VVSeries g = vvLiftLevelOne(f);
    REQUIRE(g.components.size() == 1);
    CHECK(g.components.begin()->first == 0);
    CHECK(sc(g).agreesWith(f));
    PrincipalPart pp;
    pp.r = 1;
    pp.coeffs = {{2, Rational(3)}, {1, Rational(-1)}};
    QSeries h = formFromPrincipalPart(pp, 6);
    CHECK(principalPartOf(sc(vvLiftLevelOne(h)), 1).coeffs == pp.coeffs);
    CHECK_THROWS_AS(vvLiftLevelOne(f, 2), NotImplementedScope);
  }
}
