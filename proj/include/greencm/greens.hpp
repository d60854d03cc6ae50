#pragma once

#include <optional>
#include <vector>

#include "greencm/bigreal.hpp"
#include "greencm/qexp.hpp"
#include "greencm/quadfield.hpp"

namespace greencm {

struct EvalRequest {
  long N = 1;
  long m = 1;
  int r = 1;
  QuadForm z1, z2;  // CM points as roots of positive definite forms
  Precision precision{128};
  BigReal tol = BigReal(1e-8);
  long initialCutoff = 256;
  long maxCutoff = 1L << 20;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct GreenValue {
  BigReal value;         // partial sum + tail estimate
  BigReal partialSum;    // -2 sum_{t <= T} Q_r(t)
  BigReal tailEstimate;  // heuristic
  BigReal cutoff;
  long terms = 0;
  bool converged = false;
  // Exponent of the shell sums fitted against T (about -r); NaN if unavailable.
  double fittedExponent = 0;
  bool densityKnown = false;
};

// Matrix (a b; N c d) with ad - N bc = m.
struct LatticeTerm {
  long a, b, c, d;
  friend auto operator<=>(const LatticeTerm&, const LatticeTerm&) = default;
};

// t(gamma) - 1 = (I0 / sqrt(d1 d2) + I1) / K, all integers.
struct CoshArgExact {
  Integer I0, I1, K;
  long dd;  // d1 * d2 > 0
  // Exact comparison of t with a rational bound.
  int compare(const Rational& T) const;
  bool isOne() const;
  BigReal value(Precision p) const;
};

CoshArgExact coshArgExact(const LatticeTerm& g, long N, long m, const QuadForm& z1, const QuadForm& z2);
// t(gamma) = 1 + |N c z1 z2 + d z1 - a z2 - b|^2 / (2 m y1 y2). Throws
// SingularConfiguration when t = 1.
BigReal coshArg(long a, long b, long c, long d, long N, long m, const QuadForm& z1, const QuadForm& z2, Precision p);
// Same formula at arbitrary numeric points (no singularity check).
BigReal coshArgNumeric(const LatticeTerm& g, long N, long m, const BigComplex& z1, const BigComplex& z2);

// All terms with lo < t <= hi (lo may be 0), sorted.
std::vector<LatticeTerm> enumerateTerms(const EvalRequest& req, const Rational& lo, const Rational& hi);
// -2 sum Q_r(t) over the given terms, exactly accumulated and rounded once.
BigReal sumTerms(const EvalRequest& req, const std::vector<LatticeTerm>& terms);
BigReal sumTermsAt(const std::vector<LatticeTerm>& terms, int r, long N, long m, const BigComplex& z1,
                   const BigComplex& z2);

// Fixed cutoff, no tail.
GreenValue greenMAtCutoff(const EvalRequest& req, long T);
// Adaptive cutoff doubling with tail extrapolation.
GreenValue greenM(const EvalRequest& req);
// sum_m c(-m) m^r greenM(m).
GreenValue greenF(long N, const PrincipalPart& f, const QuadForm& z1, const QuadForm& z2, const BigReal& tol,
                  Precision p, long maxCutoff = 1L << 20, unsigned threads = 0);

bool heckeIncidence(long m, const QuadForm& z1, const QuadForm& z2, long N);

// log|j(z1) - j(z2)|
BigReal borcherdsR0(const QuadForm& z1, const QuadForm& z2, Precision p);

// 12 sigma_1(m) / psi(N) when gcd(m, N) = 1.
std::optional<Rational> termDensity(long N, long m);

}  // namespace greencm
