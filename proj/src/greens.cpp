#include "greencm/greens.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <thread>

#include "greencm/errors.hpp"
#include "greencm/numerics.hpp"
#include "greencm/polyops.hpp"

namespace greencm {

// ---------------------------------------------------------------- t(gamma)

int CoshArgExact::compare(const Rational& T) const {
  // t - T = (I0 + (I1 - (T-1)K) S) / (K S); compare I0 with R S, R = (T-1)K - I1.
  Rational R = (T - 1) * Rational(K) - Rational(I1);
  if (R < 0) return 1;  // I0 >= 0 > R S
  Rational lhs = Rational(I0 * I0), rhs = R * R * dd;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

bool CoshArgExact::isOne() const { return compare(Rational(1)) == 0; }

BigReal CoshArgExact::value(Precision p) const {
  Precision w(p.bits + 32);
  BigReal S = sqrt(BigReal(dd, w));
  BigReal t = BigReal(1L, w) + (BigReal(I0, w) / S + BigReal(I1, w)) / BigReal(K, w);
  return t.rounded(p);
}

CoshArgExact coshArgExact(const LatticeTerm& g, long N, long m, const QuadForm& z1, const QuadForm& z2) {
  const Integer C = Integer(N) * g.c;
  const Integer a(g.a), b(g.b), d(g.d);
  const Integer a1(z1.a), b1(z1.b), a2(z2.a), b2(z2.b);
  const long d1 = z1.disc(), d2 = z2.disc();
  Integer R0 = C * b1 * b2 - 2 * a2 * b1 * d + 2 * a1 * b2 * a - 4 * a1 * a2 * b;
  Integer A = -C * b2 + 2 * a2 * d;
  Integer B = -C * b1 - 2 * a1 * a;
  CoshArgExact out;
  out.dd = d1 * d2;
  out.I0 = R0 * R0 + C * C * out.dd + A * A * (-d1) + B * B * (-d2);
  out.I1 = 2 * A * B - 2 * R0 * C;
  out.K = 8 * Integer(m) * a1 * a2;
  return out;
}

BigReal coshArg(long a, long b, long c, long d, long N, long m, const QuadForm& z1, const QuadForm& z2, Precision p) {
  if (a * d - N * b * c != m) throw std::invalid_argument("coshArg: determinant is not m");
  CoshArgExact e = coshArgExact({a, b, c, d}, N, m, z1, z2);
  if (e.isOne()) throw SingularConfiguration("coshArg: t = 1 (point on the Hecke correspondence)");
  return e.value(p);
}

BigReal coshArgNumeric(const LatticeTerm& g, long N, long m, const BigComplex& z1, const BigComplex& z2) {
  Precision p(std::max(z1.re.precision(), z2.re.precision()));
  BigReal C(N * g.c, p);
  BigComplex X = C * (z1 * z2) + BigReal(g.d, p) * z1 - BigReal(g.a, p) * z2;
  X.re -= BigReal(g.b, p);
  return BigReal(1L, p) + X.norm() / (BigReal(2 * m, p) * z1.im * z2.im);
}

// ---------------------------------------------------------------- enumeration

namespace {

unsigned threadCount(unsigned requested) {
  if (requested) return requested;
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

// p*x + q*y = g >= 0
long extGcd(long x, long y, long& p, long& q) {
  long r0 = x, r1 = y, p0 = 1, p1 = 0, q0 = 0, q1 = 1;
  while (r1 != 0) {
    long k = r0 / r1;
    std::tie(r0, r1) = std::make_tuple(r1, r0 - k * r1);
    std::tie(p0, p1) = std::make_tuple(p1, p0 - k * p1);
    std::tie(q0, q1) = std::make_tuple(q1, q0 - k * q1);
  }
  if (r0 < 0) {
    r0 = -r0;
    p0 = -p0;
    q0 = -q0;
  }
  p = p0;
  q = q0;
  return r0;
}

std::complex<double> rootOf(const QuadForm& f) {
  return {-static_cast<double>(f.b) / (2.0 * f.a), std::sqrt(static_cast<double>(-f.disc())) / (2.0 * f.a)};
}

void enumerateRow(const EvalRequest& req, long c, const Rational& lo, const Rational& hi, double Tmax,
                  std::vector<LatticeTerm>& out) {
  const std::complex<double> z1 = rootOf(req.z1), z2 = rootOf(req.z2);
  const double y1 = z1.imag(), y2 = z2.imag();
  const double Bcd = 2.0 * Tmax * req.m * y2 / y1;
  const double R2 = 2.0 * req.m * y1 * y2 * (Tmax - 1.0);
  const long C = req.N * c;
  double rest = Bcd - static_cast<double>(C) * C * y2 * y2;
  if (rest < 0) rest = 0;
  double w = std::sqrt(rest);
  double center = -static_cast<double>(C) * z2.real();
  long dlo = static_cast<long>(std::floor(center - w)) - 1, dhi = static_cast<long>(std::ceil(center + w)) + 1;
  for (long d = dlo; d <= dhi; ++d) {
    if (C == 0 && d == 0) continue;
    long p, q;
    long g = extGcd(d, C, p, q);
    if (req.m % g) continue;
    const long mg = req.m / g;
    const long a0 = p * mg, b0 = -q * mg;
    const std::complex<double> X0 = static_cast<double>(C) * z1 * z2 + static_cast<double>(d) * z1 -
                                    static_cast<double>(a0) * z2 - static_cast<double>(b0);
    const std::complex<double> u = (static_cast<double>(C) * z2 + static_cast<double>(d)) / static_cast<double>(g);
    const double uu = std::norm(u);
    const std::complex<double> pr = X0 * std::conj(u);
    double disc = R2 * uu - pr.imag() * pr.imag();
    if (disc < -1e-6 * (1 + std::abs(R2 * uu))) continue;
    if (disc < 0) disc = 0;
    const double kc = pr.real() / uu, hw = std::sqrt(disc) / uu;
    const long klo = static_cast<long>(std::floor(kc - hw)) - 1, khi = static_cast<long>(std::ceil(kc + hw)) + 1;
    for (long k = klo; k <= khi; ++k) {
      LatticeTerm t{a0 + k * (C / g), b0 + k * (d / g), c, d};
      CoshArgExact e = coshArgExact(t, req.N, req.m, req.z1, req.z2);
      if (e.compare(hi) <= 0 && (lo <= 0 || e.compare(lo) > 0)) out.push_back(t);
    }
  }
}

template <typename Work>
void parallelFor(long n, unsigned threads, Work work) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(1L, n))));
  if (threads == 1) {
    work(0u, 1u);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        work(t, threads);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void validate(const EvalRequest& req) {
  if (req.N < 1 || req.m < 1) throw ConfigurationError("greens: N and m must be positive");
  if (req.r < 1) throw ConfigurationError("greens: r must be at least 1 (r = 0 goes through borcherdsR0)");
  if (req.z1.a <= 0 || req.z1.disc() >= 0 || req.z2.a <= 0 || req.z2.disc() >= 0)
    throw ConfigurationError("greens: CM points must come from positive definite forms");
}

}  // namespace

std::vector<LatticeTerm> enumerateTerms(const EvalRequest& req, const Rational& lo, const Rational& hi) {
  validate(req);
  const double Tmax = hi.get_d() * (1 + 1e-12) + 1e-9;
  const double y1 = rootOf(req.z1).imag(), y2 = rootOf(req.z2).imag();
  const long cmax = static_cast<long>(std::sqrt(2.0 * Tmax * req.m / (y1 * y2)) / req.N) + 2;
  const long rows = 2 * cmax + 1;
  const unsigned nt = threadCount(req.threads);
  std::vector<std::vector<LatticeTerm>> parts(nt);
  parallelFor(rows, nt, [&](unsigned tid, unsigned stride) {
    for (long i = tid; i < rows; i += stride) enumerateRow(req, i - cmax, lo, hi, Tmax, parts[tid]);
  });
  std::vector<LatticeTerm> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

ExactAccumulator accumulateQ(const EvalRequest& req, const std::vector<LatticeTerm>& terms) {
  const unsigned nt = threadCount(req.threads);
  std::vector<ExactAccumulator> parts(nt);
  parallelFor(static_cast<long>(terms.size()), nt, [&](unsigned tid, unsigned stride) {
    for (size_t i = tid; i < terms.size(); i += stride) {
      CoshArgExact e = coshArgExact(terms[i], req.N, req.m, req.z1, req.z2);
      if (e.isOne()) throw SingularConfiguration("greens: lattice term with t = 1");
      parts[tid].add(legendreQ(req.r, e.value(req.precision)));
    }
  });
  ExactAccumulator acc;
  for (const auto& p : parts) acc.add(p);
  return acc;
}

}  // namespace

BigReal sumTerms(const EvalRequest& req, const std::vector<LatticeTerm>& terms) {
  return BigReal(-2L, req.precision) * accumulateQ(req, terms).result(req.precision);
}

BigReal sumTermsAt(const std::vector<LatticeTerm>& terms, int r, long N, long m, const BigComplex& z1,
                   const BigComplex& z2) {
  Precision p(z1.re.precision());
  ExactAccumulator acc;
  for (const auto& g : terms) acc.add(legendreQ(r, coshArgNumeric(g, N, m, z1, z2)));
  return BigReal(-2L, p) * acc.result(p);
}

std::optional<Rational> termDensity(long N, long m) {
  if (std::gcd(N, m) != 1) return std::nullopt;
  Rational psi(N);
  long n = N;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    psi *= Rational(p + 1, p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) psi *= Rational(n + 1, n);
  Rational dens = Rational(12 * divisorSigma(1, m)) / psi;
  dens.canonicalize();
  return dens;
}

GreenValue greenMAtCutoff(const EvalRequest& req, long T) {
  validate(req);
  if (heckeIncidence(req.m, req.z1, req.z2, req.N))
    throw SingularConfiguration("greens: (z1, z2) lies on the Hecke correspondence T_m");
  auto terms = enumerateTerms(req, Rational(0), Rational(T));
  GreenValue g;
  g.partialSum = sumTerms(req, terms);
  g.tailEstimate = BigReal(0L, req.precision);
  g.value = g.partialSum;
  g.cutoff = BigReal(T, req.precision);
  g.terms = static_cast<long>(terms.size());
  g.converged = false;
  g.fittedExponent = std::nan("");
  return g;
}

GreenValue greenM(const EvalRequest& req) {
  validate(req);
  if (heckeIncidence(req.m, req.z1, req.z2, req.N))
    throw SingularConfiguration("greens: (z1, z2) lies on the Hecke correspondence T_m");
  const Precision p = req.precision;
  const BigReal tol = req.tol.isLiteral() ? req.tol.rounded(p) : req.tol;
  const auto density = termDensity(req.N, req.m);
  long T = std::max(4L, req.initialCutoff);
  ExactAccumulator acc;
  long count = 0;
  std::vector<BigReal> values, shells;
  GreenValue g;
  g.densityKnown = density.has_value();
  Rational lo(0);
  for (;;) {
    auto terms = enumerateTerms(req, lo, Rational(T));
    ExactAccumulator shell = accumulateQ(req, terms);
    count += static_cast<long>(terms.size());
    acc.add(shell);
    BigReal shellSum = BigReal(-2L, p) * shell.result(p);
    BigReal partial = BigReal(-2L, p) * acc.result(p);
    if (lo > 0) shells.push_back(shellSum);
    BigReal tail(0L, p);
    double expo = std::nan("");
    if (shells.size() >= 2 && !shells[shells.size() - 2].isZero() && !shellSum.isZero()) {
      double ratio = (shellSum / shells[shells.size() - 2]).toDouble();
      if (ratio > 0) expo = std::log2(ratio);
    }
    if (density) {
      tail = BigReal(-2L, p) * BigReal(*density, p) * legendreQTailIntegral(req.r, BigReal(T, p));
    } else if (shells.size() >= 2) {
      BigReal ratio = shellSum / shells[shells.size() - 2];
      if (ratio > BigReal(0) && ratio < BigReal(1)) tail = shellSum * ratio / (BigReal(1L, p) - ratio);
    }
    values.push_back(partial + tail);
    g.value = values.back();
    g.partialSum = partial;
    g.tailEstimate = tail;
    g.cutoff = BigReal(T, p);
    g.terms = count;
    g.fittedExponent = expo;
    const size_t n = values.size();
    bool stable = n >= 3;
    if (stable && abs(values[n - 1] - values[n - 2]) < tol / BigReal(4L, p) &&
        abs(values[n - 2] - values[n - 3]) < tol / BigReal(4L, p)) {
      g.converged = true;
      return g;
    }
    if (2 * T > req.maxCutoff) {
      g.converged = false;
      return g;
    }
    lo = Rational(T);
    T *= 2;
  }
}

GreenValue greenF(long N, const PrincipalPart& f, const QuadForm& z1, const QuadForm& z2, const BigReal& tol,
                  Precision p, long maxCutoff, unsigned threads) {
  if (f.r < 1) throw ConfigurationError("greenF: r must be at least 1");
  long active = 0;
  for (const auto& [m, c] : f.coeffs)
    if (c != 0) ++active;
  GreenValue out;
  out.value = out.partialSum = out.tailEstimate = out.cutoff = BigReal(0L, p);
  out.converged = true;
  out.densityKnown = true;
  out.fittedExponent = std::nan("");
  for (const auto& [m, c] : f.coeffs) {
    if (c == 0) continue;
    Integer mr;
    mpz_ui_pow_ui(mr.get_mpz_t(), m, f.r);
    Rational w = c * Rational(mr);
    EvalRequest req;
    req.N = N;
    req.m = m;
    req.r = f.r;
    req.z1 = z1;
    req.z2 = z2;
    req.precision = p;
    req.tol = (tol.isLiteral() ? tol.rounded(p) : tol) / (BigReal(active, p) * abs(BigReal(w, p)));
    req.maxCutoff = maxCutoff;
    req.threads = threads;
    GreenValue g = greenM(req);
    BigReal W(w, p);
    out.value += W * g.value;
    out.partialSum += W * g.partialSum;
    out.tailEstimate += W * g.tailEstimate;
    out.cutoff = max(out.cutoff, g.cutoff);
    out.terms += g.terms;
    out.converged = out.converged && g.converged;
    out.densityKnown = out.densityKnown && g.densityKnown;
    if (active == 1) out.fittedExponent = g.fittedExponent;
  }
  return out;
}

bool heckeIncidence(long m, const QuadForm& z1, const QuadForm& z2, long N) {
  const long dd = z1.disc() * z2.disc();
  long s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(dd))));
  bool square = false;
  for (long t = std::max(0L, s - 1); t <= s + 1; ++t)
    if (t * t == dd) square = true;
  if (!square) return false;
  EvalRequest req;
  req.N = N;
  req.m = m;
  req.r = 1;
  req.z1 = z1;
  req.z2 = z2;
  req.threads = 1;
  for (const auto& g : enumerateTerms(req, Rational(0), Rational(1)))
    if (coshArgExact(g, N, m, z1, z2).isOne()) return true;
  return false;
}

BigReal borcherdsR0(const QuadForm& z1, const QuadForm& z2, Precision p) {
  if (reduceForm(z1) == reduceForm(z2)) throw SingularConfiguration("borcherdsR0: coincident CM points");
  Precision w(p.bits + 32);
  BigComplex j1 = evalJ(z1, w), j2 = evalJ(z2, w);
  return log(abs(j1 - j2)).rounded(p);
}

}  // namespace greencm
