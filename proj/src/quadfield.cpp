#include "greencm/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "greencm/errors.hpp"
#include "greencm/local_ring.hpp"

namespace greencm {

namespace {

void requireSameField(const FieldElement& a, const FieldElement& b) {
  if (a.D() != b.D()) throw std::invalid_argument("FieldElement: mixing elements of different fields");
}

long vp(Integer n, long p) {
  if (n == 0) throw std::domain_error("vp(0)");
  n = abs(n);
  long v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

Integer ipow(long p, unsigned long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), k);
  return r;
}

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::string fractionString(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool isSquarefree(long n) {
  n = std::labs(n);
  for (long q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
  }
  return true;
}

}  // namespace

FieldElement::FieldElement(Integer D, Rational x, Rational y) : D_(std::move(D)), x_(std::move(x)), y_(std::move(y)) {
  x_.canonicalize();
  y_.canonicalize();
}

bool FieldElement::isIntegral() const {
  Rational X = 2 * x_, Y = 2 * y_;
  if (X.get_den() != 1 || Y.get_den() != 1) return false;
  Integer d = X.get_num() - Y.get_num() * D_;
  return mpz_even_p(d.get_mpz_t()) != 0;
}

bool FieldElement::isTotallyPositive() const {
  if (D_ <= 0) throw std::domain_error("isTotallyPositive: imaginary field");
  return x_ > 0 && norm() > 0;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  requireSameField(a, b);
  return {a.D_, a.x_ + b.x_, a.y_ + b.y_};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  requireSameField(a, b);
  return {a.D_, a.x_ - b.x_, a.y_ - b.y_};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  requireSameField(a, b);
  return {a.D_, a.x_ * b.x_ + Rational(a.D_) * a.y_ * b.y_, a.x_ * b.y_ + a.y_ * b.x_};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  requireSameField(a, b);
  Rational n = b.norm();
  if (n == 0) throw std::domain_error("FieldElement: division by zero");
  FieldElement num = a * b.conj();
  return {a.D_, num.x_ / n, num.y_ / n};
}

FieldElement FieldElement::pow(long n) const {
  FieldElement base = n >= 0 ? *this : FieldElement(D_, 1) / *this;
  FieldElement r(D_, 1);
  for (long e = std::labs(n); e > 0; e >>= 1) {
    if (e & 1) r = r * base;
    base = base * base;
  }
  return r;
}

BigReal FieldElement::embed(Precision p, int sign) const {
  if (D_ <= 0) throw std::domain_error("embed: imaginary field has no real embedding");
  BigReal s = sqrt(BigReal(D_, Precision(p.bits + 16)));
  BigReal v = BigReal(x_, Precision(p.bits + 16)) + BigReal(sign) * BigReal(y_, Precision(p.bits + 16)) * s;
  return v.rounded(p);
}

std::string FieldElement::toString() const {
  std::string s = fractionString(x_);
  if (y_ == 0) return s;
  std::string root = "√" + D_.get_str();
  if (x_ == 0) return fractionString(y_) + root;
  if (y_ > 0) return s + " + " + fractionString(y_) + root;
  return s + " - " + fractionString(Rational(-y_)) + root;
}

int kronecker(long a, long n) {
  if (n == 0) throw std::invalid_argument("kronecker: n = 0");
  Integer A(a), N(n);
  return mpz_kronecker(A.get_mpz_t(), N.get_mpz_t());
}

bool isFundamentalDiscriminant(long d) {
  if (d == 0 || d == 1) return false;
  long r = ((d % 4) + 4) % 4;
  if (r == 1) return isSquarefree(d);
  if (r != 0) return false;
  long m = d / 4;
  long rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && isSquarefree(m);
}

int unitCount(long d) {
  if (d == -3) return 6;
  if (d == -4) return 4;
  return 2;
}

FieldElement fundamentalUnit(const Integer& D) {
  if (D <= 1 || mpz_perfect_square_p(D.get_mpz_t())) throw std::invalid_argument("fundamentalUnit: D must be a positive nonsquare");
  const bool oneMod4 = mod(D, 4) == 1;
  if (!oneMod4 && mod(D, 4) != 0) throw std::invalid_argument("fundamentalUnit: D is not a discriminant");
  // Continued fraction of omega = (P0 + sqrt(Dp))/Q0.
  Integer Dp = oneMod4 ? D : Integer(D / 4);
  Integer P = oneMod4 ? 1 : 0;
  Integer Q = oneMod4 ? 2 : 1;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), Dp.get_mpz_t());
  const long tr = oneMod4 ? 1 : 0;
  const Integer nm = oneMod4 ? Integer((1 - D) / 4) : Integer(-D / 4);
  Integer pPrev = 1, pPrev2 = 0, qPrev = 0, qPrev2 = 1;
  for (long k = 0; k < 10000000; ++k) {
    Integer num = P + s;
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    if (Q < 0) {
      num += 1;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    }
    Integer pk = a * pPrev + pPrev2, qk = a * qPrev + qPrev2;
    pPrev2 = pPrev;
    pPrev = pk;
    qPrev2 = qPrev;
    qPrev = qk;
    // eta = (p - q tr) + q omega
    Integer u = pk - qk * tr, v = qk;
    Integer n = u * u + tr * u * v + nm * v * v;
    if (n == 1 || n == -1) {
      FieldElement omega = oneMod4 ? FieldElement(D, Rational(1, 2), Rational(1, 2)) : FieldElement(D, 0, Rational(1, 2));
      FieldElement eta = FieldElement(D, Rational(u)) + Rational(v) * omega;
      if (eta.embed(Precision(64)) < BigReal(0)) eta = -eta;
      if (eta.embed(Precision(64)) < BigReal(1)) eta = FieldElement(D, 1) / eta;
      if (n == -1) eta = eta * eta;
      return eta;
    }
    P = a * Q - P;
    Q = (Dp - P * P) / Q;
  }
  throw std::runtime_error("fundamentalUnit: continued fraction did not terminate");
}

std::string toString(SplitType s) {
  switch (s) {
    case SplitType::Split:
      return "split";
    case SplitType::Inert:
      return "inert";
    case SplitType::Ramified:
      return "ramified";
  }
  return "?";
}

std::string PrimeIdeal::label() const {
  std::string s = std::to_string(p);
  if (type == SplitType::Split && branch == 1) s += "'";
  return s;
}

Integer PrimeIdeal::absNorm() const { return type == SplitType::Inert ? Integer(p) * p : Integer(p); }

PrimeIdeal PrimeIdeal::conjugate() const {
  PrimeIdeal c = *this;
  if (type == SplitType::Split) c.branch = 1 - branch;
  return c;
}

FieldData::FieldData(long d1_, long d2_, Precision p) : d1(d1_), d2(d2_) {
  if (d1 >= 0 || d2 >= 0) throw ConfigurationError("discriminants must be negative");
  if (!isFundamentalDiscriminant(d1) || !isFundamentalDiscriminant(d2))
    throw ConfigurationError("discriminants must be fundamental");
  if (d1 == d2) throw ConfigurationError("d1 and d2 must differ");
  if (std::gcd(d1, d2) != 1) throw ConfigurationError("d1 and d2 must be coprime");
  Integer prod = Integer(d1) * d2;
  if (mpz_perfect_square_p(prod.get_mpz_t())) throw ConfigurationError("d1*d2 must not be a square");
  // Coprime fundamental discriminants multiply to a fundamental discriminant.
  D = prod;
  epsilon = fundamentalUnit(D);
  sqrtD = sqrt(BigReal(D, p));
}

long FieldData::trOmega() const { return mod(D, 4) == 1 ? 1 : 0; }

Integer FieldData::nmOmega() const { return mod(D, 4) == 1 ? Integer((1 - D) / 4) : Integer(-D / 4); }

PlaceData FieldData::place(long p) const {
  PlaceData pd;
  pd.p = p;
  int k = mpz_kronecker_si(D.get_mpz_t(), p);
  pd.splittingInF = k == 1 ? SplitType::Split : (k == -1 ? SplitType::Inert : SplitType::Ramified);
  if (pd.splittingInF == SplitType::Split) {
    pd.primesAbove = {{p, SplitType::Split, 0}, {p, SplitType::Split, 1}};
  } else {
    pd.primesAbove = {{p, pd.splittingInF, 0}};
  }
  for (const auto& P : pd.primesAbove) {
    int c = chiE(P);
    pd.splittingInE.push_back(c == 1 ? SplitType::Split : (c == -1 ? SplitType::Inert : SplitType::Ramified));
  }
  return pd;
}

PrimeIdeal FieldData::primeIdeal(long p, int branch) const {
  PlaceData pd = place(p);
  if (branch < 0 || branch >= static_cast<int>(pd.primesAbove.size())) throw std::invalid_argument("primeIdeal: no such branch");
  return pd.primesAbove[branch];
}

long FieldData::coprimeDisc(long p) const {
  if (d1 % p != 0) return d1;
  if (d2 % p != 0) return d2;
  throw std::logic_error("coprimeDisc: both discriminants divisible by p");
}

int FieldData::chiE(const PrimeIdeal& P) const {
  if (d1 % P.p == 0 && d2 % P.p == 0) return 0;
  int k = kronecker(coprimeDisc(P.p), P.p);
  return P.type == SplitType::Inert ? k * k : k;
}

OmegaCoords omegaCoords(const FieldElement& a) {
  Rational U, V;
  if (mod(a.D(), 4) == 1) {
    U = a.x() - a.y();
    V = 2 * a.y();
  } else {
    U = a.x();
    V = 2 * a.y();
  }
  Integer den;
  mpz_lcm(den.get_mpz_t(), U.get_den_mpz_t(), V.get_den_mpz_t());
  return {Integer(U.get_num() * (den / U.get_den())), Integer(V.get_num() * (den / V.get_den())), den};
}

Integer splitRoot(const FieldData& F, long p, int branch, unsigned long K) {
  const long tr = F.trOmega();
  const Integer nm = F.nmOmega();
  if (p > (1L << 24)) throw UnsupportedInstance("splitRoot: prime too large for root search");
  std::vector<long> roots;
  for (long r = 0; r < p; ++r) {
    Integer f = Integer(r) * r - Integer(tr) * r + nm;
    if (mpz_divisible_ui_p(f.get_mpz_t(), static_cast<unsigned long>(p))) roots.push_back(r);
  }
  if (roots.size() != 2) throw std::logic_error("splitRoot: prime is not split");
  Integer x = roots[static_cast<size_t>(branch)];
  Integer target = ipow(p, K);
  Integer m = p;
  while (m < target) {
    m = std::min<Integer>(m * m, target);
    Integer fx = x * x - Integer(tr) * x + nm;
    Integer fp = 2 * x - tr, inv;
    fp = mod(fp, m);
    if (mpz_invert(inv.get_mpz_t(), fp.get_mpz_t(), m.get_mpz_t()) == 0) throw std::logic_error("splitRoot: singular lift");
    x = mod(x - fx * inv, m);
  }
  return mod(x, target);
}

namespace {

long vpOrInf(const Integer& n, long p) { return n == 0 ? std::numeric_limits<long>::max() / 4 : vp(n, p); }

Integer ramifiedRoot(const FieldData& F, long p) {
  const long tr = F.trOmega();
  const Integer nm = F.nmOmega();
  for (long r = 0; r < p; ++r) {
    Integer f = Integer(r) * r - Integer(tr) * r + nm;
    Integer fp = Integer(2 * r - tr);
    if (mpz_divisible_ui_p(f.get_mpz_t(), static_cast<unsigned long>(p)) &&
        mpz_divisible_ui_p(fp.get_mpz_t(), static_cast<unsigned long>(p)))
      return r;
  }
  throw std::logic_error("ramifiedRoot: prime is not ramified");
}

}  // namespace

long ord(const FieldElement& a, const PrimeIdeal& P, const FieldData& F) {
  if (a.isZero()) throw std::domain_error("ord of zero");
  OmegaCoords c = omegaCoords(a);
  const long p = P.p;
  const long vden = vp(c.den, p);
  switch (P.type) {
    case SplitType::Inert:
      return std::min(vpOrInf(c.U, p), vpOrInf(c.V, p)) - vden;
    case SplitType::Ramified: {
      Integer r = ramifiedRoot(F, p);
      return std::min(2 * vpOrInf(c.U + c.V * r, p), 2 * vpOrInf(c.V, p) + 1) - 2 * vden;
    }
    case SplitType::Split: {
      Integer n = c.U * c.U + Integer(F.trOmega()) * c.U * c.V + F.nmOmega() * c.V * c.V;
      unsigned long K = static_cast<unsigned long>(vp(n, p)) + 1;
      Integer rho = splitRoot(F, p, P.branch, K);
      Integer val = mod(c.U + c.V * rho, ipow(p, K));
      return vp(val, p) - vden;
    }
  }
  return 0;
}

std::vector<std::pair<long, long>> factorInteger(const Integer& n0) {
  if (n0 == 0) throw std::domain_error("factorInteger(0)");
  Integer n = abs(n0);
  std::vector<std::pair<long, long>> out;
  for (long q = 2; Integer(q) * q <= n; ++q) {
    if (q > 100000000) throw UnsupportedInstance("factorInteger: cofactor too large for trial division");
    long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(q));
      ++e;
    }
    if (e > 0) out.emplace_back(q, e);
  }
  if (n > 1) {
    if (!n.fits_slong_p()) throw UnsupportedInstance("factorInteger: prime factor too large");
    out.emplace_back(n.get_si(), 1);
  }
  return out;
}

std::vector<PrimeIdeal> supportPrimes(const FieldElement& a, const FieldData& F) {
  Rational n = abs(a.norm());
  std::vector<long> ps;
  for (const auto& [p, e] : factorInteger(n.get_num())) ps.push_back(p);
  for (const auto& [p, e] : factorInteger(n.get_den())) ps.push_back(p);
  // Denominators of the coordinates can hide primes with cancelling valuations.
  OmegaCoords c = omegaCoords(a);
  for (const auto& [p, e] : factorInteger(c.den)) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<PrimeIdeal> out;
  for (long p : ps) {
    for (const PrimeIdeal& P : F.place(p).primesAbove) {
      if (ord(a, P, F) != 0) out.push_back(P);
    }
  }
  return out;
}

std::vector<FieldElement> traceEnumerate(long m, const FieldData& F) {
  if (m < 1) throw std::invalid_argument("traceEnumerate: m must be positive");
  // lambda = beta/sqrt(D) with beta = (x + m sqrt D)/2 in O.
  const Integer bound2 = Integer(m) * m * F.D;
  Integer xmax;
  mpz_sqrt(xmax.get_mpz_t(), bound2.get_mpz_t());
  const bool parityOdd = mpz_odd_p(Integer(Integer(m) * F.D).get_mpz_t()) != 0;
  std::vector<FieldElement> out;
  for (Integer x = -xmax; x <= xmax; ++x) {
    if ((mpz_odd_p(x.get_mpz_t()) != 0) != parityOdd) continue;
    if (x * x >= bound2) continue;
    out.emplace_back(F.D, Rational(m, 2), Rational(x, 2 * F.D));
  }
  return out;
}

FieldElement defaultAlpha(const FieldData& F) { return FieldElement(F.D, 0, Rational(-1) / Rational(F.D)); }

std::vector<PrimeIdeal> diffSet(const FieldElement& t, const FieldElement& alpha, const FieldData& F) {
  if (!t.isTotallyPositive()) throw std::invalid_argument("diffSet: t must be totally positive");
  const Precision p(128);
  if (!(alpha.embed(p, 1) < BigReal(0) && alpha.embed(p, -1) > BigReal(0)))
    throw std::invalid_argument("diffSet: alpha must satisfy alpha_1 < 0 < alpha_2");
  FieldElement tt = t / alpha;
  std::vector<PrimeIdeal> diff;
  for (const PrimeIdeal& P : supportPrimes(tt, F)) {
    int chi = F.chiE(P);
    if (chi == 0) throw UnsupportedLocalDatum("diffSet: E/F ramified at " + P.label());
    if (P.p == 2) {
      if (!locallyRepresented(P, tt, F)) diff.push_back(P);
      continue;
    }
    if (chi == -1 && (ord(tt, P, F) % 2 != 0)) diff.push_back(P);
  }
  if (diff.size() % 2 == 0) throw std::logic_error("diffSet: even cardinality for t = " + t.toString());
  return diff;
}

FieldElement primeGenerator(const PrimeIdeal& P, const FieldData& F) {
  if (P.type == SplitType::Inert) return FieldElement(F.D, P.p);
  const double eps = F.epsilon.embed(Precision(64)).toDouble();
  const double sqrtD = std::sqrt(F.D.get_d());
  const long ymax = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(P.p)) * (eps + 1.0) / sqrtD)) + 2;
  for (long y = 1; y <= ymax; ++y) {
    for (int sgn : {1, -1}) {
      Integer x2 = F.D * y * y + Integer(4) * P.p * sgn;
      if (x2 < 0 || !mpz_perfect_square_p(x2.get_mpz_t())) continue;
      Integer x;
      mpz_sqrt(x.get_mpz_t(), x2.get_mpz_t());
      FieldElement pi(F.D, Rational(x, 2), Rational(y, 2));
      if (P.type == SplitType::Split && ord(pi, P, F) != 1) pi = pi.conj();
      if (ord(pi, P, F) != 1) throw std::logic_error("primeGenerator: valuation check failed");
      return pi;
    }
  }
  throw UnsupportedInstance("prime " + P.label() + " of Q(sqrt " + F.D.get_str() + ") is not principal");
}

GeneratorResult generatorWithValuations(const std::map<PrimeIdeal, long>& valuations, const FieldData& F) {
  FieldElement raw(F.D, 1);
  for (const auto& [P, v] : valuations) {
    if (v != 0) raw = raw * primeGenerator(P, F).pow(v);
  }
  for (const auto& [P, v] : valuations) {
    if (ord(raw, P, F) != v) throw std::logic_error("generatorWithValuations: valuation mismatch at " + P.label());
  }
  const Precision p(256);
  const BigReal logEps2 = 2 * log(F.epsilon.embed(p));
  auto logRatio = [&](const FieldElement& g) { return log(abs(g.embed(p, 1) / g.embed(p, -1))); };
  long k = -floor(logRatio(raw) / logEps2).toLong();
  FieldElement gamma = raw * F.epsilon.pow(k);
  for (int guard = 0; guard < 4; ++guard) {
    BigReal lr = logRatio(gamma);
    if (lr < BigReal(0)) {
      gamma = gamma * F.epsilon;
      ++k;
    } else if (!(lr < logEps2)) {
      gamma = gamma * F.epsilon.pow(-1);
      --k;
    } else {
      break;
    }
  }
  if (gamma.embed(p, 1) < BigReal(0)) gamma = -gamma;
  return {gamma, raw, k};
}

FieldElement CMPoint::exact() const {
  return FieldElement(form.disc(), Rational(-form.b, 2 * form.a), Rational(1, 2 * form.a));
}

BigComplex CMPoint::z(Precision p) const {
  BigReal twoA(2 * form.a, p);
  return {BigReal(-form.b, p) / twoA, sqrt(BigReal(-form.disc(), p)) / twoA};
}

CMPointSet classGroup(long d) {
  if (d >= 0 || !isFundamentalDiscriminant(d)) throw ConfigurationError("classGroup: d must be a negative fundamental discriminant");
  CMPointSet out;
  out.d = d;
  out.unitCount = unitCount(d);
  for (long a = 1; 3 * a * a <= -d; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      if (((b - d) % 2) != 0) continue;
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      out.reducedForms.push_back({a, b, c});
    }
  }
  std::sort(out.reducedForms.begin(), out.reducedForms.end(), [](const QuadForm& x, const QuadForm& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (const auto& f : out.reducedForms) out.points.push_back({f});
  out.classNumber = static_cast<long>(out.reducedForms.size());
  return out;
}

}  // namespace greencm
