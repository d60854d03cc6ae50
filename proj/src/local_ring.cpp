#include "greencm/local_ring.hpp"

#include <map>
#include <stdexcept>

namespace greencm {

namespace {

long vpInt(Integer n, long p, long cap) {
  if (n == 0) return cap;
  long v = 0;
  while (v < cap && mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
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

long modl(const Integer& a, long p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
  return r.get_si();
}

}  // namespace

LocalRing::LocalRing(const PrimeIdeal& P, const FieldData& F, unsigned long K) : P_(P), K_(K), pK_(ipow(P.p, K)) {
  tr_ = F.trOmega();
  nm_ = F.nmOmega();
  switch (P.type) {
    case SplitType::Split:
      root_ = splitRoot(F, P.p, P.branch, K);
      break;
    case SplitType::Inert:
      break;
    case SplitType::Ramified: {
      for (long r = 0; r < P.p; ++r) {
        Integer f = Integer(r) * r - Integer(tr_) * r + nm_;
        Integer fp(2 * r - tr_);
        if (modl(f, P.p) == 0 && modl(fp, P.p) == 0) {
          root_ = r;
          break;
        }
      }
      Integer f = root_ * root_ - Integer(tr_) * root_ + nm_;
      s_ = Integer(tr_) - 2 * root_;
      n_ = -f;
      break;
    }
  }
}

Integer LocalRing::reduce(const Integer& x) const {
  Integer r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), pK_.get_mpz_t());
  return r;
}

LocalRing::Elem LocalRing::fromInteger(const Integer& n) const { return {reduce(n), 0}; }

LocalRing::Elem LocalRing::fromGlobal(const FieldElement& a) const {
  OmegaCoords c = omegaCoords(a);
  if (modl(c.den, P_.p) == 0) throw std::invalid_argument("LocalRing::fromGlobal: denominator divisible by p");
  Integer inv;
  Integer den = reduce(c.den);
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pK_.get_mpz_t());
  switch (P_.type) {
    case SplitType::Split:
      return {reduce((c.U + c.V * root_) * inv), 0};
    case SplitType::Inert:
      return {reduce(c.U * inv), reduce(c.V * inv)};
    case SplitType::Ramified:
      return {reduce((c.U + c.V * root_) * inv), reduce(c.V * inv)};
  }
  return {};
}

LocalRing::Elem LocalRing::add(const Elem& x, const Elem& y) const { return {reduce(x.a0 + y.a0), reduce(x.a1 + y.a1)}; }

LocalRing::Elem LocalRing::sub(const Elem& x, const Elem& y) const { return {reduce(x.a0 - y.a0), reduce(x.a1 - y.a1)}; }

LocalRing::Elem LocalRing::mul(const Elem& x, const Elem& y) const {
  switch (P_.type) {
    case SplitType::Split:
      return {reduce(x.a0 * y.a0), 0};
    case SplitType::Inert:
      return {reduce(x.a0 * y.a0 - x.a1 * y.a1 * nm_), reduce(x.a0 * y.a1 + x.a1 * y.a0 + x.a1 * y.a1 * tr_)};
    case SplitType::Ramified:
      return {reduce(x.a0 * y.a0 + x.a1 * y.a1 * n_), reduce(x.a0 * y.a1 + x.a1 * y.a0 + x.a1 * y.a1 * s_)};
  }
  return {};
}

long LocalRing::maxOrd() const { return P_.type == SplitType::Ramified ? 2 * static_cast<long>(K_) : static_cast<long>(K_); }

long LocalRing::ord(const Elem& x) const {
  const long cap = static_cast<long>(K_);
  switch (P_.type) {
    case SplitType::Split:
      return vpInt(x.a0, P_.p, cap);
    case SplitType::Inert:
      return std::min(vpInt(x.a0, P_.p, cap), vpInt(x.a1, P_.p, cap));
    case SplitType::Ramified:
      return std::min(2 * vpInt(x.a0, P_.p, cap), 2 * vpInt(x.a1, P_.p, cap) + 1);
  }
  return 0;
}

LocalRing::Elem LocalRing::divUniformizer(const Elem& x) const {
  if (ord(x) < 1) throw std::domain_error("divUniformizer: element is a unit");
  const unsigned long p = static_cast<unsigned long>(P_.p);
  if (P_.type != SplitType::Ramified) {
    Elem r;
    mpz_divexact_ui(r.a0.get_mpz_t(), x.a0.get_mpz_t(), p);
    mpz_divexact_ui(r.a1.get_mpz_t(), x.a1.get_mpz_t(), p);
    return r;
  }
  // (a0 + a1 t)/t = a1 + a0 (t - s)/n, with a0 = p a0', n = p u.
  Integer a0p, u, uinv;
  mpz_divexact_ui(a0p.get_mpz_t(), x.a0.get_mpz_t(), p);
  mpz_divexact_ui(u.get_mpz_t(), n_.get_mpz_t(), p);
  Integer um = reduce(u);
  mpz_invert(uinv.get_mpz_t(), um.get_mpz_t(), pK_.get_mpz_t());
  return {reduce(x.a1 - a0p * s_ * uinv), reduce(a0p * uinv)};
}

std::vector<LocalRing::Elem> LocalRing::representatives(long k) const {
  std::vector<Elem> out;
  const long p = P_.p;
  auto range = [&](long e) { return ipow(p, static_cast<unsigned long>(e)).get_si(); };
  switch (P_.type) {
    case SplitType::Split:
      for (long a = 0; a < range(k); ++a) out.push_back({a, 0});
      break;
    case SplitType::Inert:
      for (long a = 0; a < range(k); ++a)
        for (long b = 0; b < range(k); ++b) out.push_back({a, b});
      break;
    case SplitType::Ramified:
      for (long a = 0; a < range((k + 1) / 2); ++a)
        for (long b = 0; b < range(k / 2); ++b) out.push_back({a, b});
      break;
  }
  return out;
}

std::pair<long, long> LocalRing::residue(const Elem& x) const {
  if (P_.type == SplitType::Inert) return {modl(x.a0, P_.p), modl(x.a1, P_.p)};
  return {modl(x.a0, P_.p), 0};
}

long LocalRing::residueTr() const { return ((tr_ % P_.p) + P_.p) % P_.p; }
long LocalRing::residueNm() const { return modl(nm_, P_.p); }

NormForm normFormAt(const PrimeIdeal& P, const FieldData& F) {
  long dc = F.coprimeDisc(P.p);
  if (P.p == 2) {
    if (((dc % 4) + 4) % 4 != 1) throw std::logic_error("normFormAt: odd discriminant expected at 2");
    return {1, Integer((1 - dc) / 4)};
  }
  return {0, Integer(-dc)};
}

Integer bruteForceNormCount(const LocalRing& R, const NormForm& N, const LocalRing::Elem& t, long k) {
  if (static_cast<long>(R.precision()) < k + 1) throw std::invalid_argument("bruteForceNormCount: ring precision too small");
  const auto reps = R.representatives(k);
  const auto b = R.fromInteger(N.b), c = R.fromInteger(N.c);
  Integer count = 0;
  for (const auto& u : reps) {
    const auto uu = R.mul(u, u);
    for (const auto& v : reps) {
      auto val = R.add(R.add(uu, R.mul(b, R.mul(u, v))), R.mul(c, R.mul(v, v)));
      if (R.ord(R.sub(val, t)) >= k) ++count;
    }
  }
  return count;
}

namespace {

// Residue field F_q with q = p (a1 = 0) or p^2 (theta^2 = tr theta - nm).
struct ResidueField {
  long p;
  bool ext;
  long tr, nm;
  using E = std::pair<long, long>;
  E add(E x, E y) const { return {(x.first + y.first) % p, (x.second + y.second) % p}; }
  E mul(E x, E y) const {
    if (!ext) return {(x.first * y.first) % p, 0};
    long c0 = (x.first * y.first + (p - nm) % p * ((x.second * y.second) % p)) % p;
    long c1 = (x.first * y.second + x.second * y.first + tr * ((x.second * y.second) % p)) % p;
    return {c0, c1};
  }
  bool zero(E x) const { return x.first == 0 && x.second == 0; }
};

Integer residueSolutions(const ResidueField& K, const ResidueField::E& b, const ResidueField::E& c,
                         const ResidueField::E& t0) {
  const long p = K.p;
  const long m1 = K.ext ? p : 1;
  Integer count = 0;
  for (long u0 = 0; u0 < p; ++u0)
    for (long u1 = 0; u1 < m1; ++u1)
      for (long v0 = 0; v0 < p; ++v0)
        for (long v1 = 0; v1 < m1; ++v1) {
          ResidueField::E u{u0, u1}, v{v0, v1};
          if (K.zero(u) && K.zero(v)) continue;
          auto val = K.add(K.add(K.mul(u, u), K.mul(b, K.mul(u, v))), K.mul(c, K.mul(v, v)));
          if (val != t0) continue;
          // Smooth point: the gradient (2u + bv, bu + 2cv) must not vanish.
          auto gu = K.add(K.add(u, u), K.mul(b, v));
          auto gv = K.add(K.mul(b, u), K.mul({2 % p, 0}, K.mul(c, v)));
          if (K.zero(gu) && K.zero(gv)) throw std::logic_error("henselNormCount: singular nonzero residue solution");
          ++count;
        }
  return count;
}

Integer henselRec(const LocalRing& R, const ResidueField& K, const ResidueField::E& b, const ResidueField::E& c,
                  const LocalRing::Elem& t, long k, std::map<ResidueField::E, Integer>& cache) {
  if (k == 0) return 1;
  const Integer q = R.q();
  auto t0 = R.residue(t);
  auto it = cache.find(t0);
  if (it == cache.end()) it = cache.emplace(t0, residueSolutions(K, b, c, t0)).first;
  Integer qk1;
  mpz_pow_ui(qk1.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k - 1));
  Integer total = qk1 * it->second;
  const long o = R.ord(t);
  if (k <= 2) {
    if (o >= k) total += qk1 * qk1;
  } else if (o >= 2) {
    auto t2 = R.divUniformizer(R.divUniformizer(t));
    total += q * q * henselRec(R, K, b, c, t2, k - 2, cache);
  }
  return total;
}

}  // namespace

Integer henselNormCount(const LocalRing& R, const NormForm& N, const LocalRing::Elem& t, long k) {
  if (static_cast<long>(R.precision()) < k + 2) throw std::invalid_argument("henselNormCount: ring precision too small");
  const bool ext = R.prime().type == SplitType::Inert;
  ResidueField K{R.p(), ext, R.residueTr(), R.residueNm()};
  auto b = R.residue(R.fromInteger(N.b));
  auto c = R.residue(R.fromInteger(N.c));
  std::map<ResidueField::E, Integer> cache;
  return henselRec(R, K, b, c, t, k, cache);
}

bool locallyRepresented(const PrimeIdeal& P, const FieldElement& tt, const FieldData& F) {
  OmegaCoords c = omegaCoords(tt);
  long vden = vpInt(c.den, P.p, 1000);
  long j = (vden + 1) / 2;
  FieldElement t2 = tt * FieldElement(F.D, Rational(ipow(P.p, static_cast<unsigned long>(2 * j))));
  long o = ord(t2, P, F);
  LocalRing R(P, F, static_cast<unsigned long>(o + 8));
  NormForm N = normFormAt(P, F);
  auto t = R.fromGlobal(t2);
  Integer a = henselNormCount(R, N, t, o + 1);
  Integer b = henselNormCount(R, N, t, o + 2);
  // Densities N_k/q^k at k = o+1, o+2 must agree.
  if (a * R.q() != b) throw std::logic_error("locallyRepresented: count did not stabilize");
  return b > 0;
}

}  // namespace greencm
