#pragma once

#include <vector>

#include "greencm/quadfield.hpp"

namespace greencm {

// Completion of the maximal order of F at a prime P, truncated mod p^K.
// Elements are a0 + a1*theta with theta = omega (inert) or the Eisenstein
// uniformizer omega - r (ramified); split completions are Z_p (a1 unused).
class LocalRing {
 public:
  struct Elem {
    Integer a0 = 0, a1 = 0;
  };

  LocalRing(const PrimeIdeal& P, const FieldData& F, unsigned long K);

  const PrimeIdeal& prime() const { return P_; }
  long p() const { return P_.p; }
  long q() const { return P_.type == SplitType::Inert ? P_.p * P_.p : P_.p; }
  unsigned long precision() const { return K_; }

  Elem fromInteger(const Integer& n) const;
  // Requires ord_P(a) >= 0.
  Elem fromGlobal(const FieldElement& a) const;

  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem mul(const Elem& x, const Elem& y) const;
  // Valuation in the uniformizer; capped at the truncation.
  long ord(const Elem& x) const;
  long maxOrd() const;
  Elem divUniformizer(const Elem& x) const;

  // Complete residue system mod P^k.
  std::vector<Elem> representatives(long k) const;

  // Coordinates of the residue of x in O/P (second entry 0 unless inert),
  // and the residue-field multiplication rule theta^2 = rtr*theta - rnm.
  std::pair<long, long> residue(const Elem& x) const;
  long residueTr() const;
  long residueNm() const;

 private:
  PrimeIdeal P_;
  unsigned long K_;
  Integer pK_;
  Integer root_;  // split: p-adic root; ramified: r with theta = omega - r
  long tr_ = 0;
  Integer nm_;      // omega^2 = tr*omega - nm
  Integer s_, n_;   // ramified: theta^2 = s*theta + n
  Integer reduce(const Integer& x) const;
};

// Local norm form N(u, v) = u^2 + b uv + c v^2 of O_E = O_F[Theta] at P.
struct NormForm {
  Integer b, c;
};
NormForm normFormAt(const PrimeIdeal& P, const FieldData& F);

// #{(u,v) mod P^k : N(u,v) = t mod P^k} by literal enumeration.
Integer bruteForceNormCount(const LocalRing& R, const NormForm& N, const LocalRing::Elem& t, long k);
// Same count through residue-field enumeration and Hensel lifting.
Integer henselNormCount(const LocalRing& R, const NormForm& N, const LocalRing::Elem& t, long k);

// Is tt (any nonzero element of F) a local norm from E at P?
bool locallyRepresented(const PrimeIdeal& P, const FieldElement& tt, const FieldData& F);

}  // namespace greencm
