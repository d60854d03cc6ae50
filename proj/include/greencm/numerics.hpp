#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "greencm/bigreal.hpp"

namespace greencm {

// Exact fixed-point accumulator: every added BigReal is converted to
// m * 2^e exactly and summed as a big integer. The result is rounded once,
// so it does not depend on term order, chunking or thread count.
class ExactAccumulator {
 public:
  void add(const BigReal& x);
  void add(const ExactAccumulator& other);
  BigReal result(Precision p) const;
  // Exact value as a literal (precision 0) BigReal.
  BigReal exactValue() const;
  bool empty() const { return !any_; }

 private:
  Integer sum_ = 0;
  long scale_ = 0;
  bool any_ = false;
  void addScaled(const Integer& m, long e);
};

// Sum rounded once at the common working precision.
// Throws ConfigurationError when non-literal terms disagree on precision.
BigReal sumCompensated(std::span<const BigReal> terms);

struct Relation {
  std::vector<Integer> coefficients;
  BigReal residual;
  bool certified = false;
};

// Smallest-norm integer relation among the LLL-reduced basis vectors of
// [I | C v], C ~ 1/tol. Requires input precision >= 4 * -log2(tol).
std::optional<Relation> integerRelation(std::span<const BigReal> values, const Integer& maxCoeff,
                                        const BigReal& tol);

std::optional<Integer> nearestIntegerCheck(const BigReal& x, const BigReal& tol);

// Row-vector LLL (delta = 3/4) over exact rationals; rows are reduced in place.
void lllReduce(std::vector<std::vector<Integer>>& basis);

}  // namespace greencm

namespace Eigen {

template <>
struct NumTraits<greencm::BigReal> : GenericNumTraits<greencm::BigReal> {
  typedef greencm::BigReal Real;
  typedef greencm::BigReal NonInteger;
  typedef greencm::BigReal Nested;
  typedef greencm::BigReal Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 20,
    MulCost = 40
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  static inline Real highest() { return Real(1e300); }
  static inline Real lowest() { return Real(-1e300); }
};

}  // namespace Eigen
