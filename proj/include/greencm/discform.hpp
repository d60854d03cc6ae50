#pragma once

#include <Eigen/Core>
#include <map>
#include <utility>
#include <vector>

#include "greencm/numerics.hpp"
#include "greencm/qexp.hpp"

namespace greencm {

// Discriminant form of the Gamma0(N) lattice: (Z/N)^2 with Q((b,c)) = bc/N.
// Elements are indexed b*N + c.
class FiniteQuadModule {
 public:
  explicit FiniteQuadModule(long N);
  long level() const { return N_; }
  long size() const { return N_ * N_; }
  long index(long b, long c) const;
  std::pair<long, long> element(long i) const { return {i / N_, i % N_}; }
  // Values in [0, 1).
  Rational qvalue(long i) const;
  Rational bilinear(long i, long j) const;
  long negate(long i) const;

 private:
  long N_;
};

using BigMatrix = Eigen::Matrix<BigReal, Eigen::Dynamic, Eigen::Dynamic>;

struct ComplexMatrix {
  BigMatrix re, im;
  long rows() const { return re.rows(); }
  static ComplexMatrix identity(long n, Precision p);
  static ComplexMatrix zero(long n, long m, Precision p);
  ComplexMatrix adjoint() const;
  ComplexMatrix operator*(const ComplexMatrix& o) const;
  std::vector<BigComplex> apply(const std::vector<BigComplex>& v) const;
};

// max |A_ij - B_ij|
BigReal maxAbsDiff(const ComplexMatrix& A, const ComplexMatrix& B);

ComplexMatrix weilT(long N, Precision p);
ComplexMatrix weilS(long N, Precision p);
// Permutation e_(b,c) -> e_(alpha b, alpha^{-1} c) for alpha a unit mod N.
ComplexMatrix unitAction(long N, long alpha, Precision p);

// Tr^L_M : C[L^v/L] -> C[M^v/M] for the Gamma0(Ncoarse) lattice L and its
// sublattice M of level Nfine (Ncoarse | Nfine). Exact rational matrix.
struct TraceMap {
  long coarse = 1, fine = 1;
  // Column mu (coarse index) lists (fine index, weight).
  std::vector<std::vector<std::pair<long, Rational>>> columns;
  ComplexMatrix toMatrix(Precision p) const;
};
TraceMap traceMap(long Ncoarse, long Nfine);
// Characteristic function of mu + L as a combination of the phi_h for M.
std::vector<std::pair<long, Rational>> inclusionOfSchwartz(long Ncoarse, long Nfine, long mu);
// <e_h, phi_h'> = delta; pairing of a vector with a Schwartz function, both as sparse lists.
Rational pairing(const std::vector<std::pair<long, Rational>>& v, const std::vector<std::pair<long, Rational>>& phi);

// Vector-valued lift at level one: components indexed by L^v/L elements.
struct VVSeries {
  long N = 1;
  std::map<long, QSeries> components;
};
VVSeries vvLiftLevelOne(const QSeries& f, long N = 1);
// Scalar component at e_0.
QSeries sc(const VVSeries& g);

}  // namespace greencm
