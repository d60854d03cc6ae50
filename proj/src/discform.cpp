#include "greencm/discform.hpp"

#include <numeric>
#include <stdexcept>

#include "greencm/errors.hpp"

namespace greencm {

FiniteQuadModule::FiniteQuadModule(long N) : N_(N) {
  if (N < 1) throw ConfigurationError("FiniteQuadModule: level must be positive");
}

long FiniteQuadModule::index(long b, long c) const {
  b = ((b % N_) + N_) % N_;
  c = ((c % N_) + N_) % N_;
  return b * N_ + c;
}

Rational FiniteQuadModule::qvalue(long i) const {
  auto [b, c] = element(i);
  Rational q((b * c) % N_, N_);
  q.canonicalize();
  return q;
}

Rational FiniteQuadModule::bilinear(long i, long j) const {
  auto [b1, c1] = element(i);
  auto [b2, c2] = element(j);
  Rational q((b1 * c2 + b2 * c1) % N_, N_);
  q.canonicalize();
  return q;
}

long FiniteQuadModule::negate(long i) const {
  auto [b, c] = element(i);
  return index(-b, -c);
}

// ---------------------------------------------------------------- matrices

ComplexMatrix ComplexMatrix::zero(long n, long m, Precision p) {
  ComplexMatrix M;
  M.re = BigMatrix::Constant(n, m, BigReal(0L, p));
  M.im = M.re;
  return M;
}

ComplexMatrix ComplexMatrix::identity(long n, Precision p) {
  ComplexMatrix M = zero(n, n, p);
  for (long i = 0; i < n; ++i) M.re(i, i) = BigReal(1L, p);
  return M;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix M;
  M.re = re.transpose();
  M.im = im.transpose();
  for (long i = 0; i < M.im.rows(); ++i)
    for (long j = 0; j < M.im.cols(); ++j) M.im(i, j) = -M.im(i, j);
  return M;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
  if (re.cols() != o.re.rows()) throw std::invalid_argument("ComplexMatrix: shape mismatch");
  mpfr_prec_t prec = 64;
  if (re.size()) prec = std::max(prec, re(0, 0).precision());
  if (o.re.size()) prec = std::max(prec, o.re(0, 0).precision());
  Precision p(prec);
  const long n = re.rows(), m = o.re.cols(), K = re.cols();
  ComplexMatrix R = zero(n, m, p);
  mpfr_t sr, si, t;
  mpfr_inits2(prec, sr, si, t, static_cast<mpfr_ptr>(nullptr));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < m; ++j) {
      mpfr_set_zero(sr, 1);
      mpfr_set_zero(si, 1);
      for (long k = 0; k < K; ++k) {
        mpfr_srcptr ar = re(i, k).get(), ai = im(i, k).get();
        mpfr_srcptr br = o.re(k, j).get(), bi = o.im(k, j).get();
        if (!mpfr_zero_p(ar)) {
          mpfr_mul(t, ar, br, MPFR_RNDN);
          mpfr_add(sr, sr, t, MPFR_RNDN);
          mpfr_mul(t, ar, bi, MPFR_RNDN);
          mpfr_add(si, si, t, MPFR_RNDN);
        }
        if (!mpfr_zero_p(ai)) {
          mpfr_mul(t, ai, bi, MPFR_RNDN);
          mpfr_sub(sr, sr, t, MPFR_RNDN);
          mpfr_mul(t, ai, br, MPFR_RNDN);
          mpfr_add(si, si, t, MPFR_RNDN);
        }
      }
      mpfr_set(R.re(i, j).get(), sr, MPFR_RNDN);
      mpfr_set(R.im(i, j).get(), si, MPFR_RNDN);
    }
  mpfr_clears(sr, si, t, static_cast<mpfr_ptr>(nullptr));
  return R;
}

std::vector<BigComplex> ComplexMatrix::apply(const std::vector<BigComplex>& v) const {
  std::vector<BigComplex> out;
  for (long i = 0; i < re.rows(); ++i) {
    BigComplex acc{BigReal(0L, Precision(re(i, 0).precision())), BigReal(0L, Precision(re(i, 0).precision()))};
    for (long k = 0; k < re.cols(); ++k) acc += BigComplex{re(i, k), im(i, k)} * v[k];
    out.push_back(acc);
  }
  return out;
}

BigReal maxAbsDiff(const ComplexMatrix& A, const ComplexMatrix& B) {
  if (A.re.rows() != B.re.rows() || A.re.cols() != B.re.cols()) throw std::invalid_argument("maxAbsDiff: shape mismatch");
  BigReal best(0L, Precision(A.re.size() ? A.re(0, 0).precision() : 64));
  for (long i = 0; i < A.re.rows(); ++i)
    for (long j = 0; j < A.re.cols(); ++j) {
      BigComplex d{A.re(i, j) - B.re(i, j), A.im(i, j) - B.im(i, j)};
      best = max(best, abs(d));
    }
  return best;
}

namespace {

// e(k/N) for k = 0..N-1
std::vector<BigComplex> rootsOfUnity(long N, Precision p) {
  std::vector<BigComplex> out;
  BigReal twoPi = ldexp(BigReal::pi(p), 1);
  for (long k = 0; k < N; ++k) {
    if (k == 0) {
      out.push_back({BigReal(1L, p), BigReal(0L, p)});
      continue;
    }
    out.push_back(expi(twoPi * BigReal(k, p) / BigReal(N, p)));
  }
  return out;
}

}  // namespace

ComplexMatrix weilT(long N, Precision p) {
  FiniteQuadModule L(N);
  auto roots = rootsOfUnity(N, p);
  ComplexMatrix M = ComplexMatrix::zero(L.size(), L.size(), p);
  for (long i = 0; i < L.size(); ++i) {
    auto [b, c] = L.element(i);
    const auto& z = roots[(b * c) % N];
    M.re(i, i) = z.re;
    M.im(i, i) = z.im;
  }
  return M;
}

ComplexMatrix weilS(long N, Precision p) {
  FiniteQuadModule L(N);
  auto roots = rootsOfUnity(N, p);
  BigReal invN = BigReal(1L, p) / BigReal(N, p);
  ComplexMatrix M = ComplexMatrix::zero(L.size(), L.size(), p);
  for (long col = 0; col < L.size(); ++col) {
    auto [b, c] = L.element(col);
    for (long row = 0; row < L.size(); ++row) {
      auto [b2, c2] = L.element(row);
      long k = (N - (b * c2 + b2 * c) % N) % N;  // e(-(mu, mu'))
      M.re(row, col) = roots[k].re * invN;
      M.im(row, col) = roots[k].im * invN;
    }
  }
  return M;
}

ComplexMatrix unitAction(long N, long alpha, Precision p) {
  alpha = ((alpha % N) + N) % N;
  if (std::gcd(alpha, N) != 1) throw ConfigurationError("unitAction: alpha must be a unit mod N");
  long inv = 1;
  while ((alpha * inv) % N != 1 % N) ++inv;
  FiniteQuadModule L(N);
  ComplexMatrix M = ComplexMatrix::zero(L.size(), L.size(), p);
  for (long col = 0; col < L.size(); ++col) {
    auto [b, c] = L.element(col);
    M.re(L.index(alpha * b, inv * c), col) = BigReal(1L, p);
  }
  return M;
}

// ---------------------------------------------------------------- trace map

namespace {

std::vector<long> liftsOf(long Ncoarse, long Nfine, long mu) {
  if (Ncoarse < 1 || Nfine < 1 || Nfine % Ncoarse != 0)
    throw ConfigurationError("traceMap: level " + std::to_string(Ncoarse) + " lattice does not contain level " +
                             std::to_string(Nfine));
  const long k = Nfine / Ncoarse;
  FiniteQuadModule L(Ncoarse), M(Nfine);
  auto [b, c] = L.element(mu);
  std::vector<long> out;
  for (long j = 0; j < k; ++j) out.push_back(M.index(b + Ncoarse * j, c * k));
  return out;
}

}  // namespace

TraceMap traceMap(long Ncoarse, long Nfine) {
  TraceMap T;
  T.coarse = Ncoarse;
  T.fine = Nfine;
  FiniteQuadModule L(Ncoarse);
  const long k = Nfine / std::max(1L, Ncoarse);
  for (long mu = 0; mu < L.size(); ++mu) {
    std::vector<std::pair<long, Rational>> col;
    for (long h : liftsOf(Ncoarse, Nfine, mu)) col.emplace_back(h, Rational(1, k));
    T.columns.push_back(std::move(col));
  }
  return T;
}

ComplexMatrix TraceMap::toMatrix(Precision p) const {
  ComplexMatrix M = ComplexMatrix::zero(fine * fine, coarse * coarse, p);
  for (size_t mu = 0; mu < columns.size(); ++mu)
    for (const auto& [h, w] : columns[mu]) M.re(h, static_cast<long>(mu)) = BigReal(w, p);
  return M;
}

std::vector<std::pair<long, Rational>> inclusionOfSchwartz(long Ncoarse, long Nfine, long mu) {
  std::vector<std::pair<long, Rational>> out;
  for (long h : liftsOf(Ncoarse, Nfine, mu)) out.emplace_back(h, Rational(1));
  return out;
}

Rational pairing(const std::vector<std::pair<long, Rational>>& v, const std::vector<std::pair<long, Rational>>& phi) {
  Rational s = 0;
  for (const auto& [i, a] : v)
    for (const auto& [j, b] : phi)
      if (i == j) s += a * b;
  return s;
}

// ---------------------------------------------------------------- vv lift

VVSeries vvLiftLevelOne(const QSeries& f, long N) {
  if (N != 1) throw NotImplementedScope("vector-valued lift is implemented at level 1 only");
  VVSeries g;
  g.N = 1;
  g.components.emplace(0, f);
  return g;
}

QSeries sc(const VVSeries& g) {
  auto it = g.components.find(0);
  if (it == g.components.end()) throw std::invalid_argument("sc: missing e_0 component");
  return it->second;
}

}  // namespace greencm
