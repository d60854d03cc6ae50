#include "greencm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "greencm/errors.hpp"

namespace greencm {

void ExactAccumulator::addScaled(const Integer& m, long e) {
  if (!any_) {
    sum_ = m;
    scale_ = e;
    any_ = true;
    return;
  }
  if (e < scale_) {
    mpz_mul_2exp(sum_.get_mpz_t(), sum_.get_mpz_t(), static_cast<mp_bitcnt_t>(scale_ - e));
    scale_ = e;
    sum_ += m;
  } else {
    Integer shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e - scale_));
    sum_ += shifted;
  }
}

void ExactAccumulator::add(const BigReal& x) {
  if (!x.isFinite()) throw std::domain_error("ExactAccumulator: non-finite term");
  if (x.isZero()) return;
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
  addScaled(m, static_cast<long>(e));
}

void ExactAccumulator::add(const ExactAccumulator& other) {
  if (other.any_) addScaled(other.sum_, other.scale_);
}

BigReal ExactAccumulator::result(Precision p) const {
  BigReal r = BigReal::withPrecision(p);
  if (any_) mpfr_set_z_2exp(r.get(), sum_.get_mpz_t(), scale_, MPFR_RNDN);
  return r;
}

BigReal ExactAccumulator::exactValue() const {
  if (!any_ || sum_ == 0) return BigReal(0);
  size_t bits = mpz_sizeinbase(sum_.get_mpz_t(), 2);
  BigReal r = BigReal::withPrecision(Precision(static_cast<long>(std::max<size_t>(bits, 64))));
  mpfr_set_z_2exp(r.get(), sum_.get_mpz_t(), scale_, MPFR_RNDN);
  // Re-tag as a literal: the value is exact.
  BigReal lit;
  mpfr_set_prec(lit.get(), mpfr_get_prec(r.get()));
  mpfr_set(lit.get(), r.get(), MPFR_RNDN);
  return lit;
}

BigReal sumCompensated(std::span<const BigReal> terms) {
  mpfr_prec_t p = 0;
  for (const BigReal& t : terms) {
    if (t.isLiteral()) continue;
    if (p == 0) {
      p = t.precision();
    } else if (t.precision() != p) {
      throw ConfigurationError("sumCompensated: terms carry different precisions");
    }
  }
  ExactAccumulator acc;
  for (const BigReal& t : terms) acc.add(t);
  if (p == 0) return acc.exactValue();
  return acc.result(Precision(p));
}

namespace {

Integer roundRational(const Rational& q) {
  // floor(q + 1/2)
  Rational h = q + Rational(1, 2);
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
  return f;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void lllReduce(std::vector<std::vector<Integer>>& b) {
  const size_t n = b.size();
  if (n < 2) return;
  const size_t d = b[0].size();
  std::vector<std::vector<Rational>> bstar(n, std::vector<Rational>(d));
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> B(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < d; ++c) bstar[i][c] = Rational(b[i][c]);
    for (size_t j = 0; j < i; ++j) {
      std::vector<Rational> bi(d);
      for (size_t c = 0; c < d; ++c) bi[c] = Rational(b[i][c]);
      mu[i][j] = dot(bi, bstar[j]) / B[j];
      for (size_t c = 0; c < d; ++c) bstar[i][c] -= mu[i][j] * bstar[j][c];
    }
    B[i] = dot(bstar[i], bstar[i]);
    if (B[i] == 0) throw std::invalid_argument("lllReduce: rows are linearly dependent");
  }

  auto sizeReduce = [&](size_t k, size_t j) {
    Integer q = roundRational(mu[k][j]);
    if (q == 0) return;
    for (size_t c = 0; c < d; ++c) b[k][c] -= q * b[j][c];
    for (size_t l = 0; l < j; ++l) mu[k][l] -= Rational(q) * mu[j][l];
    mu[k][j] -= Rational(q);
  };

  const Rational delta(3, 4);
  size_t k = 1;
  while (k < n) {
    sizeReduce(k, k - 1);
    if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      for (size_t j = k - 1; j-- > 0;) sizeReduce(k, j);
      ++k;
      continue;
    }
    Rational m = mu[k][k - 1];
    Rational Bn = B[k] + m * m * B[k - 1];
    mu[k][k - 1] = m * B[k - 1] / Bn;
    B[k] = B[k - 1] * B[k] / Bn;
    B[k - 1] = Bn;
    std::swap(b[k], b[k - 1]);
    for (size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
    for (size_t i = k + 1; i < n; ++i) {
      Rational t = mu[i][k];
      mu[i][k] = mu[i][k - 1] - m * t;
      mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
    }
    if (k > 1) --k;
  }
}

std::optional<Relation> integerRelation(std::span<const BigReal> values, const Integer& maxCoeff,
                                        const BigReal& tol) {
  const size_t n = values.size();
  if (n < 2) return std::nullopt;
  if (!(tol > BigReal(0))) throw ConfigurationError("integerRelation: tol must be positive");
  const double bitsTol = -std::log2(tol.toDouble());
  mpfr_prec_t prec = 0;
  for (const BigReal& v : values) {
    if (v.isLiteral()) continue;
    prec = std::max(prec, v.precision());
    if (static_cast<double>(v.precision()) < 4.0 * bitsTol) {
      throw ConfigurationError("integerRelation: input precision " + std::to_string(v.precision()) +
                               " bits is below 4 x -log2(tol) = " + std::to_string(4.0 * bitsTol) +
                               "; tol is below the noise floor of the inputs");
    }
  }
  if (prec == 0) prec = 256;
  const long scaleBits = static_cast<long>(std::ceil(bitsTol));

  std::vector<std::vector<Integer>> basis(n, std::vector<Integer>(n + 1, Integer(0)));
  for (size_t i = 0; i < n; ++i) {
    basis[i][i] = 1;
    basis[i][n] = ldexp(values[i].isLiteral() ? values[i].rounded(Precision(prec)) : values[i], scaleBits)
                      .roundToInteger();
  }
  lllReduce(basis);

  const Precision work(prec + 64);
  struct Candidate {
    std::vector<Integer> c;
    BigReal residual;
    Integer norm2;
    bool withinBound;
  };
  std::vector<Candidate> cands;
  for (const auto& row : basis) {
    std::vector<Integer> c(row.begin(), row.begin() + static_cast<long>(n));
    if (std::all_of(c.begin(), c.end(), [](const Integer& x) { return x == 0; })) continue;
    auto firstNonzero = std::find_if(c.begin(), c.end(), [](const Integer& x) { return x != 0; });
    if (*firstNonzero < 0)
      for (auto& x : c) x = -x;
    ExactAccumulator acc;
    Integer norm2 = 0;
    bool within = true;
    for (size_t i = 0; i < n; ++i) {
      if (abs(c[i]) > maxCoeff) within = false;
      norm2 += c[i] * c[i];
      if (c[i] != 0) acc.add(BigReal(c[i], work) * values[i]);
    }
    cands.push_back({c, abs(acc.result(work)), norm2, within});
  }

  const Candidate* best = nullptr;
  for (const auto& cand : cands) {
    if (!cand.withinBound || !(cand.residual < tol)) continue;
    if (best == nullptr || cand.norm2 < best->norm2 ||
        (cand.norm2 == best->norm2 && cand.residual < best->residual)) {
      best = &cand;
    }
  }
  if (best == nullptr) return std::nullopt;

  BigReal second;
  bool haveSecond = false;
  for (const auto& cand : cands) {
    if (&cand == best) continue;
    if (!haveSecond || cand.residual < second) {
      second = cand.residual;
      haveSecond = true;
    }
  }
  Relation rel{best->c, best->residual.rounded(Precision(prec)), false};
  rel.certified = !haveSecond || second >= BigReal(1000) * best->residual;
  if (haveSecond && second.isZero()) rel.certified = false;
  return rel;
}

std::optional<Integer> nearestIntegerCheck(const BigReal& x, const BigReal& tol) {
  if (!(tol < BigReal(0.5))) throw std::invalid_argument("nearestIntegerCheck: tol must be < 0.5");
  Integer r = x.roundToInteger();
  BigReal diff = abs(x - BigReal(r, Precision(std::max<long>(x.precision(), 64))));
  if (diff < tol) return r;
  return std::nullopt;
}

}  // namespace greencm
