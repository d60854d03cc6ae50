#include "greencm/qexp.hpp"

#include <mutex>
#include <stdexcept>

namespace greencm {

QSeries::QSeries(long lead, std::vector<Rational> coeffs, long order, int weight)
    : lead_(lead), c_(std::move(coeffs)), order_(order), weight_(weight) {
  if (order_ < lead_) throw std::invalid_argument("QSeries: order below leading exponent");
  c_.resize(order_ - lead_, Rational(0));
}

QSeries QSeries::monomial(const Rational& c, long exponent, long order, int weight) {
  std::vector<Rational> v(std::max(0L, order - exponent), Rational(0));
  if (!v.empty()) v[0] = c;
  return QSeries(exponent, std::move(v), std::max(order, exponent), weight);
}

Rational QSeries::coeff(long n) const {
  if (n >= order_) throw std::out_of_range("QSeries: coefficient beyond truncation");
  if (n < lead_) return 0;
  return c_[n - lead_];
}

long QSeries::valuation() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return lead_ + static_cast<long>(i);
  return order_;
}

QSeries QSeries::truncated(long order) const {
  if (order > order_) throw std::invalid_argument("QSeries: cannot extend truncation");
  long lead = std::min(lead_, order);
  std::vector<Rational> v;
  for (long n = lead; n < order; ++n) v.push_back(coeff(n));
  return QSeries(lead, std::move(v), order, weight_);
}

QSeries QSeries::withWeight(int w) const {
  QSeries r = *this;
  r.weight_ = w;
  return r;
}

QSeries QSeries::operator+(const QSeries& o) const {
  long order = std::min(order_, o.order_);
  long lead = std::min(lead_, o.lead_);
  std::vector<Rational> v;
  for (long n = lead; n < order; ++n) v.push_back(coeff(n) + o.coeff(n));
  return QSeries(lead, std::move(v), order, weight_);
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + Rational(-1) * o; }

QSeries QSeries::operator*(const QSeries& o) const {
  long lead = lead_ + o.lead_;
  long order = std::min(order_ + o.lead_, o.order_ + lead_);
  std::vector<Rational> v(std::max(0L, order - lead), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size() && static_cast<long>(i + j) < order - lead; ++j)
      v[i + j] += c_[i] * o.c_[j];
  }
  return QSeries(lead, std::move(v), std::max(order, lead), weight_ + o.weight_);
}

QSeries operator*(const Rational& s, const QSeries& f) {
  QSeries r = f;
  for (auto& x : r.c_) x *= s;
  return r;
}

QSeries QSeries::inverse() const {
  long v = valuation();
  if (v >= order_) throw std::domain_error("QSeries: inverse of a series with no known nonzero term");
  long rel = order_ - v;  // relative precision
  Rational a0 = coeff(v);
  std::vector<Rational> b(rel, Rational(0));
  b[0] = 1 / a0;
  for (long n = 1; n < rel; ++n) {
    Rational s = 0;
    for (long k = 1; k <= n; ++k) s += coeff(v + k) * b[n - k];
    b[n] = -s / a0;
  }
  return QSeries(-v, std::move(b), -v + rel, -weight_);
}

QSeries QSeries::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  QSeries result = monomial(1, 0, order_ - lead_ + std::max(0L, lead_ * n), 0);
  QSeries base = *this;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return first ? result.withWeight(0) : result;
}

bool QSeries::agreesWith(const QSeries& o) const {
  long order = std::min(order_, o.order_);
  for (long n = std::min(lead_, o.lead_); n < order; ++n)
    if (coeff(n) != o.coeff(n)) return false;
  return true;
}

BigComplex QSeries::evaluate(const BigComplex& q) const {
  Precision p(q.re.precision());
  BigComplex acc{BigReal(0L, p), BigReal(0L, p)};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * q;
    acc.re += BigReal(*it, p);
  }
  if (lead_ != 0) {
    BigComplex qp{BigReal(1L, p), BigReal(0L, p)};
    BigComplex base = lead_ > 0 ? q : BigComplex{BigReal(1L, p), BigReal(0L, p)} / q;
    for (long i = 0; i < std::labs(lead_); ++i) qp = qp * base;
    acc = acc * qp;
  }
  return acc;
}

// ---------------------------------------------------------------- forms

Rational bernoulli(int k) {
  // Akiyama-Tanigawa
  std::vector<Rational> a(k + 1);
  for (int m = 0; m <= k; ++m) {
    a[m] = Rational(1, m + 1);
    for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
  }
  Rational b = a[0];
  return k == 1 ? -b : b;  // B_1 = -1/2 convention
}

Integer divisorSigma(int k, long n) {
  Integer s = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), d, k);
    s += t;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), e, k);
      s += t;
    }
  }
  return s;
}

QSeries eisenstein(int k, long order) {
  if (k < 4 || k % 2) throw std::invalid_argument("eisenstein: weight must be even and >= 4");
  if (order < 1) throw std::invalid_argument("eisenstein: order >= 1");
  Rational factor = Rational(-2 * k) / bernoulli(k);
  std::vector<Rational> v(order);
  v[0] = 1;
  for (long n = 1; n < order; ++n) v[n] = factor * Rational(divisorSigma(k - 1, n));
  return QSeries(0, std::move(v), order, k);
}

QSeries delta(long order) {
  QSeries e4 = eisenstein(4, order), e6 = eisenstein(6, order);
  return Rational(1, 1728) * (e4.pow(3) - e6 * e6);
}

QSeries jFunction(long order) {
  // Delta = q + ..., so 1/Delta needs one extra term to reach O(q^order).
  QSeries e4 = eisenstein(4, order + 2);
  return (e4.pow(3) * delta(order + 2).inverse()).truncated(order);
}

namespace {

// E_k' for k' in {0, 4, 6, 8, 10, 14} as a product of E4 and E6.
QSeries eisensteinProduct(int k, long order) {
  switch (k) {
    case 0: return QSeries::monomial(1, 0, order);
    case 4: return eisenstein(4, order);
    case 6: return eisenstein(6, order);
    case 8: return eisenstein(4, order).pow(2);
    case 10: return eisenstein(4, order) * eisenstein(6, order);
    case 14: return eisenstein(4, order).pow(2) * eisenstein(6, order);
  }
  throw std::logic_error("eisensteinProduct: bad weight");
}

}  // namespace

QSeries faberBasis(int r, long m, long order) {
  if (r < 0 || m < 1) throw std::invalid_argument("faberBasis: needs r >= 0, m >= 1");
  const int weight = -2 * r;
  int kp = ((weight % 12) + 12) % 12;
  if (kp == 2) kp = 14;
  const long a = (kp - weight) / 12;  // Delta^{-a}
  if (m < a) throw std::domain_error("faberBasis: no form q^{-m} + O(1) in this weight");
  const long work = order + m + a + 4;
  QSeries B = eisensteinProduct(kp, work + a) * delta(work + a).pow(a).inverse();
  QSeries j = jFunction(work);
  std::vector<QSeries> jp{QSeries::monomial(1, 0, work)};
  for (long i = 1; i <= m - a; ++i) jp.push_back(jp.back() * j);
  QSeries f = (B * jp[m - a]).truncated(order);
  // Kill q^{-n} for a <= n < m with B j^{n-a}; for r = 0 this includes q^0.
  for (long n = m - 1; n >= a; --n) {
    Rational c = f.coeff(-n);
    if (c != 0) f = f - c * (B * jp[n - a]).truncated(order);
  }
  for (long n = a - 1; n >= 1; --n)
    if (f.coeff(-n) != 0) throw std::domain_error("faberBasis: unremovable pole term");
  return f.withWeight(weight);
}

QSeries formFromPrincipalPart(const PrincipalPart& pp, long order) {
  QSeries f = QSeries::monomial(pp.constantTerm, 0, order, -2 * pp.r);
  for (const auto& [m, c] : pp.coeffs)
    if (c != 0) f = f + c * faberBasis(pp.r, m, order);
  return f.withWeight(-2 * pp.r);
}

PrincipalPart principalPartOf(const QSeries& f, int r) {
  PrincipalPart pp;
  pp.r = r;
  for (long n = f.lead(); n < 0; ++n)
    if (f.coeff(n) != 0) pp.coeffs[-n] = f.coeff(n);
  if (f.order() > 0) pp.constantTerm = f.coeff(0);
  return pp;
}

// ---------------------------------------------------------------- j evaluation

QuadForm reduceForm(QuadForm f) {
  if (f.a <= 0 || f.disc() >= 0) throw std::invalid_argument("reduceForm: form must be positive definite");
  for (;;) {
    // translate so -a < b <= a
    if (f.b > f.a || f.b <= -f.a) {
      long k = (f.a - f.b) / (2 * f.a);
      if (f.a - f.b < 0 && (f.a - f.b) % (2 * f.a)) --k;
      // b -> b + 2ak, c -> a k^2 + b k + c
      long nb = f.b + 2 * f.a * k;
      long nc = f.a * k * k + f.b * k + f.c;
      f = {f.a, nb, nc};
      continue;
    }
    if (f.a > f.c) {
      f = {f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

namespace {

std::mutex jCacheMutex;
QSeries jCache;

QSeries jSeries(long order) {
  std::lock_guard<std::mutex> lock(jCacheMutex);
  if (jCache.order() < order) jCache = jFunction(std::max(order, 2 * jCache.order()));
  return jCache;
}

BigComplex evalReduced(const BigComplex& tau, Precision p) {
  Precision w(p.bits + 32);
  BigReal twoPi = ldexp(BigReal::pi(w), 1);
  BigReal modulus = exp(-twoPi * tau.im.rounded(w));
  BigComplex q = modulus * expi(twoPi * tau.re.rounded(w));
  // Coefficients grow like exp(4 pi sqrt n); pick the order where the
  // terms drop below 2^{-p-20} and confirm geometric decay beyond it.
  double lq = std::log(modulus.toDouble());
  double target = -(static_cast<double>(p.bits) + 20) * std::log(2.0);
  long order = 8;
  while (4 * M_PI * std::sqrt(static_cast<double>(order)) + order * lq > target) order += 8;
  order += 8;
  QSeries j = jSeries(order + 1).truncated(order);
  BigComplex v = j.evaluate(q);
  return {v.re.rounded(p), v.im.rounded(p)};
}

}  // namespace

BigComplex evalJ(const QuadForm& form, Precision p) {
  QuadForm f = reduceForm(form);
  CMPoint pt{f};
  return evalReduced(pt.z(Precision(p.bits + 32)), p);
}

BigComplex evalJ(const BigComplex& z, Precision p) {
  if (!(z.im > BigReal(0))) throw std::domain_error("evalJ: point must lie in the upper half plane");
  Precision w(p.bits + 32);
  BigComplex t{z.re.rounded(w), z.im.rounded(w)};
  for (int iter = 0; iter < 10000; ++iter) {
    t.re -= round(t.re);
    BigReal n2 = t.norm();
    if (n2 < BigReal(1L, w) - ldexp(BigReal(1L, w), -static_cast<long>(w.bits) + 8)) {
      t = {-t.re / n2, t.im / n2};
      continue;
    }
    return evalReduced(t, p);
  }
  throw std::runtime_error("evalJ: reduction did not terminate");
}

// ---------------------------------------------------------------- JSON

nlohmann::json toJson(const QSeries& f) {
  nlohmann::json j;
  j["weight"] = f.weight();
  j["leading_exponent"] = f.lead();
  nlohmann::json coeffs = nlohmann::json::array();
  for (long n = f.lead(); n < f.order(); ++n) coeffs.push_back(f.coeff(n).get_str());
  j["coefficients"] = coeffs;
  return j;
}

QSeries qseriesFromJson(const nlohmann::json& j) {
  long lead = j.at("leading_exponent").get<long>();
  int weight = j.at("weight").get<int>();
  std::vector<Rational> v;
  for (const auto& c : j.at("coefficients")) {
    std::string s = c.get<std::string>();
    if (s.find_first_of(".eE") != std::string::npos) throw std::invalid_argument("qseries JSON: coefficient must be p/q: " + s);
    Rational q(s);
    q.canonicalize();
    v.push_back(q);
  }
  long order = lead + static_cast<long>(v.size());
  return QSeries(lead, std::move(v), order, weight);
}

}  // namespace greencm
