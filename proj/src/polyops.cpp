#include "greencm/polyops.hpp"

#include <sstream>
#include <stdexcept>


namespace greencm {

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const Rational& c, int deg) {
  std::vector<Rational> v(deg + 1, Rational(0));
  v[deg] = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return Poly(std::move(v));
}

Poly Poly::operator-(const Poly& o) const { return *this + Rational(-1) * o; }

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(v));
}

Poly operator*(const Rational& s, const Poly& p) {
  std::vector<Rational> v = p.c_;
  for (auto& x : v) x *= s;
  return Poly(std::move(v));
}

Poly Poly::derivative() const {
  std::vector<Rational> v;
  for (size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * static_cast<long>(i));
  return Poly(std::move(v));
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

BigReal Poly::operator()(const BigReal& x) const {
  Precision p(x.isLiteral() ? 64 : x.precision());
  BigReal acc(0L, p);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + BigReal(*it, p);
  return acc;
}

std::string Poly::toString() const {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << "(" << c_[i].get_str() << ")";
    if (i > 0) os << "*x^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------- BivarPoly

BivarPoly BivarPoly::monomial(const Rational& c, int i, int j) {
  BivarPoly p;
  p.add({i, j}, c);
  return p;
}

void BivarPoly::add(const Key& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = t_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

Rational BivarPoly::coeff(int i, int j) const {
  auto it = t_.find({i, j});
  return it == t_.end() ? Rational(0) : it->second;
}

int BivarPoly::totalDegree() const {
  int d = -1;
  for (const auto& [k, c] : t_) d = std::max(d, k.first + k.second);
  return d;
}

BivarPoly BivarPoly::operator+(const BivarPoly& o) const {
  BivarPoly r = *this;
  for (const auto& [k, c] : o.t_) r.add(k, c);
  return r;
}

BivarPoly BivarPoly::operator-(const BivarPoly& o) const {
  BivarPoly r = *this;
  for (const auto& [k, c] : o.t_) r.add(k, -c);
  return r;
}

BivarPoly BivarPoly::operator*(const BivarPoly& o) const {
  BivarPoly r;
  for (const auto& [k1, c1] : t_)
    for (const auto& [k2, c2] : o.t_) r.add({k1.first + k2.first, k1.second + k2.second}, c1 * c2);
  return r;
}

BivarPoly operator*(const Rational& s, const BivarPoly& p) {
  BivarPoly r;
  for (const auto& [k, c] : p.t_) r.add(k, s * c);
  return r;
}

BivarPoly BivarPoly::dX() const {
  BivarPoly r;
  for (const auto& [k, c] : t_)
    if (k.first > 0) r.add({k.first - 1, k.second}, c * k.first);
  return r;
}

BivarPoly BivarPoly::dY() const {
  BivarPoly r;
  for (const auto& [k, c] : t_)
    if (k.second > 0) r.add({k.first, k.second - 1}, c * k.second);
  return r;
}

BivarPoly BivarPoly::swapped() const {
  BivarPoly r;
  for (const auto& [k, c] : t_) r.add({k.second, k.first}, c);
  return r;
}

Rational BivarPoly::operator()(const Rational& x, const Rational& y) const {
  Rational acc = 0;
  for (const auto& [k, c] : t_) {
    Rational term = c;
    for (int i = 0; i < k.first; ++i) term *= x;
    for (int j = 0; j < k.second; ++j) term *= y;
    acc += term;
  }
  return acc;
}

namespace {
// Leading key in lex order with X first.
BivarPoly::Key leadKey(const std::map<BivarPoly::Key, Rational>& t) { return t.rbegin()->first; }
}  // namespace

BivarPoly BivarPoly::divideExact(const BivarPoly& d) const {
  if (d.isZero()) throw std::invalid_argument("division by zero polynomial");
  auto dl = leadKey(d.t_);
  Rational dc = d.t_.rbegin()->second;
  BivarPoly rem = *this, quo;
  while (!rem.isZero()) {
    auto rl = leadKey(rem.t_);
    if (rl.first < dl.first || rl.second < dl.second) throw std::logic_error("inexact polynomial division");
    BivarPoly m = monomial(rem.t_.rbegin()->second / dc, rl.first - dl.first, rl.second - dl.second);
    quo = quo + m;
    rem = rem - m * d;
  }
  return quo;
}

std::string BivarPoly::toString() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    if (!first) os << " + ";
    os << "(" << it->second.get_str() << ")";
    if (it->first.first) os << "*X^" << it->first.first;
    if (it->first.second) os << "*Y^" << it->first.second;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- Legendre

Rational binomial(const Rational& a, long s) {
  if (s < 0) return 0;
  Rational r = 1;
  for (long i = 0; i < s; ++i) {
    r *= a - i;
    r /= i + 1;
  }
  return r;
}

Poly legendreP(int r) {
  if (r < 0) throw std::invalid_argument("legendreP: r < 0");
  Poly xm1(std::vector<Rational>{-1, 1}), xp1(std::vector<Rational>{1, 1});
  Poly acc;
  for (int s = 0; s <= r; ++s) {
    Rational b = binomial(Rational(r), s);
    Poly term = Poly::monomial(b * b, 0);
    for (int i = 0; i < r - s; ++i) term = term * xm1;
    for (int i = 0; i < s; ++i) term = term * xp1;
    acc = acc + term;
  }
  Rational scale(1);
  scale /= Rational(Integer(1) << r);
  return scale * acc;
}

Poly legendrePAlt(int r) {
  if (r < 0) throw std::invalid_argument("legendreP: r < 0");
  int r0 = r / 2;
  Rational half(1, 2);
  Poly acc;
  for (int s = 0; s <= r0; ++s) {
    Rational c = binomial(Rational(r0 - r) - half, r0 - s) * binomial(Rational(r - r0) - half, s);
    acc = acc + Poly::monomial(c, r - 2 * s);
  }
  return (r0 % 2 ? Rational(-1) : Rational(1)) * acc;
}

BivarPoly qKernel(int r, const Rational& k1, const Rational& k2) {
  if (r < 0) throw std::invalid_argument("qKernel: r < 0");
  BivarPoly acc;
  for (int s = 0; s <= r; ++s) {
    Rational c = binomial(r + k1 - 1, s) * binomial(r + k2 - 1, r - s);
    if (s % 2) c = -c;
    acc = acc + BivarPoly::monomial(c, r - s, s);
  }
  return acc;
}

BivarPoly qTilde(int r) {
  BivarPoly q = qKernel(r, Rational(1), Rational(1));
  BivarPoly num = q * (BivarPoly::X() + BivarPoly::Y());
  BivarPoly den = BivarPoly::X() + Rational(r % 2 ? -1 : 1) * BivarPoly::Y();
  return num.divideExact(den);
}

namespace {

Precision workingPrecision(const BigReal& t, const char* who) {
  if (t.isLiteral()) throw std::invalid_argument(std::string(who) + ": argument needs a working precision");
  return Precision(t.precision());
}

// r!(r+1)! 4^{r+1} / (2r+2)!
Rational qPrefactor(int r) {
  Integer num = 1, den = 1;
  for (int i = 2; i <= r; ++i) num *= i;
  for (int i = 2; i <= r + 1; ++i) num *= i;
  num <<= 2 * (r + 1);
  for (int i = 2; i <= 2 * r + 2; ++i) den *= i;
  return Rational(num, den);
}

// sum_n a_n z^n with a_n the 2F1((r+1)/2, (r+2)/2; r+3/2) coefficients,
// each multiplied by w_n (w = nullptr for 1).
BigReal hyperSeries(int r, const BigReal& z, Precision p, long startShift) {
  BigReal term(1L, p), sum(0L, p);
  BigReal eps = ldexp(BigReal(1L, p), -static_cast<long>(p.bits) - 8);
  for (long n = 0;; ++n) {
    BigReal contrib = term;
    if (startShift >= 0) contrib = term / BigReal(startShift + 2 * n, p);
    sum += contrib;
    if (abs(contrib) <= eps * abs(sum)) break;
    // a_{n+1}/a_n = (r+1+2n)(r+2+2n) / ((2r+3+2n)(2n+2))
    Rational ratio(Integer(r + 1 + 2 * n) * (r + 2 + 2 * n), Integer(2 * r + 3 + 2 * n) * (2 * n + 2));
    ratio.canonicalize();
    term = term * BigReal(ratio, p) * z;
  }
  return sum;
}

}  // namespace

BigReal legendreQClosedForm(int r, const BigReal& t) {
  Precision p = workingPrecision(t, "legendreQ");
  if (!(t > BigReal(1))) throw std::domain_error("legendreQ: t must exceed 1");
  Precision w(p.bits + 64 + 4 * r);
  BigReal x = t.rounded(w);
  // P_0..P_r by the three-term recurrence
  std::vector<BigReal> P;
  P.emplace_back(1L, w);
  if (r >= 1) P.push_back(x);
  for (int n = 1; n < r; ++n)
    P.push_back((BigReal(2L * n + 1, w) * x * P[n] - BigReal(long(n), w) * P[n - 1]) / BigReal(long(n + 1), w));
  BigReal L = log((x + BigReal(1L, w)) / (x - BigReal(1L, w)));
  BigReal W(0L, w);
  for (int k = 1; k <= r; ++k) W += P[k - 1] * P[r - k] / BigReal(long(k), w);
  BigReal q = ldexp(P[r] * L, -1) - W;
  return q.rounded(p);
}

BigReal legendreQ(int r, const BigReal& t) {
  if (r < 0) throw std::invalid_argument("legendreQ: r < 0");
  Precision p = workingPrecision(t, "legendreQ");
  if (!(t > BigReal(1))) throw std::domain_error("legendreQ: t must exceed 1");
  if (t < BigReal(2)) return legendreQClosedForm(r, t);
  Precision w(p.bits + 32);
  BigReal x = t.rounded(w);
  BigReal z = BigReal(1L, w) / (x * x);
  BigReal s = hyperSeries(r, z, w, -1);
  BigReal pre(qPrefactor(r), w);
  BigReal q = pre * s / pow(ldexp(x, 1), r + 1);
  return q.rounded(p);
}

BigReal legendreQTailIntegral(int r, const BigReal& T) {
  if (r < 1) throw std::invalid_argument("legendreQTailIntegral: needs r >= 1");
  Precision p = workingPrecision(T, "legendreQTailIntegral");
  if (T < BigReal(2)) throw std::domain_error("legendreQTailIntegral: T must be at least 2");
  Precision w(p.bits + 32);
  BigReal x = T.rounded(w);
  BigReal z = BigReal(1L, w) / (x * x);
  // sum_n a_n T^{-(r+2n)}/(r+2n) = T^{-r} sum_n a_n z^n/(r+2n)
  BigReal s = hyperSeries(r, z, w, r);
  BigReal pre(qPrefactor(r), w);
  BigReal v = pre * s / (pow(BigReal(2L, w), r + 1) * pow(x, r));
  return v.rounded(p);
}

// ---------------------------------------------------------------- Rankin-Cohen constants

namespace {

void triAdd(TriPoly& P, const std::array<int, 3>& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = P.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) P.erase(it);
  }
}

TriPoly triMul(const TriPoly& A, const TriPoly& B) {
  TriPoly R;
  for (const auto& [ka, ca] : A)
    for (const auto& [kb, cb] : B) triAdd(R, {ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
  return R;
}

// Normalized raising operator applied n times to f(u) e(M tau), f given as
// a polynomial in (m1, m2, u). One step at weight kk: u^a -> (kk-a) u^{a+1} - M u^a.
TriPoly raise(int n, Rational kk, const TriPoly& M, TriPoly f) {
  for (int step = 0; step < n; ++step) {
    TriPoly g;
    for (const auto& [k, c] : f) triAdd(g, {k[0], k[1], k[2] + 1}, (kk - k[2]) * c);
    for (const auto& [k, c] : triMul(M, f)) triAdd(g, k, -c);
    f = std::move(g);
    kk += 2;
  }
  return f;
}

TriPoly one() { return TriPoly{{{0, 0, 0}, Rational(1)}}; }

std::vector<TriPoly> rcTerms(int r, const Rational& k1, const Rational& k2, TriPoly& lhs) {
  TriPoly m1{{{1, 0, 0}, Rational(1)}};
  TriPoly m12{{{1, 0, 0}, Rational(1)}, {{0, 1, 0}, Rational(1)}};
  lhs = raise(r, k1, m1, one());
  std::vector<TriPoly> terms;
  for (int l = 0; l <= r; ++l) {
    TriPoly q;
    BivarPoly kernel = qKernel(l, k1, k2);
    for (const auto& [k, c] : kernel.terms()) triAdd(q, {k.first, k.second, 0}, c);
    terms.push_back(triMul(q, raise(r - l, k1 + k2 + 2 * l, m12, one())));
  }
  return terms;
}

}  // namespace

RCConstants rcConstants(int r, const Rational& k1, const Rational& k2) {
  if (r < 0) throw std::invalid_argument("rcConstants: r < 0");
  if (!(k1 + k2 + 2 * r < 2)) throw std::invalid_argument("rcConstants: needs k1 + k2 + 2r < 2");
  TriPoly lhs;
  auto terms = rcTerms(r, k1, k2, lhs);
  // Linear system from the u^0 coefficients.
  std::map<std::array<int, 3>, int> rowOf;
  auto rowIndex = [&](const std::array<int, 3>& k) {
    auto it = rowOf.find(k);
    if (it != rowOf.end()) return it->second;
    int idx = static_cast<int>(rowOf.size());
    rowOf[k] = idx;
    return idx;
  };
  const int n = r + 1;
  std::vector<std::vector<Rational>> A;
  auto ensure = [&](int row) {
    while (static_cast<int>(A.size()) <= row) A.emplace_back(n + 1, Rational(0));
  };
  for (int l = 0; l < n; ++l)
    for (const auto& [k, c] : terms[l])
      if (k[2] == 0) {
        int row = rowIndex(k);
        ensure(row);
        A[row][l] += c;
      }
  for (const auto& [k, c] : lhs)
    if (k[2] == 0) {
      int row = rowIndex(k);
      ensure(row);
      A[row][n] += c;
    }
  // Gauss-Jordan elimination.
  int rank = 0;
  std::vector<int> pivotCol;
  for (int col = 0; col < n && rank < static_cast<int>(A.size()); ++col) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(A.size()); ++i)
      if (A[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[rank]);
    Rational inv = 1 / A[rank][col];
    for (auto& x : A[rank]) x *= inv;
    for (int i = 0; i < static_cast<int>(A.size()); ++i) {
      if (i == rank || A[i][col] == 0) continue;
      Rational f = A[i][col];
      for (int j = 0; j <= n; ++j) A[i][j] -= f * A[rank][j];
    }
    pivotCol.push_back(col);
    ++rank;
  }
  if (rank != n) throw std::logic_error("rcConstants: decomposition system is singular");
  for (int i = rank; i < static_cast<int>(A.size()); ++i)
    if (A[i][n] != 0) throw std::logic_error("rcConstants: inconsistent decomposition system");
  RCConstants out{r, k1, k2, std::vector<Rational>(n)};
  for (int i = 0; i < n; ++i) out.c[pivotCol[i]] = A[i][n];
  if (!rcResidual(out).empty()) throw std::logic_error("rcConstants: identity fails at higher u-powers");
  return out;
}

TriPoly rcResidual(const RCConstants& rc) {
  TriPoly lhs;
  auto terms = rcTerms(rc.r, rc.k1, rc.k2, lhs);
  TriPoly res = lhs;
  for (int l = 0; l <= rc.r; ++l)
    for (const auto& [k, c] : terms[l]) triAdd(res, k, -rc.c[l] * c);
  return res;
}

}  // namespace greencm
