#include "greencm/eiscoeff.hpp"

#include <sstream>

#include "greencm/errors.hpp"
#include "greencm/local_ring.hpp"

namespace greencm {

// ---------------------------------------------------------------- Whittaker

Rational WhittakerPoly::value() const {
  Rational s = 0;
  for (const auto& c : coeffs) s += c;
  return s;
}

Rational WhittakerPoly::derivativeInX() const {
  if (!derivativeKnown) throw UnsupportedLocalDatum("Whittaker derivative unavailable at " + place.label());
  Rational s = 0;
  for (size_t n = 1; n < coeffs.size(); ++n) s += coeffs[n] * static_cast<long>(n);
  return s;
}

Rational WhittakerPoly::derivativeOverLog() const { return -derivativeInX(); }

WhittakerPoly localWhittakerPoly(const PrimeIdeal& P, const FieldElement& t, const FieldElement& alpha,
                                 const FieldData& F) {
  if (t.isZero()) throw std::invalid_argument("localWhittakerPoly: t = 0");
  WhittakerPoly W;
  W.place = P;
  W.t = t;
  FieldElement tt = t / alpha;
  long o = ord(tt, P, F);
  if (o < 0) return W;  // not in the lattice: identically 0
  int chi = F.chiE(P);
  if (chi == 1) {
    W.coeffs.assign(o + 1, Rational(1));
  } else if (chi == -1) {
    for (long n = 0; n <= o; ++n) W.coeffs.push_back(Rational(n % 2 ? -1 : 1));
  } else {
    if (P.p == 2) throw UnsupportedLocalDatum("dyadic place ramified in E/F: " + P.label());
    W.coeffs = {stabilizedCount(P, t, alpha, F)};
    W.derivativeKnown = false;
  }
  return W;
}

Rational countingOracle(const PrimeIdeal& P, const FieldElement& t, const FieldElement& alpha, const FieldData& F,
                        long k) {
  if (k < 1) throw std::invalid_argument("countingOracle: k >= 1");
  FieldElement tt = t / alpha;
  if (ord(tt, P, F) < 0) return 0;
  LocalRing R(P, F, static_cast<unsigned long>(k + 2));
  NormForm N = normFormAt(P, F);
  Integer count = henselNormCount(R, N, R.fromGlobal(tt), k);
  Integer q(R.q()), qk;
  mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k));
  Rational v(count, qk);
  v *= Rational(q, q - F.chiE(P));
  v.canonicalize();
  return v;
}

Rational stabilizedCount(const PrimeIdeal& P, const FieldElement& t, const FieldElement& alpha, const FieldData& F) {
  long o = ord(t / alpha, P, F);
  if (o < 0) return 0;
  Rational prev = countingOracle(P, t, alpha, F, o + 1);
  for (long k = o + 2; k <= 2 * o + 6; ++k) {
    Rational cur = countingOracle(P, t, alpha, F, k);
    if (cur == prev) return cur;
    prev = cur;
  }
  throw std::logic_error("countingOracle did not stabilize at " + P.label());
}

WTildeResult wTilde(const FieldElement& t, const FieldElement& alpha, const FieldData& F) {
  WTildeResult out;
  out.diff = diffSet(t, alpha, F);
  if (out.diff.size() != 1) return out;
  const PrimeIdeal dp = out.diff.front();
  out.diffPrime = dp;
  Rational w = 4 * localWhittakerPoly(dp, t, alpha, F).derivativeOverLog();
  for (const auto& P : supportPrimes(t / alpha, F)) {
    if (P == dp) continue;
    w *= localWhittakerPoly(P, t, alpha, F).value();
  }
  out.value = w;
  return out;
}

Rational lambdaChi(long d1, long d2) {
  FieldData F(d1, d2, Precision(64));
  CMPointSet c1 = classGroup(d1), c2 = classGroup(d2);
  // D_E = d1 d2 D by the conductor-discriminant formula; L(1, chi_d) = 2 pi h / (w sqrt|d|).
  Rational ratio(Integer(d1 * d2) * F.D, F.D * Integer(d1 * d2));  // (D_E / D) / (|d1| |d2|)
  Integer num = ratio.get_num(), den = ratio.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    throw std::logic_error("lambdaChi: discriminant ratio is not a square");
  Rational root(sqrt(num), sqrt(den));
  Rational v = root * Rational(4 * c1.classNumber * c2.classNumber, c1.unitCount * c2.unitCount);
  v.canonicalize();
  return v;
}

// ---------------------------------------------------------------- logs

std::string LogAtom::toString() const {
  switch (kind) {
    case Prime: return "log " + std::to_string(p);
    case PrimeRatio: return "log|pi_" + std::to_string(p) + "/pi_" + std::to_string(p) + "'|";
    case Unit: return "log eps";
  }
  return "?";
}

void LogCombination::add(const LogAtom& atom, const FieldElement& coeff) {
  if (coeff.isZero()) return;
  auto it = terms_.find(atom);
  if (it == terms_.end()) {
    terms_.emplace(atom, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.isZero()) terms_.erase(it);
}

LogCombination& LogCombination::operator+=(const LogCombination& o) {
  for (const auto& [a, c] : o.terms_) add(a, c);
  return *this;
}

LogCombination LogCombination::scaled(const FieldElement& s) const {
  LogCombination r(D_);
  for (const auto& [a, c] : terms_) r.add(a, s * c);
  return r;
}

BigReal LogCombination::evaluate(const FieldData& F, Precision p) const {
  Precision w(p.bits + 32);
  BigReal sum(0L, w);
  for (const auto& [a, c] : terms_) {
    BigReal v;
    switch (a.kind) {
      case LogAtom::Prime: v = log(BigReal(a.p, w)); break;
      case LogAtom::PrimeRatio: {
        FieldElement pi = primeGenerator(F.primeIdeal(a.p, 0), F);
        v = log(abs(pi.embed(w))) - log(abs(pi.conj().embed(w)));
        break;
      }
      case LogAtom::Unit: v = log(F.epsilon.embed(w)); break;
    }
    sum += c.embed(w) * v;
  }
  return sum.rounded(p);
}

std::string LogCombination::toString() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : terms_) {
    if (!first) os << " + ";
    os << "(" << c.toString() << ")*" << a.toString();
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- predictions

FieldElement legendreAt(int r, const FieldElement& x) {
  Poly P = legendreP(r);
  FieldElement acc(x.D(), 0);
  for (int i = P.degree(); i >= 0; --i) acc = acc * x + FieldElement(x.D(), P.coeff(i));
  return acc;
}

namespace {

struct Context {
  FieldData F;
  FieldElement alpha;
  Rational lambda;
  Context(const Instance& inst)
      : F(inst.d1, inst.d2, inst.precision),
        alpha(inst.alpha ? *inst.alpha : defaultAlpha(F)),
        lambda(lambdaChi(inst.d1, inst.d2)) {
    if (inst.r < 0) throw ConfigurationError("instance: r must be nonnegative");
  }
};

std::vector<LambdaTerm> lambdaTerms(const Instance& inst, const Context& ctx, std::vector<std::string>& notes,
                                    bool& complete) {
  std::vector<LambdaTerm> out;
  for (const auto& [m, c] : inst.f.coeffs) {
    if (c == 0) continue;
    auto lambdas = traceEnumerate(m, ctx.F);
    if (lambdas.empty()) throw std::logic_error("trace enumeration returned no elements");
    Integer mr;
    mpz_ui_pow_ui(mr.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(inst.r));
    for (const auto& lam : lambdas) {
      LambdaTerm T;
      T.m = m;
      T.lambda = lam;
      FieldElement x = Rational(1, m) * (lam - lam.conj());
      T.weight = (c * Rational(mr)) * legendreAt(inst.r, x);
      try {
        WTildeResult w = wTilde(lam, ctx.alpha, ctx.F);
        T.diff = w.diff;
        T.wtilde = w.value;
        T.diffPrime = w.diffPrime;
        if (w.diff.size() % 2 == 0) throw std::logic_error("Diff set of even size");
        if (w.diff.size() > 1 && w.value != 0) throw std::logic_error("nonzero coefficient with |Diff| > 1");
      } catch (const UnsupportedLocalDatum& e) {
        complete = false;
        notes.push_back("lambda = " + lam.toString() + ": " + e.what());
      }
      out.push_back(std::move(T));
    }
  }
  return out;
}

}  // namespace

AveragePrediction predictAverage(const Instance& inst) {
  Context ctx(inst);
  AveragePrediction out;
  out.symbolic = LogCombination(ctx.F.D);
  out.terms = lambdaTerms(inst, ctx, out.notes, out.complete);
  const Rational scale = inst.globalConstant * inst.degree / ctx.lambda;
  for (const auto& T : out.terms) {
    if (T.wtilde == 0 || !T.diffPrime) continue;
    Rational k = scale * T.wtilde * T.diffPrime->residueDegree();
    out.symbolic.add({LogAtom::Prime, T.diffPrime->p}, k * T.weight);
  }
  out.value = out.symbolic.evaluate(ctx.F, inst.precision);
  return out;
}

namespace {

// log|gamma0| for gamma0 with the given valuations, up to units.
LogCombination logAbsGenerator(const std::map<PrimeIdeal, Rational>& vals, const Integer& D) {
  LogCombination L(D);
  for (const auto& [P, v] : vals) {
    if (v == 0) continue;
    FieldElement c(D, v);
    switch (P.type) {
      case SplitType::Split:
        // log|pi_P| = (log p +- log|pi/pi'|)/2
        L.add({LogAtom::Prime, P.p}, Rational(1, 2) * c);
        L.add({LogAtom::PrimeRatio, P.p}, Rational(P.branch == 0 ? 1 : -1, 2) * c);
        break;
      case SplitType::Inert: L.add({LogAtom::Prime, P.p}, c); break;
      case SplitType::Ramified: L.add({LogAtom::Prime, P.p}, Rational(1, 2) * c); break;
    }
  }
  return L;
}

}  // namespace

DifferencePrediction differenceFromLedger(const Instance& inst, std::vector<FactorPrediction> ledger) {
  Context ctx(inst);
  DifferencePrediction out;
  out.symbolic = LogCombination(ctx.F.D);
  const Rational scale = -inst.globalConstant * inst.degree / ctx.lambda;
  for (auto& fp : ledger) {
    fp.generator.reset();
    fp.generatorPower = 1;
    fp.unitShift = 0;
    bool any = false;
    for (const auto& [P, v] : fp.valuations) any = any || v != 0;
    if (!any) continue;
    Integer den = 1;
    for (const auto& [P, v] : fp.valuations) den = lcm(den, v.get_den());
    std::map<PrimeIdeal, long> ival;
    for (const auto& [P, v] : fp.valuations) ival[P] = Rational(v * Rational(den)).get_num().get_si();
    try {
      GeneratorResult g = generatorWithValuations(ival, ctx.F);
      fp.generator = g.gamma;
      fp.generatorPower = den.get_si();
      fp.unitShift = g.unitShift;
    } catch (const UnsupportedInstance& e) {
      out.complete = false;
      out.notes.push_back("lambda = " + fp.lambda.toString() + ": " + e.what());
    }
    out.symbolic += logAbsGenerator(fp.valuations, ctx.F.D).scaled(Rational(scale) * fp.weight);
  }
  out.ledger = std::move(ledger);
  out.value = out.symbolic.evaluate(ctx.F, inst.precision);
  Precision w(inst.precision.bits + 32);
  out.unitLog = log(ctx.F.epsilon.embed(w)).rounded(inst.precision);
  out.unitBasis = (pow(sqrt(BigReal(ctx.F.D, w)), inst.r) * log(ctx.F.epsilon.embed(w))).rounded(inst.precision);
  return out;
}

DifferencePrediction predictDifference(const Instance& inst) {
  Context ctx(inst);
  std::vector<std::string> notes;
  bool complete = true;
  auto terms = lambdaTerms(inst, ctx, notes, complete);
  std::vector<FactorPrediction> ledger;
  for (const auto& T : terms) {
    FactorPrediction fp;
    fp.m = T.m;
    fp.lambda = T.lambda;
    fp.diff = T.diff;
    fp.wtilde = T.wtilde;
    fp.weight = T.weight;
    if (T.wtilde != 0 && T.diffPrime && T.diffPrime->type == SplitType::Split) {
      fp.valuations[*T.diffPrime] = T.wtilde;
      fp.valuations[T.diffPrime->conjugate()] = -T.wtilde;
    }
    ledger.push_back(std::move(fp));
  }
  DifferencePrediction out = differenceFromLedger(inst, std::move(ledger));
  out.complete = out.complete && complete;
  out.notes.insert(out.notes.begin(), notes.begin(), notes.end());
  return out;
}

nlohmann::json ledgerToJson(const std::vector<FactorPrediction>& ledger) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& fp : ledger) {
    nlohmann::json j;
    j["m"] = fp.m;
    j["lambda"] = fp.lambda.toString();
    nlohmann::json diff = nlohmann::json::array();
    for (const auto& P : fp.diff) diff.push_back(P.label());
    j["diff"] = diff;
    j["wtilde"] = fp.wtilde.get_str();
    j["weight"] = fp.weight.toString();
    nlohmann::json vals = nlohmann::json::object();
    for (const auto& [P, v] : fp.valuations) vals[P.label()] = v.get_str();
    j["valuations"] = vals;
    j["generator"] = fp.generator ? nlohmann::json(fp.generator->toString()) : nlohmann::json(nullptr);
    if (fp.generatorPower != 1) j["generator_power"] = fp.generatorPower;
    j["unit_shift"] = fp.unitShift;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace greencm
