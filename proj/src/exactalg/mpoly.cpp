#include "cstk/exactalg.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>

namespace cstk {

char var_name(Var v) {
  static constexpr std::array<char, kNumVars> names{'z', 'w', 'q', 't', 'u'};
  return names[static_cast<std::size_t>(v)];
}

std::optional<Var> var_from_name(char c) {
  for (Var v : kAllVars) {
    if (var_name(v) == c) return v;
  }
  return std::nullopt;
}

Exponent operator+(const Exponent& a, const Exponent& b) {
  Exponent r{};
  for (std::size_t i = 0; i < kNumVars; ++i) r[i] = a[i] + b[i];
  return r;
}

Exponent operator-(const Exponent& a, const Exponent& b) {
  Exponent r{};
  for (std::size_t i = 0; i < kNumVars; ++i) r[i] = a[i] - b[i];
  return r;
}

namespace {

bool is_zero_exponent(const Exponent& e) {
  return std::all_of(e.begin(), e.end(), [](std::int32_t x) { return x == 0; });
}

// Merge two descending-sorted term lists; `sign` multiplies the second.
std::vector<MPoly::Term> merge_terms(std::span<const MPoly::Term> a, std::span<const MPoly::Term> b,
                                     int sign) {
  std::vector<MPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first > b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first > a[i].first) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : Scalar(-b[j].second));
      ++j;
    } else {
      Scalar c = sign > 0 ? Scalar(a[i].second + b[j].second) : Scalar(a[i].second - b[j].second);
      if (sgn(c) != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MPoly::MPoly(int c) {
  if (c != 0) terms_.emplace_back(Exponent{}, Scalar(c));
}

MPoly::MPoly(const Scalar& c) {
  if (sgn(c) != 0) terms_.emplace_back(Exponent{}, c);
}

MPoly MPoly::variable(Var v, int power) {
  Exponent e{};
  e[static_cast<std::size_t>(v)] = power;
  return monomial(e, 1);
}

MPoly MPoly::monomial(const Exponent& e, const Scalar& c) {
  MPoly p;
  if (sgn(c) != 0) p.terms_.emplace_back(e, c);
  return p;
}

MPoly MPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first > b.first; });
  MPoly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && sgn(p.terms_.back().second) == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && sgn(p.terms_.back().second) == 0) p.terms_.pop_back();
  return p;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && is_zero_exponent(terms_[0].first));
}

Scalar MPoly::constant_term() const {
  // The zero exponent sorts after every nonnegative one, so scan.
  for (const auto& [e, c] : terms_) {
    if (is_zero_exponent(e)) return c;
  }
  return 0;
}

int MPoly::degree(Var v) const {
  const auto i = static_cast<std::size_t>(v);
  int d = 0;
  bool first = true;
  for (const auto& t : terms_) {
    if (first || t.first[i] > d) d = t.first[i];
    first = false;
  }
  return d;
}

int MPoly::min_degree(Var v) const {
  const auto i = static_cast<std::size_t>(v);
  int d = 0;
  bool first = true;
  for (const auto& t : terms_) {
    if (first || t.first[i] < d) d = t.first[i];
    first = false;
  }
  return d;
}

Exponent MPoly::min_exponent() const {
  Exponent m{};
  if (terms_.empty()) return m;
  m = terms_.front().first;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < kNumVars; ++i) m[i] = std::min(m[i], t.first[i]);
  }
  return m;
}

bool MPoly::involves(Var v) const {
  const auto i = static_cast<std::size_t>(v);
  return std::any_of(terms_.begin(), terms_.end(), [i](const Term& t) { return t.first[i] != 0; });
}

bool MPoly::has_negative_exponents() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return std::any_of(t.first.begin(), t.first.end(), [](std::int32_t x) { return x < 0; });
  });
}

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = merge_terms(terms_, o.terms_, 1);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    const MPoly& mono = a.terms_.size() == 1 ? a : b;
    const MPoly& other = a.terms_.size() == 1 ? b : a;
    const auto& [e, c] = mono.terms_.front();
    MPoly r;
    r.terms_.reserve(other.terms_.size());
    // Monomial multiplication preserves the term order.
    for (const auto& t : other.terms_) r.terms_.emplace_back(t.first + e, t.second * c);
    return r;
  }
  std::vector<MPoly::Term> prods;
  prods.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) prods.emplace_back(x.first + y.first, x.second * y.second);
  }
  return MPoly::from_terms(std::move(prods));
}

MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly& MPoly::operator*=(const Scalar& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MPoly MPoly::shifted(const Exponent& e) const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.first = t.first + e;
  return r;
}

MPoly MPoly::power_map(int r) const {
  if (r <= 0) throw std::invalid_argument("power_map: exponent must be positive");
  MPoly p = *this;
  for (auto& t : p.terms_) {
    for (auto& x : t.first) x *= r;
  }
  return p;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result(1);
  MPoly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

namespace {

std::string monomial_text(const Exponent& e, bool latex) {
  std::string out;
  for (Var v : kAllVars) {
    const int x = e[static_cast<std::size_t>(v)];
    if (x == 0) continue;
    if (!out.empty()) out += latex ? " " : "*";
    out += var_name(v);
    if (x != 1) {
      out += latex ? "^{" + std::to_string(x) + "}" : "^" + std::to_string(x);
    }
  }
  return out;
}

std::string scalar_latex(const Scalar& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return "\\frac{" + c.get_num().get_str() + "}{" + c.get_den().get_str() + "}";
}

std::string poly_text(std::span<const MPoly::Term> terms, bool latex) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool neg = sgn(c) < 0;
    const Scalar mag = abs(c);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    const std::string mono = monomial_text(e, latex);
    if (mono.empty()) {
      out += latex ? scalar_latex(mag) : mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += latex ? scalar_latex(mag) + " " + mono : mag.get_str() + "*" + mono;
    }
  }
  return out;
}

}  // namespace

std::string MPoly::to_string() const { return poly_text(terms_, false); }
std::string MPoly::to_latex() const { return poly_text(terms_, true); }

Scalar content(const MPoly& p) {
  if (p.is_zero()) return 1;
  Integer num = 0;
  Integer den = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.second.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.second.get_den_mpz_t());
  }
  Scalar c(num, den);
  c.canonicalize();
  return c;
}

namespace detail {

// Division in the polynomial ring (no monomial units). Exponent bounds on
// the quotient keep the loop finite when b does not divide a. Quotient terms
// come out in decreasing order and are final, so `integral` can stop at the
// first non-integer coefficient.
std::optional<MPoly> poly_divide(const MPoly& a, const MPoly& b, bool integral) {
  if (b.is_zero()) throw ArithmeticError("division by zero polynomial");
  if (a.is_zero()) return MPoly{};
  Exponent hi{};
  Exponent lo{};
  for (Var v : kAllVars) {
    const auto i = static_cast<std::size_t>(v);
    hi[i] = a.degree(v) - b.degree(v);
    lo[i] = a.min_degree(v) - b.min_degree(v);
    if (hi[i] < lo[i] || lo[i] < 0) return std::nullopt;
  }
  std::map<Exponent, Scalar, std::greater<>> rem;
  for (const auto& [e, c] : a.terms()) rem.emplace_hint(rem.end(), e, c);
  std::vector<MPoly::Term> quot;
  const auto& [lead_e, lead_c] = b.leading_term();
  const auto tail = b.terms().subspan(1);
  while (!rem.empty()) {
    const auto lead = rem.begin();
    Exponent qe = lead->first - lead_e;
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (qe[i] < lo[i] || qe[i] > hi[i]) return std::nullopt;
    }
    Scalar qc = lead->second / lead_c;
    if (integral && qc.get_den() != 1) return std::nullopt;
    rem.erase(lead);
    for (const auto& [e, c] : tail) {
      auto [it, fresh] = rem.try_emplace(qe + e);
      it->second -= qc * c;
      if (!fresh && sgn(it->second) == 0) rem.erase(it);
    }
    quot.emplace_back(qe, std::move(qc));
  }
  return MPoly::from_terms(std::move(quot));
}

}  // namespace detail

std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) throw ArithmeticError("division by zero polynomial");
  if (a.is_zero()) return MPoly{};
  const Exponent ea = a.min_exponent();
  const Exponent eb = b.min_exponent();
  const Exponent zero{};
  auto q = detail::poly_divide(a.shifted(zero - ea), b.shifted(zero - eb), false);
  if (!q) return std::nullopt;
  return q->shifted(ea - eb);
}

// ---------------------------------------------------------------------------
// Heuristic gcd (Char, Geddes and Gonnet) for integer polynomials with
// nonnegative exponents: evaluate one variable at a large integer, recurse,
// and lift the result back by balanced radix expansion. A candidate is only
// accepted after trial division, so a returned gcd is always correct.

namespace {

std::atomic<std::uint64_t> g_gcd_fallbacks{0};

struct HeuGcd {
  MPoly h, cff, cfg;
};

constexpr int kHeuTries = 8;

Integer integer_coeff(const Scalar& c) { return c.get_num(); }

Integer max_norm(const MPoly& p) {
  Integer m = 0;
  for (const auto& t : p.terms()) {
    Integer a = abs(t.second.get_num());
    if (a > m) m = a;
  }
  return m;
}

std::optional<Var> main_variable(const MPoly& f, const MPoly& g) {
  for (auto it = kAllVars.rbegin(); it != kAllVars.rend(); ++it) {
    if (f.involves(*it) || g.involves(*it)) return *it;
  }
  return std::nullopt;
}

MPoly evaluate_at(const MPoly& p, Var v, const Integer& x) {
  const auto i = static_cast<std::size_t>(v);
  std::vector<Integer> powers{1};
  std::vector<MPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    const auto k = static_cast<std::size_t>(e[i]);
    while (powers.size() <= k) powers.push_back(powers.back() * x);
    Exponent e2 = e;
    e2[i] = 0;
    terms.emplace_back(e2, c * Scalar(powers[k]));
  }
  return MPoly::from_terms(std::move(terms));
}

// Balanced x-adic expansion of the coefficients of h as a polynomial in v.
MPoly interpolate(MPoly h, Var v, const Integer& x) {
  const auto vi = static_cast<std::size_t>(v);
  std::vector<MPoly::Term> out;
  const Integer half = x / 2;
  int power = 0;
  while (!h.is_zero()) {
    std::vector<MPoly::Term> digit;
    for (const auto& [e, c] : h.terms()) {
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_num_mpz_t(), x.get_mpz_t());
      if (r > half) r -= x;
      if (r != 0) digit.emplace_back(e, Scalar(r));
    }
    MPoly g = MPoly::from_terms(digit);
    for (const auto& [e, c] : g.terms()) {
      Exponent e2 = e;
      e2[vi] = power;
      out.emplace_back(e2, c);
    }
    h -= g;
    h *= Scalar(1) / Scalar(x);
    ++power;
  }
  MPoly r = MPoly::from_terms(std::move(out));
  if (!r.is_zero() && sgn(r.leading_term().second) < 0) r = -r;
  return r;
}

MPoly primitive_part(const MPoly& p) {
  if (p.is_zero()) return p;
  MPoly r = p * (Scalar(1) / content(p));
  if (sgn(r.leading_term().second) < 0) r = -r;
  return r;
}

// Division in Z[x]: fails unless the quotient has integer coefficients.
std::optional<MPoly> int_divide(const MPoly& a, const MPoly& b) { return detail::poly_divide(a, b, true); }

std::optional<HeuGcd> heu_gcd(const MPoly& f, const MPoly& g) {
  if (f.is_zero() && g.is_zero()) return HeuGcd{MPoly{}, MPoly{}, MPoly{}};
  if (f.is_zero()) {
    const int s = sgn(g.leading_term().second);
    return HeuGcd{g * Scalar(s), MPoly{}, MPoly(s)};
  }
  if (g.is_zero()) {
    const int s = sgn(f.leading_term().second);
    return HeuGcd{f * Scalar(s), MPoly(s), MPoly{}};
  }
  const auto var = main_variable(f, g);
  if (!var) {
    Integer a = integer_coeff(f.constant_term());
    Integer b = integer_coeff(g.constant_term());
    Integer h;
    mpz_gcd(h.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return HeuGcd{MPoly(Scalar(h)), MPoly(Scalar(a / h)), MPoly(Scalar(b / h))};
  }

  const Scalar cf = content(f);
  const Scalar cg = content(g);
  Integer common;
  mpz_gcd(common.get_mpz_t(), cf.get_num_mpz_t(), cg.get_num_mpz_t());
  const MPoly fp = f * (Scalar(1) / Scalar(common));
  const MPoly gp = g * (Scalar(1) / Scalar(common));

  const Integer fn = max_norm(fp);
  const Integer gn = max_norm(gp);
  const Integer bound = 2 * std::min(fn, gn) + 29;
  Integer sq = sqrt(bound);
  Integer x = std::min(bound, Integer(99 * sq));
  const Integer lcf = abs(fp.leading_term().second.get_num());
  const Integer lcg = abs(gp.leading_term().second.get_num());
  x = std::max(x, Integer(2 * std::min(Integer(fn / lcf), Integer(gn / lcg)) + 4));

  for (int attempt = 0; attempt < kHeuTries; ++attempt) {
    const MPoly ff = evaluate_at(fp, *var, x);
    const MPoly gg = evaluate_at(gp, *var, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      if (auto rec = heu_gcd(ff, gg)) {
        MPoly h = primitive_part(interpolate(rec->h, *var, x));
        if (!h.is_zero()) {
          if (auto cff = int_divide(fp, h)) {
            if (auto cfg = int_divide(gp, h)) {
              return HeuGcd{h * Scalar(common), *cff, *cfg};
            }
          }
        }
        MPoly cff = interpolate(rec->cff, *var, x);
        if (!cff.is_zero()) {
          if (auto h2 = int_divide(fp, cff)) {
            if (auto cfg = int_divide(gp, *h2)) {
              return HeuGcd{*h2 * Scalar(common), cff, *cfg};
            }
          }
        }
        MPoly cfg = interpolate(rec->cfg, *var, x);
        if (!cfg.is_zero()) {
          if (auto h3 = int_divide(gp, cfg)) {
            if (auto cff2 = int_divide(fp, *h3)) {
              return HeuGcd{*h3 * Scalar(common), *cff2, cfg};
            }
          }
        }
      }
    }
    Integer s4 = sqrt(sqrt(x));
    x = 73794 * x * s4 / 27011;
  }
  return std::nullopt;
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  if (a.has_negative_exponents() || b.has_negative_exponents()) {
    throw std::invalid_argument("gcd: Laurent input; shift to a polynomial first");
  }
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  if (a.is_monomial() && b.is_monomial()) {
    Exponent e{};
    for (std::size_t i = 0; i < kNumVars; ++i)
      e[i] = std::min(a.leading_term().first[i], b.leading_term().first[i]);
    return MPoly::monomial(e, 1);
  }
  if (a.is_constant() || b.is_constant()) return MPoly(1);
  auto r = heu_gcd(primitive_part(a), primitive_part(b));
  if (!r) {
    g_gcd_fallbacks.fetch_add(1, std::memory_order_relaxed);
    return MPoly(1);
  }
  return primitive_part(r->h);
}

std::uint64_t gcd_fallback_count() { return g_gcd_fallbacks.load(std::memory_order_relaxed); }

}  // namespace cstk
