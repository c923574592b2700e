#include <algorithm>
#include <cctype>

#include "cstk/exactalg.hpp"

namespace cstk {

namespace detail {
std::optional<MPoly> poly_divide(const MPoly& a, const MPoly& b, bool integral = false);
}  // namespace detail

namespace {

const Exponent kZeroExp{};

MPoly divide_or_throw(const MPoly& a, const MPoly& b) {
  auto q = detail::poly_divide(a, b);
  if (!q) throw ArithmeticError("internal: gcd does not divide operand");
  return *std::move(q);
}

}  // namespace

RatFunc::RatFunc(const MPoly& num, const MPoly& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw ArithmeticError("rational function with zero denominator");
  normalize();
}

// Moves monomial factors of the denominator into the numerator, cancels the
// polynomial gcd, and scales so the denominator is primitive over Z with a
// positive leading coefficient.
void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = MPoly(1);
    return;
  }
  const Exponent ed = den_.min_exponent();
  den_ = den_.shifted(kZeroExp - ed);
  num_ = num_.shifted(kZeroExp - ed);
  if (den_.is_constant()) {
    num_ *= Scalar(1) / den_.constant_term();
    den_ = MPoly(1);
    return;
  }
  const Exponent en = num_.min_exponent();
  MPoly n = num_.shifted(kZeroExp - en);
  const Scalar cn = content(n);
  const Scalar cd = content(den_);
  n *= Scalar(1) / cn;
  MPoly d = den_ * (Scalar(1) / cd);
  if (!n.is_constant()) {
    MPoly g = gcd(n, d);
    if (!g.is_constant()) {
      n = divide_or_throw(n, g);
      d = divide_or_throw(d, g);
    }
  }
  Scalar scale = cn / cd;
  if (sgn(d.leading_term().second) < 0) {
    d = -d;
    scale = -scale;
  }
  if (d.is_constant()) {
    scale /= d.constant_term();
    d = MPoly(1);
  }
  num_ = n.shifted(en) * scale;
  den_ = std::move(d);
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_constant()) normalize();
    else if (num_.is_zero()) den_ = MPoly(1);
    return *this;
  }
  const MPoly g = gcd(den_, o.den_);
  if (g.is_constant()) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  } else {
    const MPoly a = divide_or_throw(den_, g);
    const MPoly b = divide_or_throw(o.den_, g);
    num_ = num_ * b + o.num_ * a;
    den_ = a * o.den_;
  }
  normalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero() || o.is_zero()) return *this = RatFunc();
  if (is_polynomial() && o.is_polynomial()) {
    num_ *= o.num_;
    num_ *= den_.constant_term() * o.den_.constant_term();
    den_ = MPoly(1);
    return *this;
  }
  // Cross-cancel before multiplying; each pair is handled by normalize().
  RatFunc left(num_, o.den_);
  RatFunc right(o.num_, den_);
  num_ = left.num_ * right.num_;
  den_ = left.den_ * right.den_;
  // Both factors are reduced and their cross gcds are trivial, so only the
  // scalar normalization remains; it never needs a nontrivial gcd.
  if (sgn(den_.leading_term().second) < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  if (den_.is_constant()) {
    num_ *= Scalar(1) / den_.constant_term();
    den_ = MPoly(1);
  }
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) {
  if (o.is_zero()) throw ArithmeticError("division by zero rational function");
  return *this *= o.inverse();
}

RatFunc& RatFunc::operator*=(const Scalar& c) {
  if (sgn(c) == 0) return *this = RatFunc();
  num_ *= c;
  return *this;
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, Reduced{}); }

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw ArithmeticError("inverse of zero rational function");
  RatFunc r(den_, num_, Reduced{});
  // num/den are coprime; only monomial, content and sign need fixing.
  const Exponent ed = r.den_.min_exponent();
  r.den_ = r.den_.shifted(kZeroExp - ed);
  r.num_ = r.num_.shifted(kZeroExp - ed);
  const Scalar cd = content(r.den_);
  r.den_ *= Scalar(1) / cd;
  r.num_ *= Scalar(1) / cd;
  if (sgn(r.den_.leading_term().second) < 0) {
    r.den_ = -r.den_;
    r.num_ = -r.num_;
  }
  if (r.den_.is_constant()) {
    r.num_ *= Scalar(1) / r.den_.constant_term();
    r.den_ = MPoly(1);
  }
  return r;
}

RatFunc RatFunc::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  // Powers of coprime polynomials stay coprime; primitive stays primitive.
  return RatFunc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)),
                 Reduced{});
}

RatFunc RatFunc::power_map(int r) const {
  return RatFunc(num_.power_map(r), den_.power_map(r), Reduced{});
}

bool operator==(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::string RatFunc::to_string() const {
  if (den_ == MPoly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

std::string RatFunc::to_latex() const {
  if (den_ == MPoly(1)) return num_.to_latex();
  return "\\frac{" + num_.to_latex() + "}{" + den_.to_latex() + "}";
}

RatFunc sum(std::span<const RatFunc> terms) {
  std::vector<std::pair<MPoly, MPoly>> groups;  // (den, summed num)
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == t.den(); });
    if (it == groups.end()) {
      groups.emplace_back(t.den(), t.num());
    } else {
      it->second += t.num();
    }
  }
  RatFunc acc;
  for (auto& [den, num] : groups) {
    if (num.is_zero()) continue;
    acc += den.is_constant() ? RatFunc(num * (Scalar(1) / den.constant_term())) : RatFunc(num, den);
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

bool is_monomial_binding(const RatFunc& f) { return f.num().is_monomial() && f.den().is_constant(); }

RatFunc substitute_poly(const MPoly& p, const Bindings& bindings) {
  std::map<std::pair<Var, int>, RatFunc> cache;
  auto power_of = [&](Var v, int e) -> const RatFunc& {
    auto key = std::make_pair(v, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = bindings.find(v);
    RatFunc base = b == bindings.end() ? RatFunc::variable(v) : b->second;
    if (e < 0 && base.is_zero()) throw ArithmeticError("substitution makes a negative power vanish");
    return cache.emplace(key, base.pow(e)).first->second;
  };
  RatFunc acc;
  for (const auto& [e, c] : p.terms()) {
    RatFunc term(c);
    for (Var v : kAllVars) {
      const int x = e[static_cast<std::size_t>(v)];
      if (x != 0) term *= power_of(v, x);
    }
    acc += term;
  }
  return acc;
}

MPoly substitute_monomials(const MPoly& p, const Bindings& bindings) {
  std::vector<MPoly::Term> out;
  out.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    Exponent ne{};
    Scalar nc = c;
    for (Var v : kAllVars) {
      const auto i = static_cast<std::size_t>(v);
      const int x = e[i];
      if (x == 0) continue;
      auto b = bindings.find(v);
      if (b == bindings.end()) {
        ne[i] += x;
        continue;
      }
      const auto& [be, bc0] = b->second.num().leading_term();
      const Scalar bc = bc0 / b->second.den().constant_term();
      for (std::size_t j = 0; j < kNumVars; ++j) ne[j] += be[j] * x;
      Scalar f = 1;
      mpq_class base = x > 0 ? bc : Scalar(1) / bc;
      for (int k = 0; k < std::abs(x); ++k) f *= base;
      nc *= f;
    }
    out.emplace_back(ne, nc);
  }
  return MPoly::from_terms(std::move(out));
}

}  // namespace

RatFunc substitute(const RatFunc& f, const Bindings& bindings) {
  bool monomial = true;
  for (const auto& [v, b] : bindings) {
    if (b.is_zero() || !is_monomial_binding(b)) monomial = false;
  }
  if (monomial) {
    MPoly num = substitute_monomials(f.num(), bindings);
    MPoly den = substitute_monomials(f.den(), bindings);
    if (den.is_zero()) throw ArithmeticError("denominator vanishes after substitution: " + f.den().to_string());
    return RatFunc(num, den);
  }
  RatFunc num = substitute_poly(f.num(), bindings);
  RatFunc den = substitute_poly(f.den(), bindings);
  if (den.is_zero()) throw ArithmeticError("denominator vanishes after substitution: " + f.den().to_string());
  return num / den;
}

namespace {

Scalar eval_poly(const MPoly& p, const Point& point) {
  Scalar acc = 0;
  for (const auto& [e, c] : p.terms()) {
    Scalar term = c;
    for (Var v : kAllVars) {
      const int x = e[static_cast<std::size_t>(v)];
      if (x == 0) continue;
      auto it = point.find(v);
      if (it == point.end())
        throw std::invalid_argument(std::string("eval: variable ") + var_name(v) + " is unbound");
      if (x < 0 && sgn(it->second) == 0)
        throw ArithmeticError(std::string("eval: pole at ") + var_name(v) + " = 0");
      const Scalar base = x > 0 ? it->second : Scalar(1) / it->second;
      for (int k = 0; k < std::abs(x); ++k) term *= base;
    }
    acc += term;
  }
  return acc;
}

}  // namespace

Scalar eval(const RatFunc& f, const Point& point) {
  const Scalar d = eval_poly(f.den(), point);
  if (sgn(d) == 0) throw ArithmeticError("eval: pole, denominator " + f.den().to_string() + " vanishes");
  return eval_poly(f.num(), point) / d;
}

namespace {

std::optional<std::string> odd_u_witness(const MPoly& p) {
  const auto ui = static_cast<std::size_t>(Var::u);
  for (const auto& [e, c] : p.terms()) {
    if (e[ui] % 2 != 0) return MPoly::monomial(e, c).to_string();
  }
  return std::nullopt;
}

MPoly u_squared_to_q(const MPoly& p) {
  const auto ui = static_cast<std::size_t>(Var::u);
  const auto qi = static_cast<std::size_t>(Var::q);
  std::vector<MPoly::Term> out;
  out.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    Exponent ne = e;
    ne[qi] += e[ui] / 2;
    ne[ui] = 0;
    out.emplace_back(ne, c);
  }
  return MPoly::from_terms(std::move(out));
}

}  // namespace

QRewrite as_polynomial_in_q(const RatFunc& f) {
  QRewrite r;
  auto quotient = exact_divide(f.num(), f.den());
  if (!quotient) {
    r.witness = "denominator " + f.den().to_string();
    return r;
  }
  if (auto w = odd_u_witness(*quotient)) {
    r.witness = *w;
    return r;
  }
  r.poly = u_squared_to_q(*quotient);
  return r;
}

std::optional<RatFunc> rewrite_u_as_sqrt_q(const RatFunc& f) {
  if (odd_u_witness(f.num()) || odd_u_witness(f.den())) return std::nullopt;
  return RatFunc(u_squared_to_q(f.num()), u_squared_to_q(f.den()));
}

// ---------------------------------------------------------------------------
// Expression parser: sums, products, quotients, integer powers, parentheses.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + ": " + msg +
                                " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        RatFunc d = unary();
        if (d.is_zero()) fail("division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RatFunc unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (accept('^')) {
      const bool paren = accept('(');
      bool neg = accept('-');
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (paren && !accept(')')) fail("expected ')'");
      if (neg && base.is_zero()) fail("negative power of zero");
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatFunc(Scalar(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (auto v = var_from_name(c)) {
      ++pos_;
      return RatFunc::variable(*v);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text) { return Parser(text).parse(); }

}  // namespace cstk
