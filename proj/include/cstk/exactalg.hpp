#pragma once

// Exact multivariate Laurent polynomials and rational functions over Q in the
// fixed variable set (z, w, q, t, u). By convention q = u^2, so u stands in
// for sqrt(q) and no fractional exponent ever appears.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cstk {

using Scalar = mpq_class;
using Integer = mpz_class;

enum class Var : std::uint8_t { z = 0, w = 1, q = 2, t = 3, u = 4 };

inline constexpr std::size_t kNumVars = 5;
inline constexpr std::array<Var, kNumVars> kAllVars{Var::z, Var::w, Var::q, Var::t, Var::u};

/// Printable name of a variable ("z", "w", ...).
char var_name(Var v);
std::optional<Var> var_from_name(char c);

using Exponent = std::array<std::int32_t, kNumVars>;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sparse Laurent polynomial. Terms are kept sorted by exponent vector in
/// strictly decreasing lexicographic order (z > w > q > t > u); no stored
/// coefficient is zero.
class MPoly {
 public:
  using Term = std::pair<Exponent, Scalar>;

  MPoly() = default;
  MPoly(int c);  // NOLINT(google-explicit-constructor)
  MPoly(const Scalar& c);  // NOLINT(google-explicit-constructor)

  static MPoly variable(Var v, int power = 1);
  static MPoly monomial(const Exponent& e, const Scalar& c);
  /// Builds from unsorted terms, combining duplicates and dropping zeros.
  static MPoly from_terms(std::vector<Term> terms);

  [[nodiscard]] std::span<const Term> terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }
  /// Constant coefficient; zero when absent.
  [[nodiscard]] Scalar constant_term() const;
  [[nodiscard]] const Term& leading_term() const { return terms_.front(); }

  [[nodiscard]] int degree(Var v) const;
  [[nodiscard]] int min_degree(Var v) const;
  /// Componentwise minimum exponent over all terms (zero polynomial: all 0).
  [[nodiscard]] Exponent min_exponent() const;
  [[nodiscard]] bool involves(Var v) const;
  [[nodiscard]] bool has_negative_exponents() const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly& operator*=(const Scalar& c);

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const Scalar& c) { return a *= c; }
  friend MPoly operator*(const Scalar& c, MPoly a) { return a *= c; }
  MPoly operator-() const;

  friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }

  /// Product with the monomial x^e.
  [[nodiscard]] MPoly shifted(const Exponent& e) const;
  /// Replaces every variable by its r-th power (exponents scaled by r).
  [[nodiscard]] MPoly power_map(int r) const;
  [[nodiscard]] MPoly pow(unsigned e) const;

  /// Canonical text: terms in decreasing lex order, e.g. "z^2 - 3/2*z*w^-1 + 1".
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::string to_latex() const;

 private:
  std::vector<Term> terms_;
};

Exponent operator+(const Exponent& a, const Exponent& b);
Exponent operator-(const Exponent& a, const Exponent& b);

/// Exact quotient a / b in the Laurent ring, or nullopt when b does not divide a.
std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b);

/// gcd of integer content of the coefficients as a positive rational c such
/// that p / c has coprime integer coefficients. Zero polynomial gives 1.
Scalar content(const MPoly& p);

/// Greatest common divisor of two polynomials (nonnegative exponents), made
/// primitive with a positive leading coefficient. gcd(0, 0) = 0.
MPoly gcd(const MPoly& a, const MPoly& b);

/// Number of gcd computations that fell back to the trivial divisor because
/// the heuristic evaluation scheme did not converge.
std::uint64_t gcd_fallback_count();

/// Field element of Q(z, w, q, t, u).
///
/// Stored in a reduced form: the denominator is a primitive integer
/// polynomial with no monomial factor and positive leading coefficient, and
/// gcd(num, den) = 1. Equality is nevertheless decided by cross-multiplication
/// so it does not depend on the reduction succeeding.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(int c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const Scalar& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(MPoly p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const MPoly& num, const MPoly& den);

  static RatFunc variable(Var v, int power = 1) { return RatFunc(MPoly::variable(v, power)); }

  [[nodiscard]] const MPoly& num() const { return num_; }
  [[nodiscard]] const MPoly& den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
  [[nodiscard]] bool is_polynomial() const { return den_.is_constant(); }
  [[nodiscard]] bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  [[nodiscard]] bool involves(Var v) const { return num_.involves(v) || den_.involves(v); }

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  RatFunc& operator*=(const Scalar& c);

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend RatFunc operator*(RatFunc a, const Scalar& c) { return a *= c; }
  friend RatFunc operator*(const Scalar& c, RatFunc a) { return a *= c; }
  RatFunc operator-() const;

  [[nodiscard]] RatFunc inverse() const;
  [[nodiscard]] RatFunc pow(int e) const;
  /// Every variable raised to the r-th power; rational constants fixed.
  [[nodiscard]] RatFunc power_map(int r) const;

  friend bool operator==(const RatFunc& a, const RatFunc& b);

  /// "num" when the denominator is 1, else "(num)/(den)".
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::string to_latex() const;

 private:
  struct Reduced {};
  RatFunc(MPoly num, MPoly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  MPoly num_;
  MPoly den_;
};

/// Sum of many terms; terms sharing a denominator are added as polynomials
/// first, so only distinct denominators pay for a gcd.
RatFunc sum(std::span<const RatFunc> terms);

using Bindings = std::map<Var, RatFunc>;
using Point = std::map<Var, Scalar>;

/// Simultaneous substitution; unbound variables map to themselves.
/// Throws ArithmeticError if the substituted denominator vanishes.
RatFunc substitute(const RatFunc& f, const Bindings& bindings);

/// Exact value at a point. Every variable occurring in f must be bound.
/// Throws ArithmeticError at a pole or for an unbound variable.
Scalar eval(const RatFunc& f, const Point& point);

struct QRewrite {
  std::optional<MPoly> poly;  // set on success: u^2 rewritten as q
  std::string witness;         // offending monomial or denominator on failure
};

/// Succeeds iff f is a (Laurent) polynomial whose u-exponents are all even.
QRewrite as_polynomial_in_q(const RatFunc& f);

/// Rewrites u^2 -> q in numerator and denominator of the reduced form.
/// Returns nullopt if an odd power of u survives reduction.
std::optional<RatFunc> rewrite_u_as_sqrt_q(const RatFunc& f);

/// Parses the canonical text form (and general +, -, *, /, ^, parentheses
/// expressions over z, w, q, t, u and rational literals).
RatFunc parse_ratfunc(std::string_view text);

}  // namespace cstk
