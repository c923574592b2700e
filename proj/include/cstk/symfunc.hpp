#pragma once

// The ring of functions separately symmetric in k alphabets x_1..x_k,
// truncated at total degree N in each alphabet, with coefficients in
// Q(z, w, q, t, u). Elements are stored in the monomial basis
//   m_{mu} = m_{mu_1}(x_1) ... m_{mu_k}(x_k);
// the power-sum basis is used transiently for products and plethysm.
//
// Plethysm follows the lambda-ring convention in which z, w, q, t, u are
// rank-one elements: p_r[z] = z^r. Rational constants are fixed.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cstk/exactalg.hpp"
#include "cstk/partitions.hpp"

namespace cstk {

enum class Basis { m, h, e, p, s };

std::string basis_name(Basis b);

/// One partition per alphabet; sizes may differ between alphabets.
using SymKey = std::vector<Partition>;

std::string key_to_string(const SymKey& key);
SymKey parse_key(std::string_view text);

class SymFunc {
 public:
  using TermMap = std::map<SymKey, RatFunc>;

  /// Zero element with `alphabets` alphabets and per-alphabet degree bound.
  SymFunc(int alphabets, int degree_bound);

  static SymFunc one(int alphabets, int degree_bound);

  [[nodiscard]] int alphabets() const { return k_; }
  [[nodiscard]] int degree_bound() const { return bound_; }
  /// Monomial-basis coefficients; never holds zero.
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] RatFunc coeff(const SymKey& key) const;
  [[nodiscard]] RatFunc constant_term() const;

  /// Adds c * m_key. Throws std::out_of_range when the key exceeds the
  /// degree bound and std::invalid_argument on an alphabet-count mismatch.
  void add_term(const SymKey& key, const RatFunc& c);

  /// Same element with another degree bound (terms above it are dropped).
  [[nodiscard]] SymFunc with_bound(int degree_bound) const;
  /// Part whose key has exactly these per-alphabet sizes.
  [[nodiscard]] SymFunc homogeneous_part(const std::vector<int>& sizes) const;
  [[nodiscard]] SymFunc map_coefficients(const std::function<RatFunc(const RatFunc&)>& fn) const;

  SymFunc& operator+=(const SymFunc& o);
  SymFunc& operator-=(const SymFunc& o);
  SymFunc& operator*=(const RatFunc& c);
  friend SymFunc operator+(SymFunc a, const SymFunc& b) { return a += b; }
  friend SymFunc operator-(SymFunc a, const SymFunc& b) { return a -= b; }
  friend SymFunc operator*(SymFunc a, const RatFunc& c) { return a *= c; }
  friend SymFunc operator*(const RatFunc& c, SymFunc a) { return a *= c; }
  friend SymFunc operator*(const SymFunc& a, const SymFunc& b);
  SymFunc operator-() const;

  friend bool operator==(const SymFunc& a, const SymFunc& b);

  /// One line per key, sorted: "(2)|(1,1) : <coefficient>".
  [[nodiscard]] std::string to_text() const;
  static SymFunc from_text(std::string_view text, int alphabets, int degree_bound);

 private:
  void check_key(const SymKey& key) const;

  int k_;
  int bound_;
  TermMap terms_;
};

/// Basis element b_{key} expanded in the monomial basis.
SymFunc basis_element(Basis b, const SymKey& key, int degree_bound);
SymFunc basis_element(Basis b, const MultiPartition& mu, int degree_bound);

/// Product truncated at the common degree bound (operands must agree on k and N).
SymFunc mul(const SymFunc& f, const SymFunc& g);

/// <f, h_mu> under the Hall form: the coefficient of m_mu in f.
RatFunc hall_pair_h(const SymFunc& f, const MultiPartition& mu);

/// p_r composed with f. Terms whose degree exceeds the bound are dropped.
SymFunc plethysm_pr(int r, const SymFunc& f);

/// Coefficients of f in another basis, keyed by multipartition key.
SymFunc::TermMap expand_in(Basis b, const SymFunc& f);
/// Inverse of expand_in: builds the element sum_key c_key * b_key.
SymFunc from_basis(Basis b, const SymFunc::TermMap& coeffs, int alphabets, int degree_bound);

/// A series with constant term exactly 1 (the domain of the plethystic log).
class SeriesOnePlus {
 public:
  /// Throws std::invalid_argument unless the constant term is 1.
  explicit SeriesOnePlus(SymFunc f);
  [[nodiscard]] const SymFunc& series() const { return f_; }

 private:
  SymFunc f_;
};

/// Plethystic exponential exp(sum_{r>=1} p_r[f] / r); f must have zero constant term.
SeriesOnePlus ple_exp(const SymFunc& f);

/// Plethystic logarithm: sum_{r>=1} mobius(r)/r * p_r[log(omega)].
SymFunc ple_log(const SeriesOnePlus& omega);

int mobius(int n);

// Single-alphabet transition matrices, indexed in the order of partitions_of(n).
using QMatrix = std::vector<std::vector<Scalar>>;

/// Row i holds b_{lambda_i} in the monomial basis.
const QMatrix& to_monomial_matrix(Basis b, int n);
/// Row i holds m_{lambda_i} in basis b.
const QMatrix& from_monomial_matrix(Basis b, int n);

/// Position of lambda in partitions_of(|lambda|).
std::size_t partition_index(const Partition& lambda);

namespace detail {

/// Element written in the power-sum basis; used for products, plethysm and
/// the Exp/Log series.
struct PowerSumForm {
  int k;
  int bound;
  SymFunc::TermMap terms;

  PowerSumForm(int alphabets, int degree_bound) : k(alphabets), bound(degree_bound) {}
  [[nodiscard]] bool is_zero() const { return terms.empty(); }
  void add(const SymKey& key, const RatFunc& c);
  [[nodiscard]] PowerSumForm times(const PowerSumForm& o) const;
  [[nodiscard]] PowerSumForm plethysm(int r) const;
  [[nodiscard]] PowerSumForm scaled(const Scalar& c) const;
  PowerSumForm& operator+=(const PowerSumForm& o);
};

PowerSumForm to_power_sums(const SymFunc& f);
SymFunc from_power_sums(const PowerSumForm& f);

}  // namespace detail

}  // namespace cstk
