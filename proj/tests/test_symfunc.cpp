#include <doctest.h>

#include <algorithm>
#include <random>

#include "cstk/symfunc.hpp"

using namespace cstk;

namespace {

// ---- Numerical oracle: symmetric functions evaluated in finitely many
// variables, each basis computed from its own definition.

using Values = std::vector<Scalar>;

Scalar power(const Scalar& x, int k) {
  Scalar r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

Scalar eval_m(const Partition& mu, const Values& x) {
  if (mu.length() > static_cast<int>(x.size())) return 0;
  std::vector<int> e(mu.parts().begin(), mu.parts().end());
  e.resize(x.size(), 0);
  std::sort(e.begin(), e.end());
  Scalar total = 0;
  do {
    Scalar term = 1;
    for (std::size_t i = 0; i < x.size(); ++i) term *= power(x[i], e[i]);
    total += term;
  } while (std::next_permutation(e.begin(), e.end()));
  return total;
}

Scalar eval_p(int r, const Values& x) {
  Scalar s = 0;
  for (const auto& v : x) s += power(v, r);
  return s;
}

// Complete homogeneous h_r: sum over multisets, by recursion on the first variable.
Scalar eval_h(int r, const Values& x, std::size_t from = 0) {
  if (r == 0) return 1;
  if (from == x.size()) return 0;
  Scalar total = 0;
  for (int k = 0; k <= r; ++k) total += power(x[from], k) * eval_h(r - k, x, from + 1);
  return total;
}

Scalar eval_e(int r, const Values& x, std::size_t from = 0) {
  if (r == 0) return 1;
  if (from == x.size()) return 0;
  return x[from] * eval_e(r - 1, x, from + 1) + eval_e(r, x, from + 1);
}

Scalar det(std::vector<std::vector<Scalar>> a) {
  const std::size_t n = a.size();
  Scalar d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const Scalar f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

// Schur function as a ratio of alternants.
Scalar eval_s(const Partition& lam, const Values& x) {
  const std::size_t n = x.size();
  if (lam.length() > static_cast<int>(n)) return 0;
  std::vector<std::vector<Scalar>> num(n, std::vector<Scalar>(n));
  std::vector<std::vector<Scalar>> vdm(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      num[i][j] = power(x[i], lam.part(static_cast<int>(j) + 1) + static_cast<int>(n - 1 - j));
      vdm[i][j] = power(x[i], static_cast<int>(n - 1 - j));
    }
  }
  return det(num) / det(vdm);
}

Scalar eval_basis(Basis b, const Partition& lam, const Values& x) {
  Scalar r = 1;
  switch (b) {
    case Basis::m: return eval_m(lam, x);
    case Basis::s: return eval_s(lam, x);
    case Basis::p:
      for (int part : lam.parts()) r *= eval_p(part, x);
      return r;
    case Basis::h:
      for (int part : lam.parts()) r *= eval_h(part, x);
      return r;
    case Basis::e:
      for (int part : lam.parts()) r *= eval_e(part, x);
      return r;
  }
  return r;
}

Scalar eval_single(const SymFunc& f, const Values& x) {
  Scalar total = 0;
  for (const auto& [key, c] : f.terms()) total += eval(c, {}) * eval_m(key[0], x);
  return total;
}

// ---- Kostka numbers by enumerating semistandard tableaux.

long count_ssyt(const Partition& shape, std::vector<int> content) {
  const auto cells = shape.cells();
  std::vector<std::vector<int>> filling(shape.length());
  for (int i = 0; i < shape.length(); ++i) filling[i].assign(shape.part(i + 1), 0);
  const int letters = static_cast<int>(content.size());
  std::function<long(std::size_t)> place = [&](std::size_t idx) -> long {
    if (idx == cells.size()) return 1;
    const int r = cells[idx].row - 1;
    const int c = cells[idx].col - 1;
    long total = 0;
    for (int v = 1; v <= letters; ++v) {
      if (content[v - 1] == 0) continue;
      if (c > 0 && filling[r][c - 1] > v) continue;
      if (r > 0 && filling[r - 1][c] >= v) continue;
      filling[r][c] = v;
      --content[v - 1];
      total += place(idx + 1);
      ++content[v - 1];
    }
    filling[r][c] = 0;
    return total;
  };
  return place(0);
}

// Hall inner product computed in the power-sum basis.
RatFunc hall(const SymFunc& f, const SymFunc& g) {
  const auto fp = expand_in(Basis::p, f);
  const auto gp = expand_in(Basis::p, g);
  RatFunc total;
  for (const auto& [key, c] : fp) {
    auto it = gp.find(key);
    if (it == gp.end()) continue;
    Integer z = 1;
    for (const auto& part : key) z *= part.z_lambda();
    total += c * it->second * RatFunc(Scalar(z));
  }
  return total;
}

SymKey key1(const Partition& p) { return SymKey{p}; }

RatFunc rf(const std::string& s) { return parse_ratfunc(s); }

SymFunc random_element(std::mt19937& rng, int k, int bound, bool with_constant) {
  static const std::vector<std::string> coeffs{"1", "-2", "q", "t/(1-q)", "q*t-1", "3/2", "(q+t)/(q-t)"};
  std::uniform_int_distribution<std::size_t> pick(0, coeffs.size() - 1);
  std::uniform_int_distribution<int> size(0, bound);
  SymFunc f(k, bound);
  if (with_constant) f.add_term(SymKey(k), RatFunc(1));
  for (int i = 0; i < 4; ++i) {
    SymKey key;
    int total = 0;
    for (int a = 0; a < k; ++a) {
      const int n = size(rng);
      const auto& parts = partitions_of(n);
      key.push_back(parts[rng() % parts.size()]);
      total += n;
    }
    if (total == 0) continue;
    f.add_term(key, rf(coeffs[pick(rng)]));
  }
  return f;
}

}  // namespace

TEST_CASE("small products") {
  const auto m1 = basis_element(Basis::m, key1(Partition{1}), 3);
  const SymFunc sq = m1 * m1;
  CHECK(sq.coeff(key1(Partition{2})) == RatFunc(1));
  CHECK(sq.coeff(key1(Partition{1, 1})) == RatFunc(2));
  CHECK(sq.terms().size() == 2);
  // Products past the bound are truncated.
  const auto m2 = basis_element(Basis::m, key1(Partition{2}), 3);
  CHECK((m2 * m2).is_zero());
}

TEST_CASE("schur s_21 in monomials") {
  const auto s21 = basis_element(Basis::s, key1(Partition{2, 1}), 3);
  CHECK(s21.coeff(key1(Partition{2, 1})) == RatFunc(1));
  CHECK(s21.coeff(key1(Partition{1, 1, 1})) == RatFunc(2));
  CHECK(s21.coeff(key1(Partition{3})).is_zero());
}

TEST_CASE("every basis agrees with direct numerical evaluation") {
  const std::vector<Values> points{{Scalar(2), Scalar(-1, 3), Scalar(5), Scalar(1, 2), Scalar(-3)},
                                   {Scalar(1), Scalar(3), Scalar(-2, 5), Scalar(7), Scalar(4, 3)}};
  for (Basis b : {Basis::m, Basis::h, Basis::e, Basis::p, Basis::s}) {
    for (int n = 1; n <= 5; ++n) {
      for (const auto& lam : partitions_of(n)) {
        const SymFunc f = basis_element(b, key1(lam), n);
        for (const auto& x : points) {
          CHECK_MESSAGE(eval_single(f, x) == eval_basis(b, lam, x), basis_name(b) << lam.to_string());
        }
      }
    }
  }
}

TEST_CASE("schur coefficients are Kostka numbers") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& lam : partitions_of(n)) {
      const SymFunc s = basis_element(Basis::s, key1(lam), n);
      for (const auto& mu : partitions_of(n)) {
        const long k = count_ssyt(lam, std::vector<int>(mu.parts().begin(), mu.parts().end()));
        CHECK(s.coeff(key1(mu)) == RatFunc(k));
      }
    }
  }
}

TEST_CASE("monomials and complete functions are dual") {
  for (int n = 1; n <= 5; ++n) {
    for (const auto& lam : partitions_of(n)) {
      const auto m = basis_element(Basis::m, key1(lam), n);
      for (const auto& mu : partitions_of(n)) {
        const auto h = basis_element(Basis::h, key1(mu), n);
        CHECK(hall(m, h) == RatFunc(lam == mu ? 1 : 0));
        const auto s = basis_element(Basis::s, key1(mu), n);
        CHECK(hall(basis_element(Basis::s, key1(lam), n), s) == RatFunc(lam == mu ? 1 : 0));
      }
      CHECK(hall_pair_h(m, MultiPartition{lam}) == RatFunc(1));
    }
  }
}

TEST_CASE("transition matrices are mutually inverse") {
  for (Basis b : {Basis::h, Basis::e, Basis::p, Basis::s}) {
    for (int n = 0; n <= 6; ++n) {
      const auto& a = to_monomial_matrix(b, n);
      const auto& inv = from_monomial_matrix(b, n);
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
          Scalar s = 0;
          for (std::size_t l = 0; l < a.size(); ++l) s += a[i][l] * inv[l][j];
          CHECK(s == Scalar(i == j ? 1 : 0));
        }
      }
    }
  }
}

TEST_CASE("basis round trips over several alphabets") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = 1 + trial % 3;
    const SymFunc f = random_element(rng, k, 3, true);
    for (Basis b : {Basis::h, Basis::e, Basis::p, Basis::s}) {
      CHECK(from_basis(b, expand_in(b, f), k, 3) == f);
    }
  }
}

TEST_CASE("two-alphabet product factorizes") {
  // m_(1)(x1) * m_(1)(x2) is the single key (1)|(1).
  const auto a = basis_element(Basis::m, SymKey{Partition{1}, Partition{}}, 2);
  const auto b = basis_element(Basis::m, SymKey{Partition{}, Partition{1}}, 2);
  const SymFunc ab = a * b;
  CHECK(ab.terms().size() == 1);
  CHECK(ab.coeff(SymKey{Partition{1}, Partition{1}}) == RatFunc(1));
}

TEST_CASE("plethystic exponential of p_1 gives the complete functions") {
  const SymFunc p1 = basis_element(Basis::p, key1(Partition{1}), 4);
  const SymFunc e = ple_exp(p1).series();
  SymFunc expected = SymFunc::one(1, 4);
  for (int n = 1; n <= 4; ++n) expected += basis_element(Basis::h, key1(Partition{n}), 4);
  CHECK(e == expected);
}

TEST_CASE("Cauchy identity in two alphabets") {
  const int bound = 4;
  const SymFunc p11 = basis_element(Basis::p, SymKey{Partition{1}, Partition{1}}, bound);
  const SymFunc lhs = ple_exp(p11).series();
  SymFunc rhs = SymFunc::one(2, bound);
  for (int n = 1; n <= bound; ++n) {
    for (const auto& lam : partitions_of(n)) rhs += basis_element(Basis::s, SymKey{lam, lam}, bound);
  }
  CHECK(lhs == rhs);
}

TEST_CASE("plethysm acts on coefficients and power sums") {
  const SymFunc p1 = basis_element(Basis::p, key1(Partition{1}), 4);
  const RatFunc q = RatFunc::variable(Var::q);
  const SymFunc f = plethysm_pr(2, p1 * q);
  CHECK(f == basis_element(Basis::p, key1(Partition{2}), 4) * (q * q));
  CHECK(plethysm_pr(3, basis_element(Basis::p, key1(Partition{2}), 4)).is_zero());
  CHECK(plethysm_pr(1, p1) == p1);
  CHECK_THROWS_AS(plethysm_pr(0, p1), std::invalid_argument);
}

TEST_CASE("Exp and Log are mutually inverse") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    const int k = 1 + trial % 2;
    const SymFunc f = random_element(rng, k, 3, false);
    CHECK(ple_log(ple_exp(f)) == f);
    const SymFunc g = random_element(rng, k, 3, true);
    const SeriesOnePlus sg(g);
    CHECK(ple_exp(ple_log(sg)).series() == g);
  }
}

TEST_CASE("Log of a product is the sum of Logs") {
  std::mt19937 rng(17);
  const SymFunc a = random_element(rng, 1, 3, true);
  const SymFunc b = random_element(rng, 1, 3, true);
  CHECK(ple_log(SeriesOnePlus(a * b)) == ple_log(SeriesOnePlus(a)) + ple_log(SeriesOnePlus(b)));
}

TEST_CASE("series domain errors") {
  const SymFunc two = SymFunc::one(1, 2) * RatFunc(2);
  CHECK_THROWS_AS(SeriesOnePlus{two}, std::invalid_argument);
  CHECK_THROWS_AS(ple_exp(SymFunc::one(1, 2)), std::invalid_argument);
}

TEST_CASE("mobius function") {
  const std::vector<int> expected{1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
  for (int n = 1; n <= 12; ++n) CHECK(mobius(n) == expected[n - 1]);
  CHECK_THROWS_AS(mobius(0), std::invalid_argument);
}

TEST_CASE("terms respect the bound and the alphabet count") {
  SymFunc f(2, 2);
  CHECK_THROWS_AS(f.add_term(SymKey{Partition{3}, Partition{}}, RatFunc(1)), std::out_of_range);
  CHECK_THROWS_AS(f.add_term(SymKey{Partition{1}}, RatFunc(1)), std::invalid_argument);
  f.add_term(SymKey{Partition{1}, Partition{}}, RatFunc(1));
  f.add_term(SymKey{Partition{1}, Partition{}}, RatFunc(-1));
  CHECK(f.is_zero());
  CHECK_THROWS_AS(SymFunc(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(mul(SymFunc(1, 2), SymFunc(2, 2)), std::invalid_argument);
}

TEST_CASE("homogeneous parts and rebounding") {
  std::mt19937 rng(19);
  const SymFunc f = random_element(rng, 2, 3, true);
  SymFunc rebuilt(2, 3);
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) rebuilt += f.homogeneous_part({a, b});
  }
  CHECK(rebuilt == f);
  CHECK(f.with_bound(1).with_bound(3) == f.with_bound(1));
}

TEST_CASE("text form round trip") {
  std::mt19937 rng(23);
  const SymFunc f = random_element(rng, 2, 3, true);
  const std::string text = f.to_text();
  CHECK(SymFunc::from_text(text, 2, 3) == f);
  CHECK(SymFunc::from_text(text, 2, 3).to_text() == text);
  CHECK(parse_key("(2)|(1,1)") == SymKey{Partition{2}, Partition{1, 1}});
  CHECK_THROWS_AS(SymFunc::from_text("(1) 1\n", 1, 2), std::invalid_argument);
}
