#include "cstk/symfunc.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

namespace cstk {

std::string basis_name(Basis b) {
  switch (b) {
    case Basis::m: return "m";
    case Basis::h: return "h";
    case Basis::e: return "e";
    case Basis::p: return "p";
    case Basis::s: return "s";
  }
  return "?";
}

std::string key_to_string(const SymKey& key) {
  std::string s;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i > 0) s += "|";
    s += key[i].to_string();
  }
  return s;
}

SymKey parse_key(std::string_view text) {
  SymKey key;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t sep = text.find('|', pos);
    key.push_back(parse_partition(text.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos)));
    if (sep == std::string_view::npos) break;
    pos = sep + 1;
  }
  return key;
}

std::size_t partition_index(const Partition& lambda) {
  const auto& all = partitions_of(lambda.size());
  // partitions_of is sorted in decreasing lexicographic order.
  auto it = std::lower_bound(all.begin(), all.end(), lambda, std::greater<>());
  if (it == all.end() || *it != lambda) throw std::logic_error("partition_index: not found");
  return static_cast<std::size_t>(it - all.begin());
}

int mobius(int n) {
  if (n < 1) throw std::invalid_argument("mobius: argument must be positive");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      result = -result;
    }
  }
  if (n > 1) result = -result;
  return result;
}

// ---------------------------------------------------------------------------
// Transition matrices.

namespace {

using QRow = std::vector<Scalar>;

// Number of ways to place the parts of lambda into ordered bins with sums mu:
// the coefficient of m_mu in p_lambda.
long count_placements(std::span<const int> parts, std::size_t next, std::vector<int>& room) {
  if (next == parts.size()) {
    return std::all_of(room.begin(), room.end(), [](int r) { return r == 0; }) ? 1 : 0;
  }
  long total = 0;
  for (auto& r : room) {
    if (r >= parts[next]) {
      r -= parts[next];
      total += count_placements(parts, next + 1, room);
      r += parts[next];
    }
  }
  return total;
}

QMatrix invert(const QMatrix& a) {
  const std::size_t n = a.size();
  QMatrix m = a;
  QMatrix inv(n, QRow(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(m[piv][col]) == 0) ++piv;
    if (piv == n) throw std::logic_error("singular transition matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    const Scalar d = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(m[i][col]) == 0) continue;
      const Scalar f = m[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// Rational-coefficient single-alphabet element in the power-sum basis.
using QPowerSum = std::map<Partition, Scalar>;

QPowerSum qp_mul(const QPowerSum& a, const QPowerSum& b) {
  QPowerSum out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) out[ka.merged(kb)] += ca * cb;
  }
  std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
  return out;
}

// h_n (sign = false) or e_n (sign = true) in power sums.
QPowerSum qp_complete_or_elementary(int n, bool elementary) {
  QPowerSum out;
  if (n == 0) {
    out[Partition()] = 1;
    return out;
  }
  for (const auto& rho : partitions_of(n)) {
    Scalar c(Integer(1), rho.z_lambda());
    if (elementary && (n - rho.length()) % 2 != 0) c = -c;
    out[rho] = c;
  }
  return out;
}

QRow qp_to_monomial_row(const QPowerSum& f, int n, const QMatrix& p2m) {
  QRow row(partitions_of(n).size(), Scalar(0));
  for (const auto& [rho, c] : f) {
    const auto& pr = p2m[partition_index(rho)];
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += c * pr[j];
  }
  return row;
}

struct TransitionCache {
  std::recursive_mutex mu;
  std::map<std::pair<Basis, int>, QMatrix> to_m;
  std::map<std::pair<Basis, int>, QMatrix> from_m;
};

TransitionCache& transition_cache() {
  static TransitionCache cache;
  return cache;
}

QMatrix build_to_monomial(Basis b, int n) {
  const auto& parts = partitions_of(n);
  const std::size_t dim = parts.size();
  QMatrix out(dim, QRow(dim, Scalar(0)));
  switch (b) {
    case Basis::m:
      for (std::size_t i = 0; i < dim; ++i) out[i][i] = 1;
      break;
    case Basis::p:
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          std::vector<int> room(parts[j].parts().begin(), parts[j].parts().end());
          out[i][j] = count_placements(parts[i].parts(), 0, room);
        }
      }
      break;
    case Basis::h:
    case Basis::e: {
      const QMatrix& p2m = to_monomial_matrix(Basis::p, n);
      for (std::size_t i = 0; i < dim; ++i) {
        QPowerSum acc{{Partition(), Scalar(1)}};
        for (int part : parts[i].parts()) acc = qp_mul(acc, qp_complete_or_elementary(part, b == Basis::e));
        out[i] = qp_to_monomial_row(acc, n, p2m);
      }
      break;
    }
    case Basis::s: {
      // Jacobi-Trudi: s_lambda = det(h_{lambda_i - i + j}).
      const QMatrix& h2m = to_monomial_matrix(Basis::h, n);
      for (std::size_t i = 0; i < dim; ++i) {
        const Partition& lam = parts[i];
        const int len = lam.length();
        std::vector<int> perm(len);
        std::iota(perm.begin(), perm.end(), 0);
        do {
          int inversions = 0;
          for (int a = 0; a < len; ++a)
            for (int c = a + 1; c < len; ++c)
              if (perm[a] > perm[c]) ++inversions;
          std::vector<int> idx;
          bool vanish = false;
          for (int r = 0; r < len; ++r) {
            const int k = lam.part(r + 1) - (r + 1) + (perm[r] + 1);
            if (k < 0) {
              vanish = true;
              break;
            }
            if (k > 0) idx.push_back(k);
          }
          if (vanish) continue;
          const auto& hr = h2m[partition_index(Partition(idx))];
          for (std::size_t j = 0; j < dim; ++j) {
            if (inversions % 2 == 0) {
              out[i][j] += hr[j];
            } else {
              out[i][j] -= hr[j];
            }
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      break;
    }
  }
  return out;
}

}  // namespace

const QMatrix& to_monomial_matrix(Basis b, int n) {
  auto& cache = transition_cache();
  std::lock_guard lock(cache.mu);
  const auto key = std::make_pair(b, n);
  auto it = cache.to_m.find(key);
  if (it != cache.to_m.end()) return it->second;
  QMatrix mat = build_to_monomial(b, n);
  return cache.to_m.emplace(key, std::move(mat)).first->second;
}

const QMatrix& from_monomial_matrix(Basis b, int n) {
  auto& cache = transition_cache();
  std::lock_guard lock(cache.mu);
  const auto key = std::make_pair(b, n);
  auto it = cache.from_m.find(key);
  if (it != cache.from_m.end()) return it->second;
  QMatrix mat = invert(to_monomial_matrix(b, n));
  return cache.from_m.emplace(key, std::move(mat)).first->second;
}

// ---------------------------------------------------------------------------
// SymFunc.

namespace {

int key_size_max(const SymKey& key) {
  int m = 0;
  for (const auto& p : key) m = std::max(m, p.size());
  return m;
}

// Collects contributions per key and sums each group once at the end.
class TermAccumulator {
 public:
  void add(const SymKey& key, RatFunc c) {
    if (!c.is_zero()) pending_[key].push_back(std::move(c));
  }
  SymFunc::TermMap finish() {
    SymFunc::TermMap out;
    for (auto& [key, vals] : pending_) {
      RatFunc s = sum(vals);
      if (!s.is_zero()) out.emplace(key, std::move(s));
    }
    return out;
  }

 private:
  std::map<SymKey, std::vector<RatFunc>> pending_;
};

// Applies a per-alphabet linear change of basis (rows indexed by source
// partition) to every term.
SymFunc::TermMap change_basis(const SymFunc::TermMap& terms, int k,
                              const std::function<const QMatrix&(int)>& matrix) {
  TermAccumulator acc;
  for (const auto& [key, c] : terms) {
    // Sparse rows per alphabet.
    std::vector<std::vector<std::pair<const Partition*, Scalar>>> rows(k);
    for (int i = 0; i < k; ++i) {
      const int n = key[i].size();
      const auto& row = matrix(n)[partition_index(key[i])];
      const auto& parts = partitions_of(n);
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (sgn(row[j]) != 0) rows[i].emplace_back(&parts[j], row[j]);
      }
    }
    std::vector<std::size_t> pos(k, 0);
    for (;;) {
      SymKey out(k);
      Scalar f = 1;
      for (int i = 0; i < k; ++i) {
        out[i] = *rows[i][pos[i]].first;
        f *= rows[i][pos[i]].second;
      }
      acc.add(out, c * f);
      int i = k - 1;
      while (i >= 0 && ++pos[i] == rows[i].size()) {
        pos[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return acc.finish();
}

}  // namespace

SymFunc::SymFunc(int alphabets, int degree_bound) : k_(alphabets), bound_(degree_bound) {
  if (alphabets < 1) throw std::invalid_argument("SymFunc: need at least one alphabet");
  if (degree_bound < 0) throw std::invalid_argument("SymFunc: negative degree bound");
}

SymFunc SymFunc::one(int alphabets, int degree_bound) {
  SymFunc f(alphabets, degree_bound);
  f.add_term(SymKey(alphabets), RatFunc(1));
  return f;
}

void SymFunc::check_key(const SymKey& key) const {
  if (static_cast<int>(key.size()) != k_)
    throw std::invalid_argument("SymFunc: key " + key_to_string(key) + " has the wrong number of alphabets");
  if (key_size_max(key) > bound_)
    throw std::out_of_range("SymFunc: key " + key_to_string(key) + " exceeds degree bound " + std::to_string(bound_));
}

RatFunc SymFunc::coeff(const SymKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? RatFunc() : it->second;
}

RatFunc SymFunc::constant_term() const { return coeff(SymKey(k_)); }

void SymFunc::add_term(const SymKey& key, const RatFunc& c) {
  check_key(key);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymFunc SymFunc::with_bound(int degree_bound) const {
  SymFunc out(k_, degree_bound);
  for (const auto& [key, c] : terms_) {
    if (key_size_max(key) <= degree_bound) out.terms_.emplace(key, c);
  }
  return out;
}

SymFunc SymFunc::homogeneous_part(const std::vector<int>& sizes) const {
  SymFunc out(k_, bound_);
  for (const auto& [key, c] : terms_) {
    bool match = sizes.size() == key.size();
    for (std::size_t i = 0; match && i < key.size(); ++i) match = key[i].size() == sizes[i];
    if (match) out.terms_.emplace(key, c);
  }
  return out;
}

SymFunc SymFunc::map_coefficients(const std::function<RatFunc(const RatFunc&)>& fn) const {
  SymFunc out(k_, bound_);
  for (const auto& [key, c] : terms_) {
    RatFunc v = fn(c);
    if (!v.is_zero()) out.terms_.emplace(key, std::move(v));
  }
  return out;
}

SymFunc& SymFunc::operator+=(const SymFunc& o) {
  if (o.k_ != k_) throw std::invalid_argument("SymFunc: alphabet count mismatch");
  for (const auto& [key, c] : o.terms_) {
    if (key_size_max(key) <= bound_) add_term(key, c);
  }
  return *this;
}

SymFunc& SymFunc::operator-=(const SymFunc& o) { return *this += -o; }

SymFunc& SymFunc::operator*=(const RatFunc& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, v] : terms_) v *= c;
  return *this;
}

SymFunc SymFunc::operator-() const {
  SymFunc out = *this;
  for (auto& [key, v] : out.terms_) v = -v;
  return out;
}

bool operator==(const SymFunc& a, const SymFunc& b) {
  if (a.k_ != b.k_ || a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  }
  return true;
}

std::string SymFunc::to_text() const {
  std::ostringstream os;
  for (const auto& [key, c] : terms_) os << key_to_string(key) << " : " << c.to_string() << "\n";
  return os.str();
}

SymFunc SymFunc::from_text(std::string_view text, int alphabets, int degree_bound) {
  SymFunc out(alphabets, degree_bound);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::size_t colon = line.find(" : ");
    if (colon == std::string_view::npos) throw std::invalid_argument("SymFunc::from_text: missing ' : ' in line");
    out.add_term(parse_key(line.substr(0, colon)), parse_ratfunc(line.substr(colon + 3)));
  }
  return out;
}

SymFunc basis_element(Basis b, const SymKey& key, int degree_bound) {
  SymFunc unit(static_cast<int>(key.size()), degree_bound);
  unit.add_term(key, RatFunc(1));
  if (b == Basis::m) return unit;
  return from_basis(b, unit.terms(), unit.alphabets(), degree_bound);
}

SymFunc basis_element(Basis b, const MultiPartition& mu, int degree_bound) {
  return basis_element(b, mu.components(), degree_bound);
}

SymFunc::TermMap expand_in(Basis b, const SymFunc& f) {
  if (b == Basis::m) return f.terms();
  return change_basis(f.terms(), f.alphabets(), [b](int n) -> const QMatrix& { return from_monomial_matrix(b, n); });
}

SymFunc from_basis(Basis b, const SymFunc::TermMap& coeffs, int alphabets, int degree_bound) {
  SymFunc out(alphabets, degree_bound);
  const SymFunc::TermMap m = b == Basis::m
      ? coeffs
      : change_basis(coeffs, alphabets, [b](int n) -> const QMatrix& { return to_monomial_matrix(b, n); });
  for (const auto& [key, c] : m) out.add_term(key, c);
  return out;
}

// ---------------------------------------------------------------------------
// Power-sum form.

namespace detail {

void PowerSumForm::add(const SymKey& key, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

PowerSumForm PowerSumForm::times(const PowerSumForm& o) const {
  TermAccumulator acc;
  for (const auto& [ka, ca] : terms) {
    for (const auto& [kb, cb] : o.terms) {
      SymKey key(k);
      bool fits = true;
      for (int i = 0; i < k && fits; ++i) {
        fits = ka[i].size() + kb[i].size() <= bound;
        if (fits) key[i] = ka[i].merged(kb[i]);
      }
      if (fits) acc.add(key, ca * cb);
    }
  }
  PowerSumForm out(k, bound);
  out.terms = acc.finish();
  return out;
}

PowerSumForm PowerSumForm::plethysm(int r) const {
  PowerSumForm out(k, bound);
  for (const auto& [key, c] : terms) {
    SymKey scaled(k);
    bool fits = true;
    for (int i = 0; i < k && fits; ++i) {
      fits = key[i].size() * r <= bound;
      if (fits) scaled[i] = key[i].scaled(r);
    }
    // Distinct keys stay distinct under scaling, so no accumulation needed.
    if (fits) out.terms.emplace(std::move(scaled), c.power_map(r));
  }
  return out;
}

PowerSumForm PowerSumForm::scaled(const Scalar& c) const {
  PowerSumForm out(k, bound);
  if (sgn(c) == 0) return out;
  for (const auto& [key, v] : terms) out.terms.emplace(key, v * c);
  return out;
}

PowerSumForm& PowerSumForm::operator+=(const PowerSumForm& o) {
  for (const auto& [key, c] : o.terms) add(key, c);
  return *this;
}

PowerSumForm to_power_sums(const SymFunc& f) {
  PowerSumForm out(f.alphabets(), f.degree_bound());
  out.terms = expand_in(Basis::p, f);
  return out;
}

SymFunc from_power_sums(const PowerSumForm& f) { return from_basis(Basis::p, f.terms, f.k, f.bound); }

}  // namespace detail

SymFunc mul(const SymFunc& f, const SymFunc& g) {
  if (f.alphabets() != g.alphabets() || f.degree_bound() != g.degree_bound())
    throw std::invalid_argument("mul: operands differ in alphabet count or degree bound");
  if (f.is_zero() || g.is_zero()) return SymFunc(f.alphabets(), f.degree_bound());
  return detail::from_power_sums(detail::to_power_sums(f).times(detail::to_power_sums(g)));
}

SymFunc operator*(const SymFunc& a, const SymFunc& b) { return mul(a, b); }

RatFunc hall_pair_h(const SymFunc& f, const MultiPartition& mu) {
  if (mu.alphabets() != f.alphabets()) throw std::invalid_argument("hall_pair_h: alphabet count mismatch");
  return f.coeff(mu.components());
}

SymFunc plethysm_pr(int r, const SymFunc& f) {
  if (r < 1) throw std::invalid_argument("plethysm_pr: r must be >= 1");
  return detail::from_power_sums(detail::to_power_sums(f).plethysm(r));
}

SeriesOnePlus::SeriesOnePlus(SymFunc f) : f_(std::move(f)) {
  if (!(f_.constant_term() == RatFunc(1)))
    throw std::invalid_argument("SeriesOnePlus: constant term is " + f_.constant_term().to_string() + ", not 1");
}

SeriesOnePlus ple_exp(const SymFunc& f) {
  if (!f.constant_term().is_zero()) throw std::invalid_argument("ple_exp: argument has a nonzero constant term");
  const int k = f.alphabets();
  const int bound = f.degree_bound();
  const detail::PowerSumForm pf = detail::to_power_sums(f);
  detail::PowerSumForm y(k, bound);
  for (int r = 1; r <= std::max(bound, 1); ++r) y += pf.plethysm(r).scaled(Scalar(1, r));
  detail::PowerSumForm result(k, bound);
  result.add(SymKey(k), RatFunc(1));
  detail::PowerSumForm power = result;
  for (int j = 1;; ++j) {
    power = power.times(y).scaled(Scalar(1, j));
    if (power.is_zero()) break;
    result += power;
  }
  return SeriesOnePlus(detail::from_power_sums(result));
}

SymFunc ple_log(const SeriesOnePlus& omega) {
  const SymFunc& f = omega.series();
  const int k = f.alphabets();
  const int bound = f.degree_bound();
  detail::PowerSumForm x = detail::to_power_sums(f);
  x.add(SymKey(k), RatFunc(-1));
  detail::PowerSumForm log(k, bound);
  detail::PowerSumForm power(k, bound);
  power.add(SymKey(k), RatFunc(1));
  for (int j = 1;; ++j) {
    power = power.times(x);
    if (power.is_zero()) break;
    log += power.scaled(Scalar(j % 2 == 1 ? 1 : -1, j));
  }
  detail::PowerSumForm out(k, bound);
  for (int r = 1; r <= std::max(bound, 1); ++r) {
    const int mu = mobius(r);
    if (mu != 0) out += log.plethysm(r).scaled(Scalar(mu, r));
  }
  return detail::from_power_sums(out);
}

}  // namespace cstk
