#include "cstk/macdonald.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace cstk {

namespace {

const RatFunc kQ = RatFunc::variable(Var::q);
const RatFunc kT = RatFunc::variable(Var::t);

// Coefficient vector in the power-sum basis, indexed like partitions_of(n).
using PVec = std::vector<RatFunc>;

RatFunc power_ratio(const Partition& rho) {
  RatFunc w(Scalar(rho.z_lambda()));
  for (int r : rho.parts()) w *= (RatFunc(1) - kQ.pow(r)) / (RatFunc(1) - kT.pow(r));
  return w;
}

std::vector<RatFunc> weights(int n) {
  std::vector<RatFunc> w;
  for (const auto& rho : partitions_of(n)) w.push_back(power_ratio(rho));
  return w;
}

RatFunc pairing(const PVec& a, const PVec& b, const std::vector<RatFunc>& w) {
  std::vector<RatFunc> terms;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) terms.push_back(a[i] * b[i] * w[i]);
  }
  return sum(terms);
}

// P_lambda for every lambda of size n, by Gram-Schmidt in increasing
// lexicographic order (a linear extension of dominance).
std::vector<PVec> gram_schmidt(int n) {
  const auto& parts = partitions_of(n);
  const std::size_t dim = parts.size();
  const QMatrix& m2p = from_monomial_matrix(Basis::p, n);
  const auto w = weights(n);
  std::vector<PVec> basis(dim, PVec(dim));
  std::vector<RatFunc> norms(dim);
  for (std::size_t step = 0; step < dim; ++step) {
    const std::size_t i = dim - 1 - step;
    PVec m(dim);
    for (std::size_t j = 0; j < dim; ++j) m[j] = RatFunc(m2p[i][j]);
    std::vector<std::vector<RatFunc>> parts_of_entry(dim);
    for (std::size_t j = 0; j < dim; ++j) parts_of_entry[j].push_back(m[j]);
    for (std::size_t prev = i + 1; prev < dim; ++prev) {
      const RatFunc c = pairing(m, basis[prev], w) / norms[prev];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (!basis[prev][j].is_zero()) parts_of_entry[j].push_back(-(c * basis[prev][j]));
      }
    }
    for (std::size_t j = 0; j < dim; ++j) basis[i][j] = sum(parts_of_entry[j]);
    norms[i] = pairing(basis[i], basis[i], w);
  }
  return basis;
}

SymFunc from_pvec(const PVec& v, int n) {
  SymFunc::TermMap terms;
  const auto& parts = partitions_of(n);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!v[j].is_zero()) terms.emplace(SymKey{parts[j]}, v[j]);
  }
  return from_basis(Basis::p, terms, 1, n);
}

SymFunc compute_H(const Partition& mu, const SymFunc& p_mu) {
  const int n = mu.size();
  RatFunc integral(1);
  for (const Cell& s : mu.cells()) {
    integral *= RatFunc(1) - kQ.pow(mu.arm(s)) * kT.pow(mu.leg(s) + 1);
  }
  const Bindings invert_t{{Var::t, kT.inverse()}};
  const RatFunc scale = kT.pow(mu.n_stat());
  SymFunc::TermMap pterms;
  for (const auto& [key, c] : expand_in(Basis::p, p_mu)) {
    RatFunc v = c * integral;
    for (int r : key[0].parts()) v /= RatFunc(1) - kT.pow(r);
    pterms.emplace(key, substitute(v, invert_t) * scale);
  }
  SymFunc h = from_basis(Basis::p, pterms, 1, n);
  for (const auto& [key, c] : h.terms()) {
    if (!c.is_polynomial() || c.num().has_negative_exponents())
      throw std::logic_error("modified_H" + mu.to_string() + ": coefficient of m" + key[0].to_string() +
                             " is not a polynomial: " + c.to_string());
  }
  return h;
}

SymFunc rebound(const SymFunc& f, int degree_bound) {
  return degree_bound > f.degree_bound() ? f.with_bound(degree_bound) : f;
}

}  // namespace

RatFunc qt_inner(const SymFunc& f, const SymFunc& g) {
  if (f.alphabets() != 1 || g.alphabets() != 1) throw std::invalid_argument("qt_inner: single-alphabet arguments only");
  const auto fp = expand_in(Basis::p, f);
  const auto gp = expand_in(Basis::p, g);
  std::vector<RatFunc> terms;
  for (const auto& [key, c] : fp) {
    auto it = gp.find(key);
    if (it != gp.end()) terms.push_back(c * it->second * power_ratio(key[0]));
  }
  return sum(terms);
}

const SymFunc& MacdonaldTable::P(const Partition& mu) {
  {
    std::lock_guard lock(mu_);
    auto it = p_.find(mu);
    if (it != p_.end()) return it->second;
  }
  const int n = mu.size();
  std::map<Partition, SymFunc> fresh;
  if (n == 0) {
    fresh.emplace(mu, SymFunc::one(1, 0));
  } else {
    const auto basis = gram_schmidt(n);
    const auto& parts = partitions_of(n);
    for (std::size_t i = 0; i < parts.size(); ++i) fresh.emplace(parts[i], from_pvec(basis[i], n));
  }
  std::lock_guard lock(mu_);
  p_.merge(fresh);
  return p_.at(mu);
}

const SymFunc& MacdonaldTable::H(const Partition& mu) {
  {
    std::lock_guard lock(mu_);
    auto it = h_.find(mu);
    if (it != h_.end()) return it->second;
  }
  SymFunc h = mu.empty() ? SymFunc::one(1, 0) : compute_H(mu, P(mu));
  std::lock_guard lock(mu_);
  return h_.emplace(mu, std::move(h)).first->second;
}

std::size_t MacdonaldTable::size() const {
  std::lock_guard lock(mu_);
  return h_.size();
}

void MacdonaldTable::dump(std::ostream& os) const {
  std::lock_guard lock(mu_);
  bool first = true;
  for (const auto& [mu, h] : h_) {
    if (!first) os << "\n";
    first = false;
    os << "# " << mu.to_string() << "\n" << h.to_text();
  }
}

void MacdonaldTable::restore(std::istream& is) {
  std::map<Partition, SymFunc> loaded;
  std::string line;
  std::optional<Partition> current;
  std::string body;
  auto flush = [&] {
    if (current) loaded.emplace(*current, SymFunc::from_text(body, 1, current->size()));
    body.clear();
  };
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      flush();
      current = parse_partition(line.substr(2));
    } else if (!line.empty()) {
      if (!current) throw std::invalid_argument("MacdonaldTable::restore: entry before any header");
      body += line + "\n";
    }
  }
  flush();
  std::lock_guard lock(mu_);
  h_.merge(loaded);
}

MacdonaldTable& macdonald_table() {
  static MacdonaldTable table;
  return table;
}

SymFunc macdonald_P(const Partition& mu, int degree_bound) { return rebound(macdonald_table().P(mu), degree_bound); }

SymFunc modified_H(const Partition& mu, int degree_bound) { return rebound(macdonald_table().H(mu), degree_bound); }

SymFunc specialized_H(const Partition& mu, int degree_bound) {
  const Bindings zw{{Var::q, RatFunc::variable(Var::z).pow(2)}, {Var::t, RatFunc::variable(Var::w).pow(2)}};
  return rebound(modified_H(mu).map_coefficients([&](const RatFunc& c) { return substitute(c, zw); }), degree_bound);
}

}  // namespace cstk
