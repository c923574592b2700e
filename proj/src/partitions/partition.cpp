#include "cstk/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>

namespace cstk {

Partition::Partition(std::vector<int> parts) {
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("partition with a negative part");
  }
  std::erase(parts, 0);
  std::sort(parts.begin(), parts.end(), std::greater<>());
  parts_ = std::move(parts);
  size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

int Partition::part(int i) const { return i >= 1 && i <= length() ? parts_[i - 1] : 0; }

Partition Partition::conjugate() const {
  std::vector<int> c(empty() ? 0 : parts_.front(), 0);
  for (int p : parts_) {
    for (int j = 0; j < p; ++j) ++c[j];
  }
  return Partition(std::move(c));
}

bool Partition::contains(Cell s) const { return s.row >= 1 && s.col >= 1 && s.col <= part(s.row); }

std::vector<Cell> Partition::cells() const {
  std::vector<Cell> out;
  out.reserve(size_);
  for (int i = 1; i <= length(); ++i) {
    for (int j = 1; j <= parts_[i - 1]; ++j) out.push_back({i, j});
  }
  return out;
}

int Partition::arm(Cell s) const {
  if (!contains(s)) throw std::invalid_argument("arm: cell outside the diagram of " + to_string());
  return part(s.row) - s.col;
}

int Partition::leg(Cell s) const {
  if (!contains(s)) throw std::invalid_argument("leg: cell outside the diagram of " + to_string());
  int below = 0;
  for (int i = s.row + 1; i <= length() && parts_[i - 1] >= s.col; ++i) ++below;
  return below;
}

int Partition::n_stat() const {
  int n = 0;
  for (int i = 0; i < length(); ++i) n += i * parts_[i];
  return n;
}

int Partition::multiplicity(int i) const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), i));
}

Integer Partition::z_lambda() const {
  Integer z = 1;
  std::map<int, int> mult;
  for (int p : parts_) ++mult[p];
  for (const auto& [i, m] : mult) {
    for (int k = 1; k <= m; ++k) z *= i * k;
  }
  return z;
}

Partition Partition::scaled(int r) const {
  std::vector<int> p(parts_);
  for (int& x : p) x *= r;
  return Partition(std::move(p));
}

Partition Partition::merged(const Partition& o) const {
  std::vector<int> p(parts_);
  p.insert(p.end(), o.parts_.begin(), o.parts_.end());
  return Partition(std::move(p));
}

std::string Partition::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

Partition parse_partition(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw std::invalid_argument("malformed partition \"" + std::string(text) + "\"");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<int> parts;
  if (s.empty()) return Partition();
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("malformed partition \"" + std::string(text) + "\"");
    const int v = std::stoi(tok);
    if (v == 0) throw std::invalid_argument("partition parts must be positive: \"" + std::string(text) + "\"");
    parts.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  const bool sorted = std::is_sorted(parts.begin(), parts.end(), std::greater<>());
  if (!sorted) throw std::invalid_argument("partition parts must be weakly decreasing: \"" + std::string(text) + "\"");
  return Partition(std::move(parts));
}

namespace {

void generate(int remaining, int max_part, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    prefix.push_back(p);
    generate(remaining - p, p, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

const std::vector<Partition>& partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partitions_of: negative size");
  static std::mutex mu;
  static std::map<int, std::vector<Partition>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Partition> out;
  std::vector<int> prefix;
  generate(n, n, prefix, out);
  return cache.emplace(n, std::move(out)).first->second;
}

bool dominance_leq(const Partition& lambda, const Partition& nu) {
  if (lambda.size() != nu.size())
    throw std::invalid_argument("dominance_leq: sizes differ (" + lambda.to_string() + " vs " + nu.to_string() + ")");
  int a = 0;
  int b = 0;
  const int len = std::max(lambda.length(), nu.length());
  for (int i = 1; i <= len; ++i) {
    a += lambda.part(i);
    b += nu.part(i);
    if (a > b) return false;
  }
  return true;
}

MultiPartition::MultiPartition(std::vector<Partition> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("multipartition needs at least one component");
  for (const auto& p : components_) {
    if (p.size() != components_.front().size())
      throw std::invalid_argument("multipartition components must have equal size: " + to_string());
  }
}

long MultiPartition::sum_of_squares() const {
  long s = 0;
  for (const auto& p : components_) {
    for (int x : p.parts()) s += static_cast<long>(x) * x;
  }
  return s;
}

std::string MultiPartition::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) s += "|";
    s += components_[i].to_string();
  }
  return s;
}

MultiPartition parse_multipartition(std::string_view text) {
  std::vector<Partition> comps;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t sep = text.find_first_of("|;", pos);
    comps.push_back(parse_partition(text.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos)));
    if (sep == std::string_view::npos) break;
    pos = sep + 1;
  }
  return MultiPartition(std::move(comps));
}

}  // namespace cstk
