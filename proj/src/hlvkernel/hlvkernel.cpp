#include "cstk/hlvkernel.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "cstk/macdonald.hpp"

namespace cstk {

void KernelConfig::validate() const {
  if (m < 0) throw std::invalid_argument("kernel exponent m must be >= 0");
  if (k < 1) throw std::invalid_argument("kernel needs k >= 1 alphabets");
  if (N < 1) throw std::invalid_argument("kernel truncation N must be >= 1");
}

RatFunc hook_H(int m, const Partition& lambda) {
  if (m < 0) throw std::invalid_argument("hook_H: m must be >= 0");
  const MPoly z = MPoly::variable(Var::z);
  const MPoly w = MPoly::variable(Var::w);
  MPoly num(1);
  MPoly den(1);
  for (const Cell& s : lambda.cells()) {
    const unsigned a = lambda.arm(s);
    const unsigned l = lambda.leg(s);
    num = num * (z.pow(2 * a + 1) - w.pow(2 * l + 1)).pow(m);
    den = den * (z.pow(2 * a + 2) - w.pow(2 * l)) * (z.pow(2 * a) - w.pow(2 * l + 2));
  }
  return RatFunc(num, den);
}

SeriesOnePlus omega(const KernelConfig& cfg) {
  cfg.validate();
  SymFunc out = SymFunc::one(cfg.k, cfg.N);
  for (int n = 1; n <= cfg.N; ++n) {
    for (const Partition& lambda : partitions_of(n)) {
      const RatFunc weight = hook_H(cfg.m, lambda);
      const SymFunc hl = specialized_H(lambda);
      const auto& h = hl.terms();
      // Tensor power of the single-alphabet H~ over k alphabets.
      std::vector<std::pair<SymKey, RatFunc>> layer{{SymKey{}, weight}};
      for (int i = 0; i < cfg.k; ++i) {
        std::vector<std::pair<SymKey, RatFunc>> next;
        for (const auto& [key, c] : layer) {
          for (const auto& [hk, hc] : h) {
            SymKey extended = key;
            extended.push_back(hk[0]);
            next.emplace_back(std::move(extended), c * hc);
          }
        }
        layer = std::move(next);
      }
      for (const auto& [key, c] : layer) out.add_term(key, c);
    }
  }
  return SeriesOnePlus(std::move(out));
}

RatFunc hlv_HH(const MultiPartition& mu, int m, int N) {
  const int n = mu.size();
  if (N == 0) N = n;
  if (N < n) throw std::invalid_argument("hlv_HH: truncation N=" + std::to_string(N) + " below |mu|=" + std::to_string(n));
  if (n == 0) throw std::invalid_argument("hlv_HH: empty multipartition");

  // The logarithm depends only on (m, k, N) and is shared by every mu of that shape.
  using LogKey = std::tuple<int, int, int>;
  using Key = std::tuple<MultiPartition, int, int>;
  static std::mutex mutex;
  static std::map<LogKey, std::shared_ptr<const SymFunc>> logs;
  static std::map<Key, RatFunc> cache;
  const Key key{mu, m, N};
  const LogKey log_key{m, mu.alphabets(), N};
  std::shared_ptr<const SymFunc> log;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto lt = logs.find(log_key);
    if (lt != logs.end()) log = lt->second;
  }
  if (!log) {
    auto fresh = std::make_shared<const SymFunc>(ple_log(omega({m, mu.alphabets(), N})));
    std::lock_guard lock(mutex);
    log = logs.emplace(log_key, std::move(fresh)).first->second;
  }
  const RatFunc z2 = RatFunc::variable(Var::z).pow(2);
  const RatFunc w2 = RatFunc::variable(Var::w).pow(2);
  const RatFunc value = (z2 - RatFunc(1)) * (RatFunc(1) - w2) * hall_pair_h(*log, mu);
  std::lock_guard lock(mutex);
  return cache.emplace(key, value).first->second;
}

}  // namespace cstk
