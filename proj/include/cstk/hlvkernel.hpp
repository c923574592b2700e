#pragma once

// Hook functions, the kernel series Omega_m and its plethystic logarithm.
//
//   hook(m, lambda) = prod_{s in lambda} (z^{2a+1} - w^{2l+1})^m
//                     / ((z^{2a+2} - w^{2l}) (z^{2a} - w^{2l+2}))
//   Omega_m = sum_lambda hook(m, lambda) prod_{i=1..k} H~_lambda(x_i; z^2, w^2)
//   HH_{mu,m} = (z^2 - 1)(1 - w^2) <Log Omega_m, h_mu>

#include "cstk/partitions.hpp"
#include "cstk/symfunc.hpp"

namespace cstk {

struct KernelConfig {
  int m = 0;  // exponent; r for non-orientable surfaces, 2g for orientable ones
  int k = 1;  // number of alphabets (punctures)
  int N = 1;  // truncation degree

  /// Throws std::invalid_argument unless m >= 0, k >= 1, N >= 1.
  void validate() const;
};

/// The cell product above; the empty partition gives 1. Requires m >= 0.
RatFunc hook_H(int m, const Partition& lambda);

/// Omega_m truncated at |lambda| <= N, in k alphabets.
SeriesOnePlus omega(const KernelConfig& cfg);

/// HH_{mu,m}(z, w), computed with truncation N (0 means N = |mu|).
/// Results are memoized per (mu, m, N).
RatFunc hlv_HH(const MultiPartition& mu, int m, int N = 0);

}  // namespace cstk
