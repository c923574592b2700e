#pragma once

// Macdonald symmetric functions in a single alphabet.
//
// P_mu is obtained by Gram-Schmidt against the monomial basis under the
// (q,t) inner product; the modified H~_mu follows from the integral form
// J_mu by the plethystic substitution X -> X/(1-t) and the inversion
// t -> 1/t, scaled by t^{n(mu)}.

#include <iosfwd>
#include <map>
#include <mutex>

#include "cstk/partitions.hpp"
#include "cstk/symfunc.hpp"

namespace cstk {

/// <f, g>_{q,t} with <p_a, p_b> = delta_ab z_a prod_i (1 - q^{a_i}) / (1 - t^{a_i}).
/// Both arguments must be single-alphabet.
RatFunc qt_inner(const SymFunc& f, const SymFunc& g);

/// Memo of P_mu and H~_mu. Thread-safe; concurrent fills of one key compute
/// the same value and the first insertion wins.
class MacdonaldTable {
 public:
  /// Monic P_mu, degree bound |mu|.
  const SymFunc& P(const Partition& mu);
  /// Modified H~_mu, degree bound |mu|. Throws std::logic_error if a
  /// coefficient fails to be a polynomial in q and t.
  const SymFunc& H(const Partition& mu);

  /// Writes every cached H~ entry: a "# <partition>" header line followed
  /// by the element's text form, entries separated by a blank line.
  void dump(std::ostream& os) const;
  /// Loads entries written by dump(); existing entries are kept.
  void restore(std::istream& is);
  [[nodiscard]] std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<Partition, SymFunc> p_;
  std::map<Partition, SymFunc> h_;
};

/// Process-wide table used by the free functions below.
MacdonaldTable& macdonald_table();

/// The results carry degree bound max(|mu|, degree_bound).
SymFunc macdonald_P(const Partition& mu, int degree_bound = 0);
SymFunc modified_H(const Partition& mu, int degree_bound = 0);
/// modified_H with q -> z^2, t -> w^2.
SymFunc specialized_H(const Partition& mu, int degree_bound = 0);

}  // namespace cstk
