#pragma once

// Integer partitions and multipartitions with the cell statistics used by the
// hook functions and the Macdonald construction. Diagrams use the English
// convention: row 1 is the longest, arms point right, legs point down.

#include <compare>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cstk/exactalg.hpp"

namespace cstk {

/// A cell of a Young diagram, 1-based row and column.
struct Cell {
  int row = 1;
  int col = 1;
  friend bool operator==(const Cell&, const Cell&) = default;
};

class Partition {
 public:
  Partition() = default;
  /// Parts are sorted into weakly decreasing order; zero parts are dropped.
  /// Negative parts are rejected.
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int length() const { return static_cast<int>(parts_.size()); }
  [[nodiscard]] bool empty() const { return parts_.empty(); }
  [[nodiscard]] std::span<const int> parts() const& { return parts_; }
  // Temporaries hand over their storage so `for (int x : f().parts())` stays valid.
  [[nodiscard]] std::vector<int> parts() && { return std::move(parts_); }
  /// i-th part, 1-based; 0 beyond the length.
  [[nodiscard]] int part(int i) const;

  [[nodiscard]] Partition conjugate() const;
  [[nodiscard]] bool contains(Cell s) const;
  [[nodiscard]] std::vector<Cell> cells() const;
  [[nodiscard]] int arm(Cell s) const;
  [[nodiscard]] int leg(Cell s) const;
  /// n(lambda) = sum_i (i - 1) lambda_i.
  [[nodiscard]] int n_stat() const;
  /// z_lambda = prod_i i^{m_i} m_i!.
  [[nodiscard]] Integer z_lambda() const;
  /// Multiplicity of the part value i.
  [[nodiscard]] int multiplicity(int i) const;
  /// Every part multiplied by r.
  [[nodiscard]] Partition scaled(int r) const;
  /// Union of the multisets of parts (the partition of p_lambda * p_mu).
  [[nodiscard]] Partition merged(const Partition& o) const;

  /// "(3,1,1)"; the empty partition prints as "()".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  /// Lexicographic on the part sequence (so (2,1) < (3) and (1,1) < (2)).
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// Parses "(a,b,c)", "a,b,c" or "()"; throws std::invalid_argument.
Partition parse_partition(std::string_view text);

/// All partitions of n in reverse lexicographic order: (n) first, (1^n) last.
const std::vector<Partition>& partitions_of(int n);

/// lambda <= nu in dominance order. Throws std::invalid_argument when sizes differ.
bool dominance_leq(const Partition& lambda, const Partition& nu);

/// k-tuple of partitions, all of the same size n.
class MultiPartition {
 public:
  explicit MultiPartition(std::vector<Partition> components);
  MultiPartition(std::initializer_list<Partition> components)
      : MultiPartition(std::vector<Partition>(components)) {}

  [[nodiscard]] int alphabets() const { return static_cast<int>(components_.size()); }
  [[nodiscard]] int size() const { return components_.front().size(); }
  [[nodiscard]] const std::vector<Partition>& components() const { return components_; }
  [[nodiscard]] const Partition& operator[](std::size_t i) const { return components_[i]; }
  /// Sum over components and parts of (mu_i^j)^2.
  [[nodiscard]] long sum_of_squares() const;
  /// "(2)|(1,1)".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const MultiPartition&, const MultiPartition&) = default;
  friend auto operator<=>(const MultiPartition& a, const MultiPartition& b) {
    return a.components_ <=> b.components_;
  }

 private:
  std::vector<Partition> components_;
};

/// Parses "(2)|(1,1)" (components separated by '|' or ';').
MultiPartition parse_multipartition(std::string_view text);

}  // namespace cstk
