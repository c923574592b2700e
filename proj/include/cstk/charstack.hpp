#pragma once

// Orbit and surface data, genericity of orbit tuples, and the E-series and
// mixed Poincare series formulas built from HH_{mu,m}.
//
// Square roots are carried by the variable u: sqrt(q) = u and
// sqrt(q t^2) = t u (positive branch). Values are rewritten in q when only
// even powers of u remain.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cstk/exactalg.hpp"
#include "cstk/partitions.hpp"

namespace cstk {

enum class SurfaceKind { orientable, nonorientable };

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::nonorientable;
  int r = 0;  // cross-caps, nonorientable only
  int g = 0;  // genus, orientable only
  int k = 1;  // punctures

  static SurfaceSpec nonorientable(int r, int k = 1);
  static SurfaceSpec orientable(int g, int k = 1);
  /// Throws std::invalid_argument on r < 1, g < 0, k < 1.
  void validate() const;
  /// Kernel exponent: r or 2g.
  [[nodiscard]] int m() const;
  [[nodiscard]] std::string to_string() const;
};

/// An eigenvalue exp(2 pi i angle) with its multiplicity.
struct Eigenvalue {
  Scalar angle;  // in [0, 1)
  int multiplicity = 1;
  friend bool operator==(const Eigenvalue&, const Eigenvalue&) = default;
};

/// Semisimple conjugacy class given by its spectrum. Equal angles are merged
/// and entries are kept sorted by angle.
class OrbitSpec {
 public:
  explicit OrbitSpec(std::vector<Eigenvalue> eigenvalues);
  /// exp(pi i d / n) I_n: angle d/(2n), multiplicity n.
  static OrbitSpec central(int n, int d);

  [[nodiscard]] const std::vector<Eigenvalue>& eigenvalues() const { return eig_; }
  [[nodiscard]] int n() const { return n_; }
  /// Multiplicities sorted decreasingly.
  [[nodiscard]] Partition type() const;
  /// "{1/3^2, 0}" lists angle^multiplicity.
  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<Eigenvalue> eig_;
  int n_ = 0;
};

struct GenericityWitness {
  int dimension = 0;                           // v with 1 <= v < n
  std::vector<std::vector<Eigenvalue>> parts;  // sub-multiset of each orbit
};

struct GenericityResult {
  bool generic = true;
  std::optional<GenericityWitness> witness;  // set when not generic
  [[nodiscard]] std::string describe() const;
};

/// Not generic iff some 1 <= v < n and sub-multisets of size v, one per
/// orbit, have angles summing to an integer. Throws on an empty tuple or
/// orbits of different sizes.
GenericityResult is_generic(std::span<const OrbitSpec> orbits);

/// A generic tuple of orbits with the given multiplicity types and total
/// angle sum in Z, found by a deterministic search over common
/// denominators. Empty if nothing is found within the search limits.
std::optional<std::vector<OrbitSpec>> generic_representative(const MultiPartition& mu);

/// n^2 (m - 2 + k) + 2 - sum of squared parts, with m = r or 2g.
long d_mu(const SurfaceSpec& surface, const MultiPartition& mu);

struct SeriesReport {
  std::string formula;  // "eseries" or "mixed"
  SurfaceSpec surface;
  MultiPartition mu{Partition{}};
  std::vector<OrbitSpec> orbits;  // orbits used for the genericity verdict
  std::optional<bool> generic;    // empty if no generic tuple was available
  long d = 0;
  RatFunc value;                  // in q (and t) when rewritten, else in u
  bool rewritten_in_q = false;    // u occurs only to even powers
  bool polynomial = false;        // value is a polynomial in q (and t)
  std::string branch;             // which square root was taken
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> log;

  [[nodiscard]] std::string to_json() const;
  [[nodiscard]] std::string to_latex() const;
  [[nodiscard]] std::string to_text() const;
};

/// (u^d / (u^2 - 1)) HH_{mu,m}(u, 1/u), rewritten in q = u^2.
/// If orbits are given they must have types mu; otherwise a generic
/// representative is searched for.
SeriesReport eseries(const SurfaceSpec& surface, const MultiPartition& mu,
                     std::optional<std::vector<OrbitSpec>> orbits = std::nullopt);

/// ((t u)^d / (q t^2 - 1)) HH_{mu,m}(t u, -1/u), rewritten in q = u^2.
/// Also records whether its t = -1 specialization equals the E-series.
SeriesReport mixed_series(const SurfaceSpec& surface, const MultiPartition& mu,
                          std::optional<std::vector<OrbitSpec>> orbits = std::nullopt);

struct CounterexampleVerdict {
  int n = 0;
  int d = 0;
  SeriesReport mixed;
  bool equals_carlsson_value = false;     // (qt^2+t)^2/(qt^2-1)
  bool differs_from_conjecture = false;   // != qt^2+t
  bool e_specialization_ok = false;       // t = -1 gives q - 1
  bool carlsson_identity = false;         // (qt^2) HH_{(n),2}(tu, -1/u) = (qt^2+t)^2
  [[nodiscard]] bool all_hold() const {
    return equals_carlsson_value && differs_from_conjecture && e_specialization_ok;
  }
  [[nodiscard]] std::string to_json() const;
  [[nodiscard]] std::string to_text() const;
};

/// The mixed series of the non-orientable surface with two cross-caps and the
/// central orbit exp(pi i d/n) I_n, checked against the three expected facts.
/// Requires n >= 2, d even and the central orbit generic (gcd(n, d/2) = 1).
CounterexampleVerdict counterexample_report(int n, int d);

}  // namespace cstk
