#pragma once

// Point counts of the surface-group relations over a prime field F_q:
//   non-orientable: D_1 th(D_1) ... D_r th(D_r) Z_1 ... Z_k = 1
//   orientable:     [A_1,B_1] ... [A_g,B_g] X_1 ... X_k = 1
// with th(A) = (A^T)^{-1} and Z_i, X_i in prescribed semisimple classes.
// Counts are formed from histograms of D th(D) (resp. of commutators) that
// are convolved over GL_n(F_q); the groupoid count is raw / |GL_n(F_q)|.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cstk/exactalg.hpp"

namespace cstk {

/// Raised when a computation would exceed the iteration cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument unless q is a prime with 2 < q <= 13 and 1 <= n <= 3.
void check_field(int n, int q);

/// n x n matrix over F_q, row-major, entries in [0, q).
struct FqMatrix {
  int n = 0;
  std::vector<int> a;

  static FqMatrix identity(int n);
  static FqMatrix scalar(int n, int c, int q);
  [[nodiscard]] int at(int i, int j) const { return a[i * n + j]; }
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const FqMatrix&, const FqMatrix&) = default;
};

FqMatrix mat_mul(const FqMatrix& x, const FqMatrix& y, int q);
int mat_det(const FqMatrix& x, int q);
/// Throws std::invalid_argument on a singular matrix.
FqMatrix mat_inverse(const FqMatrix& x, int q);
FqMatrix mat_transpose(const FqMatrix& x);
/// (A^T)^{-1}.
FqMatrix theta(const FqMatrix& x, int q);

/// prod_{i<n} (q^n - q^i).
Integer gl_order(int n, int q);

/// Calls fn on every invertible matrix, entries enumerated row-major.
/// Throws ResourceLimit if q^{n^2} exceeds cap.
void enumerate_gl(int n, int q, const std::function<void(const FqMatrix&)>& fn, double cap = 1e9);

/// Semisimple class over F_q: zeta I, or the class of diag(lambda_1^m_1, ...)
/// with distinct nonzero eigenvalues.
class FqOrbit {
 public:
  static FqOrbit central(int zeta);
  static FqOrbit split(std::vector<std::pair<int, int>> eigen_multiplicities);

  [[nodiscard]] bool is_central() const { return central_; }
  /// (eigenvalue mod q, multiplicity) in size n; a central class has one entry.
  /// Throws std::invalid_argument on zero or repeated eigenvalues mod q or
  /// multiplicities not summing to n.
  [[nodiscard]] std::vector<std::pair<int, int>> spectrum(int n, int q) const;
  /// Every matrix in the class.
  [[nodiscard]] std::vector<FqMatrix> members(int n, int q, double cap = 1e9) const;
  [[nodiscard]] std::string to_string() const;

 private:
  bool central_ = false;
  std::vector<std::pair<int, int>> eig_;
};

/// Finite-field version of genericity: no 1 <= v < n and sub-multisets of
/// size v, one per orbit, whose eigenvalue products multiply to 1.
bool fq_generic(const std::vector<FqOrbit>& orbits, int n, int q);

struct CountOptions {
  double iteration_cap = 1e9;  // matrix products plus matrices visited
  int threads = 1;
  std::optional<Scalar> formula_value;  // expected groupoid count, if known
};

struct CountReport {
  std::string surface;  // "nonorientable r=2 k=1" etc.
  std::vector<std::string> orbits;
  int q = 0;
  int n = 0;
  bool generic = false;
  Integer raw;
  Integer gl;
  Scalar groupoid;
  std::optional<Scalar> formula;
  std::optional<bool> match;
  double estimated_cost = 0;

  [[nodiscard]] std::string to_json() const;
  [[nodiscard]] std::string to_text() const;
};

/// Upper bound on the work of the counting routines, used for the cap check.
double estimate_cost(int n, int q, int generators, int punctures);

CountReport count_nonorientable(int r, const std::vector<FqOrbit>& orbits, int q, int n,
                                const CountOptions& opts = {});
CountReport count_orientable(int g, const std::vector<FqOrbit>& orbits, int q, int n,
                             const CountOptions& opts = {});

}  // namespace cstk
