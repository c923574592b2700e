#include "cstk/ffcount.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

namespace cstk {

namespace {

int mod(long a, int q) {
  const long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int inv_mod(int a, int q) {
  // q is prime: a^{q-2}.
  long result = 1;
  long base = mod(a, q);
  for (int e = q - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
  }
  return static_cast<int>(result);
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

}  // namespace

void check_field(int n, int q) {
  if (!is_prime(q) || q <= 2 || q > 13)
    throw std::invalid_argument("field size q=" + std::to_string(q) + " must be a prime with 2 < q <= 13");
  if (n < 1 || n > 3) throw std::invalid_argument("matrix size n=" + std::to_string(n) + " must lie in 1..3");
}

FqMatrix FqMatrix::identity(int n) {
  FqMatrix m{n, std::vector<int>(n * n, 0)};
  for (int i = 0; i < n; ++i) m.a[i * n + i] = 1;
  return m;
}

FqMatrix FqMatrix::scalar(int n, int c, int q) {
  FqMatrix m{n, std::vector<int>(n * n, 0)};
  for (int i = 0; i < n; ++i) m.a[i * n + i] = mod(c, q);
  return m;
}

std::string FqMatrix::to_string() const {
  std::string s = "[";
  for (int i = 0; i < n; ++i) {
    if (i > 0) s += "; ";
    for (int j = 0; j < n; ++j) {
      if (j > 0) s += " ";
      s += std::to_string(at(i, j));
    }
  }
  return s + "]";
}

FqMatrix mat_mul(const FqMatrix& x, const FqMatrix& y, int q) {
  const int n = x.n;
  FqMatrix r{n, std::vector<int>(n * n, 0)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      long s = 0;
      for (int l = 0; l < n; ++l) s += static_cast<long>(x.a[i * n + l]) * y.a[l * n + j];
      r.a[i * n + j] = static_cast<int>(s % q);
    }
  }
  return r;
}

int mat_det(const FqMatrix& x, int q) {
  const auto& a = x.a;
  switch (x.n) {
    case 1: return mod(a[0], q);
    case 2: return mod(static_cast<long>(a[0]) * a[3] - static_cast<long>(a[1]) * a[2], q);
    case 3: {
      const long d = static_cast<long>(a[0]) * (a[4] * a[8] - a[5] * a[7]) -
                     static_cast<long>(a[1]) * (a[3] * a[8] - a[5] * a[6]) +
                     static_cast<long>(a[2]) * (a[3] * a[7] - a[4] * a[6]);
      return mod(d, q);
    }
    default: throw std::invalid_argument("mat_det: unsupported size " + std::to_string(x.n));
  }
}

FqMatrix mat_inverse(const FqMatrix& x, int q) {
  const int n = x.n;
  FqMatrix m = x;
  FqMatrix inv = FqMatrix::scalar(n, 1, q);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && m.a[piv * n + col] == 0) ++piv;
    if (piv == n) throw std::invalid_argument("mat_inverse: singular matrix " + x.to_string());
    for (int j = 0; j < n; ++j) {
      std::swap(m.a[piv * n + j], m.a[col * n + j]);
      std::swap(inv.a[piv * n + j], inv.a[col * n + j]);
    }
    const int s = inv_mod(m.a[col * n + col], q);
    for (int j = 0; j < n; ++j) {
      m.a[col * n + j] = m.a[col * n + j] * s % q;
      inv.a[col * n + j] = inv.a[col * n + j] * s % q;
    }
    for (int i = 0; i < n; ++i) {
      const int f = m.a[i * n + col];
      if (i == col || f == 0) continue;
      for (int j = 0; j < n; ++j) {
        m.a[i * n + j] = mod(m.a[i * n + j] - f * m.a[col * n + j], q);
        inv.a[i * n + j] = mod(inv.a[i * n + j] - f * inv.a[col * n + j], q);
      }
    }
  }
  return inv;
}

FqMatrix mat_transpose(const FqMatrix& x) {
  FqMatrix t = x;
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.n; ++j) t.a[j * x.n + i] = x.a[i * x.n + j];
  }
  return t;
}

FqMatrix theta(const FqMatrix& x, int q) { return mat_inverse(mat_transpose(x), q); }

Integer gl_order(int n, int q) {
  Integer qn;
  mpz_ui_pow_ui(qn.get_mpz_t(), q, n);
  Integer order = 1;
  Integer qi = 1;
  for (int i = 0; i < n; ++i) {
    order *= qn - qi;
    qi *= q;
  }
  return order;
}

void enumerate_gl(int n, int q, const std::function<void(const FqMatrix&)>& fn, double cap) {
  check_field(n, q);
  const double visits = std::pow(static_cast<double>(q), n * n);
  if (visits > cap)
    throw ResourceLimit("enumerating GL_" + std::to_string(n) + "(F_" + std::to_string(q) + ") visits " +
                        std::to_string(static_cast<long long>(visits)) + " matrices, above the cap");
  FqMatrix m{n, std::vector<int>(n * n, 0)};
  for (;;) {
    if (mat_det(m, q) != 0) fn(m);
    // Odometer over entries, last entry fastest (row-major order).
    int i = n * n - 1;
    while (i >= 0 && ++m.a[i] == q) {
      m.a[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

// ---------------------------------------------------------------------------
// Orbits.

FqOrbit FqOrbit::central(int zeta) {
  FqOrbit o;
  o.central_ = true;
  o.eig_ = {{zeta, 0}};
  return o;
}

FqOrbit FqOrbit::split(std::vector<std::pair<int, int>> eigen_multiplicities) {
  if (eigen_multiplicities.empty()) throw std::invalid_argument("split orbit needs eigenvalues");
  FqOrbit o;
  o.eig_ = std::move(eigen_multiplicities);
  return o;
}

std::vector<std::pair<int, int>> FqOrbit::spectrum(int n, int q) const {
  std::vector<std::pair<int, int>> out;
  if (central_) {
    out.emplace_back(mod(eig_[0].first, q), n);
  } else {
    int total = 0;
    for (const auto& [lambda, m] : eig_) {
      if (m < 1) throw std::invalid_argument("eigenvalue multiplicity must be >= 1");
      out.emplace_back(mod(lambda, q), m);
      total += m;
    }
    if (total != n)
      throw std::invalid_argument("orbit " + to_string() + " has multiplicities summing to " + std::to_string(total) +
                                  ", not n=" + std::to_string(n));
  }
  std::set<int> seen;
  for (const auto& [lambda, m] : out) {
    if (lambda == 0) throw std::invalid_argument("orbit " + to_string() + " has eigenvalue 0 mod " + std::to_string(q));
    if (!seen.insert(lambda).second)
      throw std::invalid_argument("orbit " + to_string() + " repeats an eigenvalue mod " + std::to_string(q));
  }
  return out;
}

std::vector<FqMatrix> FqOrbit::members(int n, int q, double cap) const {
  check_field(n, q);
  const auto spec = spectrum(n, q);
  FqMatrix diag{n, std::vector<int>(n * n, 0)};
  int pos = 0;
  for (const auto& [lambda, m] : spec) {
    for (int c = 0; c < m; ++c, ++pos) diag.a[pos * n + pos] = lambda;
  }
  if (spec.size() == 1) return {diag};
  std::set<std::vector<int>> seen;
  std::vector<FqMatrix> out;
  enumerate_gl(n, q, [&](const FqMatrix& g) {
    FqMatrix c = mat_mul(mat_mul(g, diag, q), mat_inverse(g, q), q);
    if (seen.insert(c.a).second) out.push_back(std::move(c));
  }, cap);
  return out;
}

std::string FqOrbit::to_string() const {
  if (central_) return "central(" + std::to_string(eig_[0].first) + ")";
  std::string s = "split(";
  for (std::size_t i = 0; i < eig_.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(eig_[i].first) + "^" + std::to_string(eig_[i].second);
  }
  return s + ")";
}

bool fq_generic(const std::vector<FqOrbit>& orbits, int n, int q) {
  check_field(n, q);
  if (orbits.empty()) throw std::invalid_argument("fq_generic: empty orbit tuple");
  // products[v] = set of products of sub-multisets of size v, combined over orbits.
  std::vector<std::set<int>> combined(n + 1);
  combined[0] = {1};
  bool first = true;
  for (const auto& o : orbits) {
    std::vector<std::set<int>> own(n + 1);
    own[0] = {1};
    for (const auto& [lambda, m] : o.spectrum(n, q)) {
      std::vector<std::set<int>> next(n + 1);
      for (int v = 0; v <= n; ++v) {
        for (int p : own[v]) {
          long x = p;
          for (int c = 0; c <= m && v + c <= n; ++c) {
            next[v + c].insert(static_cast<int>(x));
            x = x * lambda % q;
          }
        }
      }
      own = std::move(next);
    }
    if (first) {
      combined = std::move(own);
      first = false;
      continue;
    }
    std::vector<std::set<int>> next(n + 1);
    for (int v = 0; v <= n; ++v) {
      for (int a : combined[v]) {
        for (int b : own[v]) next[v].insert(static_cast<int>(static_cast<long>(a) * b % q));
      }
    }
    combined = std::move(next);
  }
  for (int v = 1; v < n; ++v) {
    if (combined[v].contains(1)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Counting.

namespace {

using Key = std::uint64_t;
using Histogram = std::unordered_map<Key, Integer>;

Key encode(const FqMatrix& m, int q) {
  Key k = 0;
  for (int x : m.a) k = k * q + x;
  return k;
}

FqMatrix decode(Key k, int n, int q) {
  FqMatrix m{n, std::vector<int>(n * n, 0)};
  for (int i = n * n - 1; i >= 0; --i) {
    m.a[i] = static_cast<int>(k % q);
    k /= q;
  }
  return m;
}

struct Field {
  int n;
  int q;
};

// Distribution of x * y for x ~ a, y ~ b. Work is split over the entries of a.
Histogram convolve(const Histogram& a, const Histogram& b, Field f, int threads) {
  std::vector<std::pair<FqMatrix, const Integer*>> left;
  std::vector<std::pair<FqMatrix, const Integer*>> right;
  for (const auto& [k, c] : a) left.emplace_back(decode(k, f.n, f.q), &c);
  for (const auto& [k, c] : b) right.emplace_back(decode(k, f.n, f.q), &c);
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(left.size())));
  std::vector<Histogram> partial(workers);
  auto work = [&](int w) {
    for (std::size_t i = w; i < left.size(); i += workers) {
      for (const auto& [y, cy] : right) partial[w][encode(mat_mul(left[i].first, y, f.q), f.q)] += *left[i].second * *cy;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  Histogram out = std::move(partial[0]);
  for (int w = 1; w < workers; ++w) {
    for (auto& [k, c] : partial[w]) out[k] += c;
  }
  return out;
}

Histogram unit(Field f) { return {{encode(FqMatrix::scalar(f.n, 1, f.q), f.q), Integer(1)}}; }

Histogram orbit_product(const std::vector<FqOrbit>& orbits, Field f, int threads, double cap) {
  Histogram dist = unit(f);
  for (const auto& o : orbits) {
    Histogram h;
    for (const auto& m : o.members(f.n, f.q, cap)) h[encode(m, f.q)] += 1;
    dist = convolve(dist, h, f, threads);
  }
  return dist;
}

Integer close_relation(const Histogram& words, const Histogram& punctures, Field f) {
  // Number of (w, z) with w * z = 1.
  Integer raw = 0;
  for (const auto& [k, c] : words) {
    auto it = punctures.find(encode(mat_inverse(decode(k, f.n, f.q), f.q), f.q));
    if (it != punctures.end()) raw += c * it->second;
  }
  return raw;
}

Histogram word_power(const Histogram& generator, int count, Field f, int threads) {
  Histogram dist = unit(f);
  for (int i = 0; i < count; ++i) dist = convolve(dist, generator, f, threads);
  return dist;
}

CountReport finish(CountReport rep, const std::vector<FqOrbit>& orbits, const CountOptions& opts) {
  for (const auto& o : orbits) rep.orbits.push_back(o.to_string());
  rep.gl = gl_order(rep.n, rep.q);
  rep.groupoid = Scalar(rep.raw, rep.gl);
  rep.groupoid.canonicalize();
  if (opts.formula_value) {
    rep.formula = opts.formula_value;
    rep.match = rep.groupoid == *opts.formula_value;
  }
  return rep;
}

void check_cap(double cost, const CountOptions& opts, const std::string& what) {
  if (cost > opts.iteration_cap) {
    std::ostringstream os;
    os << what << ": estimated cost " << cost << " exceeds the iteration cap " << opts.iteration_cap;
    throw ResourceLimit(os.str());
  }
}

void check_orbits(const std::vector<FqOrbit>& orbits, int n, int q) {
  if (orbits.empty()) throw std::invalid_argument("at least one puncture orbit is required");
  for (const auto& o : orbits) (void)o.spectrum(n, q);
}

}  // namespace

double estimate_cost(int n, int q, int generators, int punctures) {
  const double visits = std::pow(static_cast<double>(q), n * n);
  const double gl = gl_order(n, q).get_d();
  return visits + (generators + punctures) * gl * gl;
}

CountReport count_nonorientable(int r, const std::vector<FqOrbit>& orbits, int q, int n, const CountOptions& opts) {
  check_field(n, q);
  if (r < 1) throw std::invalid_argument("non-orientable count needs r >= 1");
  check_orbits(orbits, n, q);
  const double cost = estimate_cost(n, q, r, static_cast<int>(orbits.size()));
  check_cap(cost, opts, "count_nonorientable");
  const Field f{n, q};

  Histogram gen;
  enumerate_gl(n, q, [&](const FqMatrix& d) { gen[encode(mat_mul(d, theta(d, q), q), q)] += 1; }, opts.iteration_cap);

  CountReport rep;
  rep.surface = "nonorientable r=" + std::to_string(r) + " k=" + std::to_string(orbits.size());
  rep.q = q;
  rep.n = n;
  rep.generic = fq_generic(orbits, n, q);
  rep.estimated_cost = cost;
  rep.raw = close_relation(word_power(gen, r, f, opts.threads), orbit_product(orbits, f, opts.threads, opts.iteration_cap), f);
  return finish(std::move(rep), orbits, opts);
}

CountReport count_orientable(int g, const std::vector<FqOrbit>& orbits, int q, int n, const CountOptions& opts) {
  check_field(n, q);
  if (g < 0) throw std::invalid_argument("orientable count needs g >= 0");
  check_orbits(orbits, n, q);
  const double cost = estimate_cost(n, q, g > 0 ? g + 1 : 0, static_cast<int>(orbits.size()));
  check_cap(cost, opts, "count_orientable");
  const Field f{n, q};

  Histogram gen;
  if (g > 0) {
    std::vector<std::pair<FqMatrix, FqMatrix>> group;
    enumerate_gl(n, q, [&](const FqMatrix& a) { group.emplace_back(a, mat_inverse(a, q)); }, opts.iteration_cap);
    for (const auto& [a, ai] : group) {
      for (const auto& [b, bi] : group) gen[encode(mat_mul(mat_mul(a, b, q), mat_mul(ai, bi, q), q), q)] += 1;
    }
  }

  CountReport rep;
  rep.surface = "orientable g=" + std::to_string(g) + " k=" + std::to_string(orbits.size());
  rep.q = q;
  rep.n = n;
  rep.generic = fq_generic(orbits, n, q);
  rep.estimated_cost = cost;
  rep.raw = close_relation(word_power(gen, g, f, opts.threads), orbit_product(orbits, f, opts.threads, opts.iteration_cap), f);
  return finish(std::move(rep), orbits, opts);
}

std::string CountReport::to_json() const {
  nlohmann::ordered_json j;
  j["surface"] = surface;
  j["orbits"] = orbits;
  j["q"] = q;
  j["n"] = n;
  j["generic"] = generic;
  j["raw"] = raw.get_str();
  j["gl_order"] = gl.get_str();
  j["groupoid"] = groupoid.get_str();
  j["formula"] = formula ? nlohmann::ordered_json(formula->get_str()) : nlohmann::ordered_json(nullptr);
  j["match"] = match ? nlohmann::ordered_json(*match) : nlohmann::ordered_json(nullptr);
  j["estimated_cost"] = estimated_cost;
  return j.dump(2);
}

std::string CountReport::to_text() const {
  std::ostringstream os;
  os << surface << " n=" << n << " q=" << q << "\n";
  os << "orbits:";
  for (const auto& o : orbits) os << " " << o;
  os << "\ngeneric: " << (generic ? "yes" : "no") << "\n";
  os << "raw: " << raw.get_str() << "\n";
  os << "|GL|: " << gl.get_str() << "\n";
  os << "groupoid: " << groupoid.get_str() << "\n";
  if (formula) os << "formula: " << formula->get_str() << "\nmatch: " << (*match ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace cstk
