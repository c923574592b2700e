#include "cstk/charstack.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cstk/hlvkernel.hpp"

namespace cstk {

using Json = nlohmann::ordered_json;

namespace {

Scalar frac(Scalar a) {
  a.canonicalize();
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  return a - Scalar(fl);
}

std::string angle_text(const Scalar& a) { return a.get_str(); }

}  // namespace

// ---------------------------------------------------------------------------
// Surfaces.

SurfaceSpec SurfaceSpec::nonorientable(int r, int k) {
  SurfaceSpec s{SurfaceKind::nonorientable, r, 0, k};
  s.validate();
  return s;
}

SurfaceSpec SurfaceSpec::orientable(int g, int k) {
  SurfaceSpec s{SurfaceKind::orientable, 0, g, k};
  s.validate();
  return s;
}

void SurfaceSpec::validate() const {
  if (k < 1) throw std::invalid_argument("surface needs k >= 1 punctures");
  if (kind == SurfaceKind::nonorientable && r < 1) throw std::invalid_argument("non-orientable surface needs r >= 1");
  if (kind == SurfaceKind::orientable && g < 0) throw std::invalid_argument("orientable surface needs g >= 0");
}

int SurfaceSpec::m() const { return kind == SurfaceKind::nonorientable ? r : 2 * g; }

std::string SurfaceSpec::to_string() const {
  if (kind == SurfaceKind::nonorientable) return "nonorientable r=" + std::to_string(r) + " k=" + std::to_string(k);
  return "orientable g=" + std::to_string(g) + " k=" + std::to_string(k);
}

// ---------------------------------------------------------------------------
// Orbits and genericity.

OrbitSpec::OrbitSpec(std::vector<Eigenvalue> eigenvalues) {
  std::map<Scalar, int> merged;
  for (auto& e : eigenvalues) {
    if (e.multiplicity < 1) throw std::invalid_argument("eigenvalue multiplicity must be >= 1");
    merged[frac(e.angle)] += e.multiplicity;
  }
  if (merged.empty()) throw std::invalid_argument("orbit needs at least one eigenvalue");
  for (const auto& [a, m] : merged) {
    eig_.push_back({a, m});
    n_ += m;
  }
}

OrbitSpec OrbitSpec::central(int n, int d) {
  if (n < 1) throw std::invalid_argument("central orbit needs n >= 1");
  return OrbitSpec({{Scalar(d, 2 * n), n}});
}

Partition OrbitSpec::type() const {
  std::vector<int> parts;
  for (const auto& e : eig_) parts.push_back(e.multiplicity);
  return Partition(std::move(parts));
}

std::string OrbitSpec::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < eig_.size(); ++i) {
    if (i > 0) s += ", ";
    s += angle_text(eig_[i].angle);
    if (eig_[i].multiplicity > 1) s += "^" + std::to_string(eig_[i].multiplicity);
  }
  return s + "}";
}

std::string GenericityResult::describe() const {
  if (generic) return "generic";
  std::string s = "not generic: dimension " + std::to_string(witness->dimension) + ", sub-spectra";
  for (const auto& part : witness->parts) s += " " + OrbitSpec(part).to_string();
  return s + " have angles summing to an integer";
}

namespace {

// For one orbit: every reachable (size, angle sum mod 1), with one choice of
// counts per eigenvalue realizing it.
using Choice = std::vector<int>;
using SumTable = std::vector<std::map<Scalar, Choice>>;  // indexed by size

SumTable sub_multiset_sums(const OrbitSpec& o) {
  const auto& eig = o.eigenvalues();
  SumTable table(o.n() + 1);
  table[0].emplace(Scalar(0), Choice(eig.size(), 0));
  for (std::size_t j = 0; j < eig.size(); ++j) {
    SumTable next(o.n() + 1);
    for (int v = 0; v <= o.n(); ++v) {
      for (const auto& [s, choice] : table[v]) {
        for (int c = 0; c <= eig[j].multiplicity && v + c <= o.n(); ++c) {
          Choice ch = choice;
          ch[j] = c;
          next[v + c].emplace(frac(s + eig[j].angle * c), std::move(ch));
        }
      }
    }
    table = std::move(next);
  }
  return table;
}

}  // namespace

GenericityResult is_generic(std::span<const OrbitSpec> orbits) {
  if (orbits.empty()) throw std::invalid_argument("is_generic: empty orbit tuple");
  const int n = orbits.front().n();
  for (const auto& o : orbits) {
    if (o.n() != n)
      throw std::invalid_argument("is_generic: orbits of different sizes (" + std::to_string(n) + " and " +
                                  std::to_string(o.n()) + ")");
  }
  std::vector<SumTable> tables;
  for (const auto& o : orbits) tables.push_back(sub_multiset_sums(o));
  for (int v = 1; v < n; ++v) {
    // Reachable totals over the first i orbits, each with its choices.
    std::map<Scalar, std::vector<Choice>> acc{{Scalar(0), {}}};
    for (const auto& table : tables) {
      std::map<Scalar, std::vector<Choice>> next;
      for (const auto& [s, choices] : acc) {
        for (const auto& [t, choice] : table[v]) {
          const Scalar key = frac(s + t);
          if (next.contains(key)) continue;
          auto extended = choices;
          extended.push_back(choice);
          next.emplace(key, std::move(extended));
        }
      }
      acc = std::move(next);
    }
    auto hit = acc.find(Scalar(0));
    if (hit != acc.end()) {
      GenericityWitness w{v, {}};
      for (std::size_t i = 0; i < orbits.size(); ++i) {
        std::vector<Eigenvalue> part;
        const auto& eig = orbits[i].eigenvalues();
        for (std::size_t j = 0; j < eig.size(); ++j) {
          if (hit->second[i][j] > 0) part.push_back({eig[j].angle, hit->second[i][j]});
        }
        w.parts.push_back(std::move(part));
      }
      return {false, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

namespace {

constexpr int kMaxDenominator = 60;
constexpr long kMaxCandidates = 2'000'000;

struct RepresentativeSearch {
  const MultiPartition& mu;
  int denom = 1;
  long budget = kMaxCandidates;
  std::vector<std::vector<int>> numerators;  // per component, per part
  std::optional<std::vector<OrbitSpec>> found;

  // Fills part j of component i; numerators within a component are distinct.
  bool fill(std::size_t i, std::size_t j) {
    if (i == mu.components().size()) return check();
    const auto parts = mu[i].parts();
    if (j == parts.size()) return fill(i + 1, 0);
    for (int a = 0; a < denom; ++a) {
      auto& used = numerators[i];
      if (std::find(used.begin(), used.end(), a) != used.end()) continue;
      // Parts of equal size are interchangeable: keep their numerators increasing.
      if (j > 0 && parts[j] == parts[j - 1] && a < used.back()) continue;
      used.push_back(a);
      const bool done = fill(i, j + 1);
      used.pop_back();
      if (done || budget <= 0) return done;
    }
    return false;
  }

  bool check() {
    --budget;
    long total = 0;
    for (std::size_t i = 0; i < numerators.size(); ++i) {
      const auto parts = mu[i].parts();
      for (std::size_t j = 0; j < parts.size(); ++j) total += static_cast<long>(parts[j]) * numerators[i][j];
    }
    if (total % denom != 0) return false;
    std::vector<OrbitSpec> orbits;
    for (std::size_t i = 0; i < numerators.size(); ++i) {
      std::vector<Eigenvalue> eig;
      const auto parts = mu[i].parts();
      for (std::size_t j = 0; j < parts.size(); ++j) eig.push_back({Scalar(numerators[i][j], denom), parts[j]});
      orbits.emplace_back(std::move(eig));
    }
    if (!is_generic(orbits).generic) return false;
    found = std::move(orbits);
    return true;
  }
};

}  // namespace

std::optional<std::vector<OrbitSpec>> generic_representative(const MultiPartition& mu) {
  RepresentativeSearch search{mu, 1, kMaxCandidates, {}, std::nullopt};
  search.numerators.resize(mu.alphabets());
  for (int denom = 1; denom <= kMaxDenominator && search.budget > 0; ++denom) {
    search.denom = denom;
    if (search.fill(0, 0)) return search.found;
  }
  return std::nullopt;
}

long d_mu(const SurfaceSpec& surface, const MultiPartition& mu) {
  surface.validate();
  if (mu.alphabets() != surface.k)
    throw std::invalid_argument("multipartition " + mu.to_string() + " has " + std::to_string(mu.alphabets()) +
                                " components but the surface has k=" + std::to_string(surface.k));
  const long n = mu.size();
  return n * n * (surface.m() - 2 + surface.k) + 2 - mu.sum_of_squares();
}

// ---------------------------------------------------------------------------
// Series.

namespace {

const RatFunc kZ = RatFunc::variable(Var::z);
const RatFunc kW = RatFunc::variable(Var::w);
const RatFunc kT = RatFunc::variable(Var::t);
const RatFunc kU = RatFunc::variable(Var::u);

void attach_orbits(SeriesReport& rep, std::optional<std::vector<OrbitSpec>> orbits) {
  if (orbits) {
    if (static_cast<int>(orbits->size()) != rep.mu.alphabets())
      throw std::invalid_argument("expected " + std::to_string(rep.mu.alphabets()) + " orbits, got " +
                                  std::to_string(orbits->size()));
    for (std::size_t i = 0; i < orbits->size(); ++i) {
      if ((*orbits)[i].type() != rep.mu[i])
        throw std::invalid_argument("orbit " + (*orbits)[i].to_string() + " has type " +
                                    (*orbits)[i].type().to_string() + ", expected " + rep.mu[i].to_string());
    }
    rep.log.push_back("orbits supplied by the caller");
  } else {
    orbits = generic_representative(rep.mu);
    if (!orbits) {
      rep.log.push_back("no generic representative found within the search limits");
      return;
    }
    rep.log.push_back("orbits chosen as a generic representative of the multiplicity types");
  }
  const auto verdict = is_generic(*orbits);
  rep.generic = verdict.generic;
  rep.log.push_back("genericity: " + verdict.describe());
  rep.orbits = std::move(*orbits);
}

void finish_value(SeriesReport& rep, const RatFunc& in_u) {
  if (auto in_q = rewrite_u_as_sqrt_q(in_u)) {
    rep.value = *in_q;
    rep.rewritten_in_q = true;
    rep.polynomial = in_q->is_polynomial() && !in_q->num().has_negative_exponents();
  } else {
    rep.value = in_u;
    rep.log.push_back("odd powers of u remain: value is kept in u = sqrt(q)");
  }
}

RatFunc flip_signs(const RatFunc& f) { return substitute(f, {{Var::z, -kZ}, {Var::w, -kW}}); }

SeriesReport start_report(std::string formula, const SurfaceSpec& surface, const MultiPartition& mu,
                          std::optional<std::vector<OrbitSpec>> orbits, RatFunc& hh) {
  SeriesReport rep;
  rep.formula = std::move(formula);
  rep.surface = surface;
  rep.mu = mu;
  rep.d = d_mu(surface, mu);
  attach_orbits(rep, std::move(orbits));
  hh = hlv_HH(mu, surface.m());
  rep.log.push_back("HH = " + hh.to_string());
  if (rep.d % 2 != 0) rep.log.push_back("d is odd: the prefactor carries a half-integer power of q");
  const RatFunc flipped = flip_signs(hh);
  const bool parity_odd = (static_cast<long>(mu.size()) * surface.m()) % 2 != 0;
  rep.checks.emplace_back("hh_sign_flip_equals_parity_sign", flipped == (parity_odd ? -hh : hh));
  // The other square root sends u -> -u: HH picks up the sign above and the
  // prefactor picks up (-1)^d, so the series is unchanged when the two agree.
  rep.checks.emplace_back("independent_of_square_root_branch", flipped == (rep.d % 2 != 0 ? -hh : hh));
  return rep;
}

RatFunc eseries_in_u(const RatFunc& hh, long d) {
  const RatFunc at = substitute(hh, {{Var::z, kU}, {Var::w, kU.inverse()}});
  return at * kU.pow(static_cast<int>(d)) / (kU * kU - RatFunc(1));
}

RatFunc mixed_in_u(const RatFunc& hh, long d) {
  const RatFunc tu = kT * kU;
  const RatFunc at = substitute(hh, {{Var::z, tu}, {Var::w, -kU.inverse()}});
  return at * tu.pow(static_cast<int>(d)) / (tu * tu - RatFunc(1));
}

}  // namespace

SeriesReport eseries(const SurfaceSpec& surface, const MultiPartition& mu,
                     std::optional<std::vector<OrbitSpec>> orbits) {
  RatFunc hh;
  SeriesReport rep = start_report("eseries", surface, mu, std::move(orbits), hh);
  rep.branch = "sqrt(q) = u";
  finish_value(rep, eseries_in_u(hh, rep.d));
  rep.checks.emplace_back("d_even_implies_polynomial_in_q", rep.d % 2 != 0 || rep.rewritten_in_q);
  return rep;
}

SeriesReport mixed_series(const SurfaceSpec& surface, const MultiPartition& mu,
                          std::optional<std::vector<OrbitSpec>> orbits) {
  RatFunc hh;
  SeriesReport rep = start_report("mixed", surface, mu, std::move(orbits), hh);
  rep.branch = "sqrt(q t^2) = t u, sqrt(q) = u";
  const RatFunc in_u = mixed_in_u(hh, rep.d);
  finish_value(rep, in_u);
  const RatFunc e = eseries_in_u(hh, rep.d);
  rep.checks.emplace_back("t_minus_one_equals_eseries", substitute(in_u, {{Var::t, RatFunc(-1)}}) == e);
  return rep;
}

namespace {

Json surface_json(const SurfaceSpec& s) {
  Json j;
  j["kind"] = s.kind == SurfaceKind::orientable ? "orientable" : "nonorientable";
  if (s.kind == SurfaceKind::orientable) {
    j["g"] = s.g;
  } else {
    j["r"] = s.r;
  }
  j["k"] = s.k;
  return j;
}

Json report_json(const SeriesReport& r) {
  Json j;
  j["formula"] = r.formula;
  j["surface"] = surface_json(r.surface);
  j["mu"] = r.mu.to_string();
  j["orbits"] = Json::array();
  for (const auto& o : r.orbits) j["orbits"].push_back(o.to_string());
  j["generic"] = r.generic ? Json(*r.generic) : Json(nullptr);
  j["d"] = r.d;
  j["value"] = r.value.to_string();
  j["rewritten_in_q"] = r.rewritten_in_q;
  j["polynomial_in_q_t"] = r.polynomial;
  j["branch"] = r.branch;
  Json checks = Json::object();
  for (const auto& [name, ok] : r.checks) checks[name] = ok;
  j["checks"] = checks;
  j["log"] = r.log;
  return j;
}

}  // namespace

std::string SeriesReport::to_json() const { return report_json(*this).dump(2); }

std::string SeriesReport::to_latex() const {
  const std::string lhs = formula == "mixed" ? "H_c(\\mathcal{M}, q, t)" : "E(\\mathcal{M}, q)";
  return lhs + " = " + value.to_latex();
}

std::string SeriesReport::to_text() const {
  std::ostringstream os;
  os << formula << " " << surface.to_string() << " mu=" << mu.to_string() << "\n";
  os << "value: " << value.to_string() << "\n";
  os << "d: " << d << "\n";
  os << "generic: " << (generic ? (*generic ? "yes" : "no") : "unknown") << "\n";
  os << "polynomial: " << (polynomial ? "yes" : "no") << "\n";
  for (const auto& [name, ok] : checks) os << "check " << name << ": " << (ok ? "pass" : "fail") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Counterexample.

CounterexampleVerdict counterexample_report(int n, int d) {
  if (n < 2) throw std::invalid_argument("counterexample needs n >= 2");
  if (d % 2 != 0) throw std::invalid_argument("counterexample needs d even (got d=" + std::to_string(d) + ")");
  const OrbitSpec central = OrbitSpec::central(n, d);
  const std::vector<OrbitSpec> orbits{central};
  if (const auto g = is_generic(orbits); !g.generic)
    throw std::invalid_argument("counterexample needs a generic central orbit; " + central.to_string() + " is " +
                                g.describe());
  CounterexampleVerdict v;
  v.n = n;
  v.d = d;
  const MultiPartition mu{Partition{n}};
  v.mixed = mixed_series(SurfaceSpec::nonorientable(2, 1), mu, orbits);

  const RatFunc q = RatFunc::variable(Var::q);
  const RatFunc qt2 = q * kT * kT;
  const RatFunc conjectured = qt2 + kT;
  v.equals_carlsson_value = v.mixed.value == conjectured * conjectured / (qt2 - RatFunc(1));
  v.differs_from_conjecture = !(v.mixed.value == conjectured);
  v.e_specialization_ok = substitute(v.mixed.value, {{Var::t, RatFunc(-1)}}) == q - RatFunc(1);

  const RatFunc hh = hlv_HH(mu, 2);
  const RatFunc lhs = kU * kU * kT * kT * substitute(hh, {{Var::z, kT * kU}, {Var::w, -kU.inverse()}});
  const auto lhs_q = rewrite_u_as_sqrt_q(lhs);
  v.carlsson_identity = lhs_q && *lhs_q == conjectured * conjectured;
  return v;
}

std::string CounterexampleVerdict::to_json() const {
  Json j;
  j["n"] = n;
  j["d"] = d;
  j["mixed"] = report_json(mixed);
  j["verdicts"] = {{"equals_carlsson_value", equals_carlsson_value},
                   {"differs_from_conjecture", differs_from_conjecture},
                   {"e_specialization_is_q_minus_1", e_specialization_ok}};
  j["carlsson_identity"] = carlsson_identity;
  j["all_hold"] = all_hold();
  return j.dump(2);
}

std::string CounterexampleVerdict::to_text() const {
  auto mark = [](bool b) { return b ? "true" : "false"; };
  std::ostringstream os;
  os << "n=" << n << " d=" << d << "\n";
  os << "mixed series: " << mixed.value.to_string() << "\n";
  os << "equals (q*t^2 + t)^2/(q*t^2 - 1): " << mark(equals_carlsson_value) << "\n";
  os << "differs from q*t^2 + t: " << mark(differs_from_conjecture) << "\n";
  os << "t = -1 gives q - 1: " << mark(e_specialization_ok) << "\n";
  os << "(q*t^2) HH(t*u, -1/u) = (q*t^2 + t)^2: " << mark(carlsson_identity) << "\n";
  return os.str();
}

}  // namespace cstk
