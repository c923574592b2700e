#include "cli_app.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cstk/charstack.hpp"
#include "cstk/ffcount.hpp"
#include "cstk/hlvkernel.hpp"
#include "cstk/macdonald.hpp"

namespace cstk::cli {

namespace {

using Json = nlohmann::ordered_json;

struct SurfaceFlags {
  bool orientable = false;
  bool nonorientable = false;
  int r = 1;
  int g = 1;
  int k = 1;

  void add_to(CLI::App* cmd) {
    auto* o = cmd->add_flag("--orientable", orientable, "closed orientable surface of genus g");
    auto* no = cmd->add_flag("--nonorientable", nonorientable, "connected sum of r projective planes (default)");
    o->excludes(no);
    cmd->add_option("--r", r, "number of cross-caps")->check(CLI::PositiveNumber);
    cmd->add_option("--g", g, "genus")->check(CLI::NonNegativeNumber);
    cmd->add_option("--k", k, "number of punctures")->check(CLI::PositiveNumber);
  }

  [[nodiscard]] SurfaceSpec spec(int punctures) const {
    return orientable ? SurfaceSpec::orientable(g, punctures) : SurfaceSpec::nonorientable(r, punctures);
  }
};

// "1/3,2/3" or "1/2^2": angles in Q/Z with optional multiplicities.
OrbitSpec parse_orbit(const std::string& text) {
  std::vector<Eigenvalue> eig;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    int mult = 1;
    if (const auto caret = item.find('^'); caret != std::string::npos) {
      mult = std::stoi(item.substr(caret + 1));
      item = item.substr(0, caret);
    }
    Scalar angle;
    if (angle.set_str(item, 10) != 0) throw std::invalid_argument("malformed angle \"" + item + "\"");
    angle.canonicalize();
    eig.push_back({angle, mult});
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return OrbitSpec(std::move(eig));
}

// "central:-1" or "split:1^1,2^1".
FqOrbit parse_fq_orbit(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("orbit \"" + text + "\" needs a central: or split: prefix");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "central") return FqOrbit::central(std::stoi(body));
  if (kind != "split") throw std::invalid_argument("unknown orbit kind \"" + kind + "\"");
  std::vector<std::pair<int, int>> eig;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto caret = item.find('^');
    if (caret == std::string::npos) {
      eig.emplace_back(std::stoi(item), 1);
    } else {
      eig.emplace_back(std::stoi(item.substr(0, caret)), std::stoi(item.substr(caret + 1)));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return FqOrbit::split(std::move(eig));
}

Partition fq_orbit_type(const FqOrbit& o, int n, int q) {
  std::vector<int> parts;
  for (const auto& [lambda, m] : o.spectrum(n, q)) parts.push_back(m);
  return Partition(std::move(parts));
}

class MacdonaldCache {
 public:
  MacdonaldCache() {
    if (const char* dir = std::getenv("CSTK_CACHE_DIR"); dir != nullptr && *dir != '\0') {
      path_ = std::filesystem::path(dir) / "macdonald-table.txt";
      if (std::ifstream in(*path_); in) {
        macdonald_table().restore(in);
        existed_ = true;
      }
      loaded_ = macdonald_table().size();
    }
  }
  ~MacdonaldCache() {
    if (!path_ || (existed_ && macdonald_table().size() == loaded_)) return;
    std::error_code ec;
    std::filesystem::create_directories(path_->parent_path(), ec);
    std::ofstream out(*path_);
    if (out) macdonald_table().dump(out);
  }
  MacdonaldCache(const MacdonaldCache&) = delete;
  MacdonaldCache& operator=(const MacdonaldCache&) = delete;

 private:
  std::optional<std::filesystem::path> path_;
  std::size_t loaded_ = 0;
  bool existed_ = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact symbolic and finite-field computations for character stacks of surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read options from a TOML/INI file; command-line flags win");
  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "latex"}));

  // hlv
  auto* hlv = app.add_subcommand("hlv", "print HH_{mu,m}(z, w)");
  std::string hlv_mu;
  int hlv_m = 0;
  int hlv_n = 0;
  hlv->add_option("--mu", hlv_mu, "multipartition, e.g. \"(2)|(1,1)\"")->required();
  hlv->add_option("--m", hlv_m, "kernel exponent")->required()->check(CLI::NonNegativeNumber);
  hlv->add_option("--N", hlv_n, "truncation degree (default |mu|)")->check(CLI::NonNegativeNumber);

  // eseries / mixed
  SurfaceFlags es_surface;
  SurfaceFlags mx_surface;
  std::string es_mu;
  std::string mx_mu;
  std::vector<std::string> es_orbits;
  std::vector<std::string> mx_orbits;
  auto* es = app.add_subcommand("eseries", "E-series of the character stack");
  auto* mx = app.add_subcommand("mixed", "mixed Poincare series predicted by the kernel formula");
  for (auto [cmd, surface, mu, orbits] : {std::tuple{es, &es_surface, &es_mu, &es_orbits},
                                          std::tuple{mx, &mx_surface, &mx_mu, &mx_orbits}}) {
    surface->add_to(cmd);
    cmd->add_option("--mu", *mu, "multipartition of eigenvalue multiplicities")->required();
    cmd->add_option("--orbit", *orbits, "orbit as angles in Q/Z, e.g. \"1/3,2/3\" or \"1/2^2\"; repeat per puncture");
  }

  // verify-counterexample
  auto* ce = app.add_subcommand("verify-counterexample", "check the r=2 mixed series against the three expected facts");
  int ce_n = 2;
  int ce_d = 2;
  ce->add_option("--n", ce_n, "rank")->required();
  ce->add_option("--d", ce_d, "degree (even)")->required();

  // count
  auto* ct = app.add_subcommand("count", "brute-force groupoid count over F_q");
  SurfaceFlags ct_surface;
  ct_surface.add_to(ct);
  int ct_n = 1;
  int ct_q = 3;
  std::optional<int> ct_zeta;
  std::vector<std::string> ct_orbits;
  double ct_cap = 1e9;
  int ct_threads = 1;
  ct->add_option("--n", ct_n, "matrix size")->required();
  ct->add_option("--q", ct_q, "prime field size")->required();
  ct->add_option("--zeta", ct_zeta, "single central orbit zeta*I (default 1 for n=1, -1 otherwise)");
  ct->add_option("--orbit", ct_orbits, "orbit \"central:z\" or \"split:a^m,b^m\"; repeat per puncture");
  ct->add_option("--cap", ct_cap, "iteration cap");
  ct->add_option("--threads", ct_threads, "worker threads")->check(CLI::PositiveNumber);

  // macdonald
  auto* md = app.add_subcommand("macdonald", "modified Macdonald polynomial H~_mu(x; q, t)");
  std::string md_mu;
  std::string md_basis = "s";
  md->add_option("--mu", md_mu, "partition")->required();
  md->add_option("--basis", md_basis, "output basis")->check(CLI::IsMember({"m", "s", "h", "e", "p"}));

  // generic
  auto* gn = app.add_subcommand("generic", "genericity of a tuple of orbits");
  std::vector<std::string> gn_orbits;
  gn->add_option("--orbit", gn_orbits, "orbit as angles in Q/Z; repeat per puncture")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  MacdonaldCache cache;
  try {
    if (hlv->parsed()) {
      const MultiPartition mu = parse_multipartition(hlv_mu);
      const RatFunc value = hlv_HH(mu, hlv_m, hlv_n);
      if (format == "json") {
        Json j;
        j["mu"] = mu.to_string();
        j["m"] = hlv_m;
        j["N"] = hlv_n == 0 ? mu.size() : hlv_n;
        j["value"] = value.to_string();
        out << j.dump(2) << "\n";
      } else {
        out << (format == "latex" ? value.to_latex() : value.to_string()) << "\n";
      }
      return kOk;
    }

    for (auto [cmd, surface, mu_text, orbit_texts] : {std::tuple{es, &es_surface, &es_mu, &es_orbits},
                                                      std::tuple{mx, &mx_surface, &mx_mu, &mx_orbits}}) {
      if (!cmd->parsed()) continue;
      const MultiPartition mu = parse_multipartition(*mu_text);
      std::optional<std::vector<OrbitSpec>> orbits;
      if (!orbit_texts->empty()) {
        orbits.emplace();
        for (const auto& t : *orbit_texts) orbits->push_back(parse_orbit(t));
      }
      const SurfaceSpec spec = surface->spec(mu.alphabets());
      if (cmd->count("--k") > 0 && surface->k != mu.alphabets())
        throw std::invalid_argument("--k " + std::to_string(surface->k) + " does not match the " +
                                    std::to_string(mu.alphabets()) + " components of --mu");
      const SeriesReport rep = cmd == es ? eseries(spec, mu, orbits) : mixed_series(spec, mu, orbits);
      if (format == "json") {
        out << rep.to_json() << "\n";
      } else if (format == "latex") {
        out << rep.to_latex() << "\n";
      } else {
        out << rep.to_text();
      }
      return kOk;
    }

    if (ce->parsed()) {
      const CounterexampleVerdict v = counterexample_report(ce_n, ce_d);
      if (format == "json") {
        out << v.to_json() << "\n";
      } else if (format == "latex") {
        out << v.mixed.to_latex() << "\n";
      } else {
        out << v.to_text();
      }
      return v.all_hold() ? kOk : kVerifiedFalse;
    }

    if (ct->parsed()) {
      std::vector<FqOrbit> orbits;
      for (const auto& t : ct_orbits) orbits.push_back(parse_fq_orbit(t));
      if (ct_zeta) orbits.push_back(FqOrbit::central(*ct_zeta));
      if (orbits.empty()) orbits.push_back(FqOrbit::central(ct_n == 1 ? 1 : -1));
      check_field(ct_n, ct_q);

      std::vector<Partition> types;
      for (const auto& o : orbits) types.push_back(fq_orbit_type(o, ct_n, ct_q));
      const int k = static_cast<int>(orbits.size());
      const SurfaceSpec spec = ct_surface.spec(k);

      CountOptions opts;
      opts.iteration_cap = ct_cap;
      opts.threads = ct_threads;
      const SeriesReport expected = eseries(spec, MultiPartition(types));
      if (expected.rewritten_in_q && !expected.value.involves(Var::t))
        opts.formula_value = eval(expected.value, {{Var::q, Scalar(ct_q)}});
      const CountReport rep = spec.kind == SurfaceKind::orientable
                                  ? count_orientable(spec.g, orbits, ct_q, ct_n, opts)
                                  : count_nonorientable(spec.r, orbits, ct_q, ct_n, opts);
      if (format == "json") {
        Json j = Json::parse(rep.to_json());
        j["eseries"] = expected.value.to_string();
        out << j.dump(2) << "\n";
      } else {
        out << rep.to_text() << "eseries: " << expected.value.to_string() << "\n";
      }
      return kOk;
    }

    if (md->parsed()) {
      const Partition mu = parse_partition(md_mu);
      const SymFunc h = modified_H(mu);
      const Basis basis = md_basis == "m"   ? Basis::m
                          : md_basis == "h" ? Basis::h
                          : md_basis == "e" ? Basis::e
                          : md_basis == "p" ? Basis::p
                                            : Basis::s;
      Json terms = Json::object();
      std::string text;
      for (const auto& [key, c] : expand_in(basis, h)) {
        terms[md_basis + key[0].to_string()] = c.to_string();
        text += md_basis + key[0].to_string() + " : " + c.to_string() + "\n";
      }
      if (format == "json") {
        Json j;
        j["mu"] = mu.to_string();
        j["basis"] = md_basis;
        j["terms"] = terms;
        out << j.dump(2) << "\n";
      } else {
        out << text;
      }
      return kOk;
    }

    if (gn->parsed()) {
      std::vector<OrbitSpec> orbits;
      for (const auto& t : gn_orbits) orbits.push_back(parse_orbit(t));
      const GenericityResult r = is_generic(orbits);
      if (format == "json") {
        Json j;
        j["orbits"] = Json::array();
        for (const auto& o : orbits) j["orbits"].push_back(o.to_string());
        j["generic"] = r.generic;
        j["description"] = r.describe();
        out << j.dump(2) << "\n";
      } else {
        out << r.describe() << "\n";
      }
      return kOk;
    }
  } catch (const ResourceLimit& e) {
    err << "resource cap: " << e.what() << "\n";
    return kResourceCap;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace cstk::cli
