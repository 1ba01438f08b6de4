#include "cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace skewflow::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_hash(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, std::string_view key, std::string_view msg) const {
    std::ostringstream os;
    os << origin_;
    if (at.IsDefined() && at.Mark().line >= 0) os << ":" << at.Mark().line + 1;
    os << ": key '" << key << "': " << msg;
    throw ConfigError(os.str());
  }

  double number(const YAML::Node& n, std::string_view key) const {
    if (!n.IsScalar()) fail(n, key, "expected a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) fail(n, key, "value must be finite");
      return v;
    } catch (const YAML::Exception&) {
      fail(n, key, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  long long integer(const YAML::Node& n, std::string_view key) const {
    if (!n.IsScalar()) fail(n, key, "expected an integer");
    try {
      return n.as<long long>();
    } catch (const YAML::Exception&) {
      fail(n, key, "expected an integer, got '" + n.Scalar() + "'");
    }
  }

  std::size_t count(const YAML::Node& n, std::string_view key) const {
    const long long v = integer(n, key);
    if (v < 1) fail(n, key, "must be >= 1");
    return static_cast<std::size_t>(v);
  }

  double positive(const YAML::Node& n, std::string_view key) const {
    const double v = number(n, key);
    if (!(v > 0.0)) fail(n, key, "must be positive");
    return v;
  }

  std::vector<double> numbers(const YAML::Node& n, std::string_view key) const {
    if (!n.IsSequence()) fail(n, key, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(number(item, key));
    return out;
  }

  void only_keys(const YAML::Node& table, std::string_view key, std::set<std::string> allowed) const {
    if (!table.IsMap()) fail(table, key, "expected a table");
    for (const auto& kv : table) {
      const auto name = kv.first.as<std::string>();
      if (!allowed.count(name)) fail(kv.first, name, "unknown key");
    }
  }

  TrigPoly trig(const YAML::Node& n, std::string_view key, std::size_t dim) const {
    if (n.IsScalar()) return TrigPoly(number(n, key));
    only_keys(n, key, {"constant", "terms"});
    const double c = n["constant"] ? number(n["constant"], key) : 0.0;
    std::vector<Harmonic> terms;
    if (const auto t = n["terms"]) {
      if (!t.IsSequence()) fail(t, key, "terms must be a list of [k-vector, cos, sin]");
      for (const auto& term : t) {
        if (!term.IsSequence() || term.size() != 3 || !term[0].IsSequence()) {
          fail(term, key, "each term must be [k-vector, cos, sin]");
        }
        Harmonic h;
        for (const auto& k : term[0]) h.k.push_back(static_cast<int>(integer(k, key)));
        if (h.k.size() != dim) {
          fail(term, key, "k-vector length " + std::to_string(h.k.size()) + " does not match " +
                              std::to_string(dim) + " frequencies");
        }
        h.cos_coeff = number(term[1], key);
        h.sin_coeff = number(term[2], key);
        terms.push_back(std::move(h));
      }
    }
    return TrigPoly(c, std::move(terms));
  }

 private:
  std::string origin_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  const Parser P(origin);
  if (!root.IsMap()) P.fail(root, "<root>", "expected a table at top level");
  P.only_keys(root, "<root>",
              {"name", "frequencies", "epsilon", "rho", "delta", "base_point", "coefficients",
               "simulate", "tolerances", "pullback", "grid", "spectrum", "liyorke"});

  if (!root["frequencies"]) P.fail(root, "frequencies", "missing");
  const auto freqs = P.numbers(root["frequencies"], "frequencies");
  if (freqs.empty()) P.fail(root["frequencies"], "frequencies", "at least one frequency required");
  const std::size_t dim = freqs.size();

  const auto coeffs = root["coefficients"];
  if (!coeffs) P.fail(root, "coefficients", "missing");
  P.only_keys(coeffs, "coefficients", {"a", "b", "c", "d"});
  CoefficientMatrix m;
  TrigPoly* slots[] = {&m.a, &m.b, &m.c, &m.d};
  const char* names[] = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i) {
    const auto node = coeffs[names[i]];
    const std::string key = std::string("coefficients.") + names[i];
    *slots[i] = node ? P.trig(node, key, dim) : TrigPoly(0.0);
  }

  const double eps = root["epsilon"] ? P.number(root["epsilon"], "epsilon") : 0.0;
  const double rho = root["rho"] ? P.number(root["rho"], "rho") : 0.5;
  if (!(rho > 0.0 && rho <= 1.0)) P.fail(root["rho"], "rho", "must lie in (0, 1]");

  std::vector<double> base(dim, 0.0);
  if (const auto b = root["base_point"]) {
    base = P.numbers(b, "base_point");
    if (base.size() != dim) P.fail(b, "base_point", "length must match frequencies");
  }

  RunConfig cfg(SystemFamily(m, Frequencies(freqs), eps, rho), TorusPoint(base));
  cfg.hash = fnv1a(text);
  if (const auto n = root["name"]) cfg.name = n.as<std::string>();
  if (const auto n = root["delta"]) cfg.delta = P.positive(n, "delta");

  if (const auto s = root["simulate"]) {
    P.only_keys(s, "simulate", {"y0", "horizon", "output_dt"});
    if (const auto y = s["y0"]) {
      const auto v = P.numbers(y, "simulate.y0");
      if (v.size() != 2) P.fail(y, "simulate.y0", "expected two components");
      cfg.y0 = {v[0], v[1]};
    }
    if (const auto h = s["horizon"]) cfg.sim_horizon = P.number(h, "simulate.horizon");
    if (const auto d = s["output_dt"]) cfg.output_dt = P.positive(d, "simulate.output_dt");
  }
  if (const auto t = root["tolerances"]) {
    P.only_keys(t, "tolerances", {"abs", "rel"});
    if (const auto a = t["abs"]) cfg.control.abs_tol = P.positive(a, "tolerances.abs");
    if (const auto r = t["rel"]) cfg.control.rel_tol = P.positive(r, "tolerances.rel");
  }
  if (const auto pb = root["pullback"]) {
    P.only_keys(pb, "pullback", {"schedule", "tol"});
    if (const auto s = pb["schedule"]) {
      cfg.pullback.schedule = P.numbers(s, "pullback.schedule");
      double prev = 0.0;
      for (double v : cfg.pullback.schedule) {
        if (!(v > prev)) P.fail(s, "pullback.schedule", "must be positive and strictly increasing");
        prev = v;
      }
      if (cfg.pullback.schedule.empty()) P.fail(s, "pullback.schedule", "empty");
    }
    if (const auto t = pb["tol"]) cfg.pullback.convergence_tol = P.positive(t, "pullback.tol");
  }
  if (const auto g = root["grid"]) {
    P.only_keys(g, "grid", {"points", "angles"});
    if (const auto p = g["points"]) cfg.grid_points = P.count(p, "grid.points");
    if (const auto a = g["angles"]) cfg.grid_angles = P.count(a, "grid.angles");
  }
  if (const auto s = root["spectrum"]) {
    P.only_keys(s, "spectrum", {"horizon", "window", "zero_tol"});
    if (const auto h = s["horizon"]) cfg.classify.horizon = P.positive(h, "spectrum.horizon");
    if (const auto w = s["window"]) cfg.classify.window = P.positive(w, "spectrum.window");
    if (const auto z = s["zero_tol"]) cfg.classify.zero_tol = P.positive(z, "spectrum.zero_tol");
  }
  if (const auto l = root["liyorke"]) {
    P.only_keys(l, "liyorke", {"pairs", "horizon", "seed", "section_angles"});
    if (const auto n = l["pairs"]) cfg.pairs = P.count(n, "liyorke.pairs");
    if (const auto h = l["horizon"]) cfg.pair_horizon = P.positive(h, "liyorke.horizon");
    if (const auto s = l["seed"]) cfg.seed = static_cast<std::uint64_t>(P.integer(s, "liyorke.seed"));
    if (const auto a = l["section_angles"]) cfg.section_angles = P.count(a, "liyorke.section_angles");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace skewflow::cli
