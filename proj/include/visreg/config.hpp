#pragma once

// Scenario configuration: flat INI with [section] headers.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "visreg/errors.hpp"
#include "visreg/io.hpp"

namespace visreg {

struct ScenarioConfig {
  std::string name = "scenario";

  // [eos]
  std::string eos_kind = "ideal";
  double gamma = 1.4;

  // [coeffs]
  double a = 0.0;
  double d = 0.0;
  std::optional<double> ratio_x;  // a = (1 - x) d
  std::string gform = "parabolic";
  std::optional<double> mu;  // default a / 2
  double lambda_visc = 0.0;
  std::optional<double> c0;  // mesh-scaled a = d = c0 h max(|u| + c)

  // [scheme]
  std::string scheme = "gp-regularized";
  std::string integrator = "ssp-rk3";
  double cfl = 0.5;
  double viscfactor = 1.0;
  double epsilon = 0.0;
  int check_stride = 1;

  // [grid]
  int dim = 1;
  int n = 400;
  double lo = 0.0;
  double hi = 1.0;
  std::string boundary = "farfield";

  // [ic]
  std::string ic_kind = "constant";
  std::map<std::string, double> ic_params;

  // [run]
  double t_end = 0.0;
  int snapshot_stride = 0;  // 0: initial and final snapshots only
  std::uint64_t seed = 20240601;

  // [diagnostics]
  std::vector<std::string> certificates;
  double residual_c = 1.0;
  double min_entropy_rel = 1e-8;
  double crafted_rho = 1.0;
  double crafted_e = 1.0;

  // [output]
  std::string directory = "visreg_out";
  std::vector<std::string> formats{"csv"};

  // [refine]
  int levels = 3;
  std::string metric = "self";  // self | violation

  double resolved_a() const { return ratio_x ? (1.0 - *ratio_x) * d : a; }
  double resolved_mu() const { return mu ? *mu : 0.5 * resolved_a(); }

  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

inline std::string join_list(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

inline const std::set<std::string>& ic_kinds() {
  static const std::set<std::string> k{"riemann", "contact", "smooth", "constant", "counterexample",
                                       "random_riemann"};
  return k;
}

inline bool known_certificate(const std::string& c) {
  if (c == "positivity" || c == "min_entropy" || c == "entropy_physical" || c == "entropy_crafted")
    return true;
  if (c.rfind("entropy_harten:", 0) == 0) {
    try {
      std::size_t pos = 0;
      const std::string q = c.substr(15);
      std::stod(q, &pos);
      return pos == q.size();
    } catch (...) {
      return false;
    }
  }
  return false;
}

}  // namespace detail

inline void ScenarioConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (eos_kind != "ideal") fail("eos.kind must be 'ideal'");
  if (!(gamma > 1.0)) fail("eos.gamma must be > 1");
  if (ratio_x && a != 0.0) fail("coeffs: give either a or ratio_x, not both");
  if (!(resolved_a() >= 0.0) || !(d >= 0.0)) fail("coeffs: a and d must be >= 0");
  if (gform != "parabolic" && gform != "symmetric" && gform != "zero") fail("coeffs.gform: unknown '" + gform + "'");
  if (mu && !(*mu >= 0.0)) fail("coeffs.mu must be >= 0");
  if (c0 && !(*c0 >= 0.0)) fail("coeffs.c0 must be >= 0");
  if (scheme != "gp-regularized" && scheme != "gp-brenner" && scheme != "lax" && scheme != "parabolic")
    fail("scheme.scheme: unknown '" + scheme + "'");
  if (integrator != "forward-euler" && integrator != "ssp-rk2" && integrator != "ssp-rk3")
    fail("scheme.integrator: unknown '" + integrator + "'");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("scheme.cfl must lie in (0, 1]");
  if (!(viscfactor > 0.0 && viscfactor <= 1.0)) fail("scheme.viscfactor must lie in (0, 1]");
  if (!(epsilon >= 0.0)) fail("scheme.epsilon must be >= 0");
  if (check_stride < 1) fail("scheme.check_stride must be >= 1");
  if (dim != 1 && dim != 2) fail("grid.dim must be 1 or 2");
  if (n < 4) fail("grid.n must be >= 4");
  if (!(hi > lo)) fail("grid.extent must satisfy lo < hi");
  if (boundary != "periodic" && boundary != "farfield") fail("grid.boundary: unknown '" + boundary + "'");
  if (scheme == "lax" && dim != 1) fail("the lax scheme is 1D only");
  if (!detail::ic_kinds().count(ic_kind)) fail("ic.kind: unknown '" + ic_kind + "'");
  if (ic_kind == "counterexample" && dim != 1) fail("counterexample initial data are 1D");
  if (!(t_end >= 0.0)) fail("run.t_end must be >= 0");
  if (snapshot_stride < 0) fail("run.snapshot_stride must be >= 0");
  for (const auto& c : certificates)
    if (!detail::known_certificate(c)) fail("diagnostics.certificates: unknown '" + c + "'");
  if (!(residual_c >= 0.0)) fail("diagnostics.residual_c must be >= 0");
  if (!(min_entropy_rel >= 0.0)) fail("diagnostics.min_entropy_rel must be >= 0");
  for (const auto& f : formats)
    if (f != "csv") fail("output.formats: unknown '" + f + "'");
  if (levels < 3) fail("refine.levels must be >= 3");
  if (metric != "self" && metric != "violation") fail("refine.metric must be 'self' or 'violation'");
}

inline ScenarioConfig parse_config_tree(const boost::property_tree::ptree& pt) {
  ScenarioConfig c;
  static const std::map<std::string, std::set<std::string>> allowed{
      {"scenario", {"name"}},
      {"eos", {"kind", "gamma"}},
      {"coeffs", {"a", "d", "ratio_x", "gform", "mu", "lambda_visc", "c0"}},
      {"scheme", {"scheme", "integrator", "cfl", "viscfactor", "epsilon", "check_stride"}},
      {"grid", {"dim", "n", "lo", "hi", "boundary"}},
      {"ic", {}},
      {"run", {"t_end", "snapshot_stride", "seed"}},
      {"diagnostics", {"certificates", "residual_c", "min_entropy_rel", "crafted_rho", "crafted_e"}},
      {"output", {"directory", "formats"}},
      {"refine", {"levels", "metric"}},
  };
  for (const auto& [sec, tree] : pt) {
    auto it = allowed.find(sec);
    if (it == allowed.end()) throw ConfigError("unknown section [" + sec + "]");
    if (sec == "ic") continue;
    for (const auto& kv : tree)
      if (!it->second.count(kv.first)) throw ConfigError("unknown key " + sec + "." + kv.first);
  }

  auto num = [&](const std::string& key, auto& dst) {
    if (auto v = pt.get_optional<std::string>(key)) {
      try {
        std::size_t pos = 0;
        using T = std::decay_t<decltype(dst)>;
        if constexpr (std::is_same_v<T, int>)
          dst = std::stoi(*v, &pos);
        else if constexpr (std::is_same_v<T, std::uint64_t>)
          dst = std::stoull(*v, &pos);
        else
          dst = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + *v + "'");
      }
    }
  };
  auto opt = [&](const std::string& key, std::optional<double>& dst) {
    if (pt.get_optional<std::string>(key)) {
      double v = 0.0;
      num(key, v);
      dst = v;
    }
  };
  auto str = [&](const std::string& key, std::string& dst) {
    if (auto v = pt.get_optional<std::string>(key)) dst = *v;
  };

  str("scenario.name", c.name);
  str("eos.kind", c.eos_kind);
  num("eos.gamma", c.gamma);
  num("coeffs.a", c.a);
  num("coeffs.d", c.d);
  opt("coeffs.ratio_x", c.ratio_x);
  str("coeffs.gform", c.gform);
  opt("coeffs.mu", c.mu);
  num("coeffs.lambda_visc", c.lambda_visc);
  opt("coeffs.c0", c.c0);
  str("scheme.scheme", c.scheme);
  str("scheme.integrator", c.integrator);
  num("scheme.cfl", c.cfl);
  num("scheme.viscfactor", c.viscfactor);
  num("scheme.epsilon", c.epsilon);
  num("scheme.check_stride", c.check_stride);
  num("grid.dim", c.dim);
  num("grid.n", c.n);
  num("grid.lo", c.lo);
  num("grid.hi", c.hi);
  str("grid.boundary", c.boundary);
  if (auto ic = pt.get_child_optional("ic")) {
    for (const auto& kv : *ic) {
      if (kv.first == "kind") {
        c.ic_kind = kv.second.data();
        continue;
      }
      double v = 0.0;
      num("ic." + kv.first, v);
      c.ic_params[kv.first] = v;
    }
  }
  num("run.t_end", c.t_end);
  num("run.snapshot_stride", c.snapshot_stride);
  num("run.seed", c.seed);
  if (auto v = pt.get_optional<std::string>("diagnostics.certificates"))
    c.certificates = detail::split_list(*v);
  num("diagnostics.residual_c", c.residual_c);
  num("diagnostics.min_entropy_rel", c.min_entropy_rel);
  num("diagnostics.crafted_rho", c.crafted_rho);
  num("diagnostics.crafted_e", c.crafted_e);
  str("output.directory", c.directory);
  if (auto v = pt.get_optional<std::string>("output.formats")) c.formats = detail::split_list(*v);
  num("refine.levels", c.levels);
  str("refine.metric", c.metric);
  c.validate();
  return c;
}

inline ScenarioConfig parse_config(std::istream& in) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config_tree(pt);
}

inline ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in);
}

inline std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[scenario]\nname = " << c.name << "\n\n";
  os << "[eos]\nkind = " << c.eos_kind << "\ngamma = " << fmt17(c.gamma) << "\n\n";
  os << "[coeffs]\n";
  if (c.ratio_x)
    os << "ratio_x = " << fmt17(*c.ratio_x) << "\n";
  else
    os << "a = " << fmt17(c.a) << "\n";
  os << "d = " << fmt17(c.d) << "\ngform = " << c.gform << "\n";
  if (c.mu) os << "mu = " << fmt17(*c.mu) << "\n";
  os << "lambda_visc = " << fmt17(c.lambda_visc) << "\n";
  if (c.c0) os << "c0 = " << fmt17(*c.c0) << "\n";
  os << "\n[scheme]\nscheme = " << c.scheme << "\nintegrator = " << c.integrator << "\ncfl = " << fmt17(c.cfl)
     << "\nviscfactor = " << fmt17(c.viscfactor) << "\nepsilon = " << fmt17(c.epsilon)
     << "\ncheck_stride = " << c.check_stride << "\n\n";
  os << "[grid]\ndim = " << c.dim << "\nn = " << c.n << "\nlo = " << fmt17(c.lo) << "\nhi = " << fmt17(c.hi)
     << "\nboundary = " << c.boundary << "\n\n";
  os << "[ic]\nkind = " << c.ic_kind << "\n";
  for (const auto& [k, v] : c.ic_params) os << k << " = " << fmt17(v) << "\n";
  os << "\n[run]\nt_end = " << fmt17(c.t_end) << "\nsnapshot_stride = " << c.snapshot_stride
     << "\nseed = " << c.seed << "\n\n";
  os << "[diagnostics]\ncertificates = " << detail::join_list(c.certificates)
     << "\nresidual_c = " << fmt17(c.residual_c) << "\nmin_entropy_rel = " << fmt17(c.min_entropy_rel)
     << "\ncrafted_rho = " << fmt17(c.crafted_rho) << "\ncrafted_e = " << fmt17(c.crafted_e) << "\n\n";
  os << "[output]\ndirectory = " << c.directory << "\nformats = " << detail::join_list(c.formats) << "\n\n";
  os << "[refine]\nlevels = " << c.levels << "\nmetric = " << c.metric << "\n";
  return os.str();
}

}  // namespace visreg
