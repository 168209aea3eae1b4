#include "ssrc/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ssrc/encodings.hpp"
#include "ssrc/error.hpp"
#include "ssrc/serialization.hpp"

namespace ssrc {

namespace {

class Reader {
 public:
  std::vector<std::string> violations;

  template <typename T>
  bool scalar(const YAML::Node& node, const std::string& where, T& out) {
    try {
      if (!node.IsScalar()) throw YAML::Exception(node.Mark(), "expected a scalar");
      out = node.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      violations.push_back(where + ": expected a " + type_name<T>());
      return false;
    }
  }

  template <typename T>
  void list(const YAML::Node& node, const std::string& where, std::vector<T>& out) {
    out.clear();
    if (node.IsSequence()) {
      for (std::size_t i = 0; i < node.size(); ++i) {
        T v{};
        if (scalar(node[i], where + "[" + std::to_string(i) + "]", v)) out.push_back(v);
      }
    } else {
      T v{};
      if (scalar(node, where, v)) out.push_back(v);
    }
  }

  // Items are numbers or [re, im] pairs.
  void complex_list(const YAML::Node& node, const std::string& where, std::vector<cplx>& out) {
    out.clear();
    auto item = [&](const YAML::Node& n, const std::string& at) {
      if (n.IsSequence()) {
        double re = 0.0, im = 0.0;
        if (n.size() != 2) {
          violations.push_back(at + ": complex values are written [re, im]");
          return;
        }
        if (scalar(n[0], at + ".re", re) && scalar(n[1], at + ".im", im)) out.emplace_back(re, im);
        return;
      }
      double re = 0.0;
      if (scalar(n, at, re)) out.emplace_back(re, 0.0);
    };
    if (node.IsSequence()) {
      for (std::size_t i = 0; i < node.size(); ++i) item(node[i], where + "[" + std::to_string(i) + "]");
    } else {
      item(node, where);
    }
  }

  void unknown_keys(const YAML::Node& map, const std::string& where, const std::set<std::string>& known) {
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (!known.count(key)) violations.push_back(where + key + ": unknown key");
    }
  }

 private:
  template <typename T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, int>) return "integer";
    if constexpr (std::is_same_v<T, double>) return "number";
    if constexpr (std::is_same_v<T, std::string>) return "string";
    return "value";
  }
};

std::string join_complex(const cplx& z) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << z.real() << ", " << z.imag() << "]";
  return os.str();
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    if constexpr (std::is_same_v<T, cplx>) {
      os << join_complex(v[i]);
    } else {
      os << v[i];
    }
  }
  os << "]";
  return os.str();
}

bool strictly_increasing(const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) return false;
  return true;
}

bool is_single_qubit_gate(const std::string& g) {
  try {
    return gates::by_name(g).rows() == 2;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    v = std::stoull(hex ? text.substr(2) : text, &used, hex ? 16 : 10);
    if (hex) used += 2;
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-' || text.find_first_of("+- \t") != std::string::npos) {
    throw Error(ErrorCode::ConfigParse, "seed '" + text + "' is not an unsigned 64-bit integer");
  }
  return static_cast<std::uint64_t>(v);
}

ConfigParse parse_config(const std::string& text) {
  ConfigParse result;
  Reader rd;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    result.violations.push_back(std::string("YAML syntax: ") + e.what());
    return result;
  }
  if (!root.IsMap()) {
    result.violations.push_back("top level must be a mapping");
    return result;
  }
  ExperimentConfig& cfg = result.config;
  rd.unknown_keys(root, "", {"experiment", "seed", "output", "run", "grid"});

  if (!root["experiment"]) {
    rd.violations.push_back("experiment: missing");
  } else {
    rd.scalar(root["experiment"], "experiment", cfg.experiment);
  }
  if (root["seed"]) {
    std::string s;
    if (rd.scalar(root["seed"], "seed", s)) {
      try {
        cfg.seed = parse_seed(s);
      } catch (const Error&) {
        rd.violations.push_back("seed: '" + s + "' is not an unsigned 64-bit integer");
      }
    }
  }
  if (const YAML::Node out = root["output"]) {
    if (!out.IsMap()) {
      rd.violations.push_back("output: expected a mapping");
    } else {
      rd.unknown_keys(out, "output.", {"directory", "format"});
      if (out["directory"]) rd.scalar(out["directory"], "output.directory", cfg.output_directory);
      if (out["format"]) rd.scalar(out["format"], "output.format", cfg.format);
    }
  }
  if (const YAML::Node run = root["run"]) {
    if (!run.IsMap()) {
      rd.violations.push_back("run: expected a mapping");
    } else {
      rd.unknown_keys(run, "run.", {"workers", "dimension_cap"});
      if (run["workers"]) rd.scalar(run["workers"], "run.workers", cfg.workers);
      if (run["dimension_cap"]) {
        double cap = 0.0;
        if (rd.scalar(run["dimension_cap"], "run.dimension_cap", cap)) {
          if (cap < 1.0 || cap > 1e12) {
            rd.violations.push_back("run.dimension_cap: must lie in [1, 1e12]");
          } else {
            cfg.dimension_cap = static_cast<std::size_t>(cap);
          }
        }
      }
    }
  }
  ParameterGrid& g = cfg.grid;
  g.phi = {0.0};
  g.samples = {5};
  g.restarts = {8};
  g.modes = {2};
  g.small_angle = {1e-2};
  if (const YAML::Node grid = root["grid"]) {
    if (!grid.IsMap()) {
      rd.violations.push_back("grid: expected a mapping");
    } else {
      rd.unknown_keys(grid, "grid.",
                      {"N", "alpha", "beta", "r", "phi", "theta", "n_max", "k", "small_angle", "restarts", "samples",
                       "fidelity_target", "gates", "encoding", "modes", "grid_step"});
      if (grid["N"]) rd.list(grid["N"], "grid.N", g.N);
      if (grid["alpha"]) rd.complex_list(grid["alpha"], "grid.alpha", g.alpha);
      if (grid["beta"]) rd.complex_list(grid["beta"], "grid.beta", g.beta);
      if (grid["r"]) rd.list(grid["r"], "grid.r", g.r);
      if (grid["phi"]) rd.list(grid["phi"], "grid.phi", g.phi);
      if (grid["theta"]) rd.list(grid["theta"], "grid.theta", g.theta);
      if (grid["n_max"]) rd.list(grid["n_max"], "grid.n_max", g.n_max);
      if (grid["k"]) rd.list(grid["k"], "grid.k", g.k);
      if (grid["small_angle"]) rd.list(grid["small_angle"], "grid.small_angle", g.small_angle);
      if (grid["restarts"]) rd.list(grid["restarts"], "grid.restarts", g.restarts);
      if (grid["samples"]) rd.list(grid["samples"], "grid.samples", g.samples);
      if (grid["fidelity_target"]) rd.list(grid["fidelity_target"], "grid.fidelity_target", g.fidelity_target);
      if (grid["gates"]) rd.list(grid["gates"], "grid.gates", g.gates);
      if (grid["modes"]) rd.list(grid["modes"], "grid.modes", g.modes);
      if (grid["encoding"]) rd.scalar(grid["encoding"], "grid.encoding", g.encoding);
      if (grid["grid_step"]) rd.scalar(grid["grid_step"], "grid.grid_step", g.grid_step);
    }
  }
  result.violations = std::move(rd.violations);
  for (std::string& v : validate_config(cfg)) result.violations.push_back(std::move(v));
  return result;
}

ConfigParse load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  const auto& names = experiment_names();
  const std::string& e = cfg.experiment;
  if (std::find(names.begin(), names.end(), e) == names.end()) {
    out.push_back("experiment: unknown experiment '" + e + "'");
    return out;
  }
  if (cfg.format != "csv" && cfg.format != "json") out.push_back("output.format: must be csv or json");
  if (cfg.output_directory.empty()) out.push_back("output.directory: must not be empty");
  if (cfg.workers < 1 || cfg.workers > 256) out.push_back("run.workers: must lie in [1, 256]");

  const ParameterGrid& g = cfg.grid;
  auto need = [&](bool empty, const char* key) {
    if (empty) out.push_back(std::string("grid.") + key + ": grid must not be empty");
    return !empty;
  };
  auto cap_check = [&](int modes, int photons) {
    const std::uint64_t dim = basis_dimension(modes, photons);
    if (dim > cfg.dimension_cap) {
      std::ostringstream msg;
      msg << "dimension " << dim << " for K=" << modes << ", N=" << photons << " exceeds the cap " << cfg.dimension_cap;
      out.push_back(msg.str());
    }
  };
  const bool convergence = e == "convergence-coherent" || e == "convergence-displacement" || e == "convergence-squeezed" ||
                           e == "commutator" || e == "phase-locking" || e == "overlap";
  if (need(g.N.empty(), "N")) {
    for (int n : g.N)
      if (n < 1) out.push_back("grid.N: values must be >= 1 (got " + std::to_string(n) + ")");
    if (convergence && !strictly_increasing(g.N)) out.push_back("grid.N: must be strictly increasing");
  }
  auto alpha_bound = [&](const std::vector<cplx>& values, const char* key) {
    for (const cplx& a : values)
      for (int n : g.N)
        if (!(std::norm(a) < n)) {
          out.push_back(std::string("grid.") + key + ": |" + key + "|^2 = " + std::to_string(std::norm(a)) +
                        " must be below N = " + std::to_string(n));
        }
  };
  auto nonneg = [&](const std::vector<int>& v, const char* key) {
    for (int x : v)
      if (x < 0) out.push_back(std::string("grid.") + key + ": values must be >= 0");
  };

  if (e == "convergence-coherent") {
    if (need(g.alpha.empty(), "alpha")) alpha_bound(g.alpha, "alpha");
    if (need(g.n_max.empty(), "n_max")) nonneg(g.n_max, "n_max");
    for (int n : g.N) cap_check(2, n);
  } else if (e == "convergence-displacement") {
    if (need(g.alpha.empty(), "alpha")) alpha_bound(g.alpha, "alpha");
    need(g.k.empty(), "k");
    need(g.n_max.empty(), "n_max");
    nonneg(g.k, "k");
    for (int k : g.k)
      for (int m : g.n_max)
        for (int n : g.N)
          if (!(k <= m && m <= n)) {
            out.push_back("grid: need k <= n_max <= N (k=" + std::to_string(k) + ", n_max=" + std::to_string(m) +
                          ", N=" + std::to_string(n) + ")");
          }
  } else if (e == "convergence-squeezed") {
    if (need(g.r.empty(), "r"))
      for (double r : g.r)
        if (!(r >= 0.0 && std::isfinite(r))) out.push_back("grid.r: values must be finite and >= 0");
    need(g.phi.empty(), "phi");
    if (need(g.n_max.empty(), "n_max")) nonneg(g.n_max, "n_max");
    for (int m : g.n_max)
      for (int n : g.N)
        if (m > 2 * n) out.push_back("grid.n_max: must not exceed 2N");
  } else if (e == "commutator") {
    if (need(g.n_max.empty(), "n_max")) nonneg(g.n_max, "n_max");
    for (int m : g.n_max)
      for (int n : g.N)
        if (m > n) out.push_back("grid.n_max: must not exceed N");
  } else if (e == "phase-locking") {
    if (need(g.theta.empty(), "theta"))
      for (double t : g.theta)
        if (!(t > 0.0 && t < std::numbers::pi)) out.push_back("grid.theta: values must lie in (0, pi)");
  } else if (e == "overlap") {
    if (need(g.alpha.empty(), "alpha")) alpha_bound(g.alpha, "alpha");
    if (need(g.beta.empty(), "beta")) alpha_bound(g.beta, "beta");
  } else if (e == "synthesis-bench" || e == "synthesis-complexity") {
    if (need(g.small_angle.empty(), "small_angle"))
      for (double s : g.small_angle)
        if (!(s > 0.0 && s <= 1.0)) out.push_back("grid.small_angle: values must lie in (0, 1]");
    if (need(g.samples.empty(), "samples"))
      for (int s : g.samples)
        if (s < 1) out.push_back("grid.samples: values must be >= 1");
    if (e == "synthesis-bench") {
      if (need(g.modes.empty(), "modes"))
        for (int k : g.modes) {
          if (k < 2) out.push_back("grid.modes: values must be >= 2");
          for (int n : g.N)
            if (k >= 2) cap_check(k, n);
        }
    } else {
      if (need(g.fidelity_target.empty(), "fidelity_target"))
        for (double f : g.fidelity_target)
          if (!(f > 0.0 && f < 1.0)) out.push_back("grid.fidelity_target: values must lie in (0, 1)");
      for (int n : g.N)
        if (n > 32) out.push_back("grid.N: synthesis-complexity supports N <= 32");
    }
  } else if (e == "encoding-feasibility") {
    if (need(g.gates.empty(), "gates"))
      for (const std::string& gate : g.gates)
        if (!is_single_qubit_gate(gate)) out.push_back("grid.gates: '" + gate + "' is not a known single-qubit gate");
    if (g.encoding == "coherent-like") {
      if (need(g.alpha.empty(), "alpha")) alpha_bound(g.alpha, "alpha");
    } else if (g.encoding != "fock") {
      out.push_back("grid.encoding: must be fock or coherent-like");
    }
    if (need(g.restarts.empty(), "restarts"))
      for (int r : g.restarts)
        if (r < 1) out.push_back("grid.restarts: values must be >= 1");
    if (g.grid_step < 0.0 || (g.grid_step > 0.0 && g.grid_step < 1e-3)) {
      out.push_back("grid.grid_step: must be 0 (off) or at least 1e-3");
    }
    for (int n : g.N) cap_check(2, n);
  } else if (e == "cnot-feasibility") {
    if (need(g.restarts.empty(), "restarts"))
      for (int r : g.restarts)
        if (r < 1) out.push_back("grid.restarts: values must be >= 1");
    for (int n : g.N) cap_check(4, 2 * n);
  }
  return out;
}

std::string config_to_yaml(const ExperimentConfig& c) {
  const ParameterGrid& g = c.grid;
  std::ostringstream os;
  os.precision(17);
  os << "experiment: " << c.experiment << "\n";
  os << "seed: " << c.seed << "\n";
  os << "output:\n  directory: " << c.output_directory << "\n  format: " << c.format << "\n";
  os << "run:\n  workers: " << c.workers << "\n  dimension_cap: " << c.dimension_cap << "\n";
  os << "grid:\n";
  auto line = [&](const char* key, const std::string& value) { os << "  " << key << ": " << value << "\n"; };
  if (!g.N.empty()) line("N", join(g.N));
  if (!g.alpha.empty()) line("alpha", join(g.alpha));
  if (!g.beta.empty()) line("beta", join(g.beta));
  if (!g.r.empty()) line("r", join(g.r));
  if (!g.phi.empty()) line("phi", join(g.phi));
  if (!g.theta.empty()) line("theta", join(g.theta));
  if (!g.n_max.empty()) line("n_max", join(g.n_max));
  if (!g.k.empty()) line("k", join(g.k));
  if (!g.small_angle.empty()) line("small_angle", join(g.small_angle));
  if (!g.restarts.empty()) line("restarts", join(g.restarts));
  if (!g.samples.empty()) line("samples", join(g.samples));
  if (!g.fidelity_target.empty()) line("fidelity_target", join(g.fidelity_target));
  if (!g.gates.empty()) line("gates", join(g.gates));
  if (!g.modes.empty()) line("modes", join(g.modes));
  line("encoding", g.encoding);
  {
    std::ostringstream v;
    v.precision(17);
    v << g.grid_step;
    line("grid_step", v.str());
  }
  return os.str();
}

}  // namespace ssrc
