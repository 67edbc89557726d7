#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "irs/harness.hpp"

namespace irs {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Point2 read_point(const json& obj, const char* key, Point2 fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& p = obj.at(key);
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    throw ConfigError(where + "." + key + ": expected [x, y] in meters");
  return {p[0].get<double>(), p[1].get<double>()};
}

std::vector<SchemeKind> read_schemes(const json& obj, std::vector<SchemeKind> fallback,
                                     const std::string& where) {
  if (!obj.contains("schemes")) return fallback;
  std::vector<std::string> names;
  read(obj, "schemes", names, where);
  std::vector<SchemeKind> out;
  for (const auto& n : names) {
    try {
      out.push_back(SchemeKind::parse(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ".schemes: " + e.what());
    }
  }
  return out;
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  if (!root.contains(key)) return empty;
  const json& s = root.at(key);
  if (!s.is_object()) throw ConfigError(std::string(key) + ": expected an object");
  return s;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::string axis_name(Experiment e) { return e == Experiment::kPower ? "power_dbm" : "elements"; }

Experiment parse_experiment(const std::string& s) {
  if (s == "power") return Experiment::kPower;
  if (s == "elements") return Experiment::kElements;
  throw ConfigError("unknown experiment '" + s + "' (expected power or elements)");
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(antennas >= 1, "system.antennas must be >= 1");
  require(trials >= 1, "trials must be >= 1");
  require(threads >= 0, "threads must be >= 0");
  require(rng == kRngName, "rng must be '" + std::string(kRngName) + "'");
  require(std::isfinite(noise_dbm), "noise_dbm must be finite");
  require(!sigma2.empty(), "sigma2 list must be non-empty");
  for (double s : sigma2) require(std::isfinite(s) && s >= 0.0, "sigma2 entries must be finite and >= 0");

  require(power.elements >= 0, "power_sweep.elements must be >= 0");
  require(!power.power_dbm.empty(), "power_sweep.power_dbm must be non-empty");
  require(all_finite(power.power_dbm), "power_sweep.power_dbm entries must be finite");
  require(!power.schemes.empty(), "power_sweep.schemes must be non-empty");

  auto irs_free = [](const std::vector<SchemeKind>& schemes) {
    for (const auto& k : schemes)
      if (k.type != SchemeKind::Type::kNoIrs) return false;
    return true;
  };
  require(power.elements > 0 || irs_free(power.schemes),
          "power_sweep.elements = 0 only supports the noirs scheme");
  for (int n : elements.elements)
    require(n > 0 || irs_free(elements.schemes),
            "element_sweep.elements contains 0, which only supports the noirs scheme");

  require(std::isfinite(elements.power_dbm), "element_sweep.power_dbm must be finite");
  require(!elements.elements.empty(), "element_sweep.elements must be non-empty");
  for (int n : elements.elements) require(n >= 0, "element_sweep.elements entries must be >= 0");
  require(!elements.schemes.empty(), "element_sweep.schemes must be non-empty");

  try {
    geometry.validate();
    fading.validate();
    AoConfig s = solver;
    s.p0 = 1.0;
    s.sigma_n2 = 1.0;
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root, "config",
                 {"rng", "seed", "trials", "threads", "output", "system", "geometry", "fading",
                  "noise_dbm", "sigma2", "solver", "power_sweep", "element_sweep",
                  "share_initial_phases", "record_timing", "description"});

  ExperimentConfig cfg;
  read(root, "rng", cfg.rng, "config");
  read(root, "seed", cfg.seed, "config");
  read(root, "trials", cfg.trials, "config");
  read(root, "threads", cfg.threads, "config");
  read(root, "output", cfg.output, "config");
  read(root, "noise_dbm", cfg.noise_dbm, "config");
  read(root, "sigma2", cfg.sigma2, "config");
  read(root, "share_initial_phases", cfg.share_initial_phases, "config");
  read(root, "record_timing", cfg.record_timing, "config");

  const json& sys = section(root, "system");
  reject_unknown(sys, "system", {"antennas"});
  read(sys, "antennas", cfg.antennas, "system");

  const json& geo = section(root, "geometry");
  reject_unknown(geo, "geometry", {"ap", "irs", "user"});
  cfg.geometry.ap = read_point(geo, "ap", cfg.geometry.ap, "geometry");
  cfg.geometry.irs = read_point(geo, "irs", cfg.geometry.irs, "geometry");
  cfg.geometry.user = read_point(geo, "user", cfg.geometry.user, "geometry");

  const json& fad = section(root, "fading");
  reject_unknown(fad, "fading", {"reference_loss_db", "alpha_los", "alpha_nlos", "rician_k"});
  double l0_db = 10.0 * std::log10(cfg.fading.reference_loss);
  read(fad, "reference_loss_db", l0_db, "fading");
  if (!std::isfinite(l0_db)) throw ConfigError("fading.reference_loss_db must be finite");
  cfg.fading.reference_loss = db_to_linear(l0_db);
  read(fad, "alpha_los", cfg.fading.alpha_los, "fading");
  read(fad, "alpha_nlos", cfg.fading.alpha_nlos, "fading");
  read(fad, "rician_k", cfg.fading.rician_k, "fading");

  const json& sol = section(root, "solver");
  reject_unknown(sol, "solver",
                 {"eps", "eps_mm", "max_outer_iters", "max_mm_iters", "bisection",
                  "refresh_after_quantization"});
  read(sol, "eps", cfg.solver.eps, "solver");
  read(sol, "eps_mm", cfg.solver.eps_mm, "solver");
  read(sol, "max_outer_iters", cfg.solver.max_outer_iters, "solver");
  read(sol, "max_mm_iters", cfg.solver.max_mm_iters, "solver");
  read(sol, "refresh_after_quantization", cfg.solver.refresh_after_quantization, "solver");
  const json& bis = section(sol, "bisection");
  reject_unknown(bis, "solver.bisection", {"power_tol", "max_iters"});
  read(bis, "power_tol", cfg.solver.bisection.power_tol, "solver.bisection");
  read(bis, "max_iters", cfg.solver.bisection.max_iters, "solver.bisection");

  const json& ps = section(root, "power_sweep");
  reject_unknown(ps, "power_sweep", {"elements", "power_dbm", "schemes"});
  read(ps, "elements", cfg.power.elements, "power_sweep");
  read(ps, "power_dbm", cfg.power.power_dbm, "power_sweep");
  cfg.power.schemes = read_schemes(ps, cfg.power.schemes, "power_sweep");

  const json& es = section(root, "element_sweep");
  reject_unknown(es, "element_sweep", {"power_dbm", "elements", "schemes"});
  read(es, "power_dbm", cfg.elements.power_dbm, "element_sweep");
  read(es, "elements", cfg.elements.elements, "element_sweep");
  cfg.elements.schemes = read_schemes(es, cfg.elements.schemes, "element_sweep");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file '" + path.string() + "'");
  return parse_config(buf.str());
}

}  // namespace irs
