#pragma once

// Run configuration mirroring the package's argument list and control list.
//
// JSON layout (schema_version 1):
//   {
//     "schema_version": 1,
//     "input_path": "returns.csv", "columns": ["DAX", "CAC"],
//     "error_dist": 2, "n_sim": 10000, "seed": 1, "burn_in": 1000, "thin": 1,
//     "out_dir": "dccgarch_out",
//     "init":    {"omega": [...], "alpha": [...], "beta": [...], "a": 0.03, "b": 0.8, "gamma": [...], "tail": 8},
//     "control": {"mu_omega": [...], "sigma_omega": [...], ..., "mu_tail": 8, "sigma_tail": 10,
//                 "simAlg": 3, "cholCov": [[...]], "sdSim": [...], "print": true,
//                 "pilot_length": 2000, "adapt_interval": 100, "scale_factor": 1.13},
//     "diagnostics": {"max_draws": 200, "acf_max_lag": 50, "density_grid": 512},
//     "simulation":  {"T": 1500, "seed": 7, "corr": [[1, 0.3], [0.3, 1]]}
//   }
// Every key except schema_version is optional. Per-series vectors may be given
// as one value, which is broadcast to all series.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dccgarch/errors.hpp"
#include "dccgarch/mcmc.hpp"
#include "dccgarch/prior.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch::io {

inline constexpr int kSchemaVersion = 1;

using Vec = std::vector<double>;

struct InitValues {
  std::optional<Vec> omega, alpha, beta, gamma;
  std::optional<double> a, b, tail;
};

struct ControlList {
  std::optional<Vec> mu_omega, sigma_omega, mu_alpha, sigma_alpha, mu_beta, sigma_beta, mu_gamma, sigma_gamma;
  std::optional<double> mu_a, sigma_a, mu_b, sigma_b, mu_tail, sigma_tail;
  std::optional<int> sim_alg;
  std::optional<std::vector<Vec>> chol_cov;
  std::optional<Vec> sd_sim;
  std::optional<bool> print;
  std::optional<std::size_t> pilot_length, adapt_interval;
  std::optional<double> scale_factor;
};

struct DiagnosticsOptions {
  std::optional<std::size_t> max_draws, acf_max_lag, density_grid;
};

struct SimulationInfo {
  std::size_t T = 0;
  std::uint64_t seed = 0;
  std::vector<Vec> corr;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::optional<std::string> input_path;
  std::optional<std::vector<std::string>> columns;
  std::optional<int> error_dist;
  std::optional<std::size_t> n_sim;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thin;
  std::optional<std::string> out_dir;
  InitValues init;
  ControlList control;
  DiagnosticsOptions diagnostics;
  std::optional<SimulationInfo> simulation;

  // Directory that relative input paths resolve against; not serialized.
  std::filesystem::path base_dir;

  [[nodiscard]] Family family() const { return family_from_code(error_dist.value_or(2)); }
  [[nodiscard]] std::size_t n_sim_or_default() const { return n_sim.value_or(10000); }
  [[nodiscard]] std::size_t burn_in_or_default() const { return burn_in.value_or(n_sim_or_default() / 10); }
  [[nodiscard]] std::size_t thin_or_default() const { return thin.value_or(1); }
  [[nodiscard]] std::uint64_t seed_or_default() const { return seed.value_or(1); }
  [[nodiscard]] std::string out_dir_or_default() const { return out_dir.value_or("dccgarch_out"); }
  [[nodiscard]] bool print_or_default() const { return control.print.value_or(true); }
  [[nodiscard]] std::size_t max_draws() const { return diagnostics.max_draws.value_or(200); }
  [[nodiscard]] std::size_t acf_max_lag() const { return diagnostics.acf_max_lag.value_or(50); }
  [[nodiscard]] std::size_t density_grid() const { return diagnostics.density_grid.value_or(512); }

  [[nodiscard]] std::filesystem::path resolved_input() const {
    if (!input_path) throw InvalidInput("no input file given");
    std::filesystem::path p(*input_path);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InvalidInput(std::string("config: '") + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidInput(std::string("config: unknown key '") + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

inline void read_vec(const json& obj, const char* key, std::optional<Vec>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  const json& v = obj.at(key);
  try {
    out = v.is_array() ? v.get<Vec>() : Vec{v.get<double>()};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void write(json& obj, const char* key, const std::optional<T>& v) {
  if (v) obj[key] = *v;
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::read;
  using detail::read_vec;
  detail::require_keys(j, "top level",
                       {"schema_version", "input_path", "columns", "error_dist", "n_sim", "seed", "burn_in", "thin",
                        "out_dir", "init", "control", "diagnostics", "simulation"});
  RunConfig c;
  std::optional<int> version;
  read(j, "schema_version", version);
  if (!version) throw InvalidInput("config: missing schema_version");
  if (*version != kSchemaVersion) throw InvalidInput("config: unsupported schema_version " + std::to_string(*version));
  read(j, "input_path", c.input_path);
  read(j, "columns", c.columns);
  read(j, "error_dist", c.error_dist);
  read(j, "n_sim", c.n_sim);
  read(j, "seed", c.seed);
  read(j, "burn_in", c.burn_in);
  read(j, "thin", c.thin);
  read(j, "out_dir", c.out_dir);

  if (j.contains("init")) {
    const auto& o = j.at("init");
    detail::require_keys(o, "init", {"omega", "alpha", "beta", "a", "b", "gamma", "tail"});
    read_vec(o, "omega", c.init.omega);
    read_vec(o, "alpha", c.init.alpha);
    read_vec(o, "beta", c.init.beta);
    read_vec(o, "gamma", c.init.gamma);
    read(o, "a", c.init.a);
    read(o, "b", c.init.b);
    read(o, "tail", c.init.tail);
  }
  if (j.contains("control")) {
    const auto& o = j.at("control");
    detail::require_keys(o, "control",
                         {"mu_omega", "sigma_omega", "mu_alpha", "sigma_alpha", "mu_beta", "sigma_beta", "mu_gamma",
                          "sigma_gamma", "mu_a", "sigma_a", "mu_b", "sigma_b", "mu_tail", "sigma_tail", "simAlg",
                          "cholCov", "sdSim", "print", "pilot_length", "adapt_interval", "scale_factor"});
    auto& k = c.control;
    read_vec(o, "mu_omega", k.mu_omega);
    read_vec(o, "sigma_omega", k.sigma_omega);
    read_vec(o, "mu_alpha", k.mu_alpha);
    read_vec(o, "sigma_alpha", k.sigma_alpha);
    read_vec(o, "mu_beta", k.mu_beta);
    read_vec(o, "sigma_beta", k.sigma_beta);
    read_vec(o, "mu_gamma", k.mu_gamma);
    read_vec(o, "sigma_gamma", k.sigma_gamma);
    read(o, "mu_a", k.mu_a);
    read(o, "sigma_a", k.sigma_a);
    read(o, "mu_b", k.mu_b);
    read(o, "sigma_b", k.sigma_b);
    read(o, "mu_tail", k.mu_tail);
    read(o, "sigma_tail", k.sigma_tail);
    read(o, "simAlg", k.sim_alg);
    read(o, "cholCov", k.chol_cov);
    read_vec(o, "sdSim", k.sd_sim);
    read(o, "print", k.print);
    read(o, "pilot_length", k.pilot_length);
    read(o, "adapt_interval", k.adapt_interval);
    read(o, "scale_factor", k.scale_factor);
  }
  if (j.contains("diagnostics")) {
    const auto& o = j.at("diagnostics");
    detail::require_keys(o, "diagnostics", {"max_draws", "acf_max_lag", "density_grid"});
    read(o, "max_draws", c.diagnostics.max_draws);
    read(o, "acf_max_lag", c.diagnostics.acf_max_lag);
    read(o, "density_grid", c.diagnostics.density_grid);
  }
  if (j.contains("simulation")) {
    const auto& o = j.at("simulation");
    detail::require_keys(o, "simulation", {"T", "seed", "corr"});
    SimulationInfo s;
    std::optional<std::size_t> T;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<Vec>> corr;
    read(o, "T", T);
    read(o, "seed", seed);
    read(o, "corr", corr);
    s.T = T.value_or(0);
    s.seed = seed.value_or(0);
    s.corr = corr.value_or(std::vector<Vec>{});
    c.simulation = s;
  }
  if (c.error_dist) family_from_code(*c.error_dist);
  if (c.n_sim && *c.n_sim < 1) throw InvalidInput("config: n_sim must be >= 1");
  if (c.input_path && c.input_path->empty()) throw InvalidInput("config: input_path must be non-empty");
  if (c.out_dir && c.out_dir->empty()) throw InvalidInput("config: out_dir must be non-empty");
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  using detail::write;
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  write(j, "input_path", c.input_path);
  write(j, "columns", c.columns);
  write(j, "error_dist", c.error_dist);
  write(j, "n_sim", c.n_sim);
  write(j, "seed", c.seed);
  write(j, "burn_in", c.burn_in);
  write(j, "thin", c.thin);
  write(j, "out_dir", c.out_dir);

  nlohmann::json init = nlohmann::json::object();
  write(init, "omega", c.init.omega);
  write(init, "alpha", c.init.alpha);
  write(init, "beta", c.init.beta);
  write(init, "a", c.init.a);
  write(init, "b", c.init.b);
  write(init, "gamma", c.init.gamma);
  write(init, "tail", c.init.tail);
  if (!init.empty()) j["init"] = init;

  const auto& k = c.control;
  nlohmann::json ctl = nlohmann::json::object();
  write(ctl, "mu_omega", k.mu_omega);
  write(ctl, "sigma_omega", k.sigma_omega);
  write(ctl, "mu_alpha", k.mu_alpha);
  write(ctl, "sigma_alpha", k.sigma_alpha);
  write(ctl, "mu_beta", k.mu_beta);
  write(ctl, "sigma_beta", k.sigma_beta);
  write(ctl, "mu_gamma", k.mu_gamma);
  write(ctl, "sigma_gamma", k.sigma_gamma);
  write(ctl, "mu_a", k.mu_a);
  write(ctl, "sigma_a", k.sigma_a);
  write(ctl, "mu_b", k.mu_b);
  write(ctl, "sigma_b", k.sigma_b);
  write(ctl, "mu_tail", k.mu_tail);
  write(ctl, "sigma_tail", k.sigma_tail);
  write(ctl, "simAlg", k.sim_alg);
  write(ctl, "cholCov", k.chol_cov);
  write(ctl, "sdSim", k.sd_sim);
  write(ctl, "print", k.print);
  write(ctl, "pilot_length", k.pilot_length);
  write(ctl, "adapt_interval", k.adapt_interval);
  write(ctl, "scale_factor", k.scale_factor);
  if (!ctl.empty()) j["control"] = ctl;

  nlohmann::json diag = nlohmann::json::object();
  write(diag, "max_draws", c.diagnostics.max_draws);
  write(diag, "acf_max_lag", c.diagnostics.acf_max_lag);
  write(diag, "density_grid", c.diagnostics.density_grid);
  if (!diag.empty()) j["diagnostics"] = diag;

  if (c.simulation) {
    j["simulation"] = {{"T", c.simulation->T}, {"seed", c.simulation->seed}, {"corr", c.simulation->corr}};
  }
  return j;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  RunConfig c = config_from_json(j);
  c.base_dir = path.parent_path();
  return c;
}

inline void save_config(const std::filesystem::path& path, const RunConfig& c) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write config file '" + path.string() + "'");
  out << config_to_json(c).dump(2) << '\n';
}

/// Field-wise overlay: every value set in `flags` replaces the one in `base`.
inline RunConfig merge(RunConfig base, const RunConfig& flags) {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.input_path, flags.input_path);
  take(base.columns, flags.columns);
  take(base.error_dist, flags.error_dist);
  take(base.n_sim, flags.n_sim);
  take(base.seed, flags.seed);
  take(base.burn_in, flags.burn_in);
  take(base.thin, flags.thin);
  take(base.out_dir, flags.out_dir);
  take(base.init.omega, flags.init.omega);
  take(base.init.alpha, flags.init.alpha);
  take(base.init.beta, flags.init.beta);
  take(base.init.gamma, flags.init.gamma);
  take(base.init.a, flags.init.a);
  take(base.init.b, flags.init.b);
  take(base.init.tail, flags.init.tail);
  auto& k = base.control;
  const auto& f = flags.control;
  take(k.mu_omega, f.mu_omega);
  take(k.sigma_omega, f.sigma_omega);
  take(k.mu_alpha, f.mu_alpha);
  take(k.sigma_alpha, f.sigma_alpha);
  take(k.mu_beta, f.mu_beta);
  take(k.sigma_beta, f.sigma_beta);
  take(k.mu_gamma, f.mu_gamma);
  take(k.sigma_gamma, f.sigma_gamma);
  take(k.mu_a, f.mu_a);
  take(k.sigma_a, f.sigma_a);
  take(k.mu_b, f.mu_b);
  take(k.sigma_b, f.sigma_b);
  take(k.mu_tail, f.mu_tail);
  take(k.sigma_tail, f.sigma_tail);
  take(k.sim_alg, f.sim_alg);
  take(k.chol_cov, f.chol_cov);
  take(k.sd_sim, f.sd_sim);
  take(k.print, f.print);
  take(k.pilot_length, f.pilot_length);
  take(k.adapt_interval, f.adapt_interval);
  take(k.scale_factor, f.scale_factor);
  take(base.diagnostics.max_draws, flags.diagnostics.max_draws);
  take(base.diagnostics.acf_max_lag, flags.diagnostics.acf_max_lag);
  take(base.diagnostics.density_grid, flags.diagnostics.density_grid);
  take(base.simulation, flags.simulation);
  if (!flags.base_dir.empty()) base.base_dir = flags.base_dir;
  return base;
}

// ---------------------------------------------------------------------------
// Resolution against a concrete dimension k

namespace detail {

inline Vec broadcast(const std::optional<Vec>& v, std::size_t k, double fallback, const char* name) {
  if (!v) return Vec(k, fallback);
  if (v->size() == 1) return Vec(k, v->front());
  if (v->size() != k) {
    throw InvalidInput(std::string(name) + " has " + std::to_string(v->size()) + " entries, expected 1 or " + std::to_string(k));
  }
  return *v;
}

}  // namespace detail

inline ParamVector resolve_init(const InitValues& init, std::size_t k, Family family) {
  ParamVector p = default_initial_values(k, family);
  p.omega = detail::broadcast(init.omega, k, p.omega.front(), "omega");
  p.alpha = detail::broadcast(init.alpha, k, p.alpha.front(), "alpha");
  p.beta = detail::broadcast(init.beta, k, p.beta.front(), "beta");
  p.gamma = detail::broadcast(init.gamma, k, p.gamma.front(), "gamma");
  p.a = init.a.value_or(p.a);
  p.b = init.b.value_or(p.b);
  p.tail = has_tail(family) ? init.tail.value_or(p.tail) : 0.0;
  return p;
}

inline InitValues to_init_values(const ParamVector& p) {
  InitValues v;
  v.omega = p.omega;
  v.alpha = p.alpha;
  v.beta = p.beta;
  v.gamma = p.gamma;
  v.a = p.a;
  v.b = p.b;
  if (has_tail(p.family)) v.tail = p.tail;
  return v;
}

/// Package defaults overlaid with the control-list overrides.
inline PriorSpec resolve_priors(const ControlList& c, std::size_t k, Family family) {
  PriorSpec s = default_priors(k, family);
  auto apply = [k](std::vector<TruncatedNormal>& block, const std::optional<Vec>& mu, const std::optional<Vec>& sd,
                   const char* mu_name, const char* sd_name) {
    const Vec m = detail::broadcast(mu, k, block.front().location, mu_name);
    const Vec s = detail::broadcast(sd, k, block.front().scale, sd_name);
    for (std::size_t i = 0; i < k; ++i) {
      block[i].location = m[i];
      block[i].scale = s[i];
    }
  };
  apply(s.omega, c.mu_omega, c.sigma_omega, "mu_omega", "sigma_omega");
  apply(s.alpha, c.mu_alpha, c.sigma_alpha, "mu_alpha", "sigma_alpha");
  apply(s.beta, c.mu_beta, c.sigma_beta, "mu_beta", "sigma_beta");
  apply(s.gamma, c.mu_gamma, c.sigma_gamma, "mu_gamma", "sigma_gamma");
  s.a.location = c.mu_a.value_or(s.a.location);
  s.a.scale = c.sigma_a.value_or(s.a.scale);
  s.b.location = c.mu_b.value_or(s.b.location);
  s.b.scale = c.sigma_b.value_or(s.b.scale);
  if (s.tail) {
    s.tail->location = c.mu_tail.value_or(s.tail->location);
    s.tail->scale = c.sigma_tail.value_or(s.tail->scale);
  }
  require_valid(s);
  return s;
}

inline SamplerConfig resolve_sampler(const RunConfig& rc, std::size_t p) {
  SamplerConfig s;
  const auto& c = rc.control;
  s.n_sim = rc.n_sim_or_default();
  s.seed = rc.seed_or_default();
  const int alg = c.sim_alg.value_or(3);
  if (alg < 1 || alg > 3) throw InvalidInput("simAlg must be 1, 2 or 3");
  s.mode = static_cast<SamplerMode>(alg);
  if (c.chol_cov) {
    Eigen::MatrixXd L(static_cast<Eigen::Index>(c.chol_cov->size()), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < c.chol_cov->size(); ++r) {
      if ((*c.chol_cov)[r].size() != p) throw InvalidInput("cholCov must be a " + std::to_string(p) + " x " + std::to_string(p) + " matrix");
      for (std::size_t col = 0; col < p; ++col) L(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = (*c.chol_cov)[r][col];
    }
    if (static_cast<std::size_t>(L.rows()) != p) throw InvalidInput("cholCov must be a " + std::to_string(p) + " x " + std::to_string(p) + " matrix");
    s.proposal_chol = L;
  }
  if (c.sd_sim) {
    const Vec sds = detail::broadcast(c.sd_sim, p, 0.0, "sdSim");
    s.proposal_sds = Eigen::Map<const Eigen::VectorXd>(sds.data(), static_cast<Eigen::Index>(p));
  }
  if (c.pilot_length) s.pilot_length = *c.pilot_length;
  if (c.adapt_interval) s.adapt_interval = *c.adapt_interval;
  s.scale_factor = c.scale_factor;
  require_valid(s);
  return s;
}

}  // namespace dccgarch::io
