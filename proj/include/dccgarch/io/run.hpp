#pragma once

// End-to-end `fit` and `simulate` runs: load, estimate, summarize, write.

#include <Eigen/Dense>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "dccgarch/diagnostics.hpp"
#include "dccgarch/errors.hpp"
#include "dccgarch/io/config.hpp"
#include "dccgarch/io/csv.hpp"
#include "dccgarch/mcmc.hpp"
#include "dccgarch/model.hpp"
#include "dccgarch/prior.hpp"

namespace dccgarch::io {

/// Error carrying the pipeline stage that failed ("config", "load", "fit", ...).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

/// Files written during a run; removed again unless commit() is called.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::exists(dir_)) {
      std::filesystem::create_directories(dir_);
      created_dir_ = true;
    }
  }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) std::filesystem::remove(f, ec);
    if (created_dir_ && std::filesystem::is_empty(dir_, ec)) std::filesystem::remove(dir_, ec);
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    files_.push_back(path);
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    return out;
  }

  void commit() noexcept { committed_ = true; }
  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

inline void write_chain_csv(std::ostream& out, const McmcChain& chain) {
  for (std::size_t j = 0; j < chain.param_names.size(); ++j) out << (j ? "," : "") << chain.param_names[j];
  out << '\n';
  for (Eigen::Index r = 0; r < chain.draws.rows(); ++r) {
    for (Eigen::Index c = 0; c < chain.draws.cols(); ++c) out << (c ? "," : "") << format_double(chain.draws(r, c));
    out << '\n';
  }
}

inline nlohmann::json summary_to_json(const PosteriorSummary& s, const McmcChain& chain, Family family,
                                      const ReturnsMatrix& data) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["error_dist"] = family_code(family);
  j["family"] = family_name(family);
  j["series_names"] = data.series_names();
  j["n_obs"] = data.rows();
  j["n_sim"] = s.n_sim;
  j["burn_in"] = s.burn_in;
  j["thin"] = s.thin;
  j["retained"] = s.retained;
  j["elapsed_seconds"] = chain.elapsed_seconds;
  j["acceptance"] = {{"rates", chain.accept_rate}, {"accepted", chain.accepted}};
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& ph : chain.phase_log) {
    phases.push_back({{"phase", ph.phase}, {"iterations", ph.iterations}, {"acceptance", ph.acceptance}, {"note", ph.note}});
  }
  j["phase_log"] = phases;
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : s.parameters) {
    params.push_back({{"name", p.name},
                      {"mean", p.mean},
                      {"median", p.median},
                      {"sd", p.sd},
                      {"q025", p.q025},
                      {"q975", p.q975},
                      {"ess", p.ess}});
  }
  j["parameters"] = params;
  return j;
}

inline void write_paths_csv(std::ostream& vol, std::ostream& cor, const PosteriorPaths& paths) {
  const Eigen::Index T = paths.h_mean.rows();
  const Eigen::Index k = paths.h_mean.cols();
  vol << "t";
  for (Eigen::Index i = 0; i < k; ++i) {
    const std::string n = "h_" + std::to_string(i + 1);
    vol << ',' << n << "_mean," << n << "_q025," << n << "_q975";
  }
  vol << '\n';
  const auto labels = correlation_pair_labels(static_cast<std::size_t>(k));
  cor << "t";
  for (const auto& l : labels) cor << ",rho_" << l << "_mean,rho_" << l << "_q025,rho_" << l << "_q975";
  cor << '\n';
  for (Eigen::Index t = 0; t < T; ++t) {
    vol << t + 1;
    for (Eigen::Index i = 0; i < k; ++i) {
      vol << ',' << format_double(paths.h_mean(t, i)) << ',' << format_double(paths.h_lo(t, i)) << ','
          << format_double(paths.h_hi(t, i));
    }
    vol << '\n';
    cor << t + 1;
    for (Eigen::Index c = 0; c < paths.corr_mean.cols(); ++c) {
      cor << ',' << format_double(paths.corr_mean(t, c)) << ',' << format_double(paths.corr_lo(t, c)) << ','
          << format_double(paths.corr_hi(t, c));
    }
    cor << '\n';
  }
}

/// acf.csv: lag column plus one column per parameter (NaN for a parameter that never moved).
/// density.csv: long format parameter,x,density.
inline void write_acf_density(std::ostream& acf_out, std::ostream& dens_out, const Eigen::MatrixXd& kept,
                              const std::vector<std::string>& names, std::size_t max_lag, std::size_t grid) {
  const auto m = static_cast<std::size_t>(kept.rows());
  const std::size_t lag = std::min(max_lag, m > 0 ? m - 1 : 0);
  std::vector<std::vector<double>> acfs;
  dens_out << "parameter,x,density\n";
  for (Eigen::Index j = 0; j < kept.cols(); ++j) {
    const std::vector<double> col(kept.col(j).data(), kept.col(j).data() + kept.rows());
    try {
      acfs.push_back(autocorrelation(col, lag));
    } catch (const NumericalDomainError&) {
      acfs.emplace_back(lag + 1, std::numeric_limits<double>::quiet_NaN());
    }
    if (m >= 10) {
      try {
        const DensityEstimate d = density_estimate(col, grid);
        for (std::size_t g = 0; g < d.points.size(); ++g) {
          dens_out << names[static_cast<std::size_t>(j)] << ',' << format_double(d.points[g]) << ','
                   << format_double(d.densities[g]) << '\n';
        }
      } catch (const NumericalDomainError&) {
      }
    }
  }
  acf_out << "lag";
  for (const auto& n : names) acf_out << ',' << n;
  acf_out << '\n';
  for (std::size_t l = 0; l <= lag; ++l) {
    acf_out << l;
    for (const auto& a : acfs) acf_out << ',' << format_double(a[l]);
    acf_out << '\n';
  }
}

struct FitOutputs {
  McmcChain chain;
  PosteriorSummary summary;
  std::filesystem::path out_dir;
};

/// Runs the full pipeline and writes chain.csv, summary.json, volatility.csv,
/// correlation.csv, acf.csv and density.csv. Throws StageError; on failure no
/// output file is left behind.
inline FitOutputs fit_to_directory(const RunConfig& rc, std::ostream& log) {
  const Family family = in_stage("config", [&] { return rc.family(); });
  const ReturnsMatrix data = in_stage("load", [&] {
    return load_returns(rc.resolved_input(), rc.columns.value_or(std::vector<std::string>{}));
  });
  const std::size_t k = data.dim();
  const std::size_t p = param_count(k, family);

  const auto [priors, init, sampler] = in_stage("config", [&] {
    PriorSpec pr = resolve_priors(rc.control, k, family);
    ParamVector in = resolve_init(rc.init, k, family);
    SamplerConfig sc = resolve_sampler(rc, p);
    if (rc.burn_in_or_default() >= sc.n_sim) throw InvalidInput("burn_in must be smaller than n_sim");
    if (rc.thin_or_default() < 1) throw InvalidInput("thin must be >= 1");
    return std::tuple{pr, in, sc};
  });

  SamplerConfig sc = sampler;
  if (rc.print_or_default()) {
    sc.progress = [&log](const std::string& phase, std::size_t it, std::size_t total) {
      log << phase << " iteration " << it << " / " << total << '\n';
    };
  }

  log << "fitting DCC-GARCH(1,1) with " << family_name(family) << " errors: T=" << data.rows() << ", k=" << k
      << ", p=" << p << ", n_sim=" << sc.n_sim << '\n';
  FitOutputs res;
  res.chain = in_stage("fit", [&] { return fit(data, priors, init, sc); });

  const std::size_t burn = rc.burn_in_or_default();
  const std::size_t thin = rc.thin_or_default();
  res.summary = in_stage("diagnostics", [&] { return summarize(res.chain, burn, thin); });
  const PosteriorPaths paths =
      in_stage("diagnostics", [&] { return posterior_paths(res.chain, data, family, burn, thin, rc.max_draws()); });

  res.out_dir = rc.out_dir_or_default();
  in_stage("write", [&] {
    OutputSet out(res.out_dir);
    {
      auto f = out.open("chain.csv");
      write_chain_csv(f, res.chain);
    }
    {
      auto f = out.open("summary.json");
      f << summary_to_json(res.summary, res.chain, family, data).dump(2) << '\n';
    }
    {
      auto vol = out.open("volatility.csv");
      auto cor = out.open("correlation.csv");
      write_paths_csv(vol, cor, paths);
    }
    {
      auto acf = out.open("acf.csv");
      auto dens = out.open("density.csv");
      write_acf_density(acf, dens, retained_draws(res.chain.draws, burn, thin), res.chain.param_names, rc.acf_max_lag(),
                        rc.density_grid());
      if (!acf || !dens) throw InvalidInput("failed while writing diagnostics");
    }
    out.commit();
    return 0;
  });
  log << "wrote outputs to " << res.out_dir.string() << " (elapsed " << res.chain.elapsed_seconds << " s)\n";
  return res;
}

/// CLI entry: returns 0 on success, 1 with a stage-tagged message otherwise.
inline int run_fit(const RunConfig& rc, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  try {
    fit_to_directory(rc, log);
    return 0;
  } catch (const std::exception& e) {
    err << "dccgarch fit: " << e.what() << '\n';
    return 1;
  }
}

/// Sidecar path for a simulated CSV: same stem, ".json" extension.
inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

/// Writes a simulated returns matrix plus a sidecar config holding the generating
/// parameters; the sidecar is itself a valid `fit` config for that file.
inline void simulate_to_file(const ParamVector& params, std::size_t T, std::uint64_t seed,
                             const std::filesystem::path& output, const Eigen::MatrixXd& R_bar = Eigen::MatrixXd()) {
  const ReturnsMatrix y = in_stage("simulate", [&] { return simulate_path(params, T, seed, R_bar); });
  in_stage("write", [&] {
    const auto k = static_cast<Eigen::Index>(params.dim());
    const Eigen::MatrixXd target = R_bar.size() == 0 ? Eigen::MatrixXd::Identity(k, k) : R_bar;
    if (output.has_parent_path()) std::filesystem::create_directories(output.parent_path());
    write_returns(output, y);
    RunConfig side;
    side.input_path = output.filename().string();
    side.error_dist = family_code(params.family);
    side.init = to_init_values(params);
    SimulationInfo info;
    info.T = T;
    info.seed = seed;
    for (Eigen::Index r = 0; r < k; ++r) {
      info.corr.emplace_back();
      for (Eigen::Index c = 0; c < k; ++c) info.corr.back().push_back(target(r, c));
    }
    side.simulation = info;
    save_config(sidecar_path(output), side);
    return 0;
  });
}

inline int run_simulate(const ParamVector& params, std::size_t T, std::uint64_t seed, const std::filesystem::path& output,
                        const Eigen::MatrixXd& R_bar = Eigen::MatrixXd(), std::ostream& err = std::cerr) {
  try {
    simulate_to_file(params, T, seed, output, R_bar);
    return 0;
  } catch (const std::exception& e) {
    err << "dccgarch simulate: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dccgarch::io
