#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace graft {

enum class MuMode { automatic, fixed };

/// Every tunable of the transfer pipeline, with the documented defaults.
struct TransferConfig {
  int theta = 2;
  double lambda = 0.1;
  std::optional<double> lambda_eem;  // overrides `lambda` in the embedding objective
  std::optional<double> lambda_dcm;  // overrides `lambda` in the construction objective
  double ridge = 1e-6;
  int d1 = 16;
  int d2 = 16;
  double z_entity = 1.96;
  double z_edge = 1.96;
  int max_path_len = 3;
  double distance_cap = 0.0;  // <= 0: longest finite distance + 1
  MuMode mu_mode = MuMode::automatic;
  double mu_value = 0.0;
  double eem_tol = 1e-6;
  int eem_max_iters = 50;
  double dcm_tol = 1e-6;
  int dcm_max_iters = 500;
  double eta0 = 0.01;
  double init_perturbation = 1e-3;
  double divergence_limit = 1e12;
  double rwr_restart = 0.15;
  double rwr_tol = 1e-9;
  int rwr_max_iters = 100;
  std::uint64_t seed = 0;

  double eem_lambda() const { return lambda_eem.value_or(lambda); }
  double dcm_lambda() const { return lambda_dcm.value_or(lambda); }

  /// Throws graft::Error naming the first invalid field.
  void validate() const;

  /// Applies one `key=value` setting; unknown keys throw.
  void set(const std::string& key, const std::string& value);
};

/// Reads `key=value` lines ('#' comments allowed) on top of `base`.
TransferConfig load_config(const std::filesystem::path& path, TransferConfig base = {});

void to_json(nlohmann::json& j, const TransferConfig& c);

}  // namespace graft
