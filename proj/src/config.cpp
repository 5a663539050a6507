#include "graft/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "graft/error.hpp"

namespace graft {

namespace {

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw Error("config: '" + key + "' expects a real, got '" + v + "'");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void TransferConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(std::string("config: ") + name + " must be > 0");
  };
  if (theta != 1 && theta != 2) throw Error("config: theta must be 1 or 2");
  if (lambda < 0.0 || eem_lambda() < 0.0 || dcm_lambda() < 0.0) {
    throw Error("config: lambda must be >= 0");
  }
  if (ridge < 0.0) throw Error("config: ridge must be >= 0");
  if (d1 < 1 || d2 < 1) throw Error("config: d1 and d2 must be >= 1");
  positive(z_entity, "z_entity");
  positive(z_edge, "z_edge");
  if (max_path_len < 2) throw Error("config: max_path_len must be >= 2");
  if (mu_mode == MuMode::fixed && !(mu_value >= 0.0 && mu_value <= 1.0)) {
    throw Error("config: fixed mu must lie in [0, 1]");
  }
  positive(eem_tol, "eem_tol");
  positive(dcm_tol, "dcm_tol");
  positive(eta0, "eta0");
  positive(rwr_tol, "rwr_tol");
  if (eem_max_iters < 1 || dcm_max_iters < 1 || rwr_max_iters < 1) {
    throw Error("config: iteration caps must be >= 1");
  }
  if (!(rwr_restart > 0.0 && rwr_restart <= 1.0)) throw Error("config: rwr_restart must be in (0, 1]");
  if (init_perturbation < 0.0) throw Error("config: init_perturbation must be >= 0");
}

void TransferConfig::set(const std::string& key, const std::string& value) {
  if (key == "theta") theta = static_cast<int>(to_int(key, value));
  else if (key == "lambda") lambda = to_real(key, value);
  else if (key == "lambda_eem") lambda_eem = to_real(key, value);
  else if (key == "lambda_dcm") lambda_dcm = to_real(key, value);
  else if (key == "ridge") ridge = to_real(key, value);
  else if (key == "d1") d1 = static_cast<int>(to_int(key, value));
  else if (key == "d2") d2 = static_cast<int>(to_int(key, value));
  else if (key == "z_entity") z_entity = to_real(key, value);
  else if (key == "z_edge") z_edge = to_real(key, value);
  else if (key == "max_path_len") max_path_len = static_cast<int>(to_int(key, value));
  else if (key == "distance_cap") distance_cap = to_real(key, value);
  else if (key == "mu") {
    if (value == "auto") {
      mu_mode = MuMode::automatic;
    } else {
      mu_mode = MuMode::fixed;
      mu_value = to_real(key, value);
    }
  }
  else if (key == "eem_tol") eem_tol = to_real(key, value);
  else if (key == "eem_max_iters") eem_max_iters = static_cast<int>(to_int(key, value));
  else if (key == "dcm_tol") dcm_tol = to_real(key, value);
  else if (key == "dcm_max_iters") dcm_max_iters = static_cast<int>(to_int(key, value));
  else if (key == "eta0") eta0 = to_real(key, value);
  else if (key == "init_perturbation") init_perturbation = to_real(key, value);
  else if (key == "rwr_restart") rwr_restart = to_real(key, value);
  else if (key == "rwr_tol") rwr_tol = to_real(key, value);
  else if (key == "rwr_max_iters") rwr_max_iters = static_cast<int>(to_int(key, value));
  else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(key, value));
  else throw Error("config: unknown key '" + key + "'");
}

TransferConfig load_config(const std::filesystem::path& path, TransferConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError("expected key=value", line_no, path.string());
    try {
      base.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const Error& e) {
      throw FormatError(e.what(), line_no, path.string());
    }
  }
  return base;
}

void to_json(nlohmann::json& j, const TransferConfig& c) {
  j = nlohmann::json{
      {"theta", c.theta},
      {"lambda", c.lambda},
      {"lambda_eem", c.eem_lambda()},
      {"lambda_dcm", c.dcm_lambda()},
      {"ridge", c.ridge},
      {"d1", c.d1},
      {"d2", c.d2},
      {"z_entity", c.z_entity},
      {"z_edge", c.z_edge},
      {"max_path_len", c.max_path_len},
      {"distance_cap", c.distance_cap},
      {"mu_mode", c.mu_mode == MuMode::automatic ? "auto" : "fixed"},
      {"eem_tol", c.eem_tol},
      {"eem_max_iters", c.eem_max_iters},
      {"dcm_tol", c.dcm_tol},
      {"dcm_max_iters", c.dcm_max_iters},
      {"eta0", c.eta0},
      {"seed", c.seed},
  };
  if (c.mu_mode == MuMode::fixed) j["mu_value"] = c.mu_value;
}

}  // namespace graft
