// graft: command-line front end for synthetic generation, ingestion,
// transfer, baselines, scoring and parameter sweeps.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graft/config.hpp"
#include "graft/error.hpp"
#include "graft/evalkit.hpp"
#include "graft/graph_io.hpp"
#include "graft/ingest.hpp"
#include "graft/log.hpp"
#include "graft/metapath.hpp"
#include "graft/sweep.hpp"
#include "graft/synthbench.hpp"
#include "graft/transfer.hpp"

namespace fs = std::filesystem;
using namespace graft;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const nlohmann::json& j, const fs::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw Error("not a number: '" + s + "'");
  return v;
}

// "0.1,0.2" or "start:stop:step" (inclusive of stop within rounding).
std::vector<double> parse_grid(const std::string& s) {
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw Error("range must be start:stop:step");
    const double a = parse_real(parts[0]), b = parse_real(parts[1]), step = parse_real(parts[2]);
    if (!(step > 0.0) || b < a) throw Error("range needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real(item));
  return out;
}

// Transfer tunables: optional key=value file, then explicit flags on top.
class ConfigFlags {
 public:
  void attach(CLI::App* sub) {
    sub->add_option("--config", file_, "key=value config file (flags take precedence)")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", settings_, "extra config setting key=value (repeatable)");
    add(sub, "seed", "--seed", "random seed");
    add(sub, "mu", "--mu", "auto or a fixed value in [0,1]");
    add(sub, "theta", "--theta", "pair loss exponent (1 or 2)");
    add(sub, "lambda", "--lambda", "regularization weight");
    add(sub, "d1", "--d1", "source embedding dimension");
    add(sub, "d2", "--d2", "target embedding dimension");
    add(sub, "z_entity", "--z-entity", "entity selection z threshold");
    add(sub, "z_edge", "--z-edge", "edge selection z threshold");
    add(sub, "max_path_len", "--max-path-len", "longest meta-path (types)");
  }

  TransferConfig resolve() const {
    TransferConfig c = file_.empty() ? TransferConfig{} : load_config(file_);
    for (const std::string& kv : settings_) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
      c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, opt] : options_)
      if (opt->count() > 0) c.set(key, values_.at(key));
    c.validate();
    return c;
  }

 private:
  void add(CLI::App* sub, const std::string& key, const std::string& flag, const std::string& help) {
    options_[key] = sub->add_option(flag, values_[key], help);
  }

  std::string file_;
  std::vector<std::string> settings_;
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
};

void dump_similarity(const HeteroGraph& gs, const TransferConfig& config, const fs::path& dir) {
  const MetaPathSet set = build_metapath_set(gs, config.max_path_len, config.distance_cap);
  fs::create_directories(dir);
  for (std::size_t k = 0; k < set.paths.size(); ++k) {
    const std::string name = set.paths[k].to_string();
    auto out = open_out(dir / (name + ".csv"));
    out << "# metapath " << name << '\n';
    const auto& m = set.distances[k].values;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_real(m(i, j));
      out << '\n';
    }
  }
}

void write_trace(const std::vector<double>& trace, const fs::path& path) {
  auto out = open_out(path);
  out << "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << format_real(trace[i]) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graft: dependency-graph transfer toolkit"};
  app.require_subcommand(1);

  // synth
  SynthSpec synth;
  std::string synth_out;
  auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic source/target instance");
  cmd_synth->add_option("--n-source", synth.n_source, "source entities")->capture_default_str();
  cmd_synth->add_option("--n-target", synth.n_target, "ground-truth target entities")->capture_default_str();
  cmd_synth->add_option("--dynamic-factor", synth.dynamic_factor, "dynamic factor F")->capture_default_str();
  cmd_synth->add_option("--maturity", synth.maturity, "maturity M")->capture_default_str();
  cmd_synth->add_option("--n-types", synth.n_types, "entity types")->capture_default_str();
  cmd_synth->add_option("--edge-prob", synth.edge_prob, "edge probability (default: mean degree 8)");
  cmd_synth->add_option("--seed", synth.seed, "random seed")->capture_default_str();
  cmd_synth->add_option("--out", synth_out, "output directory")->required();

  // ingest
  std::string events_path, ingest_out, snapshot_dir;
  std::int64_t window = 0;
  auto* cmd_ingest = app.add_subcommand("ingest", "build a graph from JSON-lines events");
  cmd_ingest->add_option("--events", events_path, "event file")->required()->check(CLI::ExistingFile);
  cmd_ingest->add_option("--out", ingest_out, "accumulated graph file");
  cmd_ingest->add_option("--window", window, "snapshot window in milliseconds");
  cmd_ingest->add_option("--snapshot-dir", snapshot_dir, "directory for cumulative snapshots");

  // transfer
  ConfigFlags transfer_flags;
  std::string t_source, t_target, t_out, t_report, t_dump, t_trace;
  bool t_timing = false;
  auto* cmd_transfer = app.add_subcommand("transfer", "estimate the target graph by knowledge transfer");
  cmd_transfer->add_option("--source", t_source, "source graph")->required()->check(CLI::ExistingFile);
  cmd_transfer->add_option("--target", t_target, "observed target graph")->required()->check(CLI::ExistingFile);
  cmd_transfer->add_option("--out", t_out, "estimated target graph")->required();
  cmd_transfer->add_option("--report", t_report, "JSON report");
  cmd_transfer->add_flag("--report-timing", t_timing, "include per-stage wall time in the report");
  cmd_transfer->add_option("--dump-similarity", t_dump, "directory for meta-path distance matrices");
  cmd_transfer->add_option("--dcm-trace", t_trace, "CSV of the construction objective per iteration");
  transfer_flags.attach(cmd_transfer);

  // baseline
  ConfigFlags baseline_flags;
  std::string b_method, b_source, b_target, b_out, b_report;
  auto* cmd_baseline = app.add_subcommand("baseline", "run a baseline estimator");
  cmd_baseline->add_option("--method", b_method, "nt, dt or rw-dcm")
      ->required()
      ->check(CLI::IsMember({"nt", "dt", "rw-dcm"}));
  cmd_baseline->add_option("--source", b_source, "source graph")->check(CLI::ExistingFile);
  cmd_baseline->add_option("--target", b_target, "observed target graph")->required()->check(CLI::ExistingFile);
  cmd_baseline->add_option("--out", b_out, "estimated target graph")->required();
  cmd_baseline->add_option("--report", b_report, "JSON report (rw-dcm)");
  baseline_flags.attach(cmd_baseline);

  // eval
  std::string e_estimate, e_truth, e_out;
  auto* cmd_eval = app.add_subcommand("eval", "score an estimate against the truth");
  cmd_eval->add_option("--estimate", e_estimate, "estimated graph")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--truth", e_truth, "ground-truth graph")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--out", e_out, "write the JSON result here as well");

  // sweep
  ConfigFlags sweep_flags;
  SweepPlan plan;
  std::string s_axis, s_values, s_methods, s_seeds = "1", s_out;
  auto* cmd_sweep = app.add_subcommand("sweep", "grid experiment over one generator or model variable");
  cmd_sweep->add_option("--axis", s_axis, "size, dynfactor, maturity or mu")->required();
  cmd_sweep->add_option("--values", s_values, "grid: a,b,c or start:stop:step")->required();
  cmd_sweep->add_option("--methods", s_methods, "comma list of nt, dt, rw-dcm, acret")->required();
  cmd_sweep->add_option("--seeds", s_seeds, "comma list of seeds")->capture_default_str();
  cmd_sweep->add_option("--out", s_out, "CSV output")->required();
  cmd_sweep->add_option("--jobs", plan.jobs, "concurrent grid points")->capture_default_str();
  cmd_sweep->add_option("--n-source", plan.base.n_source, "source entities")->capture_default_str();
  cmd_sweep->add_option("--n-target", plan.base.n_target, "ground-truth target entities")->capture_default_str();
  cmd_sweep->add_option("--dynamic-factor", plan.base.dynamic_factor, "dynamic factor F")->capture_default_str();
  cmd_sweep->add_option("--maturity", plan.base.maturity, "maturity M")->capture_default_str();
  sweep_flags.attach(cmd_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    init_logging();
  } catch (const Error& e) {
    std::cerr << "graft: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    run_stage(sub->get_name(), [&] {
      if (sub == cmd_synth) {
        const SynthInstance inst = generate(synth);
        const fs::path dir(synth_out);
        fs::create_directories(dir);
        write_graph(inst.gs, dir / "source.graph");
        write_graph(inst.gt_truth, dir / "target_truth.graph");
        write_graph(inst.gt_hat, dir / "target_partial.graph");
        write_json(synth_meta(synth, inst), dir / "meta.json");
      } else if (sub == cmd_ingest) {
        if (ingest_out.empty() && snapshot_dir.empty()) throw Error("need --out or --snapshot-dir");
        if (!snapshot_dir.empty() && window <= 0) throw Error("--snapshot-dir needs a positive --window");
        const std::vector<Event> events = read_events(events_path);
        if (!ingest_out.empty()) {
          std::size_t skipped = 0;
          write_graph(accumulate(events, &skipped), ingest_out);
          if (skipped) std::cerr << "graft: skipped " << skipped << " events with fewer than two attributes\n";
        }
        if (!snapshot_dir.empty()) {
          const auto series = snapshot_series(events, window);
          fs::create_directories(snapshot_dir);
          for (std::size_t k = 0; k < series.size(); ++k) {
            std::string name = std::to_string(k + 1);
            name.insert(0, name.size() < 4 ? 4 - name.size() : 0, '0');
            write_graph(series[k], fs::path(snapshot_dir) / ("snapshot_" + name + ".graph"));
          }
        }
      } else if (sub == cmd_transfer) {
        const TransferConfig config = transfer_flags.resolve();
        const HeteroGraph gs = read_graph(t_source);
        const HeteroGraph gt_hat = read_graph(t_target);
        if (!t_dump.empty()) dump_similarity(gs, config, t_dump);
        const TransferResult result = acret_transfer(gs, gt_hat, config);
        write_graph(result.g_t, t_out);
        if (!t_report.empty()) write_json(report_json(result.report, t_timing), t_report);
        if (!t_trace.empty()) write_trace(result.report.dcm_trace, t_trace);
      } else if (sub == cmd_baseline) {
        const TransferConfig config = baseline_flags.resolve();
        const HeteroGraph gt_hat = read_graph(b_target);
        if (b_method == "nt") {
          write_graph(baseline_nt(gt_hat), b_out);
          return;
        }
        if (b_source.empty()) throw Error("--source is required for " + b_method);
        const HeteroGraph gs = read_graph(b_source);
        if (b_method == "dt") {
          write_graph(baseline_dt(gs, gt_hat), b_out);
          return;
        }
        const TransferResult result = baseline_rw_dcm(gs, gt_hat, config);
        write_graph(result.g_t, b_out);
        if (!b_report.empty()) write_json(report_json(result.report), b_report);
      } else if (sub == cmd_eval) {
        const nlohmann::json j = eval_json(score(read_graph(e_estimate), read_graph(e_truth)));
        std::cout << j.dump(2) << '\n';
        if (!e_out.empty()) write_json(j, e_out);
      } else if (sub == cmd_sweep) {
        plan.axis = parse_axis(s_axis);
        plan.values = parse_grid(s_values);
        plan.methods = split(s_methods, ',');
        validate_methods(plan.methods);
        plan.seeds.clear();
        for (const auto& s : split(s_seeds, ',')) plan.seeds.push_back(std::stoull(s));
        plan.config = sweep_flags.resolve();
        const auto rows = run_sweep(plan);
        auto out = open_out(s_out);
        write_sweep_csv(rows, out);
        std::size_t failed = 0;
        for (const auto& r : rows) failed += r.ok ? 0 : 1;
        if (failed) throw Error(std::to_string(failed) + " sweep rows failed; see the status column");
      }
    });
  } catch (const StageError& e) {
    std::cerr << "graft: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "graft: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
