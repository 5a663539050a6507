#include "graft/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <tuple>

#include <spdlog/spdlog.h>

#include "graft/error.hpp"
#include "graft/graph_io.hpp"
#include "graft/transfer.hpp"

namespace graft {

namespace {

constexpr const char* kMethods[] = {"nt", "dt", "rw-dcm", "acret"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

SweepAxis parse_axis(const std::string& name) {
  if (name == "size") return SweepAxis::size;
  if (name == "dynfactor") return SweepAxis::dynfactor;
  if (name == "maturity") return SweepAxis::maturity;
  if (name == "mu") return SweepAxis::mu;
  throw Error("unknown sweep axis '" + name + "' (expected size, dynfactor, maturity or mu)");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::size: return "size";
    case SweepAxis::dynfactor: return "dynfactor";
    case SweepAxis::maturity: return "maturity";
    case SweepAxis::mu: return "mu";
  }
  return "?";
}

void validate_methods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw Error("no methods given");
  for (const std::string& m : methods) {
    if (std::find(std::begin(kMethods), std::end(kMethods), m) == std::end(kMethods)) {
      throw Error("unknown method '" + m + "' (expected nt, dt, rw-dcm or acret)");
    }
  }
}

SynthSpec point_spec(const SweepPlan& plan, double value, std::uint64_t seed) {
  SynthSpec spec = plan.base;
  spec.seed = seed;
  switch (plan.axis) {
    case SweepAxis::size: {
      const double ratio = static_cast<double>(plan.base.n_target) / plan.base.n_source;
      spec.n_source = static_cast<int>(std::lround(value));
      spec.n_target = static_cast<int>(std::lround(value * ratio));
      break;
    }
    case SweepAxis::dynfactor: spec.dynamic_factor = value; break;
    case SweepAxis::maturity: spec.maturity = value; break;
    case SweepAxis::mu: break;
  }
  return spec;
}

HeteroGraph run_method(const std::string& method, const SynthInstance& inst,
                       const TransferConfig& config) {
  if (method == "nt") return baseline_nt(inst.gt_hat);
  if (method == "dt") return baseline_dt(inst.gs, inst.gt_hat);
  if (method == "rw-dcm") return baseline_rw_dcm(inst.gs, inst.gt_hat, config).g_t;
  if (method == "acret") return acret_transfer(inst.gs, inst.gt_hat, config).g_t;
  throw Error("unknown method '" + method + "'");
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
  validate_methods(plan.methods);
  if (plan.values.empty()) throw Error("sweep needs at least one grid value");
  if (plan.seeds.empty()) throw Error("sweep needs at least one seed");
  if (plan.jobs < 1) throw Error("jobs must be positive");

  struct Task {
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double v : plan.values)
    for (std::uint64_t s : plan.seeds) tasks.push_back({v, s});

  std::vector<std::vector<SweepRow>> slots(tasks.size());
  const auto ntasks = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(plan.jobs)
  for (long t = 0; t < ntasks; ++t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    TransferConfig config = plan.config;
    config.seed = task.seed;
    if (plan.axis == SweepAxis::mu) {
      config.mu_mode = MuMode::fixed;
      config.mu_value = task.value;
    }
    auto row_for = [&](const std::string& method) {
      SweepRow row;
      row.sweep_var = axis_name(plan.axis);
      row.value = task.value;
      row.method = method;
      row.seed = task.seed;
      return row;
    };

    std::optional<SynthInstance> inst;
    std::string gen_error;
    try {
      inst = generate(point_spec(plan, task.value, task.seed));
    } catch (const std::exception& e) {
      gen_error = std::string("[synth] ") + e.what();
    }
    for (const std::string& method : plan.methods) {
      SweepRow row = row_for(method);
      if (!inst) {
        row.ok = false;
        row.message = gen_error;
      } else {
        try {
          row.result = score(run_method(method, *inst, config), inst->gt_truth);
        } catch (const std::exception& e) {
          row.ok = false;
          row.message = e.what();
        }
      }
      if (!row.ok) spdlog::error("sweep {}={} {} seed {}: {}", row.sweep_var, task.value, method, task.seed, row.message);
      slots[static_cast<std::size_t>(t)].push_back(std::move(row));
    }
  }

  std::vector<SweepRow> rows;
  for (auto& slot : slots)
    for (auto& r : slot) rows.push_back(std::move(r));
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.value, a.method, a.seed) < std::tie(b.value, b.method, b.seed);
  });
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "# graft sweep csv v1\n";
  out << "sweep_var,value,method,seed,status,entity_f1,edge_f1,combined_f1,message\n";
  for (const SweepRow& r : rows) {
    out << r.sweep_var << ',' << format_real(r.value) << ',' << r.method << ',' << r.seed << ','
        << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      out << format_real(r.result.entity_f1) << ',' << format_real(r.result.edge_f1) << ','
          << format_real(r.result.combined_f1);
    } else {
      out << ",,";
    }
    out << ',' << csv_field(r.message) << '\n';
  }
}

}  // namespace graft
