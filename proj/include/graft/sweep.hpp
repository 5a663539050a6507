#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graft/config.hpp"
#include "graft/evalkit.hpp"
#include "graft/synthbench.hpp"

namespace graft {

enum class SweepAxis { size, dynfactor, maturity, mu };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

/// Known methods: nt, dt, rw-dcm, acret.
void validate_methods(const std::vector<std::string>& methods);

struct SweepPlan {
  SweepAxis axis = SweepAxis::maturity;
  std::vector<double> values;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds;
  SynthSpec base;  // non-swept generator settings
  TransferConfig config;
  int jobs = 1;
};

struct SweepRow {
  std::string sweep_var;
  double value = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  bool ok = true;
  EvalResult result;
  std::string message;
};

/// Generator spec for one grid point. On the size axis `value` is the source
/// size and the target truth keeps the base ratio.
SynthSpec point_spec(const SweepPlan& plan, double value, std::uint64_t seed);

/// Runs one method on one instance.
HeteroGraph run_method(const std::string& method, const SynthInstance& inst,
                       const TransferConfig& config);

/// Every grid point x seed x method, sorted by (value, method, seed). Failures
/// are recorded in the row rather than thrown.
std::vector<SweepRow> run_sweep(const SweepPlan& plan);

/// Versioned CSV with a header comment.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace graft
