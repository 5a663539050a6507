#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "graft/hetgraph.hpp"

namespace graft {

struct SynthSpec {
  int n_source = 1200;
  int n_target = 600;  // size of the ground-truth target
  double dynamic_factor = 0.2;
  double maturity = 0.5;
  int n_types = 3;
  std::optional<double> edge_prob;  // default: mean degree 8
  std::uint64_t seed = 0;

  double resolved_edge_prob() const;
  void validate() const;
};

struct SynthInstance {
  HeteroGraph gs;
  HeteroGraph gt_truth;
  HeteroGraph gt_hat;
  std::size_t flips = 0;
  double measured_dynamic_factor = 0.0;
  double measured_maturity = 0.0;
};

/// Source graph, perturbed and trimmed ground truth, and its partial observation.
SynthInstance generate(const SynthSpec& spec);

/// Spec plus measured values, as written next to the generated graphs.
nlohmann::json synth_meta(const SynthSpec& spec, const SynthInstance& inst);

}  // namespace graft
