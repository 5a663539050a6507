#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "graft/config.hpp"
#include "graft/dcm.hpp"
#include "graft/eem.hpp"
#include "graft/hetgraph.hpp"

namespace graft {

/// Diagnostics of one transfer run.
struct TransferReport {
  std::string method = "acret";
  TransferConfig config;
  std::vector<std::pair<std::string, double>> metapath_weights;
  std::vector<double> eem_trace;
  bool eem_converged = false;
  bool eem_stalled = false;
  std::vector<SelectedEntity> selected;
  double mu_used = 0.0;
  double c3 = 0.0;
  std::vector<double> dcm_trace;
  int dcm_iterations = 0;
  bool dcm_converged = false;
  std::size_t source_entities = 0;
  std::size_t target_entities = 0;
  std::size_t output_entities = 0;
  std::size_t output_edges = 0;
  /// Wall-clock seconds per stage. Serialized only on request so that reports
  /// stay byte-identical across runs.
  std::map<std::string, double> timing;
};

/// Serializes as a `report_v1` document.
nlohmann::json report_json(const TransferReport& report, bool include_timing = false);

/// Fraction of entities in g_tilde_t that came from the source.
double auto_mu(const HeteroGraph& g_tilde_t, const HeteroGraph& gt_hat);

/// Output of the shared construction stage (also used by the random-walk baseline).
struct ConstructionResult {
  HeteroGraph g_t;
  HeteroGraph g_tilde_t;
  DcmSolution solution;
  double mu = 0.0;
  double c3 = 0.0;
};

/// Problem over g_tilde_t's entities: Ã_T from g_tilde_t, Ã_S from gs induced on
/// the same ids, c3 from the observed overlap of gs and gt_hat.
DcmProblem make_dcm_problem(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                            const HeteroGraph& g_tilde_t, double mu, const TransferConfig& config);

/// build_gt_tilde -> mu -> solve_dcm -> finalize_edges, with stage labels.
ConstructionResult construct_target(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                                    std::span<const EntityId> selected, const TransferConfig& config,
                                    std::map<std::string, double>* timing = nullptr);

DcmOptions dcm_options(const TransferConfig& config);

struct TransferResult {
  HeteroGraph g_t;
  TransferReport report;
};

/// Entity estimation on gs followed by dependency construction on the target.
TransferResult acret_transfer(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                              const TransferConfig& config);

}  // namespace graft
