#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "graft/config.hpp"
#include "graft/hetgraph.hpp"
#include "graft/transfer.hpp"

namespace graft {

struct EvalResult {
  double entity_precision = 0.0;
  double entity_recall = 0.0;
  double entity_f1 = 0.0;
  double edge_precision = 0.0;
  double edge_recall = 0.0;
  double edge_f1 = 0.0;
  double combined_f1 = 0.0;
  /// Names of the ratios that had a zero denominator and were set to 0.
  std::vector<std::string> undefined;
};

/// Entities compared by id, edges by unordered id pair; weights are ignored.
EvalResult score(const HeteroGraph& estimate, const HeteroGraph& truth);

nlohmann::json eval_json(const EvalResult& r);

/// No transfer: the observed target graph itself.
HeteroGraph baseline_nt(const HeteroGraph& gt_hat);

/// Direct transfer: union of source and observed target.
HeteroGraph baseline_dt(const HeteroGraph& gs, const HeteroGraph& gt_hat);

/// Random-walk relevance scores of the source-only entities, in gs order,
/// restarting on the entities shared with gt_hat.
std::vector<SelectedEntity> random_walk_selection(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                                                  const TransferConfig& config);

/// Random-walk entity selection followed by the standard construction stage.
TransferResult baseline_rw_dcm(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                               const TransferConfig& config);

}  // namespace graft
