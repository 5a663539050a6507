#include <nlohmann/json.hpp>

#include "graft/transfer.hpp"

namespace graft {

nlohmann::json report_json(const TransferReport& report, bool include_timing) {
  using nlohmann::json;
  json weights = json::array();
  for (const auto& [path, w] : report.metapath_weights) weights.push_back({{"metapath", path}, {"weight", w}});

  json selected = json::array();
  for (const SelectedEntity& s : report.selected) {
    selected.push_back({{"id", s.id.str()}, {"score", s.score}});
  }

  json dcm_trace = json::array();
  for (std::size_t i = 0; i < report.dcm_trace.size(); ++i) dcm_trace.push_back({i, report.dcm_trace[i]});

  json j = {
      {"schema", "report_v1"},
      {"method", report.method},
      {"config", report.config},
      {"counts",
       {{"source_entities", report.source_entities},
        {"target_entities", report.target_entities},
        {"output_entities", report.output_entities},
        {"output_edges", report.output_edges}}},
      {"eem",
       {{"metapaths", weights},
        {"objective_trace", report.eem_trace},
        {"converged", report.eem_converged},
        {"stalled", report.eem_stalled}}},
      {"selected", selected},
      {"mu_used", report.mu_used},
      {"c3", report.c3},
      {"dcm",
       {{"objective_trace", dcm_trace},
        {"iterations", report.dcm_iterations},
        {"converged", report.dcm_converged}}},
  };
  if (include_timing) j["timing"] = report.timing;
  return j;
}

}  // namespace graft
