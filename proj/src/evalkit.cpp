#include "graft/evalkit.hpp"

#include <cmath>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "graft/error.hpp"
#include "graft/kernels.hpp"

namespace graft {

namespace {

using IdPair = std::pair<EntityId, EntityId>;

std::set<IdPair> edge_pairs(const HeteroGraph& g) {
  std::set<IdPair> out;
  for (const Edge& e : g.edges()) out.emplace(g.entity(e.u).id, g.entity(e.v).id);
  return out;
}

double ratio(std::size_t num, std::size_t den, const char* name, std::vector<std::string>& undefined) {
  if (den == 0) {
    undefined.emplace_back(name);
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

EvalResult score(const HeteroGraph& estimate, const HeteroGraph& truth) {
  EvalResult r;
  std::size_t hits = 0;
  for (const Entity& e : estimate.entities())
    if (truth.contains(e.id)) ++hits;
  r.entity_precision = ratio(hits, estimate.entity_count(), "entity_precision", r.undefined);
  r.entity_recall = ratio(hits, truth.entity_count(), "entity_recall", r.undefined);
  r.entity_f1 = harmonic(r.entity_precision, r.entity_recall);

  const std::set<IdPair> truth_edges = edge_pairs(truth);
  std::size_t edge_hits = 0;
  for (const Edge& e : estimate.edges())
    if (truth_edges.contains({estimate.entity(e.u).id, estimate.entity(e.v).id})) ++edge_hits;
  r.edge_precision = ratio(edge_hits, estimate.edge_count(), "edge_precision", r.undefined);
  r.edge_recall = ratio(edge_hits, truth.edge_count(), "edge_recall", r.undefined);
  r.edge_f1 = harmonic(r.edge_precision, r.edge_recall);

  r.combined_f1 = 0.5 * (r.entity_f1 + r.edge_f1);
  return r;
}

nlohmann::json eval_json(const EvalResult& r) {
  return {
      {"entity_precision", r.entity_precision}, {"entity_recall", r.entity_recall},
      {"entity_f1", r.entity_f1},               {"edge_precision", r.edge_precision},
      {"edge_recall", r.edge_recall},           {"edge_f1", r.edge_f1},
      {"combined_f1", r.combined_f1},           {"undefined", r.undefined},
  };
}

HeteroGraph baseline_nt(const HeteroGraph& gt_hat) { return gt_hat; }

HeteroGraph baseline_dt(const HeteroGraph& gs, const HeteroGraph& gt_hat) {
  return graph_union(gs, gt_hat);
}

std::vector<SelectedEntity> random_walk_selection(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                                                  const TransferConfig& config) {
  std::vector<std::size_t> seeds;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < gs.entity_count(); ++i) {
    (gt_hat.contains(gs.entity(i).id) ? seeds : candidates).push_back(i);
  }
  if (seeds.empty()) throw Error("no overlap between domains");
  if (candidates.empty()) return {};

  kernels::RestartWalk params;
  params.restart = config.rwr_restart;
  params.tolerance = config.rwr_tol;
  params.max_iterations = config.rwr_max_iters;
  const kernels::Vector scores = kernels::parallel::restart_walk(gs, seeds, params).scores;

  double mean = 0.0;
  for (std::size_t c : candidates) mean += scores(static_cast<Eigen::Index>(c));
  mean /= static_cast<double>(candidates.size());
  double var = 0.0;
  for (std::size_t c : candidates) {
    const double d = scores(static_cast<Eigen::Index>(c)) - mean;
    var += d * d;
  }
  const double sd = std::sqrt(var / static_cast<double>(candidates.size()));
  std::vector<SelectedEntity> out;
  if (!(sd > 0.0)) return out;
  for (std::size_t c : candidates) {
    const double z = (scores(static_cast<Eigen::Index>(c)) - mean) / sd;
    if (z >= config.z_entity) out.push_back({gs.entity(c).id, z});
  }
  return out;
}

TransferResult baseline_rw_dcm(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                               const TransferConfig& config) {
  run_stage("config", [&] { config.validate(); });
  TransferReport report;
  report.method = "rw-dcm";
  report.config = config;
  report.source_entities = gs.entity_count();
  report.target_entities = gt_hat.entity_count();
  report.selected =
      run_stage("random_walk", [&] { return random_walk_selection(gs, gt_hat, config); });

  const std::vector<EntityId> ids = ids_of(report.selected);
  ConstructionResult built = construct_target(gs, gt_hat, ids, config, &report.timing);
  report.mu_used = built.mu;
  report.c3 = built.c3;
  report.dcm_trace = built.solution.objective_trace;
  report.dcm_iterations = built.solution.iterations;
  report.dcm_converged = built.solution.converged;
  report.output_entities = built.g_t.entity_count();
  report.output_edges = built.g_t.edge_count();
  return {std::move(built.g_t), std::move(report)};
}

}  // namespace graft
