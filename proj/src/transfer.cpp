#include "graft/transfer.hpp"

#include <chrono>

#include <spdlog/spdlog.h>

#include "graft/error.hpp"

namespace graft {

namespace {

template <typename Fn>
decltype(auto) timed_stage(const std::string& stage, std::map<std::string, double>* timing, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  struct Record {
    const std::string& stage;
    std::map<std::string, double>* timing;
    std::chrono::steady_clock::time_point start;
    ~Record() {
      if (timing) {
        (*timing)[stage] +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    }
  } record{stage, timing, start};
  return run_stage(stage, std::forward<Fn>(fn));
}

EntityIdSet shared_ids(const HeteroGraph& a, const HeteroGraph& b) {
  EntityIdSet out;
  for (const Entity& e : a.entities())
    if (b.contains(e.id)) out.insert(out.end(), e.id);
  return out;
}

}  // namespace

double auto_mu(const HeteroGraph& g_tilde_t, const HeteroGraph& gt_hat) {
  if (g_tilde_t.empty()) throw Error("auto_mu: estimated target graph is empty");
  for (const Entity& e : gt_hat.entities()) {
    if (!g_tilde_t.contains(e.id)) {
      throw Error("auto_mu: target entity '" + e.id.str() + "' missing from the estimated graph");
    }
  }
  const auto total = static_cast<double>(g_tilde_t.entity_count());
  return (total - static_cast<double>(gt_hat.entity_count())) / total;
}

DcmOptions dcm_options(const TransferConfig& config) {
  DcmOptions o;
  o.eta0 = config.eta0;
  o.tol = config.dcm_tol;
  o.max_iters = config.dcm_max_iters;
  o.init_perturbation = config.init_perturbation;
  o.divergence_limit = config.divergence_limit;
  return o;
}

DcmProblem make_dcm_problem(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                            const HeteroGraph& g_tilde_t, double mu, const TransferConfig& config) {
  DcmProblem prob;
  prob.mu = mu;
  prob.lambda = config.dcm_lambda();
  prob.d2 = config.d2;

  // Consistency level observed where both domains are known.
  const EntityIdSet overlap = shared_ids(gt_hat, gs);
  if (overlap.size() >= 2) {
    auto [s_view, t_view] = align_union_entities(induced_subgraph(gs, overlap), gt_hat);
    prob.c3 = dynamic_factor(s_view, t_view);
  }

  const EntityIdSet in_source = shared_ids(g_tilde_t, gs);
  auto [t_view, s_view] = align_union_entities(g_tilde_t, induced_subgraph(gs, in_source));
  prob.a_tilde_t = std::move(t_view);
  prob.a_tilde_s = std::move(s_view);
  return prob;
}

ConstructionResult construct_target(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                                    std::span<const EntityId> selected, const TransferConfig& config,
                                    std::map<std::string, double>* timing) {
  HeteroGraph g_tilde_t =
      timed_stage("build_gt_tilde", timing, [&] { return build_gt_tilde(gt_hat, gs, selected); });
  const double mu = timed_stage("mu", timing, [&] {
    return config.mu_mode == MuMode::automatic ? auto_mu(g_tilde_t, gt_hat) : config.mu_value;
  });
  DcmProblem prob = timed_stage("dcm", timing, [&] {
    return make_dcm_problem(gs, gt_hat, g_tilde_t, mu, config);
  });
  DcmSolution sol =
      timed_stage("dcm", timing, [&] { return solve_dcm(prob, config.seed, dcm_options(config)); });
  HeteroGraph g_t = timed_stage("finalize_edges", timing,
                                [&] { return finalize_edges(sol, g_tilde_t, config.z_edge); });
  spdlog::info("construction: {} entities, mu {:.4g}, c3 {:.4g}, {} dcm iterations, {} edges",
               g_tilde_t.entity_count(), mu, prob.c3, sol.iterations, g_t.edge_count());
  return {std::move(g_t), std::move(g_tilde_t), std::move(sol), mu, prob.c3};
}

TransferResult acret_transfer(const HeteroGraph& gs, const HeteroGraph& gt_hat,
                              const TransferConfig& config) {
  run_stage("config", [&] { config.validate(); });
  TransferReport report;
  report.config = config;
  report.source_entities = gs.entity_count();
  report.target_entities = gt_hat.entity_count();

  run_stage("precondition", [&] {
    const EntityIdSet overlap = shared_ids(gs, gt_hat);
    if (overlap.empty()) throw Error("no overlap between domains");
    if (gs.entity_count() < overlap.size()) {
      throw Error("source graph must have at least as many entities as the overlap");
    }
  });

  MetaPathSet paths = timed_stage("metapaths", &report.timing, [&] {
    return build_metapath_set(gs, config.max_path_len, config.distance_cap);
  });
  spdlog::info("eem: {} meta-paths over {} source entities", paths.paths.size(), gs.entity_count());
  EemState eem = timed_stage("eem", &report.timing,
                             [&] { return run_eem(paths.paths, paths.distances, config); });
  paths.distances.clear();
  report.selected = timed_stage("select_entities", &report.timing, [&] {
    return select_entities(eem, gs, gt_hat, config.z_entity);
  });
  spdlog::info("eem: {} sweeps, {} entities selected", eem.sweeps(), report.selected.size());

  for (std::size_t k = 0; k < eem.metapaths.size(); ++k) {
    report.metapath_weights.emplace_back(eem.metapaths[k].to_string(), eem.weights[k]);
  }
  report.eem_trace = eem.objective_trace;
  report.eem_converged = eem.converged;
  report.eem_stalled = eem.stalled;

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
