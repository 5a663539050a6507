#include "graft/eem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "graft/error.hpp"
#include "graft/kernels.hpp"
#include "graft/numerics.hpp"

namespace graft {

namespace kp = kernels::parallel;

namespace {

kernels::MatrixList pointers(const std::vector<SimilarityMatrix>& mats) {
  kernels::MatrixList out;
  out.reserve(mats.size());
  for (const SimilarityMatrix& m : mats) out.push_back(&m.values);
  return out;
}

void check_mats(const std::vector<SimilarityMatrix>& mats, Eigen::Index n) {
  if (mats.empty()) throw Error("need at least one meta-path matrix");
  for (const SimilarityMatrix& m : mats) {
    if (m.values.rows() != n || m.values.cols() != n) {
      throw Error("meta-path matrix '" + m.provenance + "' has mismatched dimensions");
    }
  }
}

Eigen::VectorXd as_vector(std::span<const double> w) {
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

// sum over i<j of a(i,j) b(i,j)
double upper_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return 0.5 * (a.cwiseProduct(b).sum() - a.diagonal().dot(b.diagonal()));
}

// u scaled by sqrt(c), c >= 0 minimizing ||c C1 - S_G||^2 over pairs.
Embedding fit_scale(Embedding u, const Eigen::MatrixXd& sg) {
  const Eigen::MatrixXd c1 = kp::squared_row_distances(u);
  const double denom = upper_inner(c1, c1);
  if (denom > 0.0) u *= std::sqrt(std::max(0.0, upper_inner(c1, sg) / denom));
  return u;
}

Embedding scaled_mds(const Eigen::MatrixXd& sg, int d1) {
  return fit_scale(mds_embed(SimilarityMatrix{sg, ""}, d1), sg);
}

double objective(const Embedding& u, const kernels::MatrixList& mats, const Eigen::VectorXd& w,
                 int theta, double lambda) {
  const Eigen::MatrixXd sg = kp::weighted_sum(mats, w);
  const Eigen::MatrixXd c1 = kp::squared_row_distances(u);
  return kp::pair_loss(c1, sg, theta) + lambda * u.squaredNorm() + lambda * w.squaredNorm();
}

}  // namespace

Embedding mds_embed(const SimilarityMatrix& sg, int d1) {
  const Eigen::MatrixXd& s = sg.values;
  const Eigen::Index n = s.rows();
  if (s.cols() != n) throw Error("mds_embed: matrix must be square");
  if (d1 < 1 || d1 > n) {
    throw Error("mds_embed: embedding dimension " + std::to_string(d1) + " must lie in [1, " +
                std::to_string(n) + "]");
  }
  if (!s.allFinite()) throw Error("mds_embed: non-finite entries");

  const Eigen::VectorXd row_mean = s.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      b(i, j) = -0.5 * (s(i, j) - row_mean(i) - row_mean(j) + grand);
  b = 0.5 * (b + b.transpose()).eval();

  const numerics::EigenPairs eig = numerics::sym_eig_topk(b, d1);
  const Eigen::VectorXd scale = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * scale.asDiagonal();
}

std::vector<double> fit_weights(const Embedding& embedding, const std::vector<SimilarityMatrix>& mats,
                                double ridge) {
  check_mats(mats, embedding.rows());
  const auto list = pointers(mats);
  const Eigen::MatrixXd c1 = kp::squared_row_distances(embedding);
  const Eigen::VectorXd w =
      numerics::ols_nonneg_normal(kp::upper_gram(list), kp::upper_dot(list, c1), ridge);
  return {w.data(), w.data() + w.size()};
}

double eem_objective(const Embedding& embedding, const std::vector<SimilarityMatrix>& mats,
                     std::span<const double> weights, int theta, double lambda) {
  check_mats(mats, embedding.rows());
  if (weights.size() != mats.size()) throw Error("eem_objective: need one weight per meta-path");
  return objective(embedding, pointers(mats), as_vector(weights), theta, lambda);
}

Eigen::MatrixXd relevance(const Embedding& embedding) {
  Eigen::MatrixXd r = embedding * embedding.transpose();
  // Force exact symmetry; the product is symmetric only up to rounding.
  const Eigen::Index n = r.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) r(j, i) = r(i, j);
  return r;
}

EemState run_eem(const std::vector<MetaPath>& paths, const std::vector<SimilarityMatrix>& mats,
                 const TransferConfig& config) {
  if (mats.empty()) {
    throw Error("no meta-paths found in the source graph; raise max_path_len");
  }
  if (paths.size() != mats.size()) throw Error("run_eem: one matrix per meta-path required");
  const Eigen::Index n = mats.front().values.rows();
  check_mats(mats, n);
  const int d1 = static_cast<int>(std::min<Eigen::Index>(config.d1, n));
  const double lambda = config.eem_lambda();
  const int theta = config.theta;

  const auto list = pointers(mats);
  const Eigen::MatrixXd gram = kp::upper_gram(list);
  const auto k = static_cast<Eigen::Index>(mats.size());

  // The data term is invariant to a joint rescaling of w and C1, so the
  // weights live on the simplex and the embedding carries the scale.
  // Over the simplex the objective in w is the quadratic
  //   2 (w^T G w - 2 r^T w) + lambda w^T w + const.
  const Eigen::MatrixXd q = 4.0 * gram + 2.0 * lambda * Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  Embedding u = scaled_mds(kp::weighted_sum(list, w), d1);
  double loss = objective(u, list, w, theta, lambda);

  EemState state;
  state.metapaths = paths;
  state.objective_trace.push_back(loss);

  for (int sweep = 1; sweep < config.eem_max_iters; ++sweep) {
    bool moved = false;

    const Eigen::VectorXd r = kp::upper_dot(list, kp::squared_row_distances(u));
    const Eigen::VectorXd cand_w = numerics::simplex_qp(q, 4.0 * r, w);
    if ((cand_w - w).lpNorm<Eigen::Infinity>() > 0.0) {
      const double l = objective(u, list, cand_w, theta, lambda);
      if (l <= loss) {
        w = cand_w;
        loss = l;
        moved = true;
      }
    }

    // Embedding: classical MDS of the blend, else a pure rescale of u.
    const Eigen::MatrixXd sg = kp::weighted_sum(list, w);
    for (const Embedding& cand : {scaled_mds(sg, d1), fit_scale(u, sg)}) {
      const double l = objective(cand, list, w, theta, lambda);
      if (l < loss) {
        u = cand;
        loss = l;
        moved = true;
        break;
      }
    }

    const double prev = state.objective_trace.back();
    state.objective_trace.push_back(loss);
    const double change = std::abs(prev - loss) / std::max(std::abs(prev), 1e-300);
    spdlog::debug("eem sweep {}: objective {:.9g} (rel change {:.3g})", sweep + 1, loss, change);
    if (!moved) {
      // Neither block found an improvement; the iteration is at a fixed point.
      state.stalled = true;
      state.converged = true;
      break;
    }
    if (change < config.eem_tol) {
      state.converged = true;
      break;
    }
  }

  state.weights.assign(w.data(), w.data() + w.size());
  state.embedding = std::move(u);
  return state;
}

EemState run_eem(const HeteroGraph& gs, const TransferConfig& config) {
  if (gs.empty()) throw Error("source graph is empty");
  MetaPathSet set = build_metapath_set(gs, config.max_path_len, config.distance_cap);
  return run_eem(set.paths, set.distances, config);
}

std::vector<SelectedEntity> select_entities(const EemState& state, const HeteroGraph& gs,
                                            const HeteroGraph& gt_hat, double z) {
  if (state.embedding.rows() != static_cast<Eigen::Index>(gs.entity_count())) {
    throw Error("embedding does not match the source graph");
  }
  std::vector<Eigen::Index> shared;
  std::vector<Eigen::Index> candidates;
  for (std::size_t i = 0; i < gs.entity_count(); ++i) {
    (gt_hat.contains(gs.entity(i).id) ? shared : candidates).push_back(static_cast<Eigen::Index>(i));
  }
  if (shared.empty()) throw Error("no overlap between domains");
  if (candidates.empty()) return {};

  const Eigen::MatrixXd r = relevance(state.embedding);
  const Eigen::VectorXd best = kp::max_row_zscore(r, shared, candidates);
  std::vector<SelectedEntity> out;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double score = best(static_cast<Eigen::Index>(c));
    if (score >= z) {
      out.push_back({gs.entity(static_cast<std::size_t>(candidates[c])).id, score});
    }
  }
  return out;
}

HeteroGraph build_gt_tilde(const HeteroGraph& gt_hat, const HeteroGraph& gs,
                           std::span<const EntityId> selected) {
  GraphBuilder builder;
  for (const Entity& e : gt_hat.entities()) builder.add_entity(e.id, e.type);
  for (const EntityId& id : selected) {
    if (gt_hat.contains(id)) throw Error("selected entity '" + id.str() + "' already in target");
    const auto idx = gs.index_of(id);
    if (!idx) throw Error("selected entity '" + id.str() + "' not in source graph");
    builder.add_entity(id, gs.entity(*idx).type);
  }
  for (const Edge& e : gt_hat.edges()) {
    builder.add_edge(gt_hat.entity(e.u).id, gt_hat.entity(e.v).id, e.weight);
  }
  return builder.build();
}

std::vector<EntityId> ids_of(std::span<const SelectedEntity> selected) {
  std::vector<EntityId> out;
  out.reserve(selected.size());
  for (const SelectedEntity& s : selected) out.push_back(s.id);
  return out;
}

}  // namespace graft
