#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "graft/config.hpp"
#include "graft/hetgraph.hpp"
#include "graft/metapath.hpp"

namespace graft {

/// n x d matrix, row i = vector of entity i in the owning graph's order.
using Embedding = Eigen::MatrixXd;

/// Outcome of the entity-embedding alternation on the source graph.
struct EemState {
  std::vector<MetaPath> metapaths;
  std::vector<double> weights;  // sum to 1
  Embedding embedding;
  std::vector<double> objective_trace;
  /// Relative objective change dropped below eem_tol.
  bool converged = false;
  /// The last sweep accepted neither a new weight vector nor a new embedding.
  bool stalled = false;

  int sweeps() const { return static_cast<int>(objective_trace.size()); }
};

struct SelectedEntity {
  EntityId id;
  double score;  // max z-score over the shared rows
};

/// Classical MDS of a distance matrix: double-center, take the top-d1
/// eigenpairs, clip negative eigenvalues, scale eigenvectors by sqrt(lambda).
Embedding mds_embed(const SimilarityMatrix& sg, int d1);

/// Non-negative least-squares weights w such that sum_k w_k S_k matches the
/// squared row distances of `embedding` over the upper triangle.
std::vector<double> fit_weights(const Embedding& embedding, const std::vector<SimilarityMatrix>& mats,
                                double ridge);

/// sum_{i != j} |C1(i,j) - S_G(i,j)|^theta + lambda ||u||^2 + lambda ||w||^2.
double eem_objective(const Embedding& embedding, const std::vector<SimilarityMatrix>& mats,
                     std::span<const double> weights, int theta, double lambda);

/// R = u u^T.
Eigen::MatrixXd relevance(const Embedding& embedding);

/// Alternates embedding and weight updates over precomputed meta-path distances.
EemState run_eem(const std::vector<MetaPath>& paths, const std::vector<SimilarityMatrix>& mats,
                 const TransferConfig& config);

/// Enumerates meta-paths of gs, builds their distance matrices and runs the alternation.
EemState run_eem(const HeteroGraph& gs, const TransferConfig& config);

/// Source-only entities (absent from gt_hat) whose z-score in the relevance row
/// of at least one shared entity reaches `z`. Result is in id order.
std::vector<SelectedEntity> select_entities(const EemState& state, const HeteroGraph& gs,
                                            const HeteroGraph& gt_hat, double z);

/// gt_hat plus the selected source entities as isolated vertices.
HeteroGraph build_gt_tilde(const HeteroGraph& gt_hat, const HeteroGraph& gs,
                           std::span<const EntityId> selected);

/// Ids of a selection, in the same order.
std::vector<EntityId> ids_of(std::span<const SelectedEntity> selected);

}  // namespace graft
