#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graft/hetgraph.hpp"

namespace graft {

/// Sequence of entity types. A path and its reversal denote the same relation;
/// the stored orientation is the lexicographically smaller of the two.
class MetaPath {
 public:
  explicit MetaPath(std::vector<EntityType> types);

  const std::vector<EntityType>& types() const noexcept { return types_; }
  std::size_t length() const noexcept { return types_.size(); }
  MetaPath reversed() const;
  bool palindromic() const;
  /// "process-file-process"
  std::string to_string() const;

  friend bool operator==(const MetaPath&, const MetaPath&) = default;
  friend auto operator<=>(const MetaPath& a, const MetaPath& b) { return a.types_ <=> b.types_; }

 private:
  std::vector<EntityType> types_;
};

/// Shortest-path distance matrix of one projection graph.
struct SimilarityMatrix {
  Eigen::MatrixXd values;
  std::string provenance;

  Eigen::Index size() const noexcept { return values.rows(); }
};

/// Every type sequence of length 2..max_len whose consecutive type pairs are all
/// realized by an edge of g, reversals merged, in lexicographic order.
std::vector<MetaPath> enumerate_metapaths(const HeteroGraph& g, int max_len);

/// Homogeneous graph over all of g's entities: edge {u, v} weighted by the number
/// of walks in g that follow p (in either orientation) from u to v.
HeteroGraph project(const HeteroGraph& g, const MetaPath& p);

/// Hop-count distances of gp. Unreachable pairs get `cap`; with cap <= 0 the cap
/// defaults to (longest finite distance) + 1.
SimilarityMatrix path_distance_matrix(const HeteroGraph& gp, double cap = 0.0);

/// sum_i w_i S_i. Weights must be non-negative and dimensions must agree.
SimilarityMatrix blend(const std::vector<SimilarityMatrix>& mats, const std::vector<double>& w);

/// Projections and distance matrices for every enumerated meta-path of g.
struct MetaPathSet {
  std::vector<MetaPath> paths;
  std::vector<SimilarityMatrix> distances;
};

MetaPathSet build_metapath_set(const HeteroGraph& g, int max_len, double cap = 0.0);

}  // namespace graft
