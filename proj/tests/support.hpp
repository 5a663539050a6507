#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graft/hetgraph.hpp"

namespace graft::testing {

using EntityList = std::vector<std::pair<std::string, std::string>>;
using EdgeList = std::vector<std::tuple<std::string, std::string, double>>;

inline HeteroGraph make_graph(const EntityList& entities, const EdgeList& edges = {}) {
  GraphBuilder b;
  for (const auto& [id, type] : entities) b.add_entity(EntityId(id), EntityType(type));
  for (const auto& [x, y, w] : edges) b.add_edge(EntityId(x), EntityId(y), w);
  return b.build();
}

inline std::string node_name(const std::string& prefix, int i) {
  std::string s = std::to_string(i);
  return prefix + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

/// Independent-pairs random graph with uniform labels t0..t{types-1}.
inline HeteroGraph random_graph(int n, double p, int types, std::uint64_t seed,
                                const std::string& prefix = "n", bool random_weights = false) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> type_of(0, types - 1);
  std::bernoulli_distribution coin(p);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_entity(EntityId(node_name(prefix, i)), EntityType("t" + std::to_string(type_of(rng))));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) b.add_edge(EntityId(node_name(prefix, i)), EntityId(node_name(prefix, j)), random_weights ? weight(rng) : 1.0);
  return b.build();
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = d(rng);
  return m;
}

/// Pairwise squared Euclidean distances of the rows of x.
inline Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).squaredNorm();
  return d;
}

}  // namespace graft::testing
