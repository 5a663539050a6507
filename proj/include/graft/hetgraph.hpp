#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace graft {

namespace detail {
void validate_token(const std::string& value, const char* what);
}

/// Non-empty whitespace-free string token with exact byte-wise ordering.
template <typename Tag>
class Token {
 public:
  Token() = default;
  explicit Token(std::string value) : value_(std::move(value)) {
    detail::validate_token(value_, Tag::name);
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Token&, const Token&) = default;
  friend std::strong_ordering operator<=>(const Token& a, const Token& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

struct EntityIdTag {
  static constexpr const char* name = "entity id";
};
struct EntityTypeTag {
  static constexpr const char* name = "entity type";
};

using EntityId = Token<EntityIdTag>;
using EntityType = Token<EntityTypeTag>;
using EntityIdSet = std::set<EntityId>;

struct Entity {
  EntityId id;
  EntityType type;
  friend bool operator==(const Entity&, const Entity&) = default;
};

/// Undirected edge between dense indices, always stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable typed, undirected, weighted dependency graph.
///
/// Entities are kept in lexicographic EntityId order, so index i always refers
/// to the i-th smallest id. Edges are sorted by (u, v). Construct through
/// GraphBuilder.
class HeteroGraph {
 public:
  HeteroGraph() = default;

  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return entities_.empty(); }

  std::span<const Entity> entities() const noexcept { return entities_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Entity& entity(std::size_t i) const { return entities_.at(i); }

  std::optional<std::size_t> index_of(const EntityId& id) const;
  bool contains(const EntityId& id) const { return index_of(id).has_value(); }

  /// Sorted neighbour indices of entity i.
  std::span<const std::size_t> neighbors(std::size_t i) const;
  /// Weight of edge {u, v}, if present.
  std::optional<double> edge_weight(std::size_t u, std::size_t v) const;

  /// Sorted list of the distinct entity types.
  std::vector<EntityType> types() const;
  EntityIdSet id_set() const;

  friend bool operator==(const HeteroGraph& a, const HeteroGraph& b) {
    return a.entities_ == b.entities_ && a.edges_ == b.edges_;
  }

 private:
  friend class GraphBuilder;
  HeteroGraph(std::vector<Entity> entities, std::vector<Edge> edges);

  std::vector<Entity> entities_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
  std::vector<std::size_t> adjacency_edge_;
};

/// Collects entities and edges, validates them and produces a canonical graph.
class GraphBuilder {
 public:
  /// Adds an entity. Re-adding the same (id, type) is a no-op; a different type
  /// for a known id throws TypeConflictError.
  GraphBuilder& add_entity(const EntityId& id, const EntityType& type);
  /// Adds an undirected edge between two ids. Endpoints may be declared later;
  /// validation (self-loop, dangling, duplicate, weight > 0) happens in build().
  GraphBuilder& add_edge(const EntityId& a, const EntityId& b, double weight = 1.0);

  bool has_entity(const EntityId& id) const;
  std::size_t entity_count() const noexcept { return entities_.size(); }

  HeteroGraph build() const;

 private:
  std::unordered_map<std::string, EntityType> entities_;
  struct PendingEdge {
    EntityId a;
    EntityId b;
    double weight;
  };
  std::vector<PendingEdge> edges_;
};

/// Dense symmetric adjacency matrix over an explicit, ordered index space.
struct AdjacencyView {
  std::vector<EntityId> ids;
  Eigen::MatrixXd matrix;
  bool binary = false;

  std::size_t size() const noexcept { return ids.size(); }
};

/// Adjacency of `g` over its own entity order. With `binary`, weights > 0 become 1.
AdjacencyView adjacency(const HeteroGraph& g, bool binary = true);

/// Subgraph on `keep`, retaining every edge with both endpoints kept.
HeteroGraph induced_subgraph(const HeteroGraph& g, const EntityIdSet& keep);

/// Views of `a` and `b` over the sorted union of their entity ids.
/// Throws TypeConflictError when a shared id carries different types.
std::pair<AdjacencyView, AdjacencyView> align_union_entities(const HeteroGraph& a,
                                                             const HeteroGraph& b,
                                                             bool binary = true);

/// ||A - B||_F^2 / (n (n - 1)) over a shared index space with n >= 2.
double dynamic_factor(const AdjacencyView& a, const AdjacencyView& b);

/// Entity union of two graphs. Edges present in both keep the larger weight.
HeteroGraph graph_union(const HeteroGraph& a, const HeteroGraph& b);

}  // namespace graft
