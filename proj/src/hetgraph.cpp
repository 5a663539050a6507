#include "graft/hetgraph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "graft/error.hpp"

namespace graft {

namespace detail {

void validate_token(const std::string& value, const char* what) {
  if (value.empty()) throw Error(std::string("empty ") + what);
  for (unsigned char c : value) {
    if (std::isspace(c)) {
      throw Error(std::string(what) + " contains whitespace: '" + value + "'");
    }
  }
}

}  // namespace detail

HeteroGraph::HeteroGraph(std::vector<Entity> entities, std::vector<Edge> edges)
    : entities_(std::move(entities)), edges_(std::move(edges)) {
  const std::size_t n = entities_.size();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_.emplace(entities_[i].id.str(), i);

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_[n]);
  adjacency_edge_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in edge order leaves each row
  // sorted only for the `v` side; sort rows afterwards.
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    adjacency_[cursor[e.u]] = e.v;
    adjacency_edge_[cursor[e.u]++] = k;
    adjacency_[cursor[e.v]] = e.u;
    adjacency_edge_[cursor[e.v]++] = k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = offsets_[i];
    const auto len = offsets_[i + 1] - b;
    std::vector<std::pair<std::size_t, std::size_t>> row(len);
    for (std::size_t k = 0; k < len; ++k) row[k] = {adjacency_[b + k], adjacency_edge_[b + k]};
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < len; ++k) {
      adjacency_[b + k] = row[k].first;
      adjacency_edge_[b + k] = row[k].second;
    }
  }
}

std::optional<std::size_t> HeteroGraph::index_of(const EntityId& id) const {
  auto it = index_.find(id.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> HeteroGraph::neighbors(std::size_t i) const {
  if (i >= entities_.size()) throw Error("entity index out of range");
  return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::optional<double> HeteroGraph::edge_weight(std::size_t u, std::size_t v) const {
  const auto row = neighbors(u);
  auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) return std::nullopt;
  const auto pos = offsets_[u] + static_cast<std::size_t>(it - row.begin());
  return edges_[adjacency_edge_[pos]].weight;
}

std::vector<EntityType> HeteroGraph::types() const {
  std::set<EntityType> seen;
  for (const Entity& e : entities_) seen.insert(e.type);
  return {seen.begin(), seen.end()};
}

EntityIdSet HeteroGraph::id_set() const {
  EntityIdSet out;
  for (const Entity& e : entities_) out.insert(out.end(), e.id);
  return out;
}

GraphBuilder& GraphBuilder::add_entity(const EntityId& id, const EntityType& type) {
  auto [it, inserted] = entities_.try_emplace(id.str(), type);
  if (!inserted && it->second != type) {
    throw TypeConflictError("entity '" + id.str() + "' has conflicting types '" +
                            it->second.str() + "' and '" + type.str() + "'");
  }
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(const EntityId& a, const EntityId& b, double weight) {
  edges_.push_back({a, b, weight});
  return *this;
}

bool GraphBuilder::has_entity(const EntityId& id) const {
  return entities_.contains(id.str());
}

HeteroGraph GraphBuilder::build() const {
  std::vector<Entity> entities;
  entities.reserve(entities_.size());
  for (const auto& [id, type] : entities_) entities.push_back({EntityId(id), type});
  std::sort(entities.begin(), entities.end(),
            [](const Entity& x, const Entity& y) { return x.id < y.id; });

  std::unordered_map<std::string, std::size_t> index;
  index.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) index.emplace(entities[i].id.str(), i);

  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const PendingEdge& p : edges_) {
    if (p.a == p.b) throw Error("self-loop on '" + p.a.str() + "'");
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
      throw Error("edge weight must be positive and finite");
    }
    auto ia = index.find(p.a.str());
    auto ib = index.find(p.b.str());
    if (ia == index.end()) throw Error("dangling endpoint '" + p.a.str() + "'");
    if (ib == index.end()) throw Error("dangling endpoint '" + p.b.str() + "'");
    auto [u, v] = std::minmax(ia->second, ib->second);
    edges.push_back({u, v, p.weight});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v) {
      throw Error("duplicate edge '" + entities[edges[k].u].id.str() + "' - '" +
                  entities[edges[k].v].id.str() + "'");
    }
  }
  return HeteroGraph(std::move(entities), std::move(edges));
}

AdjacencyView adjacency(const HeteroGraph& g, bool binary) {
  AdjacencyView view;
  view.binary = binary;
  view.ids.reserve(g.entity_count());
  for (const Entity& e : g.entities()) view.ids.push_back(e.id);
  const auto n = static_cast<Eigen::Index>(g.entity_count());
  view.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const double w = binary ? 1.0 : e.weight;
    view.matrix(e.u, e.v) = w;
    view.matrix(e.v, e.u) = w;
  }
  return view;
}

HeteroGraph induced_subgraph(const HeteroGraph& g, const EntityIdSet& keep) {
  std::vector<char> kept(g.entity_count(), 0);
  GraphBuilder builder;
  for (const EntityId& id : keep) {
    auto idx = g.index_of(id);
    if (!idx) throw Error("unknown entity id '" + id.str() + "'");
    kept[*idx] = 1;
    builder.add_entity(id, g.entity(*idx).type);
  }
  for (const Edge& e : g.edges()) {
    if (kept[e.u] && kept[e.v]) {
      builder.add_edge(g.entity(e.u).id, g.entity(e.v).id, e.weight);
    }
  }
  return builder.build();
}

namespace {

AdjacencyView embed_view(const HeteroGraph& g, const std::vector<EntityId>& ids,
                         const std::vector<std::size_t>& position, bool binary) {
  AdjacencyView view;
  view.ids = ids;
  view.binary = binary;
  const auto n = static_cast<Eigen::Index>(ids.size());
  view.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const double w = binary ? 1.0 : e.weight;
    const auto i = static_cast<Eigen::Index>(position[e.u]);
    const auto j = static_cast<Eigen::Index>(position[e.v]);
    view.matrix(i, j) = w;
    view.matrix(j, i) = w;
  }
  return view;
}

}  // namespace

std::pair<AdjacencyView, AdjacencyView> align_union_entities(const HeteroGraph& a,
                                                             const HeteroGraph& b,
                                                             bool binary) {
  std::map<EntityId, EntityType> merged;
  for (const Entity& e : a.entities()) merged.emplace(e.id, e.type);
  for (const Entity& e : b.entities()) {
    auto [it, inserted] = merged.emplace(e.id, e.type);
    if (!inserted && it->second != e.type) {
      throw TypeConflictError("entity '" + e.id.str() + "' has conflicting types '" +
                              it->second.str() + "' and '" + e.type.str() + "'");
    }
  }
  std::vector<EntityId> ids;
  ids.reserve(merged.size());
  for (const auto& [id, type] : merged) ids.push_back(id);

  auto positions = [&](const HeteroGraph& g) {
    std::vector<std::size_t> pos(g.entity_count());
    for (std::size_t i = 0; i < g.entity_count(); ++i) {
      auto it = std::lower_bound(ids.begin(), ids.end(), g.entity(i).id);
      pos[i] = static_cast<std::size_t>(it - ids.begin());
    }
    return pos;
  };
  return {embed_view(a, ids, positions(a), binary), embed_view(b, ids, positions(b), binary)};
}

double dynamic_factor(const AdjacencyView& a, const AdjacencyView& b) {
  if (a.ids != b.ids) throw Error("dynamic_factor: views are over different index spaces");
  const auto n = static_cast<double>(a.size());
  if (a.size() < 2) throw Error("dynamic_factor: need at least two entities");
  return (a.matrix - b.matrix).squaredNorm() / (n * (n - 1.0));
}

HeteroGraph graph_union(const HeteroGraph& a, const HeteroGraph& b) {
  GraphBuilder builder;
  for (const Entity& e : a.entities()) builder.add_entity(e.id, e.type);
  for (const Entity& e : b.entities()) builder.add_entity(e.id, e.type);

  std::map<std::pair<EntityId, EntityId>, double> weights;
  auto collect = [&](const HeteroGraph& g) {
    for (const Edge& e : g.edges()) {
      auto key = std::make_pair(g.entity(e.u).id, g.entity(e.v).id);
      auto [it, inserted] = weights.emplace(key, e.weight);
      if (!inserted) it->second = std::max(it->second, e.weight);
    }
  };
  collect(a);
  collect(b);
  for (const auto& [key, w] : weights) builder.add_edge(key.first, key.second, w);
  return builder.build();
}

}  // namespace graft
