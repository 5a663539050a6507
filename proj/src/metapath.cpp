#include "graft/metapath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "graft/error.hpp"
#include "graft/kernels.hpp"

namespace graft {

MetaPath::MetaPath(std::vector<EntityType> types) : types_(std::move(types)) {
  if (types_.size() < 2) throw Error("meta-path needs at least two types");
  std::vector<EntityType> rev(types_.rbegin(), types_.rend());
  if (rev < types_) types_ = std::move(rev);
}

MetaPath MetaPath::reversed() const {
  return MetaPath(std::vector<EntityType>(types_.rbegin(), types_.rend()));
}

bool MetaPath::palindromic() const {
  return std::equal(types_.begin(), types_.end(), types_.rbegin());
}

std::string MetaPath::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (i) out += '-';
    out += types_[i].str();
  }
  return out;
}

std::vector<MetaPath> enumerate_metapaths(const HeteroGraph& g, int max_len) {
  if (max_len < 2) throw Error("enumerate_metapaths: max_len must be >= 2");
  std::map<EntityType, std::set<EntityType>> next;
  for (const Edge& e : g.edges()) {
    const EntityType& a = g.entity(e.u).type;
    const EntityType& b = g.entity(e.v).type;
    next[a].insert(b);
    next[b].insert(a);
  }

  std::set<MetaPath> found;
  std::vector<EntityType> seq;
  auto dfs = [&](auto&& self) -> void {
    if (seq.size() >= 2) found.insert(MetaPath(seq));
    if (static_cast<int>(seq.size()) == max_len) return;
    auto it = next.find(seq.back());
    if (it == next.end()) return;
    for (const EntityType& t : it->second) {
      seq.push_back(t);
      self(self);
      seq.pop_back();
    }
  };
  for (const auto& [t, _] : next) {
    seq.assign(1, t);
    dfs(dfs);
  }
  return {found.begin(), found.end()};
}

namespace {

// Walk counts from `start` along the type sequence `types`: returns sparse
// end-vertex -> count.
std::unordered_map<std::size_t, double> walk_counts(const HeteroGraph& g, std::size_t start,
                                                    const std::vector<EntityType>& types) {
  std::unordered_map<std::size_t, double> cur{{start, 1.0}};
  for (std::size_t step = 1; step < types.size(); ++step) {
    std::unordered_map<std::size_t, double> nxt;
    for (const auto& [v, c] : cur) {
      for (std::size_t w : g.neighbors(v)) {
        if (g.entity(w).type == types[step]) nxt[w] += c;
      }
    }
    cur.swap(nxt);
  }
  return cur;
}

}  // namespace

HeteroGraph project(const HeteroGraph& g, const MetaPath& p) {
  const auto& types = p.types();
  const std::size_t n = g.entity_count();
  // Non-palindromic paths with equal end types are read in both orientations.
  const bool both_ways = types.front() == types.back() && !p.palindromic();
  std::vector<EntityType> rev(types.rbegin(), types.rend());

  std::map<std::pair<std::size_t, std::size_t>, double> counts;
  for (std::size_t s = 0; s < n; ++s) {
    if (g.entity(s).type != types.front()) continue;
    for (const auto& [t, c] : walk_counts(g, s, types)) {
      if (t == s) continue;
      counts[std::minmax(s, t)] += c;
    }
    if (both_ways) {
      for (const auto& [t, c] : walk_counts(g, s, rev)) {
        if (t == s) continue;
        counts[std::minmax(s, t)] += c;
      }
    }
  }
  // Walks between same-typed endpoints were seen from both ends.
  const double scale = types.front() == types.back() ? 0.5 : 1.0;

  GraphBuilder builder;
  for (const Entity& e : g.entities()) builder.add_entity(e.id, e.type);
  for (const auto& [key, c] : counts) {
    builder.add_edge(g.entity(key.first).id, g.entity(key.second).id, c * scale);
  }
  return builder.build();
}

SimilarityMatrix path_distance_matrix(const HeteroGraph& gp, double cap) {
  SimilarityMatrix out;
  out.values = kernels::parallel::hop_distances(gp);
  double longest = 0.0;
  for (Eigen::Index j = 0; j < out.values.cols(); ++j)
    for (Eigen::Index i = 0; i < out.values.rows(); ++i)
      if (std::isfinite(out.values(i, j))) longest = std::max(longest, out.values(i, j));
  const double fill = cap > 0.0 ? cap : longest + 1.0;
  out.values = out.values.unaryExpr([fill](double v) { return std::isfinite(v) ? v : fill; });
  return out;
}

SimilarityMatrix blend(const std::vector<SimilarityMatrix>& mats, const std::vector<double>& w) {
  if (mats.empty()) throw Error("blend: no matrices");
  if (mats.size() != w.size()) throw Error("blend: weight count does not match matrix count");
  const Eigen::Index n = mats.front().size();
  kernels::MatrixList list;
  Eigen::VectorXd wv(static_cast<Eigen::Index>(w.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].values.rows() != n || mats[k].values.cols() != n) {
      throw Error("blend: dimension mismatch");
    }
    if (!(w[k] >= 0.0)) throw Error("blend: negative weight");
    list.push_back(&mats[k].values);
    wv(static_cast<Eigen::Index>(k)) = w[k];
  }
  return {kernels::parallel::weighted_sum(list, wv), "blend"};
}

MetaPathSet build_metapath_set(const HeteroGraph& g, int max_len, double cap) {
  MetaPathSet set;
  set.paths = enumerate_metapaths(g, max_len);
  set.distances.reserve(set.paths.size());
  for (const MetaPath& p : set.paths) {
    SimilarityMatrix s = path_distance_matrix(project(g, p), cap);
    s.provenance = p.to_string();
    set.distances.push_back(std::move(s));
  }
  return set;
}

}  // namespace graft
