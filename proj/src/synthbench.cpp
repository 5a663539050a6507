#include "graft/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graft/error.hpp"

namespace graft {

namespace {

std::string padded(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

// Indices 0..n-1, k of them chosen uniformly without replacement, ascending.
std::vector<std::size_t> choose(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::size_t rounded(double x) { return static_cast<std::size_t>(std::llround(x)); }

}  // namespace

double SynthSpec::resolved_edge_prob() const {
  if (edge_prob) return *edge_prob;
  return n_source > 1 ? std::min(1.0, 8.0 / (n_source - 1.0)) : 0.0;
}

void SynthSpec::validate() const {
  if (n_source < 2) throw Error("synth: n_source must be at least 2");
  if (n_target < 2 || n_target > n_source) throw Error("synth: n_target must lie in [2, n_source]");
  if (!(dynamic_factor >= 0.0 && dynamic_factor < 1.0)) throw Error("synth: dynamic factor must lie in [0, 1)");
  if (!(maturity > 0.0 && maturity <= 1.0)) throw Error("synth: maturity must lie in (0, 1]");
  if (n_types < 1) throw Error("synth: n_types must be positive");
  const double p = resolved_edge_prob();
  if (!(p >= 0.0 && p <= 1.0)) throw Error("synth: edge probability must lie in [0, 1]");
}

SynthInstance generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const auto ns = static_cast<std::size_t>(spec.n_source);
  const auto nt = static_cast<std::size_t>(spec.n_target);
  const std::size_t width = std::max<std::size_t>(4, std::to_string(ns - 1).size());

  std::vector<EntityId> ids;
  std::vector<EntityType> types;
  std::uniform_int_distribution<int> type_of(0, spec.n_types - 1);
  for (std::size_t i = 0; i < ns; ++i) {
    ids.emplace_back("e" + padded(i, width));
    types.emplace_back("t" + std::to_string(type_of(rng)));
  }

  // Source: independent pairs.
  std::bernoulli_distribution coin(spec.resolved_edge_prob());
  std::vector<char> src(ns * ns, 0);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = i + 1; j < ns; ++j) src[i * ns + j] = coin(rng) ? 1 : 0;

  GraphBuilder gs_builder;
  for (std::size_t i = 0; i < ns; ++i) gs_builder.add_entity(ids[i], types[i]);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = i + 1; j < ns; ++j)
      if (src[i * ns + j]) gs_builder.add_edge(ids[i], ids[j], 1.0);

  // Truth: keep n_target entities, then toggle k pairs so that the
  // pair-normalized dynamic factor equals 2k / (n (n - 1)).
  const std::vector<std::size_t> keep = choose(ns, nt, rng);
  const std::size_t pairs = nt * (nt - 1) / 2;
  const std::size_t flips = rounded(spec.dynamic_factor * static_cast<double>(pairs));
  if (flips > pairs) throw Error("synth: requested dynamic factor needs more flips than pairs");
  std::vector<char> truth(nt * nt, 0);
  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = a + 1; b < nt; ++b) truth[a * nt + b] = src[keep[a] * ns + keep[b]];
  std::vector<std::pair<std::size_t, std::size_t>> pair_of;
  pair_of.reserve(pairs);
  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = a + 1; b < nt; ++b) pair_of.emplace_back(a, b);
  for (std::size_t p : choose(pairs, flips, rng)) {
    auto [a, b] = pair_of[p];
    truth[a * nt + b] ^= 1;
  }

  GraphBuilder truth_builder;
  std::vector<std::pair<std::size_t, std::size_t>> truth_edges;
  for (std::size_t a = 0; a < nt; ++a) truth_builder.add_entity(ids[keep[a]], types[keep[a]]);
  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = a + 1; b < nt; ++b)
      if (truth[a * nt + b]) {
        truth_builder.add_edge(ids[keep[a]], ids[keep[b]], 1.0);
        truth_edges.emplace_back(a, b);
      }

  // Partial observation: M of the entities, then M of the surviving edges.
  const std::size_t nh = std::max<std::size_t>(1, rounded(spec.maturity * static_cast<double>(nt)));
  const std::vector<std::size_t> observed = choose(nt, nh, rng);
  std::vector<char> seen(nt, 0);
  for (std::size_t a : observed) seen[a] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> surviving;
  for (const auto& e : truth_edges)
    if (seen[e.first] && seen[e.second]) surviving.push_back(e);
  const std::size_t kept_edges = rounded(spec.maturity * static_cast<double>(surviving.size()));

  GraphBuilder hat_builder;
  for (std::size_t a : observed) hat_builder.add_entity(ids[keep[a]], types[keep[a]]);
  for (std::size_t e : choose(surviving.size(), kept_edges, rng)) {
    auto [a, b] = surviving[e];
    hat_builder.add_edge(ids[keep[a]], ids[keep[b]], 1.0);
  }

  SynthInstance inst{gs_builder.build(), truth_builder.build(), hat_builder.build(), flips, 0.0, 0.0};
  EntityIdSet truth_ids = inst.gt_truth.id_set();
  auto [before, after] = align_union_entities(induced_subgraph(inst.gs, truth_ids), inst.gt_truth);
  inst.measured_dynamic_factor = dynamic_factor(before, after);
  inst.measured_maturity =
      static_cast<double>(inst.gt_hat.entity_count()) / static_cast<double>(inst.gt_truth.entity_count());
  return inst;
}

nlohmann::json synth_meta(const SynthSpec& spec, const SynthInstance& inst) {
  return {
      {"spec",
       {{"n_source", spec.n_source},
        {"n_target", spec.n_target},
        {"dynamic_factor", spec.dynamic_factor},
        {"maturity", spec.maturity},
        {"n_types", spec.n_types},
        {"edge_prob", spec.resolved_edge_prob()},
        {"seed", spec.seed}}},
      {"measured",
       {{"dynamic_factor", inst.measured_dynamic_factor},
        {"maturity", inst.measured_maturity},
        {"flips", inst.flips}}},
      {"counts",
       {{"source", {{"entities", inst.gs.entity_count()}, {"edges", inst.gs.edge_count()}}},
        {"target_truth", {{"entities", inst.gt_truth.entity_count()}, {"edges", inst.gt_truth.edge_count()}}},
        {"target_partial", {{"entities", inst.gt_hat.entity_count()}, {"edges", inst.gt_hat.edge_count()}}}}},
  };
}

}  // namespace graft
