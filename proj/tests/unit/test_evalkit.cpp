#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "graft/error.hpp"
#include "graft/evalkit.hpp"
#include "graft/graph_io.hpp"
#include "support.hpp"

using namespace graft;
using graft::testing::make_graph;
using graft::testing::random_graph;

namespace {

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet edge_set(const HeteroGraph& g) {
  PairSet out;
  for (const Edge& e : g.edges()) out.emplace(g.entity(e.u).id.str(), g.entity(e.v).id.str());
  return out;
}

std::set<std::string> entity_set(const HeteroGraph& g) {
  std::set<std::string> out;
  for (const Entity& e : g.entities()) out.insert(e.id.str());
  return out;
}

template <typename Set>
std::size_t common(const Set& a, const Set& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

double f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

TEST_CASE("score examples") {
  auto g = random_graph(30, 0.2, 3, 2);
  EvalResult same = score(g, g);
  CHECK(same.entity_f1 == 1.0);
  CHECK(same.edge_f1 == 1.0);
  CHECK(same.combined_f1 == 1.0);
  CHECK(same.undefined.empty());

  auto est = make_graph({{"a", "t"}, {"b", "t"}, {"c", "t"}, {"d", "t"}});
  auto truth = make_graph({{"a", "t"}, {"b", "t"}});
  EvalResult r = score(est, truth);
  CHECK(r.entity_precision == 0.5);
  CHECK(r.entity_recall == 1.0);
  CHECK(r.entity_f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.edge_f1 == 0.0);
  CHECK(r.undefined.size() == 2);

  EvalResult empty = score(make_graph({}), make_graph({}));
  CHECK(empty.combined_f1 == 0.0);
}

TEST_CASE("score matches a set-intersection oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto a = random_graph(40, 0.15, 2, seed, "n", true);
    auto b = random_graph(50, 0.12, 2, seed + 50);
    EntityIdSet keep;
    for (std::size_t i = 0; i < a.entity_count(); i += 2) keep.insert(a.entity(i).id);
    auto est = induced_subgraph(a, keep);
    EvalResult r = score(est, b);

    auto ea = entity_set(est), eb = entity_set(b);
    auto pa = edge_set(est), pb = edge_set(b);
    const double ep = static_cast<double>(common(ea, eb)) / static_cast<double>(ea.size());
    const double er = static_cast<double>(common(ea, eb)) / static_cast<double>(eb.size());
    const double gp = static_cast<double>(common(pa, pb)) / static_cast<double>(pa.size());
    const double gr = static_cast<double>(common(pa, pb)) / static_cast<double>(pb.size());
    CHECK(r.entity_precision == doctest::Approx(ep));
    CHECK(r.entity_recall == doctest::Approx(er));
    CHECK(r.edge_precision == doctest::Approx(gp));
    CHECK(r.edge_recall == doctest::Approx(gr));
    CHECK(r.entity_f1 == doctest::Approx(f1(ep, er)));
    CHECK(r.edge_f1 == doctest::Approx(f1(gp, gr)));
    CHECK(r.combined_f1 == doctest::Approx(0.5 * (r.entity_f1 + r.edge_f1)));
    CHECK(r.combined_f1 >= std::min(r.entity_f1, r.edge_f1));
    CHECK(r.combined_f1 <= std::max(r.entity_f1, r.edge_f1));
  }
}

TEST_CASE("eval_json") {
  auto g = random_graph(10, 0.3, 1, 1);
  auto j = eval_json(score(g, g));
  CHECK(j["combined_f1"] == 1.0);
  CHECK(j["undefined"].is_array());
}

TEST_CASE("baseline_nt and baseline_dt") {
  auto g = random_graph(30, 0.2, 2, 3);
  CHECK(to_text(baseline_nt(g)) == to_text(g));
  CHECK(baseline_nt(make_graph({})).empty());

  CHECK(baseline_dt(g, g) == g);
  auto x = random_graph(10, 0.3, 2, 4, "x");
  auto y = random_graph(12, 0.3, 2, 5, "y");
  auto u = baseline_dt(x, y);
  CHECK(u.entity_count() == 22);
  CHECK(u.edge_count() == x.edge_count() + y.edge_count());

  auto a = random_graph(30, 0.2, 1, 6, "n", true);
  auto b = random_graph(40, 0.2, 1, 7, "n", true);
  auto d = baseline_dt(a, b);
  auto ua = entity_set(a), ub = entity_set(b);
  ua.insert(ub.begin(), ub.end());
  CHECK(entity_set(d) == ua);
  auto pa = edge_set(a), pb = edge_set(b);
  pa.insert(pb.begin(), pb.end());
  CHECK(edge_set(d) == pa);
  for (const Edge& e : d.edges()) {
    double want = 0.0;
    for (const HeteroGraph* g2 : {&a, &b}) {
      auto i = g2->index_of(d.entity(e.u).id), j = g2->index_of(d.entity(e.v).id);
      if (i && j) want = std::max(want, g2->edge_weight(*i, *j).value_or(0.0));
    }
    CHECK(e.weight == want);
  }
  CHECK(score(d, b).entity_recall == 1.0);
}

TEST_CASE("random-walk selection") {
  auto gs = random_graph(50, 0.08, 2, 9);
  EntityIdSet keep;
  for (std::size_t i = 0; i < 15; ++i) keep.insert(gs.entity(i).id);
  auto gt_hat = induced_subgraph(gs, keep);
  TransferConfig config;

  SUBCASE("full restart mass selects nothing") {
    config.rwr_restart = 1.0;
    CHECK(random_walk_selection(gs, gt_hat, config).empty());
  }
  SUBCASE("matches a dense power-iteration oracle") {
    config.z_entity = 1.0;
    const Eigen::Index n = 50;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < 15; ++i) e(i) = 1.0 / 15.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto nb = gs.neighbors(static_cast<std::size_t>(j));
      if (nb.empty()) p.col(j) = e;
      for (std::size_t i : nb) p(static_cast<Eigen::Index>(i), j) = 1.0 / static_cast<double>(nb.size());
    }
    Eigen::VectorXd r = e;
    for (int it = 0; it < 2000; ++it) r = 0.85 * p * r + 0.15 * e;
    CHECK(r.sum() == doctest::Approx(1.0).epsilon(1e-9));

    const Eigen::VectorXd cand = r.tail(35);
    const double mean = cand.mean();
    const double sd = std::sqrt((cand.array() - mean).square().mean());
    std::set<std::string> want;
    for (Eigen::Index c = 0; c < 35; ++c)
      if ((cand(c) - mean) / sd >= 1.0) want.insert(gs.entity(static_cast<std::size_t>(15 + c)).id.str());

    std::set<std::string> got;
    for (const SelectedEntity& s : random_walk_selection(gs, gt_hat, config)) got.insert(s.id.str());
    CHECK(got == want);
    CHECK_FALSE(got.empty());
  }
  SUBCASE("disjoint domains") {
    CHECK_THROWS_AS(random_walk_selection(gs, make_graph({{"q", "t0"}}), config), Error);
  }
  SUBCASE("rw-dcm keeps the observed target") {
    auto result = baseline_rw_dcm(gs, gt_hat, config);
    CHECK(result.report.method == "rw-dcm");
    for (const Entity& e : gt_hat.entities()) CHECK(result.g_t.contains(e.id));
    auto out = edge_set(result.g_t);
    for (const auto& e : edge_set(gt_hat)) CHECK(out.contains(e));
  }
}
