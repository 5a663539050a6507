#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>

#include "graft/dcm.hpp"
#include "graft/error.hpp"
#include "graft/numerics.hpp"
#include "support.hpp"

using namespace graft;
using graft::testing::node_name;
using graft::testing::random_graph;
using graft::testing::random_matrix;

namespace {

AdjacencyView binary_view(const Eigen::MatrixXd& m) {
  AdjacencyView v;
  for (Eigen::Index i = 0; i < m.rows(); ++i) v.ids.emplace_back(node_name("v", static_cast<int>(i)));
  v.matrix = m;
  v.binary = true;
  return v;
}

Eigen::MatrixXd random_binary(Eigen::Index n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (coin(rng)) a(i, j) = a(j, i) = 1.0;
  return a;
}

DcmProblem make_problem(const Eigen::MatrixXd& at, const Eigen::MatrixXd& as, double c3, double mu,
                        double lambda, int d2) {
  DcmProblem p;
  p.a_tilde_t = binary_view(at);
  p.a_tilde_s = binary_view(as);
  p.c3 = c3;
  p.mu = mu;
  p.lambda = lambda;
  p.d2 = d2;
  return p;
}

// Disjoint cliques of `size` vertices each.
HeteroGraph cliques(int count, int size) {
  GraphBuilder b;
  const int n = count * size;
  for (int i = 0; i < n; ++i) b.add_entity(EntityId(node_name("c", i)), EntityType("t"));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (i / size == j / size) b.add_edge(EntityId(node_name("c", i)), EntityId(node_name("c", j)), 1.0);
  return b.build();
}

using EdgeSet = std::set<std::pair<std::string, std::string>>;

EdgeSet edge_set(const HeteroGraph& g) {
  EdgeSet out;
  for (const Edge& e : g.edges()) out.emplace(g.entity(e.u).id.str(), g.entity(e.v).id.str());
  return out;
}

}  // namespace

TEST_CASE("dcm_objective") {
  SUBCASE("global minimum at zero") {
    auto p = make_problem(Eigen::MatrixXd::Zero(4, 4), Eigen::MatrixXd::Zero(4, 4), 0.0, 0.5, 0.1, 2);
    CHECK(dcm_objective(Embedding::Zero(4, 2), p) == 0.0);
  }
  SUBCASE("mu = 1, lambda = 0 against a naive loop") {
    Eigen::MatrixXd at = random_binary(15, 0.3, 1);
    auto p = make_problem(at, random_binary(15, 0.3, 2), 0.4, 1.0, 0.0, 3);
    Embedding u = random_matrix(15, 3, 3);
    double naive = 0.0;
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 3; ++k) dot += u(i, k) * u(j, k);
        naive += (dot - at(i, j)) * (dot - at(i, j));
      }
    CHECK(dcm_objective(u, p) == doctest::Approx(naive).epsilon(1e-12));
  }
  SUBCASE("mu = 0 with u u^T reproducing A_S") {
    auto p = make_problem(random_binary(4, 0.5, 1), Eigen::MatrixXd::Zero(4, 4), 0.3, 0.0, 0.2, 2);
    CHECK(dcm_objective(Embedding::Zero(4, 2), p) == doctest::Approx(0.09));
    Embedding v = random_matrix(4, 2, 4);
    p.lambda = 0.0;
    const double g = (v * v.transpose()).squaredNorm() / 12.0;
    CHECK(dcm_objective(v, p) == doctest::Approx((g - 0.3) * (g - 0.3)).epsilon(1e-12));
  }
  SUBCASE("orthogonal invariance") {
    auto p = make_problem(random_binary(20, 0.2, 5), random_binary(20, 0.2, 6), 0.15, 0.4, 0.1, 4);
    Embedding u = random_matrix(20, 4, 7);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(4, 4, 8));
    Eigen::MatrixXd q = qr.householderQ();
    CHECK(dcm_objective(u * q, p) == doctest::Approx(dcm_objective(u, p)).epsilon(1e-12));
  }
  SUBCASE("validation") {
    auto p = make_problem(random_binary(5, 0.5, 1), random_binary(5, 0.5, 2), 0.1, 0.5, 0.1, 2);
    p.mu = 1.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p.mu = 0.5;
    p.c3 = -0.1;
    CHECK_THROWS_AS(p.validate(), Error);
    p.c3 = 0.1;
    p.a_tilde_s = binary_view(random_binary(6, 0.5, 2));
    CHECK_THROWS_AS(p.validate(), Error);
  }
}

TEST_CASE("dcm_gradient") {
  SUBCASE("zero at u = 0") {
    auto p = make_problem(random_binary(8, 0.4, 1), random_binary(8, 0.4, 2), 0.2, 0.5, 0.1, 3);
    CHECK(dcm_gradient(Embedding::Zero(8, 3), p).isZero(0.0));
  }
  SUBCASE("matches central differences on 50 instances") {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      auto p = make_problem(random_binary(10, 0.35, seed + 100), random_binary(10, 0.35, seed + 200),
                            unit(rng), unit(rng), unit(rng), 3);
      Embedding u = random_matrix(10, 3, seed + 300);
      auto f = [&](const Eigen::MatrixXd& x) { return dcm_objective(x, p); };
      const Eigen::MatrixXd fd = numerics::finite_diff_grad(f, u, 1e-5);
      worst = std::max(worst, numerics::max_relative_error(dcm_gradient(u, p), fd));
    }
    CHECK(worst <= 1e-5);
  }
  SUBCASE("stationary at a truncated eigen-factorization") {
    // A binary view with zero diagonal is never u u^T exactly; U sqrt(L) over
    // positive eigenpairs is a stationary point of the mu = 1 objective instead.
    Eigen::MatrixXd at = random_binary(12, 0.4, 9);
    auto p = make_problem(at, random_binary(12, 0.3, 1), 0.2, 1.0, 0.0, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(at);
    REQUIRE(es.eigenvalues()(9) > 0.0);
    Embedding star = es.eigenvectors().rightCols(3) * es.eigenvalues().tail(3).cwiseSqrt().asDiagonal();
    CHECK(dcm_gradient(star, p).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(dcm_gradient(random_matrix(12, 3, 2), p).cwiseAbs().maxCoeff() > 1e-3);
  }
  SUBCASE("mu boundaries drop the other term") {
    Embedding u = random_matrix(9, 2, 3);
    Eigen::MatrixXd at = random_binary(9, 0.4, 4);
    Eigen::MatrixXd as1 = random_binary(9, 0.4, 5);
    Eigen::MatrixXd as2 = random_binary(9, 0.4, 6);
    CHECK(dcm_gradient(u, make_problem(at, as1, 0.3, 1.0, 0.1, 2)) ==
          dcm_gradient(u, make_problem(at, as2, 0.3, 1.0, 0.1, 2)));
    CHECK(dcm_gradient(u, make_problem(as1, at, 0.3, 0.0, 0.1, 2)) ==
          dcm_gradient(u, make_problem(as2, at, 0.3, 0.0, 0.1, 2)));
  }
  SUBCASE("serial and parallel evaluators agree") {
    auto p = make_problem(random_binary(40, 0.2, 1), random_binary(40, 0.2, 2), 0.2, 0.6, 0.1, 5);
    Embedding u = random_matrix(40, 5, 3);
    DcmEvaluator par(p), ser(p, true);
    CHECK(par.objective(u) == doctest::Approx(ser.objective(u)).epsilon(1e-12));
    CHECK(numerics::max_relative_error(par.gradient(u), ser.gradient(u)) < 1e-12);
  }
}

TEST_CASE("solve_dcm") {
  SUBCASE("self-transfer on cliques recovers the planted edges") {
    auto g = cliques(5, 4);
    AdjacencyView a = adjacency(g);
    DcmProblem p;
    p.a_tilde_t = a;
    p.a_tilde_s = a;
    p.c3 = 0.0;
    p.mu = 0.5;
    p.lambda = 0.1;
    p.d2 = 20;
    DcmSolution sol = solve_dcm(p, 1);
    CHECK(sol.objective_trace.back() <= sol.objective_trace.front());

    GraphBuilder bare;
    for (const Entity& e : g.entities()) bare.add_entity(e.id, e.type);
    auto rebuilt = finalize_edges(sol, bare.build(), 1.96);
    CHECK(edge_set(rebuilt) == edge_set(g));
  }
  SUBCASE("mu = 1 is within 5% of the eigen-truncation bound") {
    Eigen::MatrixXd at = random_binary(30, 0.2, 3);
    auto p = make_problem(at, random_binary(30, 0.2, 4), 0.1, 1.0, 0.0, 5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(at);
    Eigen::VectorXd ev = es.eigenvalues();  // ascending
    double bound = 0.0;
    for (Eigen::Index i = 0; i < 30; ++i) {
      const bool kept = i >= 25 && ev(i) > 0.0;
      if (!kept) bound += ev(i) * ev(i);
    }
    DcmSolution sol = solve_dcm(p, 2);
    CHECK(sol.objective_trace.back() >= bound * (1.0 - 1e-9));
    CHECK(sol.objective_trace.back() <= 1.05 * bound);
  }
  SUBCASE("trace is monotone and deterministic") {
    auto p = make_problem(random_binary(40, 0.15, 7), random_binary(40, 0.15, 8), 0.2, 0.5, 0.1, 6);
    DcmSolution a = solve_dcm(p, 5);
    DcmSolution b = solve_dcm(p, 5);
    for (std::size_t k = 1; k < a.objective_trace.size(); ++k) CHECK(a.objective_trace[k] <= a.objective_trace[k - 1]);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.u_t == b.u_t);
    CHECK(a.u_t.cols() == 6);
    CHECK(static_cast<int>(a.objective_trace.size()) == a.iterations + 1);
  }
  SUBCASE("divergence limit reports the step size") {
    auto p = make_problem(random_binary(10, 0.5, 1), random_binary(10, 0.5, 2), 0.2, 0.5, 0.1, 3);
    DcmOptions opts;
    opts.divergence_limit = 1e-6;
    CHECK_THROWS_WITH_AS(solve_dcm(p, 1, opts), doctest::Contains("step size"), Error);
  }
}

TEST_CASE("finalize_edges") {
  auto g = random_graph(25, 0.15, 2, 4);
  DcmSolution sol;
  sol.u_t = random_matrix(25, 3, 5);

  SUBCASE("infinite threshold keeps the original edges") {
    CHECK(finalize_edges(sol, g, std::numeric_limits<double>::infinity()) == g);
  }
  SUBCASE("matches a direct z-score oracle") {
    const Eigen::MatrixXd x = sol.u_t * sol.u_t.transpose();
    const double z = 1.5;
    EdgeSet want = edge_set(g);
    for (Eigen::Index i = 0; i < 25; ++i) {
      for (Eigen::Index j = 0; j < 25; ++j) {
        if (i == j) continue;
        auto zscore = [&](Eigen::Index r, Eigen::Index c) {
          const double mean = x.row(r).mean();
          const double sd = std::sqrt((x.row(r).array() - mean).square().mean());
          return (x(r, c) - mean) / sd;
        };
        if (std::max(zscore(i, j), zscore(j, i)) >= z) {
          auto a = g.entity(static_cast<std::size_t>(i)).id.str();
          auto b = g.entity(static_cast<std::size_t>(j)).id.str();
          want.emplace(std::min(a, b), std::max(a, b));
        }
      }
    }
    auto out = finalize_edges(sol, g, z);
    CHECK(edge_set(out) == want);
    for (const Edge& e : out.edges()) CHECK(e.weight > 0.0);
    for (const Edge& e : g.edges()) CHECK(out.edge_weight(e.u, e.v) == e.weight);
  }
  SUBCASE("row count mismatch") {
    DcmSolution bad;
    bad.u_t = Embedding::Zero(3, 2);
    CHECK_THROWS_AS(finalize_edges(bad, g, 1.96), Error);
  }
}
