#include <doctest.h>

#include <cmath>
#include <limits>

#include "graft/kernels.hpp"
#include "support.hpp"

using namespace graft;
using namespace graft::kernels;
using graft::testing::random_graph;
using graft::testing::random_matrix;

namespace {

Matrix random_binary_symmetric(Eigen::Index n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (coin(rng)) a(i, j) = a(j, i) = 1.0;
  return a;
}

double rel(const Matrix& a, const Matrix& b) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("hop_distances: serial equals parallel exactly") {
  auto g = random_graph(150, 0.015, 3, 3);
  Matrix s = serial::hop_distances(g);
  Matrix p = parallel::hop_distances(g);
  CHECK(s.cwiseEqual(p).all());
  CHECK(s.cwiseEqual(s.transpose()).all());
  CHECK(std::isinf(s.maxCoeff()));
}

TEST_CASE("dense kernels: serial equals parallel") {
  const Matrix u = random_matrix(120, 7, 1);
  const Matrix c_serial = serial::squared_row_distances(u);
  CHECK(rel(parallel::squared_row_distances(u), c_serial) < 1e-12);
  CHECK(rel(c_serial, graft::testing::squared_distances(u)) < 1e-12);

  std::vector<Matrix> owned;
  for (std::uint64_t k = 0; k < 4; ++k) owned.push_back(random_matrix(120, 120, 10 + k));
  MatrixList mats;
  for (const Matrix& m : owned) mats.push_back(&m);
  const Vector w = random_matrix(4, 1, 99).cwiseAbs();

  Matrix ws = serial::weighted_sum(mats, w);
  CHECK(rel(parallel::weighted_sum(mats, w), ws) < 1e-12);
  CHECK(rel(ws, w(0) * owned[0] + w(1) * owned[1] + w(2) * owned[2] + w(3) * owned[3]) < 1e-12);

  Matrix gram = serial::upper_gram(mats);
  CHECK(rel(parallel::upper_gram(mats), gram) < 1e-12);
  double g01 = 0.0;
  for (Eigen::Index i = 0; i < 120; ++i)
    for (Eigen::Index j = i + 1; j < 120; ++j) g01 += owned[0](i, j) * owned[1](i, j);
  CHECK(gram(0, 1) == doctest::Approx(g01).epsilon(1e-12));
  CHECK(gram(1, 0) == gram(0, 1));

  Vector dot = serial::upper_dot(mats, c_serial);
  CHECK(rel(parallel::upper_dot(mats, c_serial), dot) < 1e-12);

  for (double theta : {1.0, 2.0, 3.0}) {
    const double s = serial::pair_loss(owned[0], owned[1], theta);
    CHECK(parallel::pair_loss(owned[0], owned[1], theta) == doctest::Approx(s).epsilon(1e-12));
    double naive = 0.0;
    for (Eigen::Index i = 0; i < 120; ++i)
      for (Eigen::Index j = 0; j < 120; ++j)
        if (i != j) naive += std::pow(std::abs(owned[0](i, j) - owned[1](i, j)), theta);
    CHECK(s == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("residual kernels: serial, parallel and dense oracle agree") {
  const Matrix a = random_binary_symmetric(90, 0.08, 5);
  const SymmetricOperand op = SymmetricOperand::from_dense(a);
  const Matrix u = 0.3 * random_matrix(90, 6, 6);
  const Matrix r = u * u.transpose() - a;

  const double s = serial::residual_norm_sq(u, op);
  CHECK(s == doctest::Approx(r.squaredNorm()).epsilon(1e-12));
  CHECK(parallel::residual_norm_sq(u, op) == doctest::Approx(s).epsilon(1e-12));

  const Matrix t = serial::residual_times(u, op);
  CHECK(rel(t, r * u) < 1e-12);
  CHECK(rel(parallel::residual_times(u, op), t) < 1e-12);
}

TEST_CASE("z-score kernels") {
  Matrix x = random_matrix(40, 40, 8);
  x.row(3).setConstant(2.0);
  std::vector<Eigen::Index> rows{0, 3, 5, 17, 22};
  std::vector<Eigen::Index> cols{1, 2, 4, 30, 39};

  Matrix zs = serial::row_zscores(x);
  Matrix zp = parallel::row_zscores(x);
  CHECK(std::isinf(zs(3, 0)));
  CHECK(std::isinf(zp(3, 0)));
  zs.row(3).setZero();
  zp.row(3).setZero();
  CHECK(rel(zp, zs) < 1e-12);

  // Population z-scores over the full row.
  const double mean = x.row(5).mean();
  const double sd = std::sqrt((x.row(5).array() - mean).square().mean());
  CHECK(zs(5, 9) == doctest::Approx((x(5, 9) - mean) / sd).epsilon(1e-12));

  Vector best = serial::max_row_zscore(x, rows, cols);
  CHECK(rel(parallel::max_row_zscore(x, rows, cols), best) < 1e-12);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    double want = -std::numeric_limits<double>::infinity();
    for (Eigen::Index r : rows)
      if (r != 3) want = std::max(want, zs(r, cols[c]));
    CHECK(best(static_cast<Eigen::Index>(c)) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("restart_walk against a direct linear solve") {
  auto g = random_graph(60, 0.05, 2, 12);
  std::vector<std::size_t> seeds{0, 7, 19};
  RestartWalk params;
  params.tolerance = 1e-14;
  params.max_iterations = 2000;

  const auto n = static_cast<Eigen::Index>(g.entity_count());
  Vector e = Vector::Zero(n);
  for (std::size_t s : seeds) e(static_cast<Eigen::Index>(s)) = 1.0 / 3.0;
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto nb = g.neighbors(static_cast<std::size_t>(j));
    if (nb.empty()) p.col(j) = e;
    for (std::size_t i : nb) p(static_cast<Eigen::Index>(i), j) = 1.0 / static_cast<double>(nb.size());
  }
  Matrix system = Matrix::Identity(n, n) - (1.0 - params.restart) * p;
  Vector want = system.partialPivLu().solve(params.restart * e);

  auto s = serial::restart_walk(g, seeds, params);
  auto q = parallel::restart_walk(g, seeds, params);
  CHECK((s.scores - want).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((q.scores - s.scores).lpNorm<Eigen::Infinity>() < 1e-13);
  CHECK(s.scores.sum() == doctest::Approx(1.0));
}
