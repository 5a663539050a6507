#include <cmath>
#include <limits>
#include <vector>

#include <omp.h>

#include "graft/error.hpp"
#include "graft/kernels.hpp"

// Reductions are accumulated per row/column and summed afterwards in index
// order, so results do not depend on the thread count.

namespace graft::kernels::parallel {

namespace {

double ordered_sum(const std::vector<double>& parts) {
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

}  // namespace

Matrix hop_distances(const HeteroGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.entity_count());
  Matrix d = Matrix::Constant(n, n, std::numeric_limits<double>::infinity());
#pragma omp parallel
  {
    std::vector<std::size_t> frontier;
    std::vector<std::size_t> next;
#pragma omp for schedule(dynamic, 16)
    for (Eigen::Index s = 0; s < n; ++s) {
      auto col = d.col(s);
      col(s) = 0.0;
      frontier.assign(1, static_cast<std::size_t>(s));
      double level = 0.0;
      while (!frontier.empty()) {
        level += 1.0;
        next.clear();
        for (std::size_t v : frontier) {
          for (std::size_t w : g.neighbors(v)) {
            const auto wi = static_cast<Eigen::Index>(w);
            if (std::isinf(col(wi))) {
              col(wi) = level;
              next.push_back(w);
            }
          }
        }
        frontier.swap(next);
      }
    }
  }
  return d;
}

Matrix squared_row_distances(const Matrix& u) {
  const Eigen::Index n = u.rows();
  const Vector norms = u.rowwise().squaredNorm();
  const Matrix gram = u * u.transpose();
  Matrix c(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      c(i, j) = i == j ? 0.0 : std::max(0.0, norms(i) + norms(j) - 2.0 * gram(i, j));
    }
  }
  return c;
}

Matrix weighted_sum(const MatrixList& mats, const Vector& w) {
  if (mats.empty() || static_cast<Eigen::Index>(mats.size()) != w.size()) {
    throw Error("weighted_sum: need one weight per matrix");
  }
  const Eigen::Index rows = mats[0]->rows();
  const Eigen::Index cols = mats[0]->cols();
  Matrix out = Matrix::Zero(rows, cols);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (std::size_t k = 0; k < mats.size(); ++k) {
      const double wk = w(static_cast<Eigen::Index>(k));
      if (wk == 0.0) continue;
      out.col(j) += wk * mats[k]->col(j);
    }
  }
  return out;
}

Matrix upper_gram(const MatrixList& mats) {
  const auto k = static_cast<Eigen::Index>(mats.size());
  if (k == 0) return Matrix::Zero(0, 0);
  const Eigen::Index n = mats[0]->rows();
  std::vector<Matrix> partial(static_cast<std::size_t>(n), Matrix::Zero(k, k));
#pragma omp parallel
  {
    Matrix block(n, k);
#pragma omp for schedule(dynamic, 8)
    for (Eigen::Index j = 1; j < n; ++j) {
      for (Eigen::Index a = 0; a < k; ++a) block.col(a).head(j) = mats[a]->col(j).head(j);
      partial[static_cast<std::size_t>(j)].noalias() =
          block.topRows(j).transpose() * block.topRows(j);
    }
  }
  Matrix g = Matrix::Zero(k, k);
  for (const Matrix& p : partial) g += p;
  return g;
}

Vector upper_dot(const MatrixList& mats, const Matrix& target) {
  const auto k = static_cast<Eigen::Index>(mats.size());
  const Eigen::Index n = target.rows();
  Matrix partial = Matrix::Zero(k, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 1; j < n; ++j) {
    const auto t = target.col(j).head(j);
    for (Eigen::Index a = 0; a < k; ++a) partial(a, j) = mats[a]->col(j).head(j).dot(t);
  }
  return partial.rowwise().sum();
}

double pair_loss(const Matrix& a, const Matrix& b, double theta) {
  const Eigen::Index n = a.cols();
  std::vector<double> parts(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == j) continue;
      const double r = std::abs(a(i, j) - b(i, j));
      s += theta == 2.0 ? r * r : (theta == 1.0 ? r : std::pow(r, theta));
    }
    parts[static_cast<std::size_t>(j)] = s;
  }
  return ordered_sum(parts);
}

double residual_norm_sq(const Matrix& u, const SymmetricOperand& a) {
  // ||u u^T||^2 - 2 tr(u^T A u) + ||A||^2 with A sparse.
  const Matrix small = u.transpose() * u;
  const Eigen::Index n = u.rows();
  std::vector<double> parts(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a.sparse, i); it; ++it) {
      s += it.value() * u.row(i).dot(u.row(it.col()));
    }
    parts[static_cast<std::size_t>(i)] = s;
  }
  const double cross = ordered_sum(parts);
  return std::max(0.0, small.squaredNorm() - 2.0 * cross + a.squared_norm);
}

Matrix residual_times(const Matrix& u, const SymmetricOperand& a) {
  const Matrix small = u.transpose() * u;
  Matrix out = u * small;
  const Eigen::Index n = u.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a.sparse, i); it; ++it) {
      out.row(i) -= it.value() * u.row(it.col());
    }
  }
  return out;
}

namespace {

void row_moments(const Matrix& x, Eigen::Index r, double& mean, double& sd) {
  const Eigen::Index n = x.cols();
  double s = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) s += x(r, c);
  mean = s / static_cast<double>(n);
  double v = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double dlt = x(r, c) - mean;
    v += dlt * dlt;
  }
  sd = std::sqrt(v / static_cast<double>(n));
}

}  // namespace

Vector max_row_zscore(const Matrix& x, std::span<const Eigen::Index> rows,
                      std::span<const Eigen::Index> cols) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  Vector mean(nr), sd(nr);
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < nr; ++r) row_moments(x, rows[r], mean(r), sd(r));

  const auto nc = static_cast<Eigen::Index>(cols.size());
  Vector best = Vector::Constant(nc, -std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < nc; ++c) {
    double b = best(c);
    for (Eigen::Index r = 0; r < nr; ++r) {
      if (!(sd(r) > 0.0)) continue;
      const double z = (x(rows[r], cols[c]) - mean(r)) / sd(r);
      if (z > b) b = z;
    }
    best(c) = b;
  }
  return best;
}

Matrix row_zscores(const Matrix& x) {
  Matrix z(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double mean = 0.0, sd = 0.0;
    row_moments(x, r, mean, sd);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      z(r, c) = sd > 0.0 ? (x(r, c) - mean) / sd : -std::numeric_limits<double>::infinity();
    }
  }
  return z;
}

RestartWalkResult restart_walk(const HeteroGraph& g, std::span<const std::size_t> seeds,
                               const RestartWalk& params) {
  const auto n = static_cast<Eigen::Index>(g.entity_count());
  if (seeds.empty()) throw Error("restart_walk: empty restart set");
  Vector restart = Vector::Zero(n);
  for (std::size_t s : seeds) restart(static_cast<Eigen::Index>(s)) = 1.0;
  restart /= restart.sum();

  Vector inv_degree(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto deg = g.neighbors(static_cast<std::size_t>(j)).size();
    inv_degree(j) = deg == 0 ? 0.0 : 1.0 / static_cast<double>(deg);
  }

  RestartWalkResult out;
  out.scores = restart;
  Vector next(n);
  for (int it = 1; it <= params.max_iterations; ++it) {
    double dangling = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (inv_degree(j) == 0.0) dangling += out.scores(j);
    const Vector& cur = out.scores;
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j : g.neighbors(static_cast<std::size_t>(i))) {
        const auto ji = static_cast<Eigen::Index>(j);
        s += cur(ji) * inv_degree(ji);
      }
      next(i) = (1.0 - params.restart) * (s + dangling * restart(i)) + params.restart * restart(i);
    }
    const double change = (next - out.scores).cwiseAbs().sum();
    out.scores = next;
    out.iterations = it;
    if (change < params.tolerance) break;
  }
  return out;
}

}  // namespace graft::kernels::parallel
