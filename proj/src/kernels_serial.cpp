#include <cmath>
#include <deque>
#include <limits>

#include "graft/error.hpp"
#include "graft/kernels.hpp"

namespace graft::kernels {

SymmetricOperand SymmetricOperand::from_dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("operand must be square");
  SymmetricOperand op;
  op.dense = m;
  op.sparse = m.sparseView();
  op.sparse.makeCompressed();
  op.squared_norm = m.squaredNorm();
  return op;
}

namespace serial {

Matrix hop_distances(const HeteroGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.entity_count());
  Matrix d = Matrix::Constant(n, n, std::numeric_limits<double>::infinity());
  for (Eigen::Index s = 0; s < n; ++s) {
    d(s, s) = 0.0;
    std::deque<std::size_t> queue{static_cast<std::size_t>(s)};
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (std::size_t w : g.neighbors(v)) {
        const auto wi = static_cast<Eigen::Index>(w);
        if (std::isinf(d(wi, s))) {
          d(wi, s) = d(static_cast<Eigen::Index>(v), s) + 1.0;
          queue.push_back(w);
        }
      }
    }
  }
  return d;
}

Matrix squared_row_distances(const Matrix& u) {
  const Eigen::Index n = u.rows();
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < u.cols(); ++k) {
        const double diff = u(i, k) - u(j, k);
        s += diff * diff;
      }
      c(i, j) = s;
    }
  }
  return c;
}

Matrix weighted_sum(const MatrixList& mats, const Vector& w) {
  if (mats.empty() || static_cast<Eigen::Index>(mats.size()) != w.size()) {
    throw Error("weighted_sum: need one weight per matrix");
  }
  Matrix out = Matrix::Zero(mats[0]->rows(), mats[0]->cols());
  for (std::size_t k = 0; k < mats.size(); ++k) {
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      for (Eigen::Index i = 0; i < out.rows(); ++i)
        out(i, j) += w(static_cast<Eigen::Index>(k)) * (*mats[k])(i, j);
  }
  return out;
}

Matrix upper_gram(const MatrixList& mats) {
  const auto k = static_cast<Eigen::Index>(mats.size());
  Matrix g = Matrix::Zero(k, k);
  if (k == 0) return g;
  const Eigen::Index n = mats[0]->rows();
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i) s += (*mats[a])(i, j) * (*mats[b])(i, j);
      g(a, b) = s;
      g(b, a) = s;
    }
  }
  return g;
}

Vector upper_dot(const MatrixList& mats, const Matrix& target) {
  const auto k = static_cast<Eigen::Index>(mats.size());
  Vector r = Vector::Zero(k);
  const Eigen::Index n = target.rows();
  for (Eigen::Index a = 0; a < k; ++a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += (*mats[a])(i, j) * target(i, j);
    r(a) = s;
  }
  return r;
}

double pair_loss(const Matrix& a, const Matrix& b, double theta) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == j) continue;
      s += std::pow(std::abs(a(i, j) - b(i, j)), theta);
    }
  }
  return s;
}

double residual_norm_sq(const Matrix& u, const SymmetricOperand& a) {
  const Eigen::Index n = u.rows();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double x = 0.0;
      for (Eigen::Index k = 0; k < u.cols(); ++k) x += u(i, k) * u(j, k);
      const double r = x - a.dense(i, j);
      s += r * r;
    }
  }
  return s;
}

Matrix residual_times(const Matrix& u, const SymmetricOperand& a) {
  const Eigen::Index n = u.rows();
  const Eigen::Index d = u.cols();
  Matrix r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double x = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) x += u(i, k) * u(j, k);
      r(i, j) = x - a.dense(i, j);
    }
  }
  Matrix out = Matrix::Zero(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index j = 0; j < n; ++j) out(i, k) += r(i, j) * u(j, k);
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
  const double ninf = -std::numeric_limits<double>::infinity();
  Vector best = Vector::Constant(static_cast<Eigen::Index>(cols.size()), ninf);
  for (Eigen::Index r : rows) {
    double mean = 0.0, sd = 0.0;
    row_moments(x, r, mean, sd);
    if (!(sd > 0.0)) continue;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double z = (x(r, cols[c]) - mean) / sd;
      const auto ci = static_cast<Eigen::Index>(c);
      if (z > best(ci)) best(ci) = z;
    }
  }
  return best;
}

Matrix row_zscores(const Matrix& x) {
  Matrix z(x.rows(), x.cols());
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

  // Dense column-stochastic transition; dangling columns restart.
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto nb = g.neighbors(static_cast<std::size_t>(j));
    if (nb.empty()) {
      p.col(j) = restart;
    } else {
      for (std::size_t i : nb) p(static_cast<Eigen::Index>(i), j) = 1.0 / static_cast<double>(nb.size());
    }
  }

  RestartWalkResult out;
  out.scores = restart;
  for (int it = 1; it <= params.max_iterations; ++it) {
    Vector next = (1.0 - params.restart) * (p * out.scores) + params.restart * restart;
    const double change = (next - out.scores).cwiseAbs().sum();
    out.scores = next;
    out.iterations = it;
    if (change < params.tolerance) break;
  }
  return out;
}

}  // namespace serial
}  // namespace graft::kernels
