#include "graft/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <lapacke.h>

#include "graft/error.hpp"

namespace graft::numerics {

namespace {

void normalize_sign(DenseMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs * (1.0 + 1e-12) + 1e-300) {
        best_abs = a;
        best = r;
      }
    }
    if (vectors(best, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

// Lawson-Hanson active set on the normal equations (gram already ridged).
Vector nnls_active_set(const DenseMatrix& gram, const Vector& rhs) {
  const Eigen::Index k = gram.rows();
  Vector w = Vector::Zero(k);
  std::vector<char> passive(static_cast<std::size_t>(k), 0);
  const double scale = std::max(rhs.cwiseAbs().maxCoeff(), gram.diagonal().cwiseAbs().maxCoeff());
  const double tol = 1e-12 * std::max(scale, 1e-300);

  auto solve_passive = [&](Vector& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < k; ++j)
      if (passive[j]) idx.push_back(j);
    s = Vector::Zero(k);
    if (idx.empty()) return;
    const auto p = static_cast<Eigen::Index>(idx.size());
    DenseMatrix g(p, p);
    Vector b(p);
    for (Eigen::Index a = 0; a < p; ++a) {
      b(a) = rhs(idx[a]);
      for (Eigen::Index c = 0; c < p; ++c) g(a, c) = gram(idx[a], idx[c]);
    }
    const Vector sol = g.ldlt().solve(b);
    for (Eigen::Index a = 0; a < p; ++a) s(idx[a]) = sol(a);
  };

  const int max_outer = static_cast<int>(3 * k + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Vector grad = rhs - gram * w;
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[j] && grad(j) > best) {
        best = grad(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = 1;

    Vector s;
    solve_passive(s);
    for (int inner = 0; inner < max_outer; ++inner) {
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && s(j) <= 0.0) {
          feasible = false;
          const double denom = w(j) - s(j);
          if (denom > 0.0) alpha = std::min(alpha, w(j) / denom);
        }
      }
      if (feasible) break;
      w += alpha * (s - w);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && w(j) <= tol) {
          passive[j] = 0;
          w(j) = 0.0;
        }
      }
      solve_passive(s);
    }
    w = s;
  }
  return w.cwiseMax(0.0);
}

}  // namespace

EigenPairs sym_eig_topk(const DenseMatrix& m, int k) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n || n == 0) throw Error("sym_eig_topk: matrix must be square and non-empty");
  if (k < 1 || k > n) {
    throw Error("sym_eig_topk: k=" + std::to_string(k) + " out of range [1, " + std::to_string(n) +
                "]");
  }
  if (!m.allFinite()) throw Error("sym_eig_topk: non-finite entries");
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * std::max(scale, 1e-300)) {
    throw Error("sym_eig_topk: matrix is not symmetric");
  }

  DenseMatrix a = m;
  std::vector<double> w(static_cast<std::size_t>(n));
  DenseMatrix z(n, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', ln, a.data(), ln, 0.0,
                                         0.0, ln - k + 1, ln, LAPACKE_dlamch('S'), &found,
                                         w.data(), z.data(), ln, support.data());
  if (info != 0 || found != k) {
    throw Error("sym_eig_topk: LAPACK dsyevr failed (info=" + std::to_string(info) + ")");
  }

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int c = 0; c < k; ++c) {
    out.values(c) = w[static_cast<std::size_t>(k - 1 - c)];
    out.vectors.col(c) = z.col(k - 1 - c);
  }
  normalize_sign(out.vectors);
  return out;
}

Vector ols_nonneg_normal(const DenseMatrix& gram, const Vector& rhs, double ridge) {
  const Eigen::Index k = gram.rows();
  if (gram.cols() != k || rhs.size() != k || k == 0) {
    throw Error("ols_nonneg: dimension mismatch");
  }
  if (ridge < 0.0) throw Error("ols_nonneg: ridge must be >= 0");
  DenseMatrix g = gram;
  g.diagonal().array() += ridge;

  if (ridge == 0.0) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(g, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(top, 1e-300)) {
      throw Error("ols_nonneg: design is rank deficient; use a positive ridge");
    }
  }

  Eigen::LLT<DenseMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw Error("ols_nonneg: normal equations not positive definite");
  Vector w = llt.solve(rhs);
  if ((w.array() >= 0.0).all()) return w;
  return nnls_active_set(g, rhs);
}

Vector ols_nonneg(const DenseMatrix& design, const Vector& target, double ridge) {
  if (design.rows() != target.size()) throw Error("ols_nonneg: design/target row mismatch");
  if (design.rows() < design.cols()) throw Error("ols_nonneg: need at least as many rows as columns");
  if (!design.allFinite() || !target.allFinite()) throw Error("ols_nonneg: non-finite input");
  return ols_nonneg_normal(design.transpose() * design, design.transpose() * target, ridge);
}

DenseMatrix finite_diff_grad(const std::function<double(const DenseMatrix&)>& f,
                             const DenseMatrix& x, double h) {
  if (!(h > 0.0)) throw Error("finite_diff_grad: h must be positive");
  DenseMatrix grad(x.rows(), x.cols());
  DenseMatrix probe = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double orig = probe(i, j);
      probe(i, j) = orig + h;
      const double plus = f(probe);
      probe(i, j) = orig - h;
      const double minus = f(probe);
      probe(i, j) = orig;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw Error("finite_diff_grad: non-finite function value");
      }
      grad(i, j) = (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

double max_relative_error(const DenseMatrix& a, const DenseMatrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("max_relative_error: shape mismatch");
  if (a.size() == 0) return 0.0;
  const double denom = std::max(b.cwiseAbs().maxCoeff(), floor);
  return (a - b).cwiseAbs().maxCoeff() / denom;
}

Vector project_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw Error("project_simplex: empty vector");
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

Vector simplex_qp(const DenseMatrix& q, const Vector& b, const Vector& start, int max_iterations,
                  double tolerance) {
  const Eigen::Index n = b.size();
  if (q.rows() != n || q.cols() != n || start.size() != n) {
    throw Error("simplex_qp: dimension mismatch");
  }
  auto value = [&](const Vector& x) { return 0.5 * x.dot(q * x) - b.dot(x); };
  const double lipschitz = std::max(sym_eig_topk(0.5 * (q + q.transpose()), 1).values(0), 1e-300);

  // FISTA with a function-value restart; the returned iterate never has a
  // higher value than the projected start.
  Vector x = project_simplex(start);
  double fx = value(x);
  Vector y = x;
  double t = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector next = project_simplex(y - (q * y - b) / lipschitz);
    const double fn = value(next);
    if (fn > fx) {
      y = x;
      t = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - x);
    const double step = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    fx = fn;
    t = t_next;
    if (step < tolerance) break;
  }
  return x;
}

}  // namespace graft::numerics
