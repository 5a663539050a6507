#pragma once

// Data-parallel inner loops of the pipeline.
//
// Every kernel exists twice with identical signatures: `serial::` is the plain
// reference used as a test oracle, `parallel::` is the OpenMP version used by
// the pipeline. The two must agree to rounding (exactly, for integer-valued
// results such as hop counts).

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "graft/hetgraph.hpp"

namespace graft::kernels {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixList = std::vector<const Matrix*>;

/// Symmetric operand of the DCM terms, kept both dense and sparse.
struct SymmetricOperand {
  Matrix dense;
  Eigen::SparseMatrix<double, Eigen::RowMajor> sparse;
  double squared_norm = 0.0;

  static SymmetricOperand from_dense(const Matrix& m);
};

/// Parameters of a random walk with restart.
struct RestartWalk {
  double restart = 0.15;
  double tolerance = 1e-9;
  int max_iterations = 100;
};

struct RestartWalkResult {
  Vector scores;
  int iterations = 0;
};

namespace serial {

// Unweighted hop counts; +inf where unreachable, 0 on the diagonal.
Matrix hop_distances(const HeteroGraph& g);
// C(i,j) = ||u_i - u_j||^2.
Matrix squared_row_distances(const Matrix& u);
// sum_k w_k M_k.
Matrix weighted_sum(const MatrixList& mats, const Vector& w);
// G(a,b) = sum_{i<j} M_a(i,j) M_b(i,j).
Matrix upper_gram(const MatrixList& mats);
// r(a) = sum_{i<j} M_a(i,j) T(i,j).
Vector upper_dot(const MatrixList& mats, const Matrix& target);
// sum_{i != j} |A(i,j) - B(i,j)|^theta.
double pair_loss(const Matrix& a, const Matrix& b, double theta);
// ||u u^T - A||_F^2.
double residual_norm_sq(const Matrix& u, const SymmetricOperand& a);
// (u u^T - A) u.
Matrix residual_times(const Matrix& u, const SymmetricOperand& a);
// For each column c in `cols`, the max over r in `rows` of the z-score of x(r, c)
// within row r. Rows with zero spread contribute -inf.
Vector max_row_zscore(const Matrix& x, std::span<const Eigen::Index> rows,
                      std::span<const Eigen::Index> cols);
// Row-standardized copy of x; zero-spread rows become -inf.
Matrix row_zscores(const Matrix& x);
// Stationary vector of a walk on binarized g restarting uniformly on `seeds`.
RestartWalkResult restart_walk(const HeteroGraph& g, std::span<const std::size_t> seeds,
                               const RestartWalk& params);

}  // namespace serial

namespace parallel {

Matrix hop_distances(const HeteroGraph& g);
Matrix squared_row_distances(const Matrix& u);
Matrix weighted_sum(const MatrixList& mats, const Vector& w);
Matrix upper_gram(const MatrixList& mats);
Vector upper_dot(const MatrixList& mats, const Matrix& target);
double pair_loss(const Matrix& a, const Matrix& b, double theta);
double residual_norm_sq(const Matrix& u, const SymmetricOperand& a);
Matrix residual_times(const Matrix& u, const SymmetricOperand& a);
Vector max_row_zscore(const Matrix& x, std::span<const Eigen::Index> rows,
                      std::span<const Eigen::Index> cols);
Matrix row_zscores(const Matrix& x);
RestartWalkResult restart_walk(const HeteroGraph& g, std::span<const std::size_t> seeds,
                               const RestartWalk& params);

}  // namespace parallel

}  // namespace graft::kernels
