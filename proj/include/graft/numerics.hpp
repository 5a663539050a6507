#pragma once

#include <functional>

#include <Eigen/Dense>

namespace graft::numerics {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative asymmetry accepted by sym_eig_topk, scaled by max |m(i,j)|.
inline constexpr double kSymmetryTolerance = 1e-9;

struct EigenPairs {
  Vector values;        // descending
  DenseMatrix vectors;  // n x k, orthonormal columns
};

/// Top-k algebraic eigenpairs of a symmetric matrix.
///
/// Each eigenvector is sign-normalized so that its largest-magnitude entry is
/// positive (first such index on ties), which makes results reproducible.
EigenPairs sym_eig_topk(const DenseMatrix& m, int k);

/// Ridge-regularized least squares with a non-negativity constraint:
/// argmin_{w >= 0} ||design w - target||^2 + ridge ||w||^2.
///
/// When the unconstrained ridge solution is already non-negative it is returned
/// unchanged; otherwise an active-set NNLS solve on the normal equations is used.
/// Throws when ridge == 0 and the design is rank deficient.
Vector ols_nonneg(const DenseMatrix& design, const Vector& target, double ridge);

/// Same problem posed through its normal equations: gram = design^T design,
/// rhs = design^T target. `ridge` is added to the gram diagonal.
Vector ols_nonneg_normal(const DenseMatrix& gram, const Vector& rhs, double ridge);

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}.
Vector project_simplex(const Vector& v);

/// argmin over the simplex of 0.5 x^T q x - b^T x (q symmetric positive
/// semidefinite) by accelerated projected gradient started from `start`.
/// The result never scores worse than the projection of `start`.
Vector simplex_qp(const DenseMatrix& q, const Vector& b, const Vector& start,
                  int max_iterations = 5000, double tolerance = 1e-12);

/// Central differences (f(x + h e_ij) - f(x - h e_ij)) / 2h for every entry.
DenseMatrix finite_diff_grad(const std::function<double(const DenseMatrix&)>& f,
                             const DenseMatrix& x, double h);

/// Max relative deviation max|a - b| / max(max|b|, floor).
double max_relative_error(const DenseMatrix& a, const DenseMatrix& b, double floor = 1e-12);

}  // namespace graft::numerics
