#pragma once

#include <cstdint>
#include <vector>

#include "graft/eem.hpp"
#include "graft/hetgraph.hpp"
#include "graft/kernels.hpp"

namespace graft {

/// Inputs of the dependency-construction objective. Both views are binary and
/// share one index space (the entities of the estimated target graph).
struct DcmProblem {
  AdjacencyView a_tilde_t;
  AdjacencyView a_tilde_s;
  double c3 = 0.0;  // dynamic factor between the observed graphs
  double mu = 0.5;
  double lambda = 0.1;
  int d2 = 16;

  void validate() const;
};

struct DcmOptions {
  double eta0 = 0.01;
  double tol = 1e-6;
  int max_iters = 500;
  double init_perturbation = 1e-3;
  double divergence_limit = 1e12;
};

struct DcmSolution {
  Embedding u_t;
  std::vector<double> objective_trace;  // entry 0 is the initial objective
  int iterations = 0;
  bool converged = false;
};

/// Objective and gradient with the sparse operands built once. `serial`
/// selects the reference kernels.
class DcmEvaluator {
 public:
  explicit DcmEvaluator(const DcmProblem& prob, bool serial = false);

  double objective(const Embedding& u) const;
  Embedding gradient(const Embedding& u) const;

 private:
  double smooth_factor(const Embedding& u) const;

  double mu_;
  double lambda_;
  double c3_;
  kernels::SymmetricOperand target_;
  kernels::SymmetricOperand source_;
  double pairs_;
  bool serial_;
};

/// mu ||u u^T - A_T||^2 + (1 - mu) (g(u) - c3)^2 + lambda ||u||^2,
/// g(u) = ||u u^T - A_S||^2 / (n (n - 1)).
double dcm_objective(const Embedding& u, const DcmProblem& prob);
Embedding dcm_gradient(const Embedding& u, const DcmProblem& prob);

/// Spectral start from the mu-blend of the two views, then gradient descent
/// with a backtracking step.
DcmSolution solve_dcm(const DcmProblem& prob, std::uint64_t seed, const DcmOptions& options = {});

/// Thresholds row z-scores of u u^T and adds the resulting edges to g_tilde_t.
HeteroGraph finalize_edges(const DcmSolution& sol, const HeteroGraph& g_tilde_t, double z);

}  // namespace graft
