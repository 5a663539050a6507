#include "graft/dcm.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <spdlog/spdlog.h>

#include "graft/error.hpp"
#include "graft/numerics.hpp"

namespace graft {

namespace {

constexpr int kMaxHalvings = 60;

bool is_binary_symmetric(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if ((v != 0.0 && v != 1.0) || v != m(j, i)) return false;
    }
  return true;
}

}  // namespace

void DcmProblem::validate() const {
  if (a_tilde_t.ids != a_tilde_s.ids) throw Error("dcm: views are over different index spaces");
  if (a_tilde_t.size() < 2) throw Error("dcm: need at least two entities");
  if (!is_binary_symmetric(a_tilde_t.matrix) || !is_binary_symmetric(a_tilde_s.matrix)) {
    throw Error("dcm: adjacency views must be binary and symmetric");
  }
  if (!(c3 >= 0.0 && c3 <= 1.0)) throw Error("dcm: c3 must lie in [0, 1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw Error("dcm: mu must lie in [0, 1]");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error("dcm: lambda must be >= 0");
  if (d2 < 1) throw Error("dcm: d2 must be positive");
}

DcmEvaluator::DcmEvaluator(const DcmProblem& prob, bool serial)
    : mu_(prob.mu),
      lambda_(prob.lambda),
      c3_(prob.c3),
      target_(kernels::SymmetricOperand::from_dense(prob.a_tilde_t.matrix)),
      source_(kernels::SymmetricOperand::from_dense(prob.a_tilde_s.matrix)),
      serial_(serial) {
  prob.validate();
  const auto n = static_cast<double>(prob.a_tilde_t.size());
  pairs_ = n * (n - 1.0);
}

double DcmEvaluator::smooth_factor(const Embedding& u) const {
  const double r = serial_ ? kernels::serial::residual_norm_sq(u, source_)
                           : kernels::parallel::residual_norm_sq(u, source_);
  return r / pairs_;
}

double DcmEvaluator::objective(const Embedding& u) const {
  if (u.rows() != target_.dense.rows()) throw Error("dcm: embedding rows do not match the problem");
  const double fit = serial_ ? kernels::serial::residual_norm_sq(u, target_)
                             : kernels::parallel::residual_norm_sq(u, target_);
  const double gap = smooth_factor(u) - c3_;
  const double value = mu_ * fit + (1.0 - mu_) * gap * gap + lambda_ * u.squaredNorm();
  if (!std::isfinite(value)) throw Error("dcm: objective is not finite");
  return value;
}

Embedding DcmEvaluator::gradient(const Embedding& u) const {
  if (u.rows() != target_.dense.rows()) throw Error("dcm: embedding rows do not match the problem");
  auto times = [&](const kernels::SymmetricOperand& a) {
    return serial_ ? kernels::serial::residual_times(u, a) : kernels::parallel::residual_times(u, a);
  };
  Embedding grad = 2.0 * lambda_ * u;
  if (mu_ != 0.0) grad += 4.0 * mu_ * times(target_);
  if (mu_ != 1.0) {
    const double gap = smooth_factor(u) - c3_;
    grad += (1.0 - mu_) * 2.0 * gap * (4.0 / pairs_) * times(source_);
  }
  if (!grad.allFinite()) throw Error("dcm: gradient is not finite");
  return grad;
}

double dcm_objective(const Embedding& u, const DcmProblem& prob) {
  return DcmEvaluator(prob).objective(u);
}

Embedding dcm_gradient(const Embedding& u, const DcmProblem& prob) {
  return DcmEvaluator(prob).gradient(u);
}

DcmSolution solve_dcm(const DcmProblem& prob, std::uint64_t seed, const DcmOptions& options) {
  const DcmEvaluator eval(prob);
  const auto n = static_cast<Eigen::Index>(prob.a_tilde_t.size());

  const Eigen::MatrixXd blend = prob.mu * prob.a_tilde_t.matrix + (1.0 - prob.mu) * prob.a_tilde_s.matrix;
  const int k = static_cast<int>(std::min<Eigen::Index>(prob.d2, n));
  const numerics::EigenPairs eig = numerics::sym_eig_topk(blend, k);
  Embedding u = Embedding::Zero(n, prob.d2);
  u.leftCols(k) = eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (Eigen::Index c = 0; c < u.cols(); ++c)
    for (Eigen::Index r = 0; r < n; ++r) u(r, c) += options.init_perturbation * noise(rng);

  DcmSolution sol;
  double f = eval.objective(u);
  sol.objective_trace.push_back(f);
  if (f > options.divergence_limit) {
    throw Error("dcm: objective " + std::to_string(f) + " exceeds the divergence limit; reduce the step size");
  }

  for (int it = 1; it <= options.max_iters; ++it) {
    const Embedding grad = eval.gradient(u);
    double eta = options.eta0;
    Embedding cand;
    double fc = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int h = 0; h < kMaxHalvings; ++h, eta *= 0.5) {
      cand = u - eta * grad;
      fc = eval.objective(cand);
      if (fc <= f) {
        found = true;
        break;
      }
    }
    if (!found) {
      // No step of any size descends: numerically stationary.
      sol.converged = true;
      break;
    }
    if (fc > options.divergence_limit) {
      throw Error("dcm: objective diverged past " + std::to_string(options.divergence_limit) +
                  "; reduce the step size");
    }
    const double change = (f - fc) / std::max(std::abs(f), 1e-300);
    u = std::move(cand);
    f = fc;
    sol.objective_trace.push_back(f);
    sol.iterations = it;
    if (change < options.tol) {
      sol.converged = true;
      break;
    }
  }
  spdlog::debug("dcm: {} iterations, objective {:.9g}", sol.iterations, f);
  sol.u_t = std::move(u);
  return sol;
}

HeteroGraph finalize_edges(const DcmSolution& sol, const HeteroGraph& g_tilde_t, double z) {
  const auto n = static_cast<Eigen::Index>(g_tilde_t.entity_count());
  if (sol.u_t.rows() != n) throw Error("finalize_edges: embedding rows do not match the graph");

  const Eigen::MatrixXd x = sol.u_t * sol.u_t.transpose();
  const Eigen::MatrixXd zs = kernels::parallel::row_zscores(x);

  GraphBuilder builder;
  for (const Entity& e : g_tilde_t.entities()) builder.add_entity(e.id, e.type);
  for (const Edge& e : g_tilde_t.edges()) {
    builder.add_edge(g_tilde_t.entity(e.u).id, g_tilde_t.entity(e.v).id, e.weight);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::max(zs(i, j), zs(j, i)) < z) continue;
      const auto ui = static_cast<std::size_t>(i);
      const auto vj = static_cast<std::size_t>(j);
      if (g_tilde_t.edge_weight(ui, vj)) continue;
      const double w = std::max(0.5 * (x(i, j) + x(j, i)), eps);
      builder.add_edge(g_tilde_t.entity(ui).id, g_tilde_t.entity(vj).id, w);
    }
  }
  return builder.build();
}

}  // namespace graft
