#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mvtm/projection.hpp"

namespace mvtm {

/// ADMM parameters. radius (R) bounds the recovered topic vertices through
/// the spectral constraint sigma_min(gamma) >= 1/R; recommended_radius()
/// supplies a data-driven choice.
struct SolverConfig {
  double rho = 7.0;          // ADMM penalty
  double mu = 0.02;          // hinge weight on negative topic proportions
  double radius = 0.0;       // R; must be set > 0 before running
  int max_iters = 500;
  double tol_primal = 1e-4;  // stop threshold on both primal residuals
  double tol_change = 1e-6;  // stop threshold on relative gamma change

  void validate() const;
};

/// Twice the largest document coordinate norm: topics live near the data
/// cloud, so vertices further than this are not worth admitting.
double recommended_radius(const ProjectedDocs& projected);

/// ADMM iterate bundle. c_mat = I + W~^T W~ and a_vec (the least-squares
/// image of the all-ones vector) are computed once at init and cached.
struct SolverState {
  Eigen::MatrixXd gamma;        // K x K
  Eigen::MatrixXd gamma_prev;   // iterate before the last gamma update
  Eigen::MatrixXd v1;           // M x K split of W~ gamma
  Eigen::MatrixXd v2;           // K x K split of gamma
  Eigen::MatrixXd lambda1;      // M x K dual
  Eigen::MatrixXd lambda2;      // K x K dual
  Eigen::MatrixXd c_mat;        // K x K, I + W~^T W~
  Eigen::MatrixXd c_inv;        // cached inverse of c_mat
  Eigen::VectorXd a_vec;        // K, target of the row-sum constraint
  int iteration = 0;

  Eigen::Index dims() const { return gamma.rows(); }
};

/// One completed iteration of the fit.
struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double r1 = 0.0;          // ||W~ gamma - V1||_F
  double r2 = 0.0;          // ||gamma - V2||_F
  double sigma_min = 0.0;   // sigma_min(gamma)
  double rel_change = 0.0;  // ||gamma - gamma_prev||_F / ||gamma_prev||_F
  double ms = 0.0;          // wall-clock milliseconds for the iteration
};

using FitTrace = std::vector<TraceRecord>;

enum class StopReason {
  residual,   // both primal residuals under tol_primal
  change,     // relative gamma change under tol_change
  max_iters,
};

struct FitResult {
  Eigen::MatrixXd gamma_hat;
  SolverState state;
  FitTrace trace;
  bool converged = false;
  StopReason reason = StopReason::max_iters;
  double gamma_abs_det = 0.0;
  bool gamma_invertible = false;  // |det gamma_hat| > 1e-12
};

struct ObjectiveValue {
  double value = 0.0;      // -log det(gamma gamma^T) + mu ||W~ gamma||_h
  bool feasible = false;   // sigma_min(gamma) >= 1/R
  double sigma_min = 0.0;
};

struct KktResiduals {
  double r1 = 0.0;           // ||W~ gamma - V1||_F
  double r2 = 0.0;           // ||gamma - V2||_F
  double dual_change = 0.0;  // rho * ||gamma - gamma_prev||_F
  double constraint = 0.0;   // ||gamma 1 - a||_inf
};

/// gamma = I, V1 = W~, V2 = I, zero duals; caches C and a. Throws RankError
/// when W~ is numerically rank-deficient.
SolverState init_state(const ProjectedDocs& projected,
                       const SolverConfig& config);

/// V1 step: one-sided soft threshold of W~ gamma + Lambda1 / rho at mu/rho.
Eigen::MatrixXd update_v1(const SolverState& state,
                          const Eigen::MatrixXd& w_tilde,
                          const SolverConfig& config);

/// V2 step: clamp the singular values of gamma + Lambda2 / rho at 1/R.
Eigen::MatrixXd update_v2(const SolverState& state,
                          const SolverConfig& config);

/// gamma step: closed-form singular-value update of the penalized
/// log-det subproblem, then the affine correction that restores
/// gamma * 1 = a exactly.
Eigen::MatrixXd update_gamma(const SolverState& state,
                             const Eigen::MatrixXd& w_tilde,
                             const SolverConfig& config);

/// Dual ascent on both consensus constraints; expects the primal blocks of
/// this iteration to be in place already.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> update_duals(
    const SolverState& state, const Eigen::MatrixXd& w_tilde,
    const SolverConfig& config);

/// Penalized objective evaluated through the singular values of gamma; the
/// spectral constraint is reported as the feasible flag rather than an
/// infinite value.
ObjectiveValue objective(const Eigen::MatrixXd& gamma,
                         const Eigen::MatrixXd& w_tilde,
                         const SolverConfig& config);

KktResiduals kkt_residuals(const SolverState& state,
                           const Eigen::MatrixXd& w_tilde,
                           const SolverConfig& config);

/// Full ADMM loop in the fixed order V1, V2, gamma, duals, tracing every
/// iteration. Deterministic given inputs.
FitResult run(const ProjectedDocs& projected, const SolverConfig& config);

/// Writes `iter,objective,r1,r2,sigma_min,rel_change,ms` rows, one per
/// iteration, doubles in round-trip decimal form.
void write_trace_csv(const FitTrace& trace, const std::string& path);

}  // namespace mvtm
