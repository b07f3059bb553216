#include "mvtm/solver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "mvtm/error.hpp"
#include "mvtm/proxops.hpp"

#include "format.hpp"

namespace mvtm {

namespace {

constexpr double kSingularFloor = 1e-300;
constexpr double kDetTol = 1e-12;
constexpr double kRankTol = 1e-10;

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw ConfigError("solver: rho must be > 0");
  if (!(mu >= 0.0)) throw ConfigError("solver: mu must be >= 0");
  if (!(radius > 0.0)) throw ConfigError("solver: radius must be > 0");
  if (max_iters < 1) throw ConfigError("solver: max_iters must be >= 1");
  if (!(tol_primal > 0.0)) throw ConfigError("solver: tol_primal must be > 0");
  if (!(tol_change > 0.0)) throw ConfigError("solver: tol_change must be > 0");
}

double recommended_radius(const ProjectedDocs& projected) {
  return 2.0 * projected.coords.rowwise().norm().maxCoeff();
}

SolverState init_state(const ProjectedDocs& projected,
                       const SolverConfig& config) {
  config.validate();
  const Eigen::MatrixXd& w = projected.coords;
  const Eigen::Index k = w.cols();
  if (w.rows() < k) {
    throw DimensionError("solver: fewer documents than dimensions");
  }

  const Eigen::VectorXd sv = singular_values(w);
  if (!(sv(k - 1) > kRankTol)) {
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (sv(i) > kRankTol) ++rank;
    }
    std::ostringstream msg;
    msg << "solver: projected documents are rank deficient (numerical rank "
        << rank << " of " << k << ")";
    throw RankError(msg.str());
  }

  SolverState state;
  state.gamma = Eigen::MatrixXd::Identity(k, k);
  state.gamma_prev = state.gamma;
  state.v1 = w;  // W~ gamma^0 with gamma^0 = I
  state.v2 = Eigen::MatrixXd::Identity(k, k);
  state.lambda1 = Eigen::MatrixXd::Zero(w.rows(), k);
  state.lambda2 = Eigen::MatrixXd::Zero(k, k);

  const Eigen::MatrixXd gram = w.transpose() * w;
  state.c_mat = Eigen::MatrixXd::Identity(k, k) + gram;
  Eigen::LLT<Eigen::MatrixXd> llt(state.c_mat);
  state.c_inv = llt.solve(Eigen::MatrixXd::Identity(k, k));
  state.a_vec = Eigen::LLT<Eigen::MatrixXd>(gram).solve(
      w.colwise().sum().transpose());
  state.iteration = 0;
  return state;
}

Eigen::MatrixXd update_v1(const SolverState& state,
                          const Eigen::MatrixXd& w_tilde,
                          const SolverConfig& config) {
  Eigen::MatrixXd p = w_tilde * state.gamma + state.lambda1 / config.rho;
  if (config.mu == 0.0) return p;
  return prox_hinge(p, config.mu / config.rho);
}

Eigen::MatrixXd update_v2(const SolverState& state,
                          const SolverConfig& config) {
  const Eigen::MatrixXd p = state.gamma + state.lambda2 / config.rho;
  return project_min_singular(p, 1.0 / config.radius);
}

Eigen::MatrixXd update_gamma(const SolverState& state,
                             const Eigen::MatrixXd& w_tilde,
                             const SolverConfig& config) {
  const double rho = config.rho;
  const Eigen::Index k = state.dims();

  const Eigen::MatrixXd b = state.v1.transpose() * w_tilde +
                            state.v2.transpose() -
                            state.lambda2.transpose() / rho -
                            state.lambda1.transpose() * w_tilde / rho;
  const Eigen::MatrixXd a = state.c_inv * b.transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::VectorXd d_a = svd.singularValues();
  const Eigen::VectorXd e = (u.transpose() * state.c_mat * u).diagonal();

  // Per-direction positive root of d^2 - (f/e) d - 2/(rho e) = 0 with
  // f = e * d_a, the stationary point of the scalar surrogate.
  Eigen::VectorXd d_hat(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double f_over_e = d_a(i);
    d_hat(i) =
        0.5 * (f_over_e +
               std::sqrt(f_over_e * f_over_e + 8.0 / (rho * e(i))));
  }
  const Eigen::MatrixXd gamma_plus =
      u * d_hat.asDiagonal() * svd.matrixV().transpose();

  // Affine correction onto the row-sum constraint gamma 1 = a.
  const Eigen::VectorXd q = state.c_inv * Eigen::VectorXd::Ones(k);
  const Eigen::VectorXd defect = gamma_plus.rowwise().sum() - state.a_vec;
  return gamma_plus - defect * (q.transpose() / q.sum());
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> update_duals(
    const SolverState& state, const Eigen::MatrixXd& w_tilde,
    const SolverConfig& config) {
  Eigen::MatrixXd lambda1 =
      state.lambda1 + config.rho * (w_tilde * state.gamma - state.v1);
  Eigen::MatrixXd lambda2 =
      state.lambda2 + config.rho * (state.gamma - state.v2);
  return {std::move(lambda1), std::move(lambda2)};
}

ObjectiveValue objective(const Eigen::MatrixXd& gamma,
                         const Eigen::MatrixXd& w_tilde,
                         const SolverConfig& config) {
  const Eigen::VectorXd sv = singular_values(gamma);
  ObjectiveValue out;
  out.sigma_min = sv(sv.size() - 1);
  out.feasible = out.sigma_min + 1e-12 >= 1.0 / config.radius;
  if (out.sigma_min < kSingularFloor) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) log_det += std::log(sv(i));
  out.value = -2.0 * log_det + config.mu * hinge_norm(w_tilde * gamma);
  return out;
}

KktResiduals kkt_residuals(const SolverState& state,
                           const Eigen::MatrixXd& w_tilde,
                           const SolverConfig& config) {
  KktResiduals res;
  res.r1 = (w_tilde * state.gamma - state.v1).norm();
  res.r2 = (state.gamma - state.v2).norm();
  res.dual_change = config.rho * (state.gamma - state.gamma_prev).norm();
  res.constraint =
      (state.gamma.rowwise().sum() - state.a_vec).lpNorm<Eigen::Infinity>();
  return res;
}

FitResult run(const ProjectedDocs& projected, const SolverConfig& config) {
  using Clock = std::chrono::steady_clock;
  const Eigen::MatrixXd& w = projected.coords;

  FitResult result;
  result.state = init_state(projected, config);
  SolverState& state = result.state;
  result.trace.reserve(static_cast<std::size_t>(config.max_iters));

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const auto t0 = Clock::now();
    state.v1 = update_v1(state, w, config);
    state.v2 = update_v2(state, config);
    state.gamma_prev = state.gamma;
    state.gamma = update_gamma(state, w, config);
    auto duals = update_duals(state, w, config);
    state.lambda1 = std::move(duals.first);
    state.lambda2 = std::move(duals.second);
    state.iteration = iter;

    const KktResiduals res = kkt_residuals(state, w, config);
    const double prev_norm = state.gamma_prev.norm();
    const double rel_change =
        (state.gamma - state.gamma_prev).norm() /
        (prev_norm > 0.0 ? prev_norm : 1.0);
    const ObjectiveValue obj = objective(state.gamma, w, config);

    if (!state.gamma.allFinite() || !std::isfinite(res.r1) ||
        !std::isfinite(res.r2)) {
      std::ostringstream msg;
      msg << "solver: diverged at iteration " << iter;
      throw NumericError(msg.str());
    }

    TraceRecord rec;
    rec.iter = iter;
    rec.objective = obj.value;
    rec.r1 = res.r1;
    rec.r2 = res.r2;
    rec.sigma_min = obj.sigma_min;
    rec.rel_change = rel_change;
    rec.ms = std::chrono::duration<double, std::milli>(Clock::now() - t0)
                 .count();
    result.trace.push_back(rec);

    if (res.r1 < config.tol_primal && res.r2 < config.tol_primal) {
      result.converged = true;
      result.reason = StopReason::residual;
      break;
    }
    if (rel_change < config.tol_change) {
      result.converged = true;
      result.reason = StopReason::change;
      break;
    }
  }

  result.gamma_hat = state.gamma;
  const Eigen::VectorXd sv = singular_values(result.gamma_hat);
  result.gamma_abs_det = sv.prod();
  result.gamma_invertible = result.gamma_abs_det > kDetTol;
  return result;
}

void write_trace_csv(const FitTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open trace file: " + path);
  out << "iter,objective,r1,r2,sigma_min,rel_change,ms\n";
  for (const TraceRecord& rec : trace) {
    out << rec.iter << ',' << detail::format_double(rec.objective) << ','
        << detail::format_double(rec.r1) << ','
        << detail::format_double(rec.r2) << ','
        << detail::format_double(rec.sigma_min) << ','
        << detail::format_double(rec.rel_change) << ','
        << detail::format_double(rec.ms) << '\n';
  }
  if (!out) throw IoError("failed writing trace file: " + path);
}

}  // namespace mvtm
