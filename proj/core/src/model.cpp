#include "mvtm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "mvtm/error.hpp"
#include "mvtm/proxops.hpp"

namespace mvtm {

namespace {

constexpr double kDetTol = 1e-12;
constexpr double kProbFloor = 1e-12;

void project_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m.row(i) = project_simplex(m.row(i).transpose()).transpose();
  }
}

Eigen::MatrixXd l1_table(const Eigen::MatrixXd& beta_hat,
                         const Eigen::MatrixXd& beta_true) {
  if (beta_hat.rows() != beta_true.rows() ||
      beta_hat.cols() != beta_true.cols()) {
    throw DimensionError("match_topics: topic matrices differ in shape");
  }
  const Eigen::Index k = beta_hat.rows();
  Eigen::MatrixXd dist(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      dist(i, j) = (beta_hat.row(i) - beta_true.row(j)).lpNorm<1>();
    }
  }
  return dist;
}

TopicMatch finish_match(const Eigen::MatrixXd& dist,
                        std::vector<int> permutation, bool approximate) {
  const Eigen::Index k = dist.rows();
  TopicMatch match;
  match.per_topic_l1.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    match.per_topic_l1(i) = dist(i, permutation[static_cast<std::size_t>(i)]);
  }
  match.mean_l1 = match.per_topic_l1.mean();
  match.permutation = std::move(permutation);
  match.approximate = approximate;
  return match;
}

}  // namespace

Eigen::MatrixXd recover_beta(const Subspace& subspace,
                             const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != gamma.cols()) {
    throw DimensionError("recover_beta: gamma must be square");
  }
  if (gamma.rows() != subspace.dims()) {
    throw DimensionError("recover_beta: gamma and subspace disagree on K");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      gamma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!(sv.prod() > kDetTol)) {
    std::ostringstream msg;
    msg << "recover_beta: gamma is numerically singular (sigma_min = "
        << sv(sv.size() - 1) << ")";
    throw RankError(msg.str());
  }
  const Eigen::MatrixXd gamma_inv = svd.matrixV() *
                                    sv.cwiseInverse().asDiagonal() *
                                    svd.matrixU().transpose();
  Eigen::MatrixXd beta = reconstruct_rows(subspace, gamma_inv);
  project_rows(beta);
  return beta;
}

Eigen::MatrixXd recover_theta(const ProjectedDocs& projected,
                              const Eigen::MatrixXd& gamma) {
  if (projected.dims() != gamma.rows()) {
    throw DimensionError("recover_theta: coordinate/gamma size mismatch");
  }
  Eigen::MatrixXd theta = projected.coords * gamma;
  project_rows(theta);
  return theta;
}

Eigen::MatrixXd fold_in(const Subspace& subspace, const Eigen::MatrixXd& gamma,
                        const DocMatrix& heldout) {
  if (heldout.rows.rows() == 0) {
    throw DimensionError("fold_in: no held-out documents");
  }
  return recover_theta(project(subspace, heldout), gamma);
}

Eigen::VectorXd doc_log_likelihoods(const Eigen::MatrixXd& beta,
                                    const Eigen::MatrixXd& theta,
                                    const Corpus& heldout) {
  if (theta.rows() != heldout.num_docs()) {
    throw DimensionError("likelihood: theta rows != documents");
  }
  if (theta.cols() != beta.rows()) {
    throw DimensionError("likelihood: theta cols != topics");
  }
  if (beta.cols() != heldout.vocab_size()) {
    throw DimensionError("likelihood: beta cols != vocabulary size");
  }
  const Eigen::Index m = heldout.num_docs();
  Eigen::VectorXd loglik = Eigen::VectorXd::Zero(m);
  for (Eigen::Index d = 0; d < m; ++d) {
    const Eigen::RowVectorXd p = theta.row(d) * beta;
    for (CountMatrix::InnerIterator it(heldout.counts, d); it; ++it) {
      loglik(d) += static_cast<double>(it.value()) *
                   std::log(std::max(p(it.col()), kProbFloor));
    }
  }
  return loglik;
}

double perplexity(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& theta,
                  const Corpus& heldout) {
  const std::int64_t total =
      std::accumulate(heldout.doc_lengths.begin(), heldout.doc_lengths.end(),
                      std::int64_t{0});
  if (total == 0) throw ConfigError("perplexity: corpus has no tokens");
  const double loglik = doc_log_likelihoods(beta, theta, heldout).sum();
  return std::exp(-loglik / static_cast<double>(total));
}

TopicMatch match_topics(const Eigen::MatrixXd& beta_hat,
                        const Eigen::MatrixXd& beta_true) {
  const Eigen::Index k = beta_hat.rows();
  if (k > 10) {
    throw ConfigError(
        "match_topics: exact search limited to K <= 10; "
        "use match_topics_greedy");
  }
  const Eigen::MatrixXd dist = l1_table(beta_hat, beta_true);

  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_total = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      total += dist(i, perm[static_cast<std::size_t>(i)]);
    }
    if (total < best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return finish_match(dist, std::move(best), false);
}

TopicMatch match_topics_greedy(const Eigen::MatrixXd& beta_hat,
                               const Eigen::MatrixXd& beta_true) {
  const Eigen::Index k = beta_hat.rows();
  const Eigen::MatrixXd dist = l1_table(beta_hat, beta_true);

  std::vector<int> perm(static_cast<std::size_t>(k), -1);
  std::vector<bool> taken(static_cast<std::size_t>(k), false);
  for (Eigen::Index i = 0; i < k; ++i) {
    int pick = -1;
    double pick_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (dist(i, j) < pick_dist) {
        pick_dist = dist(i, j);
        pick = static_cast<int>(j);
      }
    }
    perm[static_cast<std::size_t>(i)] = pick;
    taken[static_cast<std::size_t>(pick)] = true;
  }
  return finish_match(dist, std::move(perm), true);
}

SeparabilityReport check_separability(const Eigen::MatrixXd& beta,
                                      double tol) {
  const Eigen::Index k = beta.rows();
  const Eigen::Index v = beta.cols();
  const double leak = tol * 1e-2;

  SeparabilityReport report;
  report.anchors.assign(static_cast<std::size_t>(k), {});
  for (Eigen::Index w = 0; w < v; ++w) {
    Eigen::Index owner = -1;
    bool clean = true;
    for (Eigen::Index t = 0; t < k; ++t) {
      if (beta(t, w) > tol) {
        if (owner >= 0) {
          clean = false;
          break;
        }
        owner = t;
      } else if (beta(t, w) > leak) {
        clean = false;
        break;
      }
    }
    if (clean && owner >= 0) {
      report.anchors[static_cast<std::size_t>(owner)].push_back(w);
    }
  }
  report.separable =
      std::all_of(report.anchors.begin(), report.anchors.end(),
                  [](const auto& list) { return !list.empty(); });
  return report;
}

double log_simplex_volume(const Eigen::MatrixXd& gamma) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gamma);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-300) {
    return -std::numeric_limits<double>::infinity();
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) sum += std::log(sv(i));
  return -sum;
}

TopicModel make_model(const Subspace& subspace, const FitResult& fit,
                      const SolverConfig& config) {
  TopicModel model;
  model.beta = recover_beta(subspace, fit.gamma_hat);
  model.subspace = subspace;
  model.gamma = fit.gamma_hat;
  model.config = config;
  if (!fit.trace.empty()) {
    const TraceRecord& last = fit.trace.back();
    model.diagnostics.r1 = last.r1;
    model.diagnostics.r2 = last.r2;
    model.diagnostics.objective = last.objective;
    model.diagnostics.sigma_min = last.sigma_min;
    model.diagnostics.iterations = last.iter;
  }
  model.diagnostics.converged = fit.converged;
  return model;
}

}  // namespace mvtm
