#pragma once

#include <vector>

#include <Eigen/Core>

#include "mvtm/corpus.hpp"
#include "mvtm/projection.hpp"
#include "mvtm/solver.hpp"

namespace mvtm {

/// Final-iterate health of a fit, echoed into the serialized model.
struct Diagnostics {
  double r1 = 0.0;
  double r2 = 0.0;
  double objective = 0.0;
  double sigma_min = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// A fitted topic model: row-stochastic topics plus everything needed to
/// fold in new documents.
struct TopicModel {
  Eigen::MatrixXd beta;   // K x V, rows on the simplex
  Subspace subspace;
  Eigen::MatrixXd gamma;  // K x K
  SolverConfig config;
  Diagnostics diagnostics;

  Eigen::Index num_topics() const { return beta.rows(); }
  Eigen::Index vocab_size() const { return beta.cols(); }
};

/// Best-permutation alignment between a fitted and a reference topic set.
/// permutation[k] is the reference row matched to fitted row k;
/// per_topic_l1[k] is the L1 distance of that pair.
struct TopicMatch {
  std::vector<int> permutation;
  Eigen::VectorXd per_topic_l1;
  double mean_l1 = 0.0;
  bool approximate = false;  // true when produced by the greedy fallback
};

/// Anchor-word audit: anchors[k] lists words carried (almost) exclusively
/// by topic k.
struct SeparabilityReport {
  std::vector<std::vector<Eigen::Index>> anchors;
  bool separable = false;
};

/// Rows of gamma^-1 mapped back to word space and projected onto the
/// simplex. Throws RankError when |det gamma| <= 1e-12.
Eigen::MatrixXd recover_beta(const Subspace& subspace,
                             const Eigen::MatrixXd& gamma);

/// theta = W~ gamma with rows projected onto the simplex.
Eigen::MatrixXd recover_theta(const ProjectedDocs& projected,
                              const Eigen::MatrixXd& gamma);

/// Held-out mixtures: project the documents with the trained subspace and
/// apply the gamma map.
Eigen::MatrixXd fold_in(const Subspace& subspace, const Eigen::MatrixXd& gamma,
                        const DocMatrix& heldout);

/// Total log-likelihood of each document's counts under p_d = theta_d beta,
/// word probabilities clamped below at 1e-12.
Eigen::VectorXd doc_log_likelihoods(const Eigen::MatrixXd& beta,
                                    const Eigen::MatrixXd& theta,
                                    const Corpus& heldout);

/// exp(- total log-likelihood / total tokens). Throws ConfigError on an
/// empty corpus.
double perplexity(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& theta,
                  const Corpus& heldout);

/// Exact best-permutation match by exhaustive search; ties resolved to the
/// lexicographically smallest permutation. K > 10 throws, pointing at
/// match_topics_greedy.
TopicMatch match_topics(const Eigen::MatrixXd& beta_hat,
                        const Eigen::MatrixXd& beta_true);

/// Nearest-unmatched assignment in fitted-row order; flagged approximate.
TopicMatch match_topics_greedy(const Eigen::MatrixXd& beta_hat,
                               const Eigen::MatrixXd& beta_true);

/// Word w anchors topic k when beta(k, w) > tol while every other topic
/// stays below tol / 100.
SeparabilityReport check_separability(const Eigen::MatrixXd& beta,
                                      double tol = 1e-3);

/// -1/2 log det(gamma gamma^T), the volume proxy; -inf for singular gamma.
double log_simplex_volume(const Eigen::MatrixXd& gamma);

/// Assembles the serializable model from a finished fit.
TopicModel make_model(const Subspace& subspace, const FitResult& fit,
                      const SolverConfig& config);

}  // namespace mvtm
