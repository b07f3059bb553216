#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace mvtm {

using CountMatrix = Eigen::SparseMatrix<std::int64_t, Eigen::RowMajor>;

/// Document-word count matrix with optional vocabulary metadata.
struct Corpus {
  CountMatrix counts;                       // M x V, nonnegative
  std::vector<std::string> vocab;           // empty, or exactly V tokens
  std::vector<std::int64_t> doc_lengths;    // row sums of counts

  Eigen::Index num_docs() const { return counts.rows(); }
  Eigen::Index vocab_size() const { return counts.cols(); }

  /// Validates invariants (nonnegative entries, row sums, vocab length) and
  /// fills doc_lengths.
  static Corpus from_counts(CountMatrix counts,
                            std::vector<std::string> vocab = {});
};

/// Row-stochastic M x V matrix of per-document word frequencies.
struct DocMatrix {
  Eigen::MatrixXd rows;

  Eigen::Index num_docs() const { return rows.rows(); }
  Eigen::Index vocab_size() const { return rows.cols(); }
};

/// Parameters of the synthetic LDA generator. Symmetric Dirichlet priors:
/// alpha for per-document topic proportions, eta for topic-word rows.
struct LdaConfig {
  int topics = 3;                        // K
  Eigen::Index vocab_size = 1200;        // V
  Eigen::Index num_docs = 1000;          // M
  std::int64_t doc_length = 1000;        // N_m, used when doc_lengths empty
  std::vector<std::int64_t> doc_lengths; // optional per-document N_m
  double alpha = 0.1;
  double eta = 0.1;
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the violated bound.
  void validate() const;
};

/// Generated corpus plus its ground truth.
struct SyntheticCorpus {
  Corpus corpus;
  Eigen::MatrixXd beta_true;   // K x V, rows sum to 1
  Eigen::MatrixXd theta_true;  // M x K, rows sum to 1
};

/// Samples a corpus from the LDA generative model. Deterministic for a given
/// config: topic rows and per-document draws use independent substreams of
/// the seed, so the result does not depend on the thread schedule.
SyntheticCorpus generate_lda_corpus(const LdaConfig& config);

/// Empirical word frequencies: row m of counts divided by N_m.
/// Throws ConfigError identifying any empty document.
DocMatrix normalize_counts(const Corpus& corpus);

/// Splits documents into (train, heldout) by a seeded shuffle. Both parts
/// keep their rows in original corpus order.
std::pair<Corpus, Corpus> split_holdout(const Corpus& corpus,
                                        Eigen::Index holdout_count,
                                        std::uint64_t seed);

/// Reads a UCI bag-of-words file (three header lines M, V, NNZ followed by
/// NNZ "docID wordID count" lines, 1-indexed). Duplicate entries accumulate.
Corpus load_bow(const std::string& path, const std::string& vocab_path = "");

/// Writes the UCI bag-of-words format: ASCII decimal integers, one value or
/// triplet per newline-terminated line, documents then words in ascending
/// order. load_bow(save_bow(c)) reproduces the counts exactly.
void save_bow(const Corpus& corpus, const std::string& path);

/// Reads a vocabulary file, one token per line.
std::vector<std::string> load_vocab(const std::string& path);

/// Writes one token per line.
void save_vocab(const std::vector<std::string>& vocab,
                const std::string& path);

}  // namespace mvtm
