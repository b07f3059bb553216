#include "mvtm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mvtm/error.hpp"
#include "mvtm/parallel.hpp"
#include "mvtm/random.hpp"

namespace mvtm {

namespace {

constexpr std::uint64_t kTopicStream = 0x746f706963;  // "topic"
constexpr std::uint64_t kDocStream = 0x646f63;        // "doc"
constexpr std::uint64_t kSplitStream = 0x73706c6974;  // "split"

// Index of the first cumulative weight exceeding u (cdf is nondecreasing,
// cdf.back() == total mass).
Eigen::Index sample_cdf(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto idx = static_cast<Eigen::Index>(it - cdf.begin());
  return std::min<Eigen::Index>(idx, static_cast<Eigen::Index>(cdf.size()) - 1);
}

}  // namespace

Corpus Corpus::from_counts(CountMatrix counts, std::vector<std::string> vocab) {
  counts.makeCompressed();
  if (!vocab.empty() &&
      static_cast<Eigen::Index>(vocab.size()) != counts.cols()) {
    throw DimensionError("corpus: vocab has " + std::to_string(vocab.size()) +
                         " tokens but counts has " +
                         std::to_string(counts.cols()) + " columns");
  }
  Corpus corpus;
  corpus.doc_lengths.assign(counts.rows(), 0);
  for (Eigen::Index d = 0; d < counts.rows(); ++d) {
    for (CountMatrix::InnerIterator it(counts, d); it; ++it) {
      if (it.value() < 0) {
        throw ConfigError("corpus: negative count at document " +
                          std::to_string(d) + ", word " +
                          std::to_string(it.col()));
      }
      corpus.doc_lengths[d] += it.value();
    }
  }
  corpus.counts = std::move(counts);
  corpus.vocab = std::move(vocab);
  return corpus;
}

void LdaConfig::validate() const {
  if (topics < 2) {
    throw ConfigError("lda config: topics must be >= 2, got " +
                      std::to_string(topics));
  }
  if (vocab_size <= topics) {
    throw ConfigError("lda config: vocab_size must exceed topics, got " +
                      std::to_string(vocab_size));
  }
  if (num_docs < topics) {
    throw ConfigError("lda config: num_docs must be >= topics, got " +
                      std::to_string(num_docs));
  }
  if (!doc_lengths.empty() &&
      static_cast<Eigen::Index>(doc_lengths.size()) != num_docs) {
    throw ConfigError("lda config: doc_lengths has " +
                      std::to_string(doc_lengths.size()) +
                      " entries for " + std::to_string(num_docs) + " docs");
  }
  if (doc_lengths.empty()) {
    if (doc_length < 1) {
      throw ConfigError("lda config: doc_length must be >= 1, got " +
                        std::to_string(doc_length));
    }
  } else {
    for (std::size_t i = 0; i < doc_lengths.size(); ++i) {
      if (doc_lengths[i] < 1) {
        throw ConfigError("lda config: doc_lengths[" + std::to_string(i) +
                          "] must be >= 1, got " +
                          std::to_string(doc_lengths[i]));
      }
    }
  }
  if (!(alpha > 0.0)) {
    throw ConfigError("lda config: alpha must be > 0, got " +
                      std::to_string(alpha));
  }
  if (!(eta > 0.0)) {
    throw ConfigError("lda config: eta must be > 0, got " +
                      std::to_string(eta));
  }
}

SyntheticCorpus generate_lda_corpus(const LdaConfig& config) {
  config.validate();
  const int k = config.topics;
  const Eigen::Index v = config.vocab_size;
  const Eigen::Index m = config.num_docs;

  SyntheticCorpus result;
  result.beta_true.resize(k, v);
  for (int topic = 0; topic < k; ++topic) {
    Rng rng(substream_seed(config.seed, kTopicStream, topic));
    result.beta_true.row(topic) = rng.dirichlet(config.eta, v).transpose();
  }

  // Per-topic word CDFs, shared read-only across document workers.
  std::vector<std::vector<double>> word_cdf(k, std::vector<double>(v));
  for (int topic = 0; topic < k; ++topic) {
    double acc = 0.0;
    for (Eigen::Index w = 0; w < v; ++w) {
      acc += result.beta_true(topic, w);
      word_cdf[topic][w] = acc;
    }
  }

  result.theta_true.resize(m, k);
  std::vector<std::vector<std::pair<Eigen::Index, std::int64_t>>> doc_counts(m);

  parallel_for(m, [&](std::int64_t d) {
    Rng rng(substream_seed(config.seed, kDocStream, d));
    const Eigen::VectorXd theta = rng.dirichlet(config.alpha, k);
    result.theta_true.row(d) = theta.transpose();

    std::vector<double> topic_cdf(k);
    double acc = 0.0;
    for (int t = 0; t < k; ++t) {
      acc += theta[t];
      topic_cdf[t] = acc;
    }

    const std::int64_t n_words =
        config.doc_lengths.empty() ? config.doc_length : config.doc_lengths[d];
    std::vector<std::int64_t> dense(v, 0);
    for (std::int64_t i = 0; i < n_words; ++i) {
      const auto z =
          static_cast<int>(sample_cdf(topic_cdf, rng.uniform() * topic_cdf.back()));
      const Eigen::Index w =
          sample_cdf(word_cdf[z], rng.uniform() * word_cdf[z].back());
      ++dense[w];
    }
    auto& sparse = doc_counts[d];
    for (Eigen::Index w = 0; w < v; ++w) {
      if (dense[w] > 0) sparse.emplace_back(w, dense[w]);
    }
  });

  // Serial assembly in document order keeps the sparse layout deterministic.
  CountMatrix counts(m, v);
  std::vector<Eigen::Triplet<std::int64_t>> triplets;
  std::size_t nnz = 0;
  for (const auto& doc : doc_counts) nnz += doc.size();
  triplets.reserve(nnz);
  for (Eigen::Index d = 0; d < m; ++d) {
    for (const auto& [w, c] : doc_counts[d]) {
      triplets.emplace_back(static_cast<int>(d), static_cast<int>(w), c);
    }
  }
  counts.setFromTriplets(triplets.begin(), triplets.end());
  result.corpus = Corpus::from_counts(std::move(counts));
  return result;
}

DocMatrix normalize_counts(const Corpus& corpus) {
  const Eigen::Index m = corpus.num_docs();
  const Eigen::Index v = corpus.vocab_size();
  DocMatrix docs;
  docs.rows = Eigen::MatrixXd::Zero(m, v);
  for (Eigen::Index d = 0; d < m; ++d) {
    const std::int64_t total = corpus.doc_lengths[d];
    if (total <= 0) {
      throw ConfigError("normalize_counts: document " + std::to_string(d) +
                        " is empty");
    }
    const double inv = 1.0 / static_cast<double>(total);
    for (CountMatrix::InnerIterator it(corpus.counts, d); it; ++it) {
      docs.rows(d, it.col()) = static_cast<double>(it.value()) * inv;
    }
  }
  return docs;
}

std::pair<Corpus, Corpus> split_holdout(const Corpus& corpus,
                                        Eigen::Index holdout_count,
                                        std::uint64_t seed) {
  const Eigen::Index m = corpus.num_docs();
  if (holdout_count <= 0 || holdout_count >= m) {
    throw ConfigError("split_holdout: holdout_count must be in (0, " +
                      std::to_string(m) + "), got " +
                      std::to_string(holdout_count));
  }

  // Fisher-Yates on the index vector; the first holdout_count entries are the
  // held-out rows.
  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(substream_seed(seed, kSplitStream, 0));
  for (Eigen::Index i = 0; i < m - 1; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.uniform_index(m - i));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> heldout_mask(m, false);
  for (Eigen::Index i = 0; i < holdout_count; ++i) heldout_mask[order[i]] = true;

  auto take = [&](bool held) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index d = 0; d < m; ++d) {
      if (heldout_mask[d] == held) rows.push_back(d);
    }
    CountMatrix part(static_cast<Eigen::Index>(rows.size()),
                     corpus.vocab_size());
    std::vector<Eigen::Triplet<std::int64_t>> triplets;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (CountMatrix::InnerIterator it(corpus.counts, rows[r]); it; ++it) {
        triplets.emplace_back(static_cast<int>(r), static_cast<int>(it.col()),
                              it.value());
      }
    }
    part.setFromTriplets(triplets.begin(), triplets.end());
    return Corpus::from_counts(std::move(part), corpus.vocab);
  };
  return {take(false), take(true)};
}

}  // namespace mvtm
