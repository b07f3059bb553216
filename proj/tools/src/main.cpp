#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvtm/corpus.hpp"
#include "mvtm/error.hpp"
#include "mvtm/model.hpp"
#include "mvtm/model_io.hpp"
#include "mvtm/projection.hpp"
#include "mvtm/solver.hpp"
#include "mvtm/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitUsage = 64;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void write_manifest(const fs::path& path, json manifest, double wall_ms) {
  manifest["tool"] = "mvtm";
  manifest["version"] = mvtm::kVersion;
  manifest["wall_ms"] = wall_ms;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mvtm::IoError("cannot write manifest: " + path.string());
  out << manifest.dump(2) << '\n';
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

struct GenerateOpts {
  mvtm::LdaConfig config;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateOpts& opts) {
  const auto start = Clock::now();
  opts.config.validate();

  const mvtm::SyntheticCorpus synth = mvtm::generate_lda_corpus(opts.config);
  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  mvtm::save_bow(synth.corpus, (out / "counts.bow").string());
  mvtm::save_matrix_csv(synth.beta_true, (out / "beta_true.csv").string());
  mvtm::save_matrix_csv(synth.theta_true, (out / "theta_true.csv").string());

  json manifest;
  manifest["subcommand"] = "generate";
  manifest["params"] = {{"k", opts.config.topics},
                        {"vocab", opts.config.vocab_size},
                        {"docs", opts.config.num_docs},
                        {"doc_len", opts.config.doc_length},
                        {"alpha", opts.config.alpha},
                        {"eta", opts.config.eta},
                        {"seed", opts.config.seed}};
  manifest["outputs"] = {(out / "counts.bow").string(),
                         (out / "beta_true.csv").string(),
                         (out / "theta_true.csv").string()};
  write_manifest(out / "manifest.json", std::move(manifest),
                 elapsed_ms(start));
  return kExitOk;
}

struct FitOpts {
  std::string input;
  int k = 0;
  mvtm::SolverConfig config;
  bool radius_given = false;
  std::string output = "model.json";
  std::string trace_path;
  bool timing = false;
};

int cmd_fit(FitOpts& opts) {
  const auto start = Clock::now();

  const mvtm::Corpus corpus = mvtm::load_bow(opts.input);
  const mvtm::DocMatrix docs = mvtm::normalize_counts(corpus);
  const mvtm::Subspace subspace = mvtm::fit_subspace(docs, opts.k);
  const mvtm::ProjectedDocs projected = mvtm::project(subspace, docs);

  if (!opts.radius_given) {
    opts.config.radius = mvtm::recommended_radius(projected);
  }
  opts.config.validate();

  mvtm::FitResult fit = mvtm::run(projected, opts.config);
  const mvtm::TopicModel model =
      mvtm::make_model(subspace, fit, opts.config);
  mvtm::save_model(model, opts.output);

  if (!opts.trace_path.empty()) {
    if (!opts.timing) {
      for (mvtm::TraceRecord& rec : fit.trace) rec.ms = 0.0;
    }
    mvtm::write_trace_csv(fit.trace, opts.trace_path);
  }

  json manifest;
  manifest["subcommand"] = "fit";
  manifest["params"] = {{"k", opts.k},
                        {"rho", opts.config.rho},
                        {"mu", opts.config.mu},
                        {"radius", opts.config.radius},
                        {"max_iters", opts.config.max_iters},
                        {"tol_primal", opts.config.tol_primal},
                        {"tol_change", opts.config.tol_change}};
  manifest["inputs"] = {opts.input};
  manifest["outputs"] = json::array({opts.output});
  if (!opts.trace_path.empty()) manifest["outputs"].push_back(opts.trace_path);
  manifest["converged"] = fit.converged;
  manifest["iterations"] = model.diagnostics.iterations;
  write_manifest(opts.output + ".manifest.json", std::move(manifest),
                 elapsed_ms(start));

  if (!fit.converged) {
    std::cerr << "mvtm: fit stopped at max_iters without converging "
              << "(r1 = " << model.diagnostics.r1
              << ", r2 = " << model.diagnostics.r2 << ")\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

struct EvalOpts {
  std::string model_path;
  std::string heldout_path;
};

int cmd_eval(const EvalOpts& opts) {
  const mvtm::TopicModel model = mvtm::load_model(opts.model_path);
  const mvtm::Corpus heldout = mvtm::load_bow(opts.heldout_path);
  if (heldout.vocab_size() != model.vocab_size()) {
    throw mvtm::DimensionError(
        "eval: model vocabulary (V = " + std::to_string(model.vocab_size()) +
        ") does not match corpus (V = " +
        std::to_string(heldout.vocab_size()) + ")");
  }

  const mvtm::DocMatrix docs = mvtm::normalize_counts(heldout);
  const Eigen::MatrixXd theta =
      mvtm::fold_in(model.subspace, model.gamma, docs);
  const double ppl = mvtm::perplexity(model.beta, theta, heldout);

  Eigen::VectorXd loglik =
      mvtm::doc_log_likelihoods(model.beta, theta, heldout);
  std::vector<double> sorted(loglik.data(), loglik.data() + loglik.size());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1
                            ? sorted[mid]
                            : 0.5 * (sorted[mid - 1] + sorted[mid]);

  std::int64_t total_tokens = 0;
  for (const std::int64_t len : heldout.doc_lengths) total_tokens += len;

  json out;
  out["perplexity"] = ppl;
  out["heldout_docs"] = heldout.num_docs();
  out["total_tokens"] = total_tokens;
  out["per_doc_median_loglik"] = median;
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct TopicsOpts {
  std::string model_path;
  std::string vocab_path;
  int top = 10;
};

int cmd_topics(const TopicsOpts& opts) {
  const mvtm::TopicModel model = mvtm::load_model(opts.model_path);
  const Eigen::Index k = model.num_topics();
  const Eigen::Index v = model.vocab_size();

  std::vector<std::string> vocab;
  if (!opts.vocab_path.empty()) {
    vocab = mvtm::load_vocab(opts.vocab_path);
    if (static_cast<Eigen::Index>(vocab.size()) != v) {
      throw mvtm::DimensionError(
          "topics: vocabulary has " + std::to_string(vocab.size()) +
          " entries, model expects " + std::to_string(v));
    }
  }

  Eigen::Index top = opts.top;
  if (top > v) {
    std::cerr << "mvtm: --top " << top << " exceeds vocabulary size " << v
              << ", clamping\n";
    top = v;
  }

  // Per topic: word indices by descending weight, ties to the lower index.
  std::vector<std::vector<Eigen::Index>> order(static_cast<std::size_t>(k));
  for (Eigen::Index t = 0; t < k; ++t) {
    std::vector<Eigen::Index>& idx = order[static_cast<std::size_t>(t)];
    idx.resize(static_cast<std::size_t>(v));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::sort(idx.begin(), idx.end(),
              [&](Eigen::Index a, Eigen::Index b) {
                if (model.beta(t, a) != model.beta(t, b)) {
                  return model.beta(t, a) > model.beta(t, b);
                }
                return a < b;
              });
  }

  for (Eigen::Index t = 0; t < k; ++t) {
    if (t > 0) std::cout << '\t';
    std::cout << "topic_" << t + 1;
  }
  std::cout << '\n';
  for (Eigen::Index row = 0; row < top; ++row) {
    for (Eigen::Index t = 0; t < k; ++t) {
      if (t > 0) std::cout << '\t';
      const Eigen::Index w = order[static_cast<std::size_t>(t)]
                                  [static_cast<std::size_t>(row)];
      if (vocab.empty()) {
        std::cout << w;
      } else {
        std::cout << vocab[static_cast<std::size_t>(w)];
      }
    }
    std::cout << '\n';
  }
  return kExitOk;
}

struct MatchOpts {
  std::string model_path;
  std::string truth_path;
};

int cmd_match(const MatchOpts& opts) {
  const mvtm::TopicModel model = mvtm::load_model(opts.model_path);
  const Eigen::MatrixXd beta_true = mvtm::load_matrix_csv(opts.truth_path);
  const mvtm::TopicMatch match = mvtm::match_topics(model.beta, beta_true);

  json out;
  out["permutation"] = match.permutation;
  out["per_topic_l1"] = to_json(match.per_topic_l1);
  out["mean_l1"] = match.mean_l1;
  out["approximate"] = match.approximate;
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum volume topic modeling"};
  app.require_subcommand(1);

  GenerateOpts gen;
  CLI::App* gen_cmd =
      app.add_subcommand("generate", "Sample a synthetic LDA corpus");
  gen_cmd->add_option("--k", gen.config.topics, "Number of topics");
  gen_cmd->add_option("--vocab", gen.config.vocab_size, "Vocabulary size");
  gen_cmd->add_option("--docs", gen.config.num_docs, "Number of documents");
  gen_cmd->add_option("--doc-len", gen.config.doc_length,
                      "Tokens per document");
  gen_cmd->add_option("--alpha", gen.config.alpha,
                      "Dirichlet concentration for mixtures");
  gen_cmd->add_option("--eta", gen.config.eta,
                      "Dirichlet concentration for topics");
  gen_cmd->add_option("--seed", gen.config.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out_dir, "Output directory");

  FitOpts fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a topic model");
  fit_cmd->add_option("--input", fit.input, "Bag-of-words counts file")
      ->required();
  fit_cmd->add_option("--k", fit.k, "Number of topics")->required();
  fit_cmd->add_option("--rho", fit.config.rho, "ADMM penalty");
  fit_cmd->add_option("--mu", fit.config.mu, "Hinge weight");
  CLI::Option* radius_opt =
      fit_cmd->add_option("--radius", fit.config.radius,
                          "Vertex radius bound R (default: data-driven)");
  fit_cmd->add_option("--max-iters", fit.config.max_iters, "Iteration cap");
  fit_cmd->add_option("--tol-primal", fit.config.tol_primal,
                      "Primal residual tolerance");
  fit_cmd->add_option("--tol-change", fit.config.tol_change,
                      "Relative change tolerance");
  fit_cmd->add_option("--output", fit.output, "Model output path");
  fit_cmd->add_option("--trace", fit.trace_path, "Iteration trace CSV path");
  fit_cmd->add_flag("--timing", fit.timing,
                    "Record wall-clock ms in the trace");

  EvalOpts eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Held-out perplexity of a fitted model");
  eval_cmd->add_option("--model", eval.model_path, "Model JSON")->required();
  eval_cmd->add_option("--heldout", eval.heldout_path, "Held-out bow file")
      ->required();

  TopicsOpts topics;
  CLI::App* topics_cmd =
      app.add_subcommand("topics", "Print top words per topic");
  topics_cmd->add_option("--model", topics.model_path, "Model JSON")
      ->required();
  topics_cmd->add_option("--vocab", topics.vocab_path,
                         "Vocabulary file (one token per line)");
  topics_cmd->add_option("--top", topics.top, "Words per topic")
      ->check(CLI::PositiveNumber);

  MatchOpts match;
  CLI::App* match_cmd = app.add_subcommand(
      "match", "Align fitted topics with a reference topic matrix");
  match_cmd->add_option("--model", match.model_path, "Model JSON")
      ->required();
  match_cmd->add_option("--truth", match.truth_path, "Reference topics CSV")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_generate(gen);
    if (*fit_cmd) {
      fit.radius_given = radius_opt->count() > 0;
      return cmd_fit(fit);
    }
    if (*eval_cmd) return cmd_eval(eval);
    if (*topics_cmd) return cmd_topics(topics);
    if (*match_cmd) return cmd_match(match);
  } catch (const mvtm::ConfigError& e) {
    std::cerr << "mvtm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mvtm: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
