#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "mvtm/corpus.hpp"
#include "mvtm/error.hpp"

namespace mvtm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Parses exactly `expected` whitespace-separated integers from a line.
std::vector<std::int64_t> parse_ints(std::string_view line, int expected,
                                     std::size_t line_no) {
  std::vector<std::int64_t> values;
  std::string_view rest = trim(line);
  while (!rest.empty()) {
    std::size_t end = 0;
    while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t') ++end;
    const std::string_view token = rest.substr(0, end);
    std::int64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ParseError("bow line " + std::to_string(line_no) +
                       ": expected integer, got '" + std::string(token) + "'");
    }
    values.push_back(value);
    rest = trim(rest.substr(end));
  }
  if (static_cast<int>(values.size()) != expected) {
    throw ParseError("bow line " + std::to_string(line_no) + ": expected " +
                     std::to_string(expected) + " value(s), got " +
                     std::to_string(values.size()));
  }
  return values;
}

}  // namespace

Corpus load_bow(const std::string& path, const std::string& vocab_path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bag-of-words file: " + path);

  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      return true;
    }
    return false;
  };

  auto read_header = [&](const char* name) {
    if (!next_line()) {
      throw ParseError("bow: missing " + std::string(name) + " header line");
    }
    const auto values = parse_ints(line, 1, line_no);
    if (values[0] < 0) {
      throw ParseError("bow line " + std::to_string(line_no) + ": " +
                       std::string(name) + " must be nonnegative");
    }
    return values[0];
  };

  const std::int64_t num_docs = read_header("document count");
  const std::int64_t num_words = read_header("vocabulary size");
  const std::int64_t declared_nnz = read_header("nonzero count");

  CountMatrix counts(num_docs, num_words);
  std::vector<Eigen::Triplet<std::int64_t>> triplets;
  triplets.reserve(static_cast<std::size_t>(declared_nnz));
  std::int64_t seen = 0;
  while (seen < declared_nnz) {
    if (!next_line()) {
      throw ParseError("bow: header declares " + std::to_string(declared_nnz) +
                       " entries but file ends after " + std::to_string(seen));
    }
    if (trim(line).empty()) continue;
    const auto values = parse_ints(line, 3, line_no);
    const std::int64_t doc = values[0], word = values[1], count = values[2];
    if (doc < 1 || doc > num_docs) {
      throw ParseError("bow line " + std::to_string(line_no) +
                       ": document id " + std::to_string(doc) +
                       " outside declared range [1, " +
                       std::to_string(num_docs) + "]");
    }
    if (word < 1 || word > num_words) {
      throw ParseError("bow line " + std::to_string(line_no) + ": word id " +
                       std::to_string(word) + " outside declared range [1, " +
                       std::to_string(num_words) + "]");
    }
    if (count < 0) {
      throw ParseError("bow line " + std::to_string(line_no) +
                       ": negative count");
    }
    triplets.emplace_back(static_cast<int>(doc - 1),
                          static_cast<int>(word - 1), count);
    ++seen;
  }
  while (next_line()) {
    if (!trim(line).empty()) {
      throw ParseError("bow line " + std::to_string(line_no) +
                       ": data beyond the declared " +
                       std::to_string(declared_nnz) + " entries");
    }
  }
  counts.setFromTriplets(triplets.begin(), triplets.end());

  std::vector<std::string> vocab;
  if (!vocab_path.empty()) {
    vocab = load_vocab(vocab_path);
    if (static_cast<std::int64_t>(vocab.size()) != num_words) {
      throw DimensionError("bow: vocabulary file has " +
                           std::to_string(vocab.size()) + " tokens, header " +
                           "declares " + std::to_string(num_words));
    }
  }
  return Corpus::from_counts(std::move(counts), std::move(vocab));
}

void save_bow(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);

  std::int64_t nnz = 0;
  for (Eigen::Index d = 0; d < corpus.num_docs(); ++d) {
    for (CountMatrix::InnerIterator it(corpus.counts, d); it; ++it) {
      if (it.value() != 0) ++nnz;
    }
  }
  out << corpus.num_docs() << '\n'
      << corpus.vocab_size() << '\n'
      << nnz << '\n';
  for (Eigen::Index d = 0; d < corpus.num_docs(); ++d) {
    for (CountMatrix::InnerIterator it(corpus.counts, d); it; ++it) {
      if (it.value() == 0) continue;
      out << (d + 1) << ' ' << (it.col() + 1) << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<std::string> load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.push_back(line);
  }
  return vocab;
}

void save_vocab(const std::vector<std::string>& vocab,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& token : vocab) out << token << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace mvtm
