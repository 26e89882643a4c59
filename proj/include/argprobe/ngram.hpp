#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace argprobe {

inline constexpr std::string_view kUnknownToken = "<unk>";
inline constexpr std::string_view kBoundaryToken = "<s>";
/// Matches the 50K-word vocabulary of the reference neural LM.
inline constexpr std::size_t kDefaultVocabSize = 50000;

using TokenFrequencies = std::unordered_map<std::string, std::uint64_t>;

/// Word vocabulary plus the reserved unknown and boundary tokens.
/// Ids: 0 = <unk>, 1 = <s>, then words by decreasing training frequency (ties lexicographic).
class Vocabulary {
 public:
  static constexpr std::uint32_t kUnk = 0;
  static constexpr std::uint32_t kBos = 1;

  Vocabulary();
  /// Top `size` tokens of `freqs`.
  static Vocabulary select(const TokenFrequencies& freqs, std::size_t size);
  /// Words in id order (ids 2..), as stored in a model file.
  static Vocabulary from_words(std::vector<std::string> words);

  std::uint32_t id(std::string_view token) const;
  const std::string& token(std::uint32_t id) const { return tokens_[id]; }
  /// Words + <unk> + <s>.
  std::size_t size() const { return tokens_.size(); }
  std::size_t word_count() const { return tokens_.size() - 2; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// Exact counts over vocabulary ids. Merging is associative and commutative, so any
/// partition of the corpus yields the same totals.
struct NgramCounts {
  std::vector<std::uint64_t> unigrams;  // indexed by id; <s> is never counted
  std::vector<std::uint64_t> contexts;  // number of bigrams whose first id is the index
  std::unordered_map<std::uint64_t, std::uint64_t> bigrams;  // (context << 32 | word)
  std::uint64_t total_tokens = 0;

  explicit NgramCounts(std::size_t vocab_size = 0) : unigrams(vocab_size), contexts(vocab_size) {}
  void merge(const NgramCounts& other);
  bool operator==(const NgramCounts&) const = default;
};

inline std::uint64_t bigram_key(std::uint32_t context, std::uint32_t word) {
  return (static_cast<std::uint64_t>(context) << 32) | word;
}

/// Raw token frequencies of corpus sentences (one sentence per element).
TokenFrequencies count_frequencies(std::span<const std::string> sentences);
TokenFrequencies count_frequencies_serial(std::span<const std::string> sentences);

/// Unigram and (order 2) bigram counts; each sentence starts from the <s> context and
/// out-of-vocabulary tokens count as <unk>.
NgramCounts count_ngrams(std::span<const std::string> sentences, const Vocabulary& vocab, int order);
NgramCounts count_ngrams_serial(std::span<const std::string> sentences, const Vocabulary& vocab,
                                int order);

struct TrainOptions {
  int order = 2;
  std::size_t vocab_size = kDefaultVocabSize;
  bool parallel = true;
  /// Sentences read per batch when streaming a corpus file.
  std::size_t batch_sentences = 1 << 16;
};

/// Unigram (maximum likelihood) or Laplace-smoothed bigram model.
class NgramModel {
 public:
  NgramModel(int order, std::size_t vocab_size, Vocabulary vocab, NgramCounts counts);

  int order() const { return order_; }
  std::size_t vocab_size_limit() const { return vocab_size_; }
  const Vocabulary& vocab() const { return vocab_; }
  const NgramCounts& counts() const { return counts_; }
  std::uint64_t total_tokens() const { return counts_.total_tokens; }

  std::uint64_t unigram_count(std::string_view token) const;
  std::uint64_t bigram_count(std::string_view context, std::string_view word) const;

  /// count(w) / total after <unk> mapping; natural log. Throws for zero-count tokens.
  double unigram_log_prob(std::string_view token) const;
  /// (count(c,w) + 1) / (count(c) + |vocab|), where |vocab| counts <unk> and <s>.
  double bigram_log_prob(std::string_view context, std::string_view word) const;
  double bigram_log_prob(std::uint32_t context, std::uint32_t word) const;

  bool operator==(const NgramModel& other) const;

 private:
  int order_;
  std::size_t vocab_size_;
  Vocabulary vocab_;
  NgramCounts counts_;
};

/// Each element of `sentences` is one corpus line. Throws on an empty corpus.
NgramModel train_ngram(std::span<const std::string> sentences, const TrainOptions& options);
/// Streams the file twice (vocabulary pass, counting pass) in batches.
NgramModel train_ngram_file(const std::filesystem::path& corpus, const TrainOptions& options);

/// Chain-rule log probability (natural log). Order 2 starts from the <s> context.
/// Throws on an empty token sequence.
double score_chain(const NgramModel& model, std::span<const std::string> tokens);

struct ScoreOptions {
  bool include_punctuation = true;
};

/// tokenize + optional punctuation removal + score_chain.
double score_sentence(const NgramModel& model, std::string_view text, const ScoreOptions& options = {});

/// Text serialization with embedded order, vocabulary limit and exact counts.
void save_model(std::ostream& out, const NgramModel& model);
NgramModel load_model(std::istream& in);
void save_model_file(const std::filesystem::path& path, const NgramModel& model);
NgramModel load_model_file(const std::filesystem::path& path);

}  // namespace argprobe
