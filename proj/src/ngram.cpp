#include "argprobe/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "argprobe/error.hpp"
#include "argprobe/tokenize.hpp"

namespace argprobe {

Vocabulary::Vocabulary() : tokens_{std::string(kUnknownToken), std::string(kBoundaryToken)} {
  ids_.emplace(tokens_[kUnk], kUnk);
  ids_.emplace(tokens_[kBos], kBos);
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  Vocabulary v;
  v.tokens_.reserve(words.size() + 2);
  for (auto& w : words) {
    auto id = static_cast<std::uint32_t>(v.tokens_.size());
    if (!v.ids_.emplace(w, id).second) throw SchemaError("duplicate vocabulary token '" + w + "'");
    v.tokens_.push_back(std::move(w));
  }
  return v;
}

Vocabulary Vocabulary::select(const TokenFrequencies& freqs, std::size_t size) {
  std::vector<std::pair<std::string_view, std::uint64_t>> entries;
  entries.reserve(freqs.size());
  for (const auto& [tok, n] : freqs) {
    if (tok == kUnknownToken || tok == kBoundaryToken) continue;
    entries.emplace_back(tok, n);
  }
  auto by_freq = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  std::size_t keep = std::min(size, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    entries.end(), by_freq);
  std::vector<std::string> words;
  words.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) words.emplace_back(entries[i].first);
  return from_words(std::move(words));
}

std::uint32_t Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

void NgramCounts::merge(const NgramCounts& other) {
  if (unigrams.size() < other.unigrams.size()) {
    unigrams.resize(other.unigrams.size());
    contexts.resize(other.contexts.size());
  }
  for (std::size_t i = 0; i < other.unigrams.size(); ++i) {
    unigrams[i] += other.unigrams[i];
    contexts[i] += other.contexts[i];
  }
  for (const auto& [key, n] : other.bigrams) bigrams[key] += n;
  total_tokens += other.total_tokens;
}

namespace {

void count_sentence_frequencies(std::string_view sentence, TokenFrequencies& freqs) {
  for (auto& tok : tokenize(sentence)) ++freqs[std::move(tok)];
}

void count_sentence(std::string_view sentence, const Vocabulary& vocab, int order,
                    NgramCounts& counts) {
  std::uint32_t prev = Vocabulary::kBos;
  for (const auto& tok : tokenize(sentence)) {
    std::uint32_t id = vocab.id(tok);
    ++counts.unigrams[id];
    ++counts.total_tokens;
    if (order == 2) {
      ++counts.bigrams[bigram_key(prev, id)];
      ++counts.contexts[prev];
    }
    prev = id;
  }
}

void check_order(int order) {
  if (order != 1 && order != 2) throw Error("n-gram order must be 1 or 2, got " + std::to_string(order));
}

}  // namespace

TokenFrequencies count_frequencies_serial(std::span<const std::string> sentences) {
  TokenFrequencies freqs;
  for (const auto& s : sentences) count_sentence_frequencies(s, freqs);
  return freqs;
}

TokenFrequencies count_frequencies(std::span<const std::string> sentences) {
  TokenFrequencies merged;
  const auto n = static_cast<std::ptrdiff_t>(sentences.size());
#pragma omp parallel
  {
    TokenFrequencies local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) count_sentence_frequencies(sentences[i], local);
#pragma omp critical(argprobe_freq_merge)
    for (const auto& [tok, c] : local) merged[tok] += c;
  }
  return merged;
}

NgramCounts count_ngrams_serial(std::span<const std::string> sentences, const Vocabulary& vocab,
                                int order) {
  check_order(order);
  NgramCounts counts(vocab.size());
  for (const auto& s : sentences) count_sentence(s, vocab, order, counts);
  return counts;
}

NgramCounts count_ngrams(std::span<const std::string> sentences, const Vocabulary& vocab, int order) {
  check_order(order);
  NgramCounts merged(vocab.size());
  const auto n = static_cast<std::ptrdiff_t>(sentences.size());
#pragma omp parallel
  {
    NgramCounts local(vocab.size());
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) count_sentence(sentences[i], vocab, order, local);
#pragma omp critical(argprobe_count_merge)
    merged.merge(local);
  }
  return merged;
}

NgramModel::NgramModel(int order, std::size_t vocab_size, Vocabulary vocab, NgramCounts counts)
    : order_(order), vocab_size_(vocab_size), vocab_(std::move(vocab)), counts_(std::move(counts)) {
  check_order(order_);
  if (vocab_size_ < 1) throw Error("vocabulary size must be at least 1");
  if (vocab_.word_count() > vocab_size_) throw SchemaError("vocabulary exceeds its size limit");
  if (counts_.unigrams.size() != vocab_.size() || counts_.contexts.size() != vocab_.size()) {
    throw SchemaError("count tables do not match the vocabulary");
  }
}

std::uint64_t NgramModel::unigram_count(std::string_view token) const {
  return counts_.unigrams[vocab_.id(token)];
}

std::uint64_t NgramModel::bigram_count(std::string_view context, std::string_view word) const {
  auto it = counts_.bigrams.find(bigram_key(vocab_.id(context), vocab_.id(word)));
  return it == counts_.bigrams.end() ? 0 : it->second;
}

double NgramModel::unigram_log_prob(std::string_view token) const {
  std::uint64_t n = counts_.unigrams[vocab_.id(token)];
  if (n == 0) {
    throw Error("token '" + std::string(token) + "' has zero probability under the unigram model");
  }
  return std::log(static_cast<double>(n) / static_cast<double>(counts_.total_tokens));
}

double NgramModel::bigram_log_prob(std::uint32_t context, std::uint32_t word) const {
  auto it = counts_.bigrams.find(bigram_key(context, word));
  double joint = it == counts_.bigrams.end() ? 0.0 : static_cast<double>(it->second);
  double denom = static_cast<double>(counts_.contexts[context]) + static_cast<double>(vocab_.size());
  return std::log((joint + 1.0) / denom);
}

double NgramModel::bigram_log_prob(std::string_view context, std::string_view word) const {
  return bigram_log_prob(vocab_.id(context), vocab_.id(word));
}

bool NgramModel::operator==(const NgramModel& other) const {
  return order_ == other.order_ && vocab_size_ == other.vocab_size_ && vocab_ == other.vocab_ &&
         counts_ == other.counts_;
}

namespace {

NgramModel finish_training(const TokenFrequencies& freqs, const TrainOptions& options,
                           const std::function<NgramCounts(const Vocabulary&)>& count) {
  check_order(options.order);
  if (options.vocab_size < 1) throw Error("vocabulary size must be at least 1");
  if (freqs.empty()) throw Error("cannot train on an empty corpus");
  auto vocab = Vocabulary::select(freqs, options.vocab_size);
  auto counts = count(vocab);
  return NgramModel(options.order, options.vocab_size, std::move(vocab), std::move(counts));
}

}  // namespace

NgramModel train_ngram(std::span<const std::string> sentences, const TrainOptions& options) {
  auto freqs = options.parallel ? count_frequencies(sentences) : count_frequencies_serial(sentences);
  return finish_training(freqs, options, [&](const Vocabulary& vocab) {
    return options.parallel ? count_ngrams(sentences, vocab, options.order)
                            : count_ngrams_serial(sentences, vocab, options.order);
  });
}

namespace {

template <typename Fn>
void for_each_batch(const std::filesystem::path& path, std::size_t batch_size, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  std::vector<std::string> batch;
  batch.reserve(batch_size);
  std::string line;
  while (std::getline(in, line)) {
    batch.push_back(std::move(line));
    if (batch.size() >= batch_size) {
      fn(std::span<const std::string>(batch));
      batch.clear();
    }
  }
  if (!batch.empty()) fn(std::span<const std::string>(batch));
}

}  // namespace

NgramModel train_ngram_file(const std::filesystem::path& corpus, const TrainOptions& options) {
  const std::size_t batch = std::max<std::size_t>(1, options.batch_sentences);
  TokenFrequencies freqs;
  for_each_batch(corpus, batch, [&](std::span<const std::string> lines) {
    auto part = options.parallel ? count_frequencies(lines) : count_frequencies_serial(lines);
    for (const auto& [tok, n] : part) freqs[tok] += n;
  });
  return finish_training(freqs, options, [&](const Vocabulary& vocab) {
    NgramCounts total(vocab.size());
    for_each_batch(corpus, batch, [&](std::span<const std::string> lines) {
      total.merge(options.parallel ? count_ngrams(lines, vocab, options.order)
                                   : count_ngrams_serial(lines, vocab, options.order));
    });
    return total;
  });
}

double score_chain(const NgramModel& model, std::span<const std::string> tokens) {
  if (tokens.empty()) throw Error("cannot score an empty token sequence");
  double total = 0.0;
  if (model.order() == 1) {
    for (const auto& tok : tokens) total += model.unigram_log_prob(tok);
    return total;
  }
  std::uint32_t prev = Vocabulary::kBos;
  for (const auto& tok : tokens) {
    std::uint32_t id = model.vocab().id(tok);
    total += model.bigram_log_prob(prev, id);
    prev = id;
  }
  return total;
}

double score_sentence(const NgramModel& model, std::string_view text, const ScoreOptions& options) {
  auto tokens = tokenize(text);
  if (!options.include_punctuation) {
    std::erase_if(tokens, [](const std::string& t) { return is_punctuation_token(t); });
  }
  return score_chain(model, tokens);
}

namespace {
constexpr std::string_view kModelMagic = "argprobe-ngram 1";
}

void save_model(std::ostream& out, const NgramModel& model) {
  const auto& vocab = model.vocab();
  const auto& counts = model.counts();
  out << kModelMagic << '\n';
  out << "order " << model.order() << '\n';
  out << "vocab_size " << model.vocab_size_limit() << '\n';
  out << "total_tokens " << counts.total_tokens << '\n';
  out << "tokens " << vocab.size() << '\n';
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    out << vocab.token(id) << '\t' << counts.unigrams[id] << '\t' << counts.contexts[id] << '\n';
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bigrams(counts.bigrams.begin(),
                                                               counts.bigrams.end());
  std::sort(bigrams.begin(), bigrams.end());
  out << "bigrams " << bigrams.size() << '\n';
  for (const auto& [key, n] : bigrams) {
    out << vocab.token(static_cast<std::uint32_t>(key >> 32)) << '\t'
        << vocab.token(static_cast<std::uint32_t>(key & 0xffffffffu)) << '\t' << n << '\n';
  }
  out << "end\n";
}

namespace {

std::uint64_t expect_field(std::istream& in, std::string_view name) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("model file truncated before '" + std::string(name) + "'");
  std::istringstream ss(line);
  std::string key;
  std::uint64_t value = 0;
  if (!(ss >> key >> value) || key != name) {
    throw SchemaError("model file: expected '" + std::string(name) + "', got '" + line + "'");
  }
  return value;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw SchemaError("model file: bad count '" + s + "'");
  return v;
}

}  // namespace

NgramModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) throw SchemaError("not an argprobe n-gram model file");
  int order = static_cast<int>(expect_field(in, "order"));
  std::size_t vocab_size = expect_field(in, "vocab_size");
  std::uint64_t total = expect_field(in, "total_tokens");
  std::size_t n_tokens = expect_field(in, "tokens");
  if (n_tokens < 2) throw SchemaError("model file: missing reserved tokens");

  std::vector<std::string> words;
  std::vector<std::uint64_t> unigrams(n_tokens), contexts(n_tokens);
  for (std::size_t id = 0; id < n_tokens; ++id) {
    if (!std::getline(in, line)) throw SchemaError("model file truncated in token table");
    auto parts = split_tabs(line);
    if (parts.size() != 3) throw SchemaError("model file: bad token line '" + line + "'");
    if (id == 0 && parts[0] != kUnknownToken) throw SchemaError("model file: token 0 must be <unk>");
    if (id == 1 && parts[0] != kBoundaryToken) throw SchemaError("model file: token 1 must be <s>");
    if (id >= 2) words.push_back(parts[0]);
    unigrams[id] = parse_count(parts[1]);
    contexts[id] = parse_count(parts[2]);
  }
  auto vocab = Vocabulary::from_words(std::move(words));
  NgramCounts counts(vocab.size());
  counts.unigrams = std::move(unigrams);
  counts.contexts = std::move(contexts);
  counts.total_tokens = total;

  std::size_t n_bigrams = expect_field(in, "bigrams");
  for (std::size_t i = 0; i < n_bigrams; ++i) {
    if (!std::getline(in, line)) throw SchemaError("model file truncated in bigram table");
    auto parts = split_tabs(line);
    if (parts.size() != 3) throw SchemaError("model file: bad bigram line '" + line + "'");
    auto c = vocab.id(parts[0]), w = vocab.id(parts[1]);
    if ((c == Vocabulary::kUnk && parts[0] != kUnknownToken) ||
        (w == Vocabulary::kUnk && parts[1] != kUnknownToken)) {
      throw SchemaError("model file: bigram over unknown token in '" + line + "'");
    }
    counts.bigrams[bigram_key(c, w)] = parse_count(parts[2]);
  }
  if (!std::getline(in, line) || line != "end") throw SchemaError("model file: missing end marker");

  std::uint64_t sum = 0;
  for (auto n : counts.unigrams) sum += n;
  if (sum != total) throw SchemaError("model file: unigram counts do not sum to total_tokens");
  return NgramModel(order, vocab_size, std::move(vocab), std::move(counts));
}

void save_model_file(const std::filesystem::path& path, const NgramModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  save_model(out, model);
  if (!out) throw Error("failed writing model file " + path.string());
}

NgramModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace argprobe
