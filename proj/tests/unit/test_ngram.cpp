#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "argprobe/error.hpp"
#include "argprobe/ngram.hpp"
#include "argprobe/tokenize.hpp"
#include "support/fixtures.hpp"

using namespace argprobe;

namespace {

NgramModel train(std::vector<std::string> corpus, int order, std::size_t v = kDefaultVocabSize) {
  TrainOptions o;
  o.order = order;
  o.vocab_size = v;
  return train_ngram(corpus, o);
}

std::vector<std::string> random_corpus(std::size_t sentences, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(1, 12), word(0, 60);
  std::vector<std::string> out;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::string line;
    int n = len(rng);
    for (int k = 0; k < n; ++k) line += (k ? " w" : "w") + std::to_string(word(rng) * word(rng) % 97);
    out.push_back(line + ".");
  }
  return out;
}

}  // namespace

TEST_CASE("unigram counts with and without truncation") {
  auto m = train({"a b a"}, 1, 2);
  CHECK(m.unigram_count("a") == 2);
  CHECK(m.unigram_count("b") == 1);
  CHECK(m.total_tokens() == 3);
  CHECK(m.vocab().size() == 4);

  auto small = train({"a b a"}, 1, 1);
  CHECK(small.unigram_count("a") == 2);
  CHECK(small.unigram_count(kUnknownToken) == 1);
  CHECK(small.unigram_count("b") == 1);  // b maps to the unknown token
  CHECK(small.vocab().word_count() == 1);
}

TEST_CASE("vocabulary ties break lexicographically") {
  auto m = train({"c b a c b a z"}, 1, 2);
  // a, b, c all occur twice; a and b win the tie.
  CHECK(m.vocab().token(2) == "a");
  CHECK(m.vocab().token(3) == "b");
  CHECK(m.vocab().id("c") == Vocabulary::kUnk);
}

TEST_CASE("unigram score") {
  auto m = train({"a a b"}, 1);
  std::vector<std::string> a{"a"};
  CHECK(score_chain(m, a) == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-15));
  std::vector<std::string> empty;
  CHECK_THROWS_AS(score_chain(m, empty), Error);
  std::vector<std::string> unseen{"q"};
  CHECK_THROWS_AS(score_chain(m, unseen), Error);
}

TEST_CASE("bigram laplace on a two-token corpus") {
  auto m = train({"a b"}, 2);
  // vocabulary {<unk>, <s>, a, b}
  CHECK(m.vocab().size() == 4);
  CHECK(std::exp(m.bigram_log_prob("a", "b")) == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("bigram laplace on a three-sentence corpus matches hand values") {
  auto m = train({"a b a", "b a", "a"}, 2);
  // counts: a=4 b=2; contexts <s>=3 a=1 b=2; bigrams (<s>,a)=2 (<s>,b)=1 (a,b)=1 (b,a)=2
  const double eps = 1e-12;
  CHECK(std::abs(m.bigram_log_prob("<s>", "a") - std::log(3.0 / 7.0)) < eps);
  CHECK(std::abs(m.bigram_log_prob("<s>", "b") - std::log(2.0 / 7.0)) < eps);
  CHECK(std::abs(m.bigram_log_prob("a", "b") - std::log(2.0 / 5.0)) < eps);
  CHECK(std::abs(m.bigram_log_prob("a", "a") - std::log(1.0 / 5.0)) < eps);
  CHECK(std::abs(m.bigram_log_prob("b", "a") - std::log(3.0 / 6.0)) < eps);
  CHECK(std::abs(m.bigram_log_prob("b", "b") - std::log(1.0 / 6.0)) < eps);
  CHECK(std::abs(m.bigram_log_prob("b", "zzz") - std::log(1.0 / 6.0)) < eps);

  auto tokens = tokenize("a b a");
  double expected = std::log(3.0 / 7.0) + std::log(2.0 / 5.0) + std::log(3.0 / 6.0);
  CHECK(std::abs(score_chain(m, tokens) - expected) < eps);

  auto u = train({"a b a", "b a", "a"}, 1);
  CHECK(std::abs(score_chain(u, tokenize("a b")) - (std::log(4.0 / 6.0) + std::log(2.0 / 6.0))) < eps);
}

TEST_CASE("smoothed conditionals sum to one for every context") {
  auto m = train(random_corpus(300, 5), 2, 40);
  const auto n = static_cast<std::uint32_t>(m.vocab().size());
  for (std::uint32_t c = 0; c < n; ++c) {
    double sum = 0;
    for (std::uint32_t w = 0; w < n; ++w) sum += std::exp(m.bigram_log_prob(c, w));
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("unigram score is permutation invariant") {
  auto corpus = random_corpus(200, 9);
  auto m = train(corpus, 1);
  std::mt19937 rng(1);
  for (int i = 0; i < 50; ++i) {
    auto tokens = tokenize(corpus[static_cast<std::size_t>(i)]);
    auto shuffled = tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(std::abs(score_chain(m, tokens) - score_chain(m, shuffled)) < 1e-12);
  }
}

TEST_CASE("one-token difference changes the unigram score by the log ratio") {
  auto m = train({"x x x y y z"}, 1);
  std::vector<std::string> s1{"z", "x", "y"}, s2{"z", "y", "y"};
  double diff = score_chain(m, s1) - score_chain(m, s2);
  CHECK(std::abs(diff - (m.unigram_log_prob("x") - m.unigram_log_prob("y"))) < 1e-12);
  CHECK(diff > 0);  // x is strictly more frequent than y
}

TEST_CASE("parallel and serial counting agree") {
  auto corpus = random_corpus(5000, 3);
  CHECK(count_frequencies(corpus) == count_frequencies_serial(corpus));
  auto vocab = Vocabulary::select(count_frequencies_serial(corpus), 30);
  CHECK(count_ngrams(corpus, vocab, 2) == count_ngrams_serial(corpus, vocab, 2));
  CHECK(count_ngrams(corpus, vocab, 1) == count_ngrams_serial(corpus, vocab, 1));
}

TEST_CASE("count merge is associative and partition independent") {
  auto corpus = random_corpus(900, 4);
  auto vocab = Vocabulary::select(count_frequencies_serial(corpus), 50);
  auto whole = count_ngrams_serial(corpus, vocab, 2);
  std::span<const std::string> all(corpus);
  for (std::size_t cut : {std::size_t{1}, std::size_t{300}, std::size_t{899}}) {
    auto left = count_ngrams_serial(all.first(cut), vocab, 2);
    auto right = count_ngrams_serial(all.subspan(cut), vocab, 2);
    left.merge(right);
    CHECK(left == whole);
  }
}

TEST_CASE("training is deterministic and file streaming matches in-memory training") {
  auto corpus = random_corpus(2000, 11);
  TrainOptions o;
  o.vocab_size = 25;
  auto a = train_ngram(corpus, o);
  auto b = train_ngram(corpus, o);
  CHECK(a == b);

  fixtures::TempDir dir;
  std::string text;
  for (const auto& line : corpus) text += line + "\n";
  auto path = dir.write("corpus.txt", text);
  o.batch_sentences = 128;
  CHECK(train_ngram_file(path, o) == a);
  o.parallel = false;
  CHECK(train_ngram_file(path, o) == a);
}

TEST_CASE("empty corpus is an error") {
  std::vector<std::string> none;
  CHECK_THROWS_AS(train_ngram(none, TrainOptions{}), Error);
  std::vector<std::string> blank{"", "  "};
  CHECK_THROWS_AS(train_ngram(blank, TrainOptions{}), Error);
}

TEST_CASE("model serialization round trips exactly") {
  for (int order : {1, 2}) {
    auto m = train(random_corpus(400, 21), order, 35);
    std::stringstream ss;
    save_model(ss, m);
    auto back = load_model(ss);
    CHECK(back == m);
    std::stringstream again;
    save_model(again, back);
    std::stringstream first;
    save_model(first, m);
    CHECK(first.str() == again.str());
    auto tokens = tokenize("w1 w4 w9 w16.");
    if (order == 2) CHECK(score_chain(back, tokens) == score_chain(m, tokens));
  }
}

TEST_CASE("corrupt model files are rejected") {
  std::istringstream in("argprobe-ngram 1\norder 3\n");
  CHECK_THROWS_AS(load_model(in), SchemaError);
}

TEST_CASE("punctuation can be left out of sentence scores") {
  auto m = train({"a b .", "a ."}, 2);
  ScoreOptions no_punct;
  no_punct.include_punctuation = false;
  auto with = score_sentence(m, "a b.");
  auto without = score_sentence(m, "a b.", no_punct);
  CHECK(without == doctest::Approx(score_chain(m, tokenize("a b"))));
  CHECK(with < without);
}
