#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "argprobe/evaluate.hpp"
#include "argprobe/genset.hpp"
#include "argprobe/lexicon.hpp"
#include "argprobe/ngram.hpp"
#include "argprobe/score_table.hpp"

using namespace argprobe;

namespace {

Dataset make_dataset(int templates) {
  Lexicon lex;
  std::vector<Template> tpls;
  for (int t = 0; t < templates; ++t) {
    Template tpl;
    tpl.id = "t" + std::to_string(t);
    tpl.prefix = "Er sagte, dass";
    tpl.verb = "gibt";
    for (int k = 0; k < 3; ++k) {
      Lexeme l;
      l.id = tpl.id + "_" + std::to_string(k);
      std::string stem = "Nomen" + std::to_string(t) + char('a' + k);
      l.noun_forms = {stem, stem, stem};
      l.determiner_class = k == 2 ? DeterminerClass::Indefinite : DeterminerClass::Definite;
      l.animacy = k == 2 ? Animacy::Inanimate : Animacy::Human;
      lex.add(l);
      tpl.items[k] = l.id;
    }
    tpls.push_back(tpl);
  }
  return build_dataset(tpls, lex);
}

std::vector<std::string> make_corpus(std::size_t sentences) {
  std::mt19937 rng(7);
  std::vector<std::string> words;
  for (int i = 0; i < 5000; ++i) words.push_back("w" + std::to_string(i));
  std::geometric_distribution<int> pick(0.002);
  std::vector<std::string> out;
  out.reserve(sentences);
  for (std::size_t s = 0; s < sentences; ++s) {
    std::string line;
    for (int k = 0; k < 12; ++k) {
      if (k) line += ' ';
      line += words[std::min<int>(pick(rng), 4999)];
    }
    out.push_back(line + " .");
  }
  return out;
}

const Dataset& dataset() {
  static const Dataset d = make_dataset(200);
  return d;
}

const ScoreTable& scores() {
  static const ScoreTable t = [] {
    ScoreTable s("random");
    std::mt19937 rng(3);
    std::normal_distribution<double> n;
    for (const auto& r : dataset().records()) s.insert(r.id, n(rng));
    return s;
  }();
  return t;
}

const std::vector<std::string>& corpus() {
  static const auto c = make_corpus(200000);
  return c;
}

const NgramModel& model() {
  static const NgramModel m = train_ngram(corpus(), TrainOptions{});
  return m;
}

void BM_EvaluateSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_sets_serial(dataset(), scores(), Restriction::All));
}
void BM_EvaluateParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_sets(dataset(), scores(), Restriction::All));
}
void BM_CountSerial(benchmark::State& state) {
  const auto& m = model();
  for (auto _ : state) benchmark::DoNotOptimize(count_ngrams_serial(corpus(), m.vocab(), 2));
}
void BM_CountParallel(benchmark::State& state) {
  const auto& m = model();
  for (auto _ : state) benchmark::DoNotOptimize(count_ngrams(corpus(), m.vocab(), 2));
}
void BM_FrequenciesSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_frequencies_serial(corpus()));
}
void BM_FrequenciesParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_frequencies(corpus()));
}
void BM_ScoreSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(score_dataset_serial(model(), dataset(), "bigram"));
}
void BM_ScoreParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(score_dataset(model(), dataset(), "bigram"));
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CountSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CountParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FrequenciesSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FrequenciesParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
