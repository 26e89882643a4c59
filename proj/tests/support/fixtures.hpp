#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "argprobe/genset.hpp"
#include "argprobe/lexicon.hpp"

#ifndef ARGPROBE_DATA_DIR
#define ARGPROBE_DATA_DIR "data"
#endif

namespace fixtures {

inline std::filesystem::path data_dir() { return ARGPROBE_DATA_DIR; }

struct Corpus {
  argprobe::Lexicon lexicon;
  std::vector<argprobe::Template> templates;
};

/// `n` templates over invented nouns; every NP string is unique to its template.
inline Corpus synthetic_templates(int n) {
  Corpus c;
  for (int t = 0; t < n; ++t) {
    argprobe::Template tpl;
    tpl.id = "s" + std::to_string(t);
    tpl.prefix = "Er sagte, dass";
    tpl.verb = "gibt";
    for (int k = 0; k < 3; ++k) {
      argprobe::Lexeme l;
      l.id = tpl.id + "i" + std::to_string(k + 1);
      const std::string stem = "Nomen" + std::to_string(t) + static_cast<char>('a' + k);
      l.noun_forms = {stem, stem + "en", stem + "em"};
      l.determiner_class = k == 2 ? argprobe::DeterminerClass::Indefinite : argprobe::DeterminerClass::Definite;
      l.animacy = k == 2 ? argprobe::Animacy::Inanimate : argprobe::Animacy::Human;
      c.lexicon.add(l);
      tpl.items[k] = l.id;
    }
    c.templates.push_back(tpl);
  }
  return c;
}

inline argprobe::Dataset synthetic_dataset(int n) {
  auto c = synthetic_templates(n);
  return argprobe::build_dataset(c.templates, c.lexicon);
}

inline Corpus worked_example() {
  Corpus c;
  c.lexicon = argprobe::load_lexicon_file(data_dir() / "worked_example" / "lexicon.jsonl");
  c.templates = argprobe::load_templates_file(data_dir() / "worked_example" / "templates.jsonl");
  return c;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("argprobe-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Pairwise rank statistic with half credit for ties.
inline double brute_force_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double s = 0;
  for (double p : pos)
    for (double n : neg) s += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return s / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace fixtures
