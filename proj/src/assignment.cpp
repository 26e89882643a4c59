#include "argprobe/assignment.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "argprobe/error.hpp"

namespace argprobe {

std::vector<FillerItem> load_fillers(std::istream& in) {
  std::vector<FillerItem> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    try {
      auto j = nlohmann::json::parse(line);
      FillerItem f{j.at("id").get<std::string>(), j.at("text").get<std::string>(),
                   filler_kind_from_string(j.at("kind").get<std::string>())};
      if (f.kind == FillerKind::None) throw SchemaError("filler kind must be acceptable or violation");
      if (!ids.insert(f.id).second) throw SchemaError("duplicate filler id '" + f.id + "'");
      out.push_back(std::move(f));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("filler line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("filler line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<FillerItem> load_fillers_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open filler file " + path.string());
  return load_fillers(in);
}

std::string_view to_string(ItemKind k) {
  switch (k) {
    case ItemKind::Warmup: return "warmup";
    case ItemKind::Test: return "test";
    case ItemKind::Filler: return "filler";
  }
  return "?";
}

ItemKind item_kind_from_string(std::string_view s) {
  if (s == "warmup") return ItemKind::Warmup;
  if (s == "test") return ItemKind::Test;
  if (s == "filler") return ItemKind::Filler;
  throw SchemaError("unknown item kind '" + std::string(s) + "'");
}

namespace {

struct Candidate {
  std::size_t assigned;
  std::uint64_t key;
  const SentenceRecord* record;
};

std::vector<Candidate> candidates(const Dataset& dataset, bool acceptable, const AssignmentConfig& config,
                                  const CollectionState& state, std::mt19937_64& rng) {
  std::vector<Candidate> out;
  for (const auto& rec : dataset.records()) {
    if (rec.acceptable != acceptable || state.seen_by_annotator.count(rec.id)) continue;
    auto it = state.assigned.find(rec.id);
    std::size_t n = it == state.assigned.end() ? 0 : it->second;
    if (n >= config.target_annotations) continue;
    out.push_back({n, rng(), &rec});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.assigned != b.assigned ? a.assigned < b.assigned : a.key < b.key;
  });
  return out;
}

std::vector<const FillerItem*> pick_fillers(const std::vector<FillerItem>& pool, std::size_t n,
                                            std::vector<const FillerItem*>& acc,
                                            std::vector<const FillerItem*>& viol) {
  std::vector<const FillerItem*> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& src = (i % 2 == 0) ? acc : viol;
    if (src.empty()) {
      throw RejectedError("filler pool too small: need " + std::to_string(n) + " more items of each kind from " +
                          std::to_string(pool.size()) + " fillers");
    }
    out.push_back(src.back());
    src.pop_back();
  }
  return out;
}

}  // namespace

Assignment create_assignment(std::string annotator_id, const Dataset& dataset,
                             const std::vector<FillerItem>& fillers, std::uint64_t seed,
                             const AssignmentConfig& config, const CollectionState& state) {
  if (config.acceptable_items > config.test_items) throw Error("acceptable_items exceeds test_items");
  const std::size_t min_templates =
      (config.test_items + config.max_per_template - 1) / std::max<std::size_t>(1, config.max_per_template);
  if (dataset.template_count() < min_templates) {
    throw RejectedError("dataset has " + std::to_string(dataset.template_count()) + " templates; at least " +
                        std::to_string(min_templates) + " are needed");
  }

  std::mt19937_64 rng(seed);
  std::vector<const SentenceRecord*> chosen;
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts && chosen.size() != config.test_items; ++attempt) {
    chosen.clear();
    std::unordered_map<std::string_view, std::size_t> per_template;
    auto take = [&](const std::vector<Candidate>& pool, std::size_t want) {
      std::size_t got = 0;
      for (const auto& c : pool) {
        if (got == want) break;
        auto& t = per_template[c.record->template_id];
        if (t >= config.max_per_template) continue;
        ++t;
        ++got;
        chosen.push_back(c.record);
      }
      return got == want;
    };
    auto acc = candidates(dataset, true, config, state, rng);
    auto viol = candidates(dataset, false, config, state, rng);
    if (!take(acc, config.acceptable_items) || !take(viol, config.test_items - config.acceptable_items)) {
      chosen.clear();
    }
  }
  if (chosen.size() != config.test_items) {
    throw RejectedError("insufficient remaining annotation capacity for a new assignment; close collection");
  }
  std::shuffle(chosen.begin(), chosen.end(), rng);

  std::vector<const FillerItem*> acc_pool, viol_pool;
  for (const auto& f : fillers) {
    if (dataset.find(f.id)) throw SchemaError("filler id '" + f.id + "' collides with a dataset sentence");
    (f.kind == FillerKind::Acceptable ? acc_pool : viol_pool).push_back(&f);
  }
  std::shuffle(acc_pool.begin(), acc_pool.end(), rng);
  std::shuffle(viol_pool.begin(), viol_pool.end(), rng);
  const std::size_t n_fillers = config.filler_every == 0 ? 0 : config.test_items / config.filler_every;
  auto warmup = pick_fillers(fillers, config.warmup_items, acc_pool, viol_pool);
  auto interleaved = pick_fillers(fillers, n_fillers, acc_pool, viol_pool);
  std::shuffle(warmup.begin(), warmup.end(), rng);
  std::shuffle(interleaved.begin(), interleaved.end(), rng);

  Assignment a;
  a.annotator_id = std::move(annotator_id);
  a.seed = seed;
  for (const auto* f : warmup) a.items.push_back({f->id, ItemKind::Warmup, f->kind});
  std::size_t next_filler = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    a.items.push_back({chosen[i]->id, ItemKind::Test, FillerKind::None});
    if (config.filler_every != 0 && (i + 1) % config.filler_every == 0 && next_filler < interleaved.size()) {
      const auto* f = interleaved[next_filler++];
      a.items.push_back({f->id, ItemKind::Filler, f->kind});
    }
  }
  return a;
}

std::vector<std::string> check_assignment(const Assignment& assignment, const Dataset& dataset,
                                          const AssignmentConfig& config) {
  std::vector<std::string> problems;
  std::size_t tests = 0, acceptable = 0;
  bool test_seen = false;
  std::unordered_set<std::string> ids;
  std::unordered_map<std::string, std::size_t> per_template;
  for (const auto& item : assignment.items) {
    if (!ids.insert(item.sentence_id).second) problems.push_back("repeated item " + item.sentence_id);
    if (item.kind == ItemKind::Warmup && test_seen) problems.push_back("warm-up item after test items");
    if (item.kind != ItemKind::Test) continue;
    test_seen = true;
    ++tests;
    const auto* rec = dataset.find(item.sentence_id);
    if (rec == nullptr) {
      problems.push_back("test item not in dataset: " + item.sentence_id);
      continue;
    }
    if (rec->acceptable) ++acceptable;
    if (++per_template[rec->template_id] == config.max_per_template + 1) {
      problems.push_back("more than " + std::to_string(config.max_per_template) + " items from template " +
                         rec->template_id);
    }
  }
  if (tests != config.test_items) {
    problems.push_back("expected " + std::to_string(config.test_items) + " test items, got " + std::to_string(tests));
  }
  if (acceptable != config.acceptable_items) {
    problems.push_back("expected " + std::to_string(config.acceptable_items) + " acceptable items, got " +
                       std::to_string(acceptable));
  }
  return problems;
}

}  // namespace argprobe
