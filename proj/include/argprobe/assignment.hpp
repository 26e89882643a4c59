#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "argprobe/annotations.hpp"
#include "argprobe/genset.hpp"

namespace argprobe {

/// A sentence with an obvious, known judgment used for warm-up and attention checks.
struct FillerItem {
  std::string id;
  std::string text;
  FillerKind kind = FillerKind::Acceptable;
};

/// One JSON object per line: id, text, kind (acceptable | violation).
std::vector<FillerItem> load_fillers(std::istream& in);
std::vector<FillerItem> load_fillers_file(const std::filesystem::path& path);

struct AssignmentConfig {
  std::size_t test_items = 216;
  std::size_t max_per_template = 5;
  std::size_t acceptable_items = 54;  // 25% of test_items
  std::size_t filler_every = 12;      // one filler after every N test items; 0 disables
  std::size_t warmup_items = 6;
  std::size_t target_annotations = 3;  // global cap per test sentence
};

enum class ItemKind { Warmup, Test, Filler };

std::string_view to_string(ItemKind k);
ItemKind item_kind_from_string(std::string_view s);

struct AssignmentItem {
  std::string sentence_id;
  ItemKind kind = ItemKind::Test;
  FillerKind filler_kind = FillerKind::None;

  bool operator==(const AssignmentItem&) const = default;
};

/// Warm-up block first, then test items with fillers interleaved.
struct Assignment {
  std::string annotator_id;
  std::uint64_t seed = 0;
  std::vector<AssignmentItem> items;

  bool operator==(const Assignment&) const = default;
};

/// Global collection state that constrains new assignments.
struct CollectionState {
  std::unordered_map<std::string, std::size_t> assigned;  // test sentence -> assignments so far
  std::unordered_set<std::string> seen_by_annotator;       // sentences the annotator already has
};

/// Draws test sentences among those still below the annotation target (least-assigned
/// first, seeded random order otherwise) under the per-template and acceptable-share
/// limits, shuffles them, and adds warm-up and filler items from the pool.
/// Throws RejectedError when remaining capacity cannot satisfy the constraints.
Assignment create_assignment(std::string annotator_id, const Dataset& dataset,
                             const std::vector<FillerItem>& fillers, std::uint64_t seed,
                             const AssignmentConfig& config, const CollectionState& state);

/// Every composition rule an assignment must satisfy; empty when it is valid.
std::vector<std::string> check_assignment(const Assignment& assignment, const Dataset& dataset,
                                          const AssignmentConfig& config);

}  // namespace argprobe
