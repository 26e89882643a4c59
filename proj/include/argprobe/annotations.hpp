#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace argprobe {

enum class FillerKind { None, Acceptable, Violation };

std::string_view to_string(FillerKind k);
FillerKind filler_kind_from_string(std::string_view s);

inline constexpr int kMinRating = 0;
inline constexpr int kMaxRating = 99;

/// One rating on the 0 ("not natural") .. 99 ("very natural") scale.
struct AnnotationRecord {
  std::string annotator_id;
  std::string sentence_id;
  int raw = 0;
  std::string timestamp;  // ISO-8601 UTC
  bool is_filler = false;
  FillerKind filler_kind = FillerKind::None;
  bool warmup = false;

  bool operator==(const AnnotationRecord&) const = default;
};

/// Tab-separated with header
/// annotator_id sentence_id raw timestamp is_filler filler_kind warmup
void write_annotations(std::ostream& out, std::span<const AnnotationRecord> records);
std::vector<AnnotationRecord> read_annotations(std::istream& in);
std::vector<AnnotationRecord> read_annotations_file(const std::filesystem::path& path);

struct QcResult {
  std::set<std::string> retained;
  std::set<std::string> removed;
  std::vector<std::string> warnings;
};

/// Keeps an annotator iff their mean raw rating on acceptable fillers is strictly
/// greater than on violation fillers. Annotators lacking either filler kind are
/// excluded with a warning. Warm-up ratings are ignored.
QcResult qc_filter(std::span<const AnnotationRecord> records);

struct NormalizedRating {
  std::string sentence_id;
  double z;
};

struct NormalizationResult {
  /// Per annotator, z-scored test ratings in input order (population sd).
  std::map<std::string, std::vector<NormalizedRating>> per_annotator;
  /// Per sentence, mean of its normalized ratings.
  std::unordered_map<std::string, double> sentence_scores;
  std::vector<std::string> warnings;
};

/// z-transforms each annotator's non-filler, non-warm-up ratings and averages per
/// sentence. Annotators with constant ratings get 0 for every rating and a warning.
/// When `retained` is given, other annotators are skipped.
NormalizationResult normalize_annotations(std::span<const AnnotationRecord> records,
                                          const std::set<std::string>* retained = nullptr);

}  // namespace argprobe
