#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "argprobe/annotations.hpp"
#include "argprobe/assignment.hpp"
#include "argprobe/genset.hpp"

namespace argprobe {

enum class SessionState { Warmup, Active, Complete };
std::string_view to_string(SessionState s);

/// Instruction shown with every item, in German as given to annotators.
inline constexpr std::string_view kRatingInstruction =
    "Bitte beurteilen Sie, wie natürlich dieser Satz klingt, unabhängig davon, ob die "
    "beschriebene Situation wahrscheinlich ist oder nicht.";
inline constexpr std::string_view kScaleMinLabel = "nicht natürlich";
inline constexpr std::string_view kScaleMaxLabel = "sehr natürlich";

struct SessionView {
  std::string session_id;
  std::string annotator_id;
  std::uint64_t seed = 0;
  SessionState state = SessionState::Warmup;
  std::size_t rated = 0;
  std::size_t total = 0;
  std::size_t warmup_items = 0;
};

struct ServedItem {
  bool done = false;
  std::size_t position = 0;  // index into the assignment
  std::size_t total = 0;
  std::string sentence_id;
  std::string text;
  bool warmup = false;
};

struct StoreConfig {
  AssignmentConfig assignment;
  /// Append-only log; replayed on construction. No persistence when unset.
  std::optional<std::filesystem::path> log_path;
  /// Operator-marked eligible annotators; everyone is eligible when unset.
  std::optional<std::set<std::string>> eligible;
};

/// Sessions, assignments and ratings behind one lock. Every mutation is appended to the
/// log and flushed to disk before it is applied and acknowledged.
class AnnotationStore {
 public:
  AnnotationStore(const Dataset& dataset, std::vector<FillerItem> fillers, StoreConfig config);
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Throws RejectedError for ineligible annotators or exhausted capacity.
  SessionView create_session(const std::string& annotator_id, std::optional<std::uint64_t> seed = std::nullopt);
  SessionView session(std::string_view session_id) const;
  ServedItem next_item(std::string_view session_id) const;
  /// Item at a position of the session's assignment (LookupError if out of range).
  std::string item_sentence(std::string_view session_id, std::size_t position) const;

  /// Accepts an integer in 0..99 for the session's current item. Rejects out-of-range
  /// values, duplicates, and items not yet served. Returns the next item.
  ServedItem submit_rating(std::string_view session_id, std::string_view sentence_id, int value);

  std::vector<AnnotationRecord> records() const;
  void export_annotations(std::ostream& out) const;

  std::size_t assigned_count(std::string_view sentence_id) const;
  std::size_t session_count() const;
  std::vector<std::string> session_ids() const;

 private:
  struct Session {
    std::string id;
    Assignment assignment;
    std::size_t cursor = 0;
    std::unordered_map<std::string, int> submitted;
  };
  struct Rating {
    std::string session_id;
    std::string sentence_id;
    int value;
    std::string timestamp;
  };

  void replay();
  void append(const std::string& line);
  void apply_session(Session session);
  void apply_rating(Rating rating);
  const Session& get(std::string_view session_id) const;
  SessionView view(const Session& s) const;
  ServedItem serve(const Session& s) const;
  std::string text_of(const std::string& sentence_id) const;

  const Dataset& dataset_;
  std::vector<FillerItem> fillers_;
  std::unordered_map<std::string, const FillerItem*> filler_by_id_;
  StoreConfig config_;
  mutable std::mutex mutex_;
  int log_fd_ = -1;
  std::map<std::string, Session, std::less<>> sessions_;
  std::vector<std::string> session_order_;
  std::vector<Rating> ratings_;
  std::unordered_map<std::string, std::size_t> assigned_;
  std::unordered_map<std::string, std::unordered_set<std::string>> seen_by_annotator_;
};

}  // namespace argprobe
