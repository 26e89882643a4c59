#include "argprobe/annotation_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "argprobe/error.hpp"
#include "argprobe/manifest.hpp"

namespace argprobe {

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::Warmup: return "warmup";
    case SessionState::Active: return "active";
    case SessionState::Complete: return "complete";
  }
  return "?";
}

AnnotationStore::AnnotationStore(const Dataset& dataset, std::vector<FillerItem> fillers, StoreConfig config)
    : dataset_(dataset), fillers_(std::move(fillers)), config_(std::move(config)) {
  for (const auto& f : fillers_) filler_by_id_.emplace(f.id, &f);
  if (config_.log_path) {
    replay();
    log_fd_ = ::open(config_.log_path->c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (log_fd_ < 0) {
      throw Error("cannot open annotation log " + config_.log_path->string() + ": " + std::strerror(errno));
    }
  }
}

AnnotationStore::~AnnotationStore() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

namespace {

nlohmann::json assignment_to_json(const Assignment& a) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : a.items) {
    items.push_back({{"id", it.sentence_id}, {"kind", to_string(it.kind)}, {"filler_kind", to_string(it.filler_kind)}});
  }
  return items;
}

}  // namespace

void AnnotationStore::replay() {
  std::ifstream in(*config_.log_path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::uintmax_t good_bytes = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (in.eof()) break;  // unterminated tail from an interrupted append; never acknowledged
    good_bytes += line.size() + 1;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "session") {
        Session s;
        s.id = j.at("session_id").get<std::string>();
        s.assignment.annotator_id = j.at("annotator_id").get<std::string>();
        s.assignment.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& it : j.at("items")) {
          s.assignment.items.push_back({it.at("id").get<std::string>(),
                                        item_kind_from_string(it.at("kind").get<std::string>()),
                                        filler_kind_from_string(it.at("filler_kind").get<std::string>())});
        }
        apply_session(std::move(s));
      } else if (type == "rating") {
        apply_rating({j.at("session_id").get<std::string>(), j.at("sentence_id").get<std::string>(),
                      j.at("value").get<int>(), j.at("timestamp").get<std::string>()});
      } else {
        throw SchemaError("unknown record type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw SchemaError("annotation log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  in.close();
  std::error_code ec;
  auto size = std::filesystem::file_size(*config_.log_path, ec);
  if (!ec && size != good_bytes) std::filesystem::resize_file(*config_.log_path, good_bytes);
}

void AnnotationStore::append(const std::string& line) {
  if (log_fd_ < 0) return;
  std::string data = line + "\n";
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    ssize_t n = ::write(log_fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("annotation log write failed: ") + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fdatasync(log_fd_) != 0) throw Error(std::string("annotation log sync failed: ") + std::strerror(errno));
}

void AnnotationStore::apply_session(Session session) {
  for (const auto& it : session.assignment.items) {
    if (it.kind == ItemKind::Test) {
      ++assigned_[it.sentence_id];
      seen_by_annotator_[session.assignment.annotator_id].insert(it.sentence_id);
    }
  }
  session_order_.push_back(session.id);
  auto id = session.id;
  sessions_.emplace(std::move(id), std::move(session));
}

void AnnotationStore::apply_rating(Rating rating) {
  auto it = sessions_.find(rating.session_id);
  if (it == sessions_.end()) throw SchemaError("rating for unknown session " + rating.session_id);
  auto& s = it->second;
  s.submitted.emplace(rating.sentence_id, rating.value);
  ++s.cursor;
  ratings_.push_back(std::move(rating));
}

SessionView AnnotationStore::create_session(const std::string& annotator_id, std::optional<std::uint64_t> seed) {
  if (annotator_id.empty() || annotator_id.find_first_of("\t\n") != std::string::npos) {
    throw RejectedError("annotator id must be non-empty without tabs or newlines");
  }
  if (config_.eligible && !config_.eligible->count(annotator_id)) {
    throw RejectedError("annotator '" + annotator_id + "' is not marked eligible");
  }
  std::uint64_t s = seed ? *seed : std::random_device{}() * 0x100000001ull + std::random_device{}();

  std::lock_guard lock(mutex_);
  CollectionState state;
  state.assigned = assigned_;
  if (auto it = seen_by_annotator_.find(annotator_id); it != seen_by_annotator_.end()) {
    state.seen_by_annotator = it->second;
  }
  Session session;
  session.id = "s" + std::to_string(sessions_.size() + 1);
  session.assignment = create_assignment(annotator_id, dataset_, fillers_, s, config_.assignment, state);

  nlohmann::json rec = {{"v", 1},
                        {"type", "session"},
                        {"session_id", session.id},
                        {"annotator_id", annotator_id},
                        {"seed", s},
                        {"created", utc_timestamp()},
                        {"items", assignment_to_json(session.assignment)}};
  append(rec.dump());
  auto id = session.id;
  apply_session(std::move(session));
  return view(sessions_.at(id));
}

const AnnotationStore::Session& AnnotationStore::get(std::string_view session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw LookupError("unknown session '" + std::string(session_id) + "'");
  return it->second;
}

SessionView AnnotationStore::view(const Session& s) const {
  SessionView v;
  v.session_id = s.id;
  v.annotator_id = s.assignment.annotator_id;
  v.seed = s.assignment.seed;
  v.rated = s.cursor;
  v.total = s.assignment.items.size();
  for (const auto& it : s.assignment.items)
    if (it.kind == ItemKind::Warmup) ++v.warmup_items;
  if (s.cursor >= v.total) {
    v.state = SessionState::Complete;
  } else {
    v.state = s.assignment.items[s.cursor].kind == ItemKind::Warmup ? SessionState::Warmup : SessionState::Active;
  }
  return v;
}

std::string AnnotationStore::text_of(const std::string& sentence_id) const {
  if (const auto* rec = dataset_.find(sentence_id)) return rec->text;
  if (auto it = filler_by_id_.find(sentence_id); it != filler_by_id_.end()) return it->second->text;
  throw LookupError("no text for item '" + sentence_id + "'");
}

ServedItem AnnotationStore::serve(const Session& s) const {
  ServedItem item;
  item.total = s.assignment.items.size();
  item.position = s.cursor;
  if (s.cursor >= item.total) {
    item.done = true;
    return item;
  }
  const auto& it = s.assignment.items[s.cursor];
  item.sentence_id = it.sentence_id;
  item.text = text_of(it.sentence_id);
  item.warmup = it.kind == ItemKind::Warmup;
  return item;
}

SessionView AnnotationStore::session(std::string_view session_id) const {
  std::lock_guard lock(mutex_);
  return view(get(session_id));
}

ServedItem AnnotationStore::next_item(std::string_view session_id) const {
  std::lock_guard lock(mutex_);
  return serve(get(session_id));
}

std::string AnnotationStore::item_sentence(std::string_view session_id, std::size_t position) const {
  std::lock_guard lock(mutex_);
  const auto& s = get(session_id);
  if (position >= s.assignment.items.size()) {
    throw LookupError("session '" + std::string(session_id) + "' has no item " + std::to_string(position));
  }
  return s.assignment.items[position].sentence_id;
}

ServedItem AnnotationStore::submit_rating(std::string_view session_id, std::string_view sentence_id, int value) {
  if (value < kMinRating || value > kMaxRating) {
    throw RejectedError("rating " + std::to_string(value) + " outside the range 0..99");
  }
  std::lock_guard lock(mutex_);
  const auto& s = get(session_id);
  if (s.submitted.count(std::string(sentence_id))) {
    throw RejectedError("item '" + std::string(sentence_id) + "' was already rated in this session");
  }
  auto pos = std::find_if(s.assignment.items.begin(), s.assignment.items.end(),
                          [&](const AssignmentItem& it) { return it.sentence_id == sentence_id; });
  if (pos == s.assignment.items.end()) {
    throw LookupError("item '" + std::string(sentence_id) + "' is not part of session '" + s.id + "'");
  }
  if (static_cast<std::size_t>(pos - s.assignment.items.begin()) != s.cursor) {
    throw RejectedError("item '" + std::string(sentence_id) + "' has not been served yet");
  }
  Rating r{s.id, std::string(sentence_id), value, utc_timestamp()};
  nlohmann::json rec = {{"v", 1},
                        {"type", "rating"},
                        {"session_id", r.session_id},
                        {"sentence_id", r.sentence_id},
                        {"value", r.value},
                        {"timestamp", r.timestamp}};
  append(rec.dump());
  apply_rating(std::move(r));
  return serve(get(session_id));
}

std::vector<AnnotationRecord> AnnotationStore::records() const {
  std::lock_guard lock(mutex_);
  std::vector<AnnotationRecord> out;
  out.reserve(ratings_.size());
  for (const auto& r : ratings_) {
    const auto& s = sessions_.at(r.session_id);
    const auto& item = *std::find_if(s.assignment.items.begin(), s.assignment.items.end(),
                                     [&](const AssignmentItem& it) { return it.sentence_id == r.sentence_id; });
    AnnotationRecord rec;
    rec.annotator_id = s.assignment.annotator_id;
    rec.sentence_id = r.sentence_id;
    rec.raw = r.value;
    rec.timestamp = r.timestamp;
    rec.is_filler = item.filler_kind != FillerKind::None;
    rec.filler_kind = item.filler_kind;
    rec.warmup = item.kind == ItemKind::Warmup;
    out.push_back(std::move(rec));
  }
  return out;
}

void AnnotationStore::export_annotations(std::ostream& out) const {
  auto recs = records();
  write_annotations(out, recs);
}

std::size_t AnnotationStore::assigned_count(std::string_view sentence_id) const {
  std::lock_guard lock(mutex_);
  auto it = assigned_.find(std::string(sentence_id));
  return it == assigned_.end() ? 0 : it->second;
}

std::size_t AnnotationStore::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::vector<std::string> AnnotationStore::session_ids() const {
  std::lock_guard lock(mutex_);
  return session_order_;
}

}  // namespace argprobe
