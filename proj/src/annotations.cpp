#include "argprobe/annotations.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "argprobe/error.hpp"

namespace argprobe {

std::string_view to_string(FillerKind k) {
  switch (k) {
    case FillerKind::None: return "none";
    case FillerKind::Acceptable: return "acceptable";
    case FillerKind::Violation: return "violation";
  }
  return "?";
}

FillerKind filler_kind_from_string(std::string_view s) {
  if (s == "none") return FillerKind::None;
  if (s == "acceptable") return FillerKind::Acceptable;
  if (s == "violation") return FillerKind::Violation;
  throw SchemaError("unknown filler kind '" + std::string(s) + "'");
}

namespace {

constexpr std::string_view kHeader =
    "annotator_id\tsentence_id\traw\ttimestamp\tis_filler\tfiller_kind\twarmup";

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

bool parse_flag(const std::string& s, std::size_t line_no) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw SchemaError("annotation line " + std::to_string(line_no) + ": bad flag '" + s + "'");
}

}  // namespace

void write_annotations(std::ostream& out, std::span<const AnnotationRecord> records) {
  out << kHeader << '\n';
  for (const auto& r : records) {
    out << r.annotator_id << '\t' << r.sentence_id << '\t' << r.raw << '\t' << r.timestamp << '\t'
        << (r.is_filler ? 1 : 0) << '\t' << to_string(r.filler_kind) << '\t' << (r.warmup ? 1 : 0) << '\n';
  }
}

std::vector<AnnotationRecord> read_annotations(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw SchemaError("annotation file: missing header");
  std::vector<AnnotationRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != 7) throw SchemaError("annotation line " + std::to_string(line_no) + ": expected 7 fields");
    AnnotationRecord r;
    r.annotator_id = f[0];
    r.sentence_id = f[1];
    std::size_t used = 0;
    try {
      r.raw = std::stoi(f[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f[2].size() || f[2].empty()) {
      throw SchemaError("annotation line " + std::to_string(line_no) + ": bad rating '" + f[2] + "'");
    }
    if (r.raw < kMinRating || r.raw > kMaxRating) {
      throw SchemaError("annotation line " + std::to_string(line_no) + ": rating " + f[2] + " outside 0..99");
    }
    r.timestamp = f[3];
    r.is_filler = parse_flag(f[4], line_no);
    r.filler_kind = filler_kind_from_string(f[5]);
    r.warmup = parse_flag(f[6], line_no);
    if (r.annotator_id.empty() || r.sentence_id.empty()) {
      throw SchemaError("annotation line " + std::to_string(line_no) + ": empty id");
    }
    if (r.is_filler != (r.filler_kind != FillerKind::None)) {
      throw SchemaError("annotation line " + std::to_string(line_no) + ": is_filler disagrees with filler_kind");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AnnotationRecord> read_annotations_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file " + path.string());
  return read_annotations(in);
}

QcResult qc_filter(std::span<const AnnotationRecord> records) {
  struct Sums {
    double acc = 0.0, viol = 0.0;
    std::size_t n_acc = 0, n_viol = 0;
  };
  std::map<std::string, Sums> by_annotator;
  for (const auto& r : records) {
    if (r.warmup) continue;
    auto& s = by_annotator[r.annotator_id];
    if (r.filler_kind == FillerKind::Acceptable) {
      s.acc += r.raw;
      ++s.n_acc;
    } else if (r.filler_kind == FillerKind::Violation) {
      s.viol += r.raw;
      ++s.n_viol;
    }
  }
  QcResult out;
  for (const auto& [annotator, s] : by_annotator) {
    if (s.n_acc == 0 || s.n_viol == 0) {
      out.removed.insert(annotator);
      out.warnings.push_back("annotator '" + annotator + "' lacks " +
                             (s.n_acc == 0 ? "acceptable" : "violation") + " fillers; excluded");
      continue;
    }
    double mean_acc = s.acc / static_cast<double>(s.n_acc);
    double mean_viol = s.viol / static_cast<double>(s.n_viol);
    if (mean_acc > mean_viol) {
      out.retained.insert(annotator);
    } else {
      out.removed.insert(annotator);
    }
  }
  return out;
}

NormalizationResult normalize_annotations(std::span<const AnnotationRecord> records,
                                          const std::set<std::string>* retained) {
  std::map<std::string, std::vector<const AnnotationRecord*>> by_annotator;
  for (const auto& r : records) {
    if (r.is_filler || r.warmup) continue;
    if (retained != nullptr && !retained->count(r.annotator_id)) continue;
    by_annotator[r.annotator_id].push_back(&r);
  }

  NormalizationResult out;
  std::unordered_map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& [annotator, recs] : by_annotator) {
    const double n = static_cast<double>(recs.size());
    double mean = 0.0;
    for (const auto* r : recs) mean += r->raw;
    mean /= n;
    double var = 0.0;
    for (const auto* r : recs) var += (r->raw - mean) * (r->raw - mean);
    double sd = std::sqrt(var / n);
    if (sd == 0.0) out.warnings.push_back("annotator '" + annotator + "' gave constant ratings; normalized to 0");

    auto& zs = out.per_annotator[annotator];
    for (const auto* r : recs) {
      double z = sd == 0.0 ? 0.0 : (r->raw - mean) / sd;
      zs.push_back({r->sentence_id, z});
      auto& [s, k] = sums[r->sentence_id];
      s += z;
      ++k;
    }
  }
  for (const auto& [id, sk] : sums) out.sentence_scores[id] = sk.first / static_cast<double>(sk.second);
  return out;
}

}  // namespace argprobe
