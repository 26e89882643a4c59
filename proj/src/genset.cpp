#include "argprobe/genset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "argprobe/error.hpp"

namespace argprobe {

std::string_view to_string(ViolationType v) {
  switch (v) {
    case ViolationType::None: return "none";
    case ViolationType::DoubleNom: return "double_NOM";
    case ViolationType::DoubleAcc: return "double_ACC";
    case ViolationType::DoubleDat: return "double_DAT";
  }
  return "?";
}

ViolationType violation_type_from_string(std::string_view s) {
  if (s == "none") return ViolationType::None;
  if (s == "double_NOM") return ViolationType::DoubleNom;
  if (s == "double_ACC") return ViolationType::DoubleAcc;
  if (s == "double_DAT") return ViolationType::DoubleDat;
  throw SchemaError("unknown violation_type '" + std::string(s) + "'");
}

std::string_view to_string(Restriction r) {
  switch (r) {
    case Restriction::All: return "all";
    case Restriction::DoubleNom: return "nom";
    case Restriction::DoubleAcc: return "acc";
    case Restriction::DoubleDat: return "dat";
  }
  return "?";
}

Restriction restriction_from_string(std::string_view s) {
  if (s == "all" || s == "1-6") return Restriction::All;
  if (s == "nom" || s == "double_NOM") return Restriction::DoubleNom;
  if (s == "acc" || s == "double_ACC") return Restriction::DoubleAcc;
  if (s == "dat" || s == "double_DAT") return Restriction::DoubleDat;
  throw SchemaError("unknown restriction '" + std::string(s) + "'");
}

std::string_view restriction_title(Restriction r) {
  switch (r) {
    case Restriction::All: return "1-6";
    case Restriction::DoubleNom: return "1-2 nom";
    case Restriction::DoubleAcc: return "1-2 acc";
    case Restriction::DoubleDat: return "1-2 dat";
  }
  return "?";
}

Restriction restriction_for(Case doubled) {
  switch (doubled) {
    case Case::Nom: return Restriction::DoubleNom;
    case Case::Acc: return Restriction::DoubleAcc;
    case Case::Dat: return Restriction::DoubleDat;
  }
  return Restriction::All;
}

std::string case_order_label(const CaseSequence& seq) {
  return {case_code(seq[0]), case_code(seq[1]), case_code(seq[2])};
}

CaseSequence case_sequence_from_label(std::string_view label) {
  if (label.size() != 3) throw SchemaError("case sequence must have 3 letters: '" + std::string(label) + "'");
  return {case_from_code(label[0]), case_from_code(label[1]), case_from_code(label[2])};
}

std::string arrangement_label(const Arrangement& arr) {
  return {static_cast<char>('0' + arr[0]), static_cast<char>('0' + arr[1]),
          static_cast<char>('0' + arr[2])};
}

Arrangement arrangement_from_label(std::string_view label) {
  if (label.size() != 3) throw SchemaError("arrangement must have 3 digits: '" + std::string(label) + "'");
  Arrangement arr{};
  for (int k = 0; k < 3; ++k) arr[k] = label[k] - '0';
  auto sorted = arr;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != Arrangement{1, 2, 3}) {
    throw SchemaError("arrangement is not a permutation of 123: '" + std::string(label) + "'");
  }
  return arr;
}

bool is_permutation_of_cases(const CaseSequence& seq) {
  return seq[0] != seq[1] && seq[0] != seq[2] && seq[1] != seq[2];
}

ViolationType violation_type_of(const CaseSequence& seq) {
  if (is_permutation_of_cases(seq)) return ViolationType::None;
  if (seq[0] == seq[1] && seq[1] == seq[2]) {
    throw SchemaError("case sequence " + case_order_label(seq) + " repeats one case three times");
  }
  Case doubled = seq[0] == seq[1] || seq[0] == seq[2] ? seq[0] : seq[1];
  switch (doubled) {
    case Case::Nom: return ViolationType::DoubleNom;
    case Case::Acc: return ViolationType::DoubleAcc;
    case Case::Dat: return ViolationType::DoubleDat;
  }
  return ViolationType::None;
}

namespace {

// Role reporting order: ag, re, pa.
int role_rank(Case c) {
  switch (c) {
    case Case::Nom: return 0;
    case Case::Dat: return 1;
    case Case::Acc: return 2;
  }
  return 3;
}

const char* role_prefix(Case c) {
  switch (c) {
    case Case::Nom: return "ag";
    case Case::Acc: return "pa";
    case Case::Dat: return "re";
  }
  return "?";
}

}  // namespace

std::string role_label(const CaseSequence& seq, const Arrangement& arr) {
  std::array<std::pair<int, int>, 3> entries{};
  for (int k = 0; k < 3; ++k) entries[k] = {role_rank(seq[k]), arr[k]};
  std::sort(entries.begin(), entries.end());
  std::string out;
  for (const auto& [rank, item] : entries) {
    if (!out.empty()) out += ',';
    Case c = rank == 0 ? Case::Nom : rank == 1 ? Case::Dat : Case::Acc;
    out += role_prefix(c);
    out += std::to_string(item);
  }
  return out;
}

const std::array<std::string, 6>& canonical_role_labels() {
  static const std::array<std::string, 6> labels{"ag1,re2,pa3", "ag2,re1,pa3", "ag1,re3,pa2",
                                                 "ag2,re3,pa1", "ag3,re1,pa2", "ag3,re2,pa1"};
  return labels;
}

const std::array<std::string, 6>& canonical_case_orders() {
  static const std::array<std::string, 6> orders{"NDA", "NAD", "DNA", "AND", "DAN", "ADN"};
  return orders;
}

namespace {

std::vector<CaseSequence> all_sequences() {
  std::vector<CaseSequence> out;
  for (Case a : kAllCases)
    for (Case b : kAllCases)
      for (Case c : kAllCases) out.push_back({a, b, c});
  return out;
}

}  // namespace

const std::vector<CaseSequence>& acceptable_case_sequences() {
  static const std::vector<CaseSequence> seqs = [] {
    std::vector<CaseSequence> out;
    for (const auto& s : all_sequences())
      if (is_permutation_of_cases(s)) out.push_back(s);
    return out;
  }();
  return seqs;
}

const std::vector<CaseSequence>& violating_case_sequences() {
  static const std::vector<CaseSequence> seqs = [] {
    std::vector<CaseSequence> out;
    for (const auto& s : all_sequences()) {
      bool all_same = s[0] == s[1] && s[1] == s[2];
      if (!is_permutation_of_cases(s) && !all_same) out.push_back(s);
    }
    return out;
  }();
  return seqs;
}

const std::vector<Arrangement>& all_arrangements() {
  static const std::vector<Arrangement> arrs = [] {
    std::vector<Arrangement> out;
    Arrangement a{1, 2, 3};
    do out.push_back(a);
    while (std::next_permutation(a.begin(), a.end()));
    return out;
  }();
  return arrs;
}

namespace {

std::string required_string(const nlohmann::json& rec, const char* field, std::size_t line_no) {
  auto it = rec.find(field);
  if (it == rec.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw SchemaError("template line " + std::to_string(line_no) + ": missing field '" + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Template> load_templates(std::istream& in) {
  std::vector<Template> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("template line " + std::to_string(line_no) + ": " + e.what());
    }
    Template tpl;
    tpl.id = required_string(rec, "id", line_no);
    tpl.prefix = required_string(rec, "prefix", line_no);
    tpl.verb = required_string(rec, "verb", line_no);
    auto items = rec.find("items");
    if (items == rec.end() || !items->is_array() || items->size() != 3) {
      throw SchemaError("template '" + tpl.id + "': 'items' must list exactly 3 lexeme ids");
    }
    for (int k = 0; k < 3; ++k) {
      if (!(*items)[k].is_string()) throw SchemaError("template '" + tpl.id + "': item ids must be strings");
      tpl.items[k] = (*items)[k].get<std::string>();
    }
    if (auto dets = rec.find("determiners"); dets != rec.end() && !dets->is_null()) {
      if (!dets->is_array() || dets->size() != 3) {
        throw SchemaError("template '" + tpl.id + "': 'determiners' must have 3 entries");
      }
      for (int k = 0; k < 3; ++k) {
        if ((*dets)[k].is_string()) tpl.determiners[k] = determiner_class_from_string((*dets)[k].get<std::string>());
      }
    }
    if (auto g = rec.find("gloss"); g != rec.end() && g->is_string()) tpl.gloss = g->get<std::string>();
    out.push_back(std::move(tpl));
  }
  return out;
}

std::vector<Template> load_templates_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open template file " + path.string());
  return load_templates(in);
}

std::vector<std::string> validate_template(const Template& tpl, const Lexicon& lexicon) {
  if (tpl.id.empty() || tpl.id.find_first_of(": \t\n") != std::string::npos) {
    throw SchemaError("template id '" + tpl.id + "' must be non-empty without ':' or whitespace");
  }
  std::vector<std::string> warnings;
  for (int k = 0; k < 3; ++k) {
    const Lexeme* lx = lexicon.find(tpl.items[k]);
    if (lx == nullptr) {
      throw LookupError("template '" + tpl.id + "': unknown lexeme '" + tpl.items[k] + "'");
    }
    Animacy expected = k < 2 ? Animacy::Human : Animacy::Inanimate;
    if (lx->animacy != expected) {
      warnings.push_back("template '" + tpl.id + "': item " + std::to_string(k + 1) + " ('" +
                         lx->id + "') is " + std::string(to_string(lx->animacy)) +
                         ", expected " + std::string(to_string(expected)));
    }
  }
  if (tpl.items[0] == tpl.items[1] || tpl.items[0] == tpl.items[2] || tpl.items[1] == tpl.items[2]) {
    throw SchemaError("template '" + tpl.id + "': the three items must be distinct lexemes");
  }
  return warnings;
}

std::string sentence_id(std::string_view template_id, const CaseSequence& seq,
                        const Arrangement& arr) {
  std::string id(template_id);
  id += ':';
  id += case_order_label(seq);
  id += ':';
  id += arrangement_label(arr);
  return id;
}

std::string realize(const Template& tpl, const CaseSequence& seq, const Arrangement& arr,
                    const Lexicon& lexicon) {
  std::string text = tpl.prefix;
  for (int k = 0; k < 3; ++k) {
    int slot = arr[k] - 1;
    text += ' ';
    text += inflect(lexicon, tpl.items[slot], seq[k], tpl.determiners[slot]);
  }
  text += ' ';
  text += tpl.verb;
  text += '.';
  return text;
}

SentenceRecord make_record(const Template& tpl, const CaseSequence& seq, const Arrangement& arr,
                           const Lexicon& lexicon) {
  SentenceRecord rec;
  rec.id = sentence_id(tpl.id, seq, arr);
  rec.template_id = tpl.id;
  rec.text = realize(tpl, seq, arr, lexicon);
  rec.case_sequence = seq;
  rec.arrangement = arr;
  rec.role_label = role_label(seq, arr);
  rec.violation_type = violation_type_of(seq);
  rec.acceptable = rec.violation_type == ViolationType::None;
  return rec;
}

namespace {

std::vector<SentenceRecord> enumerate(const Template& tpl, const Lexicon& lexicon,
                                      const std::vector<CaseSequence>& seqs) {
  std::vector<SentenceRecord> out;
  out.reserve(seqs.size() * 6);
  for (const auto& seq : seqs)
    for (const auto& arr : all_arrangements()) out.push_back(make_record(tpl, seq, arr, lexicon));
  return out;
}

}  // namespace

std::vector<SentenceRecord> enumerate_acceptable(const Template& tpl, const Lexicon& lexicon) {
  return enumerate(tpl, lexicon, acceptable_case_sequences());
}

std::vector<SentenceRecord> enumerate_violations(const Template& tpl, const Lexicon& lexicon) {
  return enumerate(tpl, lexicon, violating_case_sequences());
}

std::vector<std::string> MinimalVariationSet::members(Restriction r) const {
  auto pick = [this](Case c) {
    const auto& pair = by_doubled_case[static_cast<int>(c)];
    return std::vector<std::string>{pair[0], pair[1]};
  };
  switch (r) {
    case Restriction::DoubleNom: return pick(Case::Nom);
    case Restriction::DoubleAcc: return pick(Case::Acc);
    case Restriction::DoubleDat: return pick(Case::Dat);
    case Restriction::All: break;
  }
  std::vector<std::string> all;
  for (const auto& pair : by_doubled_case) all.insert(all.end(), pair.begin(), pair.end());
  return all;
}

std::array<std::array<CaseSequence, 2>, 3> minimal_variations(const CaseSequence& acceptable) {
  if (!is_permutation_of_cases(acceptable)) {
    throw SchemaError("minimal variations are defined for acceptable sequences only, got " +
                      case_order_label(acceptable));
  }
  std::array<std::array<CaseSequence, 2>, 3> out{};
  for (Case doubled : kAllCases) {
    int n = 0;
    for (int pos = 0; pos < 3; ++pos) {
      if (acceptable[pos] == doubled) continue;
      CaseSequence v = acceptable;
      v[pos] = doubled;
      out[static_cast<int>(doubled)][n++] = v;
    }
  }
  return out;
}

Dataset::Dataset(std::vector<SentenceRecord> records) : records_(std::move(records)) {
  by_id_.reserve(records_.size());
  std::unordered_set<std::string> templates;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!by_id_.emplace(records_[i].id, i).second) {
      throw SchemaError("duplicate sentence id '" + records_[i].id + "'");
    }
    templates.insert(records_[i].template_id);
  }
  template_count_ = templates.size();
  for (const auto& rec : records_) {
    if (!rec.acceptable) continue;
    MinimalVariationSet set;
    set.acceptable_id = rec.id;
    auto variations = minimal_variations(rec.case_sequence);
    for (int c = 0; c < 3; ++c) {
      for (int j = 0; j < 2; ++j) {
        auto id = sentence_id(rec.template_id, variations[c][j], rec.arrangement);
        if (!by_id_.count(id)) {
          throw SchemaError("acceptable sentence '" + rec.id + "' lacks its variation '" + id + "'");
        }
        set.by_doubled_case[c][j] = std::move(id);
      }
    }
    set_by_anchor_.emplace(rec.id, sets_.size());
    sets_.push_back(std::move(set));
  }
}

const SentenceRecord* Dataset::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

const SentenceRecord& Dataset::at(std::string_view id) const {
  if (const auto* rec = find(id)) return *rec;
  throw LookupError("unknown sentence id '" + std::string(id) + "'");
}

const MinimalVariationSet& Dataset::set_for(std::string_view acceptable_id) const {
  auto it = set_by_anchor_.find(std::string(acceptable_id));
  if (it == set_by_anchor_.end()) {
    at(acceptable_id);  // throws for unknown ids
    throw LookupError("sentence '" + std::string(acceptable_id) + "' is not acceptable");
  }
  return sets_[it->second];
}

Dataset build_dataset(const std::vector<Template>& templates, const Lexicon& lexicon) {
  if (templates.empty()) throw SchemaError("at least one template is required");
  std::set<std::string> ids;
  for (const auto& tpl : templates) {
    validate_template(tpl, lexicon);
    if (!ids.insert(tpl.id).second) throw SchemaError("duplicate template id '" + tpl.id + "'");
  }

  const auto n = static_cast<std::ptrdiff_t>(templates.size());
  std::vector<std::vector<SentenceRecord>> parts(templates.size());
  std::vector<std::string> failures(templates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    try {
      auto part = enumerate_acceptable(templates[t], lexicon);
      auto viol = enumerate_violations(templates[t], lexicon);
      part.insert(part.end(), std::make_move_iterator(viol.begin()),
                  std::make_move_iterator(viol.end()));
      std::unordered_set<std::string_view> texts;
      for (const auto& rec : part) {
        if (!texts.insert(rec.text).second) {
          failures[t] = "template '" + templates[t].id + "' yields duplicate sentence '" + rec.text + "'";
          break;
        }
      }
      parts[t] = std::move(part);
    } catch (const std::exception& e) {
      failures[t] = e.what();
    }
  }
  for (const auto& f : failures)
    if (!f.empty()) throw SchemaError(f);

  std::vector<SentenceRecord> all;
  all.reserve(templates.size() * 144);
  for (auto& part : parts)
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  return Dataset(std::move(all));
}

std::vector<std::string> minimal_variation_set(const Dataset& dataset,
                                               std::string_view acceptable_id,
                                               Restriction restriction) {
  return dataset.set_for(acceptable_id).members(restriction);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  for (const auto& rec : dataset.records()) {
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["template_id"] = rec.template_id;
    j["text"] = rec.text;
    j["case_sequence"] = case_order_label(rec.case_sequence);
    j["arrangement"] = arrangement_label(rec.arrangement);
    j["role_label"] = rec.role_label;
    j["acceptable"] = rec.acceptable;
    j["violation_type"] = to_string(rec.violation_type);
    out << j.dump() << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::vector<SentenceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      SentenceRecord rec;
      rec.id = j.at("id").get<std::string>();
      rec.template_id = j.at("template_id").get<std::string>();
      rec.text = j.at("text").get<std::string>();
      rec.case_sequence = case_sequence_from_label(j.at("case_sequence").get<std::string>());
      rec.arrangement = arrangement_from_label(j.at("arrangement").get<std::string>());
      rec.role_label = j.at("role_label").get<std::string>();
      rec.acceptable = j.at("acceptable").get<bool>();
      rec.violation_type = violation_type_from_string(j.at("violation_type").get<std::string>());
      if (rec.acceptable != (rec.violation_type == ViolationType::None) ||
          rec.violation_type != violation_type_of(rec.case_sequence)) {
        throw SchemaError("inconsistent acceptability fields");
      }
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("dataset line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Dataset(std::move(records));
}

Dataset read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file " + path.string());
  return read_dataset(in);
}

constexpr const char* kDoubledNames[3] = {"NOM", "ACC", "DAT"};

void write_set_index(std::ostream& out, const Dataset& dataset) {
  for (const auto& set : dataset.sets()) {
    nlohmann::ordered_json j;
    j["acceptable_id"] = set.acceptable_id;
    for (Case c : kAllCases) {
      const auto& pair = set.by_doubled_case[static_cast<int>(c)];
      j[std::string("double_") + kDoubledNames[static_cast<int>(c)]] = {pair[0], pair[1]};
    }
    out << j.dump() << '\n';
  }
}

}  // namespace argprobe
