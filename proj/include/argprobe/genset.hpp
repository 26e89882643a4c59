#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "argprobe/lexicon.hpp"

namespace argprobe {

/// Cases of the three NPs, left to right.
using CaseSequence = std::array<Case, 3>;
/// Lexical item number (1..3) found at each position, left to right.
using Arrangement = std::array<int, 3>;

enum class ViolationType { None, DoubleNom, DoubleAcc, DoubleDat };

/// Which unacceptable members of a minimal variation set are used.
enum class Restriction { All, DoubleNom, DoubleAcc, DoubleDat };

inline constexpr std::array<Restriction, 4> kAllRestrictions{
    Restriction::All, Restriction::DoubleNom, Restriction::DoubleAcc, Restriction::DoubleDat};

std::string_view to_string(ViolationType v);
ViolationType violation_type_from_string(std::string_view s);
/// "all", "nom", "acc", "dat".
std::string_view to_string(Restriction r);
Restriction restriction_from_string(std::string_view s);
/// Row label used in summary tables: "1-6", "1-2 nom", ...
std::string_view restriction_title(Restriction r);
Restriction restriction_for(Case doubled);

std::string case_order_label(const CaseSequence& seq);
CaseSequence case_sequence_from_label(std::string_view label);
std::string arrangement_label(const Arrangement& arr);
Arrangement arrangement_from_label(std::string_view label);

bool is_permutation_of_cases(const CaseSequence& seq);
/// None for permutations; otherwise the duplicated case. Throws for all-same sequences.
ViolationType violation_type_of(const CaseSequence& seq);

/// Position k's item takes the role of position k's case (N: ag, A: pa, D: re).
/// Entries are listed ag, re, pa and then by item number: "ag1,re2,pa3", "ag1,ag2,pa3".
std::string role_label(const CaseSequence& seq, const Arrangement& arr);

/// The six role labels of well-formed (acceptable) sentences, most plausible first.
const std::array<std::string, 6>& canonical_role_labels();
/// The six case orders, least marked first (NDA, NAD, DNA, AND, DAN, ADN).
const std::array<std::string, 6>& canonical_case_orders();

/// All 6 case permutations in lexicographic order with N < A < D.
const std::vector<CaseSequence>& acceptable_case_sequences();
/// The 18 sequences with exactly one duplicated case, same order.
const std::vector<CaseSequence>& violating_case_sequences();
/// The 6 arrangements in lexicographic order.
const std::vector<Arrangement>& all_arrangements();

struct Template {
  std::string id;
  std::string prefix;  // ends with the complementizer
  std::string verb;    // clause-final verb
  std::array<std::string, 3> items;
  /// Per-slot override of the lexeme's determiner class.
  std::array<std::optional<DeterminerClass>, 3> determiners{};
  std::optional<std::string> gloss;
};

/// Reads one JSON object per line: id, prefix, verb, items (3 lexeme ids), optional
/// determiners (3 entries, null or a determiner class) and gloss.
std::vector<Template> load_templates(std::istream& in);
std::vector<Template> load_templates_file(const std::filesystem::path& path);

/// Hard errors (missing lexemes, repeated items, bad id) throw; soft issues such as
/// item animacy not matching the usual human/human/inanimate pattern are returned.
std::vector<std::string> validate_template(const Template& tpl, const Lexicon& lexicon);

std::string sentence_id(std::string_view template_id, const CaseSequence& seq,
                        const Arrangement& arr);

struct SentenceRecord {
  std::string id;
  std::string template_id;
  std::string text;
  CaseSequence case_sequence{};
  Arrangement arrangement{};
  std::string role_label;
  bool acceptable = false;
  ViolationType violation_type = ViolationType::None;

  bool operator==(const SentenceRecord&) const = default;
};

std::string realize(const Template& tpl, const CaseSequence& seq, const Arrangement& arr,
                    const Lexicon& lexicon);

SentenceRecord make_record(const Template& tpl, const CaseSequence& seq, const Arrangement& arr,
                           const Lexicon& lexicon);

/// 36 records: case sequences outer, arrangements inner, both lexicographic.
std::vector<SentenceRecord> enumerate_acceptable(const Template& tpl, const Lexicon& lexicon);
/// 108 records, same ordering convention over the 18 violating sequences.
std::vector<SentenceRecord> enumerate_violations(const Template& tpl, const Lexicon& lexicon);

/// One acceptable anchor and its six single-position case changes, two per doubled case.
struct MinimalVariationSet {
  std::string acceptable_id;
  std::array<std::array<std::string, 2>, 3> by_doubled_case;  // indexed by Case

  std::vector<std::string> members(Restriction r) const;
};

/// The six neighbours of an acceptable sequence, grouped by the doubled case.
std::array<std::array<CaseSequence, 2>, 3> minimal_variations(const CaseSequence& acceptable);

class Dataset {
 public:
  Dataset() = default;
  /// Builds the id index and the minimal variation index; throws on duplicate ids or
  /// when an acceptable record's variations are missing.
  explicit Dataset(std::vector<SentenceRecord> records);

  const std::vector<SentenceRecord>& records() const { return records_; }
  const std::vector<MinimalVariationSet>& sets() const { return sets_; }
  std::size_t size() const { return records_.size(); }
  std::size_t acceptable_count() const { return sets_.size(); }
  std::size_t template_count() const { return template_count_; }

  const SentenceRecord* find(std::string_view id) const;
  const SentenceRecord& at(std::string_view id) const;
  const MinimalVariationSet& set_for(std::string_view acceptable_id) const;

 private:
  std::vector<SentenceRecord> records_;
  std::vector<MinimalVariationSet> sets_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> set_by_anchor_;
  std::size_t template_count_ = 0;
};

/// 144 records per template, templates in input order. Templates are generated in
/// parallel and merged in input order. Throws on duplicate template ids or duplicate
/// surface strings within a template.
Dataset build_dataset(const std::vector<Template>& templates, const Lexicon& lexicon);

/// Member ids of the anchor's set under a restriction: 6 for All, 2 otherwise.
std::vector<std::string> minimal_variation_set(const Dataset& dataset,
                                               std::string_view acceptable_id,
                                               Restriction restriction);

/// One JSON object per line with the stable field set
/// id, template_id, text, case_sequence, arrangement, role_label, acceptable, violation_type.
void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::filesystem::path& path);
/// One JSON object per acceptable sentence: acceptable_id, double_NOM, double_ACC, double_DAT.
void write_set_index(std::ostream& out, const Dataset& dataset);

}  // namespace argprobe
