#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "argprobe/genset.hpp"
#include "argprobe/ngram.hpp"

namespace argprobe {

/// Sentence id -> score (higher = more acceptable). Scores are finite and ids unique.
class ScoreTable {
 public:
  ScoreTable() = default;
  explicit ScoreTable(std::string scorer_name) : scorer_name_(std::move(scorer_name)) {}

  const std::string& scorer_name() const { return scorer_name_; }
  void set_scorer_name(std::string name) { scorer_name_ = std::move(name); }

  /// Throws on a duplicate id or a non-finite score.
  void insert(std::string id, double score);
  std::optional<double> find(std::string_view id) const;
  double at(std::string_view id) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::unordered_map<std::string, double>& entries() const { return entries_; }

 private:
  std::string scorer_name_;
  std::unordered_map<std::string, double> entries_;
};

/// Request file for external scorers: "<id>\t<text>\n" per sentence in dataset order.
void export_requests(std::ostream& out, const Dataset& dataset);

/// Parses "<id>\t<score>\n" lines. With a dataset, ids absent from it are rejected
/// (naming the line). Duplicates and NaN/infinite scores are rejected.
ScoreTable import_scores(std::istream& in, std::string scorer_name, const Dataset* dataset = nullptr);
ScoreTable import_scores_file(const std::filesystem::path& path, std::string scorer_name,
                              const Dataset* dataset = nullptr);

/// Dataset ids without a score, in dataset order.
std::vector<std::string> missing_ids(const ScoreTable& table, const Dataset& dataset);

/// Writes scores in dataset order (ids not in the dataset are skipped), shortest
/// round-trip decimal notation.
void write_scores(std::ostream& out, const ScoreTable& table, const Dataset& dataset);
/// Writes every entry sorted by id.
void write_scores(std::ostream& out, const ScoreTable& table);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_decimal(double value);

/// Scores every dataset sentence with an n-gram model.
ScoreTable score_dataset(const NgramModel& model, const Dataset& dataset, std::string scorer_name,
                         const ScoreOptions& options = {});
ScoreTable score_dataset_serial(const NgramModel& model, const Dataset& dataset,
                                std::string scorer_name, const ScoreOptions& options = {});

}  // namespace argprobe
