#include "argprobe/score_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "argprobe/error.hpp"

namespace argprobe {

void ScoreTable::insert(std::string id, double score) {
  if (!std::isfinite(score)) throw SchemaError("score for '" + id + "' is not finite");
  auto [it, inserted] = entries_.emplace(std::move(id), score);
  if (!inserted) throw SchemaError("duplicate score for '" + it->first + "'");
}

std::optional<double> ScoreTable::find(std::string_view id) const {
  auto it = entries_.find(std::string(id));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double ScoreTable::at(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw LookupError("no score for '" + std::string(id) + "'");
}

void export_requests(std::ostream& out, const Dataset& dataset) {
  for (const auto& rec : dataset.records()) out << rec.id << '\t' << rec.text << '\n';
}

std::string format_decimal(double value) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (res.ec != std::errc()) throw Error("cannot format score");
  return std::string(buf, res.ptr);
}

ScoreTable import_scores(std::istream& in, std::string scorer_name, const Dataset* dataset) {
  ScoreTable table(std::move(scorer_name));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto where = [&] { return "score line " + std::to_string(line_no) + ": "; };
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw SchemaError(where() + "expected '<id>\\t<score>'");
    std::string id = line.substr(0, tab);
    std::string_view num(line.data() + tab + 1, line.size() - tab - 1);
    double value = 0.0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (num.empty() || res.ec != std::errc() || res.ptr != num.data() + num.size()) {
      throw SchemaError(where() + "malformed score '" + std::string(num) + "' for '" + id + "'");
    }
    if (!std::isfinite(value)) {
      throw SchemaError(where() + "score for '" + id + "' is not finite");
    }
    if (dataset != nullptr && dataset->find(id) == nullptr) {
      throw LookupError(where() + "unknown sentence id '" + id + "'");
    }
    if (table.find(id)) throw SchemaError(where() + "duplicate sentence id '" + id + "'");
    table.insert(std::move(id), value);
  }
  return table;
}

ScoreTable import_scores_file(const std::filesystem::path& path, std::string scorer_name,
                              const Dataset* dataset) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open score file " + path.string());
  return import_scores(in, std::move(scorer_name), dataset);
}

std::vector<std::string> missing_ids(const ScoreTable& table, const Dataset& dataset) {
  std::vector<std::string> missing;
  for (const auto& rec : dataset.records())
    if (!table.find(rec.id)) missing.push_back(rec.id);
  return missing;
}

void write_scores(std::ostream& out, const ScoreTable& table, const Dataset& dataset) {
  for (const auto& rec : dataset.records()) {
    if (auto v = table.find(rec.id)) out << rec.id << '\t' << format_decimal(*v) << '\n';
  }
}

void write_scores(std::ostream& out, const ScoreTable& table) {
  std::vector<std::pair<std::string_view, double>> rows(table.entries().begin(), table.entries().end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [id, v] : rows) out << id << '\t' << format_decimal(v) << '\n';
}

ScoreTable score_dataset_serial(const NgramModel& model, const Dataset& dataset,
                                std::string scorer_name, const ScoreOptions& options) {
  ScoreTable table(std::move(scorer_name));
  for (const auto& rec : dataset.records()) table.insert(rec.id, score_sentence(model, rec.text, options));
  return table;
}

ScoreTable score_dataset(const NgramModel& model, const Dataset& dataset, std::string scorer_name,
                         const ScoreOptions& options) {
  const auto& records = dataset.records();
  const auto n = static_cast<std::ptrdiff_t>(records.size());
  std::vector<double> scores(records.size());
  std::vector<std::string> errors(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      scores[i] = score_sentence(model, records[i].text, options);
    } catch (const std::exception& e) {
      errors[i] = records[i].id + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  ScoreTable table(std::move(scorer_name));
  for (std::size_t i = 0; i < records.size(); ++i) table.insert(records[i].id, scores[i]);
  return table;
}

}  // namespace argprobe
