#include "argprobe/evaluate.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "argprobe/error.hpp"
#include "argprobe/metrics.hpp"

namespace argprobe {

namespace {

void require_coverage(const Dataset& dataset, const ScoreTable& scores, Restriction restriction) {
  std::vector<std::string> missing;
  for (const auto& set : dataset.sets()) {
    if (!scores.find(set.acceptable_id)) missing.push_back(set.acceptable_id);
    for (const auto& id : set.members(restriction))
      if (!scores.find(id)) missing.push_back(id);
  }
  if (missing.empty()) return;
  std::string msg = "scores for '" + scores.scorer_name() + "' miss " + std::to_string(missing.size()) +
                    " evaluated sentence(s):";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) msg += " " + missing[i];
  if (shown < missing.size()) msg += " ...";
  throw LookupError(msg);
}

SetAuc evaluate_one(const Dataset& dataset, const MinimalVariationSet& set, const ScoreTable& scores,
                    Restriction restriction) {
  const auto& anchor = dataset.at(set.acceptable_id);
  std::array<double, 1> positive{scores.at(set.acceptable_id)};
  std::vector<double> negatives;
  for (const auto& id : set.members(restriction)) negatives.push_back(scores.at(id));
  return SetAuc{anchor.id,
                restriction,
                auc(positive, negatives),
                case_order_label(anchor.case_sequence),
                anchor.role_label,
                anchor.template_id};
}

}  // namespace

std::vector<SetAuc> evaluate_sets_serial(const Dataset& dataset, const ScoreTable& scores,
                                         Restriction restriction) {
  require_coverage(dataset, scores, restriction);
  std::vector<SetAuc> out;
  out.reserve(dataset.sets().size());
  for (const auto& set : dataset.sets()) out.push_back(evaluate_one(dataset, set, scores, restriction));
  return out;
}

std::vector<SetAuc> evaluate_sets(const Dataset& dataset, const ScoreTable& scores,
                                  Restriction restriction) {
  require_coverage(dataset, scores, restriction);
  const auto& sets = dataset.sets();
  const auto n = static_cast<std::ptrdiff_t>(sets.size());
  std::vector<SetAuc> out(sets.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = evaluate_one(dataset, sets[i], scores, restriction);
  return out;
}

namespace {
constexpr std::string_view kHeader = "acceptable_id\trestriction\tauc\tcase_order\trole_label\ttemplate_id";
}

void write_set_aucs(std::ostream& out, const std::vector<SetAuc>& aucs) {
  out << kHeader << '\n';
  for (const auto& a : aucs) {
    out << a.acceptable_id << '\t' << to_string(a.restriction) << '\t' << format_decimal(a.auc) << '\t'
        << a.case_order << '\t' << a.role_label << '\t' << a.template_id << '\n';
  }
}

std::vector<SetAuc> read_set_aucs(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw SchemaError("per-set AUC file: missing header");
  std::vector<SetAuc> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      auto pos = line.find('\t', start);
      f.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (f.size() != 6) throw SchemaError("per-set AUC line " + std::to_string(line_no) + ": expected 6 fields");
    SetAuc a;
    a.acceptable_id = f[0];
    a.restriction = restriction_from_string(f[1]);
    auto res = std::from_chars(f[2].data(), f[2].data() + f[2].size(), a.auc);
    if (res.ec != std::errc() || res.ptr != f[2].data() + f[2].size() || !(a.auc >= 0.0 && a.auc <= 1.0)) {
      throw SchemaError("per-set AUC line " + std::to_string(line_no) + ": bad AUC '" + f[2] + "'");
    }
    a.case_order = f[3];
    a.role_label = f[4];
    a.template_id = f[5];
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<SetAuc> read_set_aucs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open per-set AUC file " + path.string());
  return read_set_aucs(in);
}

void write_roc_points(std::ostream& out, const Dataset& dataset, const ScoreTable& scores,
                      Restriction restriction) {
  require_coverage(dataset, scores, restriction);
  out << "acceptable_id,restriction,fpr,tpr\n";
  for (const auto& set : dataset.sets()) {
    std::array<double, 1> positive{scores.at(set.acceptable_id)};
    std::vector<double> negatives;
    for (const auto& id : set.members(restriction)) negatives.push_back(scores.at(id));
    for (const auto& p : roc_curve(positive, negatives)) {
      out << set.acceptable_id << ',' << to_string(restriction) << ',' << format_decimal(p.false_positive_rate)
          << ',' << format_decimal(p.true_positive_rate) << '\n';
    }
  }
}

}  // namespace argprobe
