#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "argprobe/genset.hpp"
#include "argprobe/score_table.hpp"

namespace argprobe {

/// AUC of one acceptable sentence against its (restricted) minimal variation set.
struct SetAuc {
  std::string acceptable_id;
  Restriction restriction = Restriction::All;
  double auc = 0.5;
  std::string case_order;
  std::string role_label;
  std::string template_id;

  bool operator==(const SetAuc&) const = default;
};

/// One SetAuc per acceptable sentence, in dataset order: 1 positive against 6
/// negatives for Restriction::All, against 2 otherwise. Throws listing the missing
/// ids when the table does not cover every evaluated sentence.
std::vector<SetAuc> evaluate_sets(const Dataset& dataset, const ScoreTable& scores,
                                  Restriction restriction);
std::vector<SetAuc> evaluate_sets_serial(const Dataset& dataset, const ScoreTable& scores,
                                         Restriction restriction);

/// Tab-separated with a header line:
/// acceptable_id restriction auc case_order role_label template_id
void write_set_aucs(std::ostream& out, const std::vector<SetAuc>& aucs);
std::vector<SetAuc> read_set_aucs(std::istream& in);
std::vector<SetAuc> read_set_aucs_file(const std::filesystem::path& path);

/// ROC points of every set as CSV rows: acceptable_id,restriction,fpr,tpr
void write_roc_points(std::ostream& out, const Dataset& dataset, const ScoreTable& scores,
                      Restriction restriction);

}  // namespace argprobe
