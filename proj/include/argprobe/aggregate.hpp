#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argprobe/evaluate.hpp"

namespace argprobe {

/// Reporting orders: case orders by increasing markedness, role labels by decreasing
/// plausibility. Each must be a permutation of its six labels.
struct ConstraintRanking {
  std::vector<std::string> markedness_order;
  std::vector<std::string> plausibility_order;

  /// NDA, NAD, DNA, AND, DAN, ADN and the canonical role order.
  static ConstraintRanking nda_first();
  /// NAD, NDA, DNA, AND, DAN, ADN and the canonical role order.
  static ConstraintRanking nad_first();
  /// Parses ";"-separated lists; either may be empty to keep the nda_first default.
  static ConstraintRanking parse(std::string_view markedness, std::string_view plausibility);

  /// Throws unless both orders are permutations of their canonical label sets.
  void validate() const;
};

enum class GroupBy { CaseOrderByRole, CaseOrder, Role, Restriction };

GroupBy group_by_from_string(std::string_view s);

/// Mean AUC per cell with row, column and grand means. Marginals are means of the
/// populated cells; rows and columns follow the ranking and only labels with data appear.
struct AggregateTable {
  GroupBy group_by = GroupBy::CaseOrderByRole;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::vector<std::size_t>> counts;
  std::vector<double> row_means;
  std::vector<double> col_means;
  double grand_mean = 0.0;

  std::optional<double> cell(std::string_view row, std::string_view col) const;
  std::optional<double> row_mean(std::string_view row) const;
  std::optional<double> col_mean(std::string_view col) const;
};

/// Throws on empty input or a label outside the ranking.
AggregateTable aggregate(std::span<const SetAuc> aucs, const ConstraintRanking& ranking, GroupBy group_by);

/// Builds a case-order x role table directly from cell values (row-major, ranking order).
AggregateTable table_from_cells(const ConstraintRanking& ranking,
                                const std::vector<std::vector<double>>& cells);

struct DatalignPair {
  std::string dative_first;
  std::string accusative_first;
  double delta;  // dative-first minus accusative-first, canonical role columns
};

/// Descriptive ordering-constraint summary; deltas are never turned into a gate.
struct ConstraintReport {
  double nominative_initial_mean = 0.0;  // NAD, NDA
  double nominative_final_mean = 0.0;    // DAN, ADN
  double nomalign_delta = 0.0;
  bool nomalign_holds = false;
  double dative_first_mean = 0.0;  // NDA, DNA, DAN over canonical role columns
  double accusative_first_mean = 0.0;  // NAD, AND, ADN
  double datalign_delta = 0.0;
  bool datalign_holds = false;
  std::vector<DatalignPair> datalign_pairs;
};

/// Requires a case-order x role table with all six rows and both canonical role
/// columns (ag1,re2,pa3 and ag2,re1,pa3).
ConstraintReport constraint_check(const AggregateTable& table);

}  // namespace argprobe
