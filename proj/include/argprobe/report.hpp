#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "argprobe/aggregate.hpp"

namespace argprobe {

/// Case order x role table: role columns plus a trailing "Avg markedness" column,
/// case order rows plus a trailing "Avg plausibility" row. Two decimals.
std::string render_markdown(const AggregateTable& table, int decimals = 2);
/// Same layout, full round-trip precision.
std::string render_csv(const AggregateTable& table);

/// Rows x named columns, e.g. case orders x scorers or restrictions x scorers.
struct SummaryTable {
  std::string row_header;
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<std::optional<double>>> values;  // [row][col]
  /// Label of a trailing row holding column means; empty for none.
  std::string average_row;
};

/// Combines single-column aggregates (one per scorer) column-wise; rows keep the order
/// of first appearance across the inputs.
SummaryTable side_by_side(std::string row_header,
                          const std::vector<std::pair<std::string, AggregateTable>>& per_scorer,
                          std::string average_row);

std::string render_markdown(const SummaryTable& table, int decimals = 2);
std::string render_csv(const SummaryTable& table);

std::string render_constraint_report(const ConstraintReport& report);

}  // namespace argprobe
