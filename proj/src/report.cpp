#include "argprobe/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "argprobe/error.hpp"
#include "argprobe/score_table.hpp"

namespace argprobe {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string row_header_for(GroupBy g) {
  switch (g) {
    case GroupBy::CaseOrderByRole: return "Case order / Role assignment";
    case GroupBy::CaseOrder: return "Case order";
    case GroupBy::Role: return "Role assignment";
    case GroupBy::Restriction: return "Minimal variation sets";
  }
  return "";
}

std::string render_grid(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows, bool markdown) {
  std::ostringstream out;
  if (markdown) {
    out << '|';
    for (const auto& h : header) out << ' ' << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i == 0 ? "---|" : "---:|");
    out << '\n';
    for (const auto& row : rows) {
      out << '|';
      for (const auto& c : row) out << ' ' << c << " |";
      out << '\n';
    }
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
  }
  return out.str();
}

std::string render_aggregate(const AggregateTable& t, bool markdown, int decimals) {
  auto num = [&](double v) { return markdown ? fixed(v, decimals) : format_decimal(v); };
  const bool wide = t.col_labels.size() > 1;
  std::vector<std::string> header{row_header_for(t.group_by)};
  for (const auto& c : t.col_labels) header.push_back(c == "auc" ? "AUC" : c);
  if (wide) header.push_back("Avg markedness");

  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
    std::vector<std::string> row{t.row_labels[r]};
    for (const auto& cell : t.cells[r]) row.push_back(cell ? num(*cell) : "");
    if (wide) row.push_back(num(t.row_means[r]));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> avg{wide ? "Avg plausibility" : "Avg"};
  if (wide) {
    for (double m : t.col_means) avg.push_back(num(m));
  }
  avg.push_back(num(t.grand_mean));
  rows.push_back(std::move(avg));
  return render_grid(header, rows, markdown);
}

std::string render_summary(const SummaryTable& t, bool markdown, int decimals) {
  auto num = [&](double v) { return markdown ? fixed(v, decimals) : format_decimal(v); };
  std::vector<std::string> header{t.row_header};
  header.insert(header.end(), t.cols.begin(), t.cols.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<std::string> row{t.rows[r]};
    for (const auto& v : t.values[r]) row.push_back(v ? num(*v) : "");
    rows.push_back(std::move(row));
  }
  if (!t.average_row.empty()) {
    std::vector<std::string> avg{t.average_row};
    for (std::size_t c = 0; c < t.cols.size(); ++c) {
      double s = 0.0;
      std::size_t n = 0;
      for (const auto& row : t.values)
        if (row[c]) {
          s += *row[c];
          ++n;
        }
      avg.push_back(n ? num(s / static_cast<double>(n)) : "");
    }
    rows.push_back(std::move(avg));
  }
  return render_grid(header, rows, markdown);
}

}  // namespace

std::string render_markdown(const AggregateTable& table, int decimals) {
  return render_aggregate(table, true, decimals);
}

std::string render_csv(const AggregateTable& table) { return render_aggregate(table, false, 0); }

SummaryTable side_by_side(std::string row_header,
                          const std::vector<std::pair<std::string, AggregateTable>>& per_scorer,
                          std::string average_row) {
  SummaryTable t;
  t.row_header = std::move(row_header);
  t.average_row = std::move(average_row);
  for (const auto& [name, agg] : per_scorer) {
    if (agg.col_labels.size() != 1) throw Error("side_by_side expects single-column aggregates");
    t.cols.push_back(name);
    for (const auto& r : agg.row_labels)
      if (std::find(t.rows.begin(), t.rows.end(), r) == t.rows.end()) t.rows.push_back(r);
  }
  t.values.assign(t.rows.size(), std::vector<std::optional<double>>(t.cols.size()));
  for (std::size_t c = 0; c < per_scorer.size(); ++c) {
    const auto& agg = per_scorer[c].second;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (auto v = agg.cell(t.rows[r], agg.col_labels[0])) t.values[r][c] = v;
    }
  }
  return t;
}

std::string render_markdown(const SummaryTable& table, int decimals) {
  return render_summary(table, true, decimals);
}

std::string render_csv(const SummaryTable& table) { return render_summary(table, false, 0); }

std::string render_constraint_report(const ConstraintReport& r) {
  std::ostringstream out;
  out << "NOMALIGN: nominative-initial (NAD, NDA) mean " << fixed(r.nominative_initial_mean, 4)
      << " vs nominative-final (DAN, ADN) mean " << fixed(r.nominative_final_mean, 4) << ", delta "
      << fixed(r.nomalign_delta, 4) << (r.nomalign_holds ? " (holds)" : " (does not hold)") << '\n';
  out << "DATALIGN (canonical roles): dative-first mean " << fixed(r.dative_first_mean, 4)
      << " vs accusative-first mean " << fixed(r.accusative_first_mean, 4) << ", delta "
      << fixed(r.datalign_delta, 4) << (r.datalign_holds ? " (holds)" : " (does not hold)") << '\n';
  for (const auto& p : r.datalign_pairs) {
    out << "  " << p.dative_first << " vs " << p.accusative_first << ": delta " << fixed(p.delta, 4) << '\n';
  }
  return out.str();
}

}  // namespace argprobe
