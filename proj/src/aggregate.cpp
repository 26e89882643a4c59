#include "argprobe/aggregate.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "argprobe/error.hpp"

namespace argprobe {

namespace {

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ';') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void require_permutation(const std::vector<std::string>& order, const std::array<std::string, 6>& labels,
                         const char* what) {
  std::set<std::string> got(order.begin(), order.end());
  std::set<std::string> want(labels.begin(), labels.end());
  if (order.size() != 6 || got != want) {
    std::string list;
    for (const auto& l : order) list += (list.empty() ? "" : ";") + l;
    throw SchemaError(std::string(what) + " must be a permutation of the six labels, got '" + list + "'");
  }
}

}  // namespace

ConstraintRanking ConstraintRanking::nda_first() {
  const auto& orders = canonical_case_orders();
  const auto& roles = canonical_role_labels();
  return {{orders.begin(), orders.end()}, {roles.begin(), roles.end()}};
}

ConstraintRanking ConstraintRanking::nad_first() {
  auto r = nda_first();
  r.markedness_order = {"NAD", "NDA", "DNA", "AND", "DAN", "ADN"};
  return r;
}

ConstraintRanking ConstraintRanking::parse(std::string_view markedness, std::string_view plausibility) {
  // Role labels themselves contain commas, so list entries are separated by ';'.
  auto r = nda_first();
  if (!markedness.empty()) r.markedness_order = split_list(markedness);
  if (!plausibility.empty()) r.plausibility_order = split_list(plausibility);
  r.validate();
  return r;
}

void ConstraintRanking::validate() const {
  require_permutation(markedness_order, canonical_case_orders(), "markedness order");
  require_permutation(plausibility_order, canonical_role_labels(), "plausibility order");
}

GroupBy group_by_from_string(std::string_view s) {
  if (s == "case_order_x_role" || s == "table") return GroupBy::CaseOrderByRole;
  if (s == "case_order") return GroupBy::CaseOrder;
  if (s == "role") return GroupBy::Role;
  if (s == "restriction") return GroupBy::Restriction;
  throw SchemaError("unknown grouping '" + std::string(s) + "'");
}

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& labels, std::string_view label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void fill_marginals(AggregateTable& t) {
  std::vector<double> all;
  t.row_means.assign(t.row_labels.size(), 0.0);
  t.col_means.assign(t.col_labels.size(), 0.0);
  for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
    std::vector<double> v;
    for (const auto& c : t.cells[r])
      if (c) v.push_back(*c);
    t.row_means[r] = mean(v);
    all.insert(all.end(), v.begin(), v.end());
  }
  for (std::size_t c = 0; c < t.col_labels.size(); ++c) {
    std::vector<double> v;
    for (std::size_t r = 0; r < t.row_labels.size(); ++r)
      if (t.cells[r][c]) v.push_back(*t.cells[r][c]);
    t.col_means[c] = mean(v);
  }
  t.grand_mean = mean(all);
}

}  // namespace

std::optional<double> AggregateTable::cell(std::string_view row, std::string_view col) const {
  auto r = index_of(row_labels, row);
  auto c = index_of(col_labels, col);
  if (!r || !c) return std::nullopt;
  return cells[*r][*c];
}

std::optional<double> AggregateTable::row_mean(std::string_view row) const {
  auto r = index_of(row_labels, row);
  if (!r) return std::nullopt;
  return row_means[*r];
}

std::optional<double> AggregateTable::col_mean(std::string_view col) const {
  auto c = index_of(col_labels, col);
  if (!c) return std::nullopt;
  return col_means[*c];
}

AggregateTable aggregate(std::span<const SetAuc> aucs, const ConstraintRanking& ranking, GroupBy group_by) {
  if (aucs.empty()) throw Error("cannot aggregate an empty list of set AUCs");
  ranking.validate();

  std::vector<std::string> row_space, col_space;
  switch (group_by) {
    case GroupBy::CaseOrderByRole:
      row_space = ranking.markedness_order;
      col_space = ranking.plausibility_order;
      break;
    case GroupBy::CaseOrder:
      row_space = ranking.markedness_order;
      col_space = {"auc"};
      break;
    case GroupBy::Role:
      row_space = ranking.plausibility_order;
      col_space = {"auc"};
      break;
    case GroupBy::Restriction:
      for (auto r : kAllRestrictions) row_space.emplace_back(restriction_title(r));
      col_space = {"auc"};
      break;
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> buckets;
  for (const auto& a : aucs) {
    std::string row_key, col_key = "auc";
    switch (group_by) {
      case GroupBy::CaseOrderByRole:
        row_key = a.case_order;
        col_key = a.role_label;
        break;
      case GroupBy::CaseOrder: row_key = a.case_order; break;
      case GroupBy::Role: row_key = a.role_label; break;
      case GroupBy::Restriction: row_key = std::string(restriction_title(a.restriction)); break;
    }
    auto r = index_of(row_space, row_key);
    auto c = index_of(col_space, col_key);
    if (!r) throw SchemaError("label '" + row_key + "' of set '" + a.acceptable_id + "' is not in the ranking");
    if (!c) throw SchemaError("label '" + col_key + "' of set '" + a.acceptable_id + "' is not in the ranking");
    buckets[{*r, *c}].push_back(a.auc);
  }

  std::set<std::size_t> rows_used, cols_used;
  for (const auto& [key, v] : buckets) {
    rows_used.insert(key.first);
    cols_used.insert(key.second);
  }

  AggregateTable t;
  t.group_by = group_by;
  for (auto r : rows_used) t.row_labels.push_back(row_space[r]);
  for (auto c : cols_used) t.col_labels.push_back(col_space[c]);
  t.cells.assign(rows_used.size(), std::vector<std::optional<double>>(cols_used.size()));
  t.counts.assign(rows_used.size(), std::vector<std::size_t>(cols_used.size(), 0));
  std::size_t ri = 0;
  for (auto r : rows_used) {
    std::size_t ci = 0;
    for (auto c : cols_used) {
      if (auto it = buckets.find({r, c}); it != buckets.end()) {
        t.cells[ri][ci] = mean(it->second);
        t.counts[ri][ci] = it->second.size();
      }
      ++ci;
    }
    ++ri;
  }
  fill_marginals(t);
  return t;
}

AggregateTable table_from_cells(const ConstraintRanking& ranking,
                                const std::vector<std::vector<double>>& cells) {
  ranking.validate();
  if (cells.size() != 6) throw SchemaError("expected 6 rows of cells");
  AggregateTable t;
  t.row_labels = ranking.markedness_order;
  t.col_labels = ranking.plausibility_order;
  for (const auto& row : cells) {
    if (row.size() != 6) throw SchemaError("expected 6 cells per row");
    t.cells.emplace_back(row.begin(), row.end());
    t.counts.emplace_back(6, 1);
  }
  fill_marginals(t);
  return t;
}

ConstraintReport constraint_check(const AggregateTable& table) {
  if (table.group_by != GroupBy::CaseOrderByRole) {
    throw SchemaError("constraint check needs a case-order x role table");
  }
  for (const auto& order : canonical_case_orders()) {
    if (!table.row_mean(order)) throw SchemaError("constraint check: table lacks case order " + order);
  }
  const auto& roles = canonical_role_labels();
  const std::array<std::string, 2> canonical{roles[0], roles[1]};
  for (const auto& role : canonical) {
    if (!table.col_mean(role)) throw SchemaError("constraint check: table lacks role column " + role);
  }

  ConstraintReport rep;
  rep.nominative_initial_mean = (*table.row_mean("NAD") + *table.row_mean("NDA")) / 2.0;
  rep.nominative_final_mean = (*table.row_mean("DAN") + *table.row_mean("ADN")) / 2.0;
  rep.nomalign_delta = rep.nominative_initial_mean - rep.nominative_final_mean;
  rep.nomalign_holds = rep.nomalign_delta > 0.0;

  const std::array<std::pair<const char*, const char*>, 3> pairs{
      {{"NDA", "NAD"}, {"DNA", "AND"}, {"DAN", "ADN"}}};
  double dat_sum = 0.0, acc_sum = 0.0;
  int n = 0;
  for (const auto& [dat_first, acc_first] : pairs) {
    double d = 0.0, a = 0.0;
    for (const auto& role : canonical) {
      auto dc = table.cell(dat_first, role);
      auto ac = table.cell(acc_first, role);
      if (!dc || !ac) throw SchemaError("constraint check: missing canonical cell");
      d += *dc;
      a += *ac;
      ++n;
    }
    dat_sum += d;
    acc_sum += a;
    rep.datalign_pairs.push_back({dat_first, acc_first, (d - a) / 2.0});
  }
  rep.dative_first_mean = dat_sum / n;
  rep.accusative_first_mean = acc_sum / n;
  rep.datalign_delta = rep.dative_first_mean - rep.accusative_first_mean;
  rep.datalign_holds = rep.datalign_delta > 0.0;
  return rep;
}

}  // namespace argprobe
