#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "argprobe/aggregate.hpp"
#include "argprobe/error.hpp"
#include "argprobe/report.hpp"
#include "support/fixtures.hpp"

using namespace argprobe;

namespace {

// Reference human (1-6) cells, rows NAD, NDA, DNA, AND, DAN, ADN.
const std::vector<std::vector<double>> kHumanCells{
    {.92, .86, .87, .82, .59, .58}, {.99, .99, .60, .58, .58, .58}, {.84, .85, .49, .45, .54, .43},
    {.68, .75, .65, .64, .44, .48}, {.65, .62, .40, .47, .56, .59}, {.65, .65, .45, .40, .57, .58}};
const std::vector<double> kHumanRowMeans{.77, .72, .60, .61, .55, .55};
const std::vector<double> kHumanColMeans{.79, .79, .58, .56, .55, .54};

// Reference LM (1-6) cells, rows NDA, NAD, DNA, AND, DAN, ADN.
const std::vector<std::vector<double>> kLmCells{
    {.91, .89, .67, .60, .78, .79}, {.80, .73, .79, .73, .70, .73}, {.79, .79, .53, .51, .48, .51},
    {.43, .41, .45, .42, .33, .32}, {.62, .61, .44, .42, .64, .64}, {.40, .37, .22, .22, .43, .44}};

std::vector<SetAuc> sets_from_cells(const ConstraintRanking& ranking, const std::vector<std::vector<double>>& cells,
                                    int templates) {
  std::vector<SetAuc> out;
  for (int t = 0; t < templates; ++t)
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t c = 0; c < 6; ++c) {
        SetAuc a;
        a.acceptable_id = "t" + std::to_string(t) + ":" + ranking.markedness_order[r] + ":" + std::to_string(c);
        a.case_order = ranking.markedness_order[r];
        a.role_label = ranking.plausibility_order[c];
        a.template_id = "t" + std::to_string(t);
        a.auc = cells[r][c];
        out.push_back(a);
      }
  return out;
}

}  // namespace

TEST_CASE("human table marginals reproduce the reference means") {
  auto ranking = ConstraintRanking::nad_first();
  auto aucs = sets_from_cells(ranking, kHumanCells, 50);
  REQUIRE(aucs.size() == 1800);
  auto table = aggregate(aucs, ranking, GroupBy::CaseOrderByRole);
  REQUIRE(table.row_labels == ranking.markedness_order);
  REQUIRE(table.col_labels == ranking.plausibility_order);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(std::abs(table.row_means[r] - kHumanRowMeans[r]) <= 0.005);
    for (std::size_t c = 0; c < 6; ++c) {
      CHECK(table.counts[r][c] == 50);
      CHECK(std::abs(*table.cells[r][c] - kHumanCells[r][c]) < 1e-12);
    }
  }
  for (std::size_t c = 0; c < 6; ++c) CHECK(std::abs(table.col_means[c] - kHumanColMeans[c]) <= 0.005);
  CHECK(std::abs(table.grand_mean - 0.63) <= 0.005);
  CHECK(*table.cell("NDA", "ag1,re2,pa3") == doctest::Approx(0.99));
}

TEST_CASE("grand mean equals the mean of every per-set AUC") {
  auto ranking = ConstraintRanking::nda_first();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> cells(6, std::vector<double>(6));
  auto aucs = sets_from_cells(ranking, cells, 50);
  for (auto& a : aucs) a.auc = u(rng);
  auto table = aggregate(aucs, ranking, GroupBy::CaseOrderByRole);
  double all = 0;
  for (const auto& a : aucs) all += a.auc;
  CHECK(std::abs(table.grand_mean - all / static_cast<double>(aucs.size())) < 1e-12);

  for (std::size_t r = 0; r < 6; ++r) {
    double s = 0;
    int n = 0;
    for (const auto& a : aucs)
      if (a.case_order == table.row_labels[r]) s += a.auc, ++n;
    CHECK(std::abs(table.row_means[r] - s / n) < 1e-12);
  }
  auto by_order = aggregate(aucs, ranking, GroupBy::CaseOrder);
  for (std::size_t r = 0; r < 6; ++r) CHECK(std::abs(*by_order.cells[r][0] - table.row_means[r]) < 1e-12);
  auto by_role = aggregate(aucs, ranking, GroupBy::Role);
  for (std::size_t c = 0; c < 6; ++c) CHECK(std::abs(*by_role.cells[c][0] - table.col_means[c]) < 1e-12);
}

TEST_CASE("single set") {
  SetAuc a{"x:NDA:123", Restriction::All, 0.75, "NDA", "ag1,re2,pa3", "x"};
  auto t = aggregate(std::vector{a}, ConstraintRanking::nda_first(), GroupBy::CaseOrderByRole);
  CHECK(t.row_labels.size() == 1);
  CHECK(t.col_labels.size() == 1);
  CHECK(*t.cells[0][0] == 0.75);
  CHECK(t.grand_mean == 0.75);
}

TEST_CASE("aggregate errors") {
  std::vector<SetAuc> none;
  CHECK_THROWS_AS(aggregate(none, ConstraintRanking::nda_first(), GroupBy::CaseOrder), Error);
  SetAuc a{"x", Restriction::All, 0.5, "NNA", "ag1,re2,pa3", "x"};
  CHECK_THROWS_AS(aggregate(std::vector{a}, ConstraintRanking::nda_first(), GroupBy::CaseOrderByRole), SchemaError);
}

TEST_CASE("restriction grouping") {
  std::vector<SetAuc> v{{"a", Restriction::All, 0.4, "NDA", "ag1,re2,pa3", "t"},
                        {"a", Restriction::DoubleNom, 0.2, "NDA", "ag1,re2,pa3", "t"},
                        {"a", Restriction::DoubleDat, 0.9, "NDA", "ag1,re2,pa3", "t"}};
  auto t = aggregate(v, ConstraintRanking::nda_first(), GroupBy::Restriction);
  CHECK(*t.cell("1-6", "auc") == 0.4);
  CHECK(*t.cell("1-2 nom", "auc") == 0.2);
  CHECK(*t.cell("1-2 dat", "auc") == 0.9);
  CHECK_FALSE(t.cell("1-2 acc", "auc").has_value());
}

TEST_CASE("ranking parsing") {
  auto r = ConstraintRanking::parse("NAD;NDA;DNA;AND;DAN;ADN", "");
  CHECK(r.markedness_order.front() == "NAD");
  CHECK_THROWS_AS(ConstraintRanking::parse("NAD;NDA", ""), SchemaError);
  CHECK_THROWS_AS(ConstraintRanking::parse("", "ag1,re2,pa3;ag2,re1,pa3;ag1,re3,pa2;ag2,re3,pa2;ag3,re1,pa2;ag3,re2,pa1"),
                  SchemaError);
  CHECK(group_by_from_string("restriction") == GroupBy::Restriction);
}

TEST_CASE("constraint check on the human table") {
  auto table = table_from_cells(ConstraintRanking::nad_first(), kHumanCells);
  auto rep = constraint_check(table);
  CHECK(rep.nomalign_holds);
  CHECK(rep.nominative_initial_mean > rep.nominative_final_mean);
  CHECK(rep.nomalign_delta == doctest::Approx(rep.nominative_initial_mean - rep.nominative_final_mean));
  CHECK(rep.datalign_pairs.size() == 3);
}

TEST_CASE("constraint check on the reference LM table") {
  auto table = table_from_cells(ConstraintRanking::nda_first(), kLmCells);
  CHECK(*table.row_mean("NAD") == doctest::Approx(0.7467).epsilon(1e-3));
  CHECK(*table.row_mean("ADN") == doctest::Approx(0.3467).epsilon(1e-3));
  auto rep = constraint_check(table);
  CHECK(rep.nomalign_holds);
}

TEST_CASE("constraint check on a constant table") {
  std::vector<std::vector<double>> flat(6, std::vector<double>(6, 0.5));
  auto rep = constraint_check(table_from_cells(ConstraintRanking::nda_first(), flat));
  CHECK(rep.nomalign_delta == 0.0);
  CHECK(rep.datalign_delta == 0.0);
  CHECK_FALSE(rep.nomalign_holds);
  CHECK_FALSE(rep.datalign_holds);
}

TEST_CASE("markdown rendering keeps the reference layout") {
  auto table = table_from_cells(ConstraintRanking::nad_first(), kHumanCells);
  auto md = render_markdown(table);
  CHECK(md.find("| NAD | 0.92 | 0.86 | 0.87 | 0.82 | 0.59 | 0.58 | 0.77 |") != std::string::npos);
  CHECK(md.find("Avg plausibility | 0.79 | 0.79 | 0.58 | 0.56 | 0.55 | 0.54 | 0.63 |") != std::string::npos);
  auto csv = render_csv(table);
  CHECK(csv.find("NAD,0.92,0.86,") != std::string::npos);
}
