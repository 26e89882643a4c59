#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "argprobe/annotations.hpp"
#include "argprobe/error.hpp"

using namespace argprobe;

namespace {

AnnotationRecord test_rating(std::string who, std::string id, int raw) {
  return {std::move(who), std::move(id), raw, "2024-01-01T00:00:00.000Z", false, FillerKind::None, false};
}

AnnotationRecord filler(std::string who, std::string id, int raw, FillerKind k) {
  return {std::move(who), std::move(id), raw, "2024-01-01T00:00:00.000Z", true, k, false};
}

// Population z-scores computed from first principles.
std::vector<double> z_scores(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  double sd = std::sqrt(var / static_cast<double>(v.size()));
  std::vector<double> z;
  for (double x : v) z.push_back((x - mean) / sd);
  return z;
}

}  // namespace

TEST_CASE("z-transform of a single annotator") {
  std::vector<AnnotationRecord> recs{test_rating("a", "s1", 0), test_rating("a", "s2", 50), test_rating("a", "s3", 99)};
  auto res = normalize_annotations(recs);
  const auto& z = res.per_annotator.at("a");
  auto expected = z_scores({0, 50, 99});
  REQUIRE(z.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(z[i].z - expected[i]) < 1e-12);
  CHECK(z[0].z == doctest::Approx(-1.2289).epsilon(1e-3));
  CHECK(z[1].z == doctest::Approx(0.0082).epsilon(1e-2));
  CHECK(z[2].z == doctest::Approx(1.2207).epsilon(1e-3));
}

TEST_CASE("normalized ratings have zero mean and unit sd") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> raw(0, 99);
  std::vector<AnnotationRecord> recs;
  for (int a = 0; a < 8; ++a)
    for (int s = 0; s < 40; ++s) recs.push_back(test_rating("ann" + std::to_string(a), "s" + std::to_string(s), raw(rng)));
  for (int a = 0; a < 8; ++a) recs.push_back(filler("ann" + std::to_string(a), "f", 99, FillerKind::Acceptable));
  auto res = normalize_annotations(recs);
  for (const auto& [who, zs] : res.per_annotator) {
    CHECK(zs.size() == 40);
    double m = 0, v = 0;
    for (const auto& z : zs) m += z.z;
    m /= 40;
    for (const auto& z : zs) v += (z.z - m) * (z.z - m);
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(v / 40) - 1.0) < 1e-9);
  }
}

TEST_CASE("affinely related annotators get identical normalized vectors") {
  std::vector<AnnotationRecord> recs;
  const int raw[] = {10, 20, 35, 70};
  for (int i = 0; i < 4; ++i) {
    recs.push_back(test_rating("a", "s" + std::to_string(i), raw[i]));
    recs.push_back(test_rating("b", "s" + std::to_string(i), raw[i] + 20));
  }
  auto res = normalize_annotations(recs);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(res.per_annotator["a"][i].z - res.per_annotator["b"][i].z) < 1e-12);
}

TEST_CASE("sentence scores average the normalized ratings") {
  std::vector<AnnotationRecord> recs{test_rating("a", "x", 0), test_rating("a", "y", 99), test_rating("b", "x", 99),
                                     test_rating("b", "y", 0)};
  auto res = normalize_annotations(recs);
  CHECK(std::abs(res.sentence_scores.at("x")) < 1e-12);
  CHECK(std::abs(res.sentence_scores.at("y")) < 1e-12);
}

TEST_CASE("constant annotator is centered with a warning") {
  std::vector<AnnotationRecord> recs{test_rating("a", "x", 40), test_rating("a", "y", 40)};
  auto res = normalize_annotations(recs);
  CHECK(res.per_annotator["a"][0].z == 0.0);
  CHECK(res.per_annotator["a"][1].z == 0.0);
  CHECK_FALSE(res.warnings.empty());
}

TEST_CASE("fillers and warm-up ratings are excluded from normalization") {
  std::vector<AnnotationRecord> recs{test_rating("a", "x", 0), test_rating("a", "y", 99),
                                     filler("a", "f1", 50, FillerKind::Acceptable)};
  auto w = test_rating("a", "z", 10);
  w.warmup = true;
  recs.push_back(w);
  auto res = normalize_annotations(recs);
  CHECK(res.per_annotator["a"].size() == 2);
  CHECK(res.sentence_scores.size() == 2);
}

TEST_CASE("filler QC keeps only strictly better acceptable fillers") {
  std::vector<AnnotationRecord> recs;
  auto add = [&](const std::string& who, int ok, int bad) {
    recs.push_back(filler(who, "ok1", ok, FillerKind::Acceptable));
    recs.push_back(filler(who, "bad1", bad, FillerKind::Violation));
  };
  add("good", 80, 20);
  add("reversed", 30, 70);
  add("equal", 50, 50);
  add("barely", 51, 50);
  recs.push_back(filler("half", "ok1", 90, FillerKind::Acceptable));
  auto qc = qc_filter(recs);
  CHECK(qc.retained == std::set<std::string>{"good", "barely"});
  CHECK(qc.removed == std::set<std::string>{"reversed", "equal", "half"});
  CHECK_FALSE(qc.warnings.empty());

  recs.push_back(test_rating("reversed", "s1", 10));
  recs.push_back(test_rating("reversed", "s2", 20));
  recs.push_back(test_rating("good", "s1", 90));
  recs.push_back(test_rating("good", "s2", 10));
  auto res = normalize_annotations(recs, &qc.retained);
  CHECK(res.per_annotator.count("reversed") == 0);
  CHECK(res.per_annotator.count("good") == 1);
}

TEST_CASE("annotation TSV round trips and validates") {
  std::vector<AnnotationRecord> recs{test_rating("a", "t:NDA:123", 99), filler("a", "f1", 3, FillerKind::Violation)};
  recs[0].warmup = true;
  std::stringstream ss;
  write_annotations(ss, recs);
  CHECK(read_annotations(ss) == recs);

  std::stringstream empty;
  write_annotations(empty, {});
  CHECK(empty.str() == "annotator_id\tsentence_id\traw\ttimestamp\tis_filler\tfiller_kind\twarmup\n");

  std::istringstream bad("annotator_id\tsentence_id\traw\ttimestamp\tis_filler\tfiller_kind\twarmup\na\tx\t100\tt\tfalse\tnone\tfalse\n");
  CHECK_THROWS_AS(read_annotations(bad), SchemaError);
  std::istringstream inconsistent("annotator_id\tsentence_id\traw\ttimestamp\tis_filler\tfiller_kind\twarmup\na\tx\t5\tt\ttrue\tnone\tfalse\n");
  CHECK_THROWS_AS(read_annotations(inconsistent), SchemaError);
}
