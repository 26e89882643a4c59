#include <map>
#include <set>
#include <sstream>

#include <doctest.h>

#include "argprobe/error.hpp"
#include "argprobe/genset.hpp"
#include "argprobe/tokenize.hpp"
#include "support/fixtures.hpp"

using namespace argprobe;

namespace {

CaseSequence seq(const char* s) { return case_sequence_from_label(s); }
Arrangement arr(const char* s) { return arrangement_from_label(s); }

}  // namespace

TEST_CASE("worked example surface strings") {
  auto c = fixtures::worked_example();
  const auto& t = c.templates.at(0);
  const auto& lex = c.lexicon;
  CHECK(realize(t, seq("NDA"), arr("123"), lex) ==
        "Er wollte uns sagen, dass der Soldat dem Offizier einen Brief schreibt.");
  CHECK(realize(t, seq("DNA"), arr("213"), lex) ==
        "Er wollte uns sagen, dass dem Offizier der Soldat einen Brief schreibt.");
  CHECK(realize(t, seq("NDA"), arr("213"), lex) ==
        "Er wollte uns sagen, dass der Offizier dem Soldat einen Brief schreibt.");
  CHECK(realize(t, seq("DNA"), arr("123"), lex) ==
        "Er wollte uns sagen, dass dem Soldat der Offizier einen Brief schreibt.");
  CHECK(realize(t, seq("NNA"), arr("123"), lex) ==
        "Er wollte uns sagen, dass der Soldat der Offizier einen Brief schreibt.");
  CHECK(realize(t, seq("NAA"), arr("123"), lex) ==
        "Er wollte uns sagen, dass der Soldat den Offizier einen Brief schreibt.");
  CHECK(realize(t, seq("NDD"), arr("123"), lex) ==
        "Er wollte uns sagen, dass der Soldat dem Offizier einem Brief schreibt.");
}

TEST_CASE("role labels") {
  CHECK(role_label(seq("NDA"), arr("123")) == "ag1,re2,pa3");
  CHECK(role_label(seq("DNA"), arr("213")) == "ag1,re2,pa3");
  CHECK(role_label(seq("NDA"), arr("213")) == "ag2,re1,pa3");
  CHECK(role_label(seq("NNA"), arr("123")) == "ag1,ag2,pa3");
  CHECK(role_label(seq("NAA"), arr("123")) == "ag1,pa2,pa3");
  CHECK(role_label(seq("NDD"), arr("123")) == "ag1,re2,re3");
  CHECK(role_label(seq("ADN"), arr("321")) == "ag1,re2,pa3");
}

TEST_CASE("every acceptable case order and arrangement yields a canonical role label") {
  std::set<std::string> labels;
  for (const auto& s : acceptable_case_sequences())
    for (const auto& a : all_arrangements()) labels.insert(role_label(s, a));
  const auto& canon = canonical_role_labels();
  CHECK(labels == std::set<std::string>(canon.begin(), canon.end()));
}

TEST_CASE("case sequence sets") {
  CHECK(acceptable_case_sequences().size() == 6);
  CHECK(violating_case_sequences().size() == 18);
  for (const auto& s : acceptable_case_sequences()) CHECK(is_permutation_of_cases(s));
  std::map<ViolationType, int> per_type;
  for (const auto& s : violating_case_sequences()) {
    CHECK_FALSE(is_permutation_of_cases(s));
    ++per_type[violation_type_of(s)];
  }
  CHECK(per_type[ViolationType::DoubleNom] == 6);
  CHECK(per_type[ViolationType::DoubleAcc] == 6);
  CHECK(per_type[ViolationType::DoubleDat] == 6);
  CHECK_THROWS_AS(violation_type_of(seq("NNN")), SchemaError);
}

TEST_CASE("per-template counts") {
  auto c = fixtures::worked_example();
  auto acc = enumerate_acceptable(c.templates[0], c.lexicon);
  auto vio = enumerate_violations(c.templates[0], c.lexicon);
  CHECK(acc.size() == 36);
  CHECK(vio.size() == 108);
  std::set<std::string> texts;
  for (const auto& r : acc) {
    CHECK(r.acceptable);
    CHECK(r.violation_type == ViolationType::None);
    texts.insert(r.text);
  }
  for (const auto& r : vio) {
    CHECK_FALSE(r.acceptable);
    CHECK(r.violation_type != ViolationType::None);
    texts.insert(r.text);
  }
  CHECK(texts.size() == 144);
}

TEST_CASE("50 templates give 7200 records") {
  auto c = fixtures::synthetic_templates(50);
  auto d = build_dataset(c.templates, c.lexicon);
  CHECK(d.size() == 7200);
  CHECK(d.acceptable_count() == 1800);
  CHECK(d.template_count() == 50);
  CHECK(d.sets().size() == 1800);
}

TEST_CASE("shipped sample templates build a full dataset") {
  auto lex = load_lexicon_file(fixtures::data_dir() / "lexicon.jsonl");
  auto tpls = load_templates_file(fixtures::data_dir() / "templates.jsonl");
  REQUIRE(tpls.size() == 50);
  for (const auto& t : tpls) CHECK(validate_template(t, lex).empty());
  auto d = build_dataset(tpls, lex);
  CHECK(d.size() == 7200);
  CHECK(d.acceptable_count() == 1800);
}

TEST_CASE("minimal variation sets") {
  auto d = fixtures::synthetic_dataset(3);
  std::map<std::string, int> membership;
  for (const auto& set : d.sets()) {
    const auto& anchor = d.at(set.acceptable_id);
    auto all = set.members(Restriction::All);
    CHECK(all.size() == 6);
    CHECK(std::set<std::string>(all.begin(), all.end()).size() == 6);
    for (auto c : kAllCases) {
      auto r = restriction_for(c);
      auto two = set.members(r);
      REQUIRE(two.size() == 2);
      for (const auto& id : two) CHECK(violation_type_of(d.at(id).case_sequence) == static_cast<ViolationType>(static_cast<int>(c) + 1));
    }
    auto anchor_tokens = tokenize(anchor.text);
    for (const auto& id : all) {
      const auto& v = d.at(id);
      ++membership[id];
      CHECK(v.template_id == anchor.template_id);
      CHECK(v.arrangement == anchor.arrangement);
      int diff = 0;
      for (int k = 0; k < 3; ++k) diff += v.case_sequence[k] != anchor.case_sequence[k];
      CHECK(diff == 1);
      auto tokens = tokenize(v.text);
      REQUIRE(tokens.size() == anchor_tokens.size());
      int token_diff = 0;
      for (std::size_t i = 0; i < tokens.size(); ++i) token_diff += tokens[i] != anchor_tokens[i];
      CHECK(token_diff >= 1);
      CHECK(token_diff <= 2);
    }
  }
  CHECK(membership.size() == 3 * 108);
  for (const auto& [id, n] : membership) CHECK(n == 2);
}

TEST_CASE("sentence ids and ordering are deterministic") {
  auto a = fixtures::synthetic_dataset(2);
  auto b = fixtures::synthetic_dataset(2);
  CHECK(a.records() == b.records());
  CHECK(a.records().front().id == "s0:NAD:123");
  CHECK(a.records()[36].id == "s0:NNA:123");
  CHECK(sentence_id("soldat", seq("NDA"), arr("123")) == "soldat:NDA:123");
}

TEST_CASE("dataset serialization round trips") {
  auto d = fixtures::synthetic_dataset(2);
  std::stringstream ss;
  write_dataset(ss, d);
  auto back = read_dataset(ss);
  CHECK(back.records() == d.records());
  std::stringstream again;
  write_dataset(again, back);
  std::stringstream first;
  write_dataset(first, d);
  CHECK(first.str() == again.str());
}

TEST_CASE("set index lists two ids per doubled case") {
  auto d = fixtures::synthetic_dataset(1);
  std::stringstream ss;
  write_set_index(ss, d);
  std::string line;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    CHECK(line.find("double_NOM") != std::string::npos);
  }
  CHECK(n == 36);
}

TEST_CASE("template validation") {
  auto c = fixtures::worked_example();
  auto t = c.templates[0];
  CHECK(validate_template(t, c.lexicon).empty());

  auto swapped = t;
  std::swap(swapped.items[0], swapped.items[2]);
  CHECK_FALSE(validate_template(swapped, c.lexicon).empty());

  auto unknown = t;
  unknown.items[1] = "general";
  CHECK_THROWS_AS(validate_template(unknown, c.lexicon), LookupError);

  auto repeated = t;
  repeated.items[1] = repeated.items[0];
  CHECK_THROWS_AS(validate_template(repeated, c.lexicon), SchemaError);

  auto bad_id = t;
  bad_id.id = "a:b";
  CHECK_THROWS_AS(validate_template(bad_id, c.lexicon), SchemaError);
}

TEST_CASE("duplicate template ids are rejected") {
  auto c = fixtures::worked_example();
  auto twice = c.templates;
  twice.push_back(twice[0]);
  CHECK_THROWS_AS(build_dataset(twice, c.lexicon), SchemaError);
}

TEST_CASE("template documents need exactly three items") {
  std::istringstream in(R"({"id": "x", "prefix": "Ich glaube, dass", "verb": "gibt", "items": ["a", "b"]})");
  CHECK_THROWS_AS(load_templates(in), SchemaError);
}

TEST_CASE("restriction names") {
  CHECK(restriction_from_string("all") == Restriction::All);
  CHECK(restriction_from_string("nom") == Restriction::DoubleNom);
  CHECK(restriction_from_string("double_DAT") == Restriction::DoubleDat);
  CHECK(restriction_title(Restriction::DoubleAcc) == "1-2 acc");
  CHECK_THROWS_AS(restriction_from_string("gen"), SchemaError);
}
