#include <random>

#include "doctest.h"
#include "fwbool/policy.hpp"
#include "test_support.hpp"

using namespace fwbool;
using fwbool::testing::sample_policy;
using fwbool::testing::three_nibbles;

TEST_CASE("field config enforces its limits") {
  CHECK_THROWS_AS(FieldConfig::of({}), std::invalid_argument);
  CHECK_THROWS_AS(FieldConfig::of(std::vector<unsigned>(13, 4)), std::invalid_argument);
  CHECK_THROWS_AS(FieldConfig::of({0}), std::invalid_argument);
  CHECK_THROWS_AS(FieldConfig::of({64}), std::invalid_argument);
  const auto cfg = FieldConfig::of({4, 6});
  CHECK(cfg.field_count() == 2);
  CHECK(cfg.domain_max(0) == 15);
  CHECK(cfg.domain_max(1) == 63);
  CHECK(cfg.bit_count() == 10);
  CHECK(cfg.bit_offset(1) == 4);
}

TEST_CASE("field config parses width lists") {
  CHECK(FieldConfig::parse("4,4,4") == three_nibbles());
  CHECK_THROWS_AS(FieldConfig::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(FieldConfig::parse("4,,4"), std::invalid_argument);
  CHECK_THROWS_AS(FieldConfig::parse("4,x"), std::invalid_argument);
}

TEST_CASE("interval intersection") {
  CHECK(intersect({1, 10}, {3, 15}) == Interval{3, 10});
  CHECK(intersect({1, 2}, {3, 4}) == std::nullopt);
  CHECK(intersect({5, 5}, {5, 5}) == Interval{5, 5});
}

TEST_CASE("parses a single rule line") {
  const auto cfg = three_nibbles();
  const auto policy = parse_policy("[1,10] [2,5] [1,10] -> accept\ndefault deny\n", cfg);
  REQUIRE(policy.rules.size() == 1);
  CHECK(policy.rules[0].predicate ==
        std::vector<Interval>{{1, 10}, {2, 5}, {1, 10}});
  CHECK(policy.rules[0].action == Action::Accept);
  CHECK(policy.default_action == Action::Deny);
}

TEST_CASE("parses an empty policy with a default directive") {
  const auto policy = parse_policy("default deny\n", three_nibbles());
  CHECK(policy.rules.empty());
  CHECK(policy.default_action == Action::Deny);
}

TEST_CASE("parses comments and blank lines and keeps rule order") {
  const auto text = "# header comment\n\n[0,1] [0,1] [0,1] -> deny\n"
                    "default accept\n[2,3] [2,3] [2,3] -> accept\n";
  const auto policy = parse_policy(text, three_nibbles());
  REQUIRE(policy.rules.size() == 2);
  CHECK(policy.rules[0].action == Action::Deny);
  CHECK(policy.rules[1].action == Action::Accept);
  CHECK(policy.default_action == Action::Accept);
}

TEST_CASE("rejects malformed rule files") {
  const auto cfg = three_nibbles();

  SUBCASE("lo greater than hi") {
    CHECK_THROWS_WITH_AS(parse_policy("[5,3] [0,1] [0,1] -> accept\ndefault deny\n", cfg),
                         doctest::Contains("lo > hi on field 0"), ParseError);
  }
  SUBCASE("interval out of field range") {
    try {
      parse_policy("[1,20] [0,1] [0,1] -> accept\ndefault deny\n", cfg);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(doctest::String(e.what()) == doctest::Contains("out of range"));
    }
  }
  SUBCASE("wrong arity, too few") {
    CHECK_THROWS_AS(parse_policy("[1,2] [3,4] -> accept\ndefault deny\n", cfg), ParseError);
  }
  SUBCASE("wrong arity, too many") {
    CHECK_THROWS_WITH_AS(
        parse_policy("[1,2] [3,4] [5,6] [7,8] -> accept\ndefault deny\n", cfg),
        doctest::Contains("too many intervals"), ParseError);
  }
  SUBCASE("missing default") {
    CHECK_THROWS_WITH_AS(parse_policy("[1,2] [3,4] [5,6] -> accept\n", cfg),
                         doctest::Contains("missing default"), ParseError);
  }
  SUBCASE("duplicate default") {
    CHECK_THROWS_WITH_AS(parse_policy("default deny\ndefault accept\n", cfg),
                         doctest::Contains("duplicate default"), ParseError);
  }
  SUBCASE("garbage line") {
    try {
      parse_policy("default deny\nnonsense here\n", cfg);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("a directive-like word is not a directive") {
    CHECK_THROWS_AS(parse_policy("defaulted deny\n", cfg), ParseError);
    CHECK_THROWS_AS(parse_policy("default maybe\n", cfg), ParseError);
  }
}

TEST_CASE("first match picks the earliest containing rule") {
  const auto policy = sample_policy();
  CHECK(first_match(policy, {5, 3, 5}) == Action::Accept);
  CHECK(first_match(policy, {12, 3, 5}) == Action::Deny);
  CHECK(first_match(policy, {0, 0, 0}) == Action::Deny);  // default
  CHECK(first_match(policy, {11, 3, 1}) == Action::Deny); // second rule only
  CHECK(first_match(policy, {1, 2, 1}) == Action::Accept);
}

TEST_CASE("swapping overlapping rules with different actions flips the overlap") {
  std::mt19937 rng(2024);
  const auto cfg = three_nibbles();
  int tried = 0;
  while (tried < 50) {
    Rule a = fwbool::testing::random_rule(rng, cfg);
    Rule b = fwbool::testing::random_rule(rng, cfg);
    if (a.action == b.action) continue;
    Packet probe;
    bool overlaps = true;
    for (int f = 0; f < cfg.field_count(); ++f) {
      auto common = intersect(a.predicate[static_cast<std::size_t>(f)],
                              b.predicate[static_cast<std::size_t>(f)]);
      if (!common) {
        overlaps = false;
        break;
      }
      probe.push_back(common->lo);
    }
    if (!overlaps) continue;
    ++tried;
    const Policy ab{{a, b}, Action::Deny};
    const Policy ba{{b, a}, Action::Deny};
    CHECK(first_match(ab, probe) != first_match(ba, probe));
  }
}

TEST_CASE("normalized text round-trips through the parser") {
  std::mt19937 rng(7);
  const auto cfg = three_nibbles();
  for (int i = 0; i < 25; ++i) {
    const Policy policy = fwbool::testing::random_policy(rng, 8, cfg);
    const std::string text = to_text(policy);
    const Policy reparsed = parse_policy(text, cfg);
    CHECK(reparsed == policy);
    CHECK(to_text(reparsed) == text);
  }
}

TEST_CASE("validation reports arity, range and ordering violations") {
  const auto cfg = three_nibbles();

  CHECK(validate_policy(sample_policy(), cfg).ok());

  Policy bad_arity{{{{{1, 2}, {3, 4}}, Action::Accept}}, Action::Deny};
  auto report = validate_policy(bad_arity, cfg);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].rule_index == 0);
  CHECK(report.violations[0].field == -1);

  Policy bad_range{{{{{1, 20}, {0, 1}, {0, 1}}, Action::Accept}}, Action::Deny};
  report = validate_policy(bad_range, cfg);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].field == 0);

  Policy bad_order{{{{{5, 3}, {0, 1}, {0, 1}}, Action::Accept}}, Action::Deny};
  report = validate_policy(bad_order, cfg);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].message == "empty interval: lo > hi");
}
