#include <random>

#include "doctest.h"
#include "fwbool/decision_tree.hpp"
#include "fwbool/oracle.hpp"
#include "test_support.hpp"

using namespace fwbool;
using fwbool::testing::all_packets;
using fwbool::testing::random_policy;
using fwbool::testing::sample_policy;
using fwbool::testing::three_nibbles;

namespace {

const char* kFivePathDump =
    "1,2 | 2,5 | 1,10 -> accept\n"
    "3,10 | 2,2 | 1,10 -> accept\n"
    "3,10 | 3,4 | 1,10 -> accept\n"
    "3,10 | 5,5 | 1,10 -> accept\n"
    "11,15 | 3,4 | 1,10 -> deny\n";

const char* kGroupedDump =
    "1,10 | 2,5 | 1,10 -> accept\n"
    "11,15 | 3,4 | 1,10 -> deny\n";

void check_invariants(const TreeNode* node, const FieldConfig& config, int depth) {
  if (node->is_terminal()) {
    CHECK(depth == config.field_count());
    return;
  }
  REQUIRE(depth < config.field_count());
  REQUIRE(!node->edges().empty());
  std::uint64_t prev_hi = 0;
  bool first = true;
  for (const TreeEdge& e : node->edges()) {
    CHECK(e.label.lo <= e.label.hi);
    CHECK(e.label.hi <= config.domain_max(depth));
    if (!first) CHECK(e.label.lo > prev_hi);  // disjoint and ascending
    prev_hi = e.label.hi;
    first = false;
    check_invariants(e.child.get(), config, depth + 1);
  }
}

void check_invariants(const DecisionTree& t, const FieldConfig& config) {
  if (t.empty()) return;
  check_invariants(t.root.get(), config, 0);
}

// Reference decision for a rule-list prefix: first match if any rule
// covers the packet, no decision otherwise.
std::optional<Action> covered_first_match(const Policy& policy, const Packet& packet) {
  for (const Rule& rule : policy.rules) {
    if (rule_matches(rule, packet)) return rule.action;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("a single rule becomes its chain tree") {
  const auto cfg = three_nibbles();
  const Rule r = sample_policy().rules[0];
  const DecisionTree t = addrule(r, DecisionTree{}, cfg);
  CHECK(dump_paths(t) == "1,10 | 2,5 | 1,10 -> accept\n");
  check_invariants(t, cfg);
}

TEST_CASE("merging the second sample rule yields the five disjoint paths") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  DecisionTree t = addrule(policy.rules[0], DecisionTree{}, cfg);
  t = addrule(policy.rules[1], t, cfg);
  CHECK(dump_paths(t) == kFivePathDump);
  check_invariants(t, cfg);
  CHECK(tree_stats(t, cfg).leaf_count == 5);
}

TEST_CASE("a rule subsumed by the tree leaves the decision unchanged") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  const DecisionTree t = build_tree(policy, cfg);
  const Rule inside{{{4, 8}, {3, 4}, {2, 9}}, Action::Deny};  // inside the accept box
  const DecisionTree t2 = addrule(inside, t, cfg);
  for (const Packet& p : all_packets(cfg)) {
    CHECK(try_evaluate(t2, p) == try_evaluate(t, p));
  }
}

TEST_CASE("addrule rejects arity mismatches") {
  const Rule bad{{{1, 2}, {3, 4}}, Action::Accept};
  CHECK_THROWS_AS(addrule(bad, DecisionTree{}, three_nibbles()), std::invalid_argument);

  // rule arity matching the config but not the tree's depth
  const auto cfg2 = FieldConfig::of({4, 4});
  const DecisionTree shallow =
      addrule(Rule{{{1, 2}, {3, 4}}, Action::Accept}, DecisionTree{}, cfg2);
  const Rule deep{{{1, 2}, {3, 4}, {5, 6}}, Action::Deny};
  CHECK_THROWS_AS(addrule(deep, shallow, three_nibbles()), std::invalid_argument);
}

TEST_CASE("build_tree of an empty policy is the empty tree") {
  const Policy empty{{}, Action::Deny};
  CHECK(build_tree(empty, three_nibbles()).empty());
}

TEST_CASE("identical rules collapse into the single-rule chain") {
  const auto cfg = three_nibbles();
  const Rule r = sample_policy().rules[0];
  const DecisionTree chain = addrule(r, DecisionTree{}, cfg);
  Policy repeated{{r, r, r, r}, Action::Deny};
  CHECK(structurally_equal(build_tree(repeated, cfg), chain));
}

TEST_CASE("addrule preserves the existing tree's decisions") {
  std::mt19937 rng(11);
  const auto cfg = three_nibbles();
  const auto packets = all_packets(cfg);
  for (int round = 0; round < 20; ++round) {
    const Policy policy = random_policy(rng, 6, cfg);
    DecisionTree t;
    Policy prefix{{}, policy.default_action};
    for (const Rule& rule : policy.rules) {
      const DecisionTree grown = addrule(rule, t, cfg);
      check_invariants(grown, cfg);
      for (const Packet& p : packets) {
        const auto before = try_evaluate(t, p);
        const auto after = try_evaluate(grown, p);
        if (before.has_value()) {
          CHECK(after == before);
        } else if (rule_matches(rule, p)) {
          CHECK(after == rule.action);
        } else {
          CHECK(!after.has_value());
        }
      }
      t = grown;
      prefix.rules.push_back(rule);
      for (const Packet& p : packets) {
        CHECK(try_evaluate(t, p) == covered_first_match(prefix, p));
      }
    }
  }
}

TEST_CASE("grouping merges the worked example down to two paths") {
  const auto cfg = three_nibbles();
  const DecisionTree t = build_tree(sample_policy(), cfg);
  const DecisionTree grouped = group_adjacent(t);
  CHECK(dump_paths(grouped) == kGroupedDump);
  CHECK(tree_stats(grouped, cfg).leaf_count == 2);
  check_invariants(grouped, cfg);
}

TEST_CASE("grouping is a fixpoint on trees without adjacent siblings") {
  const auto cfg = three_nibbles();
  const Rule r = sample_policy().rules[0];
  const DecisionTree chain = addrule(r, DecisionTree{}, cfg);
  CHECK(structurally_equal(group_adjacent(chain), chain));
  CHECK(group_adjacent(DecisionTree{}).empty());
}

TEST_CASE("grouping preserves semantics and is idempotent") {
  std::mt19937 rng(12);
  const auto cfg = three_nibbles();
  const auto packets = all_packets(cfg);
  for (int round = 0; round < 20; ++round) {
    const Policy policy = random_policy(rng, 8, cfg);
    const DecisionTree t = build_tree(policy, cfg);
    const DecisionTree grouped = group_adjacent(t);
    check_invariants(grouped, cfg);
    for (const Packet& p : packets) {
      CHECK(try_evaluate(grouped, p) == try_evaluate(t, p));
    }
    CHECK(structurally_equal(group_adjacent(grouped), grouped));
    CHECK(tree_stats(grouped, cfg).node_count <= tree_stats(t, cfg).node_count);
  }
}

TEST_CASE("after grouping no two siblings are both abutting and identical") {
  std::mt19937 rng(13);
  const auto cfg = three_nibbles();
  for (int round = 0; round < 20; ++round) {
    const DecisionTree grouped = group_adjacent(build_tree(random_policy(rng, 8, cfg), cfg));
    if (grouped.empty()) continue;
    // walk every internal node
    std::vector<const TreeNode*> stack{grouped.root.get()};
    while (!stack.empty()) {
      const TreeNode* node = stack.back();
      stack.pop_back();
      if (node->is_terminal()) continue;
      const auto& edges = node->edges();
      for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const bool abutting = edges[i].label.hi + 1 == edges[i + 1].label.lo;
        const bool identical = structurally_equal(DecisionTree{edges[i].child},
                                                  DecisionTree{edges[i + 1].child});
        CHECK(!(abutting && identical));
      }
      for (const TreeEdge& e : edges) stack.push_back(e.child.get());
    }
  }
}

TEST_CASE("completion covers the whole space with the default") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  const auto grouped = group_adjacent(build_tree(policy, cfg));
  const auto completed = complete(grouped, policy.default_action, cfg);
  CHECK(tree_stats(completed, cfg).is_complete);
  check_invariants(completed.tree(), cfg);
  for (const Packet& p : all_packets(cfg)) {
    const bool in_box = Interval{1, 10}.contains(p[0]) && Interval{2, 5}.contains(p[1]) &&
                        Interval{1, 10}.contains(p[2]);
    CHECK(evaluate(completed, p) == (in_box ? Action::Accept : Action::Deny));
  }
}

TEST_CASE("completing the empty tree yields one all-covering path") {
  const auto cfg = three_nibbles();
  const auto completed = complete(DecisionTree{}, Action::Accept, cfg);
  CHECK(dump_paths(completed) == "0,15 | 0,15 | 0,15 -> accept\n");
  CHECK(tree_stats(completed, cfg).is_complete);
}

TEST_CASE("completing an already-complete tree changes nothing") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  const auto completed = complete(build_tree(policy, cfg), policy.default_action, cfg);
  const auto again = complete(completed.tree(), Action::Accept, cfg);
  CHECK(structurally_equal(again.tree(), completed.tree()));
}

TEST_CASE("tree evaluation equals first_match over the whole space") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  const auto completed = complete(build_tree(policy, cfg), policy.default_action, cfg);
  CHECK(evaluate(completed, {5, 3, 5}) == Action::Accept);
  CHECK(evaluate(completed, {12, 3, 5}) == Action::Deny);
  for (const Packet& p : all_packets(cfg)) {
    CHECK(evaluate(completed, p) == first_match(policy, p));
  }
}

TEST_CASE("partial trees return no decision off their domain") {
  const auto cfg = three_nibbles();
  const DecisionTree t = build_tree(sample_policy(), cfg);
  CHECK(try_evaluate(t, {0, 0, 0}) == std::nullopt);
  CHECK(try_evaluate(DecisionTree{}, {0, 0, 0}) == std::nullopt);
}

TEST_CASE("whitelist extraction of the worked example is the accept box") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  const auto completed =
      group_adjacent(complete(group_adjacent(build_tree(policy, cfg)),
                              policy.default_action, cfg));
  const auto whitelist = extract_rules(completed, Action::Accept);
  REQUIRE(whitelist.size() == 1);
  CHECK(whitelist[0].predicate == std::vector<Interval>{{1, 10}, {2, 5}, {1, 10}});
  CHECK(whitelist[0].action == Action::Accept);
}

TEST_CASE("blacklist extraction covers exactly the denied packets") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();
  const auto completed =
      group_adjacent(complete(group_adjacent(build_tree(policy, cfg)),
                              policy.default_action, cfg));
  const auto blacklist = extract_rules(completed, Action::Deny);
  const Policy as_policy{blacklist, Action::Accept};
  for (const Packet& p : all_packets(cfg)) {
    const bool denied = first_match(policy, p) == Action::Deny;
    CHECK((first_match(as_policy, p) == Action::Deny) == denied);
  }
}

TEST_CASE("extraction from an all-accept tree returns no deny rules") {
  const auto cfg = three_nibbles();
  const auto completed = complete(DecisionTree{}, Action::Accept, cfg);
  CHECK(extract_rules(completed, Action::Deny).empty());
  CHECK(extract_rules(completed, Action::Accept).size() == 1);
}

TEST_CASE("extracted accept and deny rules partition the packet space") {
  std::mt19937 rng(14);
  const auto cfg = three_nibbles();
  const auto packets = all_packets(cfg);
  for (int round = 0; round < 10; ++round) {
    const Policy policy = random_policy(rng, 8, cfg);
    const auto completed =
        group_adjacent(complete(group_adjacent(build_tree(policy, cfg)),
                                policy.default_action, cfg));
    auto rules = extract_rules(completed, Action::Accept);
    const auto denies = extract_rules(completed, Action::Deny);
    rules.insert(rules.end(), denies.begin(), denies.end());
    for (const Packet& p : packets) {
      int hits = 0;
      for (const Rule& r : rules) {
        if (rule_matches(r, p)) ++hits;
      }
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("tree statistics count leaves nodes and degrees") {
  const auto cfg = three_nibbles();
  const auto policy = sample_policy();

  const Rule r = policy.rules[0];
  const DecisionTree chain = addrule(r, DecisionTree{}, cfg);
  auto s = tree_stats(chain, cfg);
  CHECK(s.leaf_count == 1);
  CHECK(s.node_count == 4);
  CHECK(s.max_out_degree == 1);
  CHECK(!s.is_complete);

  const DecisionTree raw = build_tree(policy, cfg);
  s = tree_stats(raw, cfg);
  CHECK(s.leaf_count == 5);
  // raw-tree leaf bound for n rules: (2n-1)^d
  CHECK(s.leaf_count <= 27);

  CHECK(tree_stats(DecisionTree{}, cfg).node_count == 0);
}

TEST_CASE("raw tree leaf counts stay within the (2n-1)^d bound") {
  std::mt19937 rng(15);
  const auto cfg = three_nibbles();
  for (int round = 0; round < 30; ++round) {
    const Policy policy = random_policy(rng, 10, cfg);
    const auto n = static_cast<std::uint64_t>(policy.rules.size());
    const std::uint64_t bound = (2 * n - 1) * (2 * n - 1) * (2 * n - 1);
    CHECK(tree_stats(build_tree(policy, cfg), cfg).leaf_count <= bound);
    // completion adds at most one extra edge per node level
    const auto completed = complete(build_tree(policy, cfg), policy.default_action, cfg);
    const std::uint64_t cbound = (2 * n + 1) * (2 * n + 1) * (2 * n + 1);
    CHECK(tree_stats(completed, cfg).leaf_count <= cbound);
  }
}
