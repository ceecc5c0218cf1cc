#include "fwbool/decision_tree.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <span>
#include <sstream>
#include <unordered_map>

namespace fwbool {

namespace {

// Chain tree of a rule suffix: one edge per remaining interval, the
// action at the end.
TreeNode::Ptr chain_of(std::span<const Interval> suffix, Action action) {
  TreeNode::Ptr node = TreeNode::terminal(action);
  for (std::size_t i = suffix.size(); i-- > 0;) {
    node = TreeNode::internal({{suffix[i], node}});
  }
  return node;
}

TreeNode::Ptr addrule_rec(std::span<const Interval> suffix, Action action,
                          const TreeNode::Ptr& tree, const FieldConfig& config, int depth) {
  if (tree->is_terminal()) {
    if (!suffix.empty()) {
      throw std::invalid_argument("rule suffix is deeper than the tree");
    }
    // Base case: both the rule and the tree are down to an action. The
    // tree's action stands; earlier rules keep priority.
    return tree;
  }
  if (suffix.empty()) {
    throw std::invalid_argument("tree is deeper than the rule suffix");
  }

  const Interval rule_iv = suffix.front();
  const std::span<const Interval> rest = suffix.subspan(1);
  std::vector<TreeEdge> out;

  for (const TreeEdge& edge : tree->edges()) {
    auto overlap = intersect(edge.label, rule_iv);
    if (!overlap) {
      out.push_back(edge);
      continue;
    }
    // Split the edge into the overlap and up to two remainder pieces;
    // remainders keep the old subtree, the overlap recurses.
    if (edge.label.lo < overlap->lo) {
      out.push_back({{edge.label.lo, overlap->lo - 1}, edge.child});
    }
    out.push_back({*overlap, addrule_rec(rest, action, edge.child, config, depth + 1)});
    if (edge.label.hi > overlap->hi) {
      out.push_back({{overlap->hi + 1, edge.label.hi}, edge.child});
    }
  }

  // Gaps between the original edges (and before the first / after the
  // last, clipped to the field domain) that the rule reaches get a fresh
  // chain for the rest of the rule.
  TreeNode::Ptr rest_chain;  // built lazily, shared across gaps
  auto add_gap = [&](std::uint64_t lo, std::uint64_t hi) {
    auto g = intersect({lo, hi}, rule_iv);
    if (!g) return;
    if (!rest_chain) rest_chain = chain_of(rest, action);
    out.push_back({*g, rest_chain});
  };
  std::uint64_t cursor = 0;
  for (const TreeEdge& edge : tree->edges()) {
    if (edge.label.lo > cursor) add_gap(cursor, edge.label.lo - 1);
    cursor = edge.label.hi + 1;
  }
  const std::uint64_t domain_hi = config.domain_max(depth);
  if (cursor <= domain_hi) add_gap(cursor, domain_hi);

  std::sort(out.begin(), out.end(),
            [](const TreeEdge& a, const TreeEdge& b) { return a.label.lo < b.label.lo; });
  return TreeNode::internal(std::move(out));
}

// Hash-consing table: structurally equal nodes get the same pointer, so
// the grouping pass can compare subtrees in O(1).
class NodeInterner {
 public:
  TreeNode::Ptr terminal(Action a) {
    TreeNode::Ptr& slot = terminals_[static_cast<int>(a)];
    if (!slot) slot = TreeNode::terminal(a);
    return slot;
  }

  TreeNode::Ptr internal(std::vector<TreeEdge> edges) {
    Key key;
    key.reserve(edges.size());
    for (const TreeEdge& e : edges) {
      key.push_back({e.label.lo, e.label.hi,
                     reinterpret_cast<std::uintptr_t>(e.child.get())});
    }
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    TreeNode::Ptr node = TreeNode::internal(std::move(edges));
    table_.emplace(std::move(key), node);
    return node;
  }

 private:
  struct EdgeKey {
    std::uint64_t lo, hi;
    std::uintptr_t child;
    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  };
  using Key = std::vector<EdgeKey>;

  struct KeyHash {
    std::size_t operator()(const Key& key) const {
      std::size_t h = key.size();
      for (const EdgeKey& e : key) {
        h = h * 1000003 + std::hash<std::uint64_t>{}(e.lo);
        h = h * 1000003 + std::hash<std::uint64_t>{}(e.hi);
        h = h * 1000003 + std::hash<std::uintptr_t>{}(e.child);
      }
      return h;
    }
  };

  TreeNode::Ptr terminals_[2];
  std::unordered_map<Key, TreeNode::Ptr, KeyHash> table_;
};

TreeNode::Ptr group_rec(const TreeNode::Ptr& node, NodeInterner& interner,
                        std::unordered_map<const TreeNode*, TreeNode::Ptr>& memo) {
  auto it = memo.find(node.get());
  if (it != memo.end()) return it->second;

  TreeNode::Ptr result;
  if (node->is_terminal()) {
    result = interner.terminal(node->action());
  } else {
    std::vector<TreeEdge> merged;
    for (const TreeEdge& edge : node->edges()) {
      TreeNode::Ptr child = group_rec(edge.child, interner, memo);
      if (!merged.empty() && merged.back().label.hi + 1 == edge.label.lo &&
          merged.back().child.get() == child.get()) {
        merged.back().label.hi = edge.label.hi;
      } else {
        merged.push_back({edge.label, std::move(child)});
      }
    }
    result = interner.internal(std::move(merged));
  }
  memo.emplace(node.get(), result);
  return result;
}

bool nodes_equal(const TreeNode* a, const TreeNode* b) {
  if (a == b) return true;
  if (a->is_terminal() != b->is_terminal()) return false;
  if (a->is_terminal()) return a->action() == b->action();
  const auto& ea = a->edges();
  const auto& eb = b->edges();
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].label != eb[i].label) return false;
    if (!nodes_equal(ea[i].child.get(), eb[i].child.get())) return false;
  }
  return true;
}

const TreeNode* descend(const TreeNode* node, std::uint64_t value) {
  const auto& edges = node->edges();
  auto it = std::partition_point(edges.begin(), edges.end(),
                                 [&](const TreeEdge& e) { return e.label.hi < value; });
  if (it == edges.end() || !it->label.contains(value)) return nullptr;
  return it->child.get();
}

void stats_rec(const TreeNode* node, const FieldConfig& config, int depth, TreeStats& s,
               bool& covered) {
  s.node_count += 1;
  if (node->is_terminal()) {
    s.leaf_count += 1;
    return;
  }
  const auto& edges = node->edges();
  s.max_out_degree = std::max<std::uint64_t>(s.max_out_degree, edges.size());
  std::uint64_t expect = 0;
  for (const TreeEdge& e : edges) {
    if (e.label.lo != expect) covered = false;
    expect = e.label.hi + 1;
    stats_rec(e.child.get(), config, depth + 1, s, covered);
  }
  if (expect != config.domain_max(depth) + 1) covered = false;
}

void dump_rec(const TreeNode* node, std::string& prefix, std::string& out) {
  if (node->is_terminal()) {
    out += prefix;
    out += " -> ";
    out += to_string(node->action());
    out += '\n';
    return;
  }
  const std::size_t mark = prefix.size();
  for (const TreeEdge& e : node->edges()) {
    if (mark > 0) prefix += " | ";
    prefix += std::to_string(e.label.lo);
    prefix += ',';
    prefix += std::to_string(e.label.hi);
    dump_rec(e.child.get(), prefix, out);
    prefix.resize(mark);
  }
}

void extract_rec(const TreeNode* node, Action keep, std::vector<Interval>& path,
                 std::vector<Rule>& out) {
  if (node->is_terminal()) {
    if (node->action() == keep) out.push_back({path, keep});
    return;
  }
  for (const TreeEdge& e : node->edges()) {
    path.push_back(e.label);
    extract_rec(e.child.get(), keep, path, out);
    path.pop_back();
  }
}

}  // namespace

DecisionTree addrule(const Rule& r, const DecisionTree& t, const FieldConfig& config) {
  if (r.predicate.size() != static_cast<std::size_t>(config.field_count())) {
    throw std::invalid_argument("rule arity does not match the field config");
  }
  std::span<const Interval> suffix(r.predicate);
  if (t.empty()) return {chain_of(suffix, r.action)};
  return {addrule_rec(suffix, r.action, t.root, config, 0)};
}

DecisionTree build_tree(const Policy& policy, const FieldConfig& config) {
  DecisionTree tree;
  for (const Rule& rule : policy.rules) {
    tree = addrule(rule, tree, config);
  }
  return tree;
}

DecisionTree group_adjacent(const DecisionTree& t) {
  if (t.empty()) return t;
  NodeInterner interner;
  std::unordered_map<const TreeNode*, TreeNode::Ptr> memo;
  return {group_rec(t.root, interner, memo)};
}

CompleteDecisionTree group_adjacent(const CompleteDecisionTree& t) {
  return CompleteDecisionTree(group_adjacent(t.tree()));
}

CompleteDecisionTree complete(const DecisionTree& t, Action default_action,
                              const FieldConfig& config) {
  Rule everything;
  for (int f = 0; f < config.field_count(); ++f) {
    everything.predicate.push_back(config.domain(f));
  }
  everything.action = default_action;
  DecisionTree filled = addrule(everything, t, config);
  assert(tree_stats(filled, config).is_complete);
  return CompleteDecisionTree(std::move(filled));
}

Action evaluate(const CompleteDecisionTree& t, const Packet& packet) {
  const TreeNode* node = t.tree().root.get();
  for (std::uint64_t value : packet) {
    node = descend(node, value);
    assert(node != nullptr);
  }
  return node->action();
}

std::optional<Action> try_evaluate(const DecisionTree& t, const Packet& packet) {
  if (t.empty()) return std::nullopt;
  const TreeNode* node = t.root.get();
  for (std::uint64_t value : packet) {
    node = descend(node, value);
    if (node == nullptr) return std::nullopt;
  }
  return node->action();
}

std::vector<Rule> extract_rules(const CompleteDecisionTree& t, Action keep) {
  std::vector<Rule> out;
  std::vector<Interval> path;
  extract_rec(t.tree().root.get(), keep, path, out);
  return out;
}

TreeStats tree_stats(const DecisionTree& t, const FieldConfig& config) {
  TreeStats s;
  if (t.empty()) return s;
  bool covered = true;
  stats_rec(t.root.get(), config, 0, s, covered);
  s.is_complete = covered;
  return s;
}

TreeStats tree_stats(const CompleteDecisionTree& t, const FieldConfig& config) {
  return tree_stats(t.tree(), config);
}

std::string dump_paths(const DecisionTree& t) {
  if (t.empty()) return "";
  std::string out;
  std::string prefix;
  dump_rec(t.root.get(), prefix, out);
  return out;
}

std::string dump_paths(const CompleteDecisionTree& t) { return dump_paths(t.tree()); }

bool structurally_equal(const DecisionTree& a, const DecisionTree& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return nodes_equal(a.root.get(), b.root.get());
}

}  // namespace fwbool
