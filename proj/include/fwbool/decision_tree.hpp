#ifndef FWBOOL_DECISION_TREE_HPP
#define FWBOOL_DECISION_TREE_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fwbool/policy.hpp"

namespace fwbool {

class TreeNode;

struct TreeEdge {
  Interval label;
  std::shared_ptr<const TreeNode> child;
};

/// Immutable node of a firewall decision tree. All nodes of depth f test
/// field f; terminals sit at depth d and carry the action. Edges of an
/// internal node are pairwise disjoint and sorted ascending by lo.
class TreeNode {
 public:
  using Ptr = std::shared_ptr<const TreeNode>;

  static Ptr terminal(Action a) { return std::make_shared<const TreeNode>(a); }
  static Ptr internal(std::vector<TreeEdge> edges) {
    return std::make_shared<const TreeNode>(std::move(edges));
  }

  explicit TreeNode(Action a) : data_(a) {}
  explicit TreeNode(std::vector<TreeEdge> edges) : data_(std::move(edges)) {}

  bool is_terminal() const { return std::holds_alternative<Action>(data_); }
  Action action() const { return std::get<Action>(data_); }
  const std::vector<TreeEdge>& edges() const {
    return std::get<std::vector<TreeEdge>>(data_);
  }

 private:
  std::variant<Action, std::vector<TreeEdge>> data_;
};

/// A (possibly partial) decision tree. A null root is the empty tree:
/// the tree of a policy with no rules, in which no packet has a path.
struct DecisionTree {
  TreeNode::Ptr root;
  bool empty() const { return root == nullptr; }
};

class CompleteDecisionTree;

/// Merges rule r into tree t. The existing tree wins on overlap, so
/// folding rules in list order realizes first-match priority. Throws
/// std::invalid_argument if the rule arity does not match the config.
DecisionTree addrule(const Rule& r, const DecisionTree& t, const FieldConfig& config);

/// Folds addrule over the rule list in order, starting from the empty
/// tree. No grouping is applied; see group_adjacent.
DecisionTree build_tree(const Policy& policy, const FieldConfig& config);

/// Merges sibling edges whose intervals abut (hi + 1 == next lo) and
/// whose subtrees are structurally identical. Single bottom-up pass;
/// semantics preserving and idempotent.
DecisionTree group_adjacent(const DecisionTree& t);

/// Grouping cannot uncover packets, so completeness is preserved.
CompleteDecisionTree group_adjacent(const CompleteDecisionTree& t);

/// Fills every uncovered part of the packet space with the default
/// action, so every packet reaches a terminal.
CompleteDecisionTree complete(const DecisionTree& t, Action default_action,
                              const FieldConfig& config);

/// Decision tree in which the edge intervals at every node cover the
/// whole field domain. Obtainable only through complete().
class CompleteDecisionTree {
 public:
  const DecisionTree& tree() const { return tree_; }

 private:
  friend CompleteDecisionTree complete(const DecisionTree&, Action, const FieldConfig&);
  friend CompleteDecisionTree group_adjacent(const CompleteDecisionTree&);
  explicit CompleteDecisionTree(DecisionTree t) : tree_(std::move(t)) {}
  DecisionTree tree_;
};

/// Walks the tree with a binary search over the sorted edges at each
/// node; O(d log n) per packet.
Action evaluate(const CompleteDecisionTree& t, const Packet& packet);

/// Same walk on a possibly partial tree; nullopt when the packet has no
/// path.
std::optional<Action> try_evaluate(const DecisionTree& t, const Packet& packet);

/// One rule per root-to-terminal path whose action equals keep. The
/// extracted rules cover pairwise-disjoint boxes, so their order does
/// not affect semantics; they are returned in path order.
std::vector<Rule> extract_rules(const CompleteDecisionTree& t, Action keep);

struct TreeStats {
  std::uint64_t leaf_count = 0;
  std::uint64_t node_count = 0;
  std::uint64_t max_out_degree = 0;
  bool is_complete = false;
};

/// Exact counts by traversal. Shared subtrees are counted once per path,
/// matching the drawn-tree view of the structure.
TreeStats tree_stats(const DecisionTree& t, const FieldConfig& config);
TreeStats tree_stats(const CompleteDecisionTree& t, const FieldConfig& config);

/// Deterministic depth-first dump, one root-to-terminal path per line:
/// "lo,hi | lo,hi | ... -> action". Paths come out sorted because edges
/// are sorted at every node.
std::string dump_paths(const DecisionTree& t);
std::string dump_paths(const CompleteDecisionTree& t);

bool structurally_equal(const DecisionTree& a, const DecisionTree& b);

}  // namespace fwbool

#endif  // FWBOOL_DECISION_TREE_HPP
