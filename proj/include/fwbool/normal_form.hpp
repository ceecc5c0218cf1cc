#ifndef FWBOOL_NORMAL_FORM_HPP
#define FWBOOL_NORMAL_FORM_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fwbool/decision_tree.hpp"
#include "fwbool/prefix_cover.hpp"

namespace fwbool {

enum class Form : std::uint8_t { Dnf, Cnf };

/// Clauses of literals over the per-field bit variables. DNF clauses are
/// conjunctions, CNF clauses disjunctions. Zero clauses is the identity
/// of the outer connective (false for DNF, true for CNF); an empty
/// clause is the absorbing element (true in a DNF, false in a CNF).
struct NormalFormExpr {
  Form form = Form::Dnf;
  std::vector<std::vector<Literal>> clauses;
  unsigned var_count = 0;  // total bit variables, sum of field widths
};

/// One conjunction per (accept path, choice of per-edge cover prefix):
/// the cross product of interval_to_terms over the path's edges. A
/// packet satisfies the result iff the tree accepts it.
NormalFormExpr tree_to_dnf(const CompleteDecisionTree& t, const FieldConfig& config);

/// De Morgan negation of the deny-path DNF; satisfied by exactly the
/// accepted packets.
NormalFormExpr tree_to_cnf(const CompleteDecisionTree& t, const FieldConfig& config);

/// Clause-wise De Morgan: each conjunction becomes a disjunction with
/// every polarity flipped. Clause count is preserved and evaluation is
/// negated pointwise. Throws std::invalid_argument on a non-DNF input.
NormalFormExpr negate_dnf(const NormalFormExpr& e);

/// Dual of negate_dnf.
NormalFormExpr negate_cnf(const NormalFormExpr& e);

bool eval_expr(const NormalFormExpr& e, const Packet& packet, const FieldConfig& config);

/// Size report against the polynomial clause bounds. The adjusted bound
/// uses the (2n+1)^d leaf factor of the completed tree; the headline
/// bound with the (2n-1)^d factor of the raw tree is reported alongside.
struct BoundReport {
  std::uint64_t clause_count = 0;
  std::uint64_t max_clause_literals = 0;
  std::uint64_t literal_limit = 0;    // sum of field widths
  std::uint64_t adjusted_bound = 0;   // (2 max_w)^d (2n+1)^d, saturating
  std::uint64_t headline_bound = 0;   // (2 max_w)^d (2n-1)^d, 0 when n == 0
  bool clause_count_ok = false;
  bool clause_width_ok = false;
  bool pass = false;
};

BoundReport bound_check(const NormalFormExpr& e, std::size_t rule_count,
                        const FieldConfig& config);

/// Multiplies with saturation at the maximum uint64 value.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t saturating_pow(std::uint64_t base, unsigned exp);

/// DIMACS text. Variable id of bit k of field f is
/// 1 + bit_offset(f) + k; a comment line "c field f width w offset o"
/// per field makes the numbering self-describing. CNF uses the standard
/// "p cnf V C" header; DNF reuses the syntax with a "p dnf" header.
/// Byte-deterministic for a given expression.
std::string emit_dimacs(const NormalFormExpr& e, const FieldConfig& config);

struct DimacsFile {
  std::string form;  // "cnf" or "dnf"
  int var_count = 0;
  std::vector<std::vector<int>> clauses;  // signed 1-based literals
};

/// Parses DIMACS text (comments skipped). Throws std::runtime_error on
/// malformed input.
DimacsFile parse_dimacs(std::string_view text);

/// True when the two files contain the same clauses up to clause order.
bool same_clause_multiset(const DimacsFile& a, const DimacsFile& b);

}  // namespace fwbool

#endif  // FWBOOL_NORMAL_FORM_HPP
