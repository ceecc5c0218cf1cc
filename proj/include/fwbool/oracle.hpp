#ifndef FWBOOL_ORACLE_HPP
#define FWBOOL_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwbool/normal_form.hpp"
#include "fwbool/policy.hpp"

namespace fwbool {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

/// Raised when the packet space exceeds the enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::uint64_t required, std::uint64_t allowed);
  std::uint64_t required() const { return required_; }
  std::uint64_t allowed() const { return allowed_; }

 private:
  std::uint64_t required_;
  std::uint64_t allowed_;
};

/// Packets are ranked lexicographically: field 0 is the most significant
/// digit, so rank order equals lexicographic packet order.
std::uint64_t packet_index(const Packet& packet, const FieldConfig& config);
Packet index_to_packet(std::uint64_t index, const FieldConfig& config);

/// Product of the field domain sizes. Throws BudgetError when it
/// exceeds the budget.
std::uint64_t space_size_checked(const FieldConfig& config, std::uint64_t budget);

/// Total decision map over the whole packet space, indexed by rank.
struct DecisionMap {
  FieldConfig config;
  std::vector<Action> decisions;

  std::uint64_t size() const { return decisions.size(); }
  Action at_index(std::uint64_t i) const { return decisions[i]; }
  Action at(const Packet& p) const { return decisions[packet_index(p, config)]; }
  std::uint64_t count(Action a) const;
};

/// first_match materialized over every packet. The parallel kernel
/// writes each rank into its own slot, so the result is identical to the
/// serial reference regardless of scheduling.
DecisionMap enumerate_decisions(const Policy& policy, const FieldConfig& config,
                                std::uint64_t budget = kDefaultBudget);
DecisionMap enumerate_decisions_serial(const Policy& policy, const FieldConfig& config,
                                       std::uint64_t budget = kDefaultBudget);

struct Verdict {
  bool holds = true;
  std::optional<Packet> counterexample;  // lexicographically smallest
};

enum class CheckMode : std::uint8_t { Implication, Equivalence };

/// Holds iff every packet accepted by lhs is accepted by rhs; otherwise
/// the smallest accepted-by-lhs-only packet. Minimum-rank reduction
/// keeps the counterexample deterministic under parallel sweep order.
Verdict check_implication(const Policy& lhs, const Policy& rhs, const FieldConfig& config,
                          std::uint64_t budget = kDefaultBudget);
Verdict check_implication_serial(const Policy& lhs, const Policy& rhs,
                                 const FieldConfig& config,
                                 std::uint64_t budget = kDefaultBudget);

/// Bidirectional implication; counterexample is the smallest packet on
/// which the decisions differ.
Verdict check_equivalence(const Policy& lhs, const Policy& rhs, const FieldConfig& config,
                          std::uint64_t budget = kDefaultBudget);
Verdict check_equivalence_serial(const Policy& lhs, const Policy& rhs,
                                 const FieldConfig& config,
                                 std::uint64_t budget = kDefaultBudget);

/// Machine-readable verdict line: "EQUIVALENT", "IMPLIES", or
/// "COUNTEREXAMPLE v1 v2 ... vd".
std::string render_verdict(const Verdict& v, CheckMode mode);

/// Linear-time DNF satisfiability: true iff some clause contains no
/// variable in both polarities. Throws std::invalid_argument on a
/// non-DNF input.
bool dnf_sat(const NormalFormExpr& e);

}  // namespace fwbool

#endif  // FWBOOL_ORACLE_HPP
