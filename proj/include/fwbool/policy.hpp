#ifndef FWBOOL_POLICY_HPP
#define FWBOOL_POLICY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fwbool {

enum class Action : std::uint8_t { Accept, Deny };

constexpr Action opposite(Action a) {
  return a == Action::Accept ? Action::Deny : Action::Accept;
}

std::string_view to_string(Action a);

/// Closed integer range [lo, hi]. Never empty; operations that would
/// produce an empty range return std::nullopt instead.
struct Interval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  bool contains(std::uint64_t v) const { return lo <= v && v <= hi; }
  std::uint64_t size() const { return hi - lo + 1; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

std::optional<Interval> intersect(Interval a, Interval b);

/// Number and bit-widths of the packet header fields under analysis.
/// Field f ranges over [0, 2^widths[f] - 1].
class FieldConfig {
 public:
  FieldConfig() = default;

  /// Throws std::invalid_argument unless 1 <= d <= 12 and 1 <= w <= 63
  /// for every width.
  static FieldConfig of(std::vector<unsigned> widths);

  /// Parses a comma-separated width list such as "4,4,4".
  static FieldConfig parse(std::string_view csv);

  int field_count() const { return static_cast<int>(widths_.size()); }
  unsigned width(int f) const { return widths_[static_cast<std::size_t>(f)]; }
  const std::vector<unsigned>& widths() const { return widths_; }

  std::uint64_t domain_max(int f) const {
    return (std::uint64_t{1} << width(f)) - 1;
  }
  Interval domain(int f) const { return {0, domain_max(f)}; }

  /// Total number of bit variables, sum of all widths.
  unsigned bit_count() const;

  /// First bit-variable id of field f when all fields are laid out in
  /// order (used by the DIMACS numbering).
  unsigned bit_offset(int f) const;

  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;

 private:
  explicit FieldConfig(std::vector<unsigned> widths) : widths_(std::move(widths)) {}
  std::vector<unsigned> widths_;
};

/// One header value per field, values[f] < 2^widths[f].
using Packet = std::vector<std::uint64_t>;

struct Rule {
  std::vector<Interval> predicate;  // exactly one interval per field
  Action action = Action::Deny;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Policy {
  std::vector<Rule> rules;  // ordered, first match wins
  Action default_action = Action::Deny;

  friend bool operator==(const Policy&, const Policy&) = default;
};

/// Reference semantics: the action of the earliest rule whose every
/// interval contains the corresponding packet value, else the default.
Action first_match(const Policy& policy, const Packet& packet);

bool rule_matches(const Rule& rule, const Packet& packet);

/// Raised on malformed rule-file text. Positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the line-oriented rule-file format:
///
///   # comment
///   [1,10] [2,5] [1,10] -> accept
///   default deny
///
/// Exactly one `default` directive per file; rule order is preserved.
Policy parse_policy(std::string_view text, const FieldConfig& config);

/// Normalized textual form: one rule per line, `default` directive last.
/// parse_policy(to_text(p)) reproduces p exactly.
std::string to_text(const Policy& policy);

struct Violation {
  std::size_t rule_index;
  int field;  // -1 when the violation is not tied to one field
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every rule against the config: arity, lo <= hi, field range.
ValidationReport validate_policy(const Policy& policy, const FieldConfig& config);

}  // namespace fwbool

#endif  // FWBOOL_POLICY_HPP
