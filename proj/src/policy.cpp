#include "fwbool/policy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace fwbool {

std::string_view to_string(Action a) {
  return a == Action::Accept ? "accept" : "deny";
}

std::optional<Interval> intersect(Interval a, Interval b) {
  std::uint64_t lo = std::max(a.lo, b.lo);
  std::uint64_t hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

FieldConfig FieldConfig::of(std::vector<unsigned> widths) {
  if (widths.empty() || widths.size() > 12) {
    throw std::invalid_argument("field count must be between 1 and 12");
  }
  for (unsigned w : widths) {
    if (w < 1 || w > 63) {
      throw std::invalid_argument("field width must be between 1 and 63 bits");
    }
  }
  return FieldConfig(std::move(widths));
}

FieldConfig FieldConfig::parse(std::string_view csv) {
  std::vector<unsigned> widths;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string_view item = csv.substr(pos, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - pos);
    unsigned w = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), w);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw std::invalid_argument("malformed field width list: expected numbers separated by commas");
    }
    widths.push_back(w);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return of(std::move(widths));
}

unsigned FieldConfig::bit_count() const {
  unsigned total = 0;
  for (unsigned w : widths_) total += w;
  return total;
}

unsigned FieldConfig::bit_offset(int f) const {
  unsigned offset = 0;
  for (int g = 0; g < f; ++g) offset += widths_[static_cast<std::size_t>(g)];
  return offset;
}

bool rule_matches(const Rule& rule, const Packet& packet) {
  for (std::size_t f = 0; f < rule.predicate.size(); ++f) {
    if (!rule.predicate[f].contains(packet[f])) return false;
  }
  return true;
}

Action first_match(const Policy& policy, const Packet& packet) {
  for (const Rule& rule : policy.rules) {
    if (rule_matches(rule, packet)) return rule.action;
  }
  return policy.default_action;
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

// Cursor over one line of rule-file text; positions are 1-based.
class LineScanner {
 public:
  LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  std::uint64_t number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected a number");
    std::uint64_t value = 0;
    auto sub = text_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), value);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("number out of range");
    }
    (void)ptr;
    return value;
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  bool starts_with(std::string_view prefix) const {
    return text_.substr(pos_).starts_with(prefix);
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, static_cast<int>(pos_) + 1, message);
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

Action parse_action_word(LineScanner& sc) {
  std::string_view w = sc.word();
  if (w == "accept") return Action::Accept;
  if (w == "deny") return Action::Deny;
  sc.fail("expected 'accept' or 'deny'");
}

}  // namespace

Policy parse_policy(std::string_view text, const FieldConfig& config) {
  Policy policy;
  std::optional<Action> default_action;
  const int d = config.field_count();

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    ++line_no;
    if (eol == std::string_view::npos) {
      pos = text.size() + 1;
      if (line.empty()) break;
    } else {
      pos = eol + 1;
    }

    LineScanner sc(line, line_no);
    if (sc.at_end()) continue;
    if (sc.peek() == '#') continue;

    if (sc.starts_with("default")) {
      if (sc.word() != "default") sc.fail("expected a rule or directive");
      Action a = parse_action_word(sc);
      if (!sc.at_end()) sc.fail("unexpected text after directive");
      if (default_action) sc.fail("duplicate default directive");
      default_action = a;
      continue;
    }

    Rule rule;
    for (int f = 0; f < d; ++f) {
      sc.skip_ws();
      sc.expect('[');
      std::uint64_t lo = sc.number();
      sc.skip_ws();
      sc.expect(',');
      std::uint64_t hi = sc.number();
      sc.skip_ws();
      sc.expect(']');
      if (lo > hi) {
        sc.fail("empty interval: lo > hi on field " + std::to_string(f));
      }
      if (hi > config.domain_max(f)) {
        sc.fail("interval out of range on field " + std::to_string(f) + ": " +
                std::to_string(hi) + " > " + std::to_string(config.domain_max(f)));
      }
      rule.predicate.push_back({lo, hi});
    }
    sc.skip_ws();
    if (sc.peek() == '[') {
      sc.fail("too many intervals: expected exactly " + std::to_string(d));
    }
    sc.expect('-');
    sc.expect('>');
    rule.action = parse_action_word(sc);
    if (!sc.at_end()) sc.fail("unexpected text after rule");
    policy.rules.push_back(std::move(rule));
  }

  if (!default_action) {
    throw ParseError(line_no, 1, "missing default directive");
  }
  policy.default_action = *default_action;
  return policy;
}

std::string to_text(const Policy& policy) {
  std::ostringstream out;
  for (const Rule& rule : policy.rules) {
    for (std::size_t f = 0; f < rule.predicate.size(); ++f) {
      if (f > 0) out << ' ';
      out << '[' << rule.predicate[f].lo << ',' << rule.predicate[f].hi << ']';
    }
    out << " -> " << to_string(rule.action) << '\n';
  }
  out << "default " << to_string(policy.default_action) << '\n';
  return out.str();
}

ValidationReport validate_policy(const Policy& policy, const FieldConfig& config) {
  ValidationReport report;
  const std::size_t d = static_cast<std::size_t>(config.field_count());
  for (std::size_t i = 0; i < policy.rules.size(); ++i) {
    const Rule& rule = policy.rules[i];
    if (rule.predicate.size() != d) {
      report.violations.push_back(
          {i, -1,
           "rule has " + std::to_string(rule.predicate.size()) + " intervals, expected " +
               std::to_string(d)});
      continue;
    }
    for (std::size_t f = 0; f < d; ++f) {
      const Interval& iv = rule.predicate[f];
      if (iv.lo > iv.hi) {
        report.violations.push_back(
            {i, static_cast<int>(f), "empty interval: lo > hi"});
      } else if (iv.hi > config.domain_max(static_cast<int>(f))) {
        report.violations.push_back(
            {i, static_cast<int>(f),
             "interval exceeds field domain: " + std::to_string(iv.hi) + " > " +
                 std::to_string(config.domain_max(static_cast<int>(f)))});
      }
    }
  }
  return report;
}

}  // namespace fwbool
