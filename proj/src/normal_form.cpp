#include "fwbool/normal_form.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fwbool {

namespace {

struct PathCollector {
  Action keep;
  std::vector<Interval> path;
  std::vector<std::vector<Interval>> paths;

  void walk(const TreeNode* node) {
    if (node->is_terminal()) {
      if (node->action() == keep) paths.push_back(path);
      return;
    }
    for (const TreeEdge& e : node->edges()) {
      path.push_back(e.label);
      walk(e.child.get());
      path.pop_back();
    }
  }
};

// Cross product of the per-field term lists of one path: every choice of
// one prefix term per field becomes one conjunction spanning all fields.
void emit_path_clauses(const std::vector<Interval>& path, const FieldConfig& config,
                       std::vector<std::vector<Literal>>& clauses) {
  std::vector<std::vector<std::vector<Literal>>> field_terms;
  field_terms.reserve(path.size());
  for (std::size_t f = 0; f < path.size(); ++f) {
    field_terms.push_back(interval_to_terms(path[f], static_cast<int>(f), config));
  }

  std::vector<std::size_t> choice(path.size(), 0);
  for (;;) {
    std::vector<Literal> clause;
    for (std::size_t f = 0; f < field_terms.size(); ++f) {
      const auto& term = field_terms[f][choice[f]];
      clause.insert(clause.end(), term.begin(), term.end());
    }
    clauses.push_back(std::move(clause));

    // Advance the mixed-radix choice vector, last field fastest.
    std::size_t f = field_terms.size();
    while (f-- > 0) {
      if (++choice[f] < field_terms[f].size()) break;
      choice[f] = 0;
      if (f == 0) return;
    }
  }
}

NormalFormExpr paths_to_dnf(const CompleteDecisionTree& t, Action keep,
                            const FieldConfig& config) {
  PathCollector collector{keep, {}, {}};
  collector.walk(t.tree().root.get());

  NormalFormExpr e;
  e.form = Form::Dnf;
  e.var_count = config.bit_count();
  for (const auto& path : collector.paths) {
    emit_path_clauses(path, config, e.clauses);
  }
  return e;
}

NormalFormExpr flip_polarities(const NormalFormExpr& e, Form from, Form to) {
  if (e.form != from) {
    throw std::invalid_argument("expression is not in the expected normal form");
  }
  NormalFormExpr out;
  out.form = to;
  out.var_count = e.var_count;
  out.clauses = e.clauses;
  for (auto& clause : out.clauses) {
    for (Literal& lit : clause) lit.positive = !lit.positive;
  }
  return out;
}

bool literal_holds(const Literal& lit, const Packet& packet, const FieldConfig& config) {
  const unsigned w = config.width(lit.var.field);
  const bool bit =
      (packet[static_cast<std::size_t>(lit.var.field)] >> (w - 1 - static_cast<unsigned>(lit.var.bit))) & 1;
  return bit == lit.positive;
}

}  // namespace

NormalFormExpr tree_to_dnf(const CompleteDecisionTree& t, const FieldConfig& config) {
  return paths_to_dnf(t, Action::Accept, config);
}

NormalFormExpr tree_to_cnf(const CompleteDecisionTree& t, const FieldConfig& config) {
  return negate_dnf(paths_to_dnf(t, Action::Deny, config));
}

NormalFormExpr negate_dnf(const NormalFormExpr& e) {
  return flip_polarities(e, Form::Dnf, Form::Cnf);
}

NormalFormExpr negate_cnf(const NormalFormExpr& e) {
  return flip_polarities(e, Form::Cnf, Form::Dnf);
}

bool eval_expr(const NormalFormExpr& e, const Packet& packet, const FieldConfig& config) {
  if (e.form == Form::Dnf) {
    for (const auto& clause : e.clauses) {
      bool all = true;
      for (const Literal& lit : clause) {
        if (!literal_holds(lit, packet, config)) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }
  for (const auto& clause : e.clauses) {
    bool any = false;
    for (const Literal& lit : clause) {
      if (literal_holds(lit, packet, config)) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

BoundReport bound_check(const NormalFormExpr& e, std::size_t rule_count,
                        const FieldConfig& config) {
  BoundReport report;
  report.clause_count = e.clauses.size();
  for (const auto& clause : e.clauses) {
    report.max_clause_literals =
        std::max<std::uint64_t>(report.max_clause_literals, clause.size());
  }
  report.literal_limit = config.bit_count();

  const unsigned d = static_cast<unsigned>(config.field_count());
  const std::uint64_t max_w = *std::max_element(config.widths().begin(), config.widths().end());
  const std::uint64_t n = rule_count;
  const std::uint64_t per_field = saturating_pow(2 * max_w, d);
  report.adjusted_bound = saturating_mul(per_field, saturating_pow(2 * n + 1, d));
  report.headline_bound = n == 0 ? 0 : saturating_mul(per_field, saturating_pow(2 * n - 1, d));

  report.clause_count_ok = report.clause_count <= report.adjusted_bound;
  report.clause_width_ok = report.max_clause_literals <= report.literal_limit;
  report.pass = report.clause_count_ok && report.clause_width_ok;
  return report;
}

std::string emit_dimacs(const NormalFormExpr& e, const FieldConfig& config) {
  std::ostringstream out;
  for (int f = 0; f < config.field_count(); ++f) {
    out << "c field " << f << " width " << config.width(f) << " offset "
        << config.bit_offset(f) << '\n';
  }
  out << "p " << (e.form == Form::Cnf ? "cnf" : "dnf") << ' ' << e.var_count << ' '
      << e.clauses.size() << '\n';
  for (const auto& clause : e.clauses) {
    for (const Literal& lit : clause) {
      const long long id =
          1 + static_cast<long long>(config.bit_offset(lit.var.field)) + lit.var.bit;
      out << (lit.positive ? id : -id) << ' ';
    }
    out << "0\n";
  }
  return out.str();
}

DimacsFile parse_dimacs(std::string_view text) {
  DimacsFile file;
  bool header_seen = false;
  std::vector<int> current;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (line.empty() || line[0] == 'c') continue;

    if (line[0] == 'p') {
      std::istringstream hdr{std::string(line)};
      std::string p;
      int clause_count = 0;
      if (!(hdr >> p >> file.form >> file.var_count >> clause_count) ||
          (file.form != "cnf" && file.form != "dnf")) {
        throw std::runtime_error("malformed problem line: " + std::string(line));
      }
      file.clauses.reserve(static_cast<std::size_t>(clause_count));
      header_seen = true;
      continue;
    }

    if (!header_seen) throw std::runtime_error("clause before problem line");
    std::istringstream body{std::string(line)};
    int lit = 0;
    while (body >> lit) {
      if (lit == 0) {
        file.clauses.push_back(current);
        current.clear();
      } else {
        current.push_back(lit);
      }
    }
  }
  if (!header_seen) throw std::runtime_error("missing problem line");
  if (!current.empty()) throw std::runtime_error("unterminated clause");
  return file;
}

bool same_clause_multiset(const DimacsFile& a, const DimacsFile& b) {
  if (a.form != b.form || a.var_count != b.var_count) return false;
  auto sa = a.clauses;
  auto sb = b.clauses;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace fwbool
