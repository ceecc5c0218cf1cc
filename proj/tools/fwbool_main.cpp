#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fwbool/decision_tree.hpp"
#include "fwbool/normal_form.hpp"
#include "fwbool/oracle.hpp"
#include "fwbool/policy.hpp"
#include "fwbool/prefix_cover.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCounterexample = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

fwbool::Policy load_policy(const std::string& path, const fwbool::FieldConfig& config) {
  try {
    return fwbool::parse_policy(read_file(path), config);
  } catch (const fwbool::ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

std::uint64_t budget_from_env() {
  const char* env = std::getenv("FWBOOL_BUDGET");
  if (env == nullptr) return fwbool::kDefaultBudget;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || value == 0) {
    throw std::runtime_error("FWBOOL_BUDGET must be a positive integer");
  }
  return value;
}

int run_validate(const std::string& policy_path, const std::string& fields) {
  const auto config = fwbool::FieldConfig::parse(fields);
  const auto policy = load_policy(policy_path, config);
  const auto report = fwbool::validate_policy(policy, config);
  if (!report.ok()) {
    for (const auto& v : report.violations) {
      std::cout << "rule " << v.rule_index;
      if (v.field >= 0) std::cout << " field " << v.field;
      std::cout << ": " << v.message << '\n';
    }
    return kExitInputError;
  }
  std::cout << "OK: " << policy.rules.size() << " rules\n";
  return kExitOk;
}

int run_compile(const std::string& policy_path, const std::string& fields,
                const std::string& emit, const std::string& out_path) {
  const auto config = fwbool::FieldConfig::parse(fields);
  const auto policy = load_policy(policy_path, config);

  const fwbool::DecisionTree grouped =
      fwbool::group_adjacent(fwbool::build_tree(policy, config));
  if (emit == "tree") {
    write_output(out_path, fwbool::dump_paths(grouped));
    return kExitOk;
  }

  const fwbool::CompleteDecisionTree completed =
      fwbool::group_adjacent(fwbool::complete(grouped, policy.default_action, config));
  if (emit == "whitelist" || emit == "blacklist") {
    const auto keep = emit == "whitelist" ? fwbool::Action::Accept : fwbool::Action::Deny;
    fwbool::Policy normal_form{fwbool::extract_rules(completed, keep),
                               fwbool::opposite(keep)};
    write_output(out_path, fwbool::to_text(normal_form));
    return kExitOk;
  }
  if (emit == "dnf" || emit == "cnf") {
    const auto expr = emit == "dnf" ? fwbool::tree_to_dnf(completed, config)
                                    : fwbool::tree_to_cnf(completed, config);
    write_output(out_path, fwbool::emit_dimacs(expr, config));
    return kExitOk;
  }
  throw std::runtime_error("unknown --emit kind: " + emit);
}

int run_check(const std::string& left_path, const std::string& right_path,
              const std::string& fields, const std::string& mode) {
  const auto config = fwbool::FieldConfig::parse(fields);
  const auto left = load_policy(left_path, config);
  const auto right = load_policy(right_path, config);
  const auto budget = budget_from_env();

  const auto check_mode = mode == "equiv" ? fwbool::CheckMode::Equivalence
                                          : fwbool::CheckMode::Implication;
  const fwbool::Verdict verdict =
      check_mode == fwbool::CheckMode::Equivalence
          ? fwbool::check_equivalence(left, right, config, budget)
          : fwbool::check_implication(left, right, config, budget);
  std::cout << fwbool::render_verdict(verdict, check_mode) << '\n';
  return verdict.holds ? kExitOk : kExitCounterexample;
}

int run_stats(const std::string& policy_path, const std::string& fields) {
  const auto config = fwbool::FieldConfig::parse(fields);
  const auto policy = load_policy(policy_path, config);
  const std::size_t n = policy.rules.size();
  const unsigned d = static_cast<unsigned>(config.field_count());

  const auto raw = fwbool::build_tree(policy, config);
  const auto grouped = fwbool::group_adjacent(raw);
  const auto completed =
      fwbool::group_adjacent(fwbool::complete(grouped, policy.default_action, config));

  const auto raw_stats = fwbool::tree_stats(raw, config);
  const auto grouped_stats = fwbool::tree_stats(grouped, config);
  const auto complete_stats = fwbool::tree_stats(completed, config);

  const auto dnf = fwbool::tree_to_dnf(completed, config);
  const auto cnf = fwbool::tree_to_cnf(completed, config);
  const auto dnf_bounds = fwbool::bound_check(dnf, n, config);
  const auto cnf_bounds = fwbool::bound_check(cnf, n, config);

  const std::uint64_t raw_leaf_limit =
      n == 0 ? 0 : fwbool::saturating_pow(2 * static_cast<std::uint64_t>(n) - 1, d);
  const bool raw_leaf_ok = raw_stats.leaf_count <= raw_leaf_limit || n == 0;

  std::ostringstream out;
  out << "rules: " << n << '\n';
  out << "fields: " << d << '\n';
  out << "widths:";
  for (unsigned w : config.widths()) out << ' ' << w;
  out << '\n';
  out << "default: " << fwbool::to_string(policy.default_action) << '\n';
  out << "leaves_raw: " << raw_stats.leaf_count << '\n';
  out << "leaves_grouped: " << grouped_stats.leaf_count << '\n';
  out << "leaves_complete: " << complete_stats.leaf_count << '\n';
  out << "raw_leaf_limit: " << raw_leaf_limit << '\n';
  out << "raw_leaf_bound: " << (raw_leaf_ok ? "pass" : "fail") << '\n';
  out << "dnf_clauses: " << dnf_bounds.clause_count << '\n';
  out << "cnf_clauses: " << cnf_bounds.clause_count << '\n';
  out << "clause_limit: " << dnf_bounds.adjusted_bound << '\n';
  out << "clause_limit_headline: " << dnf_bounds.headline_bound << '\n';
  out << "literal_limit: " << dnf_bounds.literal_limit << '\n';
  out << "dnf_bound: " << (dnf_bounds.pass ? "pass" : "fail") << '\n';
  out << "cnf_bound: " << (cnf_bounds.pass ? "pass" : "fail") << '\n';
  std::cout << out.str();

  return raw_leaf_ok && dnf_bounds.pass && cnf_bounds.pass ? kExitOk : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compiles firewall rule lists into decision trees, whitelist/blacklist "
               "normal forms, and DNF/CNF Boolean expressions; checks policy "
               "equivalence by exhaustive enumeration."};
  app.require_subcommand(1);

  std::string policy_path, fields, emit = "tree", out_path, left_path, right_path,
              mode = "equiv";

  auto* validate = app.add_subcommand("validate", "Parse a policy and report violations");
  validate->add_option("--policy", policy_path, "rule-file path")->required();
  validate->add_option("--fields", fields, "comma-separated field bit-widths")->required();

  auto* compile = app.add_subcommand("compile", "Compile a policy to a chosen form");
  compile->add_option("--policy", policy_path, "rule-file path")->required();
  compile->add_option("--fields", fields, "comma-separated field bit-widths")->required();
  compile->add_option("--emit", emit, "tree|whitelist|blacklist|dnf|cnf")
      ->check(CLI::IsMember({"tree", "whitelist", "blacklist", "dnf", "cnf"}))
      ->required();
  compile->add_option("--out", out_path, "output file (stdout when omitted)");

  auto* check = app.add_subcommand("check", "Compare two policies over the packet space");
  check->add_option("--left", left_path, "rule-file path")->required();
  check->add_option("--right", right_path, "rule-file path")->required();
  check->add_option("--fields", fields, "comma-separated field bit-widths")->required();
  check->add_option("--mode", mode, "equiv|implies")
      ->check(CLI::IsMember({"equiv", "implies"}));

  auto* stats = app.add_subcommand("stats", "Report tree and expression sizes vs bounds");
  stats->add_option("--policy", policy_path, "rule-file path")->required();
  stats->add_option("--fields", fields, "comma-separated field bit-widths")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (validate->parsed()) return run_validate(policy_path, fields);
    if (compile->parsed()) return run_compile(policy_path, fields, emit, out_path);
    if (check->parsed()) return run_check(left_path, right_path, fields, mode);
    if (stats->parsed()) return run_stats(policy_path, fields);
  } catch (const fwbool::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
