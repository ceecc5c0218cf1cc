#include "fwbool/oracle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace fwbool {

BudgetError::BudgetError(std::uint64_t required, std::uint64_t allowed)
    : std::runtime_error("packet space of " + std::to_string(required) +
                         " exceeds the enumeration budget of " + std::to_string(allowed)),
      required_(required),
      allowed_(allowed) {}

std::uint64_t packet_index(const Packet& packet, const FieldConfig& config) {
  std::uint64_t index = 0;
  for (int f = 0; f < config.field_count(); ++f) {
    index = (index << config.width(f)) | packet[static_cast<std::size_t>(f)];
  }
  return index;
}

Packet index_to_packet(std::uint64_t index, const FieldConfig& config) {
  const int d = config.field_count();
  Packet packet(static_cast<std::size_t>(d));
  for (int f = d - 1; f >= 0; --f) {
    packet[static_cast<std::size_t>(f)] = index & config.domain_max(f);
    index >>= config.width(f);
  }
  return packet;
}

std::uint64_t space_size_checked(const FieldConfig& config, std::uint64_t budget) {
  unsigned total_bits = config.bit_count();
  std::uint64_t size =
      total_bits >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << total_bits;
  if (total_bits >= 64 || size > budget) {
    throw BudgetError(size, budget);
  }
  return size;
}

std::uint64_t DecisionMap::count(Action a) const {
  return static_cast<std::uint64_t>(std::count(decisions.begin(), decisions.end(), a));
}

namespace {

// Ranks handed to a worker in runs of this many consecutive packets, so
// the odometer advance can replace a full decode inside each run.
constexpr std::uint64_t kChunk = 4096;

// Odometer advance in packet (lexicographic) order; cheaper than a full
// decode per rank in the serial sweeps.
inline void advance(Packet& p, const FieldConfig& config) {
  for (int f = config.field_count() - 1; f >= 0; --f) {
    auto& v = p[static_cast<std::size_t>(f)];
    if (v < config.domain_max(f)) {
      ++v;
      return;
    }
    v = 0;
  }
}

}  // namespace

DecisionMap enumerate_decisions_serial(const Policy& policy, const FieldConfig& config,
                                       std::uint64_t budget) {
  const std::uint64_t size = space_size_checked(config, budget);
  DecisionMap map{config, std::vector<Action>(size)};
  Packet packet(static_cast<std::size_t>(config.field_count()), 0);
  for (std::uint64_t i = 0; i < size; ++i, advance(packet, config)) {
    map.decisions[i] = first_match(policy, packet);
  }
  return map;
}

DecisionMap enumerate_decisions(const Policy& policy, const FieldConfig& config,
                                std::uint64_t budget) {
  const std::uint64_t size = space_size_checked(config, budget);
  DecisionMap map{config, std::vector<Action>(size)};
#pragma omp parallel
  {
    Packet packet;
#pragma omp for schedule(static, kChunk)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(size); ++i) {
      const auto rank = static_cast<std::uint64_t>(i);
      if (packet.empty() || rank % kChunk == 0) {
        packet = index_to_packet(rank, config);
      } else {
        advance(packet, config);
      }
      map.decisions[rank] = first_match(policy, packet);
    }
  }
  return map;
}

namespace {

Verdict verdict_from(std::uint64_t violation, std::uint64_t size, const FieldConfig& config) {
  if (violation == size) return {true, std::nullopt};
  return {false, index_to_packet(violation, config)};
}

}  // namespace

Verdict check_implication_serial(const Policy& lhs, const Policy& rhs,
                                 const FieldConfig& config, std::uint64_t budget) {
  const std::uint64_t size = space_size_checked(config, budget);
  Packet packet(static_cast<std::size_t>(config.field_count()), 0);
  for (std::uint64_t i = 0; i < size; ++i, advance(packet, config)) {
    if (first_match(lhs, packet) == Action::Accept &&
        first_match(rhs, packet) == Action::Deny) {
      return {false, packet};
    }
  }
  return {true, std::nullopt};
}

Verdict check_implication(const Policy& lhs, const Policy& rhs, const FieldConfig& config,
                          std::uint64_t budget) {
  const std::uint64_t size = space_size_checked(config, budget);
  std::uint64_t best = size;
#pragma omp parallel
  {
    Packet packet;
#pragma omp for schedule(static, kChunk) reduction(min : best)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(size); ++i) {
      const auto rank = static_cast<std::uint64_t>(i);
      if (packet.empty() || rank % kChunk == 0) {
        packet = index_to_packet(rank, config);
      } else {
        advance(packet, config);
      }
      if (rank >= best) continue;  // a smaller violation is already known
      if (first_match(lhs, packet) == Action::Accept &&
          first_match(rhs, packet) == Action::Deny) {
        best = rank;
      }
    }
  }
  return verdict_from(best, size, config);
}

Verdict check_equivalence_serial(const Policy& lhs, const Policy& rhs,
                                 const FieldConfig& config, std::uint64_t budget) {
  const std::uint64_t size = space_size_checked(config, budget);
  Packet packet(static_cast<std::size_t>(config.field_count()), 0);
  for (std::uint64_t i = 0; i < size; ++i, advance(packet, config)) {
    if (first_match(lhs, packet) != first_match(rhs, packet)) {
      return {false, packet};
    }
  }
  return {true, std::nullopt};
}

Verdict check_equivalence(const Policy& lhs, const Policy& rhs, const FieldConfig& config,
                          std::uint64_t budget) {
  const std::uint64_t size = space_size_checked(config, budget);
  std::uint64_t best = size;
#pragma omp parallel
  {
    Packet packet;
#pragma omp for schedule(static, kChunk) reduction(min : best)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(size); ++i) {
      const auto rank = static_cast<std::uint64_t>(i);
      if (packet.empty() || rank % kChunk == 0) {
        packet = index_to_packet(rank, config);
      } else {
        advance(packet, config);
      }
      if (rank >= best) continue;  // a smaller violation is already known
      if (first_match(lhs, packet) != first_match(rhs, packet)) {
        best = rank;
      }
    }
  }
  return verdict_from(best, size, config);
}

std::string render_verdict(const Verdict& v, CheckMode mode) {
  if (v.holds) {
    return mode == CheckMode::Equivalence ? "EQUIVALENT" : "IMPLIES";
  }
  std::ostringstream out;
  out << "COUNTEREXAMPLE";
  for (std::uint64_t value : *v.counterexample) out << ' ' << value;
  return out.str();
}

bool dnf_sat(const NormalFormExpr& e) {
  if (e.form != Form::Dnf) {
    throw std::invalid_argument("dnf_sat requires a DNF expression");
  }
  std::vector<std::pair<BitVariable, bool>> seen;
  for (const auto& clause : e.clauses) {
    seen.clear();
    bool contradictory = false;
    for (const Literal& lit : clause) {
      for (const auto& [var, positive] : seen) {
        if (var == lit.var && positive != lit.positive) {
          contradictory = true;
          break;
        }
      }
      if (contradictory) break;
      seen.emplace_back(lit.var, lit.positive);
    }
    if (!contradictory) return true;  // this clause alone is satisfiable
  }
  return false;
}

}  // namespace fwbool
