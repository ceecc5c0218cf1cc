#include "fwbool/prefix_cover.hpp"

#include <stdexcept>

namespace fwbool {

Interval Prefix::values(const FieldConfig& config) const {
  const unsigned w = config.width(field);
  const unsigned free_bits = w - static_cast<unsigned>(length);
  const std::uint64_t lo = bits << free_bits;
  const std::uint64_t hi = lo + ((std::uint64_t{1} << free_bits) - 1);
  return {lo, hi};
}

std::vector<Literal> encode_value(std::uint64_t v, int field, const FieldConfig& config) {
  const unsigned w = config.width(field);
  if (v > config.domain_max(field)) {
    throw std::invalid_argument("value out of field range");
  }
  std::vector<Literal> literals;
  literals.reserve(w);
  for (unsigned k = 0; k < w; ++k) {
    const bool bit = (v >> (w - 1 - k)) & 1;
    literals.push_back({{field, static_cast<int>(k)}, bit});
  }
  return literals;
}

namespace {

// Aligned-block recursion: emit the prefix when its whole block lies in
// the target, otherwise split into the two half blocks. At most two
// emissions per bit level, left before right, so the cover comes out in
// ascending order.
void decompose(std::uint64_t block_lo, std::uint64_t block_hi, std::uint64_t bits,
               int length, Interval target, int field, std::vector<Prefix>& out) {
  if (target.lo <= block_lo && block_hi <= target.hi) {
    out.push_back({field, bits, length});
    return;
  }
  const std::uint64_t mid = block_lo + (block_hi - block_lo) / 2;
  if (target.lo <= mid) {
    decompose(block_lo, mid, bits << 1, length + 1, target, field, out);
  }
  if (target.hi > mid) {
    decompose(mid + 1, block_hi, (bits << 1) | 1, length + 1, target, field, out);
  }
}

}  // namespace

PrefixCover canonical_cover(Interval interval, int field, const FieldConfig& config) {
  if (interval.lo > interval.hi || interval.hi > config.domain_max(field)) {
    throw std::invalid_argument("interval not valid for field");
  }
  PrefixCover cover{field, {}};
  decompose(0, config.domain_max(field), 0, 0, interval, field, cover.prefixes);
  return cover;
}

std::vector<Literal> prefix_literals(const Prefix& prefix) {
  std::vector<Literal> literals;
  literals.reserve(static_cast<std::size_t>(prefix.length));
  for (int k = 0; k < prefix.length; ++k) {
    const bool bit = (prefix.bits >> (prefix.length - 1 - k)) & 1;
    literals.push_back({{prefix.field, k}, bit});
  }
  return literals;
}

std::vector<std::vector<Literal>> interval_to_terms(Interval interval, int field,
                                                    const FieldConfig& config) {
  PrefixCover cover = canonical_cover(interval, field, config);
  std::vector<std::vector<Literal>> terms;
  terms.reserve(cover.prefixes.size());
  for (const Prefix& p : cover.prefixes) {
    terms.push_back(prefix_literals(p));
  }
  return terms;
}

}  // namespace fwbool
