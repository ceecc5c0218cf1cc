#ifndef FWBOOL_PREFIX_COVER_HPP
#define FWBOOL_PREFIX_COVER_HPP

#include <cstdint>
#include <vector>

#include "fwbool/policy.hpp"

namespace fwbool {

/// One bit of one packet header field. Bit 0 is the most significant
/// bit of the field, bit w-1 the least significant.
struct BitVariable {
  int field = 0;
  int bit = 0;

  friend bool operator==(const BitVariable&, const BitVariable&) = default;
  friend auto operator<=>(const BitVariable&, const BitVariable&) = default;
};

struct Literal {
  BitVariable var;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A fixed high-order bit pattern of `length` bits. Denotes the aligned
/// block of 2^(w-length) field values whose top bits equal `bits`; the
/// empty prefix (length 0) denotes the whole domain.
struct Prefix {
  int field = 0;
  std::uint64_t bits = 0;  // value of the first `length` bits, MSB first
  int length = 0;

  Interval values(const FieldConfig& config) const;

  friend bool operator==(const Prefix&, const Prefix&) = default;
};

/// Pairwise-disjoint prefixes whose blocks partition one interval.
struct PrefixCover {
  int field = 0;
  std::vector<Prefix> prefixes;
};

/// Conjunction of w literals satisfied exactly by the bit assignment of
/// v. Throws std::invalid_argument when v is out of the field range.
std::vector<Literal> encode_value(std::uint64_t v, int field, const FieldConfig& config);

/// Canonical aligned-block decomposition of [lo, hi]: at most two
/// prefixes per bit level (cover size <= 2w), no two prefixes siblings,
/// prefixes in ascending value order.
PrefixCover canonical_cover(Interval interval, int field, const FieldConfig& config);

/// One conjunction per prefix of the canonical cover; bit b at prefix
/// position k becomes the literal (field, k) with polarity b. A value
/// satisfies the disjunction of the terms iff it lies in the interval.
std::vector<std::vector<Literal>> interval_to_terms(Interval interval, int field,
                                                    const FieldConfig& config);

std::vector<Literal> prefix_literals(const Prefix& prefix);

}  // namespace fwbool

#endif  // FWBOOL_PREFIX_COVER_HPP
