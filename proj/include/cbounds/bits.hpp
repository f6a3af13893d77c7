#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace cbounds {

using Mask = std::uint64_t;

constexpr Mask bit(int i) { return Mask{1} << i; }

constexpr Mask low_bits(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

constexpr int popcount(Mask m) { return std::popcount(m); }

inline std::vector<int> indices_of(Mask m) {
  std::vector<int> out;
  out.reserve(popcount(m));
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

/// Packs the bits of `value` at `positions` (ascending) into a dense integer:
/// bit t of the result is bit positions[t] of value.
inline std::uint32_t gather(Mask value, std::span<const int> positions) {
  std::uint32_t out = 0;
  for (std::size_t t = 0; t < positions.size(); ++t) {
    out |= static_cast<std::uint32_t>((value >> positions[t]) & 1U) << t;
  }
  return out;
}

/// Inverse of gather: spreads the low bits of `dense` onto `positions`.
inline Mask scatter(std::uint64_t dense, std::span<const int> positions) {
  Mask out = 0;
  for (std::size_t t = 0; t < positions.size(); ++t) {
    out |= ((dense >> t) & 1U) << positions[t];
  }
  return out;
}

}  // namespace cbounds
