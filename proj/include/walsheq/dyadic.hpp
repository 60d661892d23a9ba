#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace walsheq {

/// Non-negative index viewed through its binary expansion. Values stay below 2^63.
using Index = std::uint64_t;

inline constexpr unsigned max_index_bits = 63;

/// Carry-free addition: the digit-wise sum mod 2 of the binary expansions.
constexpr Index dyadic_add(Index x, Index y) noexcept { return x ^ y; }

/// True iff x + y == x (+) y, i.e. the binary supports of x and y are disjoint.
constexpr bool is_carry_free(Index x, Index y) noexcept { return (x & y) == 0; }

/// Digit i of the binary expansion of x.
constexpr unsigned binary_digit(Index x, unsigned i) noexcept {
    return i < 64 ? static_cast<unsigned>((x >> i) & 1u) : 0u;
}

/// The m low binary digits n_0 ... n_{m-1} of x.
inline std::vector<unsigned> low_digits(Index x, unsigned m) {
    if (m > 64) throw std::invalid_argument("low_digits: at most 64 digits");
    std::vector<unsigned> digits(m);
    for (unsigned i = 0; i < m; ++i) digits[i] = binary_digit(x, i);
    return digits;
}

/// Inverse of low_digits: sum of digits[i] * 2^i.
inline Index from_digits(const std::vector<unsigned>& digits) {
    if (digits.size() > max_index_bits) throw std::invalid_argument("from_digits: too many digits");
    Index value = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] > 1) throw std::invalid_argument("from_digits: digit must be 0 or 1");
        value |= static_cast<Index>(digits[i]) << i;
    }
    return value;
}

constexpr Index block_size(unsigned n) noexcept { return Index{1} << n; }

/// Reverse the low `bits` binary digits of x; higher digits are dropped.
constexpr Index reverse_bits(Index x, unsigned bits) noexcept {
    Index r = 0;
    for (unsigned i = 0; i < bits; ++i) r |= ((x >> i) & 1u) << (bits - 1 - i);
    return r;
}

constexpr std::uint64_t pow_u64(std::uint64_t base, unsigned exp) noexcept {
    std::uint64_t r = 1;
    while (exp--) r *= base;
    return r;
}

}  // namespace walsheq
