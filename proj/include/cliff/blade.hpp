#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "cliff/signature.hpp"

namespace cliff {

// Basis blade e^A encoded as a bit mask: bit (a-1) set <=> generator a in A.
struct Blade {
  std::uint32_t mask = 0;

  constexpr int grade() const noexcept { return std::popcount(mask); }
  constexpr bool operator==(const Blade&) const = default;
  constexpr auto operator<=>(const Blade&) const = default;
};

// Blade of generator a (one-based, matching e^1 ... e^n).
constexpr Blade generator_blade(int a) { return Blade{std::uint32_t{1} << (a - 1)}; }

// The pseudoscalar e^{1...n}.
constexpr Blade pseudoscalar_blade(int n) { return Blade{(std::uint32_t{1} << n) - 1}; }

// Number of transpositions needed to bring e^A e^B into ascending order.
constexpr int reorder_swaps(std::uint32_t a, std::uint32_t b) noexcept {
  int swaps = 0;
  for (a >>= 1; a != 0; a >>= 1) swaps += std::popcount(a & b);
  return swaps;
}

struct BladeProduct {
  int sign;  // +1 or -1
  Blade blade;
};

// e^A e^B = sign * e^{A xor B}; integer arithmetic only.
constexpr BladeProduct blade_product(Blade a, Blade b, const Signature& sig) noexcept {
  int sign = (reorder_swaps(a.mask, b.mask) & 1) ? -1 : 1;
  for (std::uint32_t common = a.mask & b.mask; common != 0; common &= common - 1) {
    sign *= sig.eta(std::countr_zero(common));
  }
  return {sign, Blade{a.mask ^ b.mask}};
}

// (-1)^{k(k-1)/2} for k = |A|.
constexpr int reverse_sign(Blade a) noexcept {
  const int k = a.grade();
  return ((k * (k - 1) / 2) & 1) ? -1 : 1;
}

// e_A = (e^A)^{-1} = blade_inverse_sign(A) * e^A.
constexpr int blade_inverse_sign(Blade a, const Signature& sig) noexcept {
  int sign = reverse_sign(a);
  for (std::uint32_t m = a.mask; m != 0; m &= m - 1) sign *= sig.eta(std::countr_zero(m));
  return sign;
}

// "" for the identity, otherwise ascending generator digits, e.g. "12".
std::string blade_name(Blade b);

// Inverse of blade_name. Throws InvalidArgument on digits outside 1..n,
// repeated or non-ascending digits.
Blade parse_blade(std::string_view name, int n);

}  // namespace cliff
