#pragma once

#include <cstdint>
#include <string>

namespace cliff {

inline constexpr int kMaxGenerators = 8;

enum class ScalarField : std::uint8_t { Real, Complex };

// Cl^F(p,q): p generators squaring to +e, q to -e, over F = R or C.
struct Signature {
  int p = 0;
  int q = 0;
  ScalarField field = ScalarField::Real;

  constexpr int n() const noexcept { return p + q; }
  constexpr std::size_t dimension() const noexcept { return std::size_t{1} << n(); }
  constexpr bool is_complex() const noexcept { return field == ScalarField::Complex; }

  // Diagonal metric entry for the zero-based generator index a.
  constexpr int eta(int a) const noexcept { return a < p ? 1 : -1; }

  // (p - q) mod 4 in 0..3.
  constexpr int residue_mod4() const noexcept { return (((p - q) % 4) + 4) % 4; }

  friend constexpr bool operator==(const Signature&, const Signature&) = default;
};

// Throws InvalidArgument unless 1 <= n <= kMaxGenerators and p, q >= 0.
Signature make_signature(int p, int q, ScalarField field = ScalarField::Real);

std::string to_string(const Signature& sig);

}  // namespace cliff
