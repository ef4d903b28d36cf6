#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "cliff/error.hpp"
#include "cliff/multivector.hpp"

namespace cliff::testing {

// Brute-force oracle for e^A e^B: write both blades as generator lists,
// bubble-sort the concatenation counting swaps, then contract equal
// neighbours with the metric. Shares no code with blade_product.
inline std::pair<int, std::uint32_t> brute_force_blade_product(std::uint32_t a, std::uint32_t b,
                                                               const Signature& sig) {
  std::vector<int> word;
  for (int g = 0; g < sig.n(); ++g) {
    if (a & (1u << g)) word.push_back(g);
  }
  for (int g = 0; g < sig.n(); ++g) {
    if (b & (1u << g)) word.push_back(g);
  }
  int sign = 1;
  for (std::size_t pass = 0; pass < word.size(); ++pass) {
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      if (word[i] > word[i + 1]) {
        std::swap(word[i], word[i + 1]);
        sign = -sign;
      }
    }
  }
  std::vector<int> reduced;
  for (int g : word) {
    if (!reduced.empty() && reduced.back() == g) {
      sign *= (g < sig.p) ? 1 : -1;
      reduced.pop_back();
    } else {
      reduced.push_back(g);
    }
  }
  std::uint32_t mask = 0;
  for (int g : reduced) mask |= 1u << g;
  return {sign, mask};
}

// Product through the brute-force oracle, O(4^n) blade pairs.
inline Multivector oracle_product(const Multivector& x, const Multivector& y) {
  const Signature& sig = x.signature();
  Multivector out(sig);
  for (std::uint32_t i = 0; i < sig.dimension(); ++i) {
    for (std::uint32_t j = 0; j < sig.dimension(); ++j) {
      const auto [s, m] = brute_force_blade_product(i, j, sig);
      out.add(Blade{m}, x.coefficient(i) * y.coefficient(j) * double(s));
    }
  }
  return out;
}

inline Multivector random_multivector(const Signature& sig, std::mt19937_64& rng,
                                      double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Multivector m(sig);
  for (double& v : m.real()) v = u(rng);
  for (double& v : m.imag()) v = u(rng);
  return m;
}

inline std::vector<Signature> signatures_up_to(int max_n, bool with_complex = true) {
  std::vector<Signature> out;
  for (int n = 1; n <= max_n; ++n) {
    for (int p = 0; p <= n; ++p) {
      out.push_back(Signature{p, n - p, ScalarField::Real});
      if (with_complex) out.push_back(Signature{p, n - p, ScalarField::Complex});
    }
  }
  return out;
}

template <typename F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected a cliff::Error");
}

}  // namespace cliff::testing
