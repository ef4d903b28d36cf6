#pragma once

// Closed-form frames and scalar fields shared by the unit and acceptance
// tests. Everything here is independent of the library's finite differences.

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "cliff/field.hpp"
#include "cliff/frame.hpp"

namespace cliff::testing {

// phi(x) = sum_j amp_j sin(k_j . x + phase_j)
struct TrigPoly {
  struct Term {
    double amp;
    std::vector<double> k;
    double phase;
  };
  std::vector<Term> terms;

  double value(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.amp * std::sin(arg(t, x));
    return v;
  }
  double derivative(std::span<const double> x, int mu) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.amp * t.k[mu] * std::cos(arg(t, x));
    return v;
  }
  double second(std::span<const double> x, int mu, int nu) const {
    double v = 0.0;
    for (const auto& t : terms) v -= t.amp * t.k[mu] * t.k[nu] * std::sin(arg(t, x));
    return v;
  }
  // Largest |5th derivative| bound along any axis: sum |amp| |k|^5.
  double fifth_bound() const {
    double v = 0.0;
    for (const auto& t : terms) {
      double km = 0.0;
      for (double k : t.k) km = std::max(km, std::abs(k));
      v += std::abs(t.amp) * std::pow(km, 5);
    }
    return v;
  }

  static double arg(const Term& t, std::span<const double> x) {
    double a = t.phase;
    for (std::size_t i = 0; i < t.k.size(); ++i) a += t.k[i] * x[i];
    return a;
  }

  static TrigPoly random(int r, std::mt19937_64& rng, int terms = 3, double max_amp = 1.0,
                         int max_k = 2) {
    std::uniform_real_distribution<double> amp(-max_amp, max_amp);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    std::uniform_int_distribution<int> kk(-max_k, max_k);
    TrigPoly p;
    for (int j = 0; j < terms; ++j) {
      Term t{amp(rng), std::vector<double>(r), phase(rng)};
      bool nonzero = false;
      for (int mu = 0; mu < r; ++mu) {
        t.k[mu] = kk(rng);
        nonzero = nonzero || t.k[mu] != 0.0;
      }
      if (!nonzero) t.k[0] = 1.0;
      p.terms.push_back(std::move(t));
    }
    return p;
  }
};

inline Multivector e_blade(const Signature& sig, std::string_view name, Complex c = 1.0) {
  return Multivector::blade(sig, parse_blade(name, sig.n()), c);
}

// Rotation frame h^1 = cos e1 + sin e2, h^2 = -sin e1 + cos e2 (Cl(2,0), Cl(0,2)).
inline GeneratorSet rotation_frame(const Signature& sig, double phi) {
  return GeneratorSet{sig,
                      {e_blade(sig, "1", std::cos(phi)) + e_blade(sig, "2", std::sin(phi)),
                       e_blade(sig, "1", -std::sin(phi)) + e_blade(sig, "2", std::cos(phi))}};
}

// Reflection variant h^2 = sin e1 - cos e2.
inline GeneratorSet reflection_frame(const Signature& sig, double phi) {
  return GeneratorSet{sig,
                      {e_blade(sig, "1", std::cos(phi)) + e_blade(sig, "2", std::sin(phi)),
                       e_blade(sig, "1", std::sin(phi)) - e_blade(sig, "2", std::cos(phi))}};
}

// Boost frame of Cl(1,1); s1, s2 choose among the four components of O(1,1).
inline GeneratorSet boost_frame(const Signature& sig, double phi, double s1 = 1, double s2 = 1) {
  return GeneratorSet{
      sig,
      {(e_blade(sig, "1", std::cosh(phi)) + e_blade(sig, "2", std::sinh(phi))) * s1,
       (e_blade(sig, "1", std::sinh(phi)) + e_blade(sig, "2", std::cosh(phi))) * s2}};
}

// Z-Y-Z Euler matrix, rows are h^a = Y[a][b] e^b. Entries (2,1) and (2,2)
// carry the signs that make Y orthogonal.
inline std::array<std::array<double, 3>, 3> euler_matrix(double phi, double psi, double theta) {
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double cs = std::cos(psi), ss = std::sin(psi);
  const double ct = std::cos(theta), st = std::sin(theta);
  return {{{cf * cs * ct - sf * ss, -cf * ss * ct - sf * cs, cf * st},
           {sf * cs * ct + cf * ss, -sf * ss * ct + cf * cs, sf * st},
           {-cs * st, ss * st, ct}}};
}

// Variant with cos(theta) sin(psi) in (2,1) and +sin(phi) sin(psi) cos(theta)
// in (2,2). Not orthogonal.
inline std::array<std::array<double, 3>, 3> euler_matrix_misprint(double phi, double psi,
                                                                    double theta) {
  auto y = euler_matrix(phi, psi, theta);
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double cs = std::cos(psi), ss = std::sin(psi);
  const double ct = std::cos(theta);
  y[1][0] = sf * cs * ct + ct * ss;
  y[1][1] = sf * ss * ct + cf * cs;
  return y;
}

inline GeneratorSet euler_frame(const Signature& sig, double phi, double psi, double theta) {
  const auto y = euler_matrix(phi, psi, theta);
  GeneratorSet h{sig, {}};
  for (int a = 0; a < 3; ++a) {
    Multivector g(sig);
    for (int b = 0; b < 3; ++b) g.add(generator_blade(b + 1), y[a][b]);
    h.gens.push_back(g);
  }
  return h;
}

// Closed-form connection of the Euler frame along one axis given the angle
// derivatives.
inline Multivector euler_connection(const Signature& sig, double psi, double theta, double dphi,
                                    double dpsi, double dtheta) {
  Multivector c(sig);
  c.add(parse_blade("12", 3), 0.5 * (std::cos(theta) * dphi + dpsi));
  c.add(parse_blade("13", 3), 0.5 * (-std::sin(psi) * std::sin(theta) * dphi - std::cos(psi) * dtheta));
  c.add(parse_blade("23", 3), 0.5 * (-std::cos(psi) * std::sin(theta) * dphi + std::sin(psi) * dtheta));
  return c;
}

// Same with the sign of cos(psi) sin(theta) dphi in the e23 term flipped.
// This one-form has nonzero curvature for generic angles.
inline Multivector euler_connection_e23_flipped(const Signature& sig, double psi, double theta,
                                               double dphi, double dpsi, double dtheta) {
  Multivector c = euler_connection(sig, psi, theta, dphi, dpsi, dtheta);
  c.set(parse_blade("23", 3), 0.5 * (std::cos(psi) * std::sin(theta) * dphi + std::sin(psi) * dtheta));
  return c;
}

// Random grade-2 field B(x) = sum_{a<b} p_ab(x) e^{ab} with trig-polynomial
// coefficients; S = exp(B) is then a smooth rotor field.
struct BivectorField {
  Signature sig;
  std::vector<std::pair<Blade, TrigPoly>> parts;

  Multivector value(std::span<const double> x) const {
    Multivector b(sig);
    for (const auto& [blade, p] : parts) b.add(blade, p.value(x));
    return b;
  }

  static BivectorField random(const Signature& sig, int r, std::mt19937_64& rng,
                              double amp = 0.6) {
    BivectorField f{sig, {}};
    for (int a = 1; a <= sig.n(); ++a) {
      for (int b = a + 1; b <= sig.n(); ++b) {
        f.parts.push_back({Blade{(1u << (a - 1)) | (1u << (b - 1))},
                           TrigPoly::random(r, rng, 2, amp, 1)});
      }
    }
    return f;
  }
};

inline GeneratorSet conjugated_standard(const Signature& sig, const Multivector& s) {
  const Multivector s_inv = inverse(s);
  GeneratorSet h{sig, {}};
  for (int a = 1; a <= sig.n(); ++a) h.gens.push_back(s_inv * Multivector::generator(sig, a) * s);
  return h;
}

inline double max_over(const std::vector<double>& values, const std::vector<std::size_t>& nodes) {
  double m = 0.0;
  for (auto node : nodes) m = std::max(m, values[node]);
  return m;
}

inline double observed_order(double coarse_err, double fine_err, double ratio = 2.0) {
  return std::log(coarse_err / fine_err) / std::log(ratio);
}

}  // namespace cliff::testing
