#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cliff/blade.hpp"
#include "cliff/signature.hpp"

namespace cliff {

using Complex = std::complex<double>;

// Dense element of Cl^F(p,q): one coefficient per basis blade, indexed by the
// blade mask. Real and imaginary parts are stored as separate planes; real
// algebras carry no imaginary plane at all.
class Multivector {
 public:
  explicit Multivector(const Signature& sig);

  static Multivector identity(const Signature& sig);
  static Multivector scalar(const Signature& sig, Complex value);
  static Multivector blade(const Signature& sig, Blade b, Complex coeff = 1.0);
  // Generator e^a, one-based.
  static Multivector generator(const Signature& sig, int a);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return re_.size(); }
  bool is_complex() const noexcept { return !im_.empty(); }

  Complex operator[](Blade b) const { return coefficient(b.mask); }
  Complex coefficient(std::size_t index) const {
    return {re_[index], im_.empty() ? 0.0 : im_[index]};
  }
  // Throws InvalidArgument for a nonzero imaginary part in a real algebra.
  void set(Blade b, Complex value);
  void add(Blade b, Complex value);

  std::span<const double> real() const noexcept { return re_; }
  std::span<double> real() noexcept { return re_; }
  // Empty for real algebras.
  std::span<const double> imag() const noexcept { return im_; }
  std::span<double> imag() noexcept { return im_; }

  bool is_zero() const noexcept;

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(Complex factor);
  Multivector& operator*=(double factor);
  Multivector operator-() const;

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator*(Multivector a, Complex s) { return a *= s; }
  friend Multivector operator*(Complex s, Multivector a) { return a *= s; }

  // Exact coefficient equality.
  friend bool operator==(const Multivector& a, const Multivector& b);

 private:
  Signature sig_;
  std::vector<double> re_;
  std::vector<double> im_;
};

void require_same_signature(const Multivector& a, const Multivector& b);

Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

// x * (c e^B) and (c e^B) * x in O(2^n).
Multivector multiply_blade_right(const Multivector& x, Blade b, Complex c = 1.0);
Multivector multiply_blade_left(Blade b, Complex c, const Multivector& x);

// Throws GradeOutOfRange unless 0 <= k <= n.
Multivector grade_project(const Multivector& a, int k);

// Coefficient of the identity blade.
Complex trace(const Multivector& a);

Multivector reverse(const Multivector& a);
Multivector grade_involute(const Multivector& a);

// e_A = (e^A)^{-1}.
Multivector blade_inverse(const Signature& sig, Blade b);

// Antilinear anti-automorphism with (e^A)^dagger = e_A.
Multivector hermitian_conjugate(const Multivector& a);

// sqrt(Tr(a^dagger a)); equals the Euclidean norm of the coefficients.
double norm(const Multivector& a);

// norm(a - b) without materialising the difference.
double distance(const Multivector& a, const Multivector& b);

inline constexpr double kMaxConditionNumber = 1e12;
// |a x - e| and |x a - e| bound for a returned inverse.
inline constexpr double kInverseDefectTol = 1e-10;

// Two-sided inverse by a dense solve of a X = e in coefficient space.
// Throws SingularElement when the estimated condition number exceeds
// max_condition or the check X a = e fails.
Multivector inverse(const Multivector& a, double max_condition = kMaxConditionNumber);

struct ExpResult {
  Multivector value;
  int squarings = 0;
  // Norm of the last series term relative to the norm of the partial sum,
  // before squaring. Grows with the squaring count when precision degrades.
  double truncation_estimate = 0.0;
};

// Scaling and squaring: scale by 2^-m so the norm is at most 0.5, sum 20
// terms of the power series, square m times.
ExpResult exp_with_diagnostics(const Multivector& a);
Multivector exp(const Multivector& a);

// ab - ba
Multivector commutator(const Multivector& a, const Multivector& b);

// Part of a in the center: grade 0 for even n, grades 0 and n for odd n.
Multivector central_part(const Multivector& a);
Multivector remove_central_part(const Multivector& a);

}  // namespace cliff
