#include "cliff/multivector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cliff/error.hpp"
#include "cliff/linalg.hpp"
#include "cliff/simd/kernels.hpp"

namespace cliff {

Multivector::Multivector(const Signature& sig)
    : sig_(sig), re_(sig.dimension(), 0.0), im_(sig.is_complex() ? sig.dimension() : 0, 0.0) {}

Multivector Multivector::identity(const Signature& sig) { return scalar(sig, 1.0); }

Multivector Multivector::scalar(const Signature& sig, Complex value) {
  Multivector m(sig);
  m.set(Blade{0}, value);
  return m;
}

Multivector Multivector::blade(const Signature& sig, Blade b, Complex coeff) {
  if (b.mask >= sig.dimension()) {
    throw Error(ErrorKind::InvalidArgument, "blade outside the algebra");
  }
  Multivector m(sig);
  m.set(b, coeff);
  return m;
}

Multivector Multivector::generator(const Signature& sig, int a) {
  if (a < 1 || a > sig.n()) {
    throw Error(ErrorKind::InvalidArgument, "generator index " + std::to_string(a) + " out of range");
  }
  return blade(sig, generator_blade(a));
}

void Multivector::set(Blade b, Complex value) {
  if (im_.empty()) {
    if (value.imag() != 0.0) {
      throw Error(ErrorKind::InvalidArgument, "imaginary coefficient in a real algebra");
    }
  } else {
    im_[b.mask] = value.imag();
  }
  re_[b.mask] = value.real();
}

void Multivector::add(Blade b, Complex value) { set(b, (*this)[b] + value); }

bool Multivector::is_zero() const noexcept {
  auto nz = [](double v) { return v != 0.0; };
  return std::none_of(re_.begin(), re_.end(), nz) && std::none_of(im_.begin(), im_.end(), nz);
}

void require_same_signature(const Multivector& a, const Multivector& b) {
  if (a.signature() != b.signature()) {
    throw Error(ErrorKind::SignatureMismatch,
                "signature mismatch: " + to_string(a.signature()) + " vs " + to_string(b.signature()));
  }
}

Multivector& Multivector::operator+=(const Multivector& other) {
  require_same_signature(*this, other);
  for (std::size_t i = 0; i < re_.size(); ++i) re_[i] += other.re_[i];
  for (std::size_t i = 0; i < im_.size(); ++i) im_[i] += other.im_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  require_same_signature(*this, other);
  for (std::size_t i = 0; i < re_.size(); ++i) re_[i] -= other.re_[i];
  for (std::size_t i = 0; i < im_.size(); ++i) im_[i] -= other.im_[i];
  return *this;
}

Multivector& Multivector::operator*=(double factor) {
  for (double& v : re_) v *= factor;
  for (double& v : im_) v *= factor;
  return *this;
}

Multivector& Multivector::operator*=(Complex factor) {
  if (factor.imag() == 0.0) return *this *= factor.real();
  if (im_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "complex scalar applied to a real multivector");
  }
  for (std::size_t i = 0; i < re_.size(); ++i) {
    const Complex v = Complex(re_[i], im_[i]) * factor;
    re_[i] = v.real();
    im_[i] = v.imag();
  }
  return *this;
}

Multivector Multivector::operator-() const {
  Multivector out = *this;
  return out *= -1.0;
}

bool operator==(const Multivector& a, const Multivector& b) {
  return a.sig_ == b.sig_ && a.re_ == b.re_ && a.im_ == b.im_;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  require_same_signature(a, b);
  const auto& table = simd::product_table(a.signature());
  const auto& k = simd::active_kernels();
  Multivector out(a.signature());
  k.geometric_product(table, a.real().data(), b.real().data(), out.real().data(), false);
  if (a.is_complex()) {
    k.geometric_product(table, a.imag().data(), b.imag().data(), out.real().data(), true);
    k.geometric_product(table, a.real().data(), b.imag().data(), out.imag().data(), false);
    k.geometric_product(table, a.imag().data(), b.real().data(), out.imag().data(), false);
  }
  return out;
}

Multivector multiply_blade_right(const Multivector& x, Blade b, Complex c) {
  const Signature& sig = x.signature();
  Multivector out(sig);
  for (std::uint32_t i = 0; i < sig.dimension(); ++i) {
    const Complex xi = x.coefficient(i);
    if (xi == 0.0) continue;
    const auto prod = blade_product(Blade{i}, b, sig);
    out.set(prod.blade, xi * c * static_cast<double>(prod.sign));
  }
  return out;
}

Multivector multiply_blade_left(Blade b, Complex c, const Multivector& x) {
  const Signature& sig = x.signature();
  Multivector out(sig);
  for (std::uint32_t i = 0; i < sig.dimension(); ++i) {
    const Complex xi = x.coefficient(i);
    if (xi == 0.0) continue;
    const auto prod = blade_product(b, Blade{i}, sig);
    out.set(prod.blade, c * xi * static_cast<double>(prod.sign));
  }
  return out;
}

Multivector grade_project(const Multivector& a, int k) {
  const int n = a.signature().n();
  if (k < 0 || k > n) {
    throw Error(ErrorKind::GradeOutOfRange,
                "grade " + std::to_string(k) + " outside 0.." + std::to_string(n), k);
  }
  Multivector out = a;
  auto re = out.real();
  auto im = out.imag();
  for (std::uint32_t i = 0; i < re.size(); ++i) {
    if (Blade{i}.grade() == k) continue;
    re[i] = 0.0;
    if (!im.empty()) im[i] = 0.0;
  }
  return out;
}

Complex trace(const Multivector& a) { return a.coefficient(0); }

namespace {

template <typename SignFn>
Multivector apply_blade_signs(const Multivector& a, SignFn sign_of, bool conjugate) {
  Multivector out = a;
  auto re = out.real();
  auto im = out.imag();
  for (std::uint32_t i = 0; i < re.size(); ++i) {
    const double s = sign_of(Blade{i});
    re[i] *= s;
    if (!im.empty()) im[i] *= conjugate ? -s : s;
  }
  return out;
}

}  // namespace

Multivector reverse(const Multivector& a) {
  return apply_blade_signs(a, [](Blade b) { return double(reverse_sign(b)); }, false);
}

Multivector grade_involute(const Multivector& a) {
  return apply_blade_signs(a, [](Blade b) { return (b.grade() & 1) ? -1.0 : 1.0; }, false);
}

Multivector blade_inverse(const Signature& sig, Blade b) {
  return Multivector::blade(sig, b, double(blade_inverse_sign(b, sig)));
}

Multivector hermitian_conjugate(const Multivector& a) {
  const Signature sig = a.signature();
  return apply_blade_signs(a, [&](Blade b) { return double(blade_inverse_sign(b, sig)); }, true);
}

double norm(const Multivector& a) {
  const auto& k = simd::active_kernels();
  double sq = k.sum_squares(a.real().size(), a.real().data());
  if (a.is_complex()) sq += k.sum_squares(a.imag().size(), a.imag().data());
  return std::sqrt(sq);
}

double distance(const Multivector& a, const Multivector& b) {
  require_same_signature(a, b);
  double sq = 0.0;
  auto ar = a.real(), br = b.real();
  for (std::size_t i = 0; i < ar.size(); ++i) sq += (ar[i] - br[i]) * (ar[i] - br[i]);
  auto ai = a.imag(), bi = b.imag();
  for (std::size_t i = 0; i < ai.size(); ++i) sq += (ai[i] - bi[i]) * (ai[i] - bi[i]);
  return std::sqrt(sq);
}

Multivector inverse(const Multivector& a, double max_condition) {
  const Signature& sig = a.signature();
  const auto solver = CoefficientSolver::left_multiplication(a);
  const double cond = solver.condition();
  if (!(cond <= max_condition)) {
    throw Error(ErrorKind::SingularElement,
                "element is singular (condition estimate " + std::to_string(cond) + ")", cond);
  }
  Multivector x = solver.solve(Multivector::identity(sig));
  const Multivector e = Multivector::identity(sig);
  double defect = std::max(distance(x * a, e), distance(a * x, e));
  // Newton steps x <- x (2e - a x) square the residual.
  for (int step = 0; step < 3 && defect > 1e-13; ++step) {
    Multivector refined = x * (e * 2.0 - a * x);
    const double d = std::max(distance(refined * a, e), distance(a * refined, e));
    if (!(d < defect)) break;
    x = std::move(refined);
    defect = d;
  }
  if (!(defect <= kInverseDefectTol)) {
    throw Error(ErrorKind::SingularElement,
                "inverse check failed (defect " + std::to_string(defect) + ")", defect);
  }
  return x;
}

ExpResult exp_with_diagnostics(const Multivector& a) {
  constexpr int kTerms = 20;
  const double size = norm(a);
  int squarings = 0;
  if (std::isfinite(size) && size > 0.5) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(size / 0.5))));
  }
  Multivector scaled = a * std::ldexp(1.0, -squarings);
  Multivector term = Multivector::identity(a.signature());
  Multivector sum = term;
  for (int k = 1; k <= kTerms; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    sum += term;
  }
  const double sum_norm = norm(sum);
  ExpResult result{std::move(sum), squarings, sum_norm > 0 ? norm(term) / sum_norm : 0.0};
  for (int s = 0; s < squarings; ++s) result.value = result.value * result.value;
  return result;
}

Multivector exp(const Multivector& a) { return exp_with_diagnostics(a).value; }

Multivector commutator(const Multivector& a, const Multivector& b) { return a * b - b * a; }

Multivector central_part(const Multivector& a) {
  const int n = a.signature().n();
  Multivector out = grade_project(a, 0);
  if (n % 2 == 1) out += grade_project(a, n);
  return out;
}

Multivector remove_central_part(const Multivector& a) { return a - central_part(a); }

}  // namespace cliff
