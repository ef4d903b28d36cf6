#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cliff/multivector.hpp"
#include "support.hpp"

using namespace cliff;
using cliff::testing::error_kind_of;
using cliff::testing::oracle_product;
using cliff::testing::random_multivector;

namespace {

const Signature kCl20{2, 0};
const Signature kCl11{1, 1};

Multivector e(const Signature& sig, std::string_view name, Complex c = 1.0) {
  return Multivector::blade(sig, parse_blade(name, sig.n()), c);
}

}  // namespace

TEST_CASE("geometric_product examples") {
  std::mt19937_64 rng(7);
  const auto x = random_multivector(kCl20, rng);
  CHECK(Multivector::identity(kCl20) * x == x);
  CHECK(x * Multivector::identity(kCl20) == x);

  const auto v = e(kCl20, "1") + e(kCl20, "2");
  CHECK(v * v == Multivector::scalar(kCl20, 2.0));
  CHECK(e(kCl20, "12") * e(kCl20, "12") == Multivector::scalar(kCl20, -1.0));

  CHECK(error_kind_of([] { Multivector(kCl20) * Multivector(kCl11); }) ==
        ErrorKind::SignatureMismatch);
}

TEST_CASE("geometric_product matches the brute-force product, both fields") {
  std::mt19937_64 rng(11);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    for (int t = 0; t < 3; ++t) {
      const auto x = random_multivector(sig, rng);
      const auto y = random_multivector(sig, rng);
      CHECK(distance(x * y, oracle_product(x, y)) < 1e-12);
    }
  }
}

TEST_CASE("grade_project") {
  const auto a = Multivector::identity(kCl20) + e(kCl20, "12", 3.0);
  CHECK(grade_project(a, 2) == e(kCl20, "12", 3.0));
  CHECK(grade_project(e(kCl20, "1"), 0).is_zero());
  CHECK(error_kind_of([&] { grade_project(a, 3); }) == ErrorKind::GradeOutOfRange);
  CHECK(error_kind_of([&] { grade_project(a, -1); }) == ErrorKind::GradeOutOfRange);

  std::mt19937_64 rng(3);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng);
    Multivector sum(sig);
    for (int k = 0; k <= sig.n(); ++k) {
      const auto pk = grade_project(x, k);
      CHECK(grade_project(pk, k) == pk);
      sum += pk;
    }
    CHECK(sum == x);
  }
}

TEST_CASE("trace") {
  CHECK(trace(Multivector::identity(kCl20)) == Complex(1.0));
  CHECK(trace(e(kCl20, "1") + Multivector::scalar(kCl20, 5.0)) == Complex(5.0));
  CHECK(trace(e(kCl20, "12") * e(kCl20, "12")) == Complex(-1.0));
}

TEST_CASE("reverse and grade involution") {
  CHECK(reverse(e(kCl20, "12")) == e(kCl20, "12", -1.0));
  CHECK(reverse(e(kCl20, "1")) == e(kCl20, "1"));
  CHECK(grade_involute(e(kCl20, "1")) == e(kCl20, "1", -1.0));
  CHECK(grade_involute(e(kCl20, "12")) == e(kCl20, "12"));

  std::mt19937_64 rng(5);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng);
    const auto y = random_multivector(sig, rng);
    CHECK(distance(reverse(x * y), oracle_product(reverse(y), reverse(x))) < 1e-12);
    CHECK(distance(grade_involute(x * y), grade_involute(x) * grade_involute(y)) < 1e-12);
    CHECK(reverse(reverse(x)) == x);
  }
}

TEST_CASE("blade_inverse") {
  CHECK(blade_inverse(kCl20, Blade{0}) == Multivector::identity(kCl20));
  CHECK(blade_inverse(kCl20, parse_blade("12", 2)) == e(kCl20, "12", -1.0));
  CHECK(blade_inverse(kCl11, parse_blade("2", 2)) == e(kCl11, "2", -1.0));
  for (const auto& sig : cliff::testing::signatures_up_to(4, false)) {
    for (std::uint32_t m = 0; m < sig.dimension(); ++m) {
      const auto b = Multivector::blade(sig, Blade{m});
      CHECK(b * blade_inverse(sig, Blade{m}) == Multivector::identity(sig));
    }
  }
}

TEST_CASE("hermitian_conjugate") {
  for (const auto& sig : cliff::testing::signatures_up_to(4)) {
    for (int a = 1; a <= sig.n(); ++a) {
      CHECK(hermitian_conjugate(Multivector::generator(sig, a)) ==
            Multivector::generator(sig, a) * double(sig.eta(a - 1)));
    }
  }
  const Signature c01{0, 1, ScalarField::Complex};
  const Complex i(0.0, 1.0);
  CHECK(hermitian_conjugate(e(c01, "1", i)) == e(c01, "1", i));

  std::mt19937_64 rng(9);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng);
    const auto y = random_multivector(sig, rng);
    CHECK(distance(hermitian_conjugate(x * y), hermitian_conjugate(y) * hermitian_conjugate(x)) <
          1e-12);
    CHECK(hermitian_conjugate(hermitian_conjugate(x)) == x);
  }
}

TEST_CASE("norm") {
  CHECK(norm(Multivector(kCl20)) == 0.0);
  CHECK(norm(e(kCl20, "12")) == doctest::Approx(1.0));
  const Signature cl10{1, 0};
  CHECK(norm(Multivector::scalar(cl10, 3.0) + e(cl10, "1", 4.0)) == doctest::Approx(5.0));

  // sqrt(Tr(x^dagger x)) through the brute-force product equals the norm.
  std::mt19937_64 rng(13);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng);
    const Complex tr = trace(oracle_product(hermitian_conjugate(x), x));
    CHECK(std::abs(tr.imag()) < 1e-12);
    CHECK(std::sqrt(tr.real()) == doctest::Approx(norm(x)).epsilon(1e-12));
  }
}

TEST_CASE("inverse") {
  CHECK(inverse(Multivector::identity(kCl20)) == Multivector::identity(kCl20));

  const Signature cl10{1, 0};
  const auto idempotent = Multivector::identity(cl10) + e(cl10, "1");
  CHECK(error_kind_of([&] { inverse(idempotent); }) == ErrorKind::SingularElement);
  CHECK(error_kind_of([&] { inverse(Multivector(cl10)); }) == ErrorKind::SingularElement);

  const double th = 0.7;
  const auto rotor = Multivector::scalar(kCl20, std::cos(th)) + e(kCl20, "12", std::sin(th));
  const auto want = Multivector::scalar(kCl20, std::cos(th)) - e(kCl20, "12", std::sin(th));
  CHECK(distance(inverse(rotor), want) < 1e-14);

  std::mt19937_64 rng(17);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng);
    const auto xi = inverse(x);
    CHECK(distance(xi * x, Multivector::identity(sig)) < 1e-10);
    CHECK(distance(x * xi, Multivector::identity(sig)) < 1e-10);
  }
}

TEST_CASE("exp") {
  CHECK(exp(Multivector(kCl20)) == Multivector::identity(kCl20));

  for (double phi : {0.3, 1.7, -2.5, 9.0}) {
    const auto s = exp(e(kCl20, "12", -phi / 2));
    const auto want = Multivector::scalar(kCl20, std::cos(phi / 2)) - e(kCl20, "12", std::sin(phi / 2));
    CHECK(distance(s, want) < 1e-13);

    const auto h = exp(e(kCl11, "12", -phi / 2));
    const auto want_h =
        Multivector::scalar(kCl11, std::cosh(phi / 2)) - e(kCl11, "12", std::sinh(phi / 2));
    CHECK(distance(h, want_h) < 1e-12 * std::cosh(phi / 2));
  }

  const auto big = exp_with_diagnostics(e(kCl20, "12", 40.0));
  CHECK(big.squarings == 7);
  CHECK(big.truncation_estimate < 1e-15);

  std::mt19937_64 rng(19);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng, 0.4);
    CHECK(distance(exp(x) * exp(-x), Multivector::identity(sig)) < 1e-10);
  }
}

TEST_CASE("commutator") {
  std::mt19937_64 rng(23);
  const auto a = random_multivector(kCl20, rng);
  CHECK(commutator(a, a).is_zero());
  CHECK(commutator(e(kCl20, "12"), e(kCl20, "1")) == e(kCl20, "2", -2.0));
  CHECK(norm(commutator(Multivector::identity(kCl20), a)) == 0.0);
}

TEST_CASE("center: commutes with all generators iff only central grades") {
  std::mt19937_64 rng(29);
  for (const auto& sig : cliff::testing::signatures_up_to(5)) {
    const auto x = random_multivector(sig, rng);
    const auto c = central_part(x);
    const auto nc = remove_central_part(x);
    double max_c = 0.0;
    double max_nc = 0.0;
    for (int a = 1; a <= sig.n(); ++a) {
      const auto g = Multivector::generator(sig, a);
      max_c = std::max(max_c, norm(commutator(c, g)));
      max_nc = std::max(max_nc, norm(commutator(nc, g)));
    }
    CHECK(max_c < 1e-13);
    // Cl(1) is commutative: grades 0 and n exhaust it.
    if (sig.n() > 1) CHECK(max_nc > 1e-3);
  }
}

TEST_CASE("complex scalars are rejected in real algebras") {
  CHECK(error_kind_of([] { Multivector::scalar(kCl20, Complex(0, 1)); }) ==
        ErrorKind::InvalidArgument);
  Multivector x(kCl20);
  CHECK(error_kind_of([&] { x *= Complex(0, 1); }) == ErrorKind::InvalidArgument);
}
