#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cliff/field.hpp"
#include "cliff/linalg.hpp"

namespace cliff {

// d/dx^mu applied to every coefficient of every component. 4th-order central
// differences at nodes >= 2 away from the ends of the axis; 2nd-order central
// at the second node and 2nd-order one-sided at the end nodes. Needs
// shape[mu] >= 5. Linear in the field, exact on polynomials of degree <= 2
// everywhere and degree <= 4 in the interior.
Field partial_derivative(const Field& f, int mu, const Exec& exec = {});

struct Rational {
  std::int64_t num;
  std::int64_t den;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// mu_k = 1 / (n - (-1)^k (n - 2k)) for 1 <= k <= 2 floor(n/2), in lowest terms.
Rational mu_coefficient(int n, int k);

// The basis h^A of a generator set, factorised once so coordinates in it can
// be taken repeatedly.
class HBasis {
 public:
  // rcond below min_rcond throws DegenerateHBasis.
  explicit HBasis(const GeneratorSet& h, double min_rcond = 1e-12);

  const GeneratorSet& generators() const noexcept { return h_; }
  const std::vector<Multivector>& blades() const noexcept { return blades_; }
  double rcond() const noexcept { return solver_.rcond(); }

  // x = sum_A w_A h^A; returns w in a Multivector-shaped container.
  Multivector coordinates(const Multivector& x) const;
  // pi[h]_k(x)
  Multivector project(const Multivector& x, int k) const;
  // sum_k weights[k] pi[h]_k(x), one solve.
  Multivector weighted_projection(const Multivector& x, const std::vector<double>& weights) const;

 private:
  GeneratorSet h_;
  std::vector<Multivector> blades_;
  CoefficientSolver solver_;
};

Multivector hbasis_project(const Multivector& x, const GeneratorSet& h, int k);

// h_a = eta_{ab} h^b
GeneratorSet lower_index(const GeneratorSet& h);

// Pointwise connection from generators and their derivative along one axis:
// D = (d h^a) h_a, C = sum_k mu_k pi[h]_k(D), central part removed.
Multivector connection_from_derivative(const HBasis& basis, const std::vector<Multivector>& dh);

// C_mu at every node, general formula. Frame field in, connection field out.
Field spin_connection_general(const Field& h, const Exec& exec = {});

// C_mu = 1/4 (d_mu h^a) h_a; throws NotGrade1 if a generator has components
// outside grade 1 (beyond grade1_tol).
Field spin_connection_grade1(const Field& h, const Exec& exec = {}, double grade1_tol = 1e-12);

// Per node: max over a, mu of norm(d_mu h^a - [C_mu, h^a]).
std::vector<double> field_equation_residual(const Field& h, const Field& c,
                                            const Exec& exec = {});

// R_{mu nu} = d_mu C_nu - d_nu C_mu - [C_mu, C_nu] for mu < nu.
Field curvature(const Field& c, const Exec& exec = {});

// Per node: max norm over components.
std::vector<double> component_max_norm(const Field& f);

// Per node: max over mu < nu of norm([C_mu, C_nu]).
std::vector<double> connection_commutator_norm(const Field& c);

struct GaugeResult {
  Field h;
  Field c;
  // Largest norm of the central part of S^{-1} d_mu S over nodes and axes.
  double max_central_part = 0.0;
};

// h'^a = S^{-1} h^a S, C'_mu = S^{-1} C_mu S - S^{-1} d_mu S.
// Throws SingularElement (value = node) if S is not invertible at a node.
GaugeResult gauge_transform(const Field& h, const Field& c, const Field& s,
                            const Exec& exec = {});

// Matrix field Y with y^a_b stored row-major per node: entry (a, b) at
// node * n * n + a * n + b.
struct MatrixField {
  Grid grid;
  int n = 0;
  std::vector<Complex> data;

  Complex at(std::size_t node, int a, int b) const {
    return data[(node * n + a) * n + b];
  }
};

// max over nodes of |Y eta Y^T - eta| (entrywise), and the node.
struct OrthogonalityReport {
  double max_defect = 0.0;
  std::size_t worst_node = 0;
};
OrthogonalityReport check_orthogonality(const MatrixField& y, const Signature& sig);

// h^a = y^a_b e^b. Throws OrthogonalityViolated (value = defect) when the
// defect exceeds tol.
Field frame_from_matrix(const MatrixField& y, const Signature& sig, double tol = 1e-9,
                        const Exec& exec = {});

}  // namespace cliff
