#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "cliff/grid.hpp"
#include "cliff/multivector.hpp"
#include "cliff/parallel.hpp"
#include "cliff/pauli.hpp"

namespace cliff {

// What the per-node components mean.
//   Frame: n generators h^1..h^n.   Connection: C_1..C_r.
//   Multivector: one element (S, T, a potential).   Curvature: R_{mu nu}, mu < nu.
enum class FieldKind { Frame, Connection, Multivector, Curvature };

std::string_view to_string(FieldKind kind);
FieldKind field_kind_from_string(std::string_view name);

// Number of components per node for a kind.
int component_count(FieldKind kind, const Signature& sig, const Grid& grid);

// Index of R_{mu nu} (mu < nu, zero-based) among the curvature components.
int curvature_index(int mu, int nu, int r);

// Dense multivector field. Coefficients of one node are contiguous:
// offset = ((node * components) + comp) * 2^n + blade, with a separate
// imaginary plane for complex algebras.
class Field {
 public:
  Field(Grid grid, Signature sig, FieldKind kind);

  const Grid& grid() const noexcept { return grid_; }
  const Signature& signature() const noexcept { return sig_; }
  FieldKind kind() const noexcept { return kind_; }
  int components() const noexcept { return components_; }
  std::size_t node_count() const noexcept { return grid_.node_count(); }
  // Coefficients per node across all components.
  std::size_t node_stride() const noexcept { return node_stride_; }

  Multivector at(std::size_t node, int comp) const;
  void set(std::size_t node, int comp, const Multivector& value);

  // Frame fields only.
  GeneratorSet generators(std::size_t node) const;

  std::span<double> real() noexcept { return re_; }
  std::span<const double> real() const noexcept { return re_; }
  std::span<double> imag() noexcept { return im_; }
  std::span<const double> imag() const noexcept { return im_; }

 private:
  std::size_t offset(std::size_t node, int comp) const;

  Grid grid_;
  Signature sig_;
  FieldKind kind_;
  int components_;
  std::size_t node_stride_;
  std::vector<double> re_;
  std::vector<double> im_;
};

// Throws ShapeMismatch unless grids and signatures agree.
void require_compatible(const Field& a, const Field& b);

using FrameSampler = std::function<GeneratorSet(std::span<const double> x)>;
using MultivectorSampler = std::function<Multivector(std::span<const double> x)>;

Field sample_frame(const Grid& grid, const Signature& sig, const FrameSampler& f,
                   const Exec& exec = {});
Field sample_multivector(const Grid& grid, const Signature& sig, const MultivectorSampler& f,
                         const Exec& exec = {});
// One sampler per axis.
Field sample_connection(const Grid& grid, const Signature& sig,
                        const std::vector<MultivectorSampler>& f, const Exec& exec = {});

// Largest check_generators residual over all nodes (and the node it occurs at).
struct FrameCheck {
  double max_relation_residual = 0.0;
  std::size_t worst_node = 0;
  double max_pseudoscalar_trace = 0.0;
};
FrameCheck check_frame(const Field& h, const Exec& exec = {});

}  // namespace cliff
