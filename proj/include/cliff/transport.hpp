#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cliff/field.hpp"
#include "cliff/json_io.hpp"
#include "cliff/pauli.hpp"

namespace cliff {

enum class TransportMethod { OdeR1, Potential, PathOrdered };

std::string_view to_string(TransportMethod m);
TransportMethod transport_method_from_string(std::string_view name);

struct TransportOptions {
  Exec exec;
  // Grid index of the base point x_0; empty means the grid origin.
  std::vector<std::size_t> base;
  // C is closed when max |d_mu C_nu - d_nu C_mu| <= closed_tol * max |d C|
  // over nodes at least two away from the boundary.
  double closed_tol = 1e-2;
  // Same relative test for [potential, C_mu] before exp(potential) is used.
  double commute_tol = 1e-2;
  // PathDependent threshold; unset means 100 * h_max^2 (path-ordered) or
  // 100 * h_max^4 (potential).
  std::optional<double> path_tol;
  // Nodes re-transported along permuted staircases.
  // The node-averaged S^{-1} h^a S must satisfy the generator relations to
  // this accuracy before K is solved for; larger means the transport is too
  // coarse for the frame.
  double average_relation_tol = 1e-1;
  int path_samples = 16;
  std::uint64_t seed = 1;
  // For r <= max_exhaustive_axes all axis orders are checked, else
  // random_orders random ones.
  int max_exhaustive_axes = 3;
  int random_orders = 8;
  PauliOptions pauli;
};

// Classical RK4 on dS/dx = C_1(x) S along the single axis, C at half steps by
// cubic interpolation of the node values. S(base) = s0.
Field solve_ode_line(const Field& c, const Multivector& s0, const TransportOptions& opts = {});

struct PotentialResult {
  Field potential;
  double max_asymmetry = 0.0;
  double relative_asymmetry = 0.0;
  double path_independence_residual = 0.0;
};

// Line integral of C_mu dx^mu from the base along the axis-ordered staircase,
// composite 4th-order quadrature. Throws NotClosed (value = max asymmetry)
// when the closedness test fails, PathDependent when staircases disagree.
PotentialResult find_potential(const Field& c, const TransportOptions& opts = {});

// exp(potential) per node.
Field transport_potential(const Field& potential, const Exec& exec = {});

struct PathOrderedResult {
  Field s;
  double path_independence_residual = 0.0;
};

// S along the axis-ordered staircase from the base, as an ordered product of
// exp(C_mu(midpoint) dx^mu) factors. Throws SingularityDetected or
// PathDependent.
PathOrderedResult transport_path_ordered(const Field& c, const Multivector& s0,
                                         const TransportOptions& opts = {});

// Per node: max over mu of norm(d_mu S - C_mu S).
std::vector<double> transport_residual(const Field& c, const Field& s, const Exec& exec = {});

struct TransportDiagnostics {
  double max_curvature = 0.0;
  double max_commutator = 0.0;
  double closed_asymmetry = 0.0;
  double path_independence_residual = 0.0;
  double constancy_residual = 0.0;
  double final_residual = 0.0;
  // distance of h^{1..n} e_{1..n} (node-averaged) from the exact case value.
  double factor_defect = 0.0;
  double k_residual = 0.0;
};

struct TransportResult {
  Field connection;
  Field S;
  Multivector K;
  Field T;
  TransportMethod method;
  RelationCase relation;
  Multivector factor;
  std::string chosen_F;
  // Why the potential method was not used, empty if it was.
  std::string fallback_reason;
  TransportDiagnostics diagnostics;
};

// Connection, curvature check, S (ODE for r = 1, potential if closed and
// commuting, else path-ordered), f^a = S^{-1} h^a S averaged, K from the
// algebraic intertwiner, T = S K. Errors carry the failing stage.
TransportResult solve_global(const Field& h, const TransportOptions& opts = {});

// max over nodes and a of norm(e^a - factor T^{-1} h^a T).
double global_relation_residual(const Field& h, const Field& t, const Multivector& factor,
                                const Exec& exec = {});

Json diagnostics_to_json(const TransportResult& r);

// S.field.<ext>, T.field.<ext>, C.field.<ext>, K.json, diagnostics.json.
void write_transport_result(const TransportResult& r, const std::filesystem::path& dir,
                            bool binary);

}  // namespace cliff
