#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cliff/json_io.hpp"
#include "cliff/multivector.hpp"

namespace cliff {

// n elements h^1 ... h^n of one algebra, claimed to satisfy
// h^a h^b + h^b h^a = 2 eta^{ab} e.
struct GeneratorSet {
  Signature sig;
  std::vector<Multivector> gens;

  int n() const noexcept { return sig.n(); }
  const Multivector& operator[](int a) const { return gens.at(static_cast<std::size_t>(a)); }

  // e^1 ... e^n
  static GeneratorSet standard(const Signature& sig);
};

// Throws InvalidArgument unless there are exactly n generators, all in sig.
GeneratorSet make_generator_set(const Signature& sig, std::vector<Multivector> gens);

struct GeneratorReport {
  double max_relation_residual = 0.0;
  // |Tr(h^{1...n})|; zero for even n.
  double pseudoscalar_trace = 0.0;
  bool trace_condition_ok = true;
};

GeneratorReport check_generators(const GeneratorSet& h, double tol = 1e-9);

// h^A for all 2^n masks, h^A = product of h^a over A in ascending order.
std::vector<Multivector> blade_products(const GeneratorSet& h);

// h^{1...n}
Multivector pseudoscalar_of(const GeneratorSet& h);

// Central factor in g^a = lambda T^{-1} h^a T. Even n is always Plus.
enum class RelationCase { Plus, Minus, PseudoPlus, PseudoMinus, IPseudoPlus, IPseudoMinus };

std::string_view to_string(RelationCase c);

struct PauliOptions {
  // Bound on every relation residual that counts as satisfied.
  double relation_tol = 1e-9;
  // Candidates below candidate_rel * (largest candidate norm) are treated as
  // exact cancellations and never tried.
  double candidate_rel = 1e-6;
  // A computed central factor within this distance of +-e, +-e^{1...n} or
  // +-i e^{1...n} is replaced by that exact value.
  double factor_tol = 1e-6;
};

struct IntertwinerResult {
  Multivector T;
  Multivector T_inv;
  RelationCase relation = RelationCase::Plus;
  // lambda in g^a = lambda T^{-1} h^a T (e for even n).
  Multivector factor;
  // max_a norm(g^a - lambda T^{-1} h^a T)
  double residual = 0.0;
  // The element F of the blade sum, e.g. "e", "e12" or "e + e23".
  std::string chosen_F;
};

// Builds T with e^a = lambda T^{-1} h^a T from the blade sum
// sum_A h^A F e_A (even n: all A; odd n: even |A| only, lambda =
// h^{1...n} e_{1...n}). Candidates F are single blades, and for odd n also
// sums of two even blades; they are tried in order of decreasing norm(T)
// (ties: lowest candidate index) and the first one that inverts and verifies
// wins. A candidate that misses relation_tol only through round-off gets one
// least-squares correction step on T g^a = lambda h^a T before it is
// rejected. T is normalised to norm 1.
IntertwinerResult intertwiner_to_standard(const GeneratorSet& h, const PauliOptions& opts = {});

// h^{1...n} for odd n, checked against the admissible values for (p - q)
// mod 4 and the scalar field. Throws NotAdmissible otherwise.
Multivector classify_pseudoscalar(const GeneratorSet& h, double tol = 1e-9);

// Matches a central factor against +-e, +-e^{1...n}, +-i e^{1...n}. Throws
// CaseMismatch when none is within tol.
RelationCase classify_factor(const Multivector& factor, double tol = 1e-9);

// T = T_h T_g^{-1}, so that g^a = lambda T^{-1} h^a T with
// lambda = h^{1...n} g_{1...n} for odd n.
IntertwinerResult intertwiner(const GeneratorSet& h, const GeneratorSet& g,
                              const PauliOptions& opts = {});

// {"signature":{...},"generators":[<multivector>, ...]}
Json generator_set_to_json(const GeneratorSet& h);
GeneratorSet generator_set_from_json(const Json& j);

Json intertwiner_result_to_json(const IntertwinerResult& r);

}  // namespace cliff
