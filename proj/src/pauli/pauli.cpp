#include "cliff/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <limits>

#include <Eigen/Dense>

#include "cliff/error.hpp"

namespace cliff {

GeneratorSet GeneratorSet::standard(const Signature& sig) {
  GeneratorSet set{sig, {}};
  for (int a = 1; a <= sig.n(); ++a) set.gens.push_back(Multivector::generator(sig, a));
  return set;
}

GeneratorSet make_generator_set(const Signature& sig, std::vector<Multivector> gens) {
  if (static_cast<int>(gens.size()) != sig.n()) {
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(sig.n()) +
                                                " generators, got " + std::to_string(gens.size()));
  }
  for (const auto& g : gens) {
    if (g.signature() != sig) {
      throw Error(ErrorKind::SignatureMismatch, "generator outside " + to_string(sig));
    }
  }
  return GeneratorSet{sig, std::move(gens)};
}

GeneratorReport check_generators(const GeneratorSet& h, double tol) {
  GeneratorReport report;
  const int n = h.n();
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Multivector anti = h[a] * h[b] + h[b] * h[a];
      if (a == b) anti.add(Blade{0}, -2.0 * h.sig.eta(a));
      report.max_relation_residual = std::max(report.max_relation_residual, norm(anti));
    }
  }
  if (n % 2 == 1) {
    report.pseudoscalar_trace = std::abs(trace(pseudoscalar_of(h)));
    report.trace_condition_ok = report.pseudoscalar_trace <= tol;
  }
  return report;
}

std::vector<Multivector> blade_products(const GeneratorSet& h) {
  const std::size_t dim = h.sig.dimension();
  std::vector<Multivector> out;
  out.reserve(dim);
  out.push_back(Multivector::identity(h.sig));
  for (std::uint32_t mask = 1; mask < dim; ++mask) {
    const int top = 31 - std::countl_zero(mask);
    out.push_back(out[mask & ~(1u << top)] * h[top]);
  }
  return out;
}

Multivector pseudoscalar_of(const GeneratorSet& h) {
  Multivector acc = h[0];
  for (int a = 1; a < h.n(); ++a) acc = acc * h[a];
  return acc;
}

std::string_view to_string(RelationCase c) {
  switch (c) {
    case RelationCase::Plus: return "plus";
    case RelationCase::Minus: return "minus";
    case RelationCase::PseudoPlus: return "pseudo_plus";
    case RelationCase::PseudoMinus: return "pseudo_minus";
    case RelationCase::IPseudoPlus: return "i_pseudo_plus";
    case RelationCase::IPseudoMinus: return "i_pseudo_minus";
  }
  return "unknown";
}

namespace {

std::string blade_label(Blade b) { return b.mask == 0 ? "e" : "e" + blade_name(b); }

// max_a norm(target^a - lambda T^{-1} source^a T)
double relation_residual(const GeneratorSet& source, const GeneratorSet& target,
                         const Multivector& lambda, const Multivector& t,
                         const Multivector& t_inv) {
  double worst = 0.0;
  for (int a = 0; a < source.n(); ++a) {
    worst = std::max(worst, distance(target[a], lambda * (t_inv * source[a] * t)));
  }
  return worst;
}

// One Gauss-Newton step on the linear system T g^a - lambda h^a T = 0,
// minimum-norm least squares so the component along the (central) null space
// is left alone.
template <typename Scalar>
Multivector refine_step(const GeneratorSet& source, const GeneratorSet& target,
                        const Multivector& lambda, const Multivector& t) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Signature& sig = t.signature();
  const int n = sig.n();
  const auto dim = static_cast<Eigen::Index>(sig.dimension());
  auto value = [](Complex c) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return c.real();
    } else {
      return c;
    }
  };

  std::vector<Multivector> lh;
  for (int a = 0; a < n; ++a) lh.push_back(lambda * source[a]);

  Mat m = Mat::Zero(n * dim, dim);
  Vec rhs(n * dim);
  for (int a = 0; a < n; ++a) {
    const Multivector defect = t * target[a] - lh[a] * t;
    for (Eigen::Index i = 0; i < dim; ++i) rhs(a * dim + i) = -value(defect.coefficient(i));
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Blade bj{static_cast<std::uint32_t>(j)};
      Multivector col = Multivector::blade(sig, bj) * target[a];
      col -= multiply_blade_right(lh[a], bj);
      for (Eigen::Index i = 0; i < dim; ++i) m(a * dim + i, j) = value(col.coefficient(i));
    }
  }
  const Vec delta = m.completeOrthogonalDecomposition().solve(rhs);
  Multivector out = t;
  for (Eigen::Index j = 0; j < dim; ++j) out.add(Blade{static_cast<std::uint32_t>(j)}, delta(j));
  return out;
}

// Tries t as an intertwiner, with one refinement step if the raw residual
// misses the tolerance. Returns false if t is not invertible or still fails.
bool accept(const GeneratorSet& source, const GeneratorSet& target, const Multivector& lambda,
            Multivector& t, Multivector& t_inv, double& residual, double tol) {
  auto attempt = [&](Multivector cand) {
    cand *= 1.0 / norm(cand);
    try {
      t_inv = inverse(cand);
    } catch (const Error&) {
      return false;
    }
    t = std::move(cand);
    residual = relation_residual(source, target, lambda, t, t_inv);
    return true;
  };
  if (!attempt(t)) return false;
  if (residual <= tol) return true;
  const double raw = residual;
  Multivector keep = t, keep_inv = t_inv;
  const Multivector refined = t.is_complex() ? refine_step<Complex>(source, target, lambda, t)
                                             : refine_step<double>(source, target, lambda, t);
  if (attempt(refined) && residual <= tol) return true;
  t = std::move(keep);
  t_inv = std::move(keep_inv);
  residual = raw;
  return false;
}

// Replaces lambda by the exact admissible value it approximates.
Multivector snap_factor(const Multivector& lambda, double tol) {
  const Signature& sig = lambda.signature();
  RelationCase c;
  try {
    c = classify_factor(lambda, tol);
  } catch (const Error&) {
    return lambda;
  }
  const Multivector e = Multivector::identity(sig);
  const Multivector top = Multivector::blade(sig, pseudoscalar_blade(sig.n()));
  switch (c) {
    case RelationCase::Plus: return e;
    case RelationCase::Minus: return -e;
    case RelationCase::PseudoPlus: return top;
    case RelationCase::PseudoMinus: return -top;
    case RelationCase::IPseudoPlus: return top * Complex(0, 1);
    case RelationCase::IPseudoMinus: return top * Complex(0, -1);
  }
  return lambda;
}

struct Candidate {
  double size;
  std::size_t order;
  Multivector t;
  std::string label;
};

}  // namespace

IntertwinerResult intertwiner_to_standard(const GeneratorSet& h, const PauliOptions& opts) {
  const Signature& sig = h.sig;
  const int n = sig.n();
  const std::size_t dim = sig.dimension();
  const bool odd = n % 2 == 1;
  const auto h_blades = blade_products(h);
  const Blade top = pseudoscalar_blade(n);

  Multivector lambda = Multivector::identity(sig);
  if (odd) lambda = snap_factor(h_blades[top.mask] * blade_inverse(sig, top), opts.factor_tol);

  // T_F = sum_A h^A (F e_A); F e_A is a single signed blade.
  std::vector<Multivector> singles;
  singles.reserve(dim);
  for (std::uint32_t f = 0; f < dim; ++f) {
    Multivector t(sig);
    for (std::uint32_t a = 0; a < dim; ++a) {
      if (odd && (Blade{a}.grade() & 1)) continue;
      const auto fa = blade_product(Blade{f}, Blade{a}, sig);
      const double c = fa.sign * blade_inverse_sign(Blade{a}, sig);
      t += multiply_blade_right(h_blades[a], fa.blade, c);
    }
    singles.push_back(std::move(t));
  }

  std::vector<Candidate> candidates;
  for (std::uint32_t f = 0; f < dim; ++f) {
    candidates.push_back({norm(singles[f]), candidates.size(), singles[f], blade_label(Blade{f})});
  }
  if (odd) {
    for (std::uint32_t b = 0; b < dim; ++b) {
      if (Blade{b}.grade() & 1) continue;
      for (std::uint32_t c = b + 1; c < dim; ++c) {
        if (Blade{c}.grade() & 1) continue;
        Multivector t = singles[b] + singles[c];
        candidates.push_back({norm(t), candidates.size(), std::move(t),
                              blade_label(Blade{b}) + " + " + blade_label(Blade{c})});
      }
    }
  }

  double largest = 0.0;
  for (const auto& c : candidates) largest = std::max(largest, c.size);
  if (!(largest > opts.relation_tol)) {
    throw Error(ErrorKind::NoCandidateFound,
                "every candidate blade sum vanishes; the set does not satisfy the relations",
                largest);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.size > y.size; });

  const GeneratorSet standard = GeneratorSet::standard(sig);
  double best_residual = std::numeric_limits<double>::infinity();
  for (auto& cand : candidates) {
    if (cand.size <= opts.candidate_rel * largest) break;
    Multivector t = std::move(cand.t);
    Multivector t_inv(sig);
    double residual = 0.0;
    const bool ok = accept(h, standard, lambda, t, t_inv, residual, opts.relation_tol);
    if (std::isfinite(residual)) best_residual = std::min(best_residual, residual);
    if (ok) {
      IntertwinerResult result{std::move(t), std::move(t_inv), RelationCase::Plus, lambda,
                               residual, cand.label};
      if (odd) {
        try {
          result.relation = classify_factor(lambda, opts.factor_tol);
        } catch (const Error&) {
          // Only reachable when the trace condition fails: lambda is then a
          // non-unit central element and no case tag applies.
          result.relation = RelationCase::Plus;
        }
      }
      return result;
    }
  }
  throw Error(ErrorKind::VerificationFailed,
              "no candidate intertwiner satisfies the relations (best residual " +
                  format_number(best_residual) + ")",
              best_residual);
}

namespace {

struct Admissible {
  Multivector value;
  const char* label;
};

}  // namespace

Multivector classify_pseudoscalar(const GeneratorSet& h, double tol) {
  const Signature& sig = h.sig;
  if (sig.n() % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "pseudoscalar classification needs odd n");
  }
  const Multivector hp = pseudoscalar_of(h);
  const Multivector top = Multivector::blade(sig, pseudoscalar_blade(sig.n()));
  const Multivector e = Multivector::identity(sig);
  std::vector<Multivector> allowed{top, -top};
  if (sig.residue_mod4() == 1) {
    allowed.push_back(e);
    allowed.push_back(-e);
  }
  if (sig.residue_mod4() == 3 && sig.is_complex()) {
    allowed.push_back(e * Complex(0, 1));
    allowed.push_back(e * Complex(0, -1));
  }
  for (const auto& v : allowed) {
    if (distance(hp, v) <= tol) return hp;
  }
  throw Error(ErrorKind::NotAdmissible,
              "h^{1..n} is not an admissible value for " + to_string(sig));
}

RelationCase classify_factor(const Multivector& factor, double tol) {
  const Signature& sig = factor.signature();
  const Multivector e = Multivector::identity(sig);
  if (distance(factor, e) <= tol) return RelationCase::Plus;
  if (distance(factor, -e) <= tol) return RelationCase::Minus;
  if (sig.n() % 2 == 1) {
    const Multivector top = Multivector::blade(sig, pseudoscalar_blade(sig.n()));
    if (distance(factor, top) <= tol) return RelationCase::PseudoPlus;
    if (distance(factor, -top) <= tol) return RelationCase::PseudoMinus;
    if (sig.is_complex()) {
      if (distance(factor, top * Complex(0, 1)) <= tol) return RelationCase::IPseudoPlus;
      if (distance(factor, top * Complex(0, -1)) <= tol) return RelationCase::IPseudoMinus;
    }
  }
  throw Error(ErrorKind::CaseMismatch,
              "central factor is not one of +-e, +-e^{1..n}" +
                  std::string(sig.is_complex() ? ", +-i e^{1..n}" : ""));
}

IntertwinerResult intertwiner(const GeneratorSet& h, const GeneratorSet& g,
                              const PauliOptions& opts) {
  if (h.sig != g.sig) throw Error(ErrorKind::SignatureMismatch, "generator sets differ in signature");
  const Signature& sig = h.sig;
  const auto rh = intertwiner_to_standard(h, opts);
  const auto rg = intertwiner_to_standard(g, opts);

  Multivector lambda = Multivector::identity(sig);
  if (sig.n() % 2 == 1) lambda = pseudoscalar_of(h) * inverse(pseudoscalar_of(g));
  const RelationCase relation = classify_factor(lambda, opts.factor_tol);
  lambda = snap_factor(lambda, opts.factor_tol);

  Multivector t = rh.T * rg.T_inv;
  Multivector t_inv(sig);
  double residual = std::numeric_limits<double>::infinity();
  if (!accept(h, g, lambda, t, t_inv, residual, opts.relation_tol)) {
    throw Error(ErrorKind::VerificationFailed,
                "composed intertwiner fails verification (residual " + format_number(residual) + ")",
                residual);
  }
  return IntertwinerResult{std::move(t), std::move(t_inv), relation, std::move(lambda), residual,
                           "h: " + rh.chosen_F + "; g: " + rg.chosen_F};
}

Json generator_set_to_json(const GeneratorSet& h) {
  Json gens = Json::array();
  for (const auto& g : h.gens) gens.push_back(multivector_to_json(g));
  return Json{{"signature", signature_to_json(h.sig)}, {"generators", std::move(gens)}};
}

GeneratorSet generator_set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("signature") || !j.contains("generators") ||
      !j.at("generators").is_array()) {
    throw Error(ErrorKind::InvalidArgument,
                "generator set JSON needs \"signature\" and a \"generators\" array");
  }
  const Signature sig = signature_from_json(j.at("signature"));
  std::vector<Multivector> gens;
  for (const auto& g : j.at("generators")) gens.push_back(multivector_from_json(g, sig));
  return make_generator_set(sig, std::move(gens));
}

Json intertwiner_result_to_json(const IntertwinerResult& r) {
  return Json{{"T", multivector_to_json(r.T)},
              {"T_inv", multivector_to_json(r.T_inv)},
              {"case", std::string(to_string(r.relation))},
              {"factor", multivector_to_json(r.factor)},
              {"residual", r.residual},
              {"chosen_F", r.chosen_F}};
}

}  // namespace cliff
