#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "cliff/error.hpp"
#include "cliff/frame.hpp"

namespace cliff {

Rational mu_coefficient(int n, int k) {
  if (n < 1 || k < 1 || k > 2 * (n / 2)) {
    throw Error(ErrorKind::GradeOutOfRange,
                "mu_k needs 1 <= k <= 2 floor(n/2), got n=" + std::to_string(n) +
                    ", k=" + std::to_string(k));
  }
  const std::int64_t sign = (k % 2 == 0) ? 1 : -1;
  // k even gives 2k, k odd gives 2(n - k); both positive, so 1/den is reduced.
  return Rational{1, n - sign * (n - 2 * k)};
}

HBasis::HBasis(const GeneratorSet& h, double min_rcond)
    : h_(h), blades_(blade_products(h)), solver_(h.sig, blades_) {
  if (!(solver_.rcond() >= min_rcond)) {
    throw Error(ErrorKind::DegenerateHBasis,
                "the products h^A do not form a basis (rcond " + format_number(solver_.rcond()) +
                    ")",
                solver_.rcond());
  }
}

Multivector HBasis::coordinates(const Multivector& x) const { return solver_.solve(x); }

Multivector HBasis::weighted_projection(const Multivector& x,
                                        const std::vector<double>& weights) const {
  const Multivector w = coordinates(x);
  Multivector out(h_.sig);
  for (std::uint32_t mask = 0; mask < h_.sig.dimension(); ++mask) {
    const auto k = static_cast<std::size_t>(Blade{mask}.grade());
    if (k >= weights.size() || weights[k] == 0.0) continue;
    const Complex c = w.coefficient(mask) * weights[k];
    if (c == Complex(0.0)) continue;
    out += blades_[mask] * c;
  }
  return out;
}

Multivector HBasis::project(const Multivector& x, int k) const {
  if (k < 0 || k > h_.n()) {
    throw Error(ErrorKind::GradeOutOfRange, "grade " + std::to_string(k) + " out of range");
  }
  std::vector<double> weights(static_cast<std::size_t>(h_.n()) + 1, 0.0);
  weights[static_cast<std::size_t>(k)] = 1.0;
  return weighted_projection(x, weights);
}

Multivector hbasis_project(const Multivector& x, const GeneratorSet& h, int k) {
  return HBasis(h).project(x, k);
}

GeneratorSet lower_index(const GeneratorSet& h) {
  GeneratorSet out{h.sig, {}};
  for (int a = 0; a < h.n(); ++a) out.gens.push_back(h[a] * static_cast<double>(h.sig.eta(a)));
  return out;
}

namespace {

std::vector<double> mu_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= 2 * (n / 2); ++k) w[static_cast<std::size_t>(k)] = mu_coefficient(n, k).value();
  return w;
}

Multivector contracted_derivative(const GeneratorSet& h, const std::vector<Multivector>& dh) {
  Multivector d(h.sig);
  for (int a = 0; a < h.n(); ++a) d += dh[a] * (h[a] * static_cast<double>(h.sig.eta(a)));
  return d;
}

void require_frame(const Field& h) {
  if (h.kind() != FieldKind::Frame) throw Error(ErrorKind::InvalidArgument, "expected a frame field");
}

void require_connection(const Field& c) {
  if (c.kind() != FieldKind::Connection) {
    throw Error(ErrorKind::InvalidArgument, "expected a connection field");
  }
}

std::vector<Field> all_derivatives(const Field& f, const Exec& exec) {
  std::vector<Field> out;
  for (int mu = 0; mu < f.grid().r; ++mu) out.push_back(partial_derivative(f, mu, exec));
  return out;
}

std::vector<Multivector> components_at(const Field& f, std::size_t node) {
  std::vector<Multivector> out;
  for (int c = 0; c < f.components(); ++c) out.push_back(f.at(node, c));
  return out;
}

}  // namespace

Multivector connection_from_derivative(const HBasis& basis, const std::vector<Multivector>& dh) {
  const GeneratorSet& h = basis.generators();
  const Multivector d = contracted_derivative(h, dh);
  return remove_central_part(basis.weighted_projection(d, mu_weights(h.n())));
}

Field spin_connection_general(const Field& h, const Exec& exec) {
  require_frame(h);
  const auto dh = all_derivatives(h, exec);
  Field out(h.grid(), h.signature(), FieldKind::Connection);
  parallel_for(h.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      std::optional<HBasis> basis;
      try {
        basis.emplace(h.generators(node));
      } catch (Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " at node " + std::to_string(node),
                    static_cast<double>(node));
      }
      for (int mu = 0; mu < h.grid().r; ++mu) {
        out.set(node, mu, connection_from_derivative(*basis, components_at(dh[mu], node)));
      }
    }
  });
  return out;
}

Field spin_connection_grade1(const Field& h, const Exec& exec, double grade1_tol) {
  require_frame(h);
  const int n = h.signature().n();
  for (std::size_t node = 0; node < h.node_count(); ++node) {
    for (int a = 0; a < n; ++a) {
      const Multivector g = h.at(node, a);
      const double outside = distance(g, grade_project(g, 1));
      if (outside > grade1_tol * std::max(1.0, norm(g))) {
        throw Error(ErrorKind::NotGrade1,
                    "generator " + std::to_string(a + 1) + " at node " + std::to_string(node) +
                        " has components outside grade 1",
                    outside);
      }
    }
  }
  const auto dh = all_derivatives(h, exec);
  Field out(h.grid(), h.signature(), FieldKind::Connection);
  parallel_for(h.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const GeneratorSet g = h.generators(node);
      for (int mu = 0; mu < h.grid().r; ++mu) {
        Multivector d = contracted_derivative(g, components_at(dh[mu], node));
        out.set(node, mu, remove_central_part(d * 0.25));
      }
    }
  });
  return out;
}

std::vector<double> field_equation_residual(const Field& h, const Field& c, const Exec& exec) {
  require_frame(h);
  require_connection(c);
  require_compatible(h, c);
  const auto dh = all_derivatives(h, exec);
  std::vector<double> out(h.node_count(), 0.0);
  parallel_for(h.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      double worst = 0.0;
      for (int mu = 0; mu < h.grid().r; ++mu) {
        const Multivector cm = c.at(node, mu);
        for (int a = 0; a < h.components(); ++a) {
          const Multivector ha = h.at(node, a);
          worst = std::max(worst, distance(dh[mu].at(node, a), commutator(cm, ha)));
        }
      }
      out[node] = worst;
    }
  });
  return out;
}

Field curvature(const Field& c, const Exec& exec) {
  require_connection(c);
  const int r = c.grid().r;
  if (r < 2) throw Error(ErrorKind::InvalidArgument, "curvature needs r >= 2");
  const auto dc = all_derivatives(c, exec);
  Field out(c.grid(), c.signature(), FieldKind::Curvature);
  parallel_for(c.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      for (int mu = 0; mu < r; ++mu) {
        for (int nu = mu + 1; nu < r; ++nu) {
          Multivector rmn = dc[mu].at(node, nu) - dc[nu].at(node, mu);
          rmn -= commutator(c.at(node, mu), c.at(node, nu));
          out.set(node, curvature_index(mu, nu, r), rmn);
        }
      }
    }
  });
  return out;
}

std::vector<double> component_max_norm(const Field& f) {
  std::vector<double> out(f.node_count(), 0.0);
  for (std::size_t node = 0; node < f.node_count(); ++node) {
    for (int k = 0; k < f.components(); ++k) out[node] = std::max(out[node], norm(f.at(node, k)));
  }
  return out;
}

std::vector<double> connection_commutator_norm(const Field& c) {
  require_connection(c);
  std::vector<double> out(c.node_count(), 0.0);
  for (std::size_t node = 0; node < c.node_count(); ++node) {
    for (int mu = 0; mu < c.grid().r; ++mu) {
      for (int nu = mu + 1; nu < c.grid().r; ++nu) {
        out[node] = std::max(out[node], norm(commutator(c.at(node, mu), c.at(node, nu))));
      }
    }
  }
  return out;
}

GaugeResult gauge_transform(const Field& h, const Field& c, const Field& s, const Exec& exec) {
  require_frame(h);
  require_connection(c);
  require_compatible(h, c);
  require_compatible(h, s);
  if (s.kind() != FieldKind::Multivector) {
    throw Error(ErrorKind::InvalidArgument, "gauge field must be a multivector field");
  }
  const auto ds = all_derivatives(s, exec);
  GaugeResult out{Field(h.grid(), h.signature(), FieldKind::Frame),
                  Field(h.grid(), h.signature(), FieldKind::Connection), 0.0};
  std::vector<double> central(h.node_count(), 0.0);
  parallel_for(h.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const Multivector sn = s.at(node, 0);
      Multivector s_inv(h.signature());
      try {
        s_inv = inverse(sn);
      } catch (const Error&) {
        throw Error(ErrorKind::SingularElement,
                    "gauge element is not invertible at node " + std::to_string(node),
                    static_cast<double>(node));
      }
      for (int a = 0; a < h.components(); ++a) out.h.set(node, a, s_inv * h.at(node, a) * sn);
      for (int mu = 0; mu < h.grid().r; ++mu) {
        const Multivector inhom = s_inv * ds[mu].at(node, 0);
        central[node] = std::max(central[node], norm(central_part(inhom)));
        out.c.set(node, mu, s_inv * c.at(node, mu) * sn - inhom);
      }
    }
  });
  out.max_central_part = *std::max_element(central.begin(), central.end());
  return out;
}

OrthogonalityReport check_orthogonality(const MatrixField& y, const Signature& sig) {
  if (y.n != sig.n()) throw Error(ErrorKind::ShapeMismatch, "matrix size differs from n");
  if (y.data.size() != y.grid.node_count() * static_cast<std::size_t>(y.n * y.n)) {
    throw Error(ErrorKind::ShapeMismatch, "matrix field data does not match its grid");
  }
  OrthogonalityReport report;
  for (std::size_t node = 0; node < y.grid.node_count(); ++node) {
    for (int a = 0; a < y.n; ++a) {
      for (int c = 0; c < y.n; ++c) {
        Complex sum = 0.0;
        for (int b = 0; b < y.n; ++b) sum += y.at(node, a, b) * y.at(node, c, b) * double(sig.eta(b));
        if (a == c) sum -= double(sig.eta(a));
        if (std::abs(sum) > report.max_defect) {
          report.max_defect = std::abs(sum);
          report.worst_node = node;
        }
      }
    }
  }
  return report;
}

Field frame_from_matrix(const MatrixField& y, const Signature& sig, double tol, const Exec& exec) {
  const auto report = check_orthogonality(y, sig);
  if (!(report.max_defect <= tol)) {
    throw Error(ErrorKind::OrthogonalityViolated,
                "Y eta Y^T differs from eta by " + format_number(report.max_defect) +
                    " at node " + std::to_string(report.worst_node),
                report.max_defect);
  }
  Field out(y.grid, sig, FieldKind::Frame);
  parallel_for(y.grid.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      for (int a = 0; a < y.n; ++a) {
        Multivector g(sig);
        for (int b = 0; b < y.n; ++b) g.add(generator_blade(b + 1), y.at(node, a, b));
        out.set(node, a, g);
      }
    }
  });
  return out;
}

}  // namespace cliff
