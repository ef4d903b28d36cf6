#include "cliff/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "cliff/error.hpp"
#include "cliff/field_io.hpp"
#include "cliff/frame.hpp"

namespace cliff {

std::string_view to_string(TransportMethod m) {
  switch (m) {
    case TransportMethod::OdeR1: return "ode_r1";
    case TransportMethod::Potential: return "potential";
    case TransportMethod::PathOrdered: return "path_ordered";
  }
  return "unknown";
}

TransportMethod transport_method_from_string(std::string_view name) {
  for (auto m : {TransportMethod::OdeR1, TransportMethod::Potential, TransportMethod::PathOrdered}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown transport method '" + std::string(name) + "'");
}

namespace {

void require_connection(const Field& c) {
  if (c.kind() != FieldKind::Connection) {
    throw Error(ErrorKind::InvalidArgument, "expected a connection field");
  }
}

std::vector<std::size_t> base_index(const Grid& g, const TransportOptions& opts) {
  if (opts.base.empty()) return std::vector<std::size_t>(g.r, 0);
  if (static_cast<int>(opts.base.size()) != g.r) {
    throw Error(ErrorKind::ShapeMismatch, "base point has the wrong number of coordinates");
  }
  for (int mu = 0; mu < g.r; ++mu) {
    if (opts.base[mu] >= g.shape[mu]) throw Error(ErrorKind::InvalidArgument, "base point outside the grid");
  }
  return opts.base;
}

double max_spacing(const Grid& g) { return *std::max_element(g.spacing.begin(), g.spacing.end()); }

// Values of one component along a grid line, indexed by position on the line.
struct Line {
  const Field* f;
  int comp;
  std::size_t start;
  std::size_t stride;
  std::size_t length;

  Multivector operator()(std::size_t i) const { return f->at(start + i * stride, comp); }
};

// f at the midpoint of [i, i + 1], cubic through four nodes.
Multivector midpoint(const Line& f, std::size_t i) {
  const std::size_t n = f.length;
  if (n < 4) return (f(i) + f(i + 1)) * 0.5;
  if (i == 0) return (f(0) * 5.0 + f(1) * 15.0 - f(2) * 5.0 + f(3)) * (1.0 / 16.0);
  if (i + 2 >= n) {
    return (f(n - 4) - f(n - 3) * 5.0 + f(n - 2) * 15.0 + f(n - 1) * 5.0) * (1.0 / 16.0);
  }
  return (f(i) * 9.0 + f(i + 1) * 9.0 - f(i - 1) - f(i + 2)) * (1.0 / 16.0);
}

// Integral of f over [i, i + 1] in units of the spacing, exact for cubics.
Multivector segment_integral(const Line& f, std::size_t i) {
  const std::size_t n = f.length;
  if (n < 4) return (f(i) + f(i + 1)) * 0.5;
  if (i == 0) return (f(0) * 9.0 + f(1) * 19.0 - f(2) * 5.0 + f(3)) * (1.0 / 24.0);
  if (i + 2 >= n) {
    return (f(n - 4) - f(n - 3) * 5.0 + f(n - 2) * 19.0 + f(n - 1) * 9.0) * (1.0 / 24.0);
  }
  return (f(i) * 13.0 + f(i + 1) * 13.0 - f(i - 1) - f(i + 2)) * (1.0 / 24.0);
}

Line line_through(const Field& c, int mu, std::size_t node) {
  const Grid& g = c.grid();
  const std::size_t stride = g.stride(mu);
  const std::size_t pos = (node / stride) % g.shape[mu];
  return Line{&c, mu, node - pos * stride, stride, g.shape[mu]};
}

Multivector checked_inverse(const Multivector& s, std::size_t node) {
  try {
    return inverse(s);
  } catch (const Error& e) {
    throw Error(ErrorKind::SingularityDetected,
                "transported element is not invertible at node " + std::to_string(node) +
                    " (step too large?)",
                static_cast<double>(node));
  }
}

// One step of the ordered product along mu from position i to i +- 1.
Multivector magnus_step(const Line& c, std::size_t i, bool forward, double h,
                        const Multivector& s) {
  const std::size_t seg = forward ? i : i - 1;
  const Multivector m = midpoint(c, seg) * (forward ? h : -h);
  return exp(m) * s;
}

std::vector<std::vector<int>> axis_orders(int r, const TransportOptions& opts) {
  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  if (r <= opts.max_exhaustive_axes) {
    while (std::next_permutation(order.begin(), order.end())) out.push_back(order);
    return out;
  }
  std::mt19937_64 rng(opts.seed);
  for (int k = 0; k < opts.random_orders; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    out.push_back(order);
  }
  return out;
}

// The node with coordinates on `axes` replaced by the base.
std::size_t with_base(const Grid& g, std::vector<std::size_t> idx,
                      const std::vector<std::size_t>& base, const std::vector<int>& axes) {
  for (int a : axes) idx[a] = base[a];
  return g.node(idx);
}

// S at one node along the staircase that visits axes in `order`.
Multivector transport_to_node(const Field& c, const std::vector<std::size_t>& base,
                              const Multivector& s0, std::size_t node,
                              const std::vector<int>& order) {
  const Grid& g = c.grid();
  const auto target = g.index(node);
  auto idx = base;
  Multivector s = s0;
  for (int mu : order) {
    const Line line = line_through(c, mu, g.node(idx));
    const double h = g.spacing[mu];
    std::size_t i = idx[mu];
    while (i != target[mu]) {
      const bool forward = target[mu] > i;
      s = magnus_step(line, i, forward, h, s);
      i = forward ? i + 1 : i - 1;
    }
    idx[mu] = target[mu];
  }
  return s;
}

std::vector<std::size_t> sample_nodes(const Grid& g, const TransportOptions& opts) {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> corner(g.r);
  for (int mu = 0; mu < g.r; ++mu) corner[mu] = g.shape[mu] - 1;
  nodes.push_back(g.node(corner));
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
  for (int k = 1; k < opts.path_samples; ++k) nodes.push_back(pick(rng));
  return nodes;
}

std::vector<Field> all_derivatives(const Field& f, const Exec& exec) {
  std::vector<Field> out;
  for (int mu = 0; mu < f.grid().r; ++mu) out.push_back(partial_derivative(f, mu, exec));
  return out;
}

std::vector<std::size_t> check_nodes(const Grid& g) {
  auto nodes = interior_nodes(g, 2);
  if (nodes.empty()) {
    nodes.resize(g.node_count());
    std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  }
  return nodes;
}

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    if (e.stage().empty()) e.with_stage(stage);
    throw;
  }
}

}  // namespace

Field solve_ode_line(const Field& c, const Multivector& s0, const TransportOptions& opts) {
  require_connection(c);
  const Grid& g = c.grid();
  if (g.r != 1) throw Error(ErrorKind::InvalidArgument, "solve_ode_line needs r = 1");
  if (s0.signature() != c.signature()) throw Error(ErrorKind::SignatureMismatch, "S0 outside the algebra");
  (void)checked_inverse(s0, 0);
  const std::size_t base = base_index(g, opts)[0];
  const Line line{&c, 0, 0, 1, g.shape[0]};
  const double h = g.spacing[0];
  Field s(g, c.signature(), FieldKind::Multivector);
  s.set(base, 0, s0);

  auto step = [&](std::size_t i, bool forward, const Multivector& y) {
    const std::size_t j = forward ? i + 1 : i - 1;
    const double dx = forward ? h : -h;
    const Multivector ci = line(i);
    const Multivector cm = midpoint(line, forward ? i : j);
    const Multivector cj = line(j);
    const Multivector k1 = ci * y;
    const Multivector k2 = cm * (y + k1 * (0.5 * dx));
    const Multivector k3 = cm * (y + k2 * (0.5 * dx));
    const Multivector k4 = cj * (y + k3 * dx);
    return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dx / 6.0);
  };

  Multivector y = s0;
  for (std::size_t i = base; i + 1 < g.shape[0]; ++i) {
    y = step(i, true, y);
    (void)checked_inverse(y, i + 1);
    s.set(i + 1, 0, y);
  }
  y = s0;
  for (std::size_t i = base; i > 0; --i) {
    y = step(i, false, y);
    (void)checked_inverse(y, i - 1);
    s.set(i - 1, 0, y);
  }
  return s;
}

PotentialResult find_potential(const Field& c, const TransportOptions& opts) {
  require_connection(c);
  const Grid& g = c.grid();
  const int r = g.r;
  const auto base = base_index(g, opts);

  PotentialResult out{Field(g, c.signature(), FieldKind::Multivector)};
  if (r >= 2) {
    const auto dc = all_derivatives(c, opts.exec);
    double asym = 0.0, scale = 0.0;
    for (auto node : check_nodes(g)) {
      for (int mu = 0; mu < r; ++mu) {
        for (int nu = 0; nu < r; ++nu) {
          scale = std::max(scale, norm(dc[mu].at(node, nu)));
          if (nu > mu) asym = std::max(asym, distance(dc[mu].at(node, nu), dc[nu].at(node, mu)));
        }
      }
    }
    out.max_asymmetry = asym;
    out.relative_asymmetry = scale > 0.0 ? asym / scale : 0.0;
    if (out.relative_asymmetry > opts.closed_tol) {
      throw Error(ErrorKind::NotClosed,
                  "d_mu C_nu != d_nu C_mu (max asymmetry " + format_number(asym) + ", relative " +
                      format_number(out.relative_asymmetry) + ")",
                  asym);
    }
  }

  // q[mu] at a node: integral of C_mu along axis mu from the base coordinate.
  std::vector<Field> q;
  for (int mu = 0; mu < r; ++mu) {
    Field qm(g, c.signature(), FieldKind::Multivector);
    const double h = g.spacing[mu];
    const std::size_t stride = g.stride(mu);
    std::vector<std::size_t> starts;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if ((node / stride) % g.shape[mu] == 0) starts.push_back(node);
    }
    parallel_for(starts.size(), opts.exec, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const Line line{&c, mu, starts[k], stride, g.shape[mu]};
        const std::size_t b = base[mu];
        Multivector acc(c.signature());
        for (std::size_t i = b; i + 1 < line.length; ++i) {
          acc += segment_integral(line, i) * h;
          qm.set(line.start + (i + 1) * stride, 0, acc);
        }
        acc = Multivector(c.signature());
        for (std::size_t i = b; i > 0; --i) {
          acc -= segment_integral(line, i - 1) * h;
          qm.set(line.start + (i - 1) * stride, 0, acc);
        }
      }
    });
    q.push_back(std::move(qm));
  }

  auto potential_along = [&](std::size_t node, const std::vector<int>& order) {
    const auto idx = g.index(node);
    Multivector p(c.signature());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::vector<int> later(order.begin() + static_cast<long>(k) + 1, order.end());
      p += q[order[k]].at(with_base(g, idx, base, later), 0);
    }
    return p;
  };

  std::vector<int> identity(r);
  std::iota(identity.begin(), identity.end(), 0);
  parallel_for(g.node_count(), opts.exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      out.potential.set(node, 0, potential_along(node, identity));
    }
  });

  double worst = 0.0;
  for (const auto& order : axis_orders(r, opts)) {
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      worst = std::max(worst, distance(potential_along(node, order), out.potential.at(node, 0)));
    }
  }
  out.path_independence_residual = worst;
  const double h = max_spacing(g);
  const double tol = opts.path_tol.value_or(100.0 * h * h * h * h);
  if (worst > tol) {
    throw Error(ErrorKind::PathDependent,
                "potential depends on the staircase (residual " + format_number(worst) + ")", worst);
  }
  return out;
}

Field transport_potential(const Field& potential, const Exec& exec) {
  if (potential.kind() != FieldKind::Multivector) {
    throw Error(ErrorKind::InvalidArgument, "expected a multivector field");
  }
  Field s(potential.grid(), potential.signature(), FieldKind::Multivector);
  parallel_for(potential.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) s.set(node, 0, exp(potential.at(node, 0)));
  });
  return s;
}

PathOrderedResult transport_path_ordered(const Field& c, const Multivector& s0,
                                         const TransportOptions& opts) {
  require_connection(c);
  const Grid& g = c.grid();
  const int r = g.r;
  if (s0.signature() != c.signature()) throw Error(ErrorKind::SignatureMismatch, "S0 outside the algebra");
  (void)checked_inverse(s0, 0);
  const auto base = base_index(g, opts);

  PathOrderedResult out{Field(g, c.signature(), FieldKind::Multivector)};
  out.s.set(g.node(base), 0, s0);
  for (int mu = 0; mu < r; ++mu) {
    // Seeds: nodes already reached, i.e. on the base coordinate for mu and all later axes.
    std::vector<std::size_t> seeds;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      const auto idx = g.index(node);
      bool seed = true;
      for (int nu = mu; nu < r && seed; ++nu) seed = idx[nu] == base[nu];
      if (seed) seeds.push_back(node);
    }
    const std::size_t stride = g.stride(mu);
    const double h = g.spacing[mu];
    parallel_for(seeds.size(), opts.exec, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const Line line = line_through(c, mu, seeds[k]);
        const Multivector start = out.s.at(seeds[k], 0);
        Multivector s = start;
        for (std::size_t i = base[mu]; i + 1 < line.length; ++i) {
          s = magnus_step(line, i, true, h, s);
          out.s.set(line.start + (i + 1) * stride, 0, s);
        }
        s = start;
        for (std::size_t i = base[mu]; i > 0; --i) {
          s = magnus_step(line, i, false, h, s);
          out.s.set(line.start + (i - 1) * stride, 0, s);
        }
      }
    });
  }
  // Invertibility check on the finished field.
  parallel_for(g.node_count(), opts.exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) (void)checked_inverse(out.s.at(node, 0), node);
  });

  double worst = 0.0;
  const auto samples = sample_nodes(g, opts);
  for (const auto& order : axis_orders(r, opts)) {
    for (auto node : samples) {
      const Multivector alt = transport_to_node(c, base, s0, node, order);
      const Multivector ref = out.s.at(node, 0);
      worst = std::max(worst, distance(alt, ref) / std::max(1.0, norm(ref)));
    }
  }
  out.path_independence_residual = worst;
  const double h = max_spacing(g);
  const double tol = opts.path_tol.value_or(100.0 * h * h);
  if (worst > tol) {
    throw Error(ErrorKind::PathDependent,
                "transport depends on the staircase (residual " + format_number(worst) + ")", worst);
  }
  return out;
}

std::vector<double> transport_residual(const Field& c, const Field& s, const Exec& exec) {
  require_connection(c);
  require_compatible(c, s);
  const auto ds = all_derivatives(s, exec);
  std::vector<double> out(c.node_count(), 0.0);
  parallel_for(c.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const Multivector sn = s.at(node, 0);
      for (int mu = 0; mu < c.grid().r; ++mu) {
        out[node] = std::max(out[node], distance(ds[mu].at(node, 0), c.at(node, mu) * sn));
      }
    }
  });
  return out;
}

double global_relation_residual(const Field& h, const Field& t, const Multivector& factor,
                                const Exec& exec) {
  require_compatible(h, t);
  const Signature& sig = h.signature();
  std::vector<double> worst(h.node_count(), 0.0);
  parallel_for(h.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const Multivector tn = t.at(node, 0);
      const Multivector t_inv = checked_inverse(tn, node);
      for (int a = 0; a < sig.n(); ++a) {
        const Multivector rhs = factor * (t_inv * h.at(node, a) * tn);
        worst[node] = std::max(worst[node], distance(Multivector::generator(sig, a + 1), rhs));
      }
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

TransportResult solve_global(const Field& h, const TransportOptions& opts) {
  if (h.kind() != FieldKind::Frame) throw Error(ErrorKind::InvalidArgument, "expected a frame field");
  const Grid& g = h.grid();
  const Signature& sig = h.signature();
  const int n = sig.n();
  TransportDiagnostics diag;

  Field c = run_stage("connection", [&] { return spin_connection_general(h, opts.exec); });

  if (g.r >= 2) {
    run_stage("curvature", [&] {
      const auto nodes = check_nodes(g);
      const auto rn = component_max_norm(curvature(c, opts.exec));
      const auto cn = connection_commutator_norm(c);
      for (auto node : nodes) {
        diag.max_curvature = std::max(diag.max_curvature, rn[node]);
        diag.max_commutator = std::max(diag.max_commutator, cn[node]);
      }
    });
  }

  TransportMethod method = TransportMethod::PathOrdered;
  std::string fallback;
  std::optional<Field> s;
  if (g.r == 1) {
    method = TransportMethod::OdeR1;
    s = run_stage("transport", [&] { return solve_ode_line(c, Multivector::identity(sig), opts); });
  } else {
    try {
      auto pot = find_potential(c, opts);
      diag.closed_asymmetry = pot.max_asymmetry;
      double comm = 0.0, pmax = 0.0, cmax = 0.0;
      for (std::size_t node = 0; node < g.node_count(); ++node) {
        const Multivector p = pot.potential.at(node, 0);
        pmax = std::max(pmax, norm(p));
        for (int mu = 0; mu < g.r; ++mu) {
          const Multivector cm = c.at(node, mu);
          cmax = std::max(cmax, norm(cm));
          comm = std::max(comm, norm(commutator(p, cm)));
        }
      }
      const double rel = (pmax * cmax) > 0.0 ? comm / (pmax * cmax) : 0.0;
      if (rel > opts.commute_tol) {
        fallback = "potential does not commute with C (relative " + format_number(rel) + ")";
      } else {
        method = TransportMethod::Potential;
        diag.path_independence_residual = pot.path_independence_residual;
        s = run_stage("transport", [&] { return transport_potential(pot.potential, opts.exec); });
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotClosed && e.kind() != ErrorKind::PathDependent) {
        Error tagged = e;
        tagged.with_stage("potential");
        throw tagged;
      }
      if (e.kind() == ErrorKind::NotClosed) diag.closed_asymmetry = e.value();
      fallback = std::string(e.kind() == ErrorKind::NotClosed ? "not closed: " : "path dependent: ") + e.what();
    }
    if (!s) {
      auto po = run_stage("transport",
                          [&] { return transport_path_ordered(c, Multivector::identity(sig), opts); });
      diag.path_independence_residual = po.path_independence_residual;
      s = std::move(po.s);
    }
  }

  // f^a = S^{-1} h^a S, node average and spread.
  GeneratorSet fbar{sig, std::vector<Multivector>(n, Multivector(sig))};
  run_stage("constancy", [&] {
    const std::size_t nodes = g.node_count();
    Field f(g, sig, FieldKind::Frame);
    parallel_for(nodes, opts.exec, [&](std::size_t begin, std::size_t end) {
      for (std::size_t node = begin; node < end; ++node) {
        const Multivector sn = s->at(node, 0);
        const Multivector s_inv = checked_inverse(sn, node);
        for (int a = 0; a < n; ++a) f.set(node, a, s_inv * h.at(node, a) * sn);
      }
    });
    const std::size_t stride = f.node_stride();
    auto spread = [&](std::span<const double> plane, std::vector<double>& mean) {
      double worst = 0.0;
      mean.assign(stride, 0.0);
      for (std::size_t node = 0; node < nodes; ++node)
        for (std::size_t k = 0; k < stride; ++k) mean[k] += plane[node * stride + k];
      for (auto& m : mean) m /= static_cast<double>(nodes);
      for (std::size_t k = 0; k < stride; ++k) {
        double var = 0.0;
        for (std::size_t node = 0; node < nodes; ++node) {
          const double d = plane[node * stride + k] - mean[k];
          var += d * d;
        }
        worst = std::max(worst, std::sqrt(var / static_cast<double>(nodes)));
      }
      return worst;
    };
    std::vector<double> mean_re, mean_im;
    diag.constancy_residual = spread(f.real(), mean_re);
    if (sig.is_complex()) diag.constancy_residual = std::max(diag.constancy_residual, spread(f.imag(), mean_im));
    for (int a = 0; a < n; ++a) {
      Multivector m(sig);
      const std::size_t off = static_cast<std::size_t>(a) * sig.dimension();
      std::copy_n(mean_re.begin() + static_cast<long>(off), sig.dimension(), m.real().begin());
      if (sig.is_complex()) std::copy_n(mean_im.begin() + static_cast<long>(off), sig.dimension(), m.imag().begin());
      fbar.gens[a] = m;
    }
  });

  IntertwinerResult k = run_stage("intertwiner", [&] {
    PauliOptions po = opts.pauli;
    const auto report = check_generators(fbar);
    if (report.max_relation_residual > opts.average_relation_tol) {
      throw Error(ErrorKind::VerificationFailed,
                  "node-averaged S^{-1} h^a S violates the generator relations (residual " +
                      format_number(report.max_relation_residual) +
                      "); the grid is too coarse for this frame",
                  report.max_relation_residual);
    }
    po.relation_tol = std::max(po.relation_tol, 10.0 * report.max_relation_residual);
    return intertwiner_to_standard(fbar, po);
  });
  diag.k_residual = k.residual;
  if (n % 2 == 1) {
    const Blade top = pseudoscalar_blade(n);
    const Multivector top_inv = blade_inverse(sig, top);
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      diag.factor_defect = std::max(
          diag.factor_defect, distance(pseudoscalar_of(h.generators(node)) * top_inv, k.factor));
    }
  }

  Field t(g, sig, FieldKind::Multivector);
  parallel_for(g.node_count(), opts.exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) t.set(node, 0, s->at(node, 0) * k.T);
  });
  diag.final_residual =
      run_stage("verification", [&] { return global_relation_residual(h, t, k.factor, opts.exec); });

  return TransportResult{std::move(c), std::move(*s), k.T,        std::move(t), method,
                         k.relation,   k.factor,     k.chosen_F, fallback,     diag};
}

Json diagnostics_to_json(const TransportResult& r) {
  const auto& d = r.diagnostics;
  return Json{{"method", std::string(to_string(r.method))},
              {"fallback_reason", r.fallback_reason},
              {"case", std::string(to_string(r.relation))},
              {"factor", multivector_to_json(r.factor)},
              {"chosen_F", r.chosen_F},
              {"max_curvature", d.max_curvature},
              {"max_commutator", d.max_commutator},
              {"closed_asymmetry", d.closed_asymmetry},
              {"path_independence_residual", d.path_independence_residual},
              {"constancy_residual", d.constancy_residual},
              {"final_residual", d.final_residual},
              {"factor_defect", d.factor_defect},
              {"k_residual", d.k_residual}};
}

void write_transport_result(const TransportResult& r, const std::filesystem::path& dir,
                            bool binary) {
  std::filesystem::create_directories(dir);
  const std::string ext = binary ? ".field.bin" : ".field.json";
  write_field(r.S, dir / ("S" + ext));
  write_field(r.T, dir / ("T" + ext));
  write_field(r.connection, dir / ("C" + ext));
  auto write_json = [&](const std::filesystem::path& p, const Json& j) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorKind::IoError, p.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
  };
  write_json(dir / "K.json", multivector_to_json(r.K));
  write_json(dir / "diagnostics.json", diagnostics_to_json(r));
}

}  // namespace cliff
