#include "cliff/field.hpp"

#include <algorithm>
#include <string>

#include "cliff/error.hpp"

namespace cliff {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Frame: return "frame";
    case FieldKind::Connection: return "connection";
    case FieldKind::Multivector: return "multivector";
    case FieldKind::Curvature: return "curvature";
  }
  return "unknown";
}

FieldKind field_kind_from_string(std::string_view name) {
  for (auto k : {FieldKind::Frame, FieldKind::Connection, FieldKind::Multivector,
                 FieldKind::Curvature}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown field kind '" + std::string(name) + "'");
}

int component_count(FieldKind kind, const Signature& sig, const Grid& grid) {
  switch (kind) {
    case FieldKind::Frame: return sig.n();
    case FieldKind::Connection: return grid.r;
    case FieldKind::Multivector: return 1;
    case FieldKind::Curvature: return grid.r * (grid.r - 1) / 2;
  }
  return 0;
}

int curvature_index(int mu, int nu, int r) {
  if (mu < 0 || nu <= mu || nu >= r) {
    throw Error(ErrorKind::AxisOutOfRange, "curvature index needs 0 <= mu < nu < r");
  }
  // pairs (0,1) (0,2) .. (0,r-1) (1,2) ..
  return mu * (2 * r - mu - 1) / 2 + (nu - mu - 1);
}

Field::Field(Grid grid, Signature sig, FieldKind kind)
    : grid_(std::move(grid)), sig_(sig), kind_(kind), components_(component_count(kind, sig_, grid_)) {
  node_stride_ = static_cast<std::size_t>(components_) * sig_.dimension();
  re_.assign(node_stride_ * grid_.node_count(), 0.0);
  if (sig_.is_complex()) im_.assign(re_.size(), 0.0);
}

std::size_t Field::offset(std::size_t node, int comp) const {
  if (node >= node_count() || comp < 0 || comp >= components_) {
    throw Error(ErrorKind::InvalidArgument, "field access out of range");
  }
  return node * node_stride_ + static_cast<std::size_t>(comp) * sig_.dimension();
}

Multivector Field::at(std::size_t node, int comp) const {
  const std::size_t off = offset(node, comp);
  Multivector m(sig_);
  std::copy_n(re_.begin() + off, sig_.dimension(), m.real().begin());
  if (!im_.empty()) std::copy_n(im_.begin() + off, sig_.dimension(), m.imag().begin());
  return m;
}

void Field::set(std::size_t node, int comp, const Multivector& value) {
  if (value.signature() != sig_) {
    throw Error(ErrorKind::SignatureMismatch, "value outside the field's algebra");
  }
  const std::size_t off = offset(node, comp);
  std::copy(value.real().begin(), value.real().end(), re_.begin() + off);
  if (!im_.empty()) std::copy(value.imag().begin(), value.imag().end(), im_.begin() + off);
}

GeneratorSet Field::generators(std::size_t node) const {
  if (kind_ != FieldKind::Frame) throw Error(ErrorKind::InvalidArgument, "not a frame field");
  GeneratorSet set{sig_, {}};
  for (int a = 0; a < components_; ++a) set.gens.push_back(at(node, a));
  return set;
}

void require_compatible(const Field& a, const Field& b) {
  if (a.signature() != b.signature()) {
    throw Error(ErrorKind::SignatureMismatch, "fields live in different algebras");
  }
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::ShapeMismatch, "fields use different grids");
}

Field sample_frame(const Grid& grid, const Signature& sig, const FrameSampler& f,
                   const Exec& exec) {
  Field out(grid, sig, FieldKind::Frame);
  parallel_for(grid.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const auto x = grid.coordinates(node);
      const GeneratorSet h = f(x);
      if (h.n() != sig.n() || static_cast<int>(h.gens.size()) != sig.n()) {
        throw Error(ErrorKind::ShapeMismatch, "sampler returned the wrong generator count");
      }
      for (int a = 0; a < sig.n(); ++a) out.set(node, a, h[a]);
    }
  });
  return out;
}

Field sample_multivector(const Grid& grid, const Signature& sig, const MultivectorSampler& f,
                         const Exec& exec) {
  Field out(grid, sig, FieldKind::Multivector);
  parallel_for(grid.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) out.set(node, 0, f(grid.coordinates(node)));
  });
  return out;
}

Field sample_connection(const Grid& grid, const Signature& sig,
                        const std::vector<MultivectorSampler>& f, const Exec& exec) {
  if (static_cast<int>(f.size()) != grid.r) {
    throw Error(ErrorKind::ShapeMismatch, "need one connection sampler per axis");
  }
  Field out(grid, sig, FieldKind::Connection);
  parallel_for(grid.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const auto x = grid.coordinates(node);
      for (int mu = 0; mu < grid.r; ++mu) out.set(node, mu, f[mu](x));
    }
  });
  return out;
}

FrameCheck check_frame(const Field& h, const Exec& exec) {
  if (h.kind() != FieldKind::Frame) throw Error(ErrorKind::InvalidArgument, "not a frame field");
  std::vector<GeneratorReport> reports(h.node_count());
  parallel_for(h.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      reports[node] = check_generators(h.generators(node));
    }
  });
  FrameCheck out;
  for (std::size_t node = 0; node < reports.size(); ++node) {
    if (reports[node].max_relation_residual > out.max_relation_residual) {
      out.max_relation_residual = reports[node].max_relation_residual;
      out.worst_node = node;
    }
    out.max_pseudoscalar_trace =
        std::max(out.max_pseudoscalar_trace, reports[node].pseudoscalar_trace);
  }
  return out;
}

}  // namespace cliff
