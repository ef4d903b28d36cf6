#include "cliff/job.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cliff/error.hpp"
#include "cliff/field_io.hpp"
#include "cliff/frame.hpp"

namespace cliff {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double constant_value(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto e = parse_expr(j.get<std::string>());
    if (e.variables_used() > 0 || !e.symbols().empty()) {
      throw Error(ErrorKind::InvalidArgument, what + " must be a constant expression");
    }
    return e.eval({});
  }
  throw Error(ErrorKind::InvalidArgument, what + " must be a number or expression string");
}

std::vector<double> constant_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(constant_value(v, what));
  return out;
}

ScalarExpr expression_of(const Json& j, const std::map<std::string, ScalarExpr>& bindings) {
  ScalarExpr e;
  if (j.is_number()) {
    e = ScalarExpr::constant(j.get<double>());
  } else if (j.is_string()) {
    e = parse_expr(j.get<std::string>());
  } else {
    throw Error(ErrorKind::InvalidArgument, "expected an expression string, got " + j.dump());
  }
  return e.substitute(bindings);
}

Json grid_json(const Grid& g) {
  return Json{{"shape", g.shape}, {"origin", g.origin}, {"spacing", g.spacing}};
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("job key \"") + key + "\": " + e.what());
  }
}

std::optional<double> optional_number(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return constant_value(j.at(key), key);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, path.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::IoError, path.string() + ": " + e.what());
  }
}

}  // namespace

Grid parse_grid_spec(std::string_view text) {
  const auto parts = split(text, ';');
  if (parts.size() != 3) {
    throw Error(ErrorKind::InvalidArgument, "grid must be \"shape;origin;spacing\", got \"" + std::string(text) + "\"");
  }
  std::vector<std::size_t> shape;
  for (const auto& s : split(parts[0], ',')) {
    const double v = constant_value(Json(s), "grid shape");
    if (v < 1 || v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, "grid shape entries must be positive integers");
    shape.push_back(static_cast<std::size_t>(v));
  }
  std::vector<double> origin, spacing;
  for (const auto& s : split(parts[1], ',')) origin.push_back(constant_value(Json(s), "grid origin"));
  for (const auto& s : split(parts[2], ',')) spacing.push_back(constant_value(Json(s), "grid spacing"));
  return make_grid(shape, origin, spacing);
}

Grid grid_from_job_json(const Json& j) {
  if (!j.is_object() || !j.contains("shape")) {
    throw Error(ErrorKind::InvalidArgument, "grid needs \"shape\"");
  }
  std::vector<std::size_t> shape;
  for (double v : constant_list(j.at("shape"), "grid shape")) {
    if (v < 1 || v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, "grid shape entries must be positive integers");
    shape.push_back(static_cast<std::size_t>(v));
  }
  if (j.contains("lower") || j.contains("upper")) {
    return make_grid_bounds(shape, constant_list(j.at("lower"), "grid lower"),
                            constant_list(j.at("upper"), "grid upper"));
  }
  return make_grid(shape, constant_list(j.at("origin"), "grid origin"),
                   constant_list(j.at("spacing"), "grid spacing"));
}

double field_tolerance(const Tolerances& tol, const Grid& grid) {
  if (tol.field) return *tol.field;
  const double h = *std::max_element(grid.spacing.begin(), grid.spacing.end());
  return h * h;
}

JobSpec job_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "job must be a JSON object");
  JobSpec job;
  job.command = get_or<std::string>(j, "command", "");
  job.title = get_or<std::string>(j, "title", "");
  if (j.contains("signature")) job.sig = signature_from_json(j.at("signature"));
  if (j.contains("grid")) job.grid = grid_from_job_json(j.at("grid"));
  if (j.contains("definitions")) {
    const Json& d = j.at("definitions");
    // Arrays keep their order; objects are taken in key order.
    if (d.is_array()) {
      for (const auto& entry : d) {
        job.definitions.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<std::string>());
      }
    } else if (d.is_object()) {
      for (const auto& [k, v] : d.items()) job.definitions.emplace_back(k, v.get<std::string>());
    } else {
      throw Error(ErrorKind::InvalidArgument, "\"definitions\" must be an array of [name, expr] or an object");
    }
  }
  job.frame = j.value("frame", Json());
  job.connection = j.value("connection", Json());
  job.sets = j.value("sets", Json());
  job.expected = j.value("expected", Json());
  job.method = get_or<std::string>(j, "method", "");
  job.base = get_or<std::vector<std::size_t>>(j, "base", {});
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    job.tol.algebraic = optional_number(t, "algebraic").value_or(job.tol.algebraic);
    job.tol.field = optional_number(t, "field");
    job.tol.closed = optional_number(t, "closed").value_or(job.tol.closed);
    job.tol.commute = optional_number(t, "commute").value_or(job.tol.commute);
    job.tol.path = optional_number(t, "path");
    job.tol.orthogonality = optional_number(t, "orthogonality").value_or(job.tol.orthogonality);
    job.tol.factor = optional_number(t, "factor").value_or(job.tol.factor);
  }
  job.seed = get_or<std::uint64_t>(j, "seed", 1);
  job.threads = get_or<int>(j, "threads", 1);
  job.out = get_or<std::string>(j, "out", "");
  job.format = get_or<std::string>(j, "format", "json");
  if (job.format != "json" && job.format != "bin") {
    throw Error(ErrorKind::InvalidArgument, "format must be json or bin");
  }
  if (job.threads < 1) throw Error(ErrorKind::InvalidArgument, "threads must be >= 1");
  return job;
}

Json job_to_json(const JobSpec& job) {
  Json j;
  j["command"] = job.command;
  if (!job.title.empty()) j["title"] = job.title;
  j["signature"] = signature_to_json(job.sig);
  if (job.grid) j["grid"] = grid_json(*job.grid);
  Json defs = Json::array();
  for (const auto& [k, v] : job.definitions) defs.push_back(Json::array({k, v}));
  j["definitions"] = defs;
  if (!job.frame.is_null()) j["frame"] = job.frame;
  if (!job.connection.is_null()) j["connection"] = job.connection;
  if (!job.sets.is_null()) j["sets"] = job.sets;
  if (!job.expected.is_null()) j["expected"] = job.expected;
  j["method"] = job.method;
  j["base"] = job.base.empty() && job.grid ? std::vector<std::size_t>(job.grid->r, 0) : job.base;
  Json t{{"algebraic", job.tol.algebraic},
         {"closed", job.tol.closed},
         {"commute", job.tol.commute},
         {"orthogonality", job.tol.orthogonality},
         {"factor", job.tol.factor}};
  if (job.grid) {
    t["field"] = field_tolerance(job.tol, *job.grid);
    const double h = *std::max_element(job.grid->spacing.begin(), job.grid->spacing.end());
    if (job.tol.path) {
      t["path"] = *job.tol.path;
    } else {
      t["path_default"] = Json{{"path_ordered", 100 * h * h}, {"potential", 100 * h * h * h * h}};
    }
  } else {
    if (job.tol.field) t["field"] = *job.tol.field;
    if (job.tol.path) t["path"] = *job.tol.path;
  }
  j["tolerances"] = t;
  j["seed"] = job.seed;
  j["threads"] = job.threads;
  j["out"] = job.out;
  j["format"] = job.format;
  return j;
}

JobSpec load_job(const std::filesystem::path& path) { return job_from_json(read_json_file(path)); }

MultivectorExpr::MultivectorExpr(const Json& j, const Signature& sig,
                                 const std::map<std::string, ScalarExpr>& bindings)
    : sig_(sig) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "multivector expression must be an object");
  for (const auto& [key, value] : j.items()) {
    Term t{parse_blade(key == "e" ? "" : key, sig.n()), ScalarExpr(), std::nullopt};
    if (value.is_array()) {
      if (value.size() != 2) throw Error(ErrorKind::InvalidArgument, "coefficient \"" + key + "\" must be [re, im]");
      if (!sig.is_complex()) {
        throw Error(ErrorKind::InvalidArgument, "complex coefficient \"" + key + "\" in a real algebra");
      }
      t.re = expression_of(value[0], bindings);
      t.im = expression_of(value[1], bindings);
    } else {
      t.re = expression_of(value, bindings);
    }
    terms_.push_back(std::move(t));
  }
}

Multivector MultivectorExpr::eval(std::span<const double> x) const {
  Multivector m(sig_);
  for (const auto& t : terms_) {
    m.add(t.blade, t.im ? Complex(t.re.eval(x), t.im->eval(x)) : Complex(t.re.eval(x)));
  }
  return m;
}

Json MultivectorExpr::to_json() const {
  Json j = Json::object();
  for (const auto& t : terms_) {
    const std::string key = blade_name(t.blade);
    j[key] = t.im ? Json::array({t.re.to_string(), t.im->to_string()}) : Json(t.re.to_string());
  }
  return j;
}

std::map<std::string, ScalarExpr> resolve_definitions(const JobSpec& job) {
  std::map<std::string, ScalarExpr> defs;
  for (const auto& [name, src] : job.definitions) {
    if (name.empty() || name.rfind("d_", 0) == 0) {
      throw Error(ErrorKind::InvalidArgument, "definition name '" + name + "' is reserved or empty");
    }
    ScalarExpr e;
    try {
      e = parse_expr(src).substitute(defs);
    } catch (Error& err) {
      throw Error(err.kind(), "definition " + name + ": " + err.what(), err.value());
    }
    defs[name] = e;
  }
  return defs;
}

std::map<std::string, ScalarExpr> derivative_bindings(const std::map<std::string, ScalarExpr>& defs,
                                                      int mu) {
  auto out = defs;
  for (const auto& [name, e] : defs) out["d_" + name] = e.derivative(mu);
  return out;
}

const Grid& require_grid(const JobSpec& job) {
  if (!job.grid) throw Error(ErrorKind::InvalidArgument, "this command needs a grid");
  return *job.grid;
}

namespace {

Field read_checked(const std::filesystem::path& path, const Signature& sig, FieldKind kind) {
  Field f = read_field(path);
  if (f.signature() != sig) throw Error(ErrorKind::SignatureMismatch, path.string() + ": signature differs from the job");
  if (f.kind() != kind) {
    throw Error(ErrorKind::InvalidArgument, path.string() + ": expected a " + std::string(to_string(kind)) + " field");
  }
  return f;
}

void check_variables(int used, int r, const std::string& what) {
  if (used > r) {
    throw Error(ErrorKind::ShapeMismatch,
                what + " uses x" + std::to_string(used) + " but the grid has r = " + std::to_string(r));
  }
}

}  // namespace

Field build_frame(const JobSpec& job, const Exec& exec) {
  const Json& f = job.frame;
  if (f.is_object() && f.contains("file")) return read_checked(f.at("file").get<std::string>(), job.sig, FieldKind::Frame);
  const Grid& grid = require_grid(job);
  const auto defs = resolve_definitions(job);
  const int n = job.sig.n();
  if (f.is_object() && f.contains("generators")) {
    const Json& gens = f.at("generators");
    if (!gens.is_array() || static_cast<int>(gens.size()) != n) {
      throw Error(ErrorKind::ShapeMismatch, "frame needs exactly n = " + std::to_string(n) + " generators");
    }
    std::vector<MultivectorExpr> exprs;
    for (const auto& g : gens) exprs.emplace_back(g, job.sig, defs);
    return sample_frame(grid, job.sig, [&](std::span<const double> x) {
      GeneratorSet h{job.sig, {}};
      for (const auto& e : exprs) h.gens.push_back(e.eval(x));
      return h;
    }, exec);
  }
  if (f.is_object() && f.contains("matrix")) {
    const Json& rows = f.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      throw Error(ErrorKind::ShapeMismatch, "frame matrix must be n x n");
    }
    std::vector<ScalarExpr> entries;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw Error(ErrorKind::ShapeMismatch, "frame matrix must be n x n");
      }
      for (const auto& v : row) {
        entries.push_back(expression_of(v, defs));
        check_variables(entries.back().variables_used(), grid.r, "frame matrix");
      }
    }
    MatrixField y{grid, n, std::vector<Complex>(grid.node_count() * n * n)};
    parallel_for(grid.node_count(), exec, [&](std::size_t begin, std::size_t end) {
      for (std::size_t node = begin; node < end; ++node) {
        const auto x = grid.coordinates(node);
        for (std::size_t k = 0; k < entries.size(); ++k) y.data[node * n * n + k] = entries[k].eval(x);
      }
    });
    return frame_from_matrix(y, job.sig, job.tol.orthogonality, exec);
  }
  throw Error(ErrorKind::InvalidArgument, "frame must have \"generators\", \"matrix\" or \"file\"");
}

Field build_connection(const JobSpec& job, const Exec& exec) {
  const Json& c = job.connection;
  if (c.is_object() && c.contains("file")) {
    return read_checked(c.at("file").get<std::string>(), job.sig, FieldKind::Connection);
  }
  if (c.is_object() && c.contains("components")) {
    const Grid& grid = require_grid(job);
    const Json& comps = c.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != grid.r) {
      throw Error(ErrorKind::ShapeMismatch, "connection needs one component per grid axis");
    }
    const auto defs = resolve_definitions(job);
    std::vector<MultivectorExpr> exprs;
    for (int mu = 0; mu < grid.r; ++mu) exprs.emplace_back(comps[mu], job.sig, derivative_bindings(defs, mu));
    std::vector<MultivectorSampler> samplers;
    for (const auto& e : exprs) samplers.push_back([&e](std::span<const double> x) { return e.eval(x); });
    return sample_connection(grid, job.sig, samplers, exec);
  }
  throw Error(ErrorKind::InvalidArgument, "connection must have \"components\" or \"file\"");
}

GeneratorSet load_generator_set(const Json& j, const Signature& sig) {
  if (j.is_object() && j.contains("file")) return load_generator_set(read_json_file(j.at("file").get<std::string>()), sig);
  if (j.is_object() && j.contains("generators")) {
    const Json& gens = j.at("generators");
    const bool expressions = gens.is_array() && !gens.empty() &&
                             std::none_of(gens.begin(), gens.end(), [](const Json& g) {
                               return !g.is_object() || g.contains("coeffs") || g.contains("p");
                             });
    if (expressions) {
      // Blade-key objects as in job frames; constant expressions only.
      const Signature set_sig = j.contains("signature") ? signature_from_json(j.at("signature")) : sig;
      if (set_sig != sig) throw Error(ErrorKind::SignatureMismatch, "generator set signature differs from the job");
      std::vector<Multivector> values;
      for (const auto& g : gens) values.push_back(MultivectorExpr(g, sig, {}).eval({}));
      return make_generator_set(sig, std::move(values));
    }
    GeneratorSet h = generator_set_from_json(j.contains("signature") ? j : Json{{"signature", signature_to_json(sig)}, {"generators", j.at("generators")}});
    if (h.sig != sig) throw Error(ErrorKind::SignatureMismatch, "generator set signature differs from the job");
    return h;
  }
  if (j.is_string() && j.get<std::string>() == "standard") return GeneratorSet::standard(sig);
  throw Error(ErrorKind::InvalidArgument, "generator set must be {\"generators\": [...]}, {\"file\": path} or \"standard\"");
}

}  // namespace cliff
