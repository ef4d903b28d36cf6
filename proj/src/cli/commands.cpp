#include "cliff/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "cliff/field_io.hpp"
#include "cliff/frame.hpp"
#include "cliff/transport.hpp"

namespace cliff {

namespace {

Exec exec_of(const JobSpec& job) { return Exec{job.threads}; }

PauliOptions pauli_of(const JobSpec& job) {
  PauliOptions p;
  p.relation_tol = job.tol.algebraic;
  p.factor_tol = job.tol.factor;
  return p;
}

TransportOptions transport_of(const JobSpec& job) {
  TransportOptions t;
  t.exec = exec_of(job);
  t.base = job.base;
  t.closed_tol = job.tol.closed;
  t.commute_tol = job.tol.commute;
  t.path_tol = job.tol.path;
  t.seed = job.seed;
  t.pauli = pauli_of(job);
  return t;
}

std::vector<std::size_t> report_nodes(const Grid& g) {
  auto nodes = interior_nodes(g, 2);
  if (nodes.empty()) {
    nodes.resize(g.node_count());
    std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  }
  return nodes;
}

double max_at(const std::vector<double>& v, const std::vector<std::size_t>& nodes) {
  double m = 0.0;
  for (auto node : nodes) m = std::max(m, v[node]);
  return m;
}

void write_artifact(const JobSpec& job, const Field& f, const std::string& name) {
  if (job.out.empty()) return;
  std::filesystem::create_directories(job.out);
  write_field(f, std::filesystem::path(job.out) / (name + (job.format == "bin" ? ".field.bin" : ".field.json")));
}

void write_json_artifact(const JobSpec& job, const Json& j, const std::string& name) {
  if (job.out.empty()) return;
  std::filesystem::create_directories(job.out);
  const auto path = std::filesystem::path(job.out) / name;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

// Records a residual against its tolerance; any failure flips `passed`.
struct Checks {
  Json list = Json::array();
  bool passed = true;

  void add(const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    passed = passed && ok;
    list.push_back(Json{{"name", name}, {"value", value}, {"tolerance", tol}, {"ok", ok}});
  }
};

// Deviation of C from the expected closed form, interior nodes.
double connection_deviation(const JobSpec& job, const Field& c) {
  const auto defs = resolve_definitions(job);
  const Grid& g = c.grid();
  const auto nodes = report_nodes(g);
  double worst = 0.0;
  for (int mu = 0; mu < g.r; ++mu) {
    const MultivectorExpr want(job.expected.at("connection"), job.sig, derivative_bindings(defs, mu));
    for (auto node : nodes) worst = std::max(worst, distance(c.at(node, mu), want.eval(g.coordinates(node))));
  }
  return worst;
}

// S is fixed by S(base) = e; the closed form E is compared as E(x) E(base)^{-1}.
double transport_deviation(const JobSpec& job, const Field& s, std::size_t base) {
  const MultivectorExpr want(job.expected.at("S"), job.sig, resolve_definitions(job));
  const Grid& g = s.grid();
  const Multivector base_inv = inverse(want.eval(g.coordinates(base)));
  double worst = 0.0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    worst = std::max(worst, distance(s.at(node, 0), want.eval(g.coordinates(node)) * base_inv));
  }
  return worst;
}

std::size_t base_node(const JobSpec& job, const Grid& g) {
  if (job.base.empty()) return 0;
  if (static_cast<int>(job.base.size()) != g.r) throw Error(ErrorKind::ShapeMismatch, "base has the wrong length");
  return g.node(job.base);
}

CommandOutput run_check(const JobSpec& job) {
  Checks checks;
  Json report;
  if (!job.sets.is_null()) {
    const auto h = load_generator_set(job.sets.at("h"), job.sig);
    const auto r = check_generators(h, job.tol.algebraic);
    report["max_relation_residual"] = r.max_relation_residual;
    report["pseudoscalar_trace"] = r.pseudoscalar_trace;
    report["trace_condition_ok"] = r.trace_condition_ok;
    checks.add("relation", r.max_relation_residual, job.tol.algebraic);
    checks.add("trace_condition", r.trace_condition_ok ? 0.0 : r.pseudoscalar_trace, job.tol.algebraic);
  } else {
    const Field h = build_frame(job, exec_of(job));
    const auto r = check_frame(h, exec_of(job));
    report["max_relation_residual"] = r.max_relation_residual;
    report["worst_node"] = r.worst_node;
    report["max_pseudoscalar_trace"] = r.max_pseudoscalar_trace;
    checks.add("relation", r.max_relation_residual, job.tol.algebraic);
    if (job.sig.n() % 2 == 1) checks.add("trace_condition", r.max_pseudoscalar_trace, job.tol.algebraic);
  }
  report["checks"] = checks.list;
  return {report, checks.passed ? kExitOk : kExitResidual};
}

CommandOutput run_intertwine(const JobSpec& job) {
  if (job.sets.is_null() || !job.sets.contains("h")) {
    throw Error(ErrorKind::InvalidArgument, "intertwine needs sets.h (and optionally sets.g)");
  }
  const auto h = load_generator_set(job.sets.at("h"), job.sig);
  const auto g = job.sets.contains("g") ? load_generator_set(job.sets.at("g"), job.sig)
                                        : GeneratorSet::standard(job.sig);
  const auto r = intertwiner(h, g, pauli_of(job));
  Json report = intertwiner_result_to_json(r);
  double central = 0.0;
  for (int a = 1; a <= job.sig.n(); ++a) {
    central = std::max(central, norm(commutator(r.T, Multivector::generator(job.sig, a))));
  }
  report["T_commutator_with_generators"] = central;
  Checks checks;
  checks.add("relation", r.residual, job.tol.algebraic);
  report["checks"] = checks.list;
  write_json_artifact(job, report, "intertwiner.json");
  return {report, checks.passed ? kExitOk : kExitResidual};
}

CommandOutput run_connection(const JobSpec& job) {
  const Exec exec = exec_of(job);
  const Field h = build_frame(job, exec);
  const Grid& g = h.grid();
  const std::string method = job.method.empty() ? "general" : job.method;
  Field c = method == "general" ? spin_connection_general(h, exec)
            : method == "grade1"
                ? spin_connection_grade1(h, exec)
                : throw Error(ErrorKind::InvalidArgument, "connection method must be general or grade1");
  const double tol = field_tolerance(job.tol, g);
  const auto nodes = report_nodes(g);
  Checks checks;
  Json report{{"method", method}};
  const double residual = max_at(field_equation_residual(h, c, exec), nodes);
  report["field_equation_residual"] = residual;
  checks.add("field_equation", residual, tol);
  if (g.r >= 2) {
    const Field curv = curvature(c, exec);
    report["max_curvature"] = max_at(component_max_norm(curv), nodes);
    report["max_commutator"] = max_at(connection_commutator_norm(c), nodes);
    write_artifact(job, curv, "curvature");
  }
  if (job.expected.is_object() && job.expected.contains("connection")) {
    const double dev = connection_deviation(job, c);
    report["expected_connection"] = job.expected.at("connection");
    report["connection_deviation"] = dev;
    checks.add("connection_vs_closed_form", dev, tol);
  }
  write_artifact(job, c, "C");
  report["checks"] = checks.list;
  return {report, checks.passed ? kExitOk : kExitResidual};
}

CommandOutput run_transport(const JobSpec& job) {
  const TransportOptions opts = transport_of(job);
  const Field c = build_connection(job, opts.exec);
  const Grid& g = c.grid();
  std::string method = job.method.empty() ? "auto" : job.method;
  if (method == "auto") method = g.r == 1 ? "ode_r1" : "potential";
  const Multivector s0 = Multivector::identity(job.sig);
  Json report;
  std::optional<Field> s;
  switch (transport_method_from_string(method)) {
    case TransportMethod::OdeR1: s = solve_ode_line(c, s0, opts); break;
    case TransportMethod::Potential: {
      auto p = find_potential(c, opts);
      report["max_asymmetry"] = p.max_asymmetry;
      report["path_independence_residual"] = p.path_independence_residual;
      s = transport_potential(p.potential, opts.exec);
      break;
    }
    case TransportMethod::PathOrdered: {
      auto p = transport_path_ordered(c, s0, opts);
      report["path_independence_residual"] = p.path_independence_residual;
      s = std::move(p.s);
      break;
    }
  }
  report["method"] = method;
  const double tol = field_tolerance(job.tol, g);
  Checks checks;
  if (g.shape.size() && *std::min_element(g.shape.begin(), g.shape.end()) >= 5) {
    const double residual = max_at(transport_residual(c, *s, opts.exec), report_nodes(g));
    report["transport_residual"] = residual;
    checks.add("transport_equation", residual, tol);
  }
  if (job.expected.is_object() && job.expected.contains("S")) {
    const double dev = transport_deviation(job, *s, base_node(job, g));
    report["S_deviation"] = dev;
    checks.add("S_vs_closed_form", dev, tol);
  }
  write_artifact(job, *s, "S");
  report["checks"] = checks.list;
  return {report, checks.passed ? kExitOk : kExitResidual};
}

CommandOutput run_solve(const JobSpec& job) {
  const TransportOptions opts = transport_of(job);
  const Field h = build_frame(job, opts.exec);
  const Grid& g = h.grid();
  const auto r = solve_global(h, opts);
  const double tol = field_tolerance(job.tol, g);
  Json report = diagnostics_to_json(r);
  report["K"] = multivector_to_json(r.K);
  report["commutator_flagged"] = r.diagnostics.max_commutator > 1e-3;
  Checks checks;
  checks.add("final_relation", r.diagnostics.final_residual, tol);
  checks.add("constancy", r.diagnostics.constancy_residual, tol);
  if (job.sig.n() % 2 == 1) checks.add("factor", r.diagnostics.factor_defect, job.tol.algebraic);
  if (job.expected.is_object()) {
    if (job.expected.contains("connection")) {
      const double dev = connection_deviation(job, r.connection);
      report["expected_connection"] = job.expected.at("connection");
      report["connection_deviation"] = dev;
      checks.add("connection_vs_closed_form", dev, tol);
    }
    if (job.expected.contains("S")) {
      const double dev = transport_deviation(job, r.S, base_node(job, g));
      report["expected_S"] = job.expected.at("S");
      report["S_deviation"] = dev;
      checks.add("S_vs_closed_form", dev, tol);
    }
  }
  report["checks"] = checks.list;
  if (!job.out.empty()) write_transport_result(r, job.out, job.format == "bin");
  return {report, checks.passed ? kExitOk : kExitResidual};
}

}  // namespace

CommandOutput run_job(const JobSpec& job) {
  CommandOutput out;
  if (job.command == "check") out = run_check(job);
  else if (job.command == "intertwine") out = run_intertwine(job);
  else if (job.command == "connection") out = run_connection(job);
  else if (job.command == "transport") out = run_transport(job);
  else if (job.command == "solve") out = run_solve(job);
  else throw Error(ErrorKind::InvalidArgument, "unknown command '" + job.command + "'");
  out.report["job"] = job_to_json(job);
  out.report["passed"] = out.exit_code == kExitOk;
  return out;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("CLIFF_DATA_DIR"); env && *env) return env;
  return CLIFF_DATA_DIR;
}

JobSpec example_job(int which) {
  if (which < 1 || which > 4) throw Error(ErrorKind::InvalidArgument, "examples are numbered 1 to 4");
  return load_job(data_dir() / "fixtures" / ("example" + std::to_string(which) + ".json"));
}

Json error_to_json(const Error& e) {
  Json j{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"value", e.value()}};
  if (!e.stage().empty()) j["stage"] = e.stage();
  return j;
}

}  // namespace cliff
