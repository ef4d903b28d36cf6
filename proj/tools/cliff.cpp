// cliff: frame fields, spin connections and intertwiners from the command line.
#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include "cliff/commands.hpp"

using namespace cliff;

namespace {

struct Overrides {
  std::string job_file;
  std::string signature;
  std::string field;
  std::string grid;
  std::vector<std::string> defines;
  std::string base;
  std::optional<double> tol_algebraic, tol_field, tol_closed, tol_commute, tol_path, tol_orthogonality;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  // per subcommand
  std::string set_file, h_file, g_file, frame_file, connection_file, method;
  int example = 0;
};

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad index list '" + text + "'");
    }
  }
  return out;
}

void apply(const Overrides& o, JobSpec& job) {
  if (!o.signature.empty()) {
    const auto pq = parse_index_list(o.signature);
    if (pq.size() != 2) throw Error(ErrorKind::InvalidArgument, "--signature takes p,q");
    job.sig = make_signature(static_cast<int>(pq[0]), static_cast<int>(pq[1]), job.sig.field);
  }
  if (!o.field.empty()) {
    if (o.field != "R" && o.field != "C") throw Error(ErrorKind::InvalidArgument, "--field takes R or C");
    job.sig = make_signature(job.sig.p, job.sig.q, o.field == "C" ? ScalarField::Complex : ScalarField::Real);
  }
  if (!o.grid.empty()) job.grid = parse_grid_spec(o.grid);
  for (const auto& d : o.defines) {
    const auto eq = d.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--define takes name=expr");
    const std::string name = d.substr(0, eq);
    const std::string expr = d.substr(eq + 1);
    auto it = std::find_if(job.definitions.begin(), job.definitions.end(),
                           [&](const auto& kv) { return kv.first == name; });
    if (it != job.definitions.end()) {
      it->second = expr;
    } else {
      job.definitions.emplace_back(name, expr);
    }
  }
  if (!o.base.empty()) job.base = parse_index_list(o.base);
  if (o.tol_algebraic) job.tol.algebraic = *o.tol_algebraic;
  if (o.tol_field) job.tol.field = *o.tol_field;
  if (o.tol_closed) job.tol.closed = *o.tol_closed;
  if (o.tol_commute) job.tol.commute = *o.tol_commute;
  if (o.tol_path) job.tol.path = *o.tol_path;
  if (o.tol_orthogonality) job.tol.orthogonality = *o.tol_orthogonality;
  if (o.seed) job.seed = *o.seed;
  if (o.threads) job.threads = *o.threads;
  if (o.out) job.out = *o.out;
  if (o.format) job.format = *o.format;
  if (!o.method.empty()) job.method = o.method;
  if (!o.frame_file.empty()) job.frame = Json{{"file", o.frame_file}};
  if (!o.connection_file.empty()) job.connection = Json{{"file", o.connection_file}};
  if (!o.set_file.empty()) job.sets["h"] = Json{{"file", o.set_file}};
  if (!o.h_file.empty()) job.sets["h"] = Json{{"file", o.h_file}};
  if (!o.g_file.empty()) job.sets["g"] = Json{{"file", o.g_file}};
}

void print_error(const Json& j) { std::cerr << j.dump() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford frame fields, spin connections and intertwiners"};
  app.require_subcommand(1);
  Overrides o;

  app.add_option("--job", o.job_file, "JSON job file; flags override its entries");
  app.add_option("--signature", o.signature, "p,q");
  app.add_option("--field", o.field, "scalar field, R or C")->check(CLI::IsMember({"R", "C"}));
  app.add_option("--grid", o.grid, "\"shape;origin;spacing\", comma separated per axis");
  app.add_option("--define", o.defines, "name=expr, repeatable");
  app.add_option("--base", o.base, "base node index, comma separated");
  app.add_option("--tol-algebraic", o.tol_algebraic, "relation tolerance (default 1e-9)");
  app.add_option("--tol-field", o.tol_field, "field residual tolerance (default h_max^2)");
  app.add_option("--tol-closed", o.tol_closed, "relative closedness tolerance (default 1e-2)");
  app.add_option("--tol-commute", o.tol_commute, "relative [P, C] tolerance (default 1e-2)");
  app.add_option("--tol-path", o.tol_path, "path-independence tolerance (default 100 h^2 / 100 h^4)");
  app.add_option("--tol-orthogonality", o.tol_orthogonality, "matrix frame tolerance (default 1e-9)");
  app.add_option("--seed", o.seed, "seed for sampled verification paths");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "directory for artifacts");
  app.add_option("--format", o.format, "artifact format, json or bin")->check(CLI::IsMember({"json", "bin"}));

  auto* check = app.add_subcommand("check", "generator relations and trace condition of a set or frame field");
  check->add_option("--set", o.set_file, "generator-set JSON");
  check->add_option("--frame", o.frame_file, "frame field file");

  auto* intertwine = app.add_subcommand("intertwine", "algebraic intertwiner between two constant sets");
  intertwine->add_option("--h-set", o.h_file, "generator-set JSON")->required();
  intertwine->add_option("--g-set", o.g_file, "generator-set JSON (default: standard)");

  auto* connection = app.add_subcommand("connection", "spin connection and curvature of a frame field");
  connection->add_option("--frame", o.frame_file, "frame field file");
  connection->add_option("--method", o.method, "general or grade1")->check(CLI::IsMember({"general", "grade1"}));

  auto* transport = app.add_subcommand("transport", "solve d_mu S = C_mu S for a given connection");
  transport->add_option("--connection", o.connection_file, "connection field file");
  transport->add_option("--method", o.method, "auto, ode_r1, potential or path_ordered")
      ->check(CLI::IsMember({"auto", "ode_r1", "potential", "path_ordered"}));

  auto* solve = app.add_subcommand("solve", "full pipeline: connection, transport, K, T = S K");
  solve->add_option("--frame", o.frame_file, "frame field file");

  auto* example = app.add_subcommand("example", "built-in fixtures 1 to 4");
  example->add_option("which", o.example, "example number")->required()->check(CLI::Range(1, 4));

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(Json{{"error", "InvalidArgument"}, {"message", e.what()}});
    return kExitError;
  }

  try {
    JobSpec job;
    if (example->parsed()) {
      job = example_job(o.example);
    } else if (!o.job_file.empty()) {
      job = load_job(o.job_file);
    }
    for (auto* sub : {check, intertwine, connection, transport, solve}) {
      if (sub->parsed()) job.command = sub->get_name();
    }
    apply(o, job);
    const auto out = run_job(job);
    std::cout << out.report.dump(2) << '\n';
    return out.exit_code;
  } catch (const Error& e) {
    print_error(error_to_json(e));
  } catch (const std::exception& e) {
    print_error(Json{{"error", "InternalError"}, {"message", e.what()}});
  }
  return kExitError;
}
