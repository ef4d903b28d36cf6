#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cliff/expr.hpp"
#include "cliff/field.hpp"
#include "cliff/json_io.hpp"
#include "cliff/pauli.hpp"

namespace cliff {

// "shape;origin;spacing", comma separated per axis; origin and spacing
// entries are constant expressions ("65,65;0,0;2*pi/64,2*pi/64").
Grid parse_grid_spec(std::string_view text);

// Either {"shape","origin","spacing"} or {"shape","lower","upper"}; numbers or
// constant expression strings.
Grid grid_from_job_json(const Json& j);

struct Tolerances {
  double algebraic = 1e-9;
  // Field residuals (connection, transport, final relation, constancy);
  // unset means h_max^2 of the job grid.
  std::optional<double> field;
  double closed = 1e-2;
  double commute = 1e-2;
  std::optional<double> path;
  double orthogonality = 1e-9;
  double factor = 1e-6;
};

// Resolved field tolerance.
double field_tolerance(const Tolerances& tol, const Grid& grid);

struct JobSpec {
  std::string command;
  std::string title;
  Signature sig{2, 0};
  std::optional<Grid> grid;
  // Evaluated in order; later entries may use earlier names.
  std::vector<std::pair<std::string, std::string>> definitions;
  // {"generators": [mv-expr, ...]} | {"matrix": [[expr, ...], ...]} | {"file": path}
  Json frame;
  // {"components": [mv-expr per axis]} | {"file": path}
  Json connection;
  // check / intertwine: {"h": set, "g": set}; a set is generator-set JSON or {"file": path}
  Json sets;
  // Closed forms to compare against: {"connection": mv-expr, "S": mv-expr};
  // inside "connection", d_<name> is the derivative of definition <name>
  // along the axis being compared.
  Json expected;
  // connection: general | grade1; transport: auto | ode_r1 | potential | path_ordered
  std::string method;
  std::vector<std::size_t> base;
  Tolerances tol;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string format = "json";
};

JobSpec job_from_json(const Json& j);
// Defaults materialised; the grid is written as shape/origin/spacing.
Json job_to_json(const JobSpec& job);
JobSpec load_job(const std::filesystem::path& path);

// A multivector whose coefficients are expressions:
// {"": "cos(phi/2)", "12": "-sin(phi/2)"}; complex algebras also accept
// ["re expr", "im expr"]. Numbers are allowed in place of strings.
class MultivectorExpr {
 public:
  MultivectorExpr(const Json& j, const Signature& sig,
                  const std::map<std::string, ScalarExpr>& bindings);

  Multivector eval(std::span<const double> x) const;
  Json to_json() const;

 private:
  struct Term {
    Blade blade;
    ScalarExpr re;
    std::optional<ScalarExpr> im;
  };
  Signature sig_;
  std::vector<Term> terms_;
};

// Definitions with earlier names substituted into later ones.
std::map<std::string, ScalarExpr> resolve_definitions(const JobSpec& job);

// The bindings above plus d_<name> for the derivative along axis mu.
std::map<std::string, ScalarExpr> derivative_bindings(const std::map<std::string, ScalarExpr>& defs,
                                                      int mu);

const Grid& require_grid(const JobSpec& job);
Field build_frame(const JobSpec& job, const Exec& exec = {});
Field build_connection(const JobSpec& job, const Exec& exec = {});
GeneratorSet load_generator_set(const Json& j, const Signature& sig);

}  // namespace cliff
