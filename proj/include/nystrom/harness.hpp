#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nystrom/geometry.hpp"

namespace nystrom {

/// Harmonic functions with closed-form gradients used as test solutions.
class ExactSolution {
 public:
  enum class Kind { LogPair, ArctanPair, Dipole };

  /// log|P - q1| - log|P - q2|.
  static ExactSolution log_pair(Vec2 q1, Vec2 q2);
  /// atan((y - 0.2)/(x - 0.8)) - atan(y/(x - 0.8)).
  static ExactSolution arctan_pair();
  /// (x^2 - y^2) / (x^2 + y^2)^2.
  static ExactSolution dipole();

  /// "log_pair" (needs two points), "arctan_pair", "dipole".
  static ExactSolution from_id(const std::string& id, const std::vector<Vec2>& points);

  Kind kind() const { return kind_; }
  std::string id() const;
  const std::vector<Vec2>& points() const { return points_; }

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;

  /// Points where u or its continuation is singular. All must lie inside D.
  std::vector<Vec2> singular_points() const;

 private:
  Kind kind_ = Kind::Dipole;
  std::vector<Vec2> points_;
};

/// Everything needed to reproduce one error/condition table.
struct RunConfig {
  std::string domain = "heart";   // heart, teardrop, boomerang, triangle, circle, polygon
  double phi = 0.0;               // corner angle for single-corner families
  std::vector<Vec2> vertices;     // CCW vertices when domain == "polygon"
  std::string solution = "log_pair";
  std::vector<Vec2> solution_points;  // Q1, Q2 for log_pair
  std::vector<std::pair<int, int>> orders = {{8, 32}};
  double c = 100.0;
  double eps = 1e-3;
  double delta = 1e-7;
  int rhs_M = 0;              // > 0 fixes M; otherwise M = rhs_M_ratio * nu
  double rhs_M_ratio = 0.5;
  int outer_N = 0;            // > 0 fixes N; otherwise N = outer_N_ratio * nu
  double outer_N_ratio = 0.5;
  std::vector<Vec2> points;
  std::string out;

  int moments_for(int nu) const;
  int outer_for(int nu) const;
};

/// Built-in configurations for the four benchmark domains, sweeping
/// (mu, nu) from (8, 32) to (128, 512).
RunConfig example_config(const std::string& name);

/// Names accepted by example_config.
std::vector<std::string> example_names();

Boundary make_domain(const RunConfig& config);
ExactSolution make_solution(const RunConfig& config);

/// Throws ParameterError: unknown names, bad orders, singular points of the
/// exact solution outside D, evaluation points not in the exterior.
void validate_config(const RunConfig& config);

/// Keys mirror the RunConfig fields. An "example" key starts from that preset;
/// otherwise keys are applied on top of `base`. Unknown keys are rejected.
RunConfig config_from_json(const std::string& text, const RunConfig& base = RunConfig{});
std::string config_to_json(const RunConfig& config);

/// Reads "x y" or "x,y" per line; blank lines and lines starting with # skipped.
std::vector<Vec2> read_points(std::istream& in);

struct TableRow {
  int mu = 0;
  int nu = 0;
  std::vector<double> errors;  // |u - u_{m,N}| per evaluation point
  std::vector<double> approx;  // u_{m,N} per evaluation point
  double cond = 0.0;
  int dimension = 0;
  double seconds = 0.0;
  bool ok = false;
  std::string diagnostic;  // set when the row failed
  bool numerical_failure = false;
};

/// One row per (mu, nu). Stage failures are recorded in the row; the sweep
/// continues.
std::vector<TableRow> run_example(const RunConfig& config);

/// Single (mu, nu) run.
TableRow run_row(const RunConfig& config, int mu, int nu);

struct AngleRow {
  double phi = 0.0;
  double cond = 0.0;
  int dimension = 0;
  bool ok = false;
  std::string diagnostic;
  bool numerical_failure = false;
};

/// cond(A_m) for each angle of a single-corner family.
std::vector<AngleRow> angle_sweep(const std::string& family, const std::vector<double>& phis,
                                  int mu, int nu, double c, double eps, double delta);

/// n uniformly spaced angles strictly inside the family's valid range:
/// lo + (k + 1) (hi - lo) / (n + 1).
std::vector<double> angle_grid(const std::string& family, int n);

/// Header mu,nu,err_p1,...,err_pK,cond. Failed rows print nan.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);
void write_angle_csv(std::ostream& out, const std::vector<AngleRow>& rows);

/// Parses a table written by write_table_csv.
std::vector<TableRow> read_table_csv(std::istream& in);

}  // namespace nystrom
