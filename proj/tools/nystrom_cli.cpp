// Command-line driver: single solves, error tables and angle sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nystrom/errors.hpp"
#include "nystrom/harness.hpp"

namespace {

using namespace nystrom;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::optional<std::string> example;
  std::optional<double> phi;
  std::optional<int> mu;
  std::optional<int> nu;
  std::optional<double> c;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<int> rhs_M;
  std::optional<int> outer_N;
  std::optional<std::string> points;
  std::optional<std::string> config;
  std::optional<std::string> out;
  int angles = 9;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--example", o.example, "Benchmark domain")
      ->check(CLI::IsMember({"heart", "teardrop", "boomerang", "triangle"}));
  cmd->add_option("--phi", o.phi, "Corner angle (radians)");
  cmd->add_option("--mu", o.mu, "Radau order on corner pieces");
  cmd->add_option("--nu", o.nu, "Radau order on central pieces");
  cmd->add_option("--c", o.c, "Blend constant c");
  cmd->add_option("--epsilon", o.eps, "Blend exponent epsilon");
  cmd->add_option("--delta", o.delta, "Tangent deviation bound for corner pieces");
  cmd->add_option("--out", o.out, "Write CSV here instead of stdout");
}

void add_run(CLI::App* cmd, Options& o) {
  add_common(cmd, o);
  cmd->add_option("--rhs-M", o.rhs_M, "Gauss-Legendre size for the right-hand side");
  cmd->add_option("--outer-N", o.outer_N, "Gauss-Legendre size for the exterior single layer");
  cmd->add_option("--points", o.points, "File of evaluation points, one 'x y' per line");
  cmd->add_option("--config", o.config, "JSON run configuration");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig build_config(const Options& o, bool single_row) {
  RunConfig cfg = o.example ? example_config(*o.example) : RunConfig{};
  if (o.config) cfg = config_from_json(slurp(*o.config), cfg);
  if (o.phi) cfg.phi = *o.phi;
  if (o.c) cfg.c = *o.c;
  if (o.eps) cfg.eps = *o.eps;
  if (o.delta) cfg.delta = *o.delta;
  if (o.rhs_M) cfg.rhs_M = *o.rhs_M;
  if (o.outer_N) cfg.outer_N = *o.outer_N;
  if (o.out) cfg.out = *o.out;
  if (o.points) {
    std::ifstream in(*o.points);
    if (!in) throw ParameterError("cannot open points file '" + *o.points + "'");
    cfg.points = read_points(in);
  }
  if (o.mu || o.nu) {
    if (!(o.mu && o.nu)) throw ParameterError("--mu and --nu must be given together");
    cfg.orders = {{*o.mu, *o.nu}};
  }
  if (single_row && cfg.orders.size() != 1) {
    throw ParameterError("solve runs one (mu, nu) pair; pass --mu and --nu");
  }
  validate_config(cfg);
  return cfg;
}

template <class Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  write(out);
}

int report_rows(const std::vector<TableRow>& rows) {
  int status = 0;
  for (const TableRow& r : rows) {
    if (r.ok) continue;
    std::cerr << "row mu=" << r.mu << " nu=" << r.nu << " failed: " << r.diagnostic << '\n';
    status = r.numerical_failure ? kExitNumerical : kExitConfig;
  }
  return status;
}

int run_solve(const Options& o) {
  const RunConfig cfg = build_config(o, true);
  const auto [mu, nu] = cfg.orders.front();
  const TableRow row = run_row(cfg, mu, nu);
  if (row.ok) {
    const ExactSolution exact = make_solution(cfg);
    std::fprintf(stderr, "mu=%d nu=%d dim=%d cond=%.6g M=%d N=%d (%.2fs)\n", mu, nu,
                 row.dimension, row.cond, cfg.moments_for(nu), cfg.outer_for(nu), row.seconds);
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
      const Vec2 p = cfg.points[k];
      std::fprintf(stderr, "  (%g, %g)  u=% .12e  approx=% .12e  err=%.3e\n", p.x, p.y,
                   exact.value(p), row.approx[k], row.errors[k]);
    }
  }
  emit(cfg.out, [&](std::ostream& out) { write_table_csv(out, {row}); });
  return report_rows({row});
}

int run_table(const Options& o) {
  const RunConfig cfg = build_config(o, false);
  const std::vector<TableRow> rows = run_example(cfg);
  emit(cfg.out, [&](std::ostream& out) { write_table_csv(out, rows); });
  return report_rows(rows);
}

int run_angle_sweep(const Options& o) {
  if (!o.example) throw ParameterError("angle-sweep needs --example");
  if (*o.example == "triangle") throw ParameterError("the triangle has no angle parameter");
  const RunConfig base = example_config(*o.example);
  const int mu = o.mu.value_or(16);
  const int nu = o.nu.value_or(64);
  std::vector<double> phis =
      o.phi ? std::vector<double>{*o.phi} : angle_grid(*o.example, o.angles);
  const std::vector<AngleRow> rows =
      angle_sweep(*o.example, phis, mu, nu, o.c.value_or(base.c), o.eps.value_or(base.eps),
                  o.delta.value_or(base.delta));
  emit(o.out.value_or(""), [&](std::ostream& out) { write_angle_csv(out, rows); });
  int failed = 0;
  bool numerical = false;
  for (const AngleRow& r : rows) {
    if (r.ok) continue;
    ++failed;
    numerical = numerical || r.numerical_failure;
    std::cerr << "phi=" << r.phi << " failed: " << r.diagnostic << '\n';
  }
  if (failed < static_cast<int>(rows.size())) return 0;
  return numerical ? kExitNumerical : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior Neumann solver for planar domains with corners"};
  app.require_subcommand(1);
  Options solve_opts, table_opts, sweep_opts;
  CLI::App* solve = app.add_subcommand("solve", "Solve once and report pointwise errors");
  add_run(solve, solve_opts);
  CLI::App* table = app.add_subcommand("table", "Error and condition table over (mu, nu)");
  add_run(table, table_opts);
  CLI::App* sweep = app.add_subcommand("angle-sweep", "Condition number across corner angles");
  add_common(sweep, sweep_opts);
  sweep->add_option("--angles", sweep_opts.angles, "Number of interior grid angles")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (solve->parsed()) return run_solve(solve_opts);
    if (table->parsed()) return run_table(table_opts);
    return run_angle_sweep(sweep_opts);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
