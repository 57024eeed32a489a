#include "nystrom/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "nystrom/assembly.hpp"
#include "nystrom/errors.hpp"
#include "nystrom/solve.hpp"

namespace nystrom {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Corner of the pole segment of the arctan pair.
constexpr Vec2 kArctanPole{0.8, 0.2};

}  // namespace

ExactSolution ExactSolution::log_pair(Vec2 q1, Vec2 q2) {
  if (q1 == q2) throw ParameterError("log_pair needs two distinct points");
  ExactSolution s;
  s.kind_ = Kind::LogPair;
  s.points_ = {q1, q2};
  return s;
}

ExactSolution ExactSolution::arctan_pair() {
  ExactSolution s;
  s.kind_ = Kind::ArctanPair;
  return s;
}

ExactSolution ExactSolution::dipole() {
  ExactSolution s;
  s.kind_ = Kind::Dipole;
  return s;
}

ExactSolution ExactSolution::from_id(const std::string& id, const std::vector<Vec2>& points) {
  if (id == "log_pair") {
    if (points.size() != 2) throw ParameterError("log_pair needs exactly two solution points");
    return log_pair(points[0], points[1]);
  }
  if (!points.empty()) throw ParameterError("solution '" + id + "' takes no points");
  if (id == "arctan_pair") return arctan_pair();
  if (id == "dipole") return dipole();
  throw ParameterError("unknown exact solution '" + id + "'");
}

std::string ExactSolution::id() const {
  switch (kind_) {
    case Kind::LogPair: return "log_pair";
    case Kind::ArctanPair: return "arctan_pair";
    case Kind::Dipole: return "dipole";
  }
  return "";
}

double ExactSolution::value(Vec2 p) const {
  switch (kind_) {
    case Kind::LogPair:
      return std::log(norm(p - points_[0])) - std::log(norm(p - points_[1]));
    case Kind::ArctanPair: {
      const double x = p.x - kArctanPole.x;
      return std::atan((p.y - kArctanPole.y) / x) - std::atan(p.y / x);
    }
    case Kind::Dipole: {
      const double r2 = dot(p, p);
      return (p.x * p.x - p.y * p.y) / (r2 * r2);
    }
  }
  return kNaN;
}

Vec2 ExactSolution::gradient(Vec2 p) const {
  switch (kind_) {
    case Kind::LogPair: {
      const Vec2 a = p - points_[0];
      const Vec2 b = p - points_[1];
      return (1.0 / dot(a, a)) * a - (1.0 / dot(b, b)) * b;
    }
    case Kind::ArctanPair: {
      const double x = p.x - kArctanPole.x;
      const double y1 = p.y - kArctanPole.y;
      const double r1 = x * x + y1 * y1;
      const double r2 = x * x + p.y * p.y;
      return {-y1 / r1 + p.y / r2, x / r1 - x / r2};
    }
    case Kind::Dipole: {
      const double x = p.x, y = p.y;
      const double r2 = x * x + y * y;
      const double r6 = r2 * r2 * r2;
      const double d = x * x - y * y;
      return {(2.0 * x * r2 - 4.0 * x * d) / r6, (-2.0 * y * r2 - 4.0 * y * d) / r6};
    }
  }
  return {kNaN, kNaN};
}

std::vector<Vec2> ExactSolution::singular_points() const {
  switch (kind_) {
    case Kind::LogPair: return points_;
    case Kind::ArctanPair: {
      // Branch cut between the two poles.
      std::vector<Vec2> out;
      for (int k = 0; k <= 10; ++k) out.push_back({kArctanPole.x, kArctanPole.y * k / 10.0});
      return out;
    }
    case Kind::Dipole: return {{0.0, 0.0}};
  }
  return {};
}

int RunConfig::moments_for(int nu) const {
  if (rhs_M > 0) return rhs_M;
  return std::max(1, static_cast<int>(std::lround(rhs_M_ratio * nu)));
}

int RunConfig::outer_for(int nu) const {
  if (outer_N > 0) return outer_N;
  return std::max(1, static_cast<int>(std::lround(outer_N_ratio * nu)));
}

std::vector<std::string> example_names() { return {"heart", "teardrop", "boomerang", "triangle"}; }

RunConfig example_config(const std::string& name) {
  RunConfig cfg;
  cfg.domain = name;
  cfg.orders = {{8, 32}, {16, 64}, {32, 128}, {64, 256}, {128, 512}};
  cfg.eps = 1e-3;
  cfg.c = 100.0;
  cfg.points = {{-0.1, 0.0}, {3.0, 3.0}, {-40.0, -50.0}, {100.0, -100.0}};
  if (name == "heart") {
    cfg.phi = 5.0 * kPi / 3.0;
    cfg.solution = "log_pair";
    cfg.solution_points = {{0.5, 0.0}, {0.2, 0.0}};
    cfg.c = 300.0;
    cfg.delta = 3.87e-7;
  } else if (name == "teardrop") {
    cfg.phi = 2.0 * kPi / 3.0;
    cfg.solution = "arctan_pair";
    cfg.delta = 5.37e-11;
  } else if (name == "boomerang") {
    cfg.phi = 1.5 * kPi;
    cfg.solution = "log_pair";
    cfg.solution_points = {{-0.1, 0.0}, {-0.2, 0.0}};
    cfg.delta = 5.16e-8;
    cfg.outer_N_ratio = 1.0;
    cfg.points[0] = {0.2, 0.0};
  } else if (name == "triangle") {
    cfg.solution = "dipole";
    cfg.eps = 1e-6;
    cfg.delta = 1e-7;
    cfg.points = {{-1.5, 1.5}, {2.0, 2.0}, {10.0, 20.0}, {100.0, 100.0}};
  } else {
    throw ParameterError("unknown example '" + name + "'");
  }
  return cfg;
}

Boundary make_domain(const RunConfig& config) {
  if (config.domain == "polygon") return make_polygon(config.vertices);
  if (config.domain == "triangle" || config.domain == "circle") {
    return make_example_domain(config.domain, 0.0);
  }
  return make_example_domain(config.domain, config.phi);
}

ExactSolution make_solution(const RunConfig& config) {
  return ExactSolution::from_id(config.solution, config.solution_points);
}

void validate_config(const RunConfig& config) {
  const Boundary boundary = make_domain(config);
  const ExactSolution exact = make_solution(config);
  if (config.orders.empty()) throw ParameterError("no (mu, nu) pairs given");
  for (const auto& [mu, nu] : config.orders) {
    DiscretizationParams{mu, nu, config.c, config.eps}.validate(boundary.has_corners());
  }
  if (!(config.delta > 0.0)) throw ParameterError("delta must be positive");
  if (config.rhs_M < 0 || config.outer_N < 0 || !(config.rhs_M_ratio > 0.0) ||
      !(config.outer_N_ratio > 0.0)) {
    throw ParameterError("rule sizes M and N must be positive");
  }
  for (const auto& [mu, nu] : config.orders) {
    const int m = config.moments_for(nu);
    if (m > kMaxMoments) {
      throw ParameterError("rhs rule size M=" + std::to_string(m) + " exceeds " +
                           std::to_string(kMaxMoments));
    }
    if (config.outer_for(nu) > kMaxRuleOrder) throw ParameterError("outer rule size N too large");
  }
  const ExteriorTest test(boundary);
  for (Vec2 q : exact.singular_points()) {
    if (test.exterior(q, 0.0) || test.distance(q) <= 1e-9) {
      std::ostringstream msg;
      msg << "singular point (" << q.x << ", " << q.y << ") of " << exact.id()
          << " is not inside the domain";
      throw ParameterError(msg.str());
    }
  }
  if (config.points.empty()) throw ParameterError("no evaluation points given");
  for (Vec2 p : config.points) {
    if (!test.exterior(p)) {
      std::ostringstream msg;
      msg << "evaluation point (" << p.x << ", " << p.y << ") is not in the exterior domain";
      throw ParameterError(msg.str());
    }
  }
}

namespace {

using nlohmann::json;

json points_json(const std::vector<Vec2>& pts) {
  json out = json::array();
  for (Vec2 p : pts) out.push_back({p.x, p.y});
  return out;
}

std::vector<Vec2> points_from(const json& j, const char* key) {
  if (!j.is_array()) throw ParameterError(std::string(key) + " must be an array of [x, y]");
  std::vector<Vec2> out;
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw ParameterError(std::string(key) + " entries must be [x, y]");
    }
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

}  // namespace

RunConfig config_from_json(const std::string& text, const RunConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("config must be a JSON object");

  RunConfig cfg = base;
  if (j.contains("example")) cfg = example_config(j.at("example").get<std::string>());
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "example") continue;
      if (key == "domain") cfg.domain = v.get<std::string>();
      else if (key == "phi") cfg.phi = v.get<double>();
      else if (key == "vertices") cfg.vertices = points_from(v, "vertices");
      else if (key == "solution") cfg.solution = v.get<std::string>();
      else if (key == "solution_points") cfg.solution_points = points_from(v, "solution_points");
      else if (key == "orders") {
        cfg.orders.clear();
        for (const json& o : v) {
          if (!o.is_array() || o.size() != 2) throw ParameterError("orders entries must be [mu, nu]");
          cfg.orders.emplace_back(o[0].get<int>(), o[1].get<int>());
        }
      } else if (key == "c") cfg.c = v.get<double>();
      else if (key == "eps") cfg.eps = v.get<double>();
      else if (key == "delta") cfg.delta = v.get<double>();
      else if (key == "rhs_M") cfg.rhs_M = v.get<int>();
      else if (key == "rhs_M_ratio") cfg.rhs_M_ratio = v.get<double>();
      else if (key == "outer_N") cfg.outer_N = v.get<int>();
      else if (key == "outer_N_ratio") cfg.outer_N_ratio = v.get<double>();
      else if (key == "points") cfg.points = points_from(v, "points");
      else if (key == "out") cfg.out = v.get<std::string>();
      else throw ParameterError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config has a field of the wrong type: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["domain"] = cfg.domain;
  j["phi"] = cfg.phi;
  j["vertices"] = points_json(cfg.vertices);
  j["solution"] = cfg.solution;
  j["solution_points"] = points_json(cfg.solution_points);
  json orders = json::array();
  for (const auto& [mu, nu] : cfg.orders) orders.push_back({mu, nu});
  j["orders"] = orders;
  j["c"] = cfg.c;
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["rhs_M"] = cfg.rhs_M;
  j["rhs_M_ratio"] = cfg.rhs_M_ratio;
  j["outer_N"] = cfg.outer_N;
  j["outer_N_ratio"] = cfg.outer_N_ratio;
  j["points"] = points_json(cfg.points);
  j["out"] = cfg.out;
  return j.dump(2);
}

std::vector<Vec2> read_points(std::istream& in) {
  std::vector<Vec2> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    Vec2 p;
    std::string extra;
    if (!(fields >> p.x >> p.y) || (fields >> extra)) {
      throw ParameterError("points file line " + std::to_string(number) + ": expected 'x y'");
    }
    out.push_back(p);
  }
  return out;
}

TableRow run_row(const RunConfig& config, int mu, int nu) {
  const auto start = std::chrono::steady_clock::now();
  TableRow row;
  row.mu = mu;
  row.nu = nu;
  row.errors.assign(config.points.size(), kNaN);
  row.approx.assign(config.points.size(), kNaN);
  row.cond = kNaN;
  try {
    const Boundary boundary = make_domain(config);
    const ExactSolution exact = make_solution(config);
    auto dec = std::make_shared<const Decomposition>(decompose(boundary, config.delta));
    const DiscretizationParams params{mu, nu, config.c, config.eps};
    const NeumannDatum datum =
        NeumannDatum::from_gradient([exact](Vec2 p) { return exact.gradient(p); });
    const Solved solved =
        solve_neumann(dec, params, datum, config.moments_for(nu), config.outer_for(nu));
    row.dimension = static_cast<int>(solved.system.matrix.rows());
    row.cond = cond_inf(solved.system.matrix);
    for (std::size_t k = 0; k < config.points.size(); ++k) {
      const Vec2 p = config.points[k];
      row.approx[k] = solved.field(p.x, p.y);
      row.errors[k] = std::abs(exact.value(p) - row.approx[k]);
    }
    row.ok = true;
  } catch (const NumericalError& e) {
    row.diagnostic = e.what();
    row.numerical_failure = true;
  } catch (const std::exception& e) {
    row.diagnostic = e.what();
  }
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<TableRow> run_example(const RunConfig& config) {
  std::vector<TableRow> rows;
  for (const auto& [mu, nu] : config.orders) rows.push_back(run_row(config, mu, nu));
  return rows;
}

std::vector<double> angle_grid(const std::string& family, int n) {
  if (n < 1) throw ParameterError("angle grid needs at least one point");
  const auto [lo, hi] = phi_range(family);
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(lo + (k + 1) * (hi - lo) / (n + 1));
  return out;
}

std::vector<AngleRow> angle_sweep(const std::string& family, const std::vector<double>& phis,
                                  int mu, int nu, double c, double eps, double delta) {
  phi_range(family);  // rejects families without an angle
  std::vector<AngleRow> rows;
  for (double phi : phis) {
    AngleRow row;
    row.phi = phi;
    row.cond = kNaN;
    try {
      const Decomposition dec = decompose(make_example_domain(family, phi), delta);
      const Assembler assembler(dec, DiscretizationParams{mu, nu, c, eps});
      const Eigen::MatrixXd a = assembler.matrix();
      row.dimension = static_cast<int>(a.rows());
      row.cond = cond_inf(a);
      row.ok = true;
    } catch (const NumericalError& e) {
      row.diagnostic = e.what();
      row.numerical_failure = true;
    } catch (const std::exception& e) {
      row.diagnostic = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  std::size_t columns = 0;
  for (const TableRow& r : rows) columns = std::max(columns, r.errors.size());
  out << "mu,nu";
  for (std::size_t k = 0; k < columns; ++k) out << ",err_p" << k + 1;
  out << ",cond\n";
  for (const TableRow& r : rows) {
    out << r.mu << ',' << r.nu;
    for (std::size_t k = 0; k < columns; ++k) {
      out << ',' << format_number(k < r.errors.size() ? r.errors[k] : kNaN);
    }
    out << ',' << format_number(r.cond) << '\n';
  }
}

void write_angle_csv(std::ostream& out, const std::vector<AngleRow>& rows) {
  out << "phi,cond\n";
  for (const AngleRow& r : rows) out << format_number(r.phi) << ',' << format_number(r.cond) << '\n';
}

std::vector<TableRow> read_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("mu,nu,", 0) != 0) {
    throw ParameterError("table csv must start with a mu,nu,... header");
  }
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw ParameterError("table csv row too short: " + line);
    TableRow r;
    r.mu = std::stoi(cells[0]);
    r.nu = std::stoi(cells[1]);
    for (std::size_t k = 2; k + 1 < cells.size(); ++k) r.errors.push_back(std::stod(cells[k]));
    r.cond = std::stod(cells.back());
    r.ok = true;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace nystrom
