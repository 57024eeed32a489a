#include "nystrom/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nystrom/errors.hpp"

namespace nystrom {
namespace {

constexpr double kPi = std::numbers::pi;

double inf_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

Eigen::PartialPivLU<Eigen::MatrixXd> factor(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ParameterError("matrix must be square");
  if (!a.allFinite()) throw NumericalError("matrix has non-finite entries");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double tol = 1e-14 * inf_norm(a);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    if (!(std::abs(packed(k, k)) >= tol)) {
      throw NumericalError("matrix is numerically singular (pivot " + std::to_string(k) + ")");
    }
  }
  return lu;
}

}  // namespace

DenseSolution solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (b.size() != a.rows()) throw ParameterError("right-hand side size mismatch");
  const auto lu = factor(a);
  DenseSolution out;
  out.x = lu.solve(b);
  out.residual = (a * out.x - b).lpNorm<Eigen::Infinity>();
  const double bound =
      1e-10 * (inf_norm(a) * out.x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  if (!(out.residual <= bound)) {
    throw NumericalError("solve residual " + std::to_string(out.residual) +
                         " exceeds bound " + std::to_string(bound));
  }
  return out;
}

double cond_inf(const Eigen::MatrixXd& a) {
  const auto lu = factor(a);
  return inf_norm(a) * inf_norm(lu.inverse());
}

ExteriorTest::ExteriorTest(const Boundary& boundary, int samples) : boundary_(boundary) {
  per_arc_ = std::max(4, samples / std::max(1, boundary.arc_count()));
  polygon_ = boundary.sample(per_arc_);
}

double ExteriorTest::distance(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t nearest = 0;
  double along = 0.0;
  for (std::size_t j = 0; j < polygon_.size(); ++j) {
    const Vec2 a = polygon_[j];
    const Vec2 b = polygon_[(j + 1) % polygon_.size()];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const double d = norm(p - (a + t * ab));
    if (d < best) {
      best = d;
      nearest = j;
      along = t;
    }
  }
  // Minimize |sigma_k(t) - p|^2 over the segment's parameter range.
  const int k = static_cast<int>(nearest) / per_arc_;
  const double h = 1.0 / per_arc_;
  const double lo = (static_cast<int>(nearest) % per_arc_) * h;
  const MacroArc& arc = boundary_.arc(k);
  double t = lo + along * h;
  for (int it = 0; it < 8; ++it) {
    const CurvePoint cp = arc(t);
    const Vec2 r = cp.point - p;
    const double g = dot(r, cp.d1);
    const double H = dot(cp.d1, cp.d1) + dot(r, cp.d2);
    if (!(H > 0.0)) break;
    t = std::clamp(t - g / H, std::max(0.0, lo - h), std::min(1.0, lo + 2.0 * h));
  }
  return std::min(best, norm(arc.position(t) - p));
}

bool ExteriorTest::exterior(Vec2 p, double margin) const {
  if (distance(p) <= margin) return false;
  double winding = 0.0;
  for (std::size_t j = 0; j < polygon_.size(); ++j) {
    const Vec2 a = polygon_[j] - p;
    const Vec2 b = polygon_[(j + 1) % polygon_.size()] - p;
    winding += std::atan2(cross(a, b), dot(a, b));
  }
  return std::abs(winding) < kPi;
}

SolutionField::SolutionField(std::shared_ptr<const Decomposition> dec,
                             const DiscretizationParams& params, const UnknownMap& map,
                             const Eigen::VectorXd& values, const NeumannDatum& datum,
                             int outer_order)
    : dec_(std::move(dec)),
      params_(params),
      outer_order_(outer_order),
      exterior_(dec_->boundary()) {
  if (values.size() != map.reduced_count()) throw ParameterError("solution size mismatch");
  const Boundary& boundary = dec_->boundary();
  const QuadratureRule& outer = cached_gauss_legendre(outer_order);
  for (int k = 0; k < boundary.arc_count(); ++k) {
    for (std::size_t h = 0; h < outer.size(); ++h) {
      layer_points_.push_back(boundary.arc(k).position(outer.nodes[h]));
      layer_weights_.push_back(outer.weights[h] * phi(boundary, datum, k, outer.nodes[h]));
    }
  }
  nodal_.resize(dec_->subarc_count());
  for (int i = 0; i < dec_->subarc_count(); ++i) {
    const QuadratureRule& rule = map.rule(i);
    for (std::size_t h = 0; h < rule.size(); ++h) {
      const double u = values[map.column(i, static_cast<int>(h))];
      nodal_[i].push_back(u);
      dipole_samples_.push_back(oriented_eval(*dec_, i, rule.nodes[h]));
      dipole_weights_.push_back(rule.weights[h] * u);
    }
  }
}

double SolutionField::operator()(double x, double y) const {
  const Vec2 p{x, y};
  if (!exterior_.exterior(p)) {
    throw NumericalError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") is not in the exterior domain");
  }
  double single = 0.0;
  for (std::size_t h = 0; h < layer_points_.size(); ++h) {
    single += layer_weights_[h] * std::log(norm(layer_points_[h] - p));
  }
  double dipole = 0.0;
  for (std::size_t h = 0; h < dipole_samples_.size(); ++h) {
    dipole += dipole_weights_[h] * double_layer(p, dipole_samples_[h]);
  }
  return -(single - dipole) / (2.0 * kPi);
}

double eval_exterior(const SolutionField& field, double x, double y) { return field(x, y); }

Solved solve_neumann(std::shared_ptr<const Decomposition> dec, const DiscretizationParams& params,
                     const NeumannDatum& datum, int moments, int outer_order) {
  RhsApproximation rhs(*dec, datum, moments);
  DenseSystem system = build_system(*dec, params, rhs);
  DenseSolution solution = solve_dense(system.matrix, system.rhs);
  SolutionField field(dec, params, system.map, solution.x, datum, outer_order);
  return Solved{std::move(system), std::move(solution), std::move(field)};
}

}  // namespace nystrom
