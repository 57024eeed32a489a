#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "nystrom/assembly.hpp"
#include "nystrom/geometry.hpp"
#include "nystrom/kernels.hpp"
#include "nystrom/rhs.hpp"

namespace nystrom {

struct DenseSolution {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||Ax - b||_inf
};

/// LU with partial pivoting. Throws NumericalError when a pivot falls below
/// 1e-14 ||A||_inf or the residual exceeds 1e-10 (||A|| ||x|| + ||b||).
DenseSolution solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// ||A||_inf ||A^-1||_inf with the inverse formed from the LU factors.
double cond_inf(const Eigen::MatrixXd& a);

/// Winding-number test against a polygonal sampling of the boundary.
class ExteriorTest {
 public:
  explicit ExteriorTest(const Boundary& boundary, int samples = 4096);

  /// Distance from p to the boundary: nearest polygon segment, then Newton on
  /// the curve parameter of that segment's arc.
  double distance(Vec2 p) const;
  /// True when p lies outside D and farther than `margin` from the boundary.
  bool exterior(Vec2 p, double margin = 1e-9) const;

 private:
  Boundary boundary_;
  int per_arc_ = 0;
  std::vector<Vec2> polygon_;
};

/// Boundary values of the approximate solution and everything needed to
/// evaluate the exterior representation formula.
class SolutionField {
 public:
  SolutionField(std::shared_ptr<const Decomposition> dec, const DiscretizationParams& params,
                const UnknownMap& map, const Eigen::VectorXd& values, const NeumannDatum& datum,
                int outer_order);

  const Decomposition& decomposition() const { return *dec_; }
  const DiscretizationParams& params() const { return params_; }
  int outer_order() const { return outer_order_; }

  /// u_m at node `node` of sub-arc i (corner values shared by Gamma/Upsilon).
  double nodal_value(int i, int node) const { return nodal_[i][node]; }

  /// Exterior approximation u_{m,N}(x, y). Throws NumericalError for points
  /// inside D or on the boundary.
  double operator()(double x, double y) const;

 private:
  std::shared_ptr<const Decomposition> dec_;
  DiscretizationParams params_;
  int outer_order_;
  std::vector<std::vector<double>> nodal_;
  // Single-layer term: Gauss-Legendre samples of every macro arc.
  std::vector<Vec2> layer_points_;
  std::vector<double> layer_weights_;  // lambda_h phi_k(x_h)
  // Double-layer term: oriented Radau samples weighted by lambda_h u_h.
  std::vector<CurvePoint> dipole_samples_;
  std::vector<double> dipole_weights_;
  ExteriorTest exterior_;
};

double eval_exterior(const SolutionField& field, double x, double y);

/// End-to-end result for one parameter set.
struct Solved {
  DenseSystem system;
  DenseSolution solution;
  SolutionField field;
};

/// Decomposition -> system (right-hand side from the product rule with
/// `moments` nodes) -> dense solve -> exterior field with `outer_order`
/// Gauss-Legendre nodes for the single-layer term.
Solved solve_neumann(std::shared_ptr<const Decomposition> dec, const DiscretizationParams& params,
                     const NeumannDatum& datum, int moments, int outer_order);

}  // namespace nystrom
