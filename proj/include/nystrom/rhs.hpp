#pragma once

#include <functional>
#include <vector>

#include "nystrom/geometry.hpp"

namespace nystrom {

using Gradient = std::function<Vec2(Vec2)>;

/// Inward normal derivative of u at macro arc `arc`, parameter t:
/// grad u . (-eta', xi') / |sigma'| for a counterclockwise boundary.
double normal_derivative(const Gradient& grad, const Boundary& boundary, int arc, double t);

/// Neumann data f on the boundary. Either a direct function of the boundary
/// point or the inward normal derivative of a known harmonic function.
class NeumannDatum {
 public:
  static NeumannDatum from_function(std::function<double(Vec2)> f);
  static NeumannDatum from_gradient(Gradient grad);

  /// f(sigma_k(t)).
  double value(const Boundary& boundary, int arc, double t) const;

 private:
  std::function<double(Vec2)> direct_;
  Gradient gradient_;
};

/// phi_k(t) = f(sigma_k(t)) |sigma_k'(t)|.
double phi(const Boundary& boundary, const NeumannDatum& datum, int arc, double t);

/// Integral of f over the boundary (Gauss-Legendre per arc).
double compatibility_integral(const Boundary& boundary, const NeumannDatum& datum,
                              int order = 256);

/// log(|sigma_l(s) - sigma_l(t)| / |t - s|), replaced by log|sigma_l'(t)|
/// when t and s are within a few ulps of each other.
double delta_l(const Boundary& boundary, int arc, double t, double s);

/// Approximation of g(P) = int f(Q) log|P - Q| dQ at boundary points.
///
/// Off-arc contributions use M-point Gauss-Legendre; the self-arc term splits
/// log|sigma(s) - sigma(t)| = log|t - s| + delta(t, s), integrating the first
/// part with the Legendre product rule built on log moments. On a boundary
/// without corners the single closed arc is integrated over the period
/// centred at the target, so the start of the parametrization is not a
/// singularity of delta.
class RhsApproximation {
 public:
  /// `dec` must outlive this object.
  RhsApproximation(const Decomposition& dec, const NeumannDatum& datum, int moments);

  /// g at sigma_i(s) for sub-arc i.
  double operator()(int i, double s) const;

  /// g at the macro point sigma_l(s).
  double at_macro(int arc, double s) const;

  int moments() const { return moments_; }

 private:
  struct ArcData {
    std::vector<Vec2> points;
    std::vector<double> log_speed;
    std::vector<double> weighted_phi;  // lambda_h phi(x_h)
    std::vector<double> coefficients;  // sum_h lambda_h phi(x_h) p_v(x_h)
  };
  double periodic(double s) const;

  const Decomposition* dec_;
  const NeumannDatum* datum_;
  int moments_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> centred_;  // sum_v c_v(1/2) p_v(x_h), closed arcs only
  std::vector<ArcData> arcs_;
};

/// One-shot evaluation of the approximate right-hand side at (i, s).
double rhs_approx(const Decomposition& dec, const NeumannDatum& datum, int moments, int i, double s);

}  // namespace nystrom
