#include "nystrom/rhs.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nystrom/errors.hpp"
#include "nystrom/quadrature.hpp"

namespace nystrom {

double normal_derivative(const Gradient& grad, const Boundary& boundary, int arc, double t) {
  const CurvePoint cp = boundary.arc(arc)(t);
  const double speed = norm(cp.d1);
  const Vec2 inward{-cp.d1.y / speed, cp.d1.x / speed};
  return dot(grad(cp.point), inward);
}

NeumannDatum NeumannDatum::from_function(std::function<double(Vec2)> f) {
  NeumannDatum d;
  d.direct_ = std::move(f);
  return d;
}

NeumannDatum NeumannDatum::from_gradient(Gradient grad) {
  NeumannDatum d;
  d.gradient_ = std::move(grad);
  return d;
}

double NeumannDatum::value(const Boundary& boundary, int arc, double t) const {
  if (gradient_) return normal_derivative(gradient_, boundary, arc, t);
  return direct_(boundary.arc(arc).position(t));
}

double phi(const Boundary& boundary, const NeumannDatum& datum, int arc, double t) {
  return datum.value(boundary, arc, t) * norm(boundary.arc(arc).first_derivative(t));
}

double compatibility_integral(const Boundary& boundary, const NeumannDatum& datum, int order) {
  const QuadratureRule& rule = cached_gauss_legendre(order);
  double total = 0.0;
  for (int k = 0; k < boundary.arc_count(); ++k) {
    for (std::size_t h = 0; h < rule.size(); ++h) {
      total += rule.weights[h] * phi(boundary, datum, k, rule.nodes[h]);
    }
  }
  return total;
}

namespace {

constexpr double kCoincidence = 8.0 * std::numeric_limits<double>::epsilon();
constexpr double kShortSpan = 0.02;

// |sigma(s) - sigma(t)| / |s - t| as the norm of the mean of sigma' over [t, s].
double mean_speed(const MacroArc& a, double t, double s) {
  const QuadratureRule& rule = cached_gauss_legendre(16);
  Vec2 sum;
  for (std::size_t h = 0; h < rule.size(); ++h) {
    sum = sum + rule.weights[h] * a.first_derivative(t + (s - t) * rule.nodes[h]);
  }
  return norm(sum);
}

}  // namespace

double delta_l(const Boundary& boundary, int arc, double t, double s) {
  const MacroArc& a = boundary.arc(arc);
  const double gap = std::abs(t - s);
  if (gap < kCoincidence) return std::log(norm(a.first_derivative(t)));
  if (gap < kShortSpan) return std::log(mean_speed(a, t, s));
  return std::log(norm(a.position(s) - a.position(t)) / gap);
}

RhsApproximation::RhsApproximation(const Decomposition& dec, const NeumannDatum& datum,
                                   int moments)
    : dec_(&dec), datum_(&datum), moments_(moments) {
  if (moments < 1 || moments > kMaxMoments) {
    throw ParameterError("rhs: rule size M=" + std::to_string(moments) + " outside [1, " +
                         std::to_string(kMaxMoments) + "]");
  }
  const QuadratureRule& rule = cached_gauss_legendre(moments);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
  const Boundary& boundary = dec.boundary();
  std::vector<double> p(moments);
  if (!boundary.has_corners()) {
    const std::vector<double> c = log_moments(0.5, moments);
    for (int h = 0; h < moments; ++h) {
      legendre_orthonormal_all(rule.nodes[h], p);
      double sum = 0.0;
      for (int v = 0; v < moments; ++v) sum += c[v] * p[v];
      centred_.push_back(sum);
    }
    return;
  }
  arcs_.resize(boundary.arc_count());
  for (int k = 0; k < boundary.arc_count(); ++k) {
    ArcData& data = arcs_[k];
    data.coefficients.assign(moments, 0.0);
    for (int h = 0; h < moments; ++h) {
      const double x = rule.nodes[h];
      const CurvePoint cp = boundary.arc(k)(x);
      data.points.push_back(cp.point);
      data.log_speed.push_back(std::log(norm(cp.d1)));
      const double w = rule.weights[h] * phi(boundary, datum, k, x);
      data.weighted_phi.push_back(w);
      legendre_orthonormal_all(x, p);
      for (int v = 0; v < moments; ++v) data.coefficients[v] += w * p[v];
    }
  }
}

double RhsApproximation::periodic(double s) const {
  const Boundary& boundary = dec_->boundary();
  const MacroArc& a = boundary.arc(0);
  auto wrap = [](double t) { return t - std::floor(t); };
  const Vec2 target = a.position(wrap(s));
  double total = 0.0;
  for (int h = 0; h < moments_; ++h) {
    const double offset = nodes_[h] - 0.5;
    const double t = wrap(s + offset);
    const double gap = std::abs(offset);
    double delta;
    if (gap < kCoincidence) {
      delta = std::log(norm(a.first_derivative(t)));
    } else if (gap < kShortSpan) {
      const QuadratureRule& rule = cached_gauss_legendre(16);
      Vec2 sum;
      for (std::size_t k = 0; k < rule.size(); ++k) {
        sum = sum + rule.weights[k] * a.first_derivative(wrap(s + offset * rule.nodes[k]));
      }
      delta = std::log(norm(sum));
    } else {
      delta = std::log(norm(target - a.position(t)) / gap);
    }
    total += weights_[h] * phi(boundary, *datum_, 0, t) * (centred_[h] + delta);
  }
  return total;
}

double RhsApproximation::at_macro(int arc, double s) const {
  if (!centred_.empty()) return periodic(s);
  const Boundary& boundary = dec_->boundary();
  const Vec2 target = boundary.arc(arc).position(s);
  double total = 0.0;
  for (int k = 0; k < static_cast<int>(arcs_.size()); ++k) {
    if (k == arc) continue;
    const ArcData& data = arcs_[k];
    for (int h = 0; h < moments_; ++h) {
      total += data.weighted_phi[h] * std::log(norm(target - data.points[h]));
    }
  }
  const ArcData& self = arcs_[arc];
  const std::vector<double> c = log_moments(s, moments_);
  for (int v = 0; v < moments_; ++v) total += c[v] * self.coefficients[v];
  for (int h = 0; h < moments_; ++h) {
    const double gap = std::abs(nodes_[h] - s);
    double delta;
    if (gap < kCoincidence) {
      delta = self.log_speed[h];
    } else if (gap < kShortSpan) {
      delta = std::log(mean_speed(boundary.arc(arc), nodes_[h], s));
    } else {
      delta = std::log(norm(target - self.points[h]) / gap);
    }
    total += self.weighted_phi[h] * delta;
  }
  return total;
}

double RhsApproximation::operator()(int i, double s) const {
  const auto [arc, si] = macro_param_of(*dec_, i, s);
  return at_macro(arc, si);
}

double rhs_approx(const Decomposition& dec, const NeumannDatum& datum, int moments, int i,
                  double s) {
  return RhsApproximation(dec, datum, moments)(i, s);
}

}  // namespace nystrom
