#pragma once

#include <vector>

#include "nystrom/geometry.hpp"

namespace nystrom {

enum class PairKind { Smooth, MellinAdjacent, Diagonal };

/// Double-layer kernel bookkeeping for one decomposition.
///
/// All kernels use the counterclockwise tangent of the source piece, i.e. the
/// derivative of a reversed Gamma piece is negated before it enters the
/// numerator. With that convention both corner pairs (Gamma_k, Upsilon_k) and
/// (Upsilon_k, Gamma_k) share the Mellin kernel L.
class KernelContext {
 public:
  explicit KernelContext(const Decomposition& dec);

  const Decomposition& decomposition() const { return *dec_; }
  PairKind pair_kind(int i, int j) const;
  bool mellin_adjacent(int i, int j) const { return pair_kind(i, j) == PairKind::MellinAdjacent; }

  /// M^{i,j}(0,0) for a Mellin-adjacent pair.
  double corner_limit(int i, int j) const;

  /// Typical coordinate magnitude; used for the coincidence guard.
  double length_scale() const { return scale_; }

 private:
  const Decomposition* dec_;
  std::vector<double> limits_;  // per corner: [Gamma row, Upsilon row]
  double scale_ = 1.0;
};

/// Sub-arc sample with the derivative oriented counterclockwise.
CurvePoint oriented_eval(const Decomposition& dec, int j, double t);

/// cross(field - q, q') / |field - q|^2 for a source sample q.
inline double double_layer(Vec2 field, const CurvePoint& source) {
  const Vec2 d = field - source.point;
  return cross(d, source.d1) / dot(d, d);
}

/// Coincident-point limit 1/2 cross(q'', q') / |q'|^2.
inline double double_layer_diagonal(const CurvePoint& source) {
  return 0.5 * cross(source.d2, source.d1) / dot(source.d1, source.d1);
}

/// sigma_i(s) - sigma_j(t), measured from the shared corner on corner pairs
/// and along the piece on diagonal pairs.
Vec2 separation(const KernelContext& ctx, int i, int j, double t, double s);

/// K^{i,j}(t,s): field point sigma_i(s), source sigma_j(t).
double kernel_K(const KernelContext& ctx, int i, int j, double t, double s);

/// Mellin kernel -s sin(chi pi) / (s^2 + 2 t s cos(chi pi) + t^2).
double kernel_L(double chi, double t, double s);

/// M = K - L on a Mellin-adjacent pair, continuous up to the corner.
double kernel_M(const KernelContext& ctx, int i, int j, double t, double s);

/// Corner value of the Mellin block row per unit corner density: -chi pi.
double mellin_corner_coefficient(double chi);

/// Double-layer kernel of piece i at the exterior point (x, y).
double kernel_H(const KernelContext& ctx, int i, double x, double y, double t);

/// Diagonal-limit estimate of M^{i,j}(0,0) by Richardson extrapolation of
/// K(h,h) - L(h,h) over h = 1e-4, 5e-5, 2.5e-5.
double corner_limit_richardson(const KernelContext& ctx, int i, int j);

}  // namespace nystrom
