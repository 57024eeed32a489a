#include "nystrom/kernels.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "nystrom/errors.hpp"

namespace nystrom {
namespace {

constexpr double kPi = std::numbers::pi;

void check_chi(double chi) {
  if (!(std::abs(chi) < 1.0) || chi == 0.0) {
    throw ParameterError("chi must satisfy 0 < |chi| < 1");
  }
}

// Limit of K(h,h) - L(h,h) as h -> 0 from second-order expansions of both
// pieces about the corner. f1, f2: field piece derivatives at 0; s1, s2:
// source piece derivatives at 0 (raw); sign: source orientation.
//   K(h,h) = (N1 + h N2) / (h (D2 + h D3)) + O(h)
// and N1 / (h D2) is exactly L(h,h) when the speeds match.
double taylor_corner_limit(const CurvePoint& f, const CurvePoint& s, double sign) {
  const Vec2 a = f.d1 - s.d1;
  const Vec2 b = f.d2 - s.d2;
  const double n1 = cross(a, s.d1);
  const double n2 = cross(a, s.d2) + 0.5 * cross(b, s.d1);
  const double d2 = dot(a, a);
  const double d3 = dot(a, b);
  return sign * (n2 / d2 - n1 * d3 / (d2 * d2));
}

}  // namespace

CurvePoint oriented_eval(const Decomposition& dec, int j, double t) {
  CurvePoint cp = subarc_eval(dec, j, t);
  if (dec.subarc(j).reversed) cp.d1 = -cp.d1;
  return cp;
}

KernelContext::KernelContext(const Decomposition& dec) : dec_(&dec) {
  for (const Vec2& p : dec.boundary().sample(64)) scale_ = std::max(scale_, norm(p));
  const int n = dec.corner_count();
  limits_.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    const int g = 3 * k;
    const int u = 3 * k + 1;
    const CurvePoint cg = subarc_eval(dec, g, 0.0);
    const CurvePoint cu = subarc_eval(dec, u, 0.0);
    limits_[2 * k] = taylor_corner_limit(cg, cu, 1.0);
    limits_[2 * k + 1] = taylor_corner_limit(cu, cg, -1.0);
  }
}

PairKind KernelContext::pair_kind(int i, int j) const {
  if (i == j) return PairKind::Diagonal;
  const auto& sa = dec_->subarc(i);
  const auto& sb = dec_->subarc(j);
  if (sa.kind != SubArcKind::Central && sb.kind != SubArcKind::Central && sa.corner == sb.corner) {
    return PairKind::MellinAdjacent;
  }
  return PairKind::Smooth;
}

double KernelContext::corner_limit(int i, int j) const {
  if (!mellin_adjacent(i, j)) {
    throw ParameterError("corner_limit: pieces " + std::to_string(i) + "," + std::to_string(j) +
                         " are not a corner pair");
  }
  const int k = dec_->subarc(i).corner;
  return limits_[2 * k + (dec_->subarc(i).kind == SubArcKind::Gamma ? 0 : 1)];
}

Vec2 separation(const KernelContext& ctx, int i, int j, double t, double s) {
  const Decomposition& dec = ctx.decomposition();
  switch (ctx.pair_kind(i, j)) {
    case PairKind::Diagonal:
      return subarc_chord(dec, i, t, s);
    case PairKind::MellinAdjacent:
      return subarc_chord(dec, i, 0.0, s) - subarc_chord(dec, j, 0.0, t);
    default:
      return subarc_eval(dec, i, s).point - subarc_eval(dec, j, t).point;
  }
}

double kernel_K(const KernelContext& ctx, int i, int j, double t, double s) {
  const Decomposition& dec = ctx.decomposition();
  const CurvePoint src = oriented_eval(dec, j, t);
  if (i == j && t == s) return double_layer_diagonal(src);
  const Vec2 d = separation(ctx, i, j, t, s);
  const double scale = ctx.length_scale();
  if (dot(d, d) < 1e-28 * scale * scale) {
    throw NumericalError("kernel_K: coincident points on pieces " + std::to_string(i) + "," +
                         std::to_string(j) + " at t=" + std::to_string(t) +
                         ", s=" + std::to_string(s));
  }
  return cross(d, src.d1) / dot(d, d);
}

double kernel_L(double chi, double t, double s) {
  check_chi(chi);
  if (t == 0.0 && s == 0.0) throw ParameterError("kernel_L: undefined at (0,0)");
  const double c = std::cos(chi * kPi);
  return -s * std::sin(chi * kPi) / (s * s + 2.0 * t * s * c + t * t);
}

double kernel_M(const KernelContext& ctx, int i, int j, double t, double s) {
  if (!ctx.mellin_adjacent(i, j)) {
    throw ParameterError("kernel_M: pieces " + std::to_string(i) + "," + std::to_string(j) +
                         " are not a corner pair");
  }
  if (t == 0.0 && s == 0.0) return ctx.corner_limit(i, j);
  return kernel_K(ctx, i, j, t, s) - kernel_L(ctx.decomposition().chi_of(i), t, s);
}

double mellin_corner_coefficient(double chi) {
  check_chi(chi);
  return -chi * kPi;
}

double kernel_H(const KernelContext& ctx, int i, double x, double y, double t) {
  const CurvePoint src = oriented_eval(ctx.decomposition(), i, t);
  const Vec2 field{x, y};
  if (norm(field - src.point) < 1e-12) {
    throw NumericalError("kernel_H: evaluation point on the boundary");
  }
  return double_layer(field, src);
}

double corner_limit_richardson(const KernelContext& ctx, int i, int j) {
  const double chi = ctx.decomposition().chi_of(i);
  auto f = [&](double h) { return kernel_K(ctx, i, j, h, h) - kernel_L(chi, h, h); };
  const double h = 1e-4;
  const double f0 = f(h);
  const double f1 = f(h / 2);
  const double f2 = f(h / 4);
  const double r0 = 2.0 * f1 - f0;
  const double r1 = 2.0 * f2 - f1;
  return (4.0 * r1 - r0) / 3.0;
}

}  // namespace nystrom
