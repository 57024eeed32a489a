#include "nystrom/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "nystrom/errors.hpp"
#include "nystrom/quadrature.hpp"

namespace nystrom {
namespace {

constexpr double kPi = std::numbers::pi;

double scale_of(Vec2 p) { return std::max(1.0, norm(p)); }

}  // namespace

MacroArc MacroArc::segment(Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  return MacroArc([a, d](double t) { return CurvePoint{a + t * d, d, {0.0, 0.0}}; });
}

std::vector<Vec2> Boundary::sample(int per_arc) const {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(per_arc) * arcs_.size());
  for (const auto& arc : arcs_) {
    for (int j = 0; j < per_arc; ++j) out.push_back(arc.position(static_cast<double>(j) / per_arc));
  }
  return out;
}

double Boundary::signed_area(int per_arc) const {
  const auto pts = sample(per_arc);
  double area = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    area += cross(pts[j], pts[(j + 1) % pts.size()]);
  }
  return 0.5 * area;
}

double interior_angle_from_tangents(Vec2 incoming, Vec2 outgoing) {
  const Vec2 back = -incoming;
  double angle = std::atan2(cross(outgoing, back), dot(outgoing, back));
  if (angle <= 0.0) angle += 2.0 * kPi;
  return angle;
}

namespace {

void check_regular(const MacroArc& arc, int k) {
  constexpr int kSamples = 1000;
  for (int j = 0; j <= kSamples; ++j) {
    const double t = static_cast<double>(j) / kSamples;
    const CurvePoint cp = arc(t);
    if (!std::isfinite(cp.point.x) || !std::isfinite(cp.point.y) || !std::isfinite(cp.d1.x) ||
        !std::isfinite(cp.d1.y) || !std::isfinite(cp.d2.x) || !std::isfinite(cp.d2.y)) {
      throw GeometryError("arc " + std::to_string(k) + " is not finite at t=" + std::to_string(t));
    }
    if (!(norm(cp.d1) > 0.0)) {
      throw GeometryError("arc " + std::to_string(k) + " has zero speed at t=" + std::to_string(t));
    }
  }
}

void check_orientation(const Boundary& b) {
  if (!(b.signed_area() > 0.0)) {
    throw GeometryError("boundary must be oriented counterclockwise");
  }
}

}  // namespace

Boundary make_boundary(std::vector<MacroArc> arcs, const std::vector<double>& corner_angles) {
  const int n = static_cast<int>(arcs.size());
  if (n < 1) throw GeometryError("boundary needs at least one arc");
  if (static_cast<int>(corner_angles.size()) != n) {
    throw GeometryError("one corner angle per arc is required");
  }
  Boundary b;
  for (int k = 0; k < n; ++k) check_regular(arcs[k], k);
  for (int k = 0; k < n; ++k) {
    const Vec2 end = arcs[k].position(1.0);
    const Vec2 next = arcs[(k + 1) % n].position(0.0);
    if (norm(end - next) > 1e-12 * scale_of(next)) {
      throw GeometryError("arc " + std::to_string(k) + " does not end where the next arc starts");
    }
  }
  b.corners_.reserve(n);
  for (int k = 0; k < n; ++k) {
    const Vec2 in = arcs[(k + n - 1) % n].first_derivative(1.0);
    const Vec2 out = arcs[k].first_derivative(0.0);
    const double measured = interior_angle_from_tangents(in, out);
    const double omega = corner_angles[k];
    if (!(std::abs(measured - omega) <= 1e-8)) {
      throw GeometryError("corner " + std::to_string(k) + ": stated angle " + std::to_string(omega) +
                          " disagrees with tangent angle " + std::to_string(measured));
    }
    Corner c;
    c.index = k;
    c.point = arcs[k].position(0.0);
    c.interior_angle = omega;
    c.chi = 1.0 - omega / kPi;
    if (!(std::abs(c.chi) < 1.0) || std::abs(c.chi) < 1e-10) {
      throw GeometryError("corner " + std::to_string(k) + ": chi must satisfy 0 < |chi| < 1");
    }
    c.beta = 1.0 / (1.0 + std::abs(c.chi));
    b.corners_.push_back(c);
  }
  b.arcs_ = std::move(arcs);
  check_orientation(b);
  return b;
}

Boundary make_smooth_boundary(MacroArc closed_arc) {
  check_regular(closed_arc, 0);
  const Vec2 p0 = closed_arc.position(0.0);
  if (norm(closed_arc.position(1.0) - p0) > 1e-12 * scale_of(p0)) {
    throw GeometryError("smooth boundary arc is not closed");
  }
  Boundary b;
  b.arcs_.push_back(std::move(closed_arc));
  check_orientation(b);
  return b;
}

Boundary make_polygon(const std::vector<Vec2>& vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw GeometryError("polygon needs at least three vertices");
  std::vector<MacroArc> arcs;
  std::vector<double> angles;
  for (int k = 0; k < n; ++k) arcs.push_back(MacroArc::segment(vertices[k], vertices[(k + 1) % n]));
  for (int k = 0; k < n; ++k) {
    const Vec2 in = vertices[k] - vertices[(k + n - 1) % n];
    const Vec2 out = vertices[(k + 1) % n] - vertices[k];
    angles.push_back(interior_angle_from_tangents(in, out));
  }
  return make_boundary(std::move(arcs), angles);
}

std::pair<double, double> phi_range(const std::string& name) {
  if (name == "heart" || name == "boomerang") return {kPi, 2.0 * kPi};
  if (name == "teardrop") return {0.0, kPi};
  throw ParameterError("domain '" + name + "' has no angle parameter");
}

namespace {

void check_phi(const std::string& name, double phi) {
  const auto [lo, hi] = phi_range(name);
  if (!(phi > lo && phi < hi)) {
    throw ParameterError("phi=" + std::to_string(phi) + " outside the range of the " + name +
                         " family");
  }
}

}  // namespace

Boundary make_example_domain(const std::string& name, double phi) {
  if (name == "heart") {
    check_phi(name, phi);
    // sigma(t) = R(theta t) (T, 1) - (T, cos(pi t)), theta = pi + phi,
    // T = tan(phi/2); closes at the origin with interior angle phi.
    const double theta = kPi + phi;
    const double T = std::tan(0.5 * phi);
    MacroArc arc([theta, T](double t) {
      const double a = theta * t;
      const double c = std::cos(a);
      const double s = std::sin(a);
      const double cp = std::cos(kPi * t);
      const double sp = std::sin(kPi * t);
      CurvePoint p;
      p.point = {T * c - s - T, T * s + c - cp};
      p.d1 = {theta * (-T * s - c), theta * (T * c - s) + kPi * sp};
      p.d2 = {theta * theta * (-T * c + s), theta * theta * (-T * s - c) + kPi * kPi * cp};
      return p;
    });
    return make_boundary({arc}, {phi});
  }
  if (name == "teardrop" || name == "boomerang") {
    check_phi(name, phi);
    const double T = std::tan(0.5 * phi);
    // x(t) = amp sin(freq pi t), y(t) = -T sin(2 pi t)
    const double amp = name == "teardrop" ? 2.0 : 2.0 / 3.0;
    const double freq = name == "teardrop" ? 1.0 : 3.0;
    MacroArc arc([T, amp, freq](double t) {
      const double w = freq * kPi;
      const double v = 2.0 * kPi;
      CurvePoint p;
      p.point = {amp * std::sin(w * t), -T * std::sin(v * t)};
      p.d1 = {amp * w * std::cos(w * t), -T * v * std::cos(v * t)};
      p.d2 = {-amp * w * w * std::sin(w * t), T * v * v * std::sin(v * t)};
      return p;
    });
    return make_boundary({arc}, {phi});
  }
  if (name == "triangle") {
    return make_polygon({{-1.25, -0.75}, {0.75, -0.75}, {0.75, 1.25}});
  }
  if (name == "circle") {
    MacroArc arc([](double t) {
      const double w = 2.0 * kPi;
      const double c = std::cos(w * t);
      const double s = std::sin(w * t);
      return CurvePoint{{c, s}, {-w * s, w * c}, {-w * w * c, -w * w * s}};
    });
    return make_smooth_boundary(arc);
  }
  throw ParameterError("unknown domain '" + name + "'");
}

double Decomposition::chi_of(int i) const {
  const SubArc& sa = subarcs_.at(i);
  if (sa.kind == SubArcKind::Central) throw ParameterError("chi_of: central sub-arc has no corner");
  return boundary_.corners()[sa.corner].chi;
}

namespace {

constexpr int kDeviationSamples = 256;

// Largest distance from arc points with parameters base + sign * e * j / S to
// the line through `corner` with direction `tangent`.
double deviation(const MacroArc& arc, Vec2 corner, Vec2 tangent, double base, double sign,
                 double e) {
  const Vec2 u = (1.0 / norm(tangent)) * tangent;
  double worst = 0.0;
  for (int j = 1; j <= kDeviationSamples; ++j) {
    const double t = base + sign * e * j / kDeviationSamples;
    worst = std::max(worst, std::abs(cross(u, arc.position(t) - corner)));
  }
  return worst;
}

template <class Dev>
double largest_fraction(Dev dev, double delta, double cap) {
  if (dev(cap) <= delta) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dev(mid) <= delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

Decomposition decompose(const Boundary& boundary, double delta, double cap) {
  if (!(delta > 0.0)) throw ParameterError("decompose: delta must be positive");
  if (!(cap > 0.0 && cap < 0.5)) throw ParameterError("decompose: fraction cap must lie in (0, 1/2)");

  Decomposition dec;
  dec.boundary_ = boundary;
  const int n = boundary.corner_count();
  if (n == 0) {
    SubArc c;
    c.index = 0;
    c.kind = SubArcKind::Central;
    c.macro = 0;
    dec.subarcs_.push_back(c);
    return dec;
  }

  dec.splits_.resize(n);
  for (int k = 0; k < n; ++k) {
    const MacroArc& in_arc = boundary.arc((k + n - 1) % n);
    const MacroArc& out_arc = boundary.arc(k);
    const Vec2 p = boundary.corners()[k].point;
    const Vec2 t_in = in_arc.first_derivative(1.0);
    const Vec2 t_out = out_arc.first_derivative(0.0);
    const double speed_in = norm(t_in);
    const double speed_out = norm(t_out);
    if (!(speed_in > 0.0) || !(speed_out > 0.0)) {
      throw GeometryError("decompose: degenerate tangent at corner " + std::to_string(k));
    }
    auto dev_gamma = [&](double e) { return deviation(in_arc, p, t_in, 1.0, -1.0, e); };
    auto dev_upsilon = [&](double e) { return deviation(out_arc, p, t_out, 0.0, 1.0, e); };
    double eg = largest_fraction(dev_gamma, delta, cap);
    double eu = largest_fraction(dev_upsilon, delta, cap);
    if (!(eg > 0.0) || !(eu > 0.0)) {
      throw GeometryError("decompose: delta too small to split corner " + std::to_string(k));
    }
    const double speed = std::min(eg * speed_in, eu * speed_out);
    eg = speed / speed_in;
    eu = speed / speed_out;
    CornerSplit& split = dec.splits_[k];
    split.gamma_fraction = eg;
    split.upsilon_fraction = eu;
    split.matched_speed = speed;
    split.deviation = std::max(dev_gamma(eg), dev_upsilon(eu));
  }

  for (int k = 0; k < n; ++k) {
    const int prev = (k + n - 1) % n;
    const double eu = dec.splits_[k].upsilon_fraction;
    const double eg_next = dec.splits_[(k + 1) % n].gamma_fraction;
    if (!(eu + eg_next < 1.0)) {
      throw GeometryError("decompose: corner pieces overlap on arc " + std::to_string(k));
    }
    SubArc gamma{3 * k, SubArcKind::Gamma, k, prev, 1.0 - dec.splits_[k].gamma_fraction, 1.0, true};
    SubArc upsilon{3 * k + 1, SubArcKind::Upsilon, k, k, 0.0, eu, false};
    SubArc central{3 * k + 2, SubArcKind::Central, k, k, eu, 1.0 - eg_next, false};
    dec.subarcs_.push_back(gamma);
    dec.subarcs_.push_back(upsilon);
    dec.subarcs_.push_back(central);
  }
  return dec;
}

CurvePoint subarc_eval(const Decomposition& dec, int i, double s) {
  const SubArc& sa = dec.subarc(i);
  const CurvePoint cp = dec.boundary().arc(sa.macro)(sa.macro_param(s));
  const double h = sa.b - sa.a;
  // Both corner pieces start exactly at the shared corner point.
  const Vec2 point = sa.kind != SubArcKind::Central && s == 0.0
                         ? dec.boundary().corners()[sa.corner].point
                         : cp.point;
  return {point, (sa.reversed ? -h : h) * cp.d1, (h * h) * cp.d2};
}

Vec2 subarc_chord(const Decomposition& dec, int i, double t, double s) {
  constexpr double kShortSpan = 0.02;  // in macro parameter
  const SubArc& sa = dec.subarc(i);
  if (std::abs(s - t) * (sa.b - sa.a) > kShortSpan) {
    return subarc_eval(dec, i, s).point - subarc_eval(dec, i, t).point;
  }
  const QuadratureRule& rule = cached_gauss_legendre(16);
  Vec2 sum;
  for (std::size_t h = 0; h < rule.size(); ++h) {
    sum = sum + rule.weights[h] * subarc_eval(dec, i, t + (s - t) * rule.nodes[h]).d1;
  }
  return (s - t) * sum;
}

double omega_bar(const Decomposition& dec, int i, double s) {
  const SubArc& sa = dec.subarc(i);
  if (sa.kind == SubArcKind::Central || s != 0.0) return kPi;
  return (1.0 - dec.chi_of(i)) * kPi;
}

std::pair<int, double> macro_param_of(const Decomposition& dec, int i, double s) {
  const SubArc& sa = dec.subarc(i);
  return {sa.macro, sa.macro_param(s)};
}

}  // namespace nystrom
