#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace nystrom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Position and first two derivatives of a curve at one parameter value.
struct CurvePoint {
  Vec2 point;
  Vec2 d1;
  Vec2 d2;
};

/// A C^2 arc parametrized over [0,1].
class MacroArc {
 public:
  using Evaluator = std::function<CurvePoint(double)>;

  MacroArc() = default;
  explicit MacroArc(Evaluator eval) : eval_(std::move(eval)) {}

  /// Straight segment from a to b.
  static MacroArc segment(Vec2 a, Vec2 b);

  CurvePoint operator()(double t) const { return eval_(t); }
  Vec2 position(double t) const { return eval_(t).point; }
  Vec2 first_derivative(double t) const { return eval_(t).d1; }
  Vec2 second_derivative(double t) const { return eval_(t).d2; }

 private:
  Evaluator eval_;
};

struct Corner {
  int index = 0;
  Vec2 point;
  double interior_angle = 0.0;  // omega in (0,pi) U (pi,2pi)
  double chi = 0.0;             // 1 - omega/pi
  double beta = 0.0;            // 1 / (1 + |chi|)
};

/// Counterclockwise piecewise-smooth closed curve. Arc k runs from corner k to
/// corner k+1 (cyclically). A boundary without corners has exactly one closed
/// smooth arc.
class Boundary {
 public:
  const std::vector<MacroArc>& arcs() const { return arcs_; }
  const std::vector<Corner>& corners() const { return corners_; }
  const MacroArc& arc(int k) const { return arcs_.at(k); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int corner_count() const { return static_cast<int>(corners_.size()); }
  bool has_corners() const { return !corners_.empty(); }

  /// Boundary sampled at `per_arc` uniformly spaced parameters per arc, in
  /// traversal order (closing point not repeated).
  std::vector<Vec2> sample(int per_arc) const;

  /// Signed area from a dense polygonal sampling (positive for CCW).
  double signed_area(int per_arc = 2000) const;

 private:
  friend Boundary make_boundary(std::vector<MacroArc>, const std::vector<double>&);
  friend Boundary make_smooth_boundary(MacroArc);
  std::vector<MacroArc> arcs_;
  std::vector<Corner> corners_;
};

/// Interior angle at a corner from the incoming tangent (end of the previous
/// arc) and the outgoing tangent (start of the next arc), in (0, 2pi).
double interior_angle_from_tangents(Vec2 incoming, Vec2 outgoing);

/// Validates closure, orientation and the stated corner angles.
Boundary make_boundary(std::vector<MacroArc> arcs, const std::vector<double>& corner_angles);

/// Closed smooth curve (arc(0) == arc(1)), no corners.
Boundary make_smooth_boundary(MacroArc closed_arc);

/// Polygon with the given counterclockwise vertices; angles derived.
Boundary make_polygon(const std::vector<Vec2>& vertices);

/// Built-in domain families: "heart", "teardrop", "boomerang", "triangle",
/// plus "circle" (unit circle, no corner). `phi` is the corner angle for the
/// single-corner families and is ignored otherwise.
Boundary make_example_domain(const std::string& name, double phi);

/// Valid corner-angle interval (open) for a single-corner family.
std::pair<double, double> phi_range(const std::string& name);

enum class SubArcKind { Gamma, Upsilon, Central };

/// One of the 3n pieces. Index i is zero-based: i % 3 == 0 is Gamma_k,
/// 1 is Upsilon_k, 2 is C_k with k = i / 3.
struct SubArc {
  int index = 0;
  SubArcKind kind = SubArcKind::Central;
  int corner = -1;  // k for every kind (C_k follows Upsilon_k)
  int macro = 0;
  double a = 0.0;
  double b = 1.0;
  bool reversed = false;

  /// Parameter on the macro arc.
  double macro_param(double s) const { return reversed ? b - s * (b - a) : a + s * (b - a); }
};

struct CornerSplit {
  double gamma_fraction = 0.0;    // on arc k-1, interval [1-e, 1]
  double upsilon_fraction = 0.0;  // on arc k, interval [0, e]
  double matched_speed = 0.0;     // |sigma'_Gamma(0)| == |sigma'_Upsilon(0)|
  double deviation = 0.0;         // achieved max distance to the tangents
};

class Decomposition {
 public:
  const Boundary& boundary() const { return boundary_; }
  const std::vector<SubArc>& subarcs() const { return subarcs_; }
  const SubArc& subarc(int i) const { return subarcs_.at(i); }
  const std::vector<CornerSplit>& splits() const { return splits_; }
  int subarc_count() const { return static_cast<int>(subarcs_.size()); }
  int corner_count() const { return boundary_.corner_count(); }

  /// chi of the corner attached to a Gamma or Upsilon sub-arc.
  double chi_of(int i) const;

 private:
  friend Decomposition decompose(const Boundary&, double, double);
  Boundary boundary_;
  std::vector<SubArc> subarcs_;
  std::vector<CornerSplit> splits_;
};

inline constexpr double kDefaultFractionCap = 0.25;

/// Splits every smooth arc into Gamma / Upsilon / C pieces. Corner pieces
/// are the largest (up to `cap`) with maximal distance to the corner tangent
/// line at most `delta`, then shrunk so both pieces leave the corner at the
/// same parametric speed. A cornerless boundary yields a single C piece.
Decomposition decompose(const Boundary& boundary, double delta,
                        double cap = kDefaultFractionCap);

/// sigma_i(s) with derivatives in the sub-arc's own parameter (d1 points
/// toward the corner for reversed Gamma pieces).
CurvePoint subarc_eval(const Decomposition& dec, int i, double s);

/// sigma_i(s) - sigma_i(t). Short spans integrate sigma_i' with Gauss-Legendre
/// so the result keeps full relative accuracy as the points merge.
Vec2 subarc_chord(const Decomposition& dec, int i, double t, double s);

/// Interior angle function: (1-chi_k) pi at s == 0 on corner pieces, pi
/// everywhere else.
double omega_bar(const Decomposition& dec, int i, double s);

/// (macro arc index, macro parameter) with sigma_i(s) == macro(s_i).
std::pair<int, double> macro_param_of(const Decomposition& dec, int i, double s);

}  // namespace nystrom
