#pragma once

#include <span>
#include <vector>

namespace nystrom {

enum class RuleKind { Legendre, RadauLeft };

/// Quadrature rule on [0,1]. Weights sum to one.
///
/// Legendre rules of order m have m nodes. Left Radau rules of order m have
/// m+1 nodes, the first of which is fixed at 0 with weight 1/(m+1)^2.
struct QuadratureRule {
  RuleKind kind = RuleKind::Legendre;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr int kMaxRuleOrder = 4096;
inline constexpr int kMaxMoments = 512;

/// m-point Gauss-Legendre rule on [0,1], exact to degree 2m-1.
QuadratureRule gauss_legendre(int m);

/// (m+1)-point Gauss-Radau rule on [0,1] with fixed node at 0, exact to
/// degree 2m. The m free nodes are the Gauss nodes for the weight x.
QuadratureRule gauss_radau_left(int m);

/// Process-wide memoized versions; the returned references stay valid.
const QuadratureRule& cached_gauss_legendre(int m);
const QuadratureRule& cached_gauss_radau_left(int m);

/// Orthonormal shifted Legendre polynomial sqrt(2v+1) P_v(2x-1).
double legendre_orthonormal(int degree, double x);

/// Fills out[v] = p_v(x) for v = 0..out.size()-1.
void legendre_orthonormal_all(double x, std::span<double> out);

/// c_v(s) = int_0^1 p_v(z) log|z - s| dz for v = 0..count-1.
///
/// Computed through Legendre functions of the second kind: with y = 2s-1,
/// int_{-1}^1 P_v(t) log|t-y| dt = 2 (Q_{v+1}(y) - Q_{v-1}(y)) / (2v+1).
/// At s = 0 and s = 1 the closed forms of the endpoint integrals are used.
std::vector<double> log_moments(double s, int count);

}  // namespace nystrom
