#include "nystrom/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nystrom/errors.hpp"

namespace nystrom {
namespace {

void check_order(int m, const char* what) {
  if (m < 1 || m > kMaxRuleOrder) {
    throw ParameterError(std::string(what) + ": order " + std::to_string(m) +
                         " outside [1, " + std::to_string(kMaxRuleOrder) + "]");
  }
}

// Three-term recurrence of a family of monic orthogonal polynomials on [0,1]:
//   pi_{j+1}(x) = (x - alpha_j) pi_j(x) - beta_j pi_{j-1}(x),
// with total mass mu0 of the weight.
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[0] unused
  double mu0 = 1.0;
};

Recurrence legendre_recurrence(int m) {
  Recurrence r;
  r.alpha.assign(m, 0.5);
  r.beta.assign(m + 1, 0.0);
  for (int j = 1; j <= m; ++j) {
    const double jj = static_cast<double>(j) * j;
    r.beta[j] = jj / (4.0 * (4.0 * jj - 1.0));
  }
  r.mu0 = 1.0;
  return r;
}

// Weight x on [0,1]: Jacobi (0,1) on [-1,1] shifted.
Recurrence weight_x_recurrence(int m) {
  Recurrence r;
  r.alpha.resize(m);
  r.beta.assign(m + 1, 0.0);
  for (int j = 0; j < m; ++j) {
    r.alpha[j] = 0.5 * (1.0 + 1.0 / ((2.0 * j + 1.0) * (2.0 * j + 3.0)));
  }
  for (int j = 1; j <= m; ++j) {
    const double d = 2.0 * j + 1.0;
    r.beta[j] = static_cast<double>(j) * (j + 1.0) / (4.0 * d * d);
  }
  r.mu0 = 0.5;
  return r;
}

// Orthonormal recurrence at x: returns p_m(x), p_m'(x) and sum_{j<m} p_j(x)^2.
struct RecurrenceValue {
  double value;
  double derivative;
  double christoffel_sum;
};

RecurrenceValue evaluate(const Recurrence& r, int m, double x) {
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(r.mu0);
  double dp_prev = 0.0;
  double dp = 0.0;
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    sum += p * p;
    const double sb_next = std::sqrt(r.beta[j + 1]);
    const double sb = j > 0 ? std::sqrt(r.beta[j]) : 0.0;
    const double p_next = ((x - r.alpha[j]) * p - sb * p_prev) / sb_next;
    const double dp_next = (p + (x - r.alpha[j]) * dp - sb * dp_prev) / sb_next;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp, sum};
}

// Golub-Welsch eigenvalues, then Newton polishing and Christoffel weights.
void gauss_rule(const Recurrence& r, int m, std::vector<double>& nodes,
                std::vector<double>& weights) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int j = 0; j < m; ++j) diag[j] = r.alpha[j];
  for (int j = 1; j < m; ++j) sub[j - 1] = std::sqrt(r.beta[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("quadrature: tridiagonal eigenproblem failed");
  }
  nodes.resize(m);
  weights.resize(m);
  for (int k = 0; k < m; ++k) {
    double x = solver.eigenvalues()[k];
    for (int it = 0; it < 8; ++it) {
      const auto v = evaluate(r, m, x);
      const double step = v.value / v.derivative;
      x -= step;
      if (std::abs(step) <= 1e-17 * std::max(std::abs(x), 1e-300)) break;
    }
    nodes[k] = x;
    weights[k] = 1.0 / evaluate(r, m, x).christoffel_sum;
  }
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
  check_order(m, "gauss_legendre");
  QuadratureRule rule;
  rule.kind = RuleKind::Legendre;
  rule.order = m;
  gauss_rule(legendre_recurrence(m), m, rule.nodes, rule.weights);
  // Mirror the lower half so that the rule is exactly symmetric about 1/2.
  for (int k = 0; k < m / 2; ++k) {
    rule.nodes[m - 1 - k] = 1.0 - rule.nodes[k];
    rule.weights[m - 1 - k] = rule.weights[k];
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.5;
  return rule;
}

QuadratureRule gauss_radau_left(int m) {
  check_order(m, "gauss_radau_left");
  std::vector<double> x;
  std::vector<double> lambda;
  gauss_rule(weight_x_recurrence(m), m, x, lambda);

  QuadratureRule rule;
  rule.kind = RuleKind::RadauLeft;
  rule.order = m;
  rule.nodes.reserve(m + 1);
  rule.weights.reserve(m + 1);
  rule.nodes.push_back(0.0);
  rule.weights.push_back(1.0 / ((m + 1.0) * (m + 1.0)));
  // f(x) = f(0) + x q(x): integrating x q(x) with the Gauss rule for weight x
  // gives interior weights lambda_k / x_k.
  for (int k = 0; k < m; ++k) {
    rule.nodes.push_back(x[k]);
    rule.weights.push_back(lambda[k] / x[k]);
  }
  return rule;
}

namespace {

template <class Build>
const QuadratureRule& cached(int m, Build build) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> table;
  std::lock_guard lock(mutex);
  auto& slot = table[m];
  if (!slot) slot = std::make_unique<QuadratureRule>(build(m));
  return *slot;
}

}  // namespace

const QuadratureRule& cached_gauss_legendre(int m) {
  check_order(m, "gauss_legendre");
  return cached(m, [](int k) { return gauss_legendre(k); });
}

const QuadratureRule& cached_gauss_radau_left(int m) {
  check_order(m, "gauss_radau_left");
  return cached(m, [](int k) { return gauss_radau_left(k); });
}

void legendre_orthonormal_all(double x, std::span<double> out) {
  if (out.empty()) return;
  const double y = 2.0 * x - 1.0;
  double p_prev = 1.0;
  double p = y;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = std::sqrt(3.0) * y;
  for (std::size_t n = 2; n < out.size(); ++n) {
    const double nn = static_cast<double>(n);
    const double p_next = ((2.0 * nn - 1.0) * y * p - (nn - 1.0) * p_prev) / nn;
    p_prev = p;
    p = p_next;
    out[n] = std::sqrt(2.0 * nn + 1.0) * p;
  }
}

double legendre_orthonormal(int degree, double x) {
  if (degree < 0 || degree > kMaxRuleOrder) {
    throw ParameterError("legendre_orthonormal: degree out of range");
  }
  std::vector<double> values(degree + 1);
  legendre_orthonormal_all(x, values);
  return values[degree];
}

std::vector<double> log_moments(double s, int count) {
  if (count < 1 || count > kMaxMoments) {
    throw ParameterError("log_moments: count " + std::to_string(count) +
                         " outside [1, " + std::to_string(kMaxMoments) + "]");
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ParameterError("log_moments: s must lie in [0,1]");
  }
  std::vector<double> c(count);

  if (s == 0.0 || s == 1.0) {
    c[0] = -1.0;
    // int_0^1 P_v(2z-1) log z dz = (-1)^{v+1} / (v(v+1)); the s = 1 case
    // follows from the reflection z -> 1-z.
    for (int v = 1; v < count; ++v) {
      const double base = std::sqrt(2.0 * v + 1.0) / (static_cast<double>(v) * (v + 1.0));
      c[v] = s == 0.0 ? (v % 2 == 1 ? base : -base) : -base;
    }
    return c;
  }

  const double y = 2.0 * s - 1.0;
  const double a = 1.0 - y;
  const double b = 1.0 + y;
  c[0] = 0.5 * (a * std::log(a) + b * std::log(b) - 2.0) - std::log(2.0);

  // Q_0 .. Q_count on the cut.
  std::vector<double> q(count + 1);
  q[0] = 0.5 * std::log(b / a);
  q[1] = y * q[0] - 1.0;
  for (int n = 2; n <= count; ++n) {
    q[n] = ((2.0 * n - 1.0) * y * q[n - 1] - (n - 1.0) * q[n - 2]) / n;
  }
  for (int v = 1; v < count; ++v) {
    c[v] = (q[v + 1] - q[v - 1]) / std::sqrt(2.0 * v + 1.0);
  }
  return c;
}

}  // namespace nystrom
