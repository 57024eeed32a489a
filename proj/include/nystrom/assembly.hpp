#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "nystrom/geometry.hpp"
#include "nystrom/kernels.hpp"
#include "nystrom/quadrature.hpp"

namespace nystrom {

/// Rule orders and the corner blending parameters.
///
/// The Mellin block is replaced on [0, tau) with tau = min(1, c / nu^(2-2 eps))
/// by a linear blend between its value at tau and the exact corner row.
struct DiscretizationParams {
  int mu = 8;     // Radau order on corner pieces
  int nu = 32;    // Radau order on central pieces
  double c = 100.0;
  double eps = 1e-3;

  double threshold() const;

  /// Throws ParameterError. mu < nu is only required when corners exist.
  void validate(bool has_corners) const;
};

/// Maps (sub-arc, node) pairs to columns of the reduced system. The corner
/// node of Upsilon_k shares the column of the corner node of Gamma_k.
class UnknownMap {
 public:
  UnknownMap(const Decomposition& dec, const DiscretizationParams& params);

  const QuadratureRule& rule(int i) const { return *rules_[i]; }
  int column(int i, int node) const { return offsets_[i][node]; }
  int subarc_count() const { return static_cast<int>(rules_.size()); }

  /// n (2 mu + nu + 3): one unknown per (sub-arc, node).
  int full_count() const { return full_count_; }
  /// Columns after merging corner values (full_count - n).
  int reduced_count() const { return static_cast<int>(owners_.size()); }

  /// (sub-arc, node) whose collocation equation forms row r.
  std::pair<int, int> owner(int r) const { return owners_[r]; }

 private:
  std::vector<const QuadratureRule*> rules_;
  std::vector<std::vector<int>> offsets_;
  std::vector<std::pair<int, int>> owners_;
  int full_count_ = 0;
};

/// Collocation nodes of sub-arc i (the Radau nodes of its rule).
std::vector<double> collocation_points(const Decomposition& dec,
                                       const DiscretizationParams& params, int i);

using RhsProvider = std::function<double(int i, double s)>;

struct DenseSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  UnknownMap map;
  DiscretizationParams params;
};

/// Coefficients of the blended Mellin block in the row collocated at
/// sigma_i(s): weights on the partner piece's nodes and on the corner column.
struct MellinRow {
  std::vector<double> partner;
  double corner = 0.0;
};

MellinRow blended_mellin_row(const KernelContext& ctx, const DiscretizationParams& params,
                             const QuadratureRule& partner_rule, int i, double s);

/// Row-wise assembler. Keeps the sampled sources so rows can be built
/// independently (and in any order).
class Assembler {
 public:
  /// `dec` must outlive the assembler.
  Assembler(const Decomposition& dec, const DiscretizationParams& params);

  const UnknownMap& map() const { return map_; }
  const KernelContext& context() const { return ctx_; }

  /// Row of the collocation equation at node `node` of sub-arc i, over the
  /// reduced columns. Duplicate corner rows can be requested too.
  Eigen::RowVectorXd row(int i, int node) const;

  /// Rows are built independently on `threads` workers (0: hardware
  /// concurrency); the result does not depend on the worker count.
  Eigen::MatrixXd matrix(int threads = 0) const;

 private:
  const Decomposition* dec_;
  DiscretizationParams params_;
  KernelContext ctx_;
  UnknownMap map_;
  std::vector<std::vector<CurvePoint>> sources_;  // oriented samples per node
  std::vector<std::vector<Vec2>> offsets_;        // sigma_j(x_h) - corner, corner pieces
};

/// Matrix of -pi I + blended Mellin blocks + Nystrom operators, collocated
/// at the quadrature nodes, plus the right-hand side from `rhs`.
DenseSystem build_system(const Decomposition& dec, const DiscretizationParams& params,
                         const RhsProvider& rhs);

}  // namespace nystrom
