#include "nystrom/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <cmath>
#include <numbers>
#include <string>

#include "nystrom/errors.hpp"

namespace nystrom {
namespace {
constexpr double kPi = std::numbers::pi;
}

double DiscretizationParams::threshold() const {
  const double m = nu;
  return std::min(1.0, c / std::pow(m, 2.0 - 2.0 * eps));
}

void DiscretizationParams::validate(bool has_corners) const {
  if (mu < 1 || mu > kMaxRuleOrder || nu < 1 || nu > kMaxRuleOrder) {
    throw ParameterError("rule orders mu, nu must lie in [1, " + std::to_string(kMaxRuleOrder) +
                         "]");
  }
  if (has_corners && !(mu < nu)) throw ParameterError("mu must be smaller than nu");
  if (!(c > 0.0)) throw ParameterError("blend constant c must be positive");
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("blend exponent eps must lie in (0, 1/2)");
}

UnknownMap::UnknownMap(const Decomposition& dec, const DiscretizationParams& params) {
  const int count = dec.subarc_count();
  rules_.resize(count);
  offsets_.resize(count);
  int next = 0;
  for (int i = 0; i < count; ++i) {
    const SubArc& sa = dec.subarc(i);
    rules_[i] = sa.kind == SubArcKind::Central ? &cached_gauss_radau_left(params.nu)
                                               : &cached_gauss_radau_left(params.mu);
    const int nodes = static_cast<int>(rules_[i]->size());
    full_count_ += nodes;
    offsets_[i].resize(nodes);
    for (int h = 0; h < nodes; ++h) {
      if (sa.kind == SubArcKind::Upsilon && h == 0) {
        offsets_[i][h] = offsets_[i - 1][0];
        continue;
      }
      offsets_[i][h] = next++;
      owners_.emplace_back(i, h);
    }
  }
}

std::vector<double> collocation_points(const Decomposition& dec,
                                       const DiscretizationParams& params, int i) {
  const SubArc& sa = dec.subarc(i);
  return cached_gauss_radau_left(sa.kind == SubArcKind::Central ? params.nu : params.mu).nodes;
}

MellinRow blended_mellin_row(const KernelContext& ctx, const DiscretizationParams& params,
                             const QuadratureRule& partner_rule, int i, double s) {
  const double chi = ctx.decomposition().chi_of(i);
  const double tau = params.threshold();
  MellinRow row;
  row.partner.resize(partner_rule.size());
  if (s >= tau) {
    for (std::size_t h = 0; h < partner_rule.size(); ++h) {
      row.partner[h] = partner_rule.weights[h] * kernel_L(chi, partner_rule.nodes[h], s);
    }
    return row;
  }
  // (1/tau) [ s (L_m rho)(tau) + (tau - s) (L rho)(0) ]
  const double w = s / tau;
  for (std::size_t h = 0; h < partner_rule.size(); ++h) {
    row.partner[h] = w * partner_rule.weights[h] * kernel_L(chi, partner_rule.nodes[h], tau);
  }
  row.corner = (1.0 - w) * mellin_corner_coefficient(chi);
  return row;
}

Assembler::Assembler(const Decomposition& dec, const DiscretizationParams& params)
    : dec_(&dec), params_(params), ctx_(dec), map_(dec, params) {
  params_.validate(dec.corner_count() > 0);
  sources_.resize(dec.subarc_count());
  offsets_.resize(dec.subarc_count());
  for (int j = 0; j < dec.subarc_count(); ++j) {
    const QuadratureRule& rule = map_.rule(j);
    const bool corner_piece = dec.subarc(j).kind != SubArcKind::Central;
    for (double x : rule.nodes) {
      sources_[j].push_back(oriented_eval(dec, j, x));
      if (corner_piece) offsets_[j].push_back(subarc_chord(dec, j, 0.0, x));
    }
  }
}

Eigen::RowVectorXd Assembler::row(int i, int node) const {
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(map_.reduced_count());
  const QuadratureRule& own_rule = map_.rule(i);
  const double s = own_rule.nodes[node];
  const Vec2 field = sources_[i][node].point;
  const double scale2 = ctx_.length_scale() * ctx_.length_scale();

  out[map_.column(i, node)] += -kPi;

  for (int j = 0; j < map_.subarc_count(); ++j) {
    const QuadratureRule& rule = map_.rule(j);
    const PairKind kind = ctx_.pair_kind(i, j);
    const double chi = kind == PairKind::MellinAdjacent ? dec_->chi_of(i) : 0.0;
    for (std::size_t h = 0; h < rule.size(); ++h) {
      const CurvePoint& src = sources_[j][h];
      double value;
      if (kind == PairKind::Diagonal && static_cast<int>(h) == node) {
        value = double_layer_diagonal(src);
      } else if (kind == PairKind::MellinAdjacent && h == 0 && node == 0) {
        value = ctx_.corner_limit(i, j);
      } else {
        Vec2 d;
        if (kind == PairKind::MellinAdjacent) {
          d = offsets_[i][node] - offsets_[j][h];
        } else if (kind == PairKind::Diagonal) {
          d = subarc_chord(*dec_, i, rule.nodes[h], s);
        } else {
          d = field - src.point;
        }
        if (dot(d, d) < 1e-28 * scale2) {
          throw NumericalError("assembly: coincident nodes (" + std::to_string(i) + "," +
                               std::to_string(node) + ") and (" + std::to_string(j) + "," +
                               std::to_string(h) + ")");
        }
        value = cross(d, src.d1) / dot(d, d);
        if (kind == PairKind::MellinAdjacent) value -= kernel_L(chi, rule.nodes[h], s);
      }
      const double entry = rule.weights[h] * value;
      if (!std::isfinite(entry)) {
        throw NumericalError("assembly: non-finite entry at (i=" + std::to_string(i) +
                             ", j=" + std::to_string(j) + ", l=" + std::to_string(node) +
                             ", h=" + std::to_string(h) + ")");
      }
      out[map_.column(j, static_cast<int>(h))] += entry;
    }
    if (kind == PairKind::MellinAdjacent) {
      const MellinRow mellin = blended_mellin_row(ctx_, params_, rule, i, s);
      for (std::size_t h = 0; h < rule.size(); ++h) {
        out[map_.column(j, static_cast<int>(h))] += mellin.partner[h];
      }
      out[map_.column(i, 0)] += mellin.corner;
    }
  }
  return out;
}

Eigen::MatrixXd Assembler::matrix(int threads) const {
  const int n = map_.reduced_count();
  Eigen::MatrixXd a(n, n);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(1, n / 64));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    try {
      for (int r = next++; r < n; r = next++) {
        const auto [i, node] = map_.owner(r);
        a.row(r) = row(i, node);
      }
    } catch (...) {
      std::lock_guard<std::mutex> guard(failure_lock);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return a;
}

DenseSystem build_system(const Decomposition& dec, const DiscretizationParams& params,
                         const RhsProvider& rhs) {
  Assembler assembler(dec, params);
  const UnknownMap& map = assembler.map();
  Eigen::VectorXd b(map.reduced_count());
  for (int r = 0; r < map.reduced_count(); ++r) {
    const auto [i, node] = map.owner(r);
    b[r] = rhs(i, map.rule(i).nodes[node]);
    if (!std::isfinite(b[r])) {
      throw NumericalError("assembly: non-finite right-hand side at piece " + std::to_string(i) +
                           ", node " + std::to_string(node));
    }
  }
  return DenseSystem{assembler.matrix(), std::move(b), map, params};
}

}  // namespace nystrom
