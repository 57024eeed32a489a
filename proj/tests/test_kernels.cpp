#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nystrom/errors.hpp"
#include "nystrom/kernels.hpp"
#include "nystrom/quadrature.hpp"
#include "oracles.hpp"

using namespace nystrom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

struct Family {
  const char* name;
  double phi;
  double delta;
};

const Family kFamilies[] = {
    {"heart", 5.0 * kPi / 3.0, 3.87e-7},
    {"teardrop", 2.0 * kPi / 3.0, 5.37e-11},
    {"boomerang", 1.5 * kPi, 5.16e-8},
    {"triangle", 0.0, 1e-7},
};

Decomposition circle() { return decompose(make_example_domain("circle", 0.0), 1e-7); }

Decomposition square() {
  return decompose(make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1e-7);
}

}  // namespace

TEST_CASE("Mellin kernel values", "[kernels]") {
  CHECK_THAT(kernel_L(0.5, 1.0, 1.0), WithinAbs(-0.5, 1e-15));
  CHECK(kernel_L(0.5, 0.7, 0.0) == 0.0);
  for (double chi : {0.3, 2.0 / 3.0, -0.45}) {
    CAPTURE(chi);
    CHECK_THAT(kernel_L(-chi, 0.2, 0.6), WithinAbs(-kernel_L(chi, 0.2, 0.6), 1e-15));
  }
  CHECK_THROWS_AS(kernel_L(0.5, 0.0, 0.0), ParameterError);
  CHECK_THROWS_AS(kernel_L(1.0, 0.1, 0.1), ParameterError);
  CHECK_THROWS_AS(kernel_L(-1.2, 0.1, 0.1), ParameterError);
  CHECK_THROWS_AS(kernel_L(0.0, 0.1, 0.1), ParameterError);
}

TEST_CASE("corner coefficient is the limit of the Mellin integral", "[kernels][oracle]") {
  for (double chi : {2.0 / 3.0, -2.0 / 3.0, 0.5, -0.5, 0.75}) {
    CAPTURE(chi);
    CHECK_THAT(mellin_corner_coefficient(chi), WithinAbs(-chi * kPi, 1e-15));
    const double s = 1e-6;
    const double integral = oracle::graded_integral([&](double t) { return kernel_L(chi, t, s); },
                                                    0.0, 1.0);
    CHECK_THAT(integral, WithinAbs(-chi * kPi, 1e-4));
  }
  CHECK_THROWS_AS(mellin_corner_coefficient(0.0), ParameterError);
}

TEST_CASE("circle double-layer kernel is constant", "[kernels]") {
  const Decomposition dec = circle();
  const KernelContext ctx(dec);
  REQUIRE(dec.subarc_count() == 1);
  for (double t : {0.0, 0.1, 0.5, 0.77}) {
    for (double s : {0.0, 0.05, 0.5, 0.77, 0.999}) {
      CAPTURE(t, s);
      CHECK_THAT(kernel_K(ctx, 0, 0, t, s), WithinAbs(-kPi, 1e-10));
    }
  }
  const QuadratureRule& rule = cached_gauss_legendre(16);
  for (double s : {0.0, 0.3, 0.9}) {
    double sum = 0.0;
    for (std::size_t h = 0; h < rule.size(); ++h) {
      sum += rule.weights[h] * kernel_K(ctx, 0, 0, rule.nodes[h], s);
    }
    CHECK_THAT(sum, WithinAbs(-kPi, 1e-12));
  }
}

TEST_CASE("pair classification", "[kernels]") {
  const Decomposition dec = square();
  const KernelContext ctx(dec);
  CHECK(ctx.pair_kind(4, 4) == PairKind::Diagonal);
  CHECK(ctx.pair_kind(3, 4) == PairKind::MellinAdjacent);
  CHECK(ctx.pair_kind(4, 3) == PairKind::MellinAdjacent);
  CHECK(ctx.pair_kind(4, 5) == PairKind::Smooth);
  CHECK(ctx.pair_kind(1, 3) == PairKind::Smooth);
  CHECK_THROWS_AS(kernel_M(ctx, 1, 5, 0.1, 0.1), ParameterError);
  CHECK_THROWS_AS(ctx.corner_limit(2, 3), ParameterError);
}

TEST_CASE("straight corners cancel exactly", "[kernels][property]") {
  for (const Decomposition& dec : {square(), decompose(make_example_domain("triangle", 0), 1e-7)}) {
    const KernelContext ctx(dec);
    for (int k = 0; k < dec.corner_count(); ++k) {
      for (auto [i, j] : {std::pair{3 * k, 3 * k + 1}, std::pair{3 * k + 1, 3 * k}}) {
        for (double t : {0.0, 1e-6, 0.1, 0.5, 1.0}) {
          for (double s : {0.0, 1e-6, 0.1, 0.5, 1.0}) {
            CAPTURE(k, i, j, t, s);
            const double scale = t == 0.0 && s == 0.0 ? 1.0 : 1.0 + std::abs(kernel_L(dec.chi_of(i), t, s));
            CHECK(std::abs(kernel_M(ctx, i, j, t, s)) <= 1e-12 * scale);
          }
        }
      }
    }
  }
}

TEST_CASE("corner limit agrees with diagonal extrapolation", "[kernels][oracle]") {
  for (const Family& f : kFamilies) {
    const Decomposition dec = decompose(make_example_domain(f.name, f.phi), f.delta);
    const KernelContext ctx(dec);
    for (int k = 0; k < dec.corner_count(); ++k) {
      for (auto [i, j] : {std::pair{3 * k, 3 * k + 1}, std::pair{3 * k + 1, 3 * k}}) {
        CAPTURE(f.name, i, j);
        const double limit = ctx.corner_limit(i, j);
        CHECK_THAT(corner_limit_richardson(ctx, i, j), WithinAbs(limit, 1e-8));
        CHECK(kernel_M(ctx, i, j, 0.0, 0.0) == limit);
      }
    }
  }
}

TEST_CASE("M vanishes to K on the s = 0 edge", "[kernels]") {
  const Decomposition dec = decompose(make_example_domain("heart", 5.0 * kPi / 3.0), 3.87e-7);
  const KernelContext ctx(dec);
  for (double t : {1e-4, 0.3, 1.0}) {
    CAPTURE(t);
    CHECK(kernel_M(ctx, 0, 1, t, 0.0) == kernel_K(ctx, 0, 1, t, 0.0));
    CHECK(kernel_M(ctx, 1, 0, t, 0.0) == kernel_K(ctx, 1, 0, t, 0.0));
  }
}

TEST_CASE("Mellin cancellation near every corner", "[kernels][property]") {
  // The absolute floor is the rounding level of K and L at h = 1e-4.
  for (const Family& f : kFamilies) {
    const Decomposition dec = decompose(make_example_domain(f.name, f.phi), f.delta);
    const KernelContext ctx(dec);
    for (int k = 0; k < dec.corner_count(); ++k) {
      for (auto [i, j] : {std::pair{3 * k, 3 * k + 1}, std::pair{3 * k + 1, 3 * k}}) {
        double previous = std::abs(kernel_M(ctx, i, j, 1e-2, 1e-2));
        for (double h : {1e-3, 1e-4}) {
          const double current = std::abs(kernel_M(ctx, i, j, h, h));
          CAPTURE(f.name, i, j, h, previous, current);
          CHECK(current <= 1.1 * previous + 1e-10);
          previous = current;
        }
      }
    }
  }
}

TEST_CASE("teardrop corner kernel stays bounded", "[kernels][property]") {
  const Decomposition dec = decompose(make_example_domain("teardrop", 2.0 * kPi / 3.0), 5.37e-11);
  const KernelContext ctx(dec);
  double worst = 0.0;
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}}) {
    for (double t : {1e-3, 1e-4, 1e-5}) {
      for (double s : {1e-3, 1e-4, 1e-5}) worst = std::max(worst, std::abs(kernel_M(ctx, i, j, t, s)));
    }
  }
  INFO("max |M| = " << worst);
  CHECK(worst < 1.0);
}

TEST_CASE("diagonal branch is the limit of nearby values", "[kernels]") {
  const Decomposition dec = decompose(make_example_domain("heart", 5.0 * kPi / 3.0), 3.87e-7);
  const KernelContext ctx(dec);
  for (int i : {0, 1, 2}) {
    for (double t : {0.1, 0.5, 0.9}) {
      CAPTURE(i, t);
      const double diag = kernel_K(ctx, i, i, t, t);
      CHECK_THAT(kernel_K(ctx, i, i, t, t + 1e-7), WithinAbs(diag, 1e-6 * (1.0 + std::abs(diag))));
      CHECK_THAT(kernel_K(ctx, i, i, t + 1e-7, t), WithinAbs(diag, 1e-6 * (1.0 + std::abs(diag))));
    }
  }
}

TEST_CASE("coincident points are rejected", "[kernels][errors]") {
  const Decomposition dec = square();
  const KernelContext ctx(dec);
  CHECK_THROWS_AS(kernel_K(ctx, 0, 1, 0.0, 0.0), NumericalError);
  // End of Upsilon_0 and start of C_0 are the same point.
  CHECK_THROWS_AS(kernel_K(ctx, 2, 1, 1.0, 0.0), NumericalError);
}

TEST_CASE("exterior double-layer kernel", "[kernels]") {
  const CurvePoint segment{{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  CHECK_THAT(double_layer({0.0, 1.0}, segment), WithinAbs(-1.0, 1e-15));

  const Decomposition dec = square();
  const KernelContext ctx(dec);
  // C_0 lies on the bottom edge y = 0 and runs in +x.
  const SubArc& c0 = dec.subarc(2);
  const double x = subarc_eval(dec, 2, 0.5).point.x;
  CHECK_THAT(kernel_H(ctx, 2, x, 1.0, 0.5), WithinAbs(-(c0.b - c0.a), 1e-14));
  CHECK_THROWS_AS(kernel_H(ctx, 2, x, 0.0, 0.5), NumericalError);

  // A reversed Gamma piece: the raw derivative flips the sign, the oriented one does not.
  const Decomposition heart = decompose(make_example_domain("heart", 5.0 * kPi / 3.0), 3.87e-7);
  const KernelContext hctx(heart);
  REQUIRE(heart.subarc(0).reversed);
  const Vec2 far{3.0, 2.0};
  for (double t : {0.2, 0.8}) {
    const double raw = double_layer(far, subarc_eval(heart, 0, t));
    CHECK_THAT(kernel_H(hctx, 0, far.x, far.y, t), WithinAbs(-raw, 1e-15));
    CHECK_THAT(kernel_H(hctx, 0, far.x, far.y, t),
               WithinAbs(double_layer(far, oriented_eval(heart, 0, t)), 1e-15));
  }
}

TEST_CASE("chords keep relative accuracy near the corner", "[kernels]") {
  const Decomposition dec = decompose(make_example_domain("teardrop", 2.0 * kPi / 3.0), 5.37e-11);
  for (int i : {0, 1}) {
    const Vec2 d1 = subarc_eval(dec, i, 0.0).d1;
    for (double s : {1e-6, 1e-8}) {
      CAPTURE(i, s);
      const Vec2 chord = subarc_chord(dec, i, 0.0, s);
      CHECK_THAT(chord.x, WithinRel(s * d1.x, 1e-5));
      CHECK_THAT(chord.y, WithinRel(s * d1.y, 1e-5));
    }
    const Vec2 long_chord = subarc_chord(dec, 2, 0.1, 0.9);
    const Vec2 direct = subarc_eval(dec, 2, 0.9).point - subarc_eval(dec, 2, 0.1).point;
    CHECK_THAT(long_chord.x, WithinAbs(direct.x, 1e-15));
    CHECK_THAT(long_chord.y, WithinAbs(direct.y, 1e-15));
  }
}
