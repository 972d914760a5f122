#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "conelevy/geometry.hpp"
#include "support/generators.hpp"

using namespace conelevy;
using conelevy::gen::point_in_disc;
using conelevy::gen::random_k_gon;
using conelevy::gen::random_polygon;

namespace {

ConvexPolygon square(double lo, double hi) {
  return ConvexPolygon::hull_of(std::vector<Vec2>{{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}});
}

// Brute-force vertex enumeration: every pairwise line intersection that
// satisfies all constraints, then the hull.
std::optional<ConvexPolygon> enumerate_vertices(const std::vector<Direction>& u, const std::vector<double>& c) {
  std::vector<Vec2> pts;
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      const double det = cross(u[a].vec(), u[b].vec());
      if (std::abs(det) < 1e-12) continue;
      const Vec2 x{(c[a] * u[b].y() - c[b] * u[a].y()) / det, (u[a].x() * c[b] - u[b].x() * c[a]) / det};
      bool ok = true;
      for (std::size_t k = 0; k < u.size() && ok; ++k) ok = dot(u[k].vec(), x) <= c[k] + 1e-9;
      if (ok) pts.push_back(x);
    }
  }
  return convex_hull(pts);
}

}  // namespace

TEST(ConvexHull, Singleton) {
  const auto h = convex_hull(std::vector<Vec2>{{0, 0}});
  ASSERT_TRUE(h);
  ASSERT_EQ(h->size(), 1u);
  EXPECT_EQ(h->vertices()[0], (Vec2{0, 0}));
}

TEST(ConvexHull, DropsInteriorPoint) {
  const auto h = convex_hull(std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}});
  ASSERT_TRUE(h);
  EXPECT_EQ(h->vertices(), (std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST(ConvexHull, EmptyInputIsEmptyRegion) { EXPECT_FALSE(convex_hull(std::vector<Vec2>{})); }

TEST(ConvexHull, CollinearPointsGiveSegment) {
  const auto h = convex_hull(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}});
  ASSERT_TRUE(h);
  EXPECT_EQ(h->vertices(), (std::vector<Vec2>{{0, 0}, {2, 2}}));
}

TEST(ConvexHull, ContainsAllRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(point_in_disc(rng));
    const ConvexPolygon h = ConvexPolygon::hull_of(pts);
    for (const Vec2& p : pts) EXPECT_TRUE(contains(h, p, 1e-12));
    // Every hull vertex is an input point and the loop turns left throughout.
    const auto& v = h.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NE(std::find(pts.begin(), pts.end(), v[i]), pts.end());
      EXPECT_GT(cross(v[(i + 1) % v.size()] - v[i], v[(i + 2) % v.size()] - v[(i + 1) % v.size()]), 0.0);
    }
  }
}

TEST(ConvexHull, ScaleInvariant) {
  for (double scale : {1e-9, 1e-6, 1.0, 1e6}) {
    for (Vec2 offset : {Vec2{0, 0}, Vec2{3 * scale, -2 * scale}}) {
      const std::vector<Vec2> tri{offset + scale * Vec2{0, 0}, offset + scale * Vec2{1, 0}, offset + scale * Vec2{0.3, 0.7},
                                  offset + scale * Vec2{0.5, 0}};
      const ConvexPolygon h = ConvexPolygon::hull_of(tri);
      EXPECT_EQ(h.size(), 3u) << "scale " << scale;
    }
  }
}

TEST(ConvexHull, Idempotent) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const ConvexPolygon p = random_polygon(rng, 1 + rng() % 12);
    EXPECT_EQ(ConvexPolygon::hull_of(p.vertices()), p);
  }
}

TEST(MinkowskiSum, Squares) {
  EXPECT_TRUE(approx_equal(minkowski_sum(square(0, 1), square(0, 1)), square(0, 2), 0.0));
}

TEST(MinkowskiSum, OriginIsIdentity) {
  std::mt19937_64 rng(3);
  const ConvexPolygon p = random_polygon(rng);
  EXPECT_EQ(minkowski_sum(p, ConvexPolygon::point({0, 0})), p);
}

TEST(MinkowskiSum, MatchesPairwiseSumsOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const ConvexPolygon p = random_k_gon(rng, 5, point_in_disc(rng), 1.0);
    const ConvexPolygon q = random_k_gon(rng, 4, point_in_disc(rng), 0.7);
    const ConvexPolygon s = minkowski_sum(p, q);
    std::vector<Vec2> sums;
    for (Vec2 a : p.vertices()) {
      for (Vec2 b : q.vertices()) sums.push_back(a + b);
    }
    for (Vec2 x : sums) EXPECT_TRUE(contains(s, x, 1e-12));
    for (Vec2 v : s.vertices()) EXPECT_NE(std::find(sums.begin(), sums.end(), v), sums.end());
  }
}

TEST(ScaleSet, Cases) {
  EXPECT_TRUE(approx_equal(scale_set(2.0, square(0, 1)), square(0, 2), 0.0));
  std::mt19937_64 rng(5);
  const ConvexPolygon zero = scale_set(0.0, random_polygon(rng));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero.vertices()[0], (Vec2{0, 0}));
  const auto tri = ConvexPolygon::hull_of(std::vector<Vec2>{{1, 0}, {0, 1}, {1, 1}});
  const auto expect = ConvexPolygon::hull_of(std::vector<Vec2>{{-1, 0}, {0, -1}, {-1, -1}});
  EXPECT_EQ(scale_set(-1.0, tri), expect);
}

TEST(SupportValue, Basics) {
  EXPECT_DOUBLE_EQ(support_value(square(0, 1), Direction({1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(support_value(ConvexPolygon::point({1, 2}), Direction({0, 1})), 2.0);
}

TEST(SupportValue, MatchesDenseBoundarySampling) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const ConvexPolygon p = random_polygon(rng, 10);
    const Direction u = Direction::from_angle(gen::uniform(rng, 0, 2 * std::numbers::pi));
    double brute = -1e300;
    const auto& v = p.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 a = v[i], b = v[(i + 1) % v.size()];
      for (int s = 0; s <= 1000; ++s) brute = std::max(brute, dot(u.vec(), a + (s / 1000.0) * (b - a)));
    }
    EXPECT_NEAR(support_value(p, u), brute, 1e-9);
  }
}

TEST(Hausdorff, Basics) {
  std::mt19937_64 rng(7);
  const ConvexPolygon p = random_polygon(rng);
  EXPECT_EQ(hausdorff(p, p), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff(ConvexPolygon::point({0, 0}), ConvexPolygon::point({3, 4})), 5.0);
}

TEST(Hausdorff, NestedSquaresMatchGridBruteForce) {
  // sup-inf over 0.05-spaced grids of both squares.
  auto grid = [](double hi) {
    std::vector<Vec2> g;
    const int n = static_cast<int>(std::lround(hi / 0.05));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) g.push_back({i * 0.05, j * 0.05});
    }
    return g;
  };
  const auto a = grid(1.0), b = grid(2.0);
  auto one_sided = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double h = 0.0;
    for (Vec2 x : from) {
      double best = 1e300;
      for (Vec2 y : to) best = std::min(best, norm(x - y));
      h = std::max(h, best);
    }
    return h;
  };
  const double brute = std::max(one_sided(a, b), one_sided(b, a));
  EXPECT_NEAR(brute, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(hausdorff(square(0, 1), square(0, 2)), brute, 1e-12);
}

TEST(Hausdorff, SupportDualityOn720Directions) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const ConvexPolygon p = random_polygon(rng, 1 + rng() % 8, point_in_disc(rng), 1.0);
    const ConvexPolygon q = random_polygon(rng, 1 + rng() % 8, point_in_disc(rng), 1.0);
    double sup = 0.0;
    for (int k = 0; k < 720; ++k) {
      const Direction u = Direction::from_angle(2 * std::numbers::pi * k / 720.0);
      sup = std::max(sup, std::abs(support_value(p, u) - support_value(q, u)));
    }
    std::vector<Vec2> both = p.vertices();
    both.insert(both.end(), q.vertices().begin(), q.vertices().end());
    const double diam = diameter(ConvexPolygon::hull_of(both));
    // s_P - s_Q is diam-Lipschitz on the circle and may peak at a kink, so the
    // half-step error is first order in the grid spacing.
    EXPECT_LE(std::abs(hausdorff(p, q) - sup), diam * std::numbers::pi / 720 + 1e-9);
  }
}

TEST(Hausdorff, DenseSupportSweepConverges) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexPolygon p = random_polygon(rng, 6, point_in_disc(rng), 1.0);
    const ConvexPolygon q = random_polygon(rng, 6, point_in_disc(rng), 1.0);
    double sup = 0.0;
    for (int k = 0; k < 200000; ++k) {
      const Direction u = Direction::from_angle(2 * std::numbers::pi * k / 200000.0);
      sup = std::max(sup, std::abs(support_value(p, u) - support_value(q, u)));
    }
    EXPECT_LE(sup, hausdorff(p, q) + 1e-12);
    EXPECT_NEAR(sup, hausdorff(p, q), 6.0 * std::numbers::pi / 200000);
  }
}

TEST(Hausdorff, SymmetricAndPositive) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const ConvexPolygon p = random_polygon(rng), q = random_polygon(rng, 5, {0.3, 0.1});
    EXPECT_DOUBLE_EQ(hausdorff(p, q), hausdorff(q, p));
    EXPECT_GT(hausdorff(p, q), 0.0);
  }
}

TEST(SupportValue, AdditiveAndHomogeneous) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const ConvexPolygon p = random_polygon(rng, 1 + rng() % 9, point_in_disc(rng, {0, 0}, 3));
    const ConvexPolygon q = random_polygon(rng, 1 + rng() % 9, point_in_disc(rng, {0, 0}, 3));
    const double lambda = gen::uniform(rng, 0.01, 10.0);
    const Direction u = Direction::from_angle(gen::uniform(rng, 0, 2 * std::numbers::pi));
    EXPECT_NEAR(support_value(minkowski_sum(p, q), u), support_value(p, u) + support_value(q, u), 1e-9);
    EXPECT_NEAR(support_value(scale_set(lambda, p), u), lambda * support_value(p, u), 1e-9);
  }
}

TEST(Cone, Contains) {
  const ConeSpec q1 = ConeSpec::first_quadrant();
  EXPECT_TRUE(cone_contains(q1, {1, 2}));
  EXPECT_FALSE(cone_contains(q1, {-1, 0.5}));
  EXPECT_TRUE(cone_contains(q1, {0, 0}));

  const ConeSpec k = ConeSpec::spanned_by({1, 0}, {1, 1});
  // Oracle: x = a (1,0) + b (1,1) with a, b >= 0.
  const Vec2 x{2, 1};
  const double b = x.y, a = x.x - x.y;
  ASSERT_GE(a, 0.0);
  ASSERT_GE(b, 0.0);
  EXPECT_TRUE(cone_contains(k, x));
  EXPECT_FALSE(cone_contains(k, {1, 2}));
}

TEST(Cone, Properness) {
  EXPECT_TRUE(cone_is_proper(ConeSpec::first_quadrant()));
  EXPECT_FALSE(cone_is_proper(ConeSpec({{0, 1}}, {{1, 0}, {-1, 0}, {0, 1}})));
  EXPECT_FALSE(cone_is_proper(ConeSpec({}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}})));
  EXPECT_TRUE(cone_is_proper(ConeSpec::spanned_by({1, 0}, {1, 1})));
}

TEST(Cone, RejectsGeneratorOutsideConstraints) {
  EXPECT_THROW(ConeSpec({{1, 0}, {0, 1}}, {{-1, 0}}), std::invalid_argument);
}

TEST(Cone, ClosedUnderAdditionAndScaling) {
  std::mt19937_64 rng(13);
  const std::vector<ConeSpec> cones{ConeSpec::first_quadrant(), ConeSpec::spanned_by({1, 0}, {1, 1}),
                                    ConeSpec::spanned_by({1, -0.2}, {-0.3, 1})};
  for (const ConeSpec& k : cones) {
    for (int trial = 0; trial < 500; ++trial) {
      const Vec2 x = point_in_disc(rng, {0, 0}, 5), y = point_in_disc(rng, {0, 0}, 5);
      if (!cone_contains(k, x) || !cone_contains(k, y)) continue;
      EXPECT_TRUE(cone_contains(k, x + y));
      EXPECT_TRUE(cone_contains(k, gen::uniform(rng, 0.001, 100) * x));
    }
  }
}

TEST(HalfspaceIntersection, AxisBox) {
  const std::vector<Direction> u{Direction({1, 0}), Direction({0, 1}), Direction({-1, 0}), Direction({0, -1})};
  const std::vector<double> c{1, 1, 0, 0};
  const auto r = halfspace_intersection(u, c);
  ASSERT_TRUE(std::holds_alternative<ConvexPolygon>(r));
  EXPECT_TRUE(approx_equal(std::get<ConvexPolygon>(r), square(0, 1), 1e-15));
}

TEST(HalfspaceIntersection, ContradictorySlabsAreEmpty) {
  const std::vector<Direction> u{Direction({1, 0}), Direction({-1, 0})};
  const std::vector<double> c{-1, -1};
  EXPECT_TRUE(std::holds_alternative<EmptyRegion>(halfspace_intersection(u, c)));
}

TEST(HalfspaceIntersection, OpenSlabIsUnbounded) {
  const std::vector<Direction> u{Direction({1, 0}), Direction({-1, 0}), Direction({0, 1})};
  const std::vector<double> c{1, 1, 1};
  EXPECT_TRUE(std::holds_alternative<Unbounded>(halfspace_intersection(u, c)));
}

TEST(HalfspaceIntersection, BoundedButEmpty) {
  const std::vector<Direction> u{Direction({1, 0}), Direction({0, 1}), Direction({-1, -1})};
  const std::vector<double> c{-1, -1, 0};
  EXPECT_TRUE(std::holds_alternative<EmptyRegion>(halfspace_intersection(u, c)));
}

TEST(HalfspaceIntersection, RecoversCircumscribedPolygonOfTriangle) {
  std::mt19937_64 rng(14);
  std::vector<Direction> u;
  for (int k = 0; k < 16; ++k) u.push_back(Direction::from_angle(2 * std::numbers::pi * k / 16));
  for (int trial = 0; trial < 100; ++trial) {
    const ConvexPolygon t = random_k_gon(rng, 3, point_in_disc(rng, {0, 0}, 2));
    std::vector<double> c;
    for (const auto& d : u) c.push_back(support_value(t, d));
    const auto r = halfspace_intersection(u, c);
    ASSERT_TRUE(std::holds_alternative<ConvexPolygon>(r));
    const ConvexPolygon& p = std::get<ConvexPolygon>(r);
    EXPECT_TRUE(contains(p, t, 1e-9));
    for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(support_value(p, u[k]), c[k], 1e-9);
    const auto oracle = enumerate_vertices(u, c);
    ASSERT_TRUE(oracle);
    EXPECT_LE(hausdorff(p, *oracle), 1e-9);
  }
}

TEST(HalfspaceIntersection, DegenerateSetsFromTightConstraints) {
  std::vector<Direction> u;
  for (int k = 0; k < 12; ++k) u.push_back(Direction::from_angle(2 * std::numbers::pi * k / 12));
  for (const ConvexPolygon& target :
       {ConvexPolygon::point({0.3, -2}), ConvexPolygon::hull_of(std::vector<Vec2>{{0, 0}, {1, 0}}),
        ConvexPolygon::hull_of(std::vector<Vec2>{{-1, -1}, {0, -1 + std::sqrt(3.0)}})}) {
    // Segment normals are grid directions, so the circumscribed polygon is the set itself.
    std::vector<double> c;
    for (const auto& d : u) c.push_back(support_value(target, d));
    const auto r = halfspace_intersection(u, c);
    ASSERT_TRUE(std::holds_alternative<ConvexPolygon>(r));
    EXPECT_LE(hausdorff(std::get<ConvexPolygon>(r), target), 1e-9);
  }
}
