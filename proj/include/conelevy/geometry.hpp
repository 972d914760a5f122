#pragma once

// Exact 2-D convex geometry: polygons, Minkowski arithmetic, support values,
// Hausdorff distance, halfspace intersection and polyhedral cones.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace conelevy {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Unit vector in R^2.
class Direction {
 public:
  /// Normalizes `v`; throws for the zero vector.
  explicit Direction(Vec2 v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("Direction: zero or non-finite vector");
    }
    v_ = {v.x / n, v.y / n};
  }

  static Direction from_angle(double theta) {
    Direction d;
    d.v_ = {std::cos(theta), std::sin(theta)};
    return d;
  }

  Vec2 vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double angle() const { return std::atan2(v_.y, v_.x); }
  Direction operator-() const {
    Direction d;
    d.v_ = -v_;
    return d;
  }

 private:
  Direction() = default;
  Vec2 v_{1.0, 0.0};
};

struct EmptyRegion {};
struct Unbounded {};

namespace detail {

inline double coord_scale(std::span<const Vec2> pts) {
  double s = 1.0;
  for (const Vec2& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

// Distance from p to the closed segment [a, b].
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace detail

/// Non-empty compact convex set in R^2 stored as its extreme points in
/// counterclockwise order, starting at the lexicographically smallest vertex.
/// A single vertex is a point, two vertices a segment.
class ConvexPolygon {
 public:
  /// The singleton {p}.
  static ConvexPolygon point(Vec2 p) { return ConvexPolygon(std::vector<Vec2>{p}); }

  /// Builds the hull of `pts`; throws std::invalid_argument for an empty list.
  static ConvexPolygon hull_of(std::span<const Vec2> pts);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  explicit ConvexPolygon(std::vector<Vec2> v) : vertices_(std::move(v)) {}
  friend std::optional<ConvexPolygon> convex_hull(std::span<const Vec2> points);

  std::vector<Vec2> vertices_;
};

/// Minimal CCW extreme-point list; std::nullopt stands for the empty region.
/// Points within 1e-12 of the largest coordinate are merged and vertices whose
/// turn has sine at most 1e-12 are dropped.
inline std::optional<ConvexPolygon> convex_hull(std::span<const Vec2> points) {
  if (points.empty()) return std::nullopt;
  for (const Vec2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("convex_hull: non-finite point");
    }
  }
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });

  double scale = 0.0;
  for (const Vec2& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double merge = 1e-12 * scale;

  std::vector<Vec2> uniq;
  uniq.reserve(pts.size());
  for (const Vec2& p : pts) {
    bool dup = false;
    // Points are x-sorted, so only a short tail can be within `merge`.
    for (auto it = uniq.rbegin(); it != uniq.rend() && p.x - it->x <= merge; ++it) {
      if (std::abs(p.y - it->y) <= merge) {
        dup = true;
        break;
      }
    }
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() <= 2) {
    if (uniq.size() == 2 && norm(uniq[1] - uniq[0]) <= merge) uniq.pop_back();
    return ConvexPolygon(std::move(uniq));
  }

  // Andrew's monotone chain.
  std::vector<Vec2> h(2 * uniq.size());
  std::size_t k = 0;
  // Left turn with sine above 1e-12, so the test does not depend on the size of the set.
  auto keeps = [](Vec2 o, Vec2 a, Vec2 b) { return cross(a - o, b - o) > 1e-12 * norm(a - o) * norm(b - o); };
  for (const Vec2& p : uniq) {
    while (k >= 2 && !keeps(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = uniq[i];
    while (k >= lower && !keeps(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  if (h.size() == 2 && norm(h[1] - h[0]) <= merge) h.pop_back();
  return ConvexPolygon(std::move(h));
}

inline ConvexPolygon ConvexPolygon::hull_of(std::span<const Vec2> pts) {
  auto h = convex_hull(pts);
  if (!h) throw std::invalid_argument("ConvexPolygon::hull_of: empty point list");
  return std::move(*h);
}

inline double support_value(const ConvexPolygon& p, Vec2 u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : p.vertices()) best = std::max(best, dot(u, v));
  return best;
}

inline double support_value(const ConvexPolygon& p, const Direction& u) { return support_value(p, u.vec()); }

inline ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Vec2> sums;
  sums.reserve(p.size() * q.size());
  for (const Vec2& a : p.vertices()) {
    for (const Vec2& b : q.vertices()) sums.push_back(a + b);
  }
  return ConvexPolygon::hull_of(sums);
}

inline ConvexPolygon scale_set(double lambda, const ConvexPolygon& p) {
  std::vector<Vec2> scaled;
  scaled.reserve(p.size());
  for (const Vec2& v : p.vertices()) scaled.push_back(lambda * v);
  return ConvexPolygon::hull_of(scaled);
}

/// Pairwise-product hull {(a.x*b.x, a.y*b.y)}: the componentwise set product.
inline ConvexPolygon product_set(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Vec2> prods;
  prods.reserve(p.size() * q.size());
  for (const Vec2& a : p.vertices()) {
    for (const Vec2& b : q.vertices()) prods.push_back({a.x * b.x, a.y * b.y});
  }
  return ConvexPolygon::hull_of(prods);
}

/// Euclidean distance from `x` to the polygon (0 inside).
inline double distance_to(Vec2 x, const ConvexPolygon& p) {
  const auto& v = p.vertices();
  if (v.size() == 1) return norm(x - v[0]);
  if (v.size() == 2) return detail::segment_distance(x, v[0], v[1]);
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[(i + 1) % v.size()] - v[i], x - v[i]) < 0.0) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, detail::segment_distance(x, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

inline bool contains(const ConvexPolygon& p, Vec2 x, double tol = 1e-9) { return distance_to(x, p) <= tol; }

/// Every vertex of `inner` lies in `outer` within `tol`.
inline bool contains(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol = 1e-9) {
  return std::all_of(inner.vertices().begin(), inner.vertices().end(),
                     [&](Vec2 v) { return contains(outer, v, tol); });
}

/// Hausdorff distance. The distance to a convex set is a convex function, so
/// each one-sided supremum is attained at a vertex.
inline double hausdorff(const ConvexPolygon& p, const ConvexPolygon& q) {
  double h = 0.0;
  for (const Vec2& a : p.vertices()) h = std::max(h, distance_to(a, q));
  for (const Vec2& b : q.vertices()) h = std::max(h, distance_to(b, p));
  return h;
}

inline double diameter(const ConvexPolygon& p) {
  double d = 0.0;
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, norm(v[i] - v[j]));
  }
  return d;
}

/// Exact-vertex equality within `tol` (same vertex count and order).
inline bool approx_equal(const ConvexPolygon& p, const ConvexPolygon& q, double tol) {
  if (p.size() != q.size()) return hausdorff(p, q) <= tol;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (norm(p.vertices()[i] - q.vertices()[i]) > tol) return hausdorff(p, q) <= tol;
  }
  return true;
}

using HalfspaceResult = std::variant<ConvexPolygon, EmptyRegion, Unbounded>;

namespace detail {

// Clips a convex vertex loop against {x : <u,x> <= c}; points within `tol`
// of the boundary count as inside.
inline void clip(std::vector<Vec2>& poly, std::vector<Vec2>& scratch, Vec2 u, double c, double tol) {
  scratch.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i];
    const Vec2 q = poly[(i + 1) % n];
    const double dp = dot(u, p) - c;
    const double dq = dot(u, q) - c;
    const bool pin = dp <= tol;
    const bool qin = dq <= tol;
    if (pin && qin) {
      scratch.push_back(q);
    } else if (pin != qin) {
      const double t = std::clamp(dp / (dp - dq), 0.0, 1.0);
      scratch.push_back(p + t * (q - p));
      if (qin) scratch.push_back(q);
    }
  }
  poly.swap(scratch);
}


}  // namespace detail

/// Intersection of the halfplanes {x : <normals[k], x> <= offsets[k]}.
/// Clips a box that provably contains the region. Regions whose normals leave
/// an angular gap of at least pi are reported Unbounded unless they are empty.
inline HalfspaceResult halfspace_intersection(std::span<const Direction> normals, std::span<const double> offsets) {
  if (normals.size() != offsets.size() || normals.empty()) {
    throw std::invalid_argument("halfspace_intersection: need equal-length, non-empty constraint lists");
  }
  const std::size_t n = normals.size();
  double cscale = 1.0;
  for (double c : offsets) {
    if (!std::isfinite(c)) throw std::invalid_argument("halfspace_intersection: non-finite offset");
    cscale = std::max(cscale, std::abs(c));
  }
  const double tol = 1e-12 * cscale;

  std::vector<std::size_t> order(n);
  std::vector<double> angle(n);
  for (std::size_t k = 0; k < n; ++k) {
    order[k] = k;
    angle[k] = normals[k].angle();
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });

  // Bounded iff consecutive normals leave no angular gap of pi or more. Then
  // the nearest normal to x/|x| is within gap/2, so |x| cos(gap/2) <= max c.
  double gap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double next = k + 1 < n ? angle[order[k + 1]] : angle[order[0]] + 2.0 * std::numbers::pi;
    gap = std::max(gap, next - angle[order[k]]);
  }
  const bool bounded = gap < std::numbers::pi - 1e-9;
  double cmax = 0.0;
  for (double c : offsets) cmax = std::max(cmax, c);
  const double r = bounded ? 2.0 * (cmax + cscale) / std::cos(gap / 2.0) : 1e6 * cscale;

  std::vector<Vec2> poly{{-r, -r}, {r, -r}, {r, r}, {-r, r}};
  std::vector<Vec2> scratch;
  for (std::size_t k = 0; k < n && !poly.empty(); ++k) {
    detail::clip(poly, scratch, normals[k].vec(), offsets[k], tol);
  }
  if (poly.empty()) return EmptyRegion{};
  if (!bounded) return Unbounded{};
  return ConvexPolygon::hull_of(poly);
}

/// Polyhedral closed convex cone K = {x : <n_i, x> >= 0 for all i} with a
/// redundant generator list used for sampling.
class ConeSpec {
 public:
  ConeSpec(std::vector<Vec2> normals, std::vector<Vec2> generators, double tol = 1e-9)
      : normals_(std::move(normals)), generators_(std::move(generators)) {
    for (const Vec2& n : normals_) {
      if (!(norm(n) > 0.0)) throw std::invalid_argument("ConeSpec: zero normal");
    }
    for (std::size_t g = 0; g < generators_.size(); ++g) {
      const Vec2 v = generators_[g];
      for (const Vec2& n : normals_) {
        if (dot(n, v) < -tol * std::max(1.0, norm(v) * norm(n))) {
          throw std::invalid_argument("ConeSpec: generator #" + std::to_string(g) + " violates a halfspace constraint");
        }
      }
    }
  }

  static ConeSpec first_quadrant() { return ConeSpec({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}); }

  /// Cone spanned by two generators g1, g2 with cross(g1, g2) > 0.
  static ConeSpec spanned_by(Vec2 g1, Vec2 g2) {
    if (!(cross(g1, g2) > 0.0)) throw std::invalid_argument("ConeSpec::spanned_by: generators must be CCW and independent");
    // Inward normals: rotate g1 by +90 degrees and g2 by -90 degrees.
    return ConeSpec({{-g1.y, g1.x}, {g2.y, -g2.x}}, {g1, g2});
  }

  const std::vector<Vec2>& normals() const { return normals_; }
  const std::vector<Vec2>& generators() const { return generators_; }

 private:
  std::vector<Vec2> normals_;
  std::vector<Vec2> generators_;
};

inline bool cone_contains(const ConeSpec& k, Vec2 x, double tol = 1e-9) {
  return std::all_of(k.normals().begin(), k.normals().end(), [&](Vec2 n) { return dot(n, x) >= -tol * norm(n); });
}

/// K ∩ (-K) = {0}. The lineality space {x : <n_i,x> = 0 for all i} is trivial
/// exactly when the normals span R^2; the generator test (no generator whose
/// negation lies in K) is applied as well so inconsistent generator lists are
/// not reported proper.
inline bool cone_is_proper(const ConeSpec& k) {
  bool spans = false;
  const auto& ns = k.normals();
  for (std::size_t i = 0; i < ns.size() && !spans; ++i) {
    for (std::size_t j = i + 1; j < ns.size(); ++j) {
      if (std::abs(cross(ns[i], ns[j])) > 1e-12 * norm(ns[i]) * norm(ns[j])) {
        spans = true;
        break;
      }
    }
  }
  if (!spans) return false;
  return std::none_of(k.generators().begin(), k.generators().end(), [&](Vec2 g) {
    return norm(g) > 0.0 && cone_contains(k, -g, 1e-12 * norm(g));
  });
}

}  // namespace conelevy
