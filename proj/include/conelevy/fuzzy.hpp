#pragma once

// Fuzzy vectors in R^2 stored as stacks of nested alpha-cuts.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelevy/geometry.hpp"

namespace conelevy {

class NestednessViolation : public std::runtime_error {
 public:
  explicit NestednessViolation(std::size_t level)
      : std::runtime_error("nestedness violated at alpha level " + std::to_string(level)), level_(level) {}
  std::size_t level() const { return level_; }

 private:
  std::size_t level_;
};

class EmptyCut : public std::runtime_error {
 public:
  explicit EmptyCut(std::size_t level)
      : std::runtime_error("empty alpha-cut at level " + std::to_string(level)), level_(level) {}
  std::size_t level() const { return level_; }

 private:
  std::size_t level_;
};

class GridMismatch : public std::invalid_argument {
 public:
  explicit GridMismatch(const std::string& what) : std::invalid_argument("grid mismatch: " + what) {}
};

/// Strictly increasing levels 0 < a_1 < ... < a_m = 1 with m >= 2.
class AlphaGrid {
 public:
  explicit AlphaGrid(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.size() < 2) throw std::invalid_argument("AlphaGrid: need at least two levels");
    if (!(levels_.front() > 0.0)) throw std::invalid_argument("AlphaGrid: first level must be > 0");
    if (levels_.back() != 1.0) throw std::invalid_argument("AlphaGrid: last level must be exactly 1");
    for (std::size_t i = 1; i < levels_.size(); ++i) {
      if (!(levels_[i] > levels_[i - 1])) throw std::invalid_argument("AlphaGrid: levels must be strictly increasing");
    }
  }

  /// m equally spaced levels 1/m, 2/m, ..., 1.
  static AlphaGrid uniform(std::size_t m) {
    std::vector<double> l(m);
    for (std::size_t i = 0; i < m; ++i) l[i] = static_cast<double>(i + 1) / static_cast<double>(m);
    l.back() = 1.0;
    return AlphaGrid(std::move(l));
  }

  std::size_t size() const { return levels_.size(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  const std::vector<double>& levels() const { return levels_; }

  /// Left-step quadrature weight of level i.
  double weight(std::size_t i) const { return i == 0 ? levels_[0] : levels_[i] - levels_[i - 1]; }

  friend bool operator==(const AlphaGrid&, const AlphaGrid&) = default;

 private:
  std::vector<double> levels_;
};

class FuzzyVector {
 public:
  const AlphaGrid& grid() const { return grid_; }
  const std::vector<ConvexPolygon>& cuts() const { return cuts_; }
  const ConvexPolygon& cut(std::size_t i) const { return cuts_[i]; }
  std::size_t levels() const { return cuts_.size(); }

 private:
  FuzzyVector(AlphaGrid g, std::vector<ConvexPolygon> c) : grid_(std::move(g)), cuts_(std::move(c)) {}
  friend FuzzyVector make_fuzzy(AlphaGrid, std::vector<ConvexPolygon>, double);
  friend FuzzyVector make_fuzzy_unchecked(AlphaGrid, std::vector<ConvexPolygon>);

  AlphaGrid grid_;
  std::vector<ConvexPolygon> cuts_;
};

/// Validates nestedness (every vertex of cut i+1 inside cut i within `tol`,
/// scaled by the coordinate magnitude).
inline FuzzyVector make_fuzzy(AlphaGrid grid, std::vector<ConvexPolygon> cuts, double tol = 1e-9) {
  if (cuts.size() != grid.size()) {
    throw std::invalid_argument("make_fuzzy: " + std::to_string(cuts.size()) + " cuts for " +
                                std::to_string(grid.size()) + " alpha levels");
  }
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i].size() == 0) throw EmptyCut(i);
  }
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double scale = std::max(1.0, detail::coord_scale(cuts[i].vertices()));
    if (!contains(cuts[i], cuts[i + 1], tol * scale)) throw NestednessViolation(i + 1);
  }
  return FuzzyVector(std::move(grid), std::move(cuts));
}

/// Skips the nestedness scan; for results of operations that preserve it.
inline FuzzyVector make_fuzzy_unchecked(AlphaGrid grid, std::vector<ConvexPolygon> cuts) {
  return FuzzyVector(std::move(grid), std::move(cuts));
}

inline FuzzyVector crisp(const AlphaGrid& grid, Vec2 x) {
  return make_fuzzy_unchecked(grid, std::vector<ConvexPolygon>(grid.size(), ConvexPolygon::point(x)));
}

/// Left-continuous step rule: the cut of the smallest grid level >= alpha.
inline const ConvexPolygon& alpha_cut(const FuzzyVector& x, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha_cut: alpha must lie in (0, 1]");
  const auto& l = x.grid().levels();
  const auto it = std::lower_bound(l.begin(), l.end(), alpha);
  return x.cut(static_cast<std::size_t>(it - l.begin()));
}

/// Step reconstruction of the characterizing function: sup{a_i : p in cut i}.
inline double membership(const FuzzyVector& x, Vec2 p, double tol = 1e-9) {
  double value = 0.0;
  for (std::size_t i = 0; i < x.levels(); ++i) {
    if (!contains(x.cut(i), p, tol)) break;
    value = x.grid()[i];
  }
  return value;
}

inline void require_same_grid(const FuzzyVector& x, const FuzzyVector& y, const char* op) {
  if (!(x.grid() == y.grid())) throw GridMismatch(op);
}

inline FuzzyVector add(const FuzzyVector& x, const FuzzyVector& y) {
  require_same_grid(x, y, "add");
  std::vector<ConvexPolygon> cuts;
  cuts.reserve(x.levels());
  for (std::size_t i = 0; i < x.levels(); ++i) cuts.push_back(minkowski_sum(x.cut(i), y.cut(i)));
  return make_fuzzy_unchecked(x.grid(), std::move(cuts));
}

inline FuzzyVector scalar_mul(double lambda, const FuzzyVector& x) {
  std::vector<ConvexPolygon> cuts;
  cuts.reserve(x.levels());
  for (const auto& c : x.cuts()) cuts.push_back(scale_set(lambda, c));
  return make_fuzzy_unchecked(x.grid(), std::move(cuts));
}

/// Levelwise hull of componentwise vertex products. Not used by the process
/// construction.
inline FuzzyVector multiply(const FuzzyVector& x, const FuzzyVector& y) {
  require_same_grid(x, y, "multiply");
  std::vector<ConvexPolygon> cuts;
  cuts.reserve(x.levels());
  for (std::size_t i = 0; i < x.levels(); ++i) cuts.push_back(product_set(x.cut(i), y.cut(i)));
  return make_fuzzy(x.grid(), std::move(cuts));
}

/// Support inclusion in K, checked on the widest retained cut (level a_1).
inline bool is_K_positive(const FuzzyVector& x, const ConeSpec& k, double tol = 1e-9) {
  const auto& v = x.cut(0).vertices();
  return std::all_of(v.begin(), v.end(), [&](Vec2 p) { return cone_contains(k, p, tol); });
}

/// Supremum over grid levels of the Hausdorff distance between cuts.
inline double d_infty(const FuzzyVector& x, const FuzzyVector& y) {
  require_same_grid(x, y, "d_infty");
  double d = 0.0;
  for (std::size_t i = 0; i < x.levels(); ++i) d = std::max(d, hausdorff(x.cut(i), y.cut(i)));
  return d;
}

/// Levelwise set equality within `tol`.
inline bool approx_equal(const FuzzyVector& x, const FuzzyVector& y, double tol) {
  if (!(x.grid() == y.grid())) return false;
  for (std::size_t i = 0; i < x.levels(); ++i) {
    if (hausdorff(x.cut(i), y.cut(i)) > tol) return false;
  }
  return true;
}

}  // namespace conelevy
