#pragma once

// Support-function embedding of fuzzy vectors into L^p((0,1] x S^1), sampled
// on an (alpha, direction) grid, together with its inverse, L^p metrics,
// validity checks and membership in the embedded cone.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelevy/fuzzy.hpp"
#include "conelevy/geometry.hpp"

namespace conelevy {

/// n uniform directions u_k = (cos 2pi k/n, sin 2pi k/n), n even and >= 8.
class SphereGrid {
 public:
  explicit SphereGrid(std::size_t n) : n_(n) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("SphereGrid: n must be even and >= 8");
    dirs_.reserve(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
      // Quarter turns are set exactly so axis-aligned sets embed without rounding.
      if ((4 * k) % n == 0) {
        static constexpr Vec2 kAxes[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        dirs_.push_back(Direction(kAxes[4 * k / n]));
      } else {
        dirs_.push_back(Direction::from_angle(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
      }
    }
    for (std::size_t k = 0; k < n / 2; ++k) dirs_.push_back(-dirs_[k]);
  }

  std::size_t size() const { return n_; }
  const Direction& operator[](std::size_t k) const { return dirs_[k]; }
  const std::vector<Direction>& directions() const { return dirs_; }
  double angle(std::size_t k) const { return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_); }
  std::size_t antipode(std::size_t k) const { return (k + n_ / 2) % n_; }

  friend bool operator==(const SphereGrid& a, const SphereGrid& b) { return a.n_ == b.n_; }

 private:
  std::size_t n_;
  std::vector<Direction> dirs_;
};

/// Element of the sampled ambient space: values(i, k) = f(alpha_i, u_k).
class EmbeddedFunction {
 public:
  EmbeddedFunction(AlphaGrid agrid, SphereGrid sgrid)
      : agrid_(std::move(agrid)), sgrid_(std::move(sgrid)), values_(agrid_.size() * sgrid_.size(), 0.0) {}

  EmbeddedFunction(AlphaGrid agrid, SphereGrid sgrid, std::vector<double> values)
      : agrid_(std::move(agrid)), sgrid_(std::move(sgrid)), values_(std::move(values)) {
    if (values_.size() != agrid_.size() * sgrid_.size()) throw std::invalid_argument("EmbeddedFunction: shape mismatch");
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("EmbeddedFunction: non-finite entry");
    }
  }

  const AlphaGrid& alpha_grid() const { return agrid_; }
  const SphereGrid& sphere_grid() const { return sgrid_; }
  std::size_t rows() const { return agrid_.size(); }
  std::size_t cols() const { return sgrid_.size(); }

  double operator()(std::size_t i, std::size_t k) const { return values_[i * cols() + k]; }
  double& operator()(std::size_t i, std::size_t k) { return values_[i * cols() + k]; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  bool same_grids(const EmbeddedFunction& o) const { return agrid_ == o.agrid_ && sgrid_ == o.sgrid_; }

  EmbeddedFunction& operator+=(const EmbeddedFunction& o) {
    check(o, "+");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  EmbeddedFunction& operator-=(const EmbeddedFunction& o) {
    check(o, "-");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  EmbeddedFunction& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }
  /// this += s * o
  EmbeddedFunction& axpy(double s, const EmbeddedFunction& o) {
    check(o, "axpy");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += s * o.values_[j];
    return *this;
  }

  friend EmbeddedFunction operator+(EmbeddedFunction a, const EmbeddedFunction& b) { return a += b; }
  friend EmbeddedFunction operator-(EmbeddedFunction a, const EmbeddedFunction& b) { return a -= b; }
  friend EmbeddedFunction operator*(double s, EmbeddedFunction a) { return a *= s; }
  friend EmbeddedFunction operator-(EmbeddedFunction a) { return a *= -1.0; }
  friend bool operator==(const EmbeddedFunction& a, const EmbeddedFunction& b) {
    return a.same_grids(b) && a.values_ == b.values_;
  }

 private:
  void check(const EmbeddedFunction& o, const char* op) const {
    if (!same_grids(o)) throw GridMismatch(std::string("EmbeddedFunction ") + op);
  }

  AlphaGrid agrid_;
  SphereGrid sgrid_;
  std::vector<double> values_;
};

inline EmbeddedFunction embed(const FuzzyVector& x, const SphereGrid& sgrid) {
  EmbeddedFunction f(x.grid(), sgrid);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t k = 0; k < f.cols(); ++k) f(i, k) = support_value(x.cut(i), sgrid[k]);
  }
  return f;
}

/// rho_p with left-step alpha weights and uniform 1/n sphere weights.
/// Pass p = infinity for the sup distance.
inline double lp_distance(const EmbeddedFunction& f, const EmbeddedFunction& g, double p) {
  if (!f.same_grids(g)) throw GridMismatch("lp_distance");
  if (!(p >= 1.0)) throw std::domain_error("lp_distance: p must be >= 1");
  const std::size_t n = f.cols();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t j = 0; j < f.values().size(); ++j) m = std::max(m, std::abs(f.values()[j] - g.values()[j]));
    return m;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = std::abs(f(i, k) - g(i, k));
      row += p == 1.0 ? d : (p == 2.0 ? d * d : std::pow(d, p));
    }
    total += f.alpha_grid().weight(i) * row / static_cast<double>(n);
  }
  return p == 1.0 ? total : (p == 2.0 ? std::sqrt(total) : std::pow(total, 1.0 / p));
}

inline double lp_norm(const EmbeddedFunction& f, double p) {
  return lp_distance(f, EmbeddedFunction(f.alpha_grid(), f.sphere_grid()), p);
}

/// Pullback metric d_p := rho_p(embed(x), embed(y)).
inline double fuzzy_dp(const FuzzyVector& x, const FuzzyVector& y, double p, const SphereGrid& sgrid) {
  require_same_grid(x, y, "fuzzy_dp");
  return lp_distance(embed(x, sgrid), embed(y, sgrid), p);
}

/// Finite-rank functional l(f) = sum_{i,k} w(i,k) f(i,k) da_i / n.
class DualProbe {
 public:
  DualProbe(AlphaGrid agrid, SphereGrid sgrid, std::vector<double> weights)
      : w_(std::move(agrid), std::move(sgrid), std::move(weights)) {}

  /// Unit weight at (i, k) and zero elsewhere.
  static DualProbe point_mass(const AlphaGrid& agrid, const SphereGrid& sgrid, std::size_t i, std::size_t k) {
    std::vector<double> w(agrid.size() * sgrid.size(), 0.0);
    w.at(i * sgrid.size() + k) = 1.0;
    return DualProbe(agrid, sgrid, std::move(w));
  }

  const EmbeddedFunction& weights() const { return w_; }

  /// Operator norm for the rho_p norm on the ambient space (the conjugate L^q norm of the weights).
  double dual_norm(double p) const {
    if (p == 1.0) return lp_norm(w_, std::numeric_limits<double>::infinity());
    if (std::isinf(p)) return lp_norm(w_, 1.0);
    return lp_norm(w_, p / (p - 1.0));
  }

 private:
  EmbeddedFunction w_;
};

inline double probe(const DualProbe& l, const EmbeddedFunction& f) {
  const EmbeddedFunction& w = l.weights();
  if (!w.same_grids(f)) throw GridMismatch("probe");
  double total = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < f.cols(); ++k) row += w(i, k) * f(i, k);
    total += row * f.alpha_grid().weight(i);
  }
  return total / static_cast<double>(f.cols());
}

class InversionFailed : public std::runtime_error {
 public:
  explicit InversionFailed(std::size_t level, const std::string& why)
      : std::runtime_error("inversion failed at alpha level " + std::to_string(level) + ": " + why), level_(level) {}
  std::size_t level() const { return level_; }

 private:
  std::size_t level_;
};

enum class ViolationKind { subadditivity, antipodal, alpha_monotonicity, empty_inversion };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::subadditivity: return "subadditivity";
    case ViolationKind::antipodal: return "antipodal";
    case ViolationKind::alpha_monotonicity: return "alpha-monotonicity";
    case ViolationKind::empty_inversion: return "empty-inversion";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::size_t level;      // alpha row
  std::size_t direction;  // sphere column (0 for empty-inversion)
  double magnitude;
};

struct ValidityReport {
  std::vector<Violation> violations;
  bool is_valid() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }
};

namespace detail {

inline double magnitude_scale(const EmbeddedFunction& f) { return std::max(1.0, f.max_abs()); }

// Halfspace inversion of one row; throws InversionFailed.
inline ConvexPolygon invert_row(const EmbeddedFunction& f, std::size_t i) {
  const auto r = halfspace_intersection(f.sphere_grid().directions(), f.row(i));
  if (std::holds_alternative<EmptyRegion>(r)) throw InversionFailed(i, "empty region");
  if (std::holds_alternative<Unbounded>(r)) throw InversionFailed(i, "unbounded region");
  return std::get<ConvexPolygon>(r);
}

// Grid-level necessary conditions (a)-(c); tolerances are relative to max|f|.
inline void check_local(const EmbeddedFunction& f, double tol, ValidityReport& rep) {
  const std::size_t n = f.cols();
  const SphereGrid& s = f.sphere_grid();
  const double abs_tol = tol * magnitude_scale(f);
  // Bisector of u_{k-1}, u_{k+1} is u_k, and |u_{k-1} + u_{k+1}| = 2 cos(2pi/n).
  const double chord = 2.0 * std::cos(2.0 * std::numbers::pi / static_cast<double>(n));
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double sum = f(i, k) + f(i, s.antipode(k));
      if (sum < -abs_tol) rep.violations.push_back({ViolationKind::antipodal, i, k, -sum});
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double lhs = chord * f(i, k);
      const double rhs = f(i, (k + n - 1) % n) + f(i, (k + 1) % n);
      if (lhs > rhs + abs_tol) rep.violations.push_back({ViolationKind::subadditivity, i, k, lhs - rhs});
    }
  }
  for (std::size_t i = 0; i + 1 < f.rows(); ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double up = f(i + 1, k) - f(i, k);
      if (up > abs_tol) rep.violations.push_back({ViolationKind::alpha_monotonicity, i + 1, k, up});
    }
  }
}

}  // namespace detail

/// Checks antipodal positivity, discrete subadditivity on bisector triples,
/// monotonicity in alpha and non-emptiness of the per-level inversion.
/// `tol` is relative to max(1, max|f|).
inline ValidityReport validate_support(const EmbeddedFunction& f, double tol = 1e-9) {
  ValidityReport rep;
  detail::check_local(f, tol, rep);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    try {
      (void)detail::invert_row(f, i);
    } catch (const InversionFailed&) {
      rep.violations.push_back({ViolationKind::empty_inversion, i, 0, 0.0});
    }
  }
  return rep;
}

/// Per-level halfspace intersection of the sampled support values.
inline FuzzyVector invert(const EmbeddedFunction& f) {
  std::vector<ConvexPolygon> cuts;
  cuts.reserve(f.rows());
  for (std::size_t i = 0; i < f.rows(); ++i) cuts.push_back(detail::invert_row(f, i));
  return make_fuzzy_unchecked(f.alpha_grid(), std::move(cuts));
}

/// f is a valid sampled support function whose inverse is K-positive.
/// `tol` is relative to max(1, max|f|).
inline bool in_embedded_cone(const EmbeddedFunction& f, const ConeSpec& k, double tol = 1e-9) {
  ValidityReport rep;
  detail::check_local(f, tol, rep);
  if (!rep.is_valid()) return false;
  const double abs_tol = tol * detail::magnitude_scale(f);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const auto r = halfspace_intersection(f.sphere_grid().directions(), f.row(i));
    const auto* cut = std::get_if<ConvexPolygon>(&r);
    if (cut == nullptr) return false;
    // The widest cut carries the support.
    if (i == 0 && !std::all_of(cut->vertices().begin(), cut->vertices().end(),
                               [&](Vec2 p) { return cone_contains(k, p, abs_tol); })) {
      return false;
    }
  }
  return true;
}

/// Induced partial order: x <=_K y iff embed(y) - embed(x) lies in the embedded cone.
inline bool cone_leq(const FuzzyVector& x, const FuzzyVector& y, const ConeSpec& k, const SphereGrid& sgrid,
                     double tol = 1e-9) {
  return in_embedded_cone(embed(y, sgrid) - embed(x, sgrid), k, tol);
}

}  // namespace conelevy
