#pragma once

// Alpha-stable Levy measure concentrated on unit-norm cone atoms, its
// centering and moments, inverse-tail series simulation of the cone-valued
// subordinator, and pathwise checks of simulated trajectories.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "conelevy/embedding.hpp"
#include "conelevy/fuzzy.hpp"
#include "conelevy/geometry.hpp"
#include "conelevy/random.hpp"

namespace conelevy {

struct Atom {
  EmbeddedFunction direction;  // unit p_model-norm element of the embedded cone
  double weight;               // angular mass > 0
};

/// nu(C) = c^-1 * int_0^inf sum_j w_j 1_C(r y_j) dr / r^(1+alpha).
class LevyModel {
 public:
  LevyModel(double alpha, double c_alpha, std::vector<Atom> atoms, ConeSpec cone, AlphaGrid agrid, SphereGrid sgrid,
            double p_model = 2.0)
      : alpha_(alpha),
        c_alpha_(c_alpha),
        atoms_(std::move(atoms)),
        cone_(std::move(cone)),
        agrid_(std::move(agrid)),
        sgrid_(std::move(sgrid)),
        p_model_(p_model) {
    if (!(alpha_ > 0.0 && alpha_ < 1.0)) throw std::invalid_argument("LevyModel: alpha must lie in (0, 1)");
    if (!(c_alpha_ > 0.0) || !std::isfinite(c_alpha_)) throw std::invalid_argument("LevyModel: c_alpha must be > 0");
    if (!(p_model_ >= 1.0)) throw std::invalid_argument("LevyModel: p_model must be >= 1");
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      const Atom& a = atoms_[j];
      if (!(a.direction.alpha_grid() == agrid_) || !(a.direction.sphere_grid() == sgrid_)) {
        throw GridMismatch("atom #" + std::to_string(j));
      }
      if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
        throw std::invalid_argument("LevyModel: atom #" + std::to_string(j) + " weight must be > 0");
      }
      if (std::abs(lp_norm(a.direction, p_model_) - 1.0) > 1e-9) {
        throw std::invalid_argument("LevyModel: atom #" + std::to_string(j) + " is not unit norm");
      }
    }
  }

  /// Embeds `x` and rescales it to unit p_model norm.
  static EmbeddedFunction unit_atom(const FuzzyVector& x, const SphereGrid& sgrid, double p_model) {
    EmbeddedFunction f = embed(x, sgrid);
    const double n = lp_norm(f, p_model);
    if (!(n > 0.0)) throw std::invalid_argument("unit_atom: zero element cannot be normalized");
    return (1.0 / n) * f;
  }

  double alpha() const { return alpha_; }
  double c_alpha() const { return c_alpha_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const ConeSpec& cone() const { return cone_; }
  const AlphaGrid& alpha_grid() const { return agrid_; }
  const SphereGrid& sphere_grid() const { return sgrid_; }
  double p_model() const { return p_model_; }

  /// Total angular mass.
  double lambda_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight;
    return s;
  }

  EmbeddedFunction zero() const { return EmbeddedFunction(agrid_, sgrid_); }

 private:
  double alpha_;
  double c_alpha_;
  std::vector<Atom> atoms_;
  ConeSpec cone_;
  AlphaGrid agrid_;
  SphereGrid sgrid_;
  double p_model_;
};

/// Generating triplet with zero Gaussian part; the Levy measure lives in the model.
struct LevyTriplet {
  LevyModel model;
  EmbeddedFunction gamma;
};

/// int_{0 < |x| <= 1} |x| nu(dx) = Lambda / (c (1 - alpha)).
inline double bochner_norm_integral(const LevyModel& m) {
  return m.lambda_mass() / (m.c_alpha() * (1.0 - m.alpha()));
}

/// Pettis centering over the unit ball: (c (1 - alpha))^-1 sum_j w_j y_j.
inline EmbeddedFunction pettis_centering(const LevyModel& m) {
  EmbeddedFunction out = m.zero();
  const double scale = 1.0 / (m.c_alpha() * (1.0 - m.alpha()));
  for (const Atom& a : m.atoms()) out.axpy(scale * a.weight, a.direction);
  return out;
}

/// nu({|x| > eps}) = Lambda eps^-alpha / (c alpha).
inline double tail_mass(const LevyModel& m, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("tail_mass: eps must be > 0");
  return m.lambda_mass() * std::pow(eps, -m.alpha()) / (m.c_alpha() * m.alpha());
}

/// Expected norm of the discarded jumps below eps over [0, T].
inline double truncation_bound(const LevyModel& m, double eps, double horizon) {
  if (!(eps > 0.0)) throw std::domain_error("truncation_bound: eps must be > 0");
  return horizon * m.lambda_mass() * std::pow(eps, 1.0 - m.alpha()) / (m.c_alpha() * (1.0 - m.alpha()));
}

struct TripletReport {
  bool a_ok = true;  // zero Gaussian part holds by construction
  bool b_ok = true;
  bool c_ok = true;
  std::vector<std::size_t> atoms_outside;
  EmbeddedFunction centering;
  EmbeddedFunction gamma0;

  bool ok() const { return a_ok && b_ok && c_ok; }
};

inline TripletReport validate_triplet(const LevyTriplet& tr, double tol = 1e-9) {
  const LevyModel& m = tr.model;
  if (!tr.gamma.same_grids(m.zero())) throw GridMismatch("triplet gamma");
  TripletReport rep{
      .a_ok = true, .b_ok = true, .c_ok = true, .atoms_outside = {}, .centering = pettis_centering(m), .gamma0 = m.zero()};
  for (std::size_t j = 0; j < m.atoms().size(); ++j) {
    if (!in_embedded_cone(m.atoms()[j].direction, m.cone(), tol)) rep.atoms_outside.push_back(j);
  }
  rep.b_ok = rep.atoms_outside.empty();
  rep.gamma0 = tr.gamma - rep.centering;
  rep.c_ok = in_embedded_cone(rep.gamma0, m.cone(), tol);
  return rep;
}

class TripletInvalid : public std::runtime_error {
 public:
  explicit TripletInvalid(const std::string& what) : std::runtime_error("invalid triplet: " + what) {}
};

class QuadratureNonConvergence : public std::runtime_error {
 public:
  explicit QuadratureNonConvergence(double err)
      : std::runtime_error("quadrature did not converge, error estimate " + std::to_string(err)), error_(err) {}
  double error_estimate() const { return error_; }

 private:
  double error_;
};

struct Jump {
  double time;
  double magnitude;
  std::size_t atom;
};

struct Trajectory {
  EmbeddedFunction gamma0;
  double horizon;
  double eps;
  std::vector<Jump> jumps;  // sorted by time
  std::uint64_t seed;
};

/// Drift plus inverse-tail series jumps for a validated triplet.
class Simulator {
 public:
  explicit Simulator(LevyTriplet tr, double tol = 1e-9) : tr_(std::move(tr)), report_(validate_triplet(tr_, tol)) {
    if (!report_.ok()) {
      std::string why;
      if (!report_.b_ok) why += "(b) atom outside the cone; ";
      if (!report_.c_ok) why += "(c) gamma - centering outside the cone; ";
      throw TripletInvalid(why);
    }
    cumulative_.reserve(tr_.model.atoms().size());
    double acc = 0.0;
    for (const Atom& a : tr_.model.atoms()) cumulative_.push_back(acc += a.weight);
  }

  const LevyTriplet& triplet() const { return tr_; }
  const LevyModel& model() const { return tr_.model; }
  const EmbeddedFunction& gamma0() const { return report_.gamma0; }

  /// Arrivals G_1 < G_2 < ... of a unit-rate Poisson process give magnitudes
  /// r_i = (Lambda T / (c alpha G_i))^(1/alpha), kept while r_i > eps. Each
  /// kept jump draws its time uniformly on (0, T] and then its atom with
  /// probability w_j / Lambda, in that order.
  Trajectory run(double horizon, double eps, std::uint64_t seed) const {
    if (!(horizon > 0.0) || !(eps > 0.0)) throw std::domain_error("simulate: T and eps must be > 0");
    const LevyModel& m = tr_.model;
    Trajectory traj{report_.gamma0, horizon, eps, {}, seed};
    const double mass = m.lambda_mass();
    if (m.atoms().empty()) return traj;
    const double scale = mass * horizon / (m.c_alpha() * m.alpha());
    const double inv_alpha = 1.0 / m.alpha();
    CounterRng rng(seed);
    double arrival = 0.0;
    for (;;) {
      arrival += rng.exponential();
      const double r = std::pow(scale / arrival, inv_alpha);
      if (!(r > eps)) break;
      const double t = horizon * rng.uniform();
      const double pick = mass * rng.uniform();
      const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), pick);
      const auto j = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
      traj.jumps.push_back({t, r, j});
    }
    std::stable_sort(traj.jumps.begin(), traj.jumps.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
    return traj;
  }

 private:
  LevyTriplet tr_;
  TripletReport report_;
  std::vector<double> cumulative_;
};

inline Trajectory simulate(const LevyTriplet& tr, double horizon, double eps, std::uint64_t seed) {
  return Simulator(tr).run(horizon, eps, seed);
}

/// gamma0 t + sum_{t_i <= t} r_i y_{j_i}.
inline EmbeddedFunction state_at(const Trajectory& traj, const LevyModel& m, double t) {
  if (!(t >= 0.0 && t <= traj.horizon)) throw std::domain_error("state_at: t outside [0, T]");
  EmbeddedFunction s = t * traj.gamma0;
  for (const Jump& j : traj.jumps) {
    if (j.time > t) break;
    s.axpy(j.magnitude, m.atoms().at(j.atom).direction);
  }
  return s;
}

/// Left limit gamma0 t + sum_{t_i < t} r_i y_{j_i}.
inline EmbeddedFunction state_before(const Trajectory& traj, const LevyModel& m, double t) {
  if (!(t >= 0.0 && t <= traj.horizon)) throw std::domain_error("state_before: t outside [0, T]");
  EmbeddedFunction s = t * traj.gamma0;
  for (const Jump& j : traj.jumps) {
    if (j.time >= t) break;
    s.axpy(j.magnitude, m.atoms().at(j.atom).direction);
  }
  return s;
}

/// X_t - X_s for s <= t, accumulated directly from the jumps in (s, t] so
/// that small increments keep full precision after large earlier jumps.
inline EmbeddedFunction increment(const Trajectory& traj, const LevyModel& m, double s, double t) {
  if (!(0.0 <= s && s <= t && t <= traj.horizon)) throw std::domain_error("increment: need 0 <= s <= t <= T");
  EmbeddedFunction d = (t - s) * traj.gamma0;
  for (const Jump& j : traj.jumps) {
    if (j.time > t) break;
    if (j.time > s) d.axpy(j.magnitude, m.atoms().at(j.atom).direction);
  }
  return d;
}

/// X_{t-} - X_s: like increment() but excluding jumps at t.
inline EmbeddedFunction increment_open(const Trajectory& traj, const LevyModel& m, double s, double t) {
  if (!(0.0 <= s && s <= t && t <= traj.horizon)) throw std::domain_error("increment_open: need 0 <= s <= t <= T");
  EmbeddedFunction d = (t - s) * traj.gamma0;
  for (const Jump& j : traj.jumps) {
    if (j.time >= t) break;
    if (j.time > s) d.axpy(j.magnitude, m.atoms().at(j.atom).direction);
  }
  return d;
}

inline FuzzyVector fuzzy_state(const Trajectory& traj, const LevyModel& m, double t) {
  return invert(state_at(traj, m, t));
}

class BelowTruncation : public std::domain_error {
 public:
  BelowTruncation() : std::domain_error("jump_sum: eps_E is below the simulation truncation level") {}
};

struct JumpSum {
  EmbeddedFunction sum;
  std::size_t count;
};

/// Jumps of norm > eps_E strictly before t.
inline JumpSum jump_sum(const Trajectory& traj, const LevyModel& m, double eps_e, double t) {
  if (eps_e < traj.eps) throw BelowTruncation();
  JumpSum out{m.zero(), 0};
  for (const Jump& j : traj.jumps) {
    if (!(j.time < t)) break;
    const EmbeddedFunction& y = m.atoms().at(j.atom).direction;
    if (j.magnitude * lp_norm(y, m.p_model()) > eps_e) {
      out.sum.axpy(j.magnitude, y);
      ++out.count;
    }
  }
  return out;
}

namespace detail {

// int_0^inf (e^{i x} - 1) x^{-1-alpha} dx, split at x = 1: power series on
// (0, 1], Gauss-Kronrod panels over whole periods on [1, A], and the
// integration-by-parts expansion of int_A^inf e^{ix} x^{-beta} dx beyond A.
inline std::complex<double> stable_kernel_unit(double alpha) {
  double re = 0.0, im = 0.0;
  {
    double fact = 1.0;  // k!
    double sign = 1.0;
    for (int k = 1; k < 60; ++k) {
      fact *= k;
      if (k % 2 == 0) {
        sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;  // cos: (-1)^(k/2) x^k / k!
        const double term = sign / (fact * (k - alpha));
        re += term;
        if (std::abs(term) < 1e-18) break;
      } else {
        sign = (((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;  // sin: (-1)^((k-1)/2) x^k / k!
        im += sign / (fact * (k - alpha));
      }
    }
    // The k = 0 cosine term is cancelled by the -1.
  }
  const double beta = 1.0 + alpha;
  constexpr int kPeriods = 32;
  const double upper = 2.0 * std::numbers::pi * kPeriods;
  double err_total = 0.0;
  auto panel = [&](auto&& f, double a, double b) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-14, &err);
    err_total += err;
    return v;
  };
  auto fc = [beta](double x) { return std::cos(x) * std::pow(x, -beta); };
  auto fs = [beta](double x) { return std::sin(x) * std::pow(x, -beta); };
  double a = 1.0;
  for (int k = 1; k <= kPeriods; ++k) {
    const double b = 2.0 * std::numbers::pi * k;
    re += panel(fc, a, b);
    im += panel(fs, a, b);
    a = b;
  }
  re -= 1.0 / alpha;  // int_1^inf x^{-1-alpha} dx
  // Tail: i e^{iA} sum_k (-i)^k (beta)_k A^{-beta-k}.
  std::complex<double> tail = 0.0;
  std::complex<double> coeff(0.0, 1.0);
  double poch = 1.0;
  for (int k = 0; k < 40; ++k) {
    const std::complex<double> term = coeff * poch * std::pow(upper, -beta - k);
    tail += term;
    if (std::abs(term) < 1e-18) break;
    coeff *= std::complex<double>(0.0, -1.0);
    poch *= beta + k;
  }
  tail *= std::polar(1.0, upper);
  re += tail.real();
  im += tail.imag();
  if (err_total > 1e-8) throw QuadratureNonConvergence(err_total);
  return {re, im};
}

}  // namespace detail

/// R(s) = int_0^inf (e^{irs} - 1) r^{-1-alpha} dr = |s|^alpha R(sign s).
inline std::complex<double> stable_kernel(double alpha, double s) {
  if (s == 0.0) return 0.0;
  const std::complex<double> unit = detail::stable_kernel_unit(alpha);
  const std::complex<double> oriented = s > 0.0 ? unit : std::conj(unit);
  return std::pow(std::abs(s), alpha) * oriented;
}

/// E exp(i l(X_t)) = exp(t int (e^{i l(x)} - 1) nu(dx) + i t l(gamma0)).
inline std::complex<double> char_functional(const LevyTriplet& tr, const DualProbe& l, double t) {
  const TripletReport rep = validate_triplet(tr);
  if (!rep.ok()) throw TripletInvalid("char_functional requires a valid triplet");
  const LevyModel& m = tr.model;
  std::complex<double> exponent(0.0, t * probe(l, rep.gamma0));
  if (!m.atoms().empty()) {
    const std::complex<double> unit = detail::stable_kernel_unit(m.alpha());
    for (const Atom& a : m.atoms()) {
      const double s = probe(l, a.direction);
      if (s == 0.0) continue;
      const std::complex<double> r = std::pow(std::abs(s), m.alpha()) * (s > 0.0 ? unit : std::conj(unit));
      exponent += t * a.weight / m.c_alpha() * r;
    }
  }
  return std::exp(exponent);
}

struct PathIssue {
  std::string check;  // "cone", "monotone", "variation", "right-continuity"
  double time;
  double magnitude;
};

struct PathReport {
  std::size_t states_checked = 0;
  std::size_t increments_checked = 0;
  double variation_formula = 0.0;
  double variation_partition = 0.0;
  std::vector<PathIssue> issues;

  bool ok() const { return issues.empty(); }
  std::size_t count(const std::string& check) const {
    return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [&](const PathIssue& i) { return i.check == check; }));
  }
};

/// Cone membership of states, monotonicity of consecutive increments, the
/// bounded-variation identity and right-continuity at the sampled times.
inline PathReport verify_path(const Trajectory& traj, const LevyModel& m, std::span<const double> times,
                              double tol = 1e-9) {
  PathReport rep;
  const double p = m.p_model();
  std::vector<double> ts(times.begin(), times.end());
  std::sort(ts.begin(), ts.end());
  for (std::size_t q = 0; q < ts.size(); ++q) {
    const double t = ts[q];
    const EmbeddedFunction x = state_at(traj, m, t);
    ++rep.states_checked;
    if (!in_embedded_cone(x, m.cone(), tol)) rep.issues.push_back({"cone", t, x.max_abs()});
    if (q > 0) {
      ++rep.increments_checked;
      const EmbeddedFunction d = increment(traj, m, ts[q - 1], t);
      if (!in_embedded_cone(d, m.cone(), tol)) rep.issues.push_back({"monotone", t, d.max_abs()});
    }
    // Right-continuity on a step shorter than the gap to the next jump.
    double next = traj.horizon;
    for (const Jump& j : traj.jumps) {
      if (j.time > t) {
        next = std::min(next, j.time);
        break;
      }
    }
    const double delta = 0.5 * (next - t);
    if (delta > 0.0) {
      const double moved = lp_norm(increment(traj, m, t, t + delta), p);
      const double bound = lp_norm(traj.gamma0, p) * delta;
      if (moved > bound * (1.0 + 1e-9) + 1e-15) rep.issues.push_back({"right-continuity", t, moved - bound});
    }
  }

  // Variation along the partition {0, t_1, ..., t_N, T}: drift pieces plus jumps.
  const double g0 = lp_norm(traj.gamma0, p);
  rep.variation_formula = traj.horizon * g0;
  for (const Jump& j : traj.jumps) {
    rep.variation_formula += std::abs(j.magnitude) * lp_norm(m.atoms().at(j.atom).direction, p);
  }
  double prev = 0.0;
  for (std::size_t q = 0; q < traj.jumps.size();) {
    const double tau = traj.jumps[q].time;
    rep.variation_partition += lp_norm(increment_open(traj, m, prev, tau), p);
    EmbeddedFunction jump = m.zero();
    for (; q < traj.jumps.size() && traj.jumps[q].time == tau; ++q) {
      jump.axpy(traj.jumps[q].magnitude, m.atoms().at(traj.jumps[q].atom).direction);
    }
    rep.variation_partition += lp_norm(jump, p);
    prev = tau;
  }
  rep.variation_partition += lp_norm(increment_open(traj, m, prev, traj.horizon), p);
  const double scale = std::max(rep.variation_formula, std::numeric_limits<double>::min());
  if (std::abs(rep.variation_partition - rep.variation_formula) > 1e-6 * scale) {
    rep.issues.push_back({"variation", traj.horizon, rep.variation_partition - rep.variation_formula});
  }
  return rep;
}

}  // namespace conelevy
