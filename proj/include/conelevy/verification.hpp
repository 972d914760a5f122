#pragma once

// Ensemble statistics over simulated trajectories: Poisson jump counts,
// stationarity and independence of increments, stochastic continuity and the
// characteristic functional.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "conelevy/embedding.hpp"
#include "conelevy/levy.hpp"
#include "conelevy/random.hpp"
#include "conelevy/stats.hpp"

namespace conelevy {

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct StatCheck {
  std::string name;
  double statistic;
  double threshold;
  bool pass;
};

/// Jump counts above eps_e up to t against Poisson(t nu(|x| > eps_e)):
/// mean and variance each within `k_se` standard errors.
inline std::vector<StatCheck> poisson_count_checks(std::span<const Trajectory> trajs, const LevyModel& m, double eps_e,
                                                   double t, double k_se = 3.0) {
  std::vector<double> counts;
  counts.reserve(trajs.size());
  for (const Trajectory& tr : trajs) {
    // Jumps at exactly t count: the window is (0, t].
    counts.push_back(static_cast<double>(jump_sum(tr, m, eps_e, std::nextafter(t, INFINITY)).count));
  }
  const double lambda = t * tail_mass(m, eps_e);
  const double mean = stats::mean(counts);
  const double var = stats::variance(counts);
  const std::string tag = "eps=" + short_num(eps_e);
  return {
      {"poisson_mean[" + tag + "]", std::abs(mean - lambda), k_se * stats::poisson_mean_se(lambda, counts.size()),
       std::abs(mean - lambda) <= k_se * stats::poisson_mean_se(lambda, counts.size())},
      {"poisson_variance[" + tag + "]", std::abs(var - lambda), k_se * stats::poisson_variance_se(lambda, counts.size()),
       std::abs(var - lambda) <= k_se * stats::poisson_variance_se(lambda, counts.size())},
  };
}

/// Distances rho_p(X_{s+h}, X_s) per trajectory.
inline std::vector<double> increment_distances(std::span<const Trajectory> trajs, const LevyModel& m, double s, double h) {
  std::vector<double> d;
  d.reserve(trajs.size());
  for (const Trajectory& tr : trajs) d.push_back(lp_norm(increment(tr, m, s, s + h), m.p_model()));
  return d;
}

/// Two-sample KS between increment distances on [0, h] and [T/2, T/2 + h].
inline StatCheck stationarity_check(std::span<const Trajectory> trajs, const LevyModel& m, double h, double level) {
  const double half = trajs.front().horizon / 2.0;
  const auto a = increment_distances(trajs, m, 0.0, h);
  const auto b = increment_distances(trajs, m, half, h);
  const double ks = stats::ks_statistic(a, b);
  const double crit = stats::ks_critical(level, a.size(), b.size());
  return {"stationarity_ks", ks, crit, ks < crit};
}

/// Correlation of increment distances on [0, T/2] and [T/2, T] within 4/sqrt(M).
inline StatCheck independence_check(std::span<const Trajectory> trajs, const LevyModel& m) {
  const double half = trajs.front().horizon / 2.0;
  const auto a = increment_distances(trajs, m, 0.0, half);
  const auto b = increment_distances(trajs, m, half, half);
  const double r = stats::correlation(a, b);
  const double thr = 4.0 / std::sqrt(static_cast<double>(trajs.size()));
  return {"independence_corr", std::abs(r), thr, std::abs(r) <= thr};
}

/// Empirical P(rho_p(X_{s+h}, X_s) > |gamma0| h) against 1 - exp(-h nu(|x| > eps)) + 3 SE.
inline StatCheck continuity_check(std::span<const Trajectory> trajs, const LevyModel& m, double s, double h) {
  const Trajectory& first = trajs.front();
  const double probe_eps = lp_norm(first.gamma0, m.p_model()) * h * (1.0 + 1e-9) + 1e-12;
  std::size_t moved = 0;
  for (const Trajectory& tr : trajs) {
    if (lp_norm(increment(tr, m, s, s + h), m.p_model()) > probe_eps) ++moved;
  }
  const double freq = static_cast<double>(moved) / static_cast<double>(trajs.size());
  const double bound = 1.0 - std::exp(-h * tail_mass(m, first.eps));
  const double se = std::sqrt(bound * (1.0 - bound) / static_cast<double>(trajs.size()));
  return {"continuity[h=" + short_num(h) + "]", freq, bound + 3.0 * se, freq <= bound + 3.0 * se};
}

/// Monte-Carlo E exp(i l(X_t)) versus the closed exponent; tolerance
/// 4/sqrt(M) plus the truncation bias |l| * truncation_bound.
inline StatCheck char_functional_check(const LevyTriplet& tr, std::span<const Trajectory> trajs, const DualProbe& l,
                                       double t, const std::string& name) {
  const LevyModel& m = tr.model;
  std::complex<double> acc = 0.0;
  for (const Trajectory& traj : trajs) acc += std::polar(1.0, probe(l, state_at(traj, m, t)));
  acc /= static_cast<double>(trajs.size());
  const std::complex<double> exact = char_functional(tr, l, t);
  const double diff = std::abs(acc - exact);
  const double thr = 4.0 / std::sqrt(static_cast<double>(trajs.size())) +
                     l.dual_norm(m.p_model()) * truncation_bound(m, trajs.front().eps, t);
  return {name, diff, thr, diff <= thr};
}

/// Probe with weights uniform in [-scale, scale], drawn from `seed`.
inline DualProbe random_probe(const AlphaGrid& agrid, const SphereGrid& sgrid, std::uint64_t seed, double scale) {
  CounterRng rng(seed);
  std::vector<double> w(agrid.size() * sgrid.size());
  for (double& v : w) v = scale * (2.0 * rng.uniform() - 1.0);
  return DualProbe(agrid, sgrid, std::move(w));
}

}  // namespace conelevy
