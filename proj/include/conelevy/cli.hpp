#pragma once

// Batch commands behind the `conelevy` executable. Each returns the process
// exit code: 0 ok, 1 domain failure, 2 usage or schema error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "conelevy/config.hpp"
#include "conelevy/embedding.hpp"
#include "conelevy/io.hpp"
#include "conelevy/levy.hpp"
#include "conelevy/verification.hpp"

namespace conelevy::cli {

enum ExitCode : int { kOk = 0, kDomainFailure = 1, kUsageError = 2 };

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  std::vector<double> times;
  std::vector<std::string> files;
};

namespace detail {

/// Runs fn(i) for i in [0, count) on `jobs` threads; rethrows the first error.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

inline config::RunConfig load(const Options& opt) {
  if (opt.config_path.empty()) throw config::ConfigError("--config is required");
  std::string text;
  try {
    text = io::read_file(opt.config_path);
  } catch (const io::FormatError& e) {
    throw config::ConfigError(e.what());
  }
  config::RunConfig cfg = [&] {
    try {
      return config::parse_config(text);
    } catch (const nlohmann::json::exception& e) {
      throw config::ConfigError(opt.config_path + ": " + e.what());
    }
  }();
  if (opt.seed) cfg.sim.master_seed = *opt.seed;
  if (opt.out_dir) cfg.outputs.directory = *opt.out_dir;
  return cfg;
}

inline std::string trajectory_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trajectory_%05zu", index);
  return buf;
}

inline std::string meta_path_for(const std::string& csv) {
  std::filesystem::path p(csv);
  return (p.parent_path() / (p.stem().string() + ".meta.json")).string();
}

struct LoadedTrajectory {
  std::string file;
  Trajectory traj;
};

inline LoadedTrajectory load_trajectory(const std::string& file, const config::RunConfig& cfg,
                                        const EmbeddedFunction& gamma0) {
  Trajectory traj{gamma0, cfg.sim.horizon, cfg.sim.eps, io::parse_trajectory_csv(io::read_file(file), file), 0};
  const std::string meta = meta_path_for(file);
  if (std::filesystem::exists(meta)) {
    const auto j = nlohmann::json::parse(io::read_file(meta));
    traj.seed = j.at("seed").get<std::uint64_t>();
    if (j.at("T").get<double>() != cfg.sim.horizon || j.at("eps").get<double>() != cfg.sim.eps ||
        j.at("alpha").get<double>() != cfg.triplet.model.alpha()) {
      throw config::ConfigError(meta + ": parameters do not match the configuration");
    }
  }
  for (const Jump& j : traj.jumps) {
    if (j.atom >= cfg.triplet.model.atoms().size()) throw io::FormatError(file + ": atom index out of range");
    if (!(j.time > 0.0 && j.time <= traj.horizon)) throw io::FormatError(file + ": jump time outside (0, T]");
  }
  return {file, std::move(traj)};
}

inline std::vector<double> uniform_times(double horizon, std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t q = 0; q < count; ++q) t[q] = horizon * static_cast<double>(q) / static_cast<double>(count - 1);
  t.back() = horizon;
  return t;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const config::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const io::FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    err << "format error: " << e.what() << "\n";
    return kUsageError;
  } catch (const TripletInvalid& e) {
    err << e.what() << "\n";
    return kDomainFailure;
  } catch (const InversionFailed& e) {
    err << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
}

}  // namespace detail

inline int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const config::RunConfig cfg = detail::load(opt);
    const LevyModel& m = cfg.triplet.model;
    const TripletReport rep = validate_triplet(cfg.triplet);
    out << "(a) " << (rep.a_ok ? "PASS" : "FAIL") << " (b) " << (rep.b_ok ? "PASS" : "FAIL") << " (c) "
        << (rep.c_ok ? "PASS" : "FAIL") << "\n";
    out << "(a) zero Gaussian part: PASS\n";
    if (rep.b_ok) {
      out << "(b) all " << m.atoms().size() << " atoms in the embedded cone: PASS\n";
    } else {
      for (std::size_t j : rep.atoms_outside) out << "(b) FAIL atom #" << j << "\n";
    }
    out << "(c) gamma0 = gamma - centering in the embedded cone: " << (rep.c_ok ? "PASS" : "FAIL") << "\n";
    out << "Lambda = " << io::fmt17(m.lambda_mass()) << "\n";
    out << "Bochner norm integral = " << io::fmt17(bochner_norm_integral(m)) << "\n";
    out << "gamma0 max|entry| = " << io::fmt17(rep.gamma0.max_abs()) << "\n";
    return rep.ok() ? kOk : kDomainFailure;
  });
}

inline int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const config::RunConfig cfg = detail::load(opt);
    const Simulator sim(cfg.triplet);
    const LevyModel& m = sim.model();
    const std::filesystem::path dir(cfg.outputs.directory);
    std::filesystem::create_directories(dir);

    const std::string gamma_csv = io::support_csv(sim.gamma0());
    io::write_file((dir / "gamma0.csv").string(), gamma_csv);

    const std::size_t count = cfg.sim.trajectories;
    std::vector<nlohmann::json> entries(count);
    detail::parallel_for(count, opt.jobs, [&](std::size_t i) {
      const std::uint64_t seed = derive_seed(cfg.sim.master_seed, i);
      const Trajectory traj = sim.run(cfg.sim.horizon, cfg.sim.eps, seed);
      const std::string name = detail::trajectory_name(i);
      const std::string csv = io::trajectory_csv(traj);
      nlohmann::json meta = {{"alpha", m.alpha()},     {"c_alpha", m.c_alpha()}, {"T", traj.horizon},
                             {"eps", traj.eps},        {"seed", seed},           {"Lambda", m.lambda_mass()},
                             {"gamma0", "gamma0.csv"}, {"index", i}};
      const std::string meta_text = meta.dump(2) + "\n";
      if (cfg.outputs.trajectories) {
        io::write_file((dir / (name + ".csv")).string(), csv);
        io::write_file((dir / (name + ".meta.json")).string(), meta_text);
      }
      entries[i] = {{"index", i},
                    {"file", name + ".csv"},
                    {"seed", seed},
                    {"jumps", traj.jumps.size()},
                    {"checksum", io::hex64(io::fnv1a64(csv))},
                    {"meta_checksum", io::hex64(io::fnv1a64(meta_text))}};
    });

    std::size_t total_jumps = 0;
    for (const auto& e : entries) total_jumps += e["jumps"].get<std::size_t>();
    nlohmann::json manifest = {
        {"schema_version", config::kSchemaVersion},
        {"parameters",
         {{"alpha", m.alpha()},
          {"c_alpha", m.c_alpha()},
          {"Lambda", m.lambda_mass()},
          {"T", cfg.sim.horizon},
          {"eps", cfg.sim.eps},
          {"master_seed", cfg.sim.master_seed},
          {"trajectories", count},
          {"alpha_grid", cfg.alpha_grid.levels()},
          {"sphere_n", cfg.sphere.size()},
          {"p", cfg.p}}},
        {"gamma0", {{"file", "gamma0.csv"}, {"checksum", io::hex64(io::fnv1a64(gamma_csv))}}},
        {"trajectories", entries},
        {"total_jumps", total_jumps},
        {"expected_jumps_per_trajectory", cfg.sim.horizon * tail_mass(m, cfg.sim.eps)},
    };
    io::write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    out << "wrote " << count << " trajectories (" << total_jumps << " jumps) to " << dir.string() << "\n";
    return kOk;
  });
}

inline int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const config::RunConfig cfg = detail::load(opt);
    if (opt.files.empty()) {
      err << "no trajectories\n";
      return static_cast<int>(kUsageError);
    }
    const TripletReport rep = validate_triplet(cfg.triplet);
    if (!rep.ok()) throw TripletInvalid("configuration fails the triplet conditions");
    const LevyModel& m = cfg.triplet.model;

    std::vector<detail::LoadedTrajectory> loaded(opt.files.size(), {"", Trajectory{rep.gamma0, 0, 0, {}, 0}});
    detail::parallel_for(opt.files.size(), opt.jobs,
                         [&](std::size_t i) { loaded[i] = detail::load_trajectory(opt.files[i], cfg, rep.gamma0); });

    const std::vector<double> times = opt.times.empty() ? detail::uniform_times(cfg.sim.horizon, cfg.verify.times) : opt.times;
    for (double t : times) {
      if (!(t >= 0.0 && t <= cfg.sim.horizon)) throw config::ConfigError("--times: values must lie in [0, T]");
    }
    std::vector<PathReport> reports(loaded.size());
    detail::parallel_for(loaded.size(), opt.jobs,
                         [&](std::size_t i) { reports[i] = verify_path(loaded[i].traj, m, times); });

    std::vector<StatCheck> checks;
    std::size_t pathwise_failures = 0, states = 0, increments = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      states += reports[i].states_checked;
      increments += reports[i].increments_checked;
      for (const PathIssue& issue : reports[i].issues) {
        ++pathwise_failures;
        err << "FAIL " << issue.check << " in " << loaded[i].file << " at t=" << io::fmt17(issue.time) << "\n";
      }
    }
    checks.push_back({"pathwise_failures", static_cast<double>(pathwise_failures), 0.0, pathwise_failures == 0});
    checks.push_back({"states_checked", static_cast<double>(states), 0.0, true});
    checks.push_back({"increments_checked", static_cast<double>(increments), 0.0, true});

    std::vector<Trajectory> trajs;
    trajs.reserve(loaded.size());
    for (auto& l : loaded) trajs.push_back(l.traj);
    if (trajs.size() >= 2) {
      const double horizon = cfg.sim.horizon;
      std::vector<double> eps_list = cfg.verify.jump_eps.empty() ? std::vector<double>{cfg.sim.eps} : cfg.verify.jump_eps;
      for (double e : eps_list) {
        for (auto& c : poisson_count_checks(trajs, m, e, horizon)) checks.push_back(std::move(c));
      }
      checks.push_back(stationarity_check(trajs, m, horizon / 2.0, cfg.verify.significance));
      checks.push_back(independence_check(trajs, m));
      for (double frac : {0.1, 0.01, 0.001}) checks.push_back(continuity_check(trajs, m, horizon / 4.0, frac * horizon));
      for (std::size_t q = 0; q < cfg.verify.probes; ++q) {
        const DualProbe l = random_probe(cfg.alpha_grid, cfg.sphere, derive_seed(cfg.sim.master_seed ^ 0x5EEDull, q), 1.0);
        checks.push_back(char_functional_check(cfg.triplet, trajs, l, horizon, "char_functional[" + std::to_string(q) + "]"));
      }
    }

    std::string summary = "test,statistic,threshold,pass\n";
    for (const auto& c : checks) {
      summary += c.name + "," + io::fmt17(c.statistic) + "," + io::fmt17(c.threshold) + "," + (c.pass ? "1" : "0") + "\n";
    }
    out << summary;
    if (opt.out_dir) {
      std::filesystem::create_directories(*opt.out_dir);
      io::write_file((std::filesystem::path(*opt.out_dir) / "verify_summary.csv").string(), summary);
    }
    return pathwise_failures == 0 ? kOk : kDomainFailure;
  });
}

inline int cmd_snapshot(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const config::RunConfig cfg = detail::load(opt);
    if (opt.files.size() != 1) {
      err << "snapshot takes exactly one trajectory file\n";
      return static_cast<int>(kUsageError);
    }
    if (opt.times.empty()) {
      err << "snapshot needs --times\n";
      return static_cast<int>(kUsageError);
    }
    const TripletReport rep = validate_triplet(cfg.triplet);
    if (!rep.ok()) throw TripletInvalid("configuration fails the triplet conditions");
    const LevyModel& m = cfg.triplet.model;
    const auto loaded = detail::load_trajectory(opt.files.front(), cfg, rep.gamma0);
    const std::filesystem::path dir(cfg.outputs.directory);
    std::filesystem::create_directories(dir);
    const std::string stem = std::filesystem::path(loaded.file).stem().string();
    int status = kOk;
    for (std::size_t q = 0; q < opt.times.size(); ++q) {
      const double t = opt.times[q];
      if (!(t >= 0.0 && t <= loaded.traj.horizon)) throw config::ConfigError("--times: values must lie in [0, T]");
      const EmbeddedFunction state = state_at(loaded.traj, m, t);
      FuzzyVector fz = [&] {
        try {
          return invert(state);
        } catch (const InversionFailed& e) {
          throw InversionFailed(e.level(), std::string("at t=") + io::fmt17(t));
        }
      }();
      const std::string base = stem + "_t" + std::to_string(q);
      io::write_file((dir / (base + "_support.csv")).string(), io::support_csv(state));
      io::write_file((dir / (base + "_cuts.csv")).string(), io::vertex_dump_csv(fz));
      const bool positive = is_K_positive(fz, m.cone(), 1e-9 * std::max(1.0, state.max_abs()));
      out << "t=" << io::fmt17(t) << " " << base << " K-positive: " << (positive ? "yes" : "NO") << "\n";
      if (!positive) status = kDomainFailure;
    }
    return status;
  });
}

}  // namespace conelevy::cli
