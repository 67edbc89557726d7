#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include "irs/harness.hpp"
#include "irs/random.hpp"

namespace irs {

namespace {

enum class StreamTag : std::uint64_t { kChannel = 0xC4A77E1, kPhaseInit = 0x9A5E1 };

std::uint64_t name_key(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

// One sweep point: the system parameters that vary along the axis.
struct AxisPoint {
  double value;  // as written to the CSV
  int elements;
  double power_dbm;
};

struct SweepPlan {
  Experiment experiment;
  std::vector<AxisPoint> points;
  std::vector<SchemeKind> schemes;
};

std::uint64_t phase_seed(const ExperimentConfig& cfg, const SchemeKind& scheme, double axis,
                         double sigma2, int trial) {
  const auto tag = static_cast<std::uint64_t>(StreamTag::kPhaseInit);
  const auto t = static_cast<std::uint64_t>(trial);
  if (cfg.share_initial_phases) return derive_seed(cfg.seed, {tag, t});
  return derive_seed(cfg.seed, {tag, name_key(scheme.name()), std::bit_cast<std::uint64_t>(axis),
                                std::bit_cast<std::uint64_t>(sigma2), t});
}

// All records of one (axis point, trial) pair; the channel draw is shared by
// every scheme and error level.
std::vector<SweepRecord> run_cell(const ExperimentConfig& cfg, const SweepPlan& plan,
                                  const AxisPoint& point, int trial) {
  const SystemDims dims{cfg.antennas, point.elements};
  const std::uint64_t channel_seed = derive_seed(
      cfg.seed, {static_cast<std::uint64_t>(StreamTag::kChannel), static_cast<std::uint64_t>(trial)});
  const ChannelEstimate<double> est = draw_channels<double>(dims, cfg.geometry, cfg.fading, channel_seed);
  const LinkGains gains = link_gains(cfg.geometry, cfg.fading);

  AoConfig solver = cfg.solver;
  solver.p0 = dbm_to_watts(point.power_dbm);
  solver.sigma_n2 = dbm_to_watts(cfg.noise_dbm);

  std::vector<SweepRecord> out;
  for (double sigma2 : cfg.sigma2) {
    const ErrorStats<double> errs = absolute_error_stats(ErrorStats<double>::uniform(sigma2), gains);
    // Robust AO runs keyed by phase seed, reused by the discrete schemes.
    std::map<std::uint64_t, AoTrace<double>> robust_runs;
    for (const SchemeKind& scheme : plan.schemes) {
      SweepRecord rec;
      rec.scheme = scheme.name();
      rec.axis_name = axis_name(plan.experiment);
      rec.axis_value = point.value;
      rec.sigma2 = sigma2;
      rec.trial = trial;
      const auto start = std::chrono::steady_clock::now();
      try {
        const std::uint64_t seed = phase_seed(cfg, scheme, point.value, sigma2, trial);
        SchemeOutcome<double> res;
        if (scheme.type == SchemeKind::Type::kRobust || scheme.type == SchemeKind::Type::kDiscretePhase) {
          auto it = robust_runs.find(seed);
          if (it == robust_runs.end())
            it = robust_runs.emplace(seed, run_ao(est, errs, dims, solver, seed)).first;
          res = score_from_robust(scheme, it->second, est, errs, solver);
        } else {
          res = run_scheme(scheme, est, errs, dims, solver, seed);
        }
        rec.mse = res.design.mse;
        rec.iters = res.iterations;
        rec.converged = res.converged;
      } catch (const std::exception&) {
        rec.mse = std::nan("");
        rec.iters = 0;
        rec.converged = false;
      }
      if (cfg.record_timing)
        rec.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<SweepRecord> run_plan(const ExperimentConfig& cfg, const SweepPlan& plan) {
  cfg.validate();
  const std::size_t n_points = plan.points.size();
  const std::size_t n_items = n_points * static_cast<std::size_t>(cfg.trials);
  std::vector<std::vector<SweepRecord>> slots(n_items);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_items; i = next++)
      slots[i] = run_cell(cfg, plan, plan.points[i % n_points], static_cast<int>(i / n_points));
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_items, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<SweepRecord> records;
  records.reserve(n_items * plan.schemes.size() * cfg.sigma2.size());
  for (auto& s : slots)
    for (auto& r : s) records.push_back(std::move(r));

  // Key order: scheme (config order), axis point, sigma2, trial.
  auto scheme_rank = [&](const std::string& name) {
    for (std::size_t i = 0; i < plan.schemes.size(); ++i)
      if (plan.schemes[i].name() == name) return i;
    return plan.schemes.size();
  };
  auto point_rank = [&](double v) {
    for (std::size_t i = 0; i < n_points; ++i)
      if (plan.points[i].value == v) return i;
    return n_points;
  };
  auto sigma_rank = [&](double v) {
    return static_cast<std::size_t>(std::find(cfg.sigma2.begin(), cfg.sigma2.end(), v) - cfg.sigma2.begin());
  };
  std::stable_sort(records.begin(), records.end(), [&](const SweepRecord& a, const SweepRecord& b) {
    return std::make_tuple(scheme_rank(a.scheme), point_rank(a.axis_value), sigma_rank(a.sigma2), a.trial) <
           std::make_tuple(scheme_rank(b.scheme), point_rank(b.axis_value), sigma_rank(b.sigma2), b.trial);
  });
  return records;
}

}  // namespace

std::vector<SweepRecord> run_power_sweep(const ExperimentConfig& cfg) {
  SweepPlan plan{Experiment::kPower, {}, cfg.power.schemes};
  for (double p : cfg.power.power_dbm) plan.points.push_back({p, cfg.power.elements, p});
  return run_plan(cfg, plan);
}

std::vector<SweepRecord> run_element_sweep(const ExperimentConfig& cfg) {
  SweepPlan plan{Experiment::kElements, {}, cfg.elements.schemes};
  for (int n : cfg.elements.elements)
    plan.points.push_back({static_cast<double>(n), n, cfg.elements.power_dbm});
  return run_plan(cfg, plan);
}

std::vector<SweepRecord> run_experiment(const ExperimentConfig& cfg, Experiment experiment) {
  return experiment == Experiment::kPower ? run_power_sweep(cfg) : run_element_sweep(cfg);
}

}  // namespace irs
