#pragma once

// Seed-swept optimizer comparison. Every (seed, arm) pair is an independent
// run: the seed fixes the mixing matrix, the source streams, and the
// separator's initial state, and all arms of one seed share them, so arm
// differences are paired rather than confounded with draw luck. Runs may
// execute on any number of threads; results land in slots indexed by
// (seed, arm), so output order is deterministic regardless of scheduling.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "easi/bench/config.hpp"
#include "easi/bench/csv.hpp"
#include "easi/bench/stats.hpp"
#include "easi/metrics.hpp"
#include "easi/separator.hpp"
#include "easi/signal.hpp"

namespace easi::bench {

// Sub-seed purposes: one run seed fans out into independent streams.
inline constexpr std::uint64_t kPurposeMixing = 1;
inline constexpr std::uint64_t kPurposeSources = 2;
inline constexpr std::uint64_t kPurposeInit = 3;

/// Per-seed iteration ratio of one arm against arm 0, over seeds where both
/// converged. A 95% interval excluding 1.0 makes the comparison decisive.
struct PairedRatio {
  std::size_t count = 0;
  double mean = 0;
  double ci_lo = 0;
  double ci_hi = 0;
};

struct ComparisonSummary {
  std::vector<ArmSummary> arms;
  std::vector<std::optional<PairedRatio>> ratio_vs_arm0;  // entry 0 is nullopt
};

struct ExperimentResult {
  ComparisonSummary summary;
  std::vector<RunSeries> runs;  // seed-major, arm-minor, matching config order
};

/// One run: stream samples through the separator, record the Amari index of
/// C = B A_t each sample, stop early once the convergence window completes
/// or the state diverges. Degenerate metric input (an exactly zero row in C)
/// also counts as divergence; a single bad run never aborts a sweep.
inline RunSeries run_single(const ExperimentConfig& config, std::uint64_t seed,
                            const ArmConfig& arm) {
  RunSeries out;
  out.seed = seed;
  out.arm = arm.name;
  out.record.amari.reserve(std::min<std::size_t>(config.max_samples, 1u << 20));
  try {
    MixingModel model;
    model.A = build_mixing(config.mixture.m, config.mixture.n, derive_seed(seed, kPurposeMixing));
    model.sources = config.mixture.sources;
    model.schedule = config.mixture.schedule;
    validate(model);
    SeparatorState<float> st =
        init_separator(config.mixture.n, config.mixture.m, arm.hp, derive_seed(seed, kPurposeInit));
    const std::uint64_t source_seed = derive_seed(seed, kPurposeSources);
    ConvergenceScan scan(config.convergence);
    for (std::size_t t = 0; t < config.max_samples; ++t) {
      const MixSample sample = mix(model, t, source_seed);
      step_sample(st, vec_cast<float>(sample.x), arm.hp);
      if (has_diverged(st.B)) {
        out.record.diverged = true;
        break;
      }
      const Mat<double> c = matmul(mat_cast<double>(st.B), sample.a_t);
      out.record.amari.push_back(amari_index(c));
      scan.push(out.record.amari.back());
      if (scan.hit()) {
        out.record.iterations_to_convergence = *scan.hit();
        break;
      }
    }
  } catch (const std::exception&) {
    out.record.diverged = true;
  }
  return out;
}

/// Aggregates slot-ordered runs into per-arm statistics. Means cover only
/// converged, non-diverged runs; the excluded counts are always reported, so
/// survivorship bias cannot hide.
inline ComparisonSummary summarize_runs(const ExperimentConfig& config,
                                        const std::vector<RunSeries>& runs) {
  const std::size_t num_arms = config.arms.size();
  const std::size_t num_seeds = config.seeds.size();
  if (runs.size() != num_arms * num_seeds)
    throw std::invalid_argument("summarize_runs: expected " +
                                std::to_string(num_arms * num_seeds) + " runs, got " +
                                std::to_string(runs.size()));

  std::vector<std::vector<std::optional<double>>> iters(
      num_arms, std::vector<std::optional<double>>(num_seeds));
  ComparisonSummary summary;
  summary.arms.resize(num_arms);
  summary.ratio_vs_arm0.resize(num_arms);

  for (std::size_t a = 0; a < num_arms; ++a) {
    ArmSummary& row = summary.arms[a];
    row.arm = config.arms[a].name;
    std::vector<double> converged_iters;
    for (std::size_t s = 0; s < num_seeds; ++s) {
      const RunSeries& run = runs[s * num_arms + a];
      if (run.record.diverged) {
        ++row.diverged;
        continue;
      }
      if (run.record.iterations_to_convergence) {
        const double v = static_cast<double>(*run.record.iterations_to_convergence);
        iters[a][s] = v;
        converged_iters.push_back(v);
      }
    }
    row.converged = converged_iters.size();
    if (const auto stats = summarize(converged_iters)) {
      row.mean_iters = stats->mean;
      row.stddev = stats->stddev;
      row.ci95_lo = stats->ci_lo;
      row.ci95_hi = stats->ci_hi;
    }
  }

  for (std::size_t a = 0; a < num_arms; ++a) {
    ArmSummary& row = summary.arms[a];
    if (a == 0) {
      if (row.mean_iters) row.improvement_vs_arm0 = 0.0;
      continue;
    }
    if (row.mean_iters && summary.arms[0].mean_iters)
      row.improvement_vs_arm0 = 1.0 - *row.mean_iters / *summary.arms[0].mean_iters;
    std::vector<double> ratios;
    for (std::size_t s = 0; s < num_seeds; ++s)
      if (iters[a][s] && iters[0][s]) ratios.push_back(*iters[a][s] / *iters[0][s]);
    if (const auto stats = summarize(ratios)) {
      PairedRatio ratio;
      ratio.count = stats->count;
      ratio.mean = stats->mean;
      ratio.ci_lo = stats->ci_lo;
      ratio.ci_hi = stats->ci_hi;
      summary.ratio_vs_arm0[a] = ratio;
    }
  }
  return summary;
}

/// Runs the full (seed x arm) grid, fanning out across jobs threads.
/// Deterministic for a given config: thread count affects wall time only.
inline ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs = 1) {
  validate(config);
  const std::size_t num_arms = config.arms.size();
  const std::size_t total = config.seeds.size() * num_arms;
  std::vector<RunSeries> runs(total);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      runs[i] = run_single(config, config.seeds[i / num_arms], config.arms[i % num_arms]);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  ExperimentResult result;
  result.summary = summarize_runs(config, runs);
  result.runs = std::move(runs);
  return result;
}

inline void write_outputs(const ExperimentResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  emit_runs_csv(result.runs, out_dir + "/runs.csv");
  emit_summary_csv(result.summary.arms, out_dir + "/summary.csv");
}

inline std::string report_text(const ComparisonSummary& summary) {
  std::ostringstream out;
  char buf[160];
  for (std::size_t a = 0; a < summary.arms.size(); ++a) {
    const ArmSummary& row = summary.arms[a];
    out << row.arm << ": ";
    if (row.mean_iters) {
      std::snprintf(buf, sizeof(buf), "mean %.1f iters (sd %.1f, 95%% CI [%.1f, %.1f])",
                    *row.mean_iters, *row.stddev, *row.ci95_lo, *row.ci95_hi);
      out << buf;
    } else {
      out << "no converged runs";
    }
    out << ", converged " << row.converged << ", diverged " << row.diverged;
    if (a > 0 && row.improvement_vs_arm0) {
      std::snprintf(buf, sizeof(buf), ", improvement vs %s %.1f%%", summary.arms[0].arm.c_str(),
                    100.0 * *row.improvement_vs_arm0);
      out << buf;
    }
    if (a > 0 && summary.ratio_vs_arm0[a]) {
      const PairedRatio& ratio = *summary.ratio_vs_arm0[a];
      std::snprintf(buf, sizeof(buf), ", paired ratio %.3f (95%% CI [%.3f, %.3f], n=%zu)",
                    ratio.mean, ratio.ci_lo, ratio.ci_hi, ratio.count);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

// ---- hyperparameter sweep ----

struct SweepPoint {
  float mu = 0;
  float beta = 0;
  float gamma = 0;
  std::size_t batch_size = 0;
  ArmSummary summary;
};

inline std::string format_param(float v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", static_cast<double>(v));
  return buf;
}

inline std::string sweep_arm_name(float mu, float beta, float gamma, std::size_t batch_size) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "mu%g_b%g_g%g_P%zu", static_cast<double>(mu),
                static_cast<double>(beta), static_cast<double>(gamma), batch_size);
  return buf;
}

/// Cross product of the given hyperparameter lists, each point one arm, all
/// sharing the base config's mixture, seeds, and convergence criterion.
inline std::vector<SweepPoint> sweep(const ExperimentConfig& base, OptimizerKind optimizer,
                                     const std::vector<float>& mus,
                                     const std::vector<float>& betas,
                                     const std::vector<float>& gammas,
                                     const std::vector<std::size_t>& batch_sizes,
                                     std::size_t jobs = 1) {
  if (mus.empty() || betas.empty() || gammas.empty() || batch_sizes.empty())
    throw std::invalid_argument("sweep: every hyperparameter list must be non-empty");
  ExperimentConfig config = base;
  config.arms.clear();
  std::vector<SweepPoint> points;
  for (const float mu : mus)
    for (const float beta : betas)
      for (const float gamma : gammas)
        for (const std::size_t batch_size : batch_sizes) {
          ArmConfig arm;
          arm.name = sweep_arm_name(mu, beta, gamma, batch_size);
          arm.hp.optimizer = optimizer;
          arm.hp.learning_rate = mu;
          arm.hp.batch_decay = beta;
          arm.hp.momentum = gamma;
          arm.hp.batch_size = batch_size;
          config.arms.push_back(arm);
          SweepPoint point;
          point.mu = mu;
          point.beta = beta;
          point.gamma = gamma;
          point.batch_size = batch_size;
          points.push_back(point);
        }
  const ExperimentResult result = run_experiment(config, jobs);
  for (std::size_t i = 0; i < points.size(); ++i) points[i].summary = result.summary.arms[i];
  return points;
}

/// Most converged runs first, lowest mean iterations as the tie-breaker.
inline const SweepPoint& pick_best(const std::vector<SweepPoint>& points) {
  if (points.empty()) throw std::invalid_argument("pick_best: no sweep points");
  const SweepPoint* best = nullptr;
  for (const SweepPoint& p : points) {
    if (!p.summary.mean_iters) continue;
    if (!best || p.summary.converged > best->summary.converged ||
        (p.summary.converged == best->summary.converged &&
         *p.summary.mean_iters < *best->summary.mean_iters))
      best = &p;
  }
  if (!best) throw std::runtime_error("pick_best: no sweep point converged");
  return *best;
}

inline void emit_sweep_csv(const std::vector<SweepPoint>& points, const std::string& path) {
  std::ofstream out = detail::open_for_write(path);
  out << "mu,beta,gamma,batch_size,mean_iters,stddev,ci95_lo,ci95_hi,converged,diverged\n";
  for (const SweepPoint& p : points)
    out << format_param(p.mu) << ',' << format_param(p.beta) << ',' << format_param(p.gamma)
        << ',' << p.batch_size << ','
        << format_optional(p.summary.mean_iters) << ',' << format_optional(p.summary.stddev)
        << ',' << format_optional(p.summary.ci95_lo) << ',' << format_optional(p.summary.ci95_hi)
        << ',' << p.summary.converged << ',' << p.summary.diverged << '\n';
  detail::finish_write(out, path);
}

}  // namespace easi::bench
