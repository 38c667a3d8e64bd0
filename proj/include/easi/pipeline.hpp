#pragma once

// Analytical throughput model of the hardware datapath. A per-sample SGD
// update carries a loop dependency through B, so a pipelined datapath must
// drain between samples; the mini-batch rule breaks the dependency and
// keeps every stage busy. Stage depth is 10 fixed stages plus a reduction
// tree of depth log2(m n).

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace easi {

enum class PipelineMode { SgdMultiCycle, SgdPipelinedStalled, SmbgdPipelined };

struct PipelineSpec {
  std::size_t m = 4;
  std::size_t n = 2;
  double clock_mhz = 55.17;
  PipelineMode mode = PipelineMode::SmbgdPipelined;
};

inline void validate(const PipelineSpec& spec) {
  if (spec.n < 1 || spec.m < spec.n)
    throw std::invalid_argument("pipeline spec: need m >= n >= 1");
  if (!(std::isfinite(spec.clock_mhz) && spec.clock_mhz > 0))
    throw std::invalid_argument("pipeline spec: clock_mhz must be finite and > 0");
}

/// 10 + ceil(log2(m n)); 10 when m = n = 1. Depth is integral, so the
/// reduction tree rounds up for non-power-of-two m n.
inline std::size_t stage_count(std::size_t m, std::size_t n) {
  if (n < 1 || m < n)
    throw std::invalid_argument("stage_count: need m >= n >= 1, got m=" + std::to_string(m) +
                                " n=" + std::to_string(n));
  const std::uint64_t mn = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
  return 10 + static_cast<std::size_t>(std::bit_width(mn - 1));
}

struct ThroughputReport {
  std::size_t stages = 0;
  double throughput_mips = 0;        // iterations in flight per microsecond
  double completion_rate_msps = 0;   // samples retired per microsecond
  double clock_speedup = 1;
  double throughput_speedup = 1;
};

/// Throughput under the in-flight accounting: a full pipeline holds one
/// iteration per stage, so the pipelined mini-batch design counts
/// clock x stages. The multi-cycle design retires one iteration per clock;
/// the stalled pipelined design drains all stages per sample. The
/// completion-rate field gives samples actually retired per unit time under
/// the same assumptions.
inline ThroughputReport throughput(const PipelineSpec& spec) {
  validate(spec);
  ThroughputReport report;
  report.stages = stage_count(spec.m, spec.n);
  const double stages = static_cast<double>(report.stages);
  switch (spec.mode) {
    case PipelineMode::SmbgdPipelined:
      report.throughput_mips = spec.clock_mhz * stages;
      report.completion_rate_msps = spec.clock_mhz;
      break;
    case PipelineMode::SgdMultiCycle:
      report.throughput_mips = spec.clock_mhz;
      report.completion_rate_msps = spec.clock_mhz;
      break;
    case PipelineMode::SgdPipelinedStalled:
      report.throughput_mips = spec.clock_mhz / stages;
      report.completion_rate_msps = spec.clock_mhz / stages;
      break;
  }
  return report;
}

/// The improved spec's report with speedups filled in relative to base.
inline ThroughputReport speedup_report(const PipelineSpec& base, const PipelineSpec& improved) {
  const ThroughputReport base_report = throughput(base);
  ThroughputReport report = throughput(improved);
  report.clock_speedup = improved.clock_mhz / base.clock_mhz;
  report.throughput_speedup = report.throughput_mips / base_report.throughput_mips;
  return report;
}

}  // namespace easi
