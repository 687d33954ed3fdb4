#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "dlmperf/configs.hpp"
#include "dlmperf/kernel_cost.hpp"
#include "dlmperf/phases.hpp"

namespace dlmperf {

enum class Bound { memory_bound, compute_bound };

inline std::string_view to_string(Bound b) {
  return b == Bound::memory_bound ? "memory_bound" : "compute_bound";
}

struct RooflinePoint {
  double ai = 0;             // FLOP/byte
  double perf_attained = 0;  // FLOP/s
  Bound bound = Bound::memory_bound;
  std::string label;
};

/// AI where the bandwidth roof meets the compute roof.
inline double ridge_point(const HardwareSpec& hw) { return hw.peak_flops / hw.mem_bandwidth; }

/// Ties at the ridge count as compute-bound.
inline Bound classify(double ai, const HardwareSpec& hw) {
  return ai < ridge_point(hw) ? Bound::memory_bound : Bound::compute_bound;
}

inline double kernel_time(const KernelCost& c, const HardwareSpec& hw) {
  return std::max(static_cast<double>(c.flops) / hw.peak_flops,
                  static_cast<double>(c.bytes) / hw.mem_bandwidth);
}

/// Kernels run back to back; each one overlaps its own compute and memory
/// traffic but nothing overlaps across kernels.
inline double phase_latency(const PhaseCost& c, const HardwareSpec& hw) {
  double t = 0;
  for (const auto& term : c.breakdown.terms()) {
    t += static_cast<double>(term.count) * kernel_time(term.cost, hw);
  }
  return t;
}

/// True when every kernel of the phase spends at least as long computing as moving data.
inline bool all_kernels_compute_bound(const PhaseCost& c, const HardwareSpec& hw) {
  return std::all_of(c.breakdown.terms().begin(), c.breakdown.terms().end(),
                     [&](const CostTerm& t) {
                       return static_cast<double>(t.cost.flops) / hw.peak_flops >=
                              static_cast<double>(t.cost.bytes) / hw.mem_bandwidth;
                     });
}

struct EndToEnd {
  double latency_s = 0;
  double throughput_tok_s = 0;
  std::vector<PhaseCost> phases;
  std::vector<RooflinePoint> points;

  std::uint64_t flops() const {
    std::uint64_t f = 0;
    for (const auto& p : phases) f = detail::checked_add(f, p.flops());
    return f;
  }
  std::uint64_t bytes() const {
    std::uint64_t b = 0;
    for (const auto& p : phases) b = detail::checked_add(b, p.bytes());
    return b;
  }
  double ai() const { return static_cast<double>(flops()) / static_cast<double>(bytes()); }
};

/// Latency, throughput (B·L_g generated tokens over the total latency) and
/// one roofline point per phase for a validated scenario.
inline EndToEnd end_to_end(const Scenario& s) {
  EndToEnd r;
  r.phases = workload_phases(s.model, s.workload);
  for (const auto& p : r.phases) {
    const double t = phase_latency(p, s.hardware);
    r.latency_s += t;
    const double ai = arithmetic_intensity(p);
    r.points.push_back({ai, t > 0 ? static_cast<double>(p.flops()) / t : 0.0,
                        classify(ai, s.hardware), std::string(to_string(p.phase))});
  }
  r.throughput_tok_s = r.latency_s > 0 ? static_cast<double>(s.workload.batch) *
                                             static_cast<double>(s.workload.gen_len) / r.latency_s
                                       : 0.0;
  return r;
}

}  // namespace dlmperf
