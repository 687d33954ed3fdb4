#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dlmperf/configs.hpp"
#include "dlmperf/memory.hpp"
#include "dlmperf/roofline.hpp"
#include "dlmperf/scenario_io.hpp"

namespace dlmperf {

/// A workload axis: field name and the values it takes.
struct SweepAxis {
  std::string field;
  std::vector<std::uint64_t> values;
};

/// Cartesian product of axes applied over a base workload. The first axis
/// varies slowest.
struct SweepGrid {
  ModelConfig model;
  HardwareSpec hardware;
  WorkloadSpec base;
  std::vector<SweepAxis> axes;
};

struct SweepRow {
  DecodeMode mode = DecodeMode::arm;
  std::uint64_t batch = 0;
  std::uint64_t prompt_len = 0;
  std::uint64_t gen_len = 0;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> block_size;
  std::uint64_t flops = 0;
  std::uint64_t bytes = 0;
  double ai = 0;
  double latency_s = 0;
  double throughput_tok_s = 0;
  Bound bound = Bound::memory_bound;
  std::uint64_t peak_mem_bytes = 0;
  bool fits = false;
};

inline bool is_sweepable_field(const std::string& f) {
  return f == "batch" || f == "prompt_len" || f == "gen_len" || f == "steps" ||
         f == "block_size" || f == "dtype_bytes";
}

inline void set_field(WorkloadSpec& w, const std::string& field, std::uint64_t v) {
  if (field == "batch") w.batch = v;
  else if (field == "prompt_len") w.prompt_len = v;
  else if (field == "gen_len") w.gen_len = v;
  else if (field == "steps") w.steps = v;
  else if (field == "block_size") w.block_size = v;
  else if (field == "dtype_bytes") w.dtype_bytes = v;
  else throw ValidationError("axis '" + field + "' is not a sweepable workload field");
}

/// Evaluates one validated scenario into a table row.
inline SweepRow evaluate(const Scenario& s) {
  const auto e2e = end_to_end(s);
  const auto mem = peak_footprint(s);
  const auto& w = s.workload;
  SweepRow r;
  r.mode = w.mode;
  r.batch = w.batch;
  r.prompt_len = w.prompt_len;
  r.gen_len = w.gen_len;
  r.steps = w.steps;
  r.block_size = w.block_size;
  r.flops = e2e.flops();
  r.bytes = e2e.bytes();
  r.ai = e2e.ai();
  r.latency_s = e2e.latency_s;
  r.throughput_tok_s = e2e.throughput_tok_s;
  r.bound = classify(r.ai, s.hardware);
  r.peak_mem_bytes = mem.total;
  r.fits = mem.fits;
  return r;
}

/// Grid points in lexicographic axis order, each validated. A point that
/// fails validation aborts expansion with the point named in the message.
inline std::vector<Scenario> expand_grid(const SweepGrid& g) {
  validate(g.model);
  validate(g.hardware);
  for (const auto& a : g.axes) {
    if (!is_sweepable_field(a.field)) {
      throw ValidationError("axis '" + a.field + "' is not a sweepable workload field");
    }
    if (a.values.empty()) throw ValidationError("axis '" + a.field + "' has no values");
  }
  std::vector<Scenario> out;
  std::vector<std::size_t> idx(g.axes.size(), 0);
  while (true) {
    WorkloadSpec w = g.base;
    std::string where;
    for (std::size_t i = 0; i < g.axes.size(); ++i) {
      const auto v = g.axes[i].values[idx[i]];
      set_field(w, g.axes[i].field, v);
      where += (where.empty() ? "" : ", ") + g.axes[i].field + "=" + std::to_string(v);
    }
    try {
      out.push_back({g.model, g.hardware, validate_workload(w, g.model)});
    } catch (const ValidationError& e) {
      throw ValidationError("grid point {" + where + "}: " + e.what());
    }
    // odometer increment, last axis fastest
    std::size_t k = g.axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < g.axes[k].values.size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (g.axes.empty()) return out;
  }
}

/// One row per grid point in grid order. Points are evaluated on up to
/// `threads` workers; rows are placed by index.
inline std::vector<SweepRow> run_sweep(const SweepGrid& g, unsigned threads = 0) {
  const auto points = expand_grid(g);
  std::vector<SweepRow> rows(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = evaluate(points[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            rows[i] = evaluate(points[i]);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

/// Least-squares slope of log y against log x.
inline double fit_scaling_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ValidationError("scaling fit needs at least 3 points");
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw ValidationError("scaling fit needs positive x and y");
    mx += std::log(x);
    my += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxy += dx * (std::log(y) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw ValidationError("scaling fit needs distinct x values");
  return sxy / sxx;
}

/// Grid file: a scenario object whose count fields may instead be given in
/// an "axes" object, e.g. {"axes": {"gen_len": [128, 256], "batch": [1, 2]}}.
inline SweepGrid grid_from_json(const Json& j, const std::filesystem::path& base_dir = {}) {
  detail::reject_unknown_keys(j,
                              {"model", "hardware", "mode", "batch", "prompt_len", "gen_len",
                               "steps", "block_size", "dtype_bytes", "options", "axes"},
                              "grid");
  SweepGrid g;
  g.model = detail::model_field(j, base_dir);
  g.hardware = detail::hardware_field(j, base_dir);
  g.base = detail::workload_fields(j, false);
  if (auto it = j.find("axes"); it != j.end()) {
    if (!it->is_object()) throw ValidationError("grid: axes must be an object");
    for (const auto& [field, values] : it->items()) {
      if (!is_sweepable_field(field)) {
        throw ValidationError("axis '" + field + "' is not a sweepable workload field");
      }
      if (!values.is_array()) throw ValidationError("axis '" + field + "' must be an array");
      SweepAxis axis{field, {}};
      for (const auto& v : values) axis.values.push_back(detail::as_count(v, field));
      g.axes.push_back(std::move(axis));
    }
  }
  for (const char* required : {"batch", "prompt_len", "gen_len"}) {
    bool on_axis = false;
    for (const auto& a : g.axes) on_axis = on_axis || a.field == required;
    if (!on_axis && !j.contains(required)) {
      throw ValidationError(std::string("grid: missing field '") + required + "'");
    }
  }
  return g;
}

inline SweepGrid load_grid(const std::filesystem::path& path) {
  return grid_from_json(read_json_file(path), path.parent_path());
}

}  // namespace dlmperf
