#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlmperf/configs.hpp"
#include "dlmperf/report.hpp"
#include "dlmperf/scenario_io.hpp"
#include "dlmperf/svg.hpp"
#include "dlmperf/sweep.hpp"

namespace dlmperf::cli {

inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kIoError = 2;

inline std::string describe_hardware(const HardwareSpec& hw) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "name       %s\n", hw.name.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "peak       %.1f TFLOP/s\n", hw.peak_flops / 1e12);
  out += buf;
  if (hw.derivation) {
    const auto& d = *hw.derivation;
    std::snprintf(buf, sizeof buf,
                  "           = %llu SM x %llu TC/SM x %llu FMA/(cycle*TC) x %.2f GHz x %g "
                  "FLOP/FMA = %.4f TFLOP/s\n",
                  static_cast<unsigned long long>(d.sm_count),
                  static_cast<unsigned long long>(d.tensor_cores_per_sm),
                  static_cast<unsigned long long>(d.fma_per_cycle_per_core), d.clock_hz / 1e9,
                  d.flops_per_fma, d.peak() / 1e12);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "bandwidth  %g GB/s\n", hw.mem_bandwidth / 1e9);
  out += buf;
  std::snprintf(buf, sizeof buf, "capacity   %g GB\n", hw.mem_capacity / 1e9);
  out += buf;
  std::snprintf(buf, sizeof buf, "ridge      %.1f FLOP/Byte\n", ridge_point(hw));
  out += buf;
  return out;
}

inline std::string describe_model(const ModelConfig& m) {
  return to_json(m).dump(2) + "\n";
}

/// Runs the command line. Exit status: 0 success, 1 validation or usage
/// error, 2 I/O error. OOM scenarios are results, not errors.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analytical roofline and cost model for autoregressive and diffusion LM inference",
               "dlmperf"};
  app.require_subcommand(1);

  std::string config, output, kind, name;

  auto* analyze = app.add_subcommand("analyze", "Evaluate one scenario");
  analyze->add_option("-c,--config", config, "Scenario JSON file")->required();

  auto* sweep = app.add_subcommand("sweep", "Evaluate a grid and write CSV");
  sweep->add_option("-c,--config", config, "Grid JSON file")->required();
  sweep->add_option("-o,--output", output, "Output CSV path")->required();

  auto* roofline = app.add_subcommand("roofline", "Roofline SVG for a grid");
  roofline->add_option("-c,--config", config, "Grid JSON file")->required();
  roofline->add_option("-o,--output", output, "Output SVG path")->required();

  auto* plot = app.add_subcommand("plot", "Metric vs first grid axis as SVG");
  plot->add_option("--kind", kind, "latency, throughput or ai")
      ->required()
      ->check(CLI::IsMember({"latency", "throughput", "ai"}));
  plot->add_option("-c,--config", config, "Grid JSON file")->required();
  plot->add_option("-o,--output", output, "Output SVG path")->required();

  auto* hw = app.add_subcommand("hw", "Hardware registry");
  hw->require_subcommand(1);
  auto* hw_list = hw->add_subcommand("list", "List registered devices");
  auto* hw_show = hw->add_subcommand("show", "Show one device");
  hw_show->add_option("name", name, "Registry name or JSON file")->required();

  auto* model = app.add_subcommand("model", "Model registry");
  model->require_subcommand(1);
  auto* model_list = model->add_subcommand("list", "List registered models");
  auto* model_show = model->add_subcommand("show", "Show one model");
  model_show->add_option("name", name, "Registry name or JSON file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidationError;
  }

  try {
    if (*analyze) {
      const auto s = load_scenario(config);
      const auto row = evaluate(s);
      out << row_to_text(row) << row_to_json(row).dump() << '\n';
    } else if (*sweep) {
      const auto grid = load_grid(config);
      emit_csv(run_sweep(grid), std::filesystem::path(output));
    } else if (*roofline) {
      const auto grid = load_grid(config);
      std::vector<RooflinePoint> points;
      for (const auto& s : expand_grid(grid)) {
        const auto e2e = end_to_end(s);
        for (auto p : e2e.points) {
          p.label += " Lp=" + std::to_string(s.workload.prompt_len) +
                     " Lg=" + std::to_string(s.workload.gen_len);
          points.push_back(std::move(p));
        }
      }
      svg::emit_roofline_svg(points, grid.hardware, output);
    } else if (*plot) {
      const auto grid = load_grid(config);
      const auto rows = run_sweep(grid);
      const auto doc = svg::line_plot_svg(grid, rows, svg::parse_plot_kind(kind));
      std::ofstream f(output, std::ios::binary);
      if (!f) throw IoError("cannot write '" + output + "'");
      f << doc;
      if (!f.flush()) throw IoError("write to '" + output + "' failed");
    } else if (*hw_list) {
      for (const auto& n : registry::hardware_names()) out << n << '\n';
    } else if (*hw_show) {
      out << describe_hardware(load_hardware_spec(name));
    } else if (*model_list) {
      for (const auto& n : registry::model_names()) out << n << '\n';
    } else if (*model_show) {
      out << describe_model(load_model_config(name));
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kOk;
}

}  // namespace dlmperf::cli
