#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dlmperf/scenario_io.hpp"
#include "dlmperf/sweep.hpp"

namespace dlmperf {

inline constexpr const char* kCsvHeader =
    "mode,B,Lp,Lg,K,G,flops,bytes,ai,latency_s,throughput_tok_s,bound,peak_mem_bytes,fits";

/// Six significant digits, C locale.
inline std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_line(const SweepRow& r) {
  auto opt = [](const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  std::ostringstream o;
  o << to_string(r.mode) << ',' << r.batch << ',' << r.prompt_len << ',' << r.gen_len << ','
    << (r.mode == DecodeMode::arm ? std::string() : opt(r.steps)) << ','
    << (r.mode == DecodeMode::dlm_block ? opt(r.block_size) : std::string()) << ',' << r.flops
    << ',' << r.bytes << ',' << format_g6(r.ai) << ',' << format_g6(r.latency_s) << ','
    << format_g6(r.throughput_tok_s) << ',' << to_string(r.bound) << ',' << r.peak_mem_bytes
    << ',' << (r.fits ? "true" : "false");
  return o.str();
}

inline void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  emit_csv(rows, out);
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

/// Parses a file written by emit_csv.
inline std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ValidationError("csv: unexpected header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 14) throw ValidationError("csv: expected 14 columns: " + line);
    auto u = [](const std::string& s) -> std::uint64_t { return std::stoull(s); };
    auto opt = [&](const std::string& s) -> std::optional<std::uint64_t> {
      if (s.empty()) return std::nullopt;
      return u(s);
    };
    SweepRow r;
    r.mode = parse_mode(cells[0]);
    r.batch = u(cells[1]);
    r.prompt_len = u(cells[2]);
    r.gen_len = u(cells[3]);
    r.steps = opt(cells[4]);
    r.block_size = opt(cells[5]);
    r.flops = u(cells[6]);
    r.bytes = u(cells[7]);
    r.ai = std::stod(cells[8]);
    r.latency_s = std::stod(cells[9]);
    r.throughput_tok_s = std::stod(cells[10]);
    if (cells[11] == "memory_bound") r.bound = Bound::memory_bound;
    else if (cells[11] == "compute_bound") r.bound = Bound::compute_bound;
    else throw ValidationError("csv: bad bound '" + cells[11] + "'");
    r.peak_mem_bytes = u(cells[12]);
    r.fits = cells[13] == "true";
    rows.push_back(r);
  }
  return rows;
}

/// Same keys as the CSV header; absent K/G are null.
inline Json row_to_json(const SweepRow& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["B"] = r.batch;
  j["Lp"] = r.prompt_len;
  j["Lg"] = r.gen_len;
  j["K"] = (r.mode != DecodeMode::arm && r.steps) ? Json(*r.steps) : Json(nullptr);
  j["G"] = (r.mode == DecodeMode::dlm_block && r.block_size) ? Json(*r.block_size)
                                                              : Json(nullptr);
  j["flops"] = r.flops;
  j["bytes"] = r.bytes;
  j["ai"] = r.ai;
  j["latency_s"] = r.latency_s;
  j["throughput_tok_s"] = r.throughput_tok_s;
  j["bound"] = to_string(r.bound);
  j["peak_mem_bytes"] = r.peak_mem_bytes;
  j["fits"] = r.fits;
  return j;
}

/// Two-column "key  value" listing.
inline std::string row_to_text(const SweepRow& r) {
  const auto j = row_to_json(r);
  std::ostringstream o;
  for (const auto& [k, v] : j.items()) {
    std::string value;
    if (v.is_null()) value = "-";
    else if (v.is_string()) value = v.get<std::string>();
    else if (v.is_number_float()) value = format_g6(v.get<double>());
    else value = v.dump();
    o << std::left << std::setw(18) << k << value << '\n';
  }
  return o.str();
}

}  // namespace dlmperf
