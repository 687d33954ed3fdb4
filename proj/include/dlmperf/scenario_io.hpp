#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlmperf/configs.hpp"

// Scenario file format: one JSON object
//   {model, hardware, mode, batch, prompt_len, gen_len,
//    steps?, block_size?, dtype_bytes?, options?}
// `model` and `hardware` are registry names, paths to JSON files holding the
// config object, or inline config objects. Unknown keys are rejected.
// Grid files add an "axes" object mapping workload fields to value lists.

namespace dlmperf {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::uint64_t as_count(const Json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    throw ValidationError(field + " must be >= 0 (got " + v.dump() + ")");
  }
  throw ValidationError(field + " must be a non-negative integer (got " + v.dump() + ")");
}

inline double as_positive_number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field + " must be a number");
  return v.get<double>();
}

inline bool as_flag(const Json& v, const std::string& field) {
  if (!v.is_boolean()) throw ValidationError(field + " must be true or false");
  return v.get<bool>();
}

inline std::string as_string(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ValidationError(field + " must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline ModelConfig model_from_json(const Json& j) {
  detail::reject_unknown_keys(j,
                              {"name", "num_layers", "d_model", "num_heads", "num_kv_heads",
                               "head_dim", "ffn_dim", "vocab_size", "mlp_kind", "attention_kind",
                               "tied_embeddings"},
                              "model");
  using detail::as_count;
  using detail::require;
  ModelConfig m;
  m.name = detail::as_string(require(j, "name", "model"), "name");
  m.num_layers = as_count(require(j, "num_layers", "model"), "num_layers");
  m.d_model = as_count(require(j, "d_model", "model"), "d_model");
  m.num_heads = as_count(require(j, "num_heads", "model"), "num_heads");
  m.num_kv_heads = as_count(require(j, "num_kv_heads", "model"), "num_kv_heads");
  m.head_dim = as_count(require(j, "head_dim", "model"), "head_dim");
  m.ffn_dim = as_count(require(j, "ffn_dim", "model"), "ffn_dim");
  m.vocab_size = as_count(require(j, "vocab_size", "model"), "vocab_size");
  if (auto it = j.find("mlp_kind"); it != j.end()) {
    m.mlp_kind = parse_mlp_kind(detail::as_string(*it, "mlp_kind"));
  }
  if (auto it = j.find("attention_kind"); it != j.end()) {
    m.attention_kind = parse_attention_kind(detail::as_string(*it, "attention_kind"));
  }
  if (auto it = j.find("tied_embeddings"); it != j.end()) {
    m.tied_embeddings = detail::as_flag(*it, "tied_embeddings");
  }
  validate(m);
  return m;
}

inline Json to_json(const ModelConfig& m) {
  return Json{{"name", m.name},
              {"num_layers", m.num_layers},
              {"d_model", m.d_model},
              {"num_heads", m.num_heads},
              {"num_kv_heads", m.num_kv_heads},
              {"head_dim", m.head_dim},
              {"ffn_dim", m.ffn_dim},
              {"vocab_size", m.vocab_size},
              {"mlp_kind", to_string(m.mlp_kind)},
              {"attention_kind", to_string(m.attention_kind)},
              {"tied_embeddings", m.tied_embeddings}};
}

inline HardwareSpec hardware_from_json(const Json& j) {
  detail::reject_unknown_keys(j, {"name", "peak_flops", "mem_bandwidth", "mem_capacity"},
                              "hardware");
  using detail::as_positive_number;
  using detail::require;
  HardwareSpec hw;
  hw.name = detail::as_string(require(j, "name", "hardware"), "name");
  hw.peak_flops = as_positive_number(require(j, "peak_flops", "hardware"), "peak_flops");
  hw.mem_bandwidth = as_positive_number(require(j, "mem_bandwidth", "hardware"), "mem_bandwidth");
  hw.mem_capacity = as_positive_number(require(j, "mem_capacity", "hardware"), "mem_capacity");
  validate(hw);
  return hw;
}

inline Json to_json(const HardwareSpec& hw) {
  return Json{{"name", hw.name},
              {"peak_flops", hw.peak_flops},
              {"mem_bandwidth", hw.mem_bandwidth},
              {"mem_capacity", hw.mem_capacity}};
}

namespace detail {
inline bool looks_like_path(const std::string& s) {
  return s.find('/') != std::string::npos || s.find('\\') != std::string::npos ||
         std::filesystem::path(s).has_extension();
}

inline std::filesystem::path resolve(const std::string& s, const std::filesystem::path& base) {
  std::filesystem::path p(s);
  return p.is_absolute() || base.empty() ? p : base / p;
}
}  // namespace detail

/// Registry name ("llama3-8b", "llada-8b", "tiny-test") or path to a model JSON file.
inline ModelConfig load_model_config(const std::string& source,
                                     const std::filesystem::path& base_dir = {}) {
  if (const auto* m = registry::find_model(source)) return *m;
  const auto path = detail::resolve(source, base_dir);
  if (!detail::looks_like_path(source) && !std::filesystem::exists(path)) {
    throw ValidationError("unknown model '" + source + "'");
  }
  return model_from_json(read_json_file(path));
}

/// Registry name ("rtx-a6000", "a100-80g") or path to a hardware JSON file.
inline HardwareSpec load_hardware_spec(const std::string& source,
                                       const std::filesystem::path& base_dir = {}) {
  if (const auto* hw = registry::find_hardware(source)) return *hw;
  const auto path = detail::resolve(source, base_dir);
  if (!detail::looks_like_path(source) && !std::filesystem::exists(path)) {
    throw ValidationError("unknown hardware '" + source + "'");
  }
  return hardware_from_json(read_json_file(path));
}

inline CountingOptions options_from_json(const Json& j) {
  detail::reject_unknown_keys(j,
                              {"include_lm_head", "include_cache_refresh",
                               "count_elementwise_bytes", "causal_exact", "full_length_block_kv"},
                              "options");
  CountingOptions o;
  auto flag = [&](const char* key, bool& out) {
    if (auto it = j.find(key); it != j.end()) out = detail::as_flag(*it, key);
  };
  flag("include_lm_head", o.include_lm_head);
  flag("include_cache_refresh", o.include_cache_refresh);
  flag("count_elementwise_bytes", o.count_elementwise_bytes);
  flag("causal_exact", o.causal_exact);
  flag("full_length_block_kv", o.full_length_block_kv);
  return o;
}

inline Json to_json(const CountingOptions& o) {
  return Json{{"include_lm_head", o.include_lm_head},
              {"include_cache_refresh", o.include_cache_refresh},
              {"count_elementwise_bytes", o.count_elementwise_bytes},
              {"causal_exact", o.causal_exact},
              {"full_length_block_kv", o.full_length_block_kv}};
}

namespace detail {

inline const std::initializer_list<const char*> kScenarioKeys = {
    "model",    "hardware", "mode",        "batch",       "prompt_len",
    "gen_len",  "steps",    "block_size",  "dtype_bytes", "options"};

// Workload fields present in `j`; absent optional fields keep their defaults.
inline WorkloadSpec workload_fields(const Json& j, bool require_counts) {
  WorkloadSpec w;
  w.mode = parse_mode(as_string(require(j, "mode", "scenario"), "mode"));
  auto count = [&](const char* key, std::uint64_t& out) {
    if (auto it = j.find(key); it != j.end()) {
      out = as_count(*it, key);
    } else if (require_counts) {
      throw ValidationError(std::string("scenario: missing field '") + key + "'");
    }
  };
  count("batch", w.batch);
  count("prompt_len", w.prompt_len);
  count("gen_len", w.gen_len);
  if (auto it = j.find("dtype_bytes"); it != j.end()) w.dtype_bytes = as_count(*it, "dtype_bytes");
  if (auto it = j.find("steps"); it != j.end()) w.steps = as_count(*it, "steps");
  if (auto it = j.find("block_size"); it != j.end()) w.block_size = as_count(*it, "block_size");
  if (auto it = j.find("options"); it != j.end()) w.options = options_from_json(*it);
  return w;
}

inline ModelConfig model_field(const Json& j, const std::filesystem::path& base) {
  const Json& v = require(j, "model", "scenario");
  if (v.is_object()) return model_from_json(v);
  return load_model_config(as_string(v, "model"), base);
}

inline HardwareSpec hardware_field(const Json& j, const std::filesystem::path& base) {
  const Json& v = require(j, "hardware", "scenario");
  if (v.is_object()) return hardware_from_json(v);
  return load_hardware_spec(as_string(v, "hardware"), base);
}

}  // namespace detail

/// Parses and validates a scenario. Relative model/hardware paths resolve
/// against `base_dir`.
inline Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir = {}) {
  detail::reject_unknown_keys(j, detail::kScenarioKeys, "scenario");
  auto m = detail::model_field(j, base_dir);
  auto hw = detail::hardware_field(j, base_dir);
  auto w = detail::workload_fields(j, true);
  return make_scenario(std::move(m), std::move(hw), std::move(w));
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

/// Serializes a scenario; registry models and devices are written by name.
/// Derived workload fields are not written.
inline Json to_json(const Scenario& s) {
  Json j;
  const auto* reg_m = registry::find_model(s.model.name);
  j["model"] = (reg_m && *reg_m == s.model) ? Json(s.model.name) : to_json(s.model);
  const auto* reg_hw = registry::find_hardware(s.hardware.name);
  j["hardware"] = (reg_hw && *reg_hw == s.hardware) ? Json(s.hardware.name) : to_json(s.hardware);
  const auto& w = s.workload;
  j["mode"] = to_string(w.mode);
  j["batch"] = w.batch;
  j["prompt_len"] = w.prompt_len;
  j["gen_len"] = w.gen_len;
  if (w.steps) j["steps"] = *w.steps;
  if (w.block_size) j["block_size"] = *w.block_size;
  j["dtype_bytes"] = w.dtype_bytes;
  j["options"] = to_json(w.options);
  return j;
}

}  // namespace dlmperf
