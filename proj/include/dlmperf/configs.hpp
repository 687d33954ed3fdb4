#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlmperf/error.hpp"

namespace dlmperf {

enum class MlpKind { swiglu, gelu_2mat };
enum class AttentionKind { causal_capable, bidirectional_only };
enum class DecodeMode { arm, dlm_naive, dlm_block };

inline std::string_view to_string(MlpKind k) {
  return k == MlpKind::swiglu ? "swiglu" : "gelu_2mat";
}
inline std::string_view to_string(AttentionKind k) {
  return k == AttentionKind::causal_capable ? "causal_capable" : "bidirectional_only";
}
inline std::string_view to_string(DecodeMode m) {
  switch (m) {
    case DecodeMode::arm: return "arm";
    case DecodeMode::dlm_naive: return "dlm_naive";
    case DecodeMode::dlm_block: return "dlm_block";
  }
  return "?";
}

inline MlpKind parse_mlp_kind(std::string_view s) {
  if (s == "swiglu") return MlpKind::swiglu;
  if (s == "gelu_2mat") return MlpKind::gelu_2mat;
  throw ValidationError("mlp_kind: unknown value '" + std::string(s) + "'");
}
inline AttentionKind parse_attention_kind(std::string_view s) {
  if (s == "causal_capable") return AttentionKind::causal_capable;
  if (s == "bidirectional_only") return AttentionKind::bidirectional_only;
  throw ValidationError("attention_kind: unknown value '" + std::string(s) + "'");
}
inline DecodeMode parse_mode(std::string_view s) {
  if (s == "arm") return DecodeMode::arm;
  if (s == "dlm_naive") return DecodeMode::dlm_naive;
  if (s == "dlm_block") return DecodeMode::dlm_block;
  throw ValidationError("mode: unknown value '" + std::string(s) + "'");
}

inline bool is_diffusion(DecodeMode m) { return m != DecodeMode::arm; }

/// Transformer architecture constants. `d_model` is the hidden dimension.
struct ModelConfig {
  std::string name;
  std::uint64_t num_layers = 0;
  std::uint64_t d_model = 0;
  std::uint64_t num_heads = 0;
  std::uint64_t num_kv_heads = 0;
  std::uint64_t head_dim = 0;
  std::uint64_t ffn_dim = 0;
  std::uint64_t vocab_size = 0;
  MlpKind mlp_kind = MlpKind::swiglu;
  AttentionKind attention_kind = AttentionKind::causal_capable;
  // Input embedding and LM head share one matrix.
  bool tied_embeddings = false;

  std::uint64_t kv_dim() const { return num_kv_heads * head_dim; }

  bool operator==(const ModelConfig&) const = default;
};

/// Roofline parameters of one device. Units: FLOP/s, bytes/s, bytes.
struct HardwareSpec {
  std::string name;
  double peak_flops = 0;
  double mem_bandwidth = 0;
  double mem_capacity = 0;

  // Optional breakdown of peak_flops into its tensor-core factors.
  struct PeakDerivation {
    std::uint64_t sm_count = 0;
    std::uint64_t tensor_cores_per_sm = 0;
    std::uint64_t fma_per_cycle_per_core = 0;
    double clock_hz = 0;
    double flops_per_fma = 2;

    double peak() const {
      return static_cast<double>(sm_count * tensor_cores_per_sm * fma_per_cycle_per_core) *
             clock_hz * flops_per_fma;
    }
    bool operator==(const PeakDerivation&) const = default;
  };
  std::optional<PeakDerivation> derivation;

  double ridge_point() const { return peak_flops / mem_bandwidth; }

  bool operator==(const HardwareSpec&) const = default;
};

/// Flags selecting between counting conventions the cost model leaves open.
struct CountingOptions {
  bool include_lm_head = false;
  bool include_cache_refresh = false;
  bool count_elementwise_bytes = false;
  bool causal_exact = true;
  // Block-wise DLM attends over the full final length L at every step
  // instead of the growing prompt + finished blocks + active block extent.
  bool full_length_block_kv = false;

  bool operator==(const CountingOptions&) const = default;
};

struct WorkloadSpec {
  DecodeMode mode = DecodeMode::arm;
  std::uint64_t batch = 1;
  std::uint64_t prompt_len = 0;
  std::uint64_t gen_len = 1;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> block_size;
  std::uint64_t dtype_bytes = 2;
  CountingOptions options;

  // Populated by validate_workload.
  std::uint64_t total_len = 0;
  std::uint64_t num_blocks = 0;

  bool operator==(const WorkloadSpec&) const = default;
};

inline void validate(const ModelConfig& m) {
  auto positive = [](std::uint64_t v, const char* field) {
    if (v < 1) throw ValidationError(std::string(field) + " must be >= 1");
  };
  positive(m.num_layers, "num_layers");
  positive(m.d_model, "d_model");
  positive(m.num_heads, "num_heads");
  positive(m.num_kv_heads, "num_kv_heads");
  positive(m.head_dim, "head_dim");
  positive(m.ffn_dim, "ffn_dim");
  positive(m.vocab_size, "vocab_size");
  if (m.num_heads * m.head_dim != m.d_model) {
    throw ValidationError("num_heads × head_dim ≠ d_model (" + std::to_string(m.num_heads) +
                          " × " + std::to_string(m.head_dim) + " vs " +
                          std::to_string(m.d_model) + ")");
  }
  if (m.num_heads % m.num_kv_heads != 0) {
    throw ValidationError("num_kv_heads must divide num_heads");
  }
}

inline void validate(const HardwareSpec& hw) {
  auto positive = [](double v, const char* field) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw ValidationError(std::string(field) + " must be finite and > 0");
    }
  };
  positive(hw.peak_flops, "peak_flops");
  positive(hw.mem_bandwidth, "mem_bandwidth");
  positive(hw.mem_capacity, "mem_capacity");
}

/// Checks every workload invariant against `m` and fills in the derived
/// total length and block count. K defaults to L_g in diffusion modes.
inline WorkloadSpec validate_workload(WorkloadSpec w, const ModelConfig& m) {
  if (w.batch < 1) throw ValidationError("batch must be >= 1");
  if (w.gen_len < 1) throw ValidationError("gen_len must be >= 1");
  if (w.dtype_bytes != 1 && w.dtype_bytes != 2 && w.dtype_bytes != 4) {
    throw ValidationError("dtype_bytes must be 1, 2 or 4");
  }
  if (w.mode == DecodeMode::arm) {
    if (m.attention_kind == AttentionKind::bidirectional_only) {
      throw ValidationError("mode arm requires a causal_capable model; '" + m.name +
                            "' is bidirectional_only");
    }
    if (w.steps) throw ValidationError("steps is only valid for diffusion modes");
    if (w.block_size) throw ValidationError("block_size is only valid for mode dlm_block");
  } else {
    if (!w.steps) w.steps = w.gen_len;
    if (*w.steps < 1) throw ValidationError("steps must be >= 1");
  }
  if (w.mode == DecodeMode::dlm_naive && w.block_size) {
    throw ValidationError("block_size is only valid for mode dlm_block");
  }
  w.total_len = w.prompt_len + w.gen_len;
  w.num_blocks = 0;
  if (w.mode == DecodeMode::dlm_block) {
    if (!w.block_size) throw ValidationError("block_size is required for mode dlm_block");
    if (*w.block_size < 1) throw ValidationError("block_size must be >= 1");
    if (*w.block_size > w.gen_len) {
      throw ValidationError("block size exceeds generation length");
    }
    w.num_blocks = (w.gen_len + *w.block_size - 1) / *w.block_size;
    if (*w.steps < w.num_blocks) {
      throw ValidationError("fewer steps than blocks (steps " + std::to_string(*w.steps) +
                            " < blocks " + std::to_string(w.num_blocks) + ")");
    }
  }
  return w;
}

/// A model on a device running one workload.
struct Scenario {
  ModelConfig model;
  HardwareSpec hardware;
  WorkloadSpec workload;

  bool operator==(const Scenario&) const = default;
};

/// Validates all three parts and returns the scenario with derived workload fields.
inline Scenario make_scenario(ModelConfig m, HardwareSpec hw, WorkloadSpec w) {
  validate(m);
  validate(hw);
  w = validate_workload(std::move(w), m);
  return {std::move(m), std::move(hw), std::move(w)};
}

// Registry. Architecture constants come from the models' published
// config.json files (meta-llama/Meta-Llama-3-8B-Instruct,
// GSAI-ML/LLaDA-8B-Instruct).
namespace registry {

inline const ModelConfig& llama3_8b() {
  static const ModelConfig m{"llama3-8b", 32, 4096, 32, 8, 128, 14336, 128256,
                             MlpKind::swiglu, AttentionKind::causal_capable, false};
  return m;
}

// LLaDA-8B: full multi-head attention (32 KV heads), SwiGLU with 12288 hidden,
// 126464-entry vocabulary, untied output head.
inline const ModelConfig& llada_8b() {
  static const ModelConfig m{"llada-8b", 32, 4096, 32, 32, 128, 12288, 126464,
                             MlpKind::swiglu, AttentionKind::bidirectional_only, false};
  return m;
}

inline const ModelConfig& tiny_test() {
  static const ModelConfig m{"tiny-test", 1, 4, 1, 1, 4, 8, 16,
                             MlpKind::swiglu, AttentionKind::causal_capable, false};
  return m;
}

// GA102 dense FP16 tensor-core peak: 84 SM × 4 TC × 128 FMA/cycle × 1.8 GHz × 2.
// The registered figure is the rounded 154.8 TFLOP/s.
inline const HardwareSpec& rtx_a6000() {
  static const HardwareSpec hw{"rtx-a6000", 154.8e12, 768e9, 48e9,
                               HardwareSpec::PeakDerivation{84, 4, 128, 1.8e9, 2}};
  return hw;
}

// A100 SXM 80 GB datasheet: 312 TFLOP/s dense FP16, 2039 GB/s HBM2e.
inline const HardwareSpec& a100_80g() {
  static const HardwareSpec hw{"a100-80g", 312e12, 2.039e12, 80e9, std::nullopt};
  return hw;
}

inline std::vector<std::string> model_names() { return {"llada-8b", "llama3-8b", "tiny-test"}; }
inline std::vector<std::string> hardware_names() { return {"a100-80g", "rtx-a6000"}; }

inline const ModelConfig* find_model(std::string_view name) {
  if (name == "llama3-8b") return &llama3_8b();
  if (name == "llada-8b") return &llada_8b();
  if (name == "tiny-test") return &tiny_test();
  return nullptr;
}

inline const HardwareSpec* find_hardware(std::string_view name) {
  if (name == "rtx-a6000") return &rtx_a6000();
  if (name == "a100-80g") return &a100_80g();
  return nullptr;
}

}  // namespace registry
}  // namespace dlmperf
