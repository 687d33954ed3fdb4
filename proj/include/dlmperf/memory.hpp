#pragma once

#include <algorithm>
#include <cstdint>

#include "dlmperf/configs.hpp"

// Peak device-memory model: resident weights, the KV cache, and a coarse
// activation working set. Running out of memory is reported, never thrown.

namespace dlmperf {

struct MemoryFootprint {
  std::uint64_t weight_bytes = 0;
  std::uint64_t kv_cache_bytes = 0;
  std::uint64_t activation_bytes = 0;
  std::uint64_t total = 0;
  bool fits = false;
};

// Activation buffers are double-buffered.
inline constexpr std::uint64_t kActivationBuffers = 2;

/// Parameter count: embedding, per-layer attention projections and MLP
/// matrices, and the LM head (shared with the embedding when tied).
/// Biases and norm scales are ignored.
inline std::uint64_t parameter_count(const ModelConfig& m) {
  using detail::checked_add;
  using detail::product;
  const std::uint64_t d = m.d_model;
  const std::uint64_t attn =
      checked_add(product(2, d, d), product(2, d, m.kv_dim()));
  const std::uint64_t mlp_mats = m.mlp_kind == MlpKind::swiglu ? 3 : 2;
  const std::uint64_t mlp = product(mlp_mats, d, m.ffn_dim);
  const std::uint64_t layers = product(m.num_layers, checked_add(attn, mlp));
  const std::uint64_t embed = product(m.vocab_size, d);
  return checked_add(layers, m.tied_embeddings ? embed : product(2, embed));
}

inline std::uint64_t weight_bytes(const ModelConfig& m, std::uint64_t dtype_bytes) {
  return detail::checked_mul(parameter_count(m), dtype_bytes);
}

/// K and V for every layer, sequence and position.
inline std::uint64_t kv_cache_bytes(const ModelConfig& m, std::uint64_t batch,
                                    std::uint64_t tokens, std::uint64_t dtype_bytes) {
  return detail::product(2, m.num_layers, batch, tokens, m.kv_dim(), dtype_bytes);
}

inline std::uint64_t activation_bytes(const ModelConfig& m, std::uint64_t batch,
                                      std::uint64_t positions, std::uint64_t dtype_bytes) {
  return detail::product(kActivationBuffers, batch, positions, std::max(m.d_model, m.ffn_dim),
                         dtype_bytes);
}

/// Positions in the widest single forward pass of the workload. ARM: the
/// prompt pass (or one token). Block-wise DLM: the prompt pass or the active
/// block, or the full sequence when cache refresh passes run. Naive DLM: the
/// full sequence.
inline std::uint64_t peak_forward_positions(const WorkloadSpec& w) {
  const std::uint64_t total = w.prompt_len + w.gen_len;
  switch (w.mode) {
    case DecodeMode::arm: return std::max<std::uint64_t>(w.prompt_len, 1);
    case DecodeMode::dlm_naive: return total;
    case DecodeMode::dlm_block:
      if (w.options.include_cache_refresh) return total;
      return std::max(w.prompt_len, w.block_size.value_or(1));
  }
  return total;
}

/// ARM and block-wise DLM keep the full-sequence KV cache resident; the
/// naive DLM keeps none but holds full-sequence activations.
inline MemoryFootprint peak_footprint(const ModelConfig& m, const WorkloadSpec& w,
                                      double capacity_bytes) {
  MemoryFootprint f;
  const std::uint64_t total = w.prompt_len + w.gen_len;
  f.weight_bytes = weight_bytes(m, w.dtype_bytes);
  f.kv_cache_bytes =
      w.mode == DecodeMode::dlm_naive ? 0 : kv_cache_bytes(m, w.batch, total, w.dtype_bytes);
  f.activation_bytes = activation_bytes(m, w.batch, peak_forward_positions(w), w.dtype_bytes);
  f.total = detail::checked_add(f.weight_bytes,
                                detail::checked_add(f.kv_cache_bytes, f.activation_bytes));
  f.fits = static_cast<double>(f.total) <= capacity_bytes;
  return f;
}

inline MemoryFootprint peak_footprint(const Scenario& s) {
  return peak_footprint(s.model, s.workload, s.hardware.mem_capacity);
}

/// Largest batch in [1, limit] whose footprint fits, scanning upward until the
/// first batch that does not fit. Returns 0 when even B = 1 does not fit.
inline std::uint64_t max_fitting_batch(const ModelConfig& m, WorkloadSpec w,
                                       double capacity_bytes, std::uint64_t limit = 1u << 20) {
  std::uint64_t best = 0;
  for (std::uint64_t b = 1; b <= limit; ++b) {
    w.batch = b;
    if (!peak_footprint(m, w, capacity_bytes).fits) break;
    best = b;
  }
  return best;
}

}  // namespace dlmperf
