#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dlmperf/configs.hpp"
#include "dlmperf/kernel_cost.hpp"

namespace dlmperf {

enum class PhaseKind { arm_prefill, arm_decode, dlm_naive, dlm_block };

inline std::string_view to_string(PhaseKind p) {
  switch (p) {
    case PhaseKind::arm_prefill: return "arm_prefill";
    case PhaseKind::arm_decode: return "arm_decode";
    case PhaseKind::dlm_naive: return "dlm_naive";
    case PhaseKind::dlm_block: return "dlm_block";
  }
  return "?";
}

/// A kernel together with how many times it is executed.
struct CostTerm {
  KernelCost cost;
  std::uint64_t count = 1;

  bool operator==(const CostTerm&) const = default;
};

/// Multiset of kernel invocations. Identical kernels (same label, FLOPs and
/// bytes) share one term, so a phase with thousands of identical steps stays
/// small. Totals are kept in step with the terms.
class CostBreakdown {
 public:
  void add(const KernelCost& k, std::uint64_t count = 1) {
    if (count == 0) return;
    flops_ = detail::checked_add(flops_, detail::checked_mul(k.flops, count));
    bytes_ = detail::checked_add(bytes_, detail::checked_mul(k.bytes, count));
    auto key = std::make_tuple(k.label, k.flops, k.bytes);
    if (auto it = index_.find(key); it != index_.end()) {
      terms_[it->second].count = detail::checked_add(terms_[it->second].count, count);
      return;
    }
    index_.emplace(std::move(key), terms_.size());
    terms_.push_back({k, count});
  }

  void add(const CostBreakdown& other, std::uint64_t times = 1) {
    for (const auto& t : other.terms_) add(t.cost, detail::checked_mul(t.count, times));
  }

  std::uint64_t flops() const { return flops_; }
  std::uint64_t bytes() const { return bytes_; }
  const std::vector<CostTerm>& terms() const { return terms_; }

  bool operator==(const CostBreakdown& o) const { return terms_ == o.terms_; }

 private:
  std::vector<CostTerm> terms_;
  std::map<std::tuple<std::string, std::uint64_t, std::uint64_t>, std::size_t> index_;
  std::uint64_t flops_ = 0;
  std::uint64_t bytes_ = 0;
};

struct PhaseCost {
  PhaseKind phase = PhaseKind::arm_prefill;
  CostBreakdown breakdown;
  // Model forward invocations represented.
  std::uint64_t steps = 1;

  std::uint64_t flops() const { return breakdown.flops(); }
  std::uint64_t bytes() const { return breakdown.bytes(); }
};

inline double arithmetic_intensity(const PhaseCost& c) {
  if (c.bytes() == 0) throw ValidationError("arithmetic intensity undefined for zero bytes");
  return static_cast<double>(c.flops()) / static_cast<double>(c.bytes());
}

/// One forward pass of the whole model over `q_len` query positions attending
/// to `kv_len` keys: Q/K/V/O projections, attention and MLP per layer, times
/// num_layers, plus the optional LM head once.
inline CostBreakdown layer_forward_cost(const ModelConfig& m, std::uint64_t batch,
                                        std::uint64_t q_len, std::uint64_t kv_len,
                                        std::uint64_t dtype_bytes, bool causal, bool write_new_kv,
                                        const CountingOptions& opts,
                                        std::string_view prefix = {}) {
  const std::string p(prefix);
  const std::uint64_t d = m.d_model;
  CostBreakdown layer;
  layer.add(linear_cost(batch, q_len, d, d, dtype_bytes, p + "q_proj"));
  layer.add(linear_cost(batch, q_len, d, m.kv_dim(), dtype_bytes, p + "k_proj"));
  layer.add(linear_cost(batch, q_len, d, m.kv_dim(), dtype_bytes, p + "v_proj"));
  layer.add(linear_cost(batch, q_len, d, d, dtype_bytes, p + "o_proj"));
  layer.add(attention_cost(batch, m.num_heads, m.num_kv_heads, m.head_dim, q_len, kv_len,
                           dtype_bytes, causal && opts.causal_exact, write_new_kv,
                           p + "attention"));
  if (m.mlp_kind == MlpKind::swiglu) {
    layer.add(linear_cost(batch, q_len, d, m.ffn_dim, dtype_bytes, p + "mlp_gate"));
  }
  layer.add(linear_cost(batch, q_len, d, m.ffn_dim, dtype_bytes, p + "mlp_up"));
  layer.add(linear_cost(batch, q_len, m.ffn_dim, d, dtype_bytes, p + "mlp_down"));
  if (opts.count_elementwise_bytes) {
    // two norms and two residual adds over d, one activation pass over ffn_dim
    layer.add(elementwise_bytes(batch, q_len, d, 4, dtype_bytes, p + "elementwise"));
    layer.add(elementwise_bytes(batch, q_len, m.ffn_dim, 1, dtype_bytes, p + "elementwise_ffn"));
  }

  CostBreakdown out;
  out.add(layer, m.num_layers);
  if (opts.include_lm_head) {
    out.add(linear_cost(batch, q_len, d, m.vocab_size, dtype_bytes, p + "lm_head"));
  }
  return out;
}

namespace detail {
inline void require_causal(const ModelConfig& m) {
  if (m.attention_kind != AttentionKind::causal_capable) {
    throw ValidationError("autoregressive phases require a causal_capable model; '" + m.name +
                          "' is bidirectional_only");
  }
}
}  // namespace detail

/// Prompt processing: one causal pass over L_p tokens that also writes the
/// prompt's K/V into the cache.
inline PhaseCost arm_prefill_cost(const ModelConfig& m, std::uint64_t batch,
                                  std::uint64_t prompt_len, std::uint64_t dtype_bytes,
                                  const CountingOptions& opts) {
  detail::require_causal(m);
  detail::require_positive(prompt_len, "prompt_len");
  PhaseCost c{PhaseKind::arm_prefill, {}, 1};
  c.breakdown =
      layer_forward_cost(m, batch, prompt_len, prompt_len, dtype_bytes, true, true, opts);
  return c;
}

/// L_g single-token steps; step t attends over the L_p + t cached positions
/// (including its own) and appends one K/V row. Weights are reloaded every step.
inline PhaseCost arm_decode_cost(const ModelConfig& m, std::uint64_t batch,
                                 std::uint64_t prompt_len, std::uint64_t gen_len,
                                 std::uint64_t dtype_bytes, const CountingOptions& opts) {
  detail::require_causal(m);
  detail::require_positive(gen_len, "gen_len");
  PhaseCost c{PhaseKind::arm_decode, {}, gen_len};
  for (std::uint64_t t = 1; t <= gen_len; ++t) {
    c.breakdown.add(
        layer_forward_cost(m, batch, 1, prompt_len + t, dtype_bytes, false, true, opts));
  }
  return c;
}

/// K bidirectional passes over the full L_p + L_g sequence without any cache.
inline PhaseCost naive_dlm_cost(const ModelConfig& m, std::uint64_t batch,
                                std::uint64_t prompt_len, std::uint64_t gen_len,
                                std::uint64_t steps, std::uint64_t dtype_bytes,
                                const CountingOptions& opts) {
  detail::require_positive(gen_len, "gen_len");
  detail::require_positive(steps, "steps");
  const std::uint64_t total = prompt_len + gen_len;
  PhaseCost c{PhaseKind::dlm_naive, {}, steps};
  c.breakdown.add(layer_forward_cost(m, batch, total, total, dtype_bytes, false, false, opts),
                  steps);
  return c;
}

/// Steps given to each of `num_blocks` blocks: K split as evenly as possible,
/// the first K mod N blocks getting one extra.
inline std::vector<std::uint64_t> split_steps(std::uint64_t steps, std::uint64_t num_blocks) {
  std::vector<std::uint64_t> out(num_blocks, steps / num_blocks);
  for (std::uint64_t j = 0; j < steps % num_blocks; ++j) ++out[j];
  return out;
}

/// Block-wise decoding with an approximate KV cache. Block j refines its G_j
/// tokens for its share of the K steps, attending over the prompt, the
/// finished blocks and itself. With include_cache_refresh every block adds one
/// full pass over the sequence decoded so far that rebuilds the cache.
inline PhaseCost blockwise_dlm_cost(const ModelConfig& m, std::uint64_t batch,
                                    std::uint64_t prompt_len, std::uint64_t gen_len,
                                    std::uint64_t steps, std::uint64_t block_size,
                                    std::uint64_t dtype_bytes, const CountingOptions& opts) {
  detail::require_positive(gen_len, "gen_len");
  detail::require_positive(block_size, "block_size");
  if (block_size > gen_len) throw ValidationError("block size exceeds generation length");
  const std::uint64_t num_blocks = (gen_len + block_size - 1) / block_size;
  if (steps < num_blocks) throw ValidationError("fewer steps than blocks");

  const std::uint64_t total = prompt_len + gen_len;
  const auto per_block = split_steps(steps, num_blocks);
  PhaseCost c{PhaseKind::dlm_block, {}, steps};
  for (std::uint64_t j = 0; j < num_blocks; ++j) {
    const std::uint64_t done = j * block_size;
    const std::uint64_t active = std::min(block_size, gen_len - done);
    const std::uint64_t kv = opts.full_length_block_kv ? total : prompt_len + done + active;
    if (per_block[j] > 0) {
      c.breakdown.add(
          layer_forward_cost(m, batch, active, kv, dtype_bytes, false, false, opts),
          per_block[j]);
    }
    if (opts.include_cache_refresh) {
      const std::uint64_t span = prompt_len + done + active;
      c.breakdown.add(
          layer_forward_cost(m, batch, span, span, dtype_bytes, false, true, opts, "refresh."));
      ++c.steps;
    }
  }
  return c;
}

/// Cost of every phase a validated workload runs, in execution order.
/// ARM yields prefill (skipped when L_p = 0) then decode.
inline std::vector<PhaseCost> workload_phases(const ModelConfig& m, const WorkloadSpec& w) {
  switch (w.mode) {
    case DecodeMode::arm: {
      std::vector<PhaseCost> out;
      if (w.prompt_len > 0) {
        out.push_back(arm_prefill_cost(m, w.batch, w.prompt_len, w.dtype_bytes, w.options));
      }
      out.push_back(
          arm_decode_cost(m, w.batch, w.prompt_len, w.gen_len, w.dtype_bytes, w.options));
      return out;
    }
    case DecodeMode::dlm_naive:
      return {naive_dlm_cost(m, w.batch, w.prompt_len, w.gen_len, w.steps.value_or(w.gen_len),
                             w.dtype_bytes, w.options)};
    case DecodeMode::dlm_block:
      if (!w.block_size) throw ValidationError("block_size is required for mode dlm_block");
      return {blockwise_dlm_cost(m, w.batch, w.prompt_len, w.gen_len,
                                 w.steps.value_or(w.gen_len), *w.block_size, w.dtype_bytes,
                                 w.options)};
  }
  return {};
}

}  // namespace dlmperf
