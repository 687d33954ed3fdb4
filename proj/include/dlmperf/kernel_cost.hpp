#pragma once

#include <cstdint>
#include <string>

#include "dlmperf/error.hpp"

// Primitive kernel costs under the ideal-cache roofline convention: every
// operand crosses the memory interface exactly once, one multiply-add is two
// FLOPs, and only GEMM FLOPs are counted. Attention is modeled as a fused
// kernel, so the score matrix never reaches memory.

namespace dlmperf {

struct KernelCost {
  std::uint64_t flops = 0;
  std::uint64_t bytes = 0;
  std::string label;

  bool operator==(const KernelCost&) const = default;
};

namespace detail {
inline void require_positive(std::uint64_t v, const char* what) {
  if (v < 1) throw ValidationError(std::string(what) + " must be >= 1");
}
}  // namespace detail

/// Dense projection of B·L activations from d_in to d_out features.
/// Bytes are the weight matrix, the input activations and the output activations.
inline KernelCost linear_cost(std::uint64_t batch, std::uint64_t tokens, std::uint64_t d_in,
                              std::uint64_t d_out, std::uint64_t dtype_bytes,
                              std::string label = "linear") {
  detail::require_positive(batch, "batch");
  detail::require_positive(tokens, "tokens");
  detail::require_positive(d_in, "d_in");
  detail::require_positive(d_out, "d_out");
  detail::require_positive(dtype_bytes, "dtype_bytes");
  using detail::checked_add;
  using detail::product;
  const std::uint64_t rows = product(batch, tokens);
  const std::uint64_t elems = checked_add(product(d_in, d_out),
                                          checked_add(product(rows, d_in), product(rows, d_out)));
  return {product(2, rows, d_in, d_out), product(dtype_bytes, elems), std::move(label)};
}

/// Number of (query, key) pairs scored. With `causal` the queries are the
/// last q_len positions of a kv_len-long range and each attends to itself and
/// everything before it.
inline std::uint64_t attention_pairs(std::uint64_t q_len, std::uint64_t kv_len, bool causal) {
  if (!causal) return detail::checked_mul(q_len, kv_len);
  // Σ_{i=1..q} (kv − q + i) = q·(kv − q) + q(q+1)/2
  const std::uint64_t offset = kv_len - q_len;
  const std::uint64_t tri = (q_len % 2 == 0) ? detail::checked_mul(q_len / 2, q_len + 1)
                                             : detail::checked_mul(q_len, (q_len + 1) / 2);
  return detail::checked_add(detail::checked_mul(q_len, offset), tri);
}

/// Scaled-dot-product attention for `heads` query heads sharing `kv_heads`
/// key/value heads. FLOPs cover QK^T and PV; softmax is not counted.
/// Bytes cover reading K, V and Q, writing the output and, with
/// `write_new_kv`, appending q_len new K/V rows to the cache.
inline KernelCost attention_cost(std::uint64_t batch, std::uint64_t heads, std::uint64_t kv_heads,
                                 std::uint64_t head_dim, std::uint64_t q_len,
                                 std::uint64_t kv_len, std::uint64_t dtype_bytes, bool causal,
                                 bool write_new_kv, std::string label = "attention") {
  detail::require_positive(batch, "batch");
  detail::require_positive(kv_heads, "kv_heads");
  detail::require_positive(head_dim, "head_dim");
  detail::require_positive(q_len, "L_q");
  detail::require_positive(kv_len, "L_kv");
  detail::require_positive(dtype_bytes, "dtype_bytes");
  if (heads < kv_heads) throw ValidationError("heads must be >= kv_heads");
  if (causal && kv_len < q_len) throw ValidationError("causal attention requires L_kv >= L_q");

  using detail::checked_add;
  using detail::product;
  const std::uint64_t pairs = attention_pairs(q_len, kv_len, causal);
  const std::uint64_t flops = product(4, batch, heads, head_dim, pairs);

  const std::uint64_t kv_read = product(2, batch, kv_heads, kv_len, head_dim);
  const std::uint64_t q_io = product(2, batch, heads, q_len, head_dim);
  const std::uint64_t kv_write = write_new_kv ? product(2, batch, kv_heads, q_len, head_dim) : 0;
  const std::uint64_t elems = checked_add(kv_read, checked_add(q_io, kv_write));
  return {flops, product(dtype_bytes, elems), std::move(label)};
}

/// Memory-only pass (norms, residual adds, activations): one read and one
/// write of a B×L×d tensor per pass.
inline KernelCost elementwise_bytes(std::uint64_t batch, std::uint64_t tokens, std::uint64_t d,
                                    std::uint64_t passes, std::uint64_t dtype_bytes,
                                    std::string label = "elementwise") {
  return {0, detail::product(passes, 2, batch, tokens, d, dtype_bytes), std::move(label)};
}

inline double arithmetic_intensity(const KernelCost& c) {
  if (c.bytes == 0) throw ValidationError("arithmetic intensity undefined for zero bytes");
  return static_cast<double>(c.flops) / static_cast<double>(c.bytes);
}

}  // namespace dlmperf
