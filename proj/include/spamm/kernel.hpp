#ifndef SPAMM_KERNEL_HPP
#define SPAMM_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spamm/quadtree.hpp"

namespace spamm {

/// A cuboid of the (i, j, k) product space. Origins are multiples of edge and
/// edge = padded_dim / 2^tier.
struct PrunedBox {
  int tier = 0;
  std::size_t i_lo = 0;
  std::size_t j_lo = 0;
  std::size_t k_lo = 0;
  std::size_t edge = 0;

  friend bool operator==(const PrunedBox&, const PrunedBox&) = default;
};

enum class Execution {
  /// Plain recursion, the reference the parallel kernel is tested against.
  serial,
  /// OpenMP tasks over quadrants near the root. Pair accumulation order is
  /// fixed, so output is bit-identical to the serial kernel.
  parallel,
};

enum class TauPolicy {
  /// Same absolute tau at every tier.
  constant,
  /// tau at tier k+1 is tau at tier k divided by 8.
  per_tier_eighth,
};

struct SpammConfig {
  /// Absolute threshold; a sub-product is pruned when ||A^k|| ||B^k|| < tau.
  double tau = 0.0;
  /// Record pruned cuboids, Empty-operand regions and visited leaf cells.
  bool collect_boxes = false;
  bool count_stats = true;
  TauPolicy policy = TauPolicy::constant;
  Execution execution = Execution::parallel;
  /// Tasks are spawned for tiers < task_depth.
  int task_depth = 3;
};

struct ProductStats {
  std::uint64_t leaf_matmuls = 0;
  /// Calls that did not descend: tau_pruned + empty_skips.
  std::uint64_t pruned_calls = 0;
  std::uint64_t tau_pruned = 0;
  std::uint64_t empty_skips = 0;
  /// Sum over tau-pruned calls of ||A^k||_F ||B^k||_F.
  double omitted_budget = 0.0;
  int max_depth_reached = 0;
  /// Filled only with collect_boxes. Emitted in recursion order, which is
  /// i-major Morton order within each tier.
  std::vector<PrunedBox> boxes;
  std::vector<PrunedBox> skipped;
  std::vector<PrunedBox> visited;
};

struct SpammResult {
  QuadTreeMatrix product;
  ProductStats stats;
};

SpammResult spamm(const QuadTreeMatrix& a, const QuadTreeMatrix& b, const SpammConfig& cfg);

/// spamm with tau = 0.
QuadTreeMatrix exact_multiply(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                              Execution execution = Execution::parallel);

struct MultiplyError {
  double abs_err = 0.0;
  double budget = 0.0;
};

/// ||spamm(a,b) - exact(a,b)||_F alongside the omitted budget.
MultiplyError multiply_error(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                             const SpammConfig& cfg);

/// ||AB|| <= ||A|| ||B|| and ||AB|| <= sum of the eight first-tier block
/// norm products, each with 8 eps relative slack.
bool norm_submultiplicativity_check(const QuadTreeMatrix& a, const QuadTreeMatrix& b);

namespace detail {

struct Accum {
  std::uint64_t leaf_matmuls = 0;
  std::uint64_t tau_pruned = 0;
  std::uint64_t empty_skips = 0;
  int max_depth = 0;
  std::vector<PrunedBox> boxes;
  std::vector<PrunedBox> skipped;
  std::vector<PrunedBox> visited;

  void merge(Accum&& other);
};

struct Context {
  std::size_t leaf = 0;
  int depth = 0;
  std::size_t padded = 0;
  double tau = 0.0;
  TauPolicy policy = TauPolicy::constant;
  bool collect = false;
  int task_depth = 0;

  double tau_at(int tier) const;
};

struct Partial {
  NodePtr node;
  double budget = 0.0;
};

/// b_leaf^3 kernel, i-j-k loop order with k accumulated from zero.
void leaf_multiply(const Real* a, const Real* b, Real* c, std::size_t leaf);

Partial multiply_serial(const NodePtr& a, const NodePtr& b, int tier, std::size_t i,
                        std::size_t j, std::size_t k, const Context& ctx, Accum& acc);
Partial multiply_omp(const NodePtr& a, const NodePtr& b, const Context& ctx, Accum& acc);

}  // namespace detail

}  // namespace spamm

#endif  // SPAMM_KERNEL_HPP
