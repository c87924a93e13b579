// Reference recursion. Each call is one node of the product-space octree:
// Empty operands are skipped, small norm products are pruned, leaves are
// multiplied, everything else splits into eight sub-products paired per
// quadrant of C as A_p1 B_1r + A_p2 B_2r.

#include <algorithm>
#include <cmath>

#include "spamm/kernel.hpp"

namespace spamm::detail {

Partial multiply_serial(const NodePtr& a, const NodePtr& b, int tier, std::size_t i,
                        std::size_t j, std::size_t k, const Context& ctx, Accum& acc) {
  const std::size_t edge = ctx.padded >> tier;
  if (!a || !b) {
    ++acc.empty_skips;
    if (ctx.collect) acc.skipped.push_back({tier, i, j, k, edge});
    return {};
  }
  acc.max_depth = std::max(acc.max_depth, tier);

  const double bound = std::sqrt(double(a->norm_sq)) * std::sqrt(double(b->norm_sq));
  if (bound < ctx.tau_at(tier)) {
    ++acc.tau_pruned;
    if (ctx.collect) acc.boxes.push_back({tier, i, j, k, edge});
    return {nullptr, bound};
  }

  if (tier == ctx.depth) {
    std::vector<Real> block(ctx.leaf * ctx.leaf);
    leaf_multiply(a->block.data(), b->block.data(), block.data(), ctx.leaf);
    ++acc.leaf_matmuls;
    if (ctx.collect) acc.visited.push_back({tier, i, j, k, edge});
    return {make_leaf(std::move(block)), 0.0};
  }

  const std::size_t half = edge / 2;
  std::array<NodePtr, 4> quadrants;
  double budget = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int r = 0; r < 2; ++r) {
      const std::size_t ci = i + p * half;
      const std::size_t cj = j + r * half;
      Partial first = multiply_serial(a->children[2 * p], b->children[r], tier + 1, ci, cj, k,
                                      ctx, acc);
      Partial second = multiply_serial(a->children[2 * p + 1], b->children[2 + r], tier + 1, ci,
                                       cj, k + half, ctx, acc);
      quadrants[2 * p + r] = add_nodes(first.node, second.node);
      budget += first.budget;
      budget += second.budget;
    }
  }
  return {make_interior(std::move(quadrants)), budget};
}

}  // namespace spamm::detail
