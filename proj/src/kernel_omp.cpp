// Task-parallel kernel. Quadrants of C near the root run as OpenMP tasks,
// each with private counters that are merged in quadrant order afterwards.
// Below the task tiers the recursion is serial with the leaf-parent tier
// fused so that the pair of leaf products lands in one block without
// intermediate nodes. Arithmetic order matches multiply_serial exactly.

#include <algorithm>
#include <cmath>
#include <optional>

#include "spamm/kernel.hpp"

namespace spamm::detail {

namespace {

bool all_zero(const std::vector<Real>& v) {
  return std::all_of(v.begin(), v.end(), [](Real x) { return x == 0; });
}

// The checks every call makes before descending. Returns a finished Partial
// when the call terminates here.
std::optional<Partial> terminal(const NodePtr& a, const NodePtr& b, int tier, std::size_t i,
                                std::size_t j, std::size_t k, const Context& ctx, Accum& acc) {
  const std::size_t edge = ctx.padded >> tier;
  if (!a || !b) {
    ++acc.empty_skips;
    if (ctx.collect) acc.skipped.push_back({tier, i, j, k, edge});
    return Partial{};
  }
  acc.max_depth = std::max(acc.max_depth, tier);
  const double bound = std::sqrt(double(a->norm_sq)) * std::sqrt(double(b->norm_sq));
  if (bound < ctx.tau_at(tier)) {
    ++acc.tau_pruned;
    if (ctx.collect) acc.boxes.push_back({tier, i, j, k, edge});
    return Partial{nullptr, bound};
  }
  if (tier == ctx.depth) {
    std::vector<Real> block(ctx.leaf * ctx.leaf);
    leaf_multiply(a->block.data(), b->block.data(), block.data(), ctx.leaf);
    ++acc.leaf_matmuls;
    if (ctx.collect) acc.visited.push_back({tier, i, j, k, edge});
    return Partial{make_leaf(std::move(block)), 0.0};
  }
  return std::nullopt;
}

// One leaf-tier pair member. Returns true when a product was written to out.
bool leaf_call(const NodePtr& a, const NodePtr& b, int tier, std::size_t i, std::size_t j,
               std::size_t k, const Context& ctx, Accum& acc, double& budget, Real* out) {
  const std::size_t edge = ctx.leaf;
  if (!a || !b) {
    ++acc.empty_skips;
    if (ctx.collect) acc.skipped.push_back({tier, i, j, k, edge});
    return false;
  }
  acc.max_depth = std::max(acc.max_depth, tier);
  const double bound = std::sqrt(double(a->norm_sq)) * std::sqrt(double(b->norm_sq));
  if (bound < ctx.tau_at(tier)) {
    ++acc.tau_pruned;
    if (ctx.collect) acc.boxes.push_back({tier, i, j, k, edge});
    budget += bound;
    return false;
  }
  leaf_multiply(a->block.data(), b->block.data(), out, ctx.leaf);
  ++acc.leaf_matmuls;
  if (ctx.collect) acc.visited.push_back({tier, i, j, k, edge});
  return true;
}

Partial leaf_parent(const QuadNode& a, const QuadNode& b, int tier, std::size_t i, std::size_t j,
                    std::size_t k, const Context& ctx, Accum& acc) {
  const std::size_t half = ctx.leaf;
  const std::size_t cells = ctx.leaf * ctx.leaf;
  thread_local std::vector<Real> scratch;
  scratch.resize(cells);
  std::array<NodePtr, 4> quadrants;
  double budget = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int r = 0; r < 2; ++r) {
      const std::size_t ci = i + p * half;
      const std::size_t cj = j + r * half;
      std::vector<Real> block(cells);
      double first_budget = 0.0, second_budget = 0.0;
      bool have_first = leaf_call(a.children[2 * p], b.children[r], tier + 1, ci, cj, k, ctx, acc,
                                  first_budget, block.data());
      if (have_first && all_zero(block)) have_first = false;
      bool have_second = leaf_call(a.children[2 * p + 1], b.children[2 + r], tier + 1, ci, cj,
                                   k + half, ctx, acc, second_budget, scratch.data());
      if (have_second && all_zero(scratch)) have_second = false;
      budget += first_budget;
      budget += second_budget;

      if (have_first && have_second) {
        for (std::size_t e = 0; e < cells; ++e) block[e] += scratch[e];
        quadrants[2 * p + r] = make_leaf(std::move(block));
      } else if (have_first) {
        quadrants[2 * p + r] = make_leaf(std::move(block));
      } else if (have_second) {
        std::copy(scratch.begin(), scratch.end(), block.begin());
        quadrants[2 * p + r] = make_leaf(std::move(block));
      }
    }
  }
  return {make_interior(std::move(quadrants)), budget};
}

Partial recurse(const NodePtr& a, const NodePtr& b, int tier, std::size_t i, std::size_t j,
                std::size_t k, const Context& ctx, Accum& acc) {
  if (auto done = terminal(a, b, tier, i, j, k, ctx, acc)) return *done;
  if (tier + 1 == ctx.depth) return leaf_parent(*a, *b, tier, i, j, k, ctx, acc);

  const std::size_t half = (ctx.padded >> tier) / 2;

  if (tier < ctx.task_depth) {
    struct Slot {
      Partial first, second;
      NodePtr sum;
      Accum acc;
    };
    std::array<Slot, 4> slots;
    for (int q = 0; q < 4; ++q) {
      const int p = q / 2, r = q % 2;
#pragma omp task default(none) shared(slots, a, b, ctx) firstprivate(q, p, r, tier, i, j, k, half)
      {
        Slot& s = slots[q];
        const std::size_t ci = i + p * half;
        const std::size_t cj = j + r * half;
        s.first = recurse(a->children[2 * p], b->children[r], tier + 1, ci, cj, k, ctx, s.acc);
        s.second = recurse(a->children[2 * p + 1], b->children[2 + r], tier + 1, ci, cj, k + half,
                           ctx, s.acc);
        s.sum = add_nodes(s.first.node, s.second.node);
      }
    }
#pragma omp taskwait
    std::array<NodePtr, 4> quadrants;
    double budget = 0.0;
    for (int q = 0; q < 4; ++q) {
      quadrants[q] = std::move(slots[q].sum);
      budget += slots[q].first.budget;
      budget += slots[q].second.budget;
      acc.merge(std::move(slots[q].acc));
    }
    return {make_interior(std::move(quadrants)), budget};
  }

  std::array<NodePtr, 4> quadrants;
  double budget = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int r = 0; r < 2; ++r) {
      const std::size_t ci = i + p * half;
      const std::size_t cj = j + r * half;
      Partial first = recurse(a->children[2 * p], b->children[r], tier + 1, ci, cj, k, ctx, acc);
      Partial second = recurse(a->children[2 * p + 1], b->children[2 + r], tier + 1, ci, cj,
                               k + half, ctx, acc);
      quadrants[2 * p + r] = add_nodes(first.node, second.node);
      budget += first.budget;
      budget += second.budget;
    }
  }
  return {make_interior(std::move(quadrants)), budget};
}

}  // namespace

Partial multiply_omp(const NodePtr& a, const NodePtr& b, const Context& ctx, Accum& acc) {
  Partial result;
#pragma omp parallel default(none) shared(result, a, b, ctx, acc)
#pragma omp single
  result = recurse(a, b, 0, 0, 0, 0, ctx, acc);
  return result;
}

}  // namespace spamm::detail
