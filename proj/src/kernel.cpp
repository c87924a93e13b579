#include "spamm/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spamm {

namespace detail {

void Accum::merge(Accum&& other) {
  leaf_matmuls += other.leaf_matmuls;
  tau_pruned += other.tau_pruned;
  empty_skips += other.empty_skips;
  max_depth = std::max(max_depth, other.max_depth);
  boxes.insert(boxes.end(), other.boxes.begin(), other.boxes.end());
  skipped.insert(skipped.end(), other.skipped.begin(), other.skipped.end());
  visited.insert(visited.end(), other.visited.begin(), other.visited.end());
}

double Context::tau_at(int tier) const {
  if (policy == TauPolicy::constant) return tau;
  return tau / std::pow(8.0, tier);
}

namespace {

template <std::size_t L>
void leaf_multiply_fixed(const Real* a, const Real* b, Real* c) {
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      Real s = 0;
      for (std::size_t k = 0; k < L; ++k) s += a[i * L + k] * b[k * L + j];
      c[i * L + j] = s;
    }
  }
}

}  // namespace

void leaf_multiply(const Real* a, const Real* b, Real* c, std::size_t leaf) {
  switch (leaf) {
    case 1: return leaf_multiply_fixed<1>(a, b, c);
    case 2: return leaf_multiply_fixed<2>(a, b, c);
    case 4: return leaf_multiply_fixed<4>(a, b, c);
    case 8: return leaf_multiply_fixed<8>(a, b, c);
    default: break;
  }
  for (std::size_t i = 0; i < leaf; ++i) {
    for (std::size_t j = 0; j < leaf; ++j) {
      Real s = 0;
      for (std::size_t k = 0; k < leaf; ++k) s += a[i * leaf + k] * b[k * leaf + j];
      c[i * leaf + j] = s;
    }
  }
}

}  // namespace detail

SpammResult spamm(const QuadTreeMatrix& a, const QuadTreeMatrix& b, const SpammConfig& cfg) {
  if (a.logical_dim() != b.logical_dim() || a.padded_dim() != b.padded_dim()) {
    throw DimensionError("spamm: operand dimensions differ (" + std::to_string(a.logical_dim()) +
                         " vs " + std::to_string(b.logical_dim()) + ")");
  }
  if (a.leaf_size() != b.leaf_size()) {
    throw DimensionError("spamm: operand leaf sizes differ");
  }
  if (!(cfg.tau >= 0)) throw std::invalid_argument("spamm: tau must be >= 0");

  detail::Context ctx;
  ctx.leaf = a.leaf_size();
  ctx.depth = a.depth();
  ctx.padded = a.padded_dim();
  ctx.tau = cfg.tau;
  ctx.policy = cfg.policy;
  ctx.collect = cfg.collect_boxes;
  ctx.task_depth = cfg.task_depth;

  detail::Accum acc;
  detail::Partial out = cfg.execution == Execution::serial
                            ? detail::multiply_serial(a.root(), b.root(), 0, 0, 0, 0, ctx, acc)
                            : detail::multiply_omp(a.root(), b.root(), ctx, acc);

  SpammResult result{QuadTreeMatrix(a.logical_dim(), a.leaf_size(), std::move(out.node)), {}};
  if (cfg.count_stats) {
    ProductStats& s = result.stats;
    s.leaf_matmuls = acc.leaf_matmuls;
    s.tau_pruned = acc.tau_pruned;
    s.empty_skips = acc.empty_skips;
    s.pruned_calls = acc.tau_pruned + acc.empty_skips;
    s.omitted_budget = out.budget;
    s.max_depth_reached = acc.max_depth;
  }
  result.stats.boxes = std::move(acc.boxes);
  result.stats.skipped = std::move(acc.skipped);
  result.stats.visited = std::move(acc.visited);
  return result;
}

QuadTreeMatrix exact_multiply(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                              Execution execution) {
  SpammConfig cfg;
  cfg.execution = execution;
  return spamm(a, b, cfg).product;
}

MultiplyError multiply_error(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                             const SpammConfig& cfg) {
  SpammResult approx = spamm(a, b, cfg);
  QuadTreeMatrix exact = exact_multiply(a, b, cfg.execution);
  return {node_norm(add_scaled(approx.product, exact, -1.0)), approx.stats.omitted_budget};
}

bool norm_submultiplicativity_check(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  const double slack = 1.0 + 8.0 * std::numeric_limits<Real>::epsilon();
  const QuadTreeMatrix c = exact_multiply(a, b);
  const double nc = node_norm(c);
  if (nc > node_norm(a) * node_norm(b) * slack) return false;
  if (a.depth() == 0 || !a.root() || !b.root()) return true;

  const auto& ac = a.root()->children;
  const auto& bc = b.root()->children;
  double expansion = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      for (int r = 0; r < 2; ++r) {
        expansion += std::sqrt(double(norm_sq(ac[2 * p + q]))) *
                     std::sqrt(double(norm_sq(bc[2 * q + r])));
      }
    }
  }
  return nc <= expansion * slack;
}

}  // namespace spamm
