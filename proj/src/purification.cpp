#include "spamm/purification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace spamm::purify {

namespace {

void require_symmetric(const DenseMatrix& f) {
  double scale = 0;
  for (Real v : f.data()) scale = std::max(scale, double(std::abs(v)));
  const double tol = 64 * std::numeric_limits<Real>::epsilon() * scale;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    for (std::size_t j = i + 1; j < f.dim(); ++j) {
      if (std::abs(double(f(i, j)) - double(f(j, i))) > tol) {
        throw std::invalid_argument("purification needs a symmetric matrix; F(" +
                                    std::to_string(i) + "," + std::to_string(j) + ") != F(" +
                                    std::to_string(j) + "," + std::to_string(i) + ")");
      }
    }
  }
}

SpectralBounds gershgorin(const DenseMatrix& f) {
  SpectralBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < f.dim(); ++i) {
    double radius = 0;
    for (std::size_t j = 0; j < f.dim(); ++j) {
      if (j != i) radius += std::abs(f(i, j));
    }
    b.lo = std::min(b.lo, f(i, i) - radius);
    b.hi = std::max(b.hi, f(i, i) + radius);
  }
  return b;
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

const char* to_string(AlgebraKind kind) { return kind == AlgebraKind::spamm ? "spamm" : "drop"; }

SpectralBounds gershgorin_bounds(const QuadTreeMatrix& f) { return gershgorin(to_dense(f)); }

QuadTreeMatrix tc2_initial_guess(const QuadTreeMatrix& f) {
  const DenseMatrix dense = to_dense(f);
  require_symmetric(dense);
  const SpectralBounds b = gershgorin(dense);
  const std::size_t n = dense.dim();
  DenseMatrix x(n);
  if (b.hi == b.lo) {
    for (std::size_t i = 0; i < n; ++i) x(i, i) = Real(0.5);
    return from_dense(x, f.leaf_size());
  }
  const double width = b.hi - b.lo;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double shifted = (i == j ? b.hi : 0.0) - double(dense(i, j));
      x(i, j) = static_cast<Real>(shifted / width);
    }
  }
  return from_dense(x, f.leaf_size());
}

std::pair<QuadTreeMatrix, StepStats> tc2_step(const QuadTreeMatrix& x, double n_occ,
                                              const AlgebraMode& mode, Execution execution,
                                              BranchRule rule) {
  SpammConfig cfg;
  cfg.execution = execution;
  cfg.tau = mode.kind == AlgebraKind::spamm ? mode.tau : 0.0;
  SpammResult sq = spamm(x, x, cfg);
  QuadTreeMatrix x2 =
      mode.kind == AlgebraKind::dropping ? filter_drop(sq.product, mode.tau) : std::move(sq.product);

  StepStats stats;
  stats.leaf_matmuls = sq.stats.leaf_matmuls;
  const double tr_x = trace(x);
  if (rule == BranchRule::trace_threshold) {
    stats.squared = tr_x >= n_occ;
  } else {
    const double tr_x2 = trace(x2);
    stats.squared = std::abs(tr_x2 - n_occ) <= std::abs(2.0 * tr_x - tr_x2 - n_occ);
  }
  QuadTreeMatrix next = stats.squared ? std::move(x2) : add_scaled(scale(x, 2.0), x2, -1.0);
  stats.trace = trace(next);
  return {std::move(next), stats};
}

PurificationResult purify(const QuadTreeMatrix& f, std::size_t n_occ, const AlgebraMode& mode,
                          const PurifyOptions& options) {
  if (n_occ > f.logical_dim()) throw std::invalid_argument("n_occ exceeds matrix dimension");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(mode.tau >= 0)) throw std::invalid_argument("tau must be >= 0");

  PurificationResult result;
  QuadTreeMatrix x = tc2_initial_guess(f);
  result.trace_history.reserve(options.max_iter);
  for (int it = 0; it < options.max_iter; ++it) {
    auto [next, stats] = tc2_step(x, double(n_occ), mode, options.execution, options.rule);
    x = std::move(next);
    result.total_leaf_matmuls += stats.leaf_matmuls;
    result.step_matmuls.push_back(stats.leaf_matmuls);
    result.trace_history.push_back(stats.trace);
  }
  result.iterations = options.max_iter;
  result.avg_leaf_matmuls = double(result.total_leaf_matmuls) / result.iterations;
  result.energy = trace_product(x, f);
  result.density = std::move(x);

  if (options.reference_energy) {
    result.reference_energy = *options.reference_energy;
  } else if (mode.tau == 0) {
    result.reference_energy = result.energy;
  } else {
    result.reference_energy = exact_energy(f, n_occ, options);
  }
  result.delta_e_rel = result.reference_energy == 0
                           ? std::abs(result.energy)
                           : std::abs(result.energy - result.reference_energy) /
                                 std::abs(result.reference_energy);
  return result;
}

double exact_energy(const QuadTreeMatrix& f, std::size_t n_occ, const PurifyOptions& options) {
  PurifyOptions exact = options;
  exact.reference_energy.reset();
  return purify(f, n_occ, AlgebraMode::spamm(0.0), exact).energy;
}

UnreachableTarget::UnreachableTarget(double target, double floor)
    : std::runtime_error("target delta_e_rel " + format("%.3g", target) +
                         " is below the error floor " + format("%.3g", floor)),
      floor_(floor) {}

ThresholdMatch match_error_threshold(const QuadTreeMatrix& f, std::size_t n_occ,
                                     double target, AlgebraKind kind, MatchOptions options) {
  if (!(target > 0)) throw std::invalid_argument("target delta_e_rel must be > 0");
  if (!(options.tau_lo > 0) || !(options.tau_hi > options.tau_lo)) {
    throw std::invalid_argument("tau bracket must satisfy 0 < lo < hi");
  }
  if (!(options.window > 1)) throw std::invalid_argument("match window must be > 1");
  if (!options.purify.reference_energy) {
    options.purify.reference_energy = exact_energy(f, n_occ, options.purify);
  }
  const double lo_window = target / options.window, hi_window = target * options.window;

  ThresholdMatch best;
  double best_distance = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  auto evaluate = [&](double tau) {
    PurificationResult r = purify(f, n_occ, {kind, tau}, options.purify);
    ++evaluations;
    ThresholdMatch m{tau, r.delta_e_rel, r.avg_leaf_matmuls, evaluations, MatchStatus::matched};
    const double distance =
        r.delta_e_rel > 0 ? std::abs(std::log(r.delta_e_rel / target)) : std::numeric_limits<double>::max();
    if (distance < best_distance) {
      best_distance = distance;
      best = m;
    }
    return m;
  };
  auto in_window = [&](double d) { return d >= lo_window && d <= hi_window; };

  ThresholdMatch high = evaluate(options.tau_hi);
  if (high.delta_e_rel <= hi_window) {
    high.status = in_window(high.delta_e_rel) ? MatchStatus::matched : MatchStatus::upper_boundary;
    return high;
  }
  ThresholdMatch low = evaluate(options.tau_lo);
  if (low.delta_e_rel > hi_window) throw UnreachableTarget(target, low.delta_e_rel);
  if (in_window(low.delta_e_rel)) return low;

  double log_lo = std::log(options.tau_lo), log_hi = std::log(options.tau_hi);
  for (int step = 0; step < options.max_bisections; ++step) {
    const double mid = std::exp(0.5 * (log_lo + log_hi));
    ThresholdMatch m = evaluate(mid);
    if (in_window(m.delta_e_rel)) return m;
    if (m.delta_e_rel > hi_window) {
      log_hi = std::log(mid);
    } else {
      log_lo = std::log(mid);
    }
  }
  best.evaluations = evaluations;
  best.status = MatchStatus::not_converged;
  return best;
}

void write_report_csv(std::ostream& out, const PurificationResult& result) {
  out << "iteration,trace,leaf_matmuls,cumulative_matmuls\n";
  std::uint64_t cumulative = 0;
  char buf[128];
  for (std::size_t it = 0; it < result.step_matmuls.size(); ++it) {
    cumulative += result.step_matmuls[it];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%llu,%llu\n", it + 1, result.trace_history[it],
                  static_cast<unsigned long long>(result.step_matmuls[it]),
                  static_cast<unsigned long long>(cumulative));
    out << buf;
  }
}

void write_summary_csv(std::ostream& out, const PurificationResult& result) {
  char buf[256];
  out << "energy,delta_e_rel,avg_leaf_matmuls,iterations,total_leaf_matmuls\n";
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%llu\n", result.energy, result.delta_e_rel,
                result.avg_leaf_matmuls, result.iterations,
                static_cast<unsigned long long>(result.total_leaf_matmuls));
  out << buf;
}

}  // namespace spamm::purify
