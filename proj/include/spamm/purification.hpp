#ifndef SPAMM_PURIFICATION_HPP
#define SPAMM_PURIFICATION_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spamm/kernel.hpp"
#include "spamm/quadtree.hpp"

namespace spamm::purify {

enum class AlgebraKind {
  /// Every product by SpAMM at threshold tau.
  spamm,
  /// Exact product, then filter_drop(tau) on the resultant.
  dropping,
};

struct AlgebraMode {
  AlgebraKind kind = AlgebraKind::spamm;
  double tau = 0.0;

  static AlgebraMode spamm(double tau) { return {AlgebraKind::spamm, tau}; }
  static AlgebraMode dropping(double tau) { return {AlgebraKind::dropping, tau}; }
};

const char* to_string(AlgebraKind kind);

struct SpectralBounds {
  double lo = 0;
  double hi = 0;
};

/// Gershgorin disc bounds on the spectrum of a symmetric matrix.
SpectralBounds gershgorin_bounds(const QuadTreeMatrix& f);

/// X0 = (hi I - F) / (hi - lo); X0 = I/2 when hi == lo.
QuadTreeMatrix tc2_initial_guess(const QuadTreeMatrix& f);

enum class BranchRule {
  /// Take whichever of X^2 and 2X - X^2 has trace closer to n_occ; ties square.
  closest_trace,
  /// Square when Tr(X) >= n_occ. Unstable once converged: eigenvalues pushed
  /// above 1 by noise keep the trace high and are squared away from 1.
  trace_threshold,
};

struct StepStats {
  std::uint64_t leaf_matmuls = 0;
  /// Trace of the returned iterate.
  double trace = 0;
  /// True when the step squared (Tr(X) >= n_occ).
  bool squared = false;
};

/// One trace-correcting step choosing X^2 or 2X - X^2 by rule, with a single
/// multiply either way.
std::pair<QuadTreeMatrix, StepStats> tc2_step(const QuadTreeMatrix& x, double n_occ,
                                              const AlgebraMode& mode,
                                              Execution execution = Execution::parallel,
                                              BranchRule rule = BranchRule::closest_trace);

struct PurifyOptions {
  int max_iter = 50;
  Execution execution = Execution::parallel;
  BranchRule rule = BranchRule::closest_trace;
  /// Exact-algebra energy to measure against; computed on demand if absent.
  std::optional<double> reference_energy;
};

struct PurificationResult {
  QuadTreeMatrix density;
  int iterations = 0;
  std::uint64_t total_leaf_matmuls = 0;
  double avg_leaf_matmuls = 0;
  /// Tr(P F), evaluated without truncation.
  double energy = 0;
  double reference_energy = 0;
  /// |E - E_ref| / |E_ref|.
  double delta_e_rel = 0;
  std::vector<double> trace_history;
  std::vector<std::uint64_t> step_matmuls;
};

/// Runs exactly max_iter TC2 steps from tc2_initial_guess(f).
PurificationResult purify(const QuadTreeMatrix& f, std::size_t n_occ, const AlgebraMode& mode,
                          const PurifyOptions& options = {});

/// Energy of a tau = 0 run with the given options.
double exact_energy(const QuadTreeMatrix& f, std::size_t n_occ, const PurifyOptions& options = {});

class UnreachableTarget : public std::runtime_error {
 public:
  UnreachableTarget(double target, double floor);
  double floor() const { return floor_; }

 private:
  double floor_;
};

enum class MatchStatus {
  matched,
  /// The error at the largest tau is already below the target window.
  upper_boundary,
  /// Ran out of bisection steps; the closest tau seen is returned.
  not_converged,
};

struct ThresholdMatch {
  double tau = 0;
  double delta_e_rel = 0;
  double avg_leaf_matmuls = 0;
  int evaluations = 0;
  MatchStatus status = MatchStatus::matched;
};

struct MatchOptions {
  double tau_lo = 1e-14;
  double tau_hi = 1e-1;
  int max_bisections = 40;
  /// Accept delta_e_rel in [target / window, target * window].
  double window = 2.0;
  PurifyOptions purify;
};

/// Bisects log tau until delta_e_rel lies in [target/2, 2 target]. Throws
/// UnreachableTarget if the error at tau_lo is already above the window.
ThresholdMatch match_error_threshold(const QuadTreeMatrix& f, std::size_t n_occ,
                                     double target_delta_e, AlgebraKind kind,
                                     MatchOptions options = {});

/// `iteration,trace,leaf_matmuls,cumulative_matmuls` rows for each step.
void write_report_csv(std::ostream& out, const PurificationResult& result);
/// `energy,delta_e_rel,avg_leaf_matmuls,iterations,total_leaf_matmuls`.
void write_summary_csv(std::ostream& out, const PurificationResult& result);

}  // namespace spamm::purify

#endif  // SPAMM_PURIFICATION_HPP
