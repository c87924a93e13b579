#ifndef SPAMM_DECAY_HPP
#define SPAMM_DECAY_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spamm/dense.hpp"
#include "spamm/quadtree.hpp"
#include "spamm/sfc.hpp"

namespace spamm::decay {

enum class DecayKind { exponential, algebraic };

/// Envelope of a decaying matrix in the separation d = |i - j|:
/// exponential  c * lambda^d       (0 < lambda < 1),
/// algebraic    c / (d^lambda + 1).
struct DecaySpec {
  DecayKind kind = DecayKind::exponential;
  double c = 1.0;
  double lambda = 0.5;
  std::size_t n = 0;

  double envelope(std::size_t d) const;
};

/// True when every |m_ij| lies under spec's envelope (with relative slack).
bool within_envelope(const DenseMatrix& m, const DecaySpec& spec, double slack = 1e-12);

DenseMatrix exponential_dense(std::size_t n, double alpha);
DenseMatrix algebraic_dense(std::size_t n, double p);

/// A_ij = exp(-alpha |i - j|).
QuadTreeMatrix gen_exponential(std::size_t n, double alpha, std::size_t leaf_size = 4);
/// A_ij = 1 / |i - j|^p off the diagonal, 0 on it.
QuadTreeMatrix gen_algebraic(std::size_t n, double p, std::size_t leaf_size = 4);

enum class ModelKind {
  /// Alternating on-site energies -gap/2, +gap/2 with hopping t: an
  /// insulator with an exponentially decaying density matrix.
  gapped,
  /// Uniform chain with hopping t: metallic, algebraic decay.
  gapless,
};

struct ModelHamiltonian {
  std::size_t n = 0;
  ModelKind kind = ModelKind::gapped;
  double gap = 1.0;
  double hopping = 1.0;
  /// Hopping shells; shell d couples |i - j| = d with strength hopping / d.
  int range = 1;
  std::size_t n_occ = 0;
};

ModelHamiltonian gapped_chain(std::size_t n, double gap, double hopping);
ModelHamiltonian gapless_chain(std::size_t n, double hopping);

DenseMatrix model_hamiltonian_dense(const ModelHamiltonian& spec);
QuadTreeMatrix gen_model_hamiltonian(const ModelHamiltonian& spec, std::size_t leaf_size = 4);

struct ProfilePoint {
  double distance = 0;
  double block_norm = 0;
};

/// (|r_a - r_b|, ||P_ab||_F) for every ordered block pair.
std::vector<ProfilePoint> decay_profile(const QuadTreeMatrix& m,
                                        const std::vector<sfc::Point3>& positions,
                                        std::size_t block_size);

struct ProfileBin {
  double distance_lo = 0;
  double geometric_mean = 0;
  std::size_t count = 0;
};

/// Bins of width bin_width; zero norms are excluded from the means.
std::vector<ProfileBin> bin_profile(const std::vector<ProfilePoint>& points, double bin_width = 0.5);

struct LogLinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::size_t samples = 0;
};

/// Least squares of log(norm) against distance over the nonzero points.
LogLinearFit fit_log_linear(const std::vector<ProfilePoint>& points);
LogLinearFit fit_log_linear(const std::vector<ProfileBin>& bins);

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& points);

std::vector<sfc::Point3> chain_positions(std::size_t count, double spacing = 1.0);
/// Points of a cubic grid, each jittered uniformly by up to +-jitter.
std::vector<sfc::Point3> jittered_grid_positions(std::size_t count, std::uint64_t seed,
                                                 double jitter = 0.25);

}  // namespace spamm::decay

#endif  // SPAMM_DECAY_HPP
