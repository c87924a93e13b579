// Test-only reference implementations. Nothing here calls into the quadtree
// kernel; everything works on flat dense arrays.
#ifndef SPAMM_TESTS_ORACLES_HPP
#define SPAMM_TESTS_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "spamm/dense.hpp"
#include "spamm/kernel.hpp"

namespace oracle {

using spamm::DenseMatrix;

DenseMatrix random_dense(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0);
DenseMatrix random_symmetric(std::size_t n, std::mt19937_64& rng);

/// Textbook i-j-k triple loop.
DenseMatrix triple_loop(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
double frobenius(const DenseMatrix& a);
double rel_frobenius_error(const DenseMatrix& approx, const DenseMatrix& exact);

/// Straight-line restatement of the pruned product recursion on dense data:
/// per-tier block norms are summed directly from elements and the octree is
/// walked with an explicit stack in the same 8-child order.
struct FlatResult {
  std::uint64_t leaf_matmuls = 0;
  std::uint64_t empty_skips = 0;
  double omitted_budget = 0.0;
  std::vector<spamm::PrunedBox> boxes;
  DenseMatrix product;
};

FlatResult flat_spamm(const DenseMatrix& a, const DenseMatrix& b, std::size_t leaf, double tau);

/// Spectral projector onto the n_occ lowest eigenvectors (Eigen, dense).
DenseMatrix spectral_projector(const DenseMatrix& h, std::size_t n_occ);
/// Projector for a symmetric tridiagonal matrix given its diagonals.
DenseMatrix tridiagonal_projector(const std::vector<double>& diag, const std::vector<double>& sub,
                                  std::size_t n_occ);
std::vector<double> eigenvalues(const DenseMatrix& h);

}  // namespace oracle

#endif
