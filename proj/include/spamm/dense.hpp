#ifndef SPAMM_DENSE_HPP
#define SPAMM_DENSE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spamm {

#ifdef SPAMM_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

/// Raised when operand shapes do not conform (non-square input, mismatched
/// dimensions or leaf sizes).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square row-major dense matrix used for interchange with the quadtree.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, Real(0)) {}
  DenseMatrix(std::size_t rows, std::size_t cols) : DenseMatrix(rows) {
    if (rows != cols) {
      throw DimensionError("dense matrix must be square, got " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    }
  }

  std::size_t dim() const { return n_; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  Real operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Real> data_;
};

double frobenius_norm(const DenseMatrix& m);

}  // namespace spamm

#endif  // SPAMM_DENSE_HPP
