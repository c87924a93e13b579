#ifndef SPAMM_MATRIX_MARKET_HPP
#define SPAMM_MATRIX_MARKET_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "spamm/dense.hpp"
#include "spamm/quadtree.hpp"

namespace spamm::mm {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Layout { array, coordinate };

/// Reads `matrix array|coordinate real|integer general|symmetric`.
DenseMatrix read(std::istream& in);
DenseMatrix read_file(const std::string& path);

/// Values are printed with 17 significant digits. Coordinate output lists
/// nonzeros in row-major order; array output is column-major as the format
/// requires.
void write(std::ostream& out, const DenseMatrix& m, Layout layout);
void write_file(const std::string& path, const DenseMatrix& m, Layout layout);

inline QuadTreeMatrix read_tree(const std::string& path, std::size_t leaf_size) {
  return from_dense(read_file(path), leaf_size);
}

}  // namespace spamm::mm

#endif  // SPAMM_MATRIX_MARKET_HPP
