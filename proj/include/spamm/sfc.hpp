#ifndef SPAMM_SFC_HPP
#define SPAMM_SFC_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spamm/kernel.hpp"
#include "spamm/quadtree.hpp"

namespace spamm::sfc {

struct Point3 {
  double x = 0, y = 0, z = 0;
};

struct Bounds {
  Point3 lo, hi;
};

Bounds bounds_of(const std::vector<Point3>& points);

using Cell = std::array<std::uint32_t, 3>;

/// 3-D Hilbert index of a grid cell at the given order (bits per axis), by
/// Skilling's transpose construction. Axes enter the transpose as (z, x, y),
/// so with z = 0 the first four order-1 cells are (x, y) = (0,0), (0,1),
/// (1,1), (1,0). Valid orders are 1..20.
std::uint64_t hilbert_index(Cell cell, int order);
Cell hilbert_cell(std::uint64_t index, int order);

/// Quantizes point into a 2^order grid over bounds, then indexes the cell.
/// Throws std::out_of_range for points outside bounds.
std::uint64_t hilbert_index(const Point3& point, const Bounds& bounds, int order);

struct AtomLayout {
  std::vector<Point3> positions;
  /// permutation[old] = new.
  std::vector<std::size_t> permutation;
  /// order[new] = old; the inverse of permutation.
  std::vector<std::size_t> order;
  int curve_order = 10;

  std::size_t size() const { return permutation.size(); }
  AtomLayout inverse() const;
};

/// Sorts atoms by Hilbert index, ties broken by original index.
AtomLayout order_atoms(const std::vector<Point3>& positions, int curve_order = 10);
AtomLayout layout_from_order(std::vector<std::size_t> order);

/// Symmetric block permutation P m P^T: block (new a, new b) of the result is
/// block (order[a], order[b]) of m.
QuadTreeMatrix apply_ordering(const QuadTreeMatrix& m, const AtomLayout& layout,
                              std::size_t block_size);

std::vector<Point3> permute_points(const std::vector<Point3>& points, const AtomLayout& layout);

/// Permutation file: one original index per line, in new order.
void write_permutation(std::ostream& out, const AtomLayout& layout);
AtomLayout read_permutation(std::istream& in);

struct MortonKey {
  std::uint64_t key = 0;
  int tier = 0;
  friend bool operator==(const MortonKey&, const MortonKey&) = default;
};

/// Interleaves bits with i most significant within each triple.
std::uint64_t interleave3(std::uint64_t i, std::uint64_t j, std::uint64_t k);

/// Key of the box at its own tier: interleave of origin / edge.
MortonKey morton_key(const PrunedBox& box, std::size_t padded_dim);

/// Orders boxes of any tier along one Z curve at unit resolution.
bool morton_less(const PrunedBox& a, const PrunedBox& b);
void morton_sort(std::vector<PrunedBox>& boxes);

/// Splits count sorted items into parts contiguous [begin, end) chunks whose
/// sizes differ by at most one.
std::vector<std::pair<std::size_t, std::size_t>> split_key_ranges(std::size_t count,
                                                                  std::size_t parts);

}  // namespace spamm::sfc

#endif  // SPAMM_SFC_HPP
