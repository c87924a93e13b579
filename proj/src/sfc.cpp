#include "spamm/sfc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spamm::sfc {

namespace {

constexpr int kDims = 3;

void require_order(int order) {
  if (order < 1 || order > 20) {
    throw std::invalid_argument("hilbert order must be in [1, 20], got " + std::to_string(order));
  }
}

// Skilling, "Programming the Hilbert curve" (2004): the transpose holds the
// Hilbert index with its bits dealt round-robin over the axes.
void axes_to_transpose(std::array<std::uint32_t, kDims>& x, int bits) {
  const std::uint32_t m = 1u << (bits - 1);
  for (std::uint32_t q = m; q > 1; q >>= 1) {
    const std::uint32_t p = q - 1;
    for (int i = 0; i < kDims; ++i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        const std::uint32_t t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
  for (int i = 1; i < kDims; ++i) x[i] ^= x[i - 1];
  std::uint32_t t = 0;
  for (std::uint32_t q = m; q > 1; q >>= 1) {
    if (x[kDims - 1] & q) t ^= q - 1;
  }
  for (int i = 0; i < kDims; ++i) x[i] ^= t;
}

void transpose_to_axes(std::array<std::uint32_t, kDims>& x, int bits) {
  const std::uint32_t n = 2u << (bits - 1);
  std::uint32_t t = x[kDims - 1] >> 1;
  for (int i = kDims - 1; i > 0; --i) x[i] ^= x[i - 1];
  x[0] ^= t;
  for (std::uint32_t q = 2; q != n; q <<= 1) {
    const std::uint32_t p = q - 1;
    for (int i = kDims - 1; i >= 0; --i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
}

std::uint32_t quantize(double v, double lo, double hi, int order) {
  const std::uint32_t cells = 1u << order;
  if (!(hi > lo)) return 0;
  const double scaled = (v - lo) / (hi - lo) * cells;
  return std::min(cells - 1, static_cast<std::uint32_t>(std::max(0.0, std::floor(scaled))));
}

std::uint64_t spread3(std::uint64_t v) {
  std::uint64_t out = 0;
  for (int bit = 0; bit < 21; ++bit) out |= ((v >> bit) & 1u) << (3 * bit);
  return out;
}

}  // namespace

Bounds bounds_of(const std::vector<Point3>& points) {
  if (points.empty()) throw std::invalid_argument("bounds_of: no points");
  Bounds b{points.front(), points.front()};
  for (const Point3& p : points) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.lo.z = std::min(b.lo.z, p.z);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
    b.hi.z = std::max(b.hi.z, p.z);
  }
  return b;
}

std::uint64_t hilbert_index(Cell cell, int order) {
  require_order(order);
  const std::uint32_t limit = 1u << order;
  for (auto c : cell) {
    if (c >= limit) throw std::out_of_range("hilbert cell coordinate exceeds grid");
  }
  std::array<std::uint32_t, kDims> x{cell[2], cell[0], cell[1]};
  axes_to_transpose(x, order);
  std::uint64_t h = 0;
  for (int bit = order - 1; bit >= 0; --bit) {
    for (int i = 0; i < kDims; ++i) h = (h << 1) | ((x[i] >> bit) & 1u);
  }
  return h;
}

Cell hilbert_cell(std::uint64_t index, int order) {
  require_order(order);
  if (index >> (kDims * order)) throw std::out_of_range("hilbert index exceeds curve length");
  std::array<std::uint32_t, kDims> x{0, 0, 0};
  for (int bit = order - 1; bit >= 0; --bit) {
    for (int i = 0; i < kDims; ++i) {
      const int shift = bit * kDims + (kDims - 1 - i);
      x[i] |= static_cast<std::uint32_t>((index >> shift) & 1u) << bit;
    }
  }
  transpose_to_axes(x, order);
  return {x[1], x[2], x[0]};
}

std::uint64_t hilbert_index(const Point3& p, const Bounds& b, int order) {
  require_order(order);
  if (p.x < b.lo.x || p.y < b.lo.y || p.z < b.lo.z || p.x > b.hi.x || p.y > b.hi.y ||
      p.z > b.hi.z) {
    throw std::out_of_range("hilbert_index: point outside bounds");
  }
  return hilbert_index(Cell{quantize(p.x, b.lo.x, b.hi.x, order),
                            quantize(p.y, b.lo.y, b.hi.y, order),
                            quantize(p.z, b.lo.z, b.hi.z, order)},
                       order);
}

AtomLayout AtomLayout::inverse() const {
  AtomLayout out;
  out.curve_order = curve_order;
  out.permutation = order;
  out.order = permutation;
  if (!positions.empty()) {
    out.positions.resize(positions.size());
    for (std::size_t old = 0; old < positions.size(); ++old) {
      out.positions[permutation[old]] = positions[old];
    }
  }
  return out;
}

AtomLayout layout_from_order(std::vector<std::size_t> order) {
  AtomLayout layout;
  layout.permutation.assign(order.size(), order.size());
  for (std::size_t fresh = 0; fresh < order.size(); ++fresh) {
    const std::size_t old = order[fresh];
    if (old >= order.size() || layout.permutation[old] != order.size()) {
      throw std::invalid_argument("ordering is not a permutation");
    }
    layout.permutation[old] = fresh;
  }
  layout.order = std::move(order);
  return layout;
}

AtomLayout order_atoms(const std::vector<Point3>& positions, int curve_order) {
  const Bounds bounds = bounds_of(positions);
  std::vector<std::uint64_t> keys(positions.size());
  for (std::size_t a = 0; a < positions.size(); ++a) {
    keys[a] = hilbert_index(positions[a], bounds, curve_order);
  }
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return keys[l] < keys[r]; });
  AtomLayout layout = layout_from_order(std::move(order));
  layout.positions = positions;
  layout.curve_order = curve_order;
  return layout;
}

QuadTreeMatrix apply_ordering(const QuadTreeMatrix& m, const AtomLayout& layout,
                              std::size_t block_size) {
  if (layout.size() * block_size != m.logical_dim()) {
    throw DimensionError("apply_ordering: " + std::to_string(layout.size()) + " atoms x " +
                         std::to_string(block_size) + " != dimension " +
                         std::to_string(m.logical_dim()));
  }
  const DenseMatrix in = to_dense(m);
  DenseMatrix out(m.logical_dim());
  const std::size_t atoms = layout.size();
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t b = 0; b < atoms; ++b) {
      const std::size_t ra = layout.order[a] * block_size;
      const std::size_t rb = layout.order[b] * block_size;
      for (std::size_t u = 0; u < block_size; ++u) {
        for (std::size_t v = 0; v < block_size; ++v) {
          out(a * block_size + u, b * block_size + v) = in(ra + u, rb + v);
        }
      }
    }
  }
  return from_dense(out, m.leaf_size());
}

std::vector<Point3> permute_points(const std::vector<Point3>& points, const AtomLayout& layout) {
  if (points.size() != layout.size()) throw DimensionError("permute_points: size mismatch");
  std::vector<Point3> out(points.size());
  for (std::size_t fresh = 0; fresh < points.size(); ++fresh) out[fresh] = points[layout.order[fresh]];
  return out;
}

void write_permutation(std::ostream& out, const AtomLayout& layout) {
  for (std::size_t old : layout.order) out << old << '\n';
}

AtomLayout read_permutation(std::istream& in) {
  std::vector<std::size_t> order;
  std::size_t v;
  while (in >> v) order.push_back(v);
  if (!in.eof()) throw std::runtime_error("permutation file: malformed entry");
  return layout_from_order(std::move(order));
}

std::uint64_t interleave3(std::uint64_t i, std::uint64_t j, std::uint64_t k) {
  return (spread3(i) << 2) | (spread3(j) << 1) | spread3(k);
}

MortonKey morton_key(const PrunedBox& box, std::size_t padded_dim) {
  if (box.tier < 0 || box.edge == 0 || (padded_dim >> box.tier) != box.edge ||
      !std::has_single_bit(padded_dim)) {
    throw std::invalid_argument("morton_key: edge does not match tier");
  }
  for (std::size_t origin : {box.i_lo, box.j_lo, box.k_lo}) {
    if (origin % box.edge != 0 || origin >= padded_dim) {
      throw std::invalid_argument("morton_key: origin not aligned to the box grid");
    }
  }
  return {interleave3(box.i_lo / box.edge, box.j_lo / box.edge, box.k_lo / box.edge), box.tier};
}

bool morton_less(const PrunedBox& a, const PrunedBox& b) {
  const auto ka = interleave3(a.i_lo, a.j_lo, a.k_lo);
  const auto kb = interleave3(b.i_lo, b.j_lo, b.k_lo);
  if (ka != kb) return ka < kb;
  return a.tier < b.tier;
}

void morton_sort(std::vector<PrunedBox>& boxes) {
  std::stable_sort(boxes.begin(), boxes.end(), morton_less);
}

std::vector<std::pair<std::size_t, std::size_t>> split_key_ranges(std::size_t count,
                                                                  std::size_t parts) {
  if (parts == 0) throw std::invalid_argument("split_key_ranges: parts must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(parts);
  const std::size_t base = count / parts, extra = count % parts;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t len = base + (p < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

}  // namespace spamm::sfc
