#ifndef SPAMM_BOX_LOG_HPP
#define SPAMM_BOX_LOG_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spamm/kernel.hpp"

namespace spamm {

/// Writes `tier i_lo j_lo k_lo edge` lines sorted along the Morton curve.
void write_box_log(std::ostream& out, std::vector<PrunedBox> boxes);
std::vector<PrunedBox> read_box_log(std::istream& in);

struct BoxSummary {
  /// boxes_per_tier[t] = number of pruned cuboids at tier t.
  std::vector<std::size_t> boxes_per_tier;
  /// Pruned volume over padded_dim^3.
  double pruned_volume_fraction = 0.0;
};

BoxSummary summarize_boxes(const std::vector<PrunedBox>& boxes, std::size_t padded_dim, int depth);

struct TilingAudit {
  /// Volumes in elements of the (i,j,k) cube.
  std::uint64_t pruned_volume = 0;
  std::uint64_t skipped_volume = 0;
  std::uint64_t visited_volume = 0;
  std::uint64_t total_volume = 0;
  /// Leaf cells covered more than once or not at all.
  std::uint64_t overlapping_cells = 0;
  std::uint64_t uncovered_cells = 0;

  std::uint64_t covered_volume() const { return pruned_volume + skipped_volume + visited_volume; }
  bool exact() const {
    return covered_volume() == total_volume && overlapping_cells == 0 && uncovered_cells == 0;
  }
};

/// Checks that pruned boxes, Empty-operand regions and visited leaf cells
/// partition [0, padded_dim)^3. Needs stats collected with collect_boxes.
TilingAudit audit_tiling(const ProductStats& stats, std::size_t padded_dim, std::size_t leaf_size);

}  // namespace spamm

#endif  // SPAMM_BOX_LOG_HPP
