#include "spamm/box_log.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "spamm/sfc.hpp"

namespace spamm {

void write_box_log(std::ostream& out, std::vector<PrunedBox> boxes) {
  sfc::morton_sort(boxes);
  for (const PrunedBox& b : boxes) {
    out << b.tier << ' ' << b.i_lo << ' ' << b.j_lo << ' ' << b.k_lo << ' ' << b.edge << '\n';
  }
}

std::vector<PrunedBox> read_box_log(std::istream& in) {
  std::vector<PrunedBox> boxes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    PrunedBox b;
    if (!(fields >> b.tier >> b.i_lo >> b.j_lo >> b.k_lo >> b.edge)) {
      throw std::runtime_error("box log: malformed line '" + line + "'");
    }
    boxes.push_back(b);
  }
  return boxes;
}

BoxSummary summarize_boxes(const std::vector<PrunedBox>& boxes, std::size_t padded_dim,
                           int depth) {
  BoxSummary s;
  s.boxes_per_tier.assign(static_cast<std::size_t>(depth) + 1, 0);
  double volume = 0.0;
  for (const PrunedBox& b : boxes) {
    if (b.tier < 0 || b.tier > depth) throw std::invalid_argument("box tier outside tree depth");
    ++s.boxes_per_tier[b.tier];
    volume += double(b.edge) * double(b.edge) * double(b.edge);
  }
  const double total = double(padded_dim) * double(padded_dim) * double(padded_dim);
  s.pruned_volume_fraction = volume / total;
  return s;
}

TilingAudit audit_tiling(const ProductStats& stats, std::size_t padded_dim,
                         std::size_t leaf_size) {
  TilingAudit audit;
  const std::uint64_t cells = padded_dim / leaf_size;
  audit.total_volume = std::uint64_t(padded_dim) * padded_dim * padded_dim;
  std::vector<std::uint8_t> hits(cells * cells * cells, 0);

  auto cover = [&](const std::vector<PrunedBox>& list, std::uint64_t& volume) {
    for (const PrunedBox& b : list) {
      volume += std::uint64_t(b.edge) * b.edge * b.edge;
      const std::uint64_t span = b.edge / leaf_size;
      const std::uint64_t ci = b.i_lo / leaf_size, cj = b.j_lo / leaf_size,
                          ck = b.k_lo / leaf_size;
      for (std::uint64_t i = ci; i < ci + span; ++i) {
        for (std::uint64_t j = cj; j < cj + span; ++j) {
          for (std::uint64_t k = ck; k < ck + span; ++k) {
            std::uint8_t& h = hits[(i * cells + j) * cells + k];
            if (h < 255) ++h;
          }
        }
      }
    }
  };
  cover(stats.boxes, audit.pruned_volume);
  cover(stats.skipped, audit.skipped_volume);
  cover(stats.visited, audit.visited_volume);
  for (std::uint8_t h : hits) {
    if (h == 0) ++audit.uncovered_cells;
    if (h > 1) ++audit.overlapping_cells;
  }
  return audit;
}

}  // namespace spamm
