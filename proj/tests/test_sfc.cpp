#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "spamm/decay.hpp"
#include "spamm/kernel.hpp"
#include "spamm/sfc.hpp"

using namespace spamm;
using namespace spamm::sfc;

namespace {

double mean_step(const std::vector<Point3>& pts) {
  double sum = 0;
  for (std::size_t a = 0; a + 1 < pts.size(); ++a) {
    const double dx = pts[a].x - pts[a + 1].x, dy = pts[a].y - pts[a + 1].y,
                 dz = pts[a].z - pts[a + 1].z;
    sum += std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  return sum / double(pts.size() - 1);
}

AtomLayout random_layout(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return layout_from_order(order);
}

}  // namespace

TEST_CASE("order-1 curve in the z = 0 plane") {
  const std::vector<Cell> expect = {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}};
  for (std::uint64_t h = 0; h < 4; ++h) {
    CHECK(hilbert_cell(h, 1) == expect[h]);
    CHECK(hilbert_index(expect[h], 1) == h);
  }
}

TEST_CASE("hilbert_index is a bijection at orders 1 to 6") {
  for (int order = 1; order <= 6; ++order) {
    const std::uint32_t side = 1u << order;
    std::vector<bool> seen(std::size_t(side) * side * side, false);
    for (std::uint32_t x = 0; x < side; ++x) {
      for (std::uint32_t y = 0; y < side; ++y) {
        for (std::uint32_t z = 0; z < side; ++z) {
          const std::uint64_t h = hilbert_index(Cell{x, y, z}, order);
          REQUIRE(h < seen.size());
          REQUIRE_FALSE(seen[h]);
          seen[h] = true;
          REQUIRE(hilbert_cell(h, order) == Cell{x, y, z});
        }
      }
    }
  }
}

TEST_CASE("consecutive curve cells are neighbours") {
  const int order = 4;
  for (std::uint64_t h = 0; h + 1 < (1u << (3 * order)); ++h) {
    const Cell a = hilbert_cell(h, order), b = hilbert_cell(h + 1, order);
    int cheb = 0, manhattan = 0;
    for (int d = 0; d < 3; ++d) {
      const int diff = std::abs(int(a[d]) - int(b[d]));
      cheb = std::max(cheb, diff);
      manhattan += diff;
    }
    REQUIRE(cheb <= 2);
    REQUIRE(manhattan == 1);
  }
}

TEST_CASE("hilbert argument validation") {
  CHECK_THROWS(hilbert_index(Cell{2, 0, 0}, 1));
  CHECK_THROWS(hilbert_index(Cell{0, 0, 0}, 0));
  CHECK_THROWS(hilbert_cell(64, 1));
  const Bounds b{{0, 0, 0}, {1, 1, 1}};
  CHECK_THROWS_AS(hilbert_index(Point3{2, 0, 0}, b, 3), std::out_of_range);
}

TEST_CASE("order_atoms") {
  SUBCASE("single atom") {
    const AtomLayout l = order_atoms({{1, 2, 3}});
    CHECK(l.permutation == std::vector<std::size_t>{0});
  }
  SUBCASE("atoms already in curve order") {
    std::vector<Point3> pts;
    for (std::uint64_t h = 0; h < 64; ++h) {
      const Cell c = hilbert_cell(h, 2);
      pts.push_back({double(c[0]), double(c[1]), double(c[2])});
    }
    const AtomLayout l = order_atoms(pts, 2);
    std::vector<std::size_t> id(64);
    std::iota(id.begin(), id.end(), std::size_t{0});
    CHECK(l.permutation == id);
    CHECK(l.order == id);
  }
  SUBCASE("curve order shortens paths relative to random order") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 10.0);
      std::vector<Point3> pts(300);
      for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
      const AtomLayout hilbert = order_atoms(pts);
      const AtomLayout shuffled = random_layout(pts.size(), rng);
      CHECK(mean_step(permute_points(pts, hilbert)) <= mean_step(permute_points(pts, shuffled)));
    }
  }
}

TEST_CASE("layout inverse and round trip") {
  std::mt19937_64 rng(3);
  const AtomLayout l = random_layout(40, rng);
  const AtomLayout inv = l.inverse();
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(inv.permutation[l.permutation[i]] == i);
    CHECK(l.order[l.permutation[i]] == i);
  }
  CHECK_THROWS_AS(layout_from_order({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(layout_from_order({0, 3}), std::invalid_argument);

  std::stringstream ss;
  write_permutation(ss, l);
  const AtomLayout back = read_permutation(ss);
  CHECK(back.order == l.order);
  CHECK(back.permutation == l.permutation);
}

TEST_CASE("apply_ordering") {
  std::mt19937_64 rng(4);
  const DenseMatrix d = oracle::random_symmetric(48, rng);
  const QuadTreeMatrix m = from_dense(d);
  SUBCASE("identity permutation") {
    std::vector<std::size_t> id(16);
    std::iota(id.begin(), id.end(), std::size_t{0});
    CHECK(structurally_equal(apply_ordering(m, layout_from_order(id), 3), m));
  }
  SUBCASE("permutation then inverse") {
    for (std::size_t block : {1u, 2u, 3u}) {
      const AtomLayout l = random_layout(48 / block, rng);
      const QuadTreeMatrix p = apply_ordering(m, l, block);
      CHECK(structurally_equal(apply_ordering(p, l.inverse(), block), m));
      CHECK(trace(p) == doctest::Approx(trace(m)).epsilon(1e-14));
      // same multiset of elements
      std::vector<Real> x(d.data().begin(), d.data().end());
      const DenseMatrix pd = to_dense(p);
      std::vector<Real> y(pd.data().begin(), pd.data().end());
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      CHECK(x == y);
    }
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(apply_ordering(m, random_layout(10, rng), 4), DimensionError);
  }
}

TEST_CASE("ordering recovers pruning on a shuffled gapped chain") {
  const std::size_t n = 256;
  const decay::ModelHamiltonian spec = decay::gapped_chain(n, 1.0, 1.0);
  const DenseMatrix h = decay::model_hamiltonian_dense(spec);
  const QuadTreeMatrix p = from_dense(oracle::spectral_projector(h, spec.n_occ));
  const std::vector<Point3> chain = decay::chain_positions(n);
  SpammConfig cfg;
  cfg.tau = 1e-8;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const AtomLayout shuffle = random_layout(n, rng);
    const QuadTreeMatrix scrambled = apply_ordering(p, shuffle, 1);
    const std::vector<Point3> pts = permute_points(chain, shuffle);
    const AtomLayout fix = order_atoms(pts);
    const QuadTreeMatrix ordered = apply_ordering(scrambled, fix, 1);
    const auto before = spamm::spamm(scrambled, scrambled, cfg).stats.leaf_matmuls;
    const auto after = spamm::spamm(ordered, ordered, cfg).stats.leaf_matmuls;
    CHECK(after <= before);
  }
}

TEST_CASE("morton keys") {
  CHECK(morton_key(PrunedBox{3, 0, 0, 0, 8}, 64).key == 0);
  CHECK(morton_key(PrunedBox{2, 4, 0, 0, 4}, 16).key == 4);
  CHECK(morton_key(PrunedBox{2, 0, 4, 0, 4}, 16).key == 2);
  CHECK(morton_key(PrunedBox{2, 0, 0, 4, 4}, 16).key == 1);
  CHECK(morton_key(PrunedBox{2, 0, 0, 4, 4}, 16).tier == 2);
  CHECK_THROWS(morton_key(PrunedBox{2, 2, 0, 0, 4}, 16));
  CHECK_THROWS(morton_key(PrunedBox{1, 0, 0, 0, 4}, 16));
}

TEST_CASE("sorting an 8^3 cube by key yields the Z curve") {
  std::vector<PrunedBox> cells;
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::size_t j = 0; j < 8; ++j) {
      for (std::size_t i = 0; i < 8; ++i) cells.push_back({3, i, j, k, 1});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const PrunedBox& a, const PrunedBox& b) {
    return morton_key(a, 8).key < morton_key(b, 8).key;
  });
  // nested-loop reference: bits from coarse to fine, i then j then k
  std::vector<PrunedBox> ref;
  for (std::size_t i2 = 0; i2 < 2; ++i2)
    for (std::size_t j2 = 0; j2 < 2; ++j2)
      for (std::size_t k2 = 0; k2 < 2; ++k2)
        for (std::size_t i1 = 0; i1 < 2; ++i1)
          for (std::size_t j1 = 0; j1 < 2; ++j1)
            for (std::size_t k1 = 0; k1 < 2; ++k1)
              for (std::size_t i0 = 0; i0 < 2; ++i0)
                for (std::size_t j0 = 0; j0 < 2; ++j0)
                  for (std::size_t k0 = 0; k0 < 2; ++k0)
                    ref.push_back({3, 4 * i2 + 2 * i1 + i0, 4 * j2 + 2 * j1 + j0,
                                   4 * k2 + 2 * k1 + k0, 1});
  CHECK(cells == ref);
}

TEST_CASE("box logs come out in the recursion order") {
  const QuadTreeMatrix a = decay::gen_exponential(256, 1.0);
  SpammConfig cfg;
  cfg.tau = 1e-6;
  cfg.collect_boxes = true;
  const auto r = spamm::spamm(a, a, cfg);
  std::vector<PrunedBox> sorted = r.stats.boxes;
  morton_sort(sorted);
  CHECK(sorted == r.stats.boxes);
}

TEST_CASE("split_key_ranges") {
  const auto r = split_key_ranges(10, 3);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == std::pair<std::size_t, std::size_t>{0, 4});
  CHECK(r[1] == std::pair<std::size_t, std::size_t>{4, 7});
  CHECK(r[2] == std::pair<std::size_t, std::size_t>{7, 10});
  CHECK_THROWS(split_key_ranges(5, 0));
  CHECK(split_key_ranges(2, 4).size() == 4);
}
