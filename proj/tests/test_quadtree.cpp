#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "spamm/decay.hpp"
#include "spamm/quadtree.hpp"

using namespace spamm;

namespace {

DenseMatrix ones(std::size_t n) {
  DenseMatrix m(n);
  for (auto& v : m.data()) v = 1.0;
  return m;
}

// Walks the tree and checks canonical zero representation.
bool canonical(const NodePtr& node) {
  if (!node) return true;
  if (node->is_leaf()) {
    for (Real v : node->block) {
      if (v != 0) return true;
    }
    return false;
  }
  bool any = false;
  for (const auto& c : node->children) {
    if (!canonical(c)) return false;
    any = any || c;
  }
  return any;
}

}  // namespace

TEST_CASE("identity 4x4 is a single leaf with norm_sq 4") {
  DenseMatrix eye(4);
  for (int i = 0; i < 4; ++i) eye(i, i) = 1;
  const QuadTreeMatrix m = from_dense(eye, 4);
  CHECK(m.depth() == 0);
  CHECK(m.padded_dim() == 4);
  REQUIRE(m.root());
  CHECK(m.root()->is_leaf());
  CHECK(m.norm_sq() == 4.0);
  CHECK(node_norm(m) == 2.0);
}

TEST_CASE("zero matrix has an Empty root") {
  const QuadTreeMatrix m = from_dense(DenseMatrix(8), 4);
  CHECK(m.depth() == 1);
  CHECK(m.empty());
  CHECK(m.norm_sq() == 0.0);
  CHECK(node_norm(m) == 0.0);
  CHECK(to_dense(QuadTreeMatrix(4, 4)) == DenseMatrix(4));
}

TEST_CASE("5x5 all-ones pads to 8 with one nonzero in quadrant 22") {
  const QuadTreeMatrix m = from_dense(ones(5), 4);
  CHECK(m.padded_dim() == 8);
  CHECK(m.depth() == 1);
  CHECK(m.norm_sq() == 25.0);
  const NodePtr& c22 = m.root()->children[q22];
  REQUIRE(c22);
  int nonzero = 0;
  for (Real v : c22->block) nonzero += v != 0;
  CHECK(nonzero == 1);
  CHECK(c22->block[0] == 1.0);
  CHECK(m.root()->children[q12]->norm_sq == 4.0);
  CHECK(m.root()->children[q11]->norm_sq == 16.0);
}

TEST_CASE("padding invariants across sizes") {
  for (std::size_t leaf : {1u, 2u, 4u, 8u}) {
    for (std::size_t n = 1; n <= 70; ++n) {
      const QuadTreeMatrix m(n, leaf);
      CHECK(m.padded_dim() == (leaf << m.depth()));
      CHECK(m.padded_dim() >= n);
      CHECK((m.depth() == 0 || m.padded_dim() / 2 < n));
    }
  }
}

TEST_CASE("rejects non-square input and bad leaf sizes") {
  CHECK_THROWS_AS(DenseMatrix(3, 4), DimensionError);
  CHECK_THROWS_AS(from_dense(DenseMatrix(4), 3), std::invalid_argument);
  CHECK_THROWS_AS(from_dense(DenseMatrix(4), 0), std::invalid_argument);
}

TEST_CASE("round trip is exact for n up to 65 at leaf sizes 1, 2, 4") {
  std::mt19937_64 rng(7);
  for (std::size_t leaf : {1u, 2u, 4u}) {
    for (std::size_t n = 1; n <= 65; ++n) {
      DenseMatrix d = oracle::random_dense(n, rng);
      // sprinkle exact zeros so some leaves go Empty
      for (std::size_t e = 0; e < d.data().size(); e += 3) d.data()[e] = 0;
      const QuadTreeMatrix m = from_dense(d, leaf);
      REQUIRE(to_dense(m) == d);
      CHECK(structurally_equal(from_dense(to_dense(m), leaf), m));
      CHECK(canonical(m.root()));
    }
  }
}

TEST_CASE("100x100 random round trip is bit exact") {
  std::mt19937_64 rng(11);
  const DenseMatrix d = oracle::random_dense(100, rng);
  CHECK(to_dense(from_dense(d)) == d);
}

TEST_CASE("element access matches dense") {
  std::mt19937_64 rng(5);
  const DenseMatrix d = oracle::random_dense(37, rng);
  const QuadTreeMatrix m = from_dense(d, 4);
  for (std::size_t i = 0; i < 37; i += 5) {
    for (std::size_t j = 0; j < 37; j += 3) CHECK(m.at(i, j) == d(i, j));
  }
  CHECK_THROWS_AS(m.at(37, 0), std::out_of_range);
}

TEST_CASE("exponential generator survives the quadtree") {
  const DenseMatrix d = decay::exponential_dense(512, 1.0);
  const QuadTreeMatrix m = from_dense(d, 4);
  const DenseMatrix back = to_dense(m);
  for (std::size_t i = 0; i < 512; i += 17) {
    for (std::size_t j = 0; j < 512; ++j) {
      REQUIRE(back(i, j) == std::exp(-std::abs(double(i) - double(j))));
    }
  }
}

TEST_CASE("node_norm matches dense Frobenius within 8 ulps") {
  std::mt19937_64 rng(3);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix d = oracle::random_dense(64, rng);
    const double dense = oracle::frobenius(d);
    CHECK(std::abs(node_norm(from_dense(d)) - dense) <= 8 * eps * dense);
  }
}

TEST_CASE("norm cache audit") {
  std::mt19937_64 rng(9);
  const QuadTreeMatrix m = from_dense(oracle::random_dense(90, rng), 4);
  const NormAudit audit = audit_norms(m);
  CHECK(audit.nodes > 0);
  CHECK(audit.violations == 0);
  CHECK(audit.non_canonical == 0);
  CHECK(audit.max_relative_discrepancy <= 4 * std::numeric_limits<Real>::epsilon());
}

TEST_CASE("filter_drop") {
  SUBCASE("tau = 0 leaves the tree unchanged") {
    std::mt19937_64 rng(2);
    const QuadTreeMatrix m = from_dense(oracle::random_dense(33, rng), 4);
    CHECK(structurally_equal(filter_drop(m, 0.0), m));
  }
  SUBCASE("tau above the total norm empties the tree") {
    const QuadTreeMatrix m = decay::gen_exponential(64, 1.0);
    CHECK(filter_drop(m, node_norm(m) * 1.0001).empty());
  }
  SUBCASE("negative tau is rejected") {
    CHECK_THROWS_AS(filter_drop(QuadTreeMatrix(4, 4), -1.0), std::invalid_argument);
  }
  SUBCASE("surviving leaves match a flat scan of 4x4 block norms") {
    const DenseMatrix d = decay::exponential_dense(512, 1.0);
    const double tau = 1e-8;
    std::size_t expected = 0;
    for (std::size_t r = 0; r < 128; ++r) {
      for (std::size_t c = 0; c < 128; ++c) {
        double s = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          for (std::size_t j = 0; j < 4; ++j) s += d(4 * r + i, 4 * c + j) * d(4 * r + i, 4 * c + j);
        }
        expected += std::sqrt(s) >= tau;
      }
    }
    const QuadTreeMatrix m = from_dense(d, 4);
    const QuadTreeMatrix kept = filter_drop(m, tau);
    CHECK(kept.leaf_count() == expected);
    CHECK(audit_norms(kept).violations == 0);
    // kept leaves are untouched
    const DenseMatrix back = to_dense(kept);
    for (std::size_t i = 0; i < 512; ++i) {
      for (std::size_t j = 0; j < 512; ++j) REQUIRE((back(i, j) == 0 || back(i, j) == d(i, j)));
    }
  }
  SUBCASE("idempotent") {
    const QuadTreeMatrix m = decay::gen_algebraic(200, 2.0);
    for (double tau : {1e-6, 1e-4, 1e-2}) {
      const QuadTreeMatrix once = filter_drop(m, tau);
      CHECK(structurally_equal(filter_drop(once, tau), once));
    }
  }
}

TEST_CASE("add, scale, trace, identity") {
  std::mt19937_64 rng(4);
  const DenseMatrix da = oracle::random_dense(50, rng), db = oracle::random_dense(50, rng);
  const QuadTreeMatrix a = from_dense(da), b = from_dense(db);

  SUBCASE("adding Empty returns the same tree") {
    const QuadTreeMatrix sum = add(a, QuadTreeMatrix(50, 4));
    CHECK(structurally_equal(sum, a));
    CHECK(sum.root() == a.root());
  }
  SUBCASE("dense oracle") {
    DenseMatrix expect(50);
    for (std::size_t e = 0; e < expect.data().size(); ++e) {
      expect.data()[e] = da.data()[e] + db.data()[e];
    }
    CHECK(oracle::rel_frobenius_error(to_dense(add(a, b)), expect) <= 1e-14);
    for (std::size_t e = 0; e < expect.data().size(); ++e) expect.data()[e] = -2.5 * da.data()[e];
    CHECK(oracle::rel_frobenius_error(to_dense(scale(a, -2.5)), expect) <= 1e-14);
    for (std::size_t e = 0; e < expect.data().size(); ++e) {
      expect.data()[e] = da.data()[e] + 0.5 * db.data()[e];
    }
    CHECK(oracle::rel_frobenius_error(to_dense(add_scaled(a, b, 0.5)), expect) <= 1e-14);
  }
  SUBCASE("a - a is Empty") { CHECK(add_scaled(a, a, -1.0).empty()); }
  SUBCASE("scale by zero is Empty") { CHECK(scale(a, 0.0).empty()); }
  SUBCASE("trace excludes padding") {
    CHECK(trace(identity(7)) == 7.0);
    CHECK(identity(7).padded_dim() == 8);
    double t = 0;
    for (std::size_t i = 0; i < 50; ++i) t += da(i, i);
    CHECK(trace(a) == doctest::Approx(t).epsilon(1e-14));
  }
  SUBCASE("trace of a product without forming it") {
    const DenseMatrix ab = oracle::triple_loop(da, db);
    double t = 0;
    for (std::size_t i = 0; i < 50; ++i) t += ab(i, i);
    CHECK(trace_product(a, b) == doctest::Approx(t).epsilon(1e-12));
  }
  SUBCASE("transpose") {
    const DenseMatrix t = to_dense(transpose(a));
    for (std::size_t i = 0; i < 50; ++i) {
      for (std::size_t j = 0; j < 50; ++j) REQUIRE(t(i, j) == da(j, i));
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(add(a, from_dense(DenseMatrix(49))), DimensionError);
    CHECK_THROWS_AS(add(a, from_dense(da, 2)), DimensionError);
  }
}
