#include "spamm/quadtree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

namespace spamm {

namespace {

Real block_norm_sq(const std::vector<Real>& block) {
  Real sum = 0;
  for (Real v : block) sum += v * v;
  return sum;
}

void require_power_of_two(std::size_t leaf_size) {
  if (leaf_size == 0 || !std::has_single_bit(leaf_size)) {
    throw std::invalid_argument("leaf_size must be a power of two >= 1, got " +
                                std::to_string(leaf_size));
  }
}

void require_conformant(const QuadTreeMatrix& a, const QuadTreeMatrix& b, const char* what) {
  if (a.logical_dim() != b.logical_dim() || a.leaf_size() != b.leaf_size()) {
    throw DimensionError(std::string(what) + ": operands differ (" +
                         std::to_string(a.logical_dim()) + "/" + std::to_string(a.leaf_size()) +
                         " vs " + std::to_string(b.logical_dim()) + "/" +
                         std::to_string(b.leaf_size()) + ")");
  }
}

NodePtr build(const DenseMatrix& data, std::size_t row, std::size_t col, std::size_t edge,
              std::size_t leaf) {
  const std::size_t n = data.dim();
  if (row >= n || col >= n) return nullptr;
  if (edge == leaf) {
    std::vector<Real> block(leaf * leaf, Real(0));
    const std::size_t rows = std::min(leaf, n - row);
    const std::size_t cols = std::min(leaf, n - col);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) block[i * leaf + j] = data(row + i, col + j);
    }
    return make_leaf(std::move(block));
  }
  const std::size_t half = edge / 2;
  return make_interior({build(data, row, col, half, leaf), build(data, row, col + half, half, leaf),
                        build(data, row + half, col, half, leaf),
                        build(data, row + half, col + half, half, leaf)});
}

void scatter(const NodePtr& node, DenseMatrix& out, std::size_t row, std::size_t col,
             std::size_t edge, std::size_t leaf) {
  if (!node) return;
  const std::size_t n = out.dim();
  if (node->is_leaf()) {
    const std::size_t rows = std::min(leaf, n - row);
    const std::size_t cols = std::min(leaf, n - col);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) out(row + i, col + j) = node->block[i * leaf + j];
    }
    return;
  }
  const std::size_t half = edge / 2;
  scatter(node->children[q11], out, row, col, half, leaf);
  if (col + half < n) scatter(node->children[q12], out, row, col + half, half, leaf);
  if (row + half < n) {
    scatter(node->children[q21], out, row + half, col, half, leaf);
    if (col + half < n) scatter(node->children[q22], out, row + half, col + half, half, leaf);
  }
}

NodePtr drop(const NodePtr& node, double tau) {
  if (!node) return nullptr;
  if (node->is_leaf()) return std::sqrt(static_cast<double>(node->norm_sq)) < tau ? nullptr : node;
  std::array<NodePtr, 4> kids;
  bool changed = false;
  for (int q = 0; q < 4; ++q) {
    kids[q] = drop(node->children[q], tau);
    changed = changed || kids[q] != node->children[q];
  }
  return changed ? make_interior(std::move(kids)) : node;
}

NodePtr scale_node(const NodePtr& node, Real s) {
  if (!node) return nullptr;
  if (node->is_leaf()) {
    std::vector<Real> block(node->block);
    for (Real& v : block) v *= s;
    return make_leaf(std::move(block));
  }
  return make_interior({scale_node(node->children[0], s), scale_node(node->children[1], s),
                        scale_node(node->children[2], s), scale_node(node->children[3], s)});
}

NodePtr add_scaled_nodes(const NodePtr& a, const NodePtr& b, Real s) {
  if (!b) return a;
  if (!a) return scale_node(b, s);
  if (a->is_leaf()) {
    std::vector<Real> block(a->block);
    for (std::size_t e = 0; e < block.size(); ++e) block[e] += s * b->block[e];
    return make_leaf(std::move(block));
  }
  return make_interior({add_scaled_nodes(a->children[0], b->children[0], s),
                        add_scaled_nodes(a->children[1], b->children[1], s),
                        add_scaled_nodes(a->children[2], b->children[2], s),
                        add_scaled_nodes(a->children[3], b->children[3], s)});
}

double trace_node(const NodePtr& node, std::size_t offset, std::size_t edge, std::size_t leaf,
                  std::size_t n) {
  if (!node || offset >= n) return 0.0;
  if (node->is_leaf()) {
    double sum = 0.0;
    const std::size_t len = std::min(leaf, n - offset);
    for (std::size_t i = 0; i < len; ++i) sum += node->block[i * leaf + i];
    return sum;
  }
  const std::size_t half = edge / 2;
  return trace_node(node->children[q11], offset, half, leaf, n) +
         trace_node(node->children[q22], offset + half, half, leaf, n);
}

// Tr(A B) = sum over quadrant pairs of Tr(A_pq B_qp).
double trace_product_node(const NodePtr& a, const NodePtr& b, std::size_t leaf) {
  if (!a || !b) return 0.0;
  if (a->is_leaf()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < leaf; ++i) {
      for (std::size_t j = 0; j < leaf; ++j) sum += double(a->block[i * leaf + j]) * b->block[j * leaf + i];
    }
    return sum;
  }
  return trace_product_node(a->children[q11], b->children[q11], leaf) +
         trace_product_node(a->children[q12], b->children[q21], leaf) +
         trace_product_node(a->children[q21], b->children[q12], leaf) +
         trace_product_node(a->children[q22], b->children[q22], leaf);
}

NodePtr transpose_node(const NodePtr& node, std::size_t leaf) {
  if (!node) return nullptr;
  if (node->is_leaf()) {
    std::vector<Real> block(leaf * leaf);
    for (std::size_t i = 0; i < leaf; ++i) {
      for (std::size_t j = 0; j < leaf; ++j) block[j * leaf + i] = node->block[i * leaf + j];
    }
    return make_leaf(std::move(block));
  }
  return make_interior({transpose_node(node->children[q11], leaf),
                        transpose_node(node->children[q21], leaf),
                        transpose_node(node->children[q12], leaf),
                        transpose_node(node->children[q22], leaf)});
}

std::size_t count_leaves(const NodePtr& node) {
  if (!node) return 0;
  if (node->is_leaf()) return 1;
  std::size_t total = 0;
  for (const auto& c : node->children) total += count_leaves(c);
  return total;
}

bool nodes_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (std::bit_cast<std::array<unsigned char, sizeof(Real)>>(a->norm_sq) !=
      std::bit_cast<std::array<unsigned char, sizeof(Real)>>(b->norm_sq)) {
    return false;
  }
  if (a->is_leaf() != b->is_leaf()) return false;
  if (a->is_leaf()) {
    return a->block.size() == b->block.size() &&
           std::memcmp(a->block.data(), b->block.data(), a->block.size() * sizeof(Real)) == 0;
  }
  for (int q = 0; q < 4; ++q) {
    if (!nodes_equal(a->children[q], b->children[q])) return false;
  }
  return true;
}

Real audit_node(const NodePtr& node, NormAudit& audit) {
  if (!node) return 0;
  ++audit.nodes;
  Real recomputed = 0;
  if (node->is_leaf()) {
    recomputed = block_norm_sq(node->block);
    if (std::all_of(node->block.begin(), node->block.end(), [](Real v) { return v == 0; })) {
      ++audit.non_canonical;
    }
  } else {
    bool any = false;
    for (const auto& c : node->children) {
      recomputed += audit_node(c, audit);
      any = any || c != nullptr;
    }
    if (!any) ++audit.non_canonical;
  }
  const double diff = std::abs(double(node->norm_sq) - double(recomputed));
  const double rel = node->norm_sq > 0 ? diff / node->norm_sq : diff;
  audit.max_relative_discrepancy = std::max(audit.max_relative_discrepancy, rel);
  if (diff > 4.0 * std::numeric_limits<Real>::epsilon() * node->norm_sq) ++audit.violations;
  return node->norm_sq;
}

}  // namespace

NodePtr make_leaf(std::vector<Real> block) {
  if (std::all_of(block.begin(), block.end(), [](Real v) { return v == 0; })) return nullptr;
  auto node = std::make_shared<QuadNode>();
  node->norm_sq = block_norm_sq(block);
  node->block = std::move(block);
  return node;
}

NodePtr make_interior(std::array<NodePtr, 4> children) {
  if (!children[0] && !children[1] && !children[2] && !children[3]) return nullptr;
  auto node = std::make_shared<QuadNode>();
  node->norm_sq = norm_sq(children[q11]) + norm_sq(children[q12]) + norm_sq(children[q21]) +
                  norm_sq(children[q22]);
  node->children = std::move(children);
  return node;
}

NodePtr add_nodes(const NodePtr& a, const NodePtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a->is_leaf()) {
    std::vector<Real> block(a->block);
    for (std::size_t e = 0; e < block.size(); ++e) block[e] += b->block[e];
    return make_leaf(std::move(block));
  }
  return make_interior({add_nodes(a->children[0], b->children[0]),
                        add_nodes(a->children[1], b->children[1]),
                        add_nodes(a->children[2], b->children[2]),
                        add_nodes(a->children[3], b->children[3])});
}

int depth_for(std::size_t n, std::size_t leaf_size) {
  require_power_of_two(leaf_size);
  int depth = 0;
  std::size_t dim = leaf_size;
  while (dim < n) {
    dim *= 2;
    ++depth;
  }
  return depth;
}

QuadTreeMatrix::QuadTreeMatrix(std::size_t n, std::size_t leaf_size)
    : QuadTreeMatrix(n, leaf_size, nullptr) {}

QuadTreeMatrix::QuadTreeMatrix(std::size_t n, std::size_t leaf_size, NodePtr root)
    : n_(n), leaf_(leaf_size), depth_(depth_for(n, leaf_size)), root_(std::move(root)) {
  if (n == 0) throw DimensionError("matrix dimension must be >= 1");
  padded_ = leaf_ << depth_;
}

std::size_t QuadTreeMatrix::leaf_count() const { return count_leaves(root_); }

Real QuadTreeMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("element index outside logical region");
  const QuadNode* node = root_.get();
  std::size_t edge = padded_;
  while (node && !node->is_leaf()) {
    edge /= 2;
    const int q = (i >= edge ? 2 : 0) + (j >= edge ? 1 : 0);
    i %= edge;
    j %= edge;
    node = node->children[q].get();
  }
  return node ? node->block[i * leaf_ + j] : Real(0);
}

double frobenius_norm(const DenseMatrix& m) {
  double sum = 0.0;
  for (Real v : m.data()) sum += double(v) * v;
  return std::sqrt(sum);
}

QuadTreeMatrix from_dense(const DenseMatrix& data, std::size_t leaf_size) {
  if (data.dim() == 0) throw DimensionError("from_dense: empty matrix");
  QuadTreeMatrix shape(data.dim(), leaf_size);
  return {data.dim(), leaf_size, build(data, 0, 0, shape.padded_dim(), leaf_size)};
}

DenseMatrix to_dense(const QuadTreeMatrix& m) {
  DenseMatrix out(m.logical_dim());
  scatter(m.root(), out, 0, 0, m.padded_dim(), m.leaf_size());
  return out;
}

double node_norm(const QuadTreeMatrix& m) { return std::sqrt(static_cast<double>(m.norm_sq())); }

QuadTreeMatrix filter_drop(const QuadTreeMatrix& m, double tau) {
  if (!(tau >= 0)) throw std::invalid_argument("filter_drop: tau must be >= 0");
  return {m.logical_dim(), m.leaf_size(), drop(m.root(), tau)};
}

QuadTreeMatrix add(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  require_conformant(a, b, "add");
  return {a.logical_dim(), a.leaf_size(), add_nodes(a.root(), b.root())};
}

QuadTreeMatrix scale(const QuadTreeMatrix& a, double s) {
  if (s == 0) return {a.logical_dim(), a.leaf_size()};
  return {a.logical_dim(), a.leaf_size(), scale_node(a.root(), static_cast<Real>(s))};
}

QuadTreeMatrix add_scaled(const QuadTreeMatrix& a, const QuadTreeMatrix& b, double s) {
  require_conformant(a, b, "add_scaled");
  return {a.logical_dim(), a.leaf_size(),
          add_scaled_nodes(a.root(), b.root(), static_cast<Real>(s))};
}

double trace(const QuadTreeMatrix& a) {
  return trace_node(a.root(), 0, a.padded_dim(), a.leaf_size(), a.logical_dim());
}

double trace_product(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  require_conformant(a, b, "trace_product");
  return trace_product_node(a.root(), b.root(), a.leaf_size());
}

QuadTreeMatrix identity(std::size_t n, std::size_t leaf_size) {
  DenseMatrix eye(n);
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1;
  return from_dense(eye, leaf_size);
}

QuadTreeMatrix transpose(const QuadTreeMatrix& a) {
  return {a.logical_dim(), a.leaf_size(), transpose_node(a.root(), a.leaf_size())};
}

bool structurally_equal(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  return a.logical_dim() == b.logical_dim() && a.leaf_size() == b.leaf_size() &&
         nodes_equal(a.root(), b.root());
}

NormAudit audit_norms(const QuadTreeMatrix& m) {
  NormAudit audit;
  audit_node(m.root(), audit);
  return audit;
}

}  // namespace spamm
