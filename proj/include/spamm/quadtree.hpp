#ifndef SPAMM_QUADTREE_HPP
#define SPAMM_QUADTREE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "spamm/dense.hpp"

namespace spamm {

struct QuadNode;

/// Nodes are shared and immutable once built. A null pointer is the Empty
/// node: an exactly-zero submatrix with norm_sq == 0.
using NodePtr = std::shared_ptr<const QuadNode>;

/// Quadrant order used everywhere: 11, 12, 21, 22.
enum Quadrant : int { q11 = 0, q12 = 1, q21 = 2, q22 = 3 };

struct QuadNode {
  /// Squared Frobenius norm of the subtree.
  Real norm_sq = 0;
  /// Leaf payload, leaf_size x leaf_size row-major. Empty for interior nodes.
  std::vector<Real> block;
  std::array<NodePtr, 4> children;

  bool is_leaf() const { return !block.empty(); }
};

/// Build a leaf from a row-major block; returns Empty if every element is zero.
NodePtr make_leaf(std::vector<Real> block);
/// Build an interior node; returns Empty if all four children are Empty.
NodePtr make_interior(std::array<NodePtr, 4> children);

inline Real norm_sq(const NodePtr& node) { return node ? node->norm_sq : Real(0); }

/// Square matrix stored as a quadtree with cached squared Frobenius norms.
///
/// padded_dim = leaf_size * 2^depth is the smallest such value >= logical_dim;
/// the padding region is always zero and is represented by Empty subtrees.
class QuadTreeMatrix {
 public:
  QuadTreeMatrix() = default;
  /// An all-zero matrix of logical dimension n.
  QuadTreeMatrix(std::size_t n, std::size_t leaf_size);
  QuadTreeMatrix(std::size_t n, std::size_t leaf_size, NodePtr root);

  std::size_t logical_dim() const { return n_; }
  std::size_t padded_dim() const { return padded_; }
  std::size_t leaf_size() const { return leaf_; }
  int depth() const { return depth_; }
  const NodePtr& root() const { return root_; }
  static constexpr int element_precision() { return static_cast<int>(sizeof(Real) * 8); }

  bool empty() const { return root_ == nullptr; }
  Real norm_sq() const { return spamm::norm_sq(root_); }

  /// Number of non-empty leaves.
  std::size_t leaf_count() const;

  /// Element access by walking the tree; zero outside stored leaves.
  Real at(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  std::size_t padded_ = 0;
  std::size_t leaf_ = 0;
  int depth_ = 0;
  NodePtr root_;
};

/// Smallest depth k with leaf_size * 2^k >= n.
int depth_for(std::size_t n, std::size_t leaf_size);

QuadTreeMatrix from_dense(const DenseMatrix& data, std::size_t leaf_size = 4);
DenseMatrix to_dense(const QuadTreeMatrix& m);

/// Frobenius norm, sqrt of the cached root norm.
double node_norm(const QuadTreeMatrix& m);

/// Replace every leaf whose Frobenius norm is below tau by Empty.
QuadTreeMatrix filter_drop(const QuadTreeMatrix& m, double tau);

QuadTreeMatrix add(const QuadTreeMatrix& a, const QuadTreeMatrix& b);
QuadTreeMatrix scale(const QuadTreeMatrix& a, double s);
/// a + s * b in one pass.
QuadTreeMatrix add_scaled(const QuadTreeMatrix& a, const QuadTreeMatrix& b, double s);
/// Sum of the logical diagonal.
double trace(const QuadTreeMatrix& a);
/// Tr(a * b) computed elementwise without forming the product.
double trace_product(const QuadTreeMatrix& a, const QuadTreeMatrix& b);
QuadTreeMatrix identity(std::size_t n, std::size_t leaf_size = 4);
QuadTreeMatrix transpose(const QuadTreeMatrix& a);

NodePtr add_nodes(const NodePtr& a, const NodePtr& b);

/// Same shape, same node kinds, bit-identical leaves and norms.
bool structurally_equal(const QuadTreeMatrix& a, const QuadTreeMatrix& b);

struct NormAudit {
  std::size_t nodes = 0;
  std::size_t violations = 0;
  /// Largest |norm_sq - recomputed| / norm_sq seen.
  double max_relative_discrepancy = 0;
  /// Interior nodes with all children Empty, or all-zero leaves.
  std::size_t non_canonical = 0;
};

/// Full-tree check of cached norms against recomputation from leaves.
NormAudit audit_norms(const QuadTreeMatrix& m);

}  // namespace spamm

#endif  // SPAMM_QUADTREE_HPP
