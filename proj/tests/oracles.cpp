#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

DenseMatrix projector_from(const Eigen::MatrixXd& vectors, std::size_t n_occ) {
  const std::size_t n = vectors.rows();
  const Eigen::MatrixXd occ = vectors.leftCols(n_occ);
  const Eigen::MatrixXd p = occ * occ.transpose();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = p(i, j);
  }
  return out;
}

}  // namespace

DenseMatrix random_dense(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(n);
  for (auto& v : m.data()) v = dist(rng);
  return m;
}

DenseMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = dist(rng);
  }
  return m;
}

DenseMatrix triple_loop(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.dim();
  DenseMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.dim());
  for (std::size_t e = 0; e < a.data().size(); ++e) c.data()[e] = a.data()[e] - b.data()[e];
  return c;
}

double frobenius(const DenseMatrix& a) {
  double s = 0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double rel_frobenius_error(const DenseMatrix& approx, const DenseMatrix& exact) {
  const double denom = frobenius(exact);
  const double diff = frobenius(subtract(approx, exact));
  return denom == 0 ? diff : diff / denom;
}

FlatResult flat_spamm(const DenseMatrix& a, const DenseMatrix& b, std::size_t leaf, double tau) {
  const std::size_t n = a.dim();
  int depth = 0;
  std::size_t padded = leaf;
  while (padded < n) {
    padded *= 2;
    ++depth;
  }
  auto at = [n](const DenseMatrix& m, std::size_t i, std::size_t j) {
    return i < n && j < n ? double(m(i, j)) : 0.0;
  };

  // norms[t][r * blocks + c], and whether the block is identically zero.
  auto tables = [&](const DenseMatrix& m, std::vector<std::vector<double>>& norms,
                    std::vector<std::vector<char>>& zero) {
    norms.resize(depth + 1);
    zero.resize(depth + 1);
    for (int t = 0; t <= depth; ++t) {
      const std::size_t edge = padded >> t, blocks = std::size_t(1) << t;
      norms[t].assign(blocks * blocks, 0.0);
      zero[t].assign(blocks * blocks, 1);
      for (std::size_t r = 0; r < blocks; ++r) {
        for (std::size_t c = 0; c < blocks; ++c) {
          double sum = 0;
          bool all_zero = true;
          for (std::size_t i = r * edge; i < (r + 1) * edge; ++i) {
            for (std::size_t j = c * edge; j < (c + 1) * edge; ++j) {
              const double v = at(m, i, j);
              sum += v * v;
              all_zero = all_zero && v == 0;
            }
          }
          norms[t][r * blocks + c] = std::sqrt(sum);
          zero[t][r * blocks + c] = all_zero;
        }
      }
    }
  };
  std::vector<std::vector<double>> na, nb;
  std::vector<std::vector<char>> za, zb;
  tables(a, na, za);
  tables(b, nb, zb);

  FlatResult out;
  out.product = DenseMatrix(n);
  struct Frame {
    int tier;
    std::size_t i, j, k;
  };
  std::vector<Frame> stack{{0, 0, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const std::size_t edge = padded >> f.tier, blocks = std::size_t(1) << f.tier;
    const std::size_t ai = (f.i / edge) * blocks + f.k / edge;
    const std::size_t bi = (f.k / edge) * blocks + f.j / edge;
    if (za[f.tier][ai] || zb[f.tier][bi]) {
      ++out.empty_skips;
      continue;
    }
    const double bound = na[f.tier][ai] * nb[f.tier][bi];
    if (bound < tau) {
      out.omitted_budget += bound;
      out.boxes.push_back({f.tier, f.i, f.j, f.k, edge});
      continue;
    }
    if (f.tier == depth) {
      ++out.leaf_matmuls;
      for (std::size_t i = f.i; i < std::min(n, f.i + edge); ++i) {
        for (std::size_t j = f.j; j < std::min(n, f.j + edge); ++j) {
          double s = 0;
          for (std::size_t k = f.k; k < std::min(n, f.k + edge); ++k) s += a(i, k) * b(k, j);
          out.product(i, j) += s;
        }
      }
      continue;
    }
    // Reverse push so the pop order is i-major, then j, then k.
    const std::size_t h = edge / 2;
    for (int c = 7; c >= 0; --c) {
      stack.push_back({f.tier + 1, f.i + ((c >> 2) & 1) * h, f.j + ((c >> 1) & 1) * h,
                       f.k + (c & 1) * h});
    }
  }
  return out;
}

DenseMatrix spectral_projector(const DenseMatrix& h, std::size_t n_occ) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(h));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return projector_from(solver.eigenvectors(), n_occ);
}

DenseMatrix tridiagonal_projector(const std::vector<double>& diag, const std::vector<double>& sub,
                                  std::size_t n_occ) {
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), diag.size());
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sub.data(), sub.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, s, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");
  return projector_from(solver.eigenvectors(), n_occ);
}

std::vector<double> eigenvalues(const DenseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(h), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace oracle
