#include "spamm/decay.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace spamm::decay {

namespace {

std::size_t separation(std::size_t i, std::size_t j) { return i > j ? i - j : j - i; }

LogLinearFit regress(const std::vector<std::pair<double, double>>& xy) {
  LogLinearFit fit;
  fit.samples = xy.size();
  if (xy.size() < 2) return fit;
  double sx = 0, sy = 0;
  for (auto [x, y] : xy) {
    sx += x;
    sy += y;
  }
  const double mx = sx / xy.size(), my = sy / xy.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace

double DecaySpec::envelope(std::size_t d) const {
  if (kind == DecayKind::exponential) return c * std::pow(lambda, double(d));
  return c / (std::pow(double(d), lambda) + 1.0);
}

bool within_envelope(const DenseMatrix& m, const DecaySpec& spec, double slack) {
  if (!(spec.c > 0) || !(spec.lambda > 0)) throw std::invalid_argument("decay spec needs c, lambda > 0");
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      const double bound = spec.envelope(separation(i, j));
      if (std::abs(m(i, j)) > bound * (1.0 + slack)) return false;
    }
  }
  return true;
}

DenseMatrix exponential_dense(std::size_t n, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("gen_exponential: alpha must be > 0");
  if (n == 0) throw DimensionError("gen_exponential: n must be >= 1");
  std::vector<Real> by_distance(n);
  for (std::size_t d = 0; d < n; ++d) by_distance[d] = static_cast<Real>(std::exp(-alpha * double(d)));
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = by_distance[separation(i, j)];
  }
  return m;
}

DenseMatrix algebraic_dense(std::size_t n, double p) {
  if (!(p > 0)) throw std::invalid_argument("gen_algebraic: p must be > 0");
  if (n == 0) throw DimensionError("gen_algebraic: n must be >= 1");
  std::vector<Real> by_distance(n, Real(0));
  for (std::size_t d = 1; d < n; ++d) by_distance[d] = static_cast<Real>(1.0 / std::pow(double(d), p));
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = by_distance[separation(i, j)];
  }
  return m;
}

QuadTreeMatrix gen_exponential(std::size_t n, double alpha, std::size_t leaf_size) {
  return from_dense(exponential_dense(n, alpha), leaf_size);
}

QuadTreeMatrix gen_algebraic(std::size_t n, double p, std::size_t leaf_size) {
  return from_dense(algebraic_dense(n, p), leaf_size);
}

ModelHamiltonian gapped_chain(std::size_t n, double gap, double hopping) {
  return {n, ModelKind::gapped, gap, hopping, 1, n / 2};
}

ModelHamiltonian gapless_chain(std::size_t n, double hopping) {
  return {n, ModelKind::gapless, 0.0, hopping, 1, n / 2};
}

DenseMatrix model_hamiltonian_dense(const ModelHamiltonian& spec) {
  if (spec.n == 0) throw DimensionError("model Hamiltonian needs n >= 1");
  if (spec.n_occ > spec.n) {
    throw std::invalid_argument("n_occ " + std::to_string(spec.n_occ) + " outside [0, " +
                                std::to_string(spec.n) + "]");
  }
  if (spec.range < 1) throw std::invalid_argument("hopping range must be >= 1");
  DenseMatrix h(spec.n);
  if (spec.kind == ModelKind::gapped) {
    for (std::size_t i = 0; i < spec.n; ++i) {
      h(i, i) = static_cast<Real>(i % 2 == 0 ? -0.5 * spec.gap : 0.5 * spec.gap);
    }
  }
  for (int d = 1; d <= spec.range; ++d) {
    const Real t = static_cast<Real>(spec.hopping / d);
    for (std::size_t i = 0; i + d < spec.n; ++i) {
      h(i, i + d) = t;
      h(i + d, i) = t;
    }
  }
  return h;
}

QuadTreeMatrix gen_model_hamiltonian(const ModelHamiltonian& spec, std::size_t leaf_size) {
  return from_dense(model_hamiltonian_dense(spec), leaf_size);
}

std::vector<ProfilePoint> decay_profile(const QuadTreeMatrix& m,
                                        const std::vector<sfc::Point3>& positions,
                                        std::size_t block_size) {
  if (block_size == 0 || positions.size() * block_size != m.logical_dim()) {
    throw DimensionError("decay_profile: " + std::to_string(positions.size()) + " positions x " +
                         std::to_string(block_size) + " != dimension " +
                         std::to_string(m.logical_dim()));
  }
  const DenseMatrix dense = to_dense(m);
  const std::size_t atoms = positions.size();
  std::vector<ProfilePoint> out;
  out.reserve(atoms * atoms);
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t b = 0; b < atoms; ++b) {
      double sum = 0;
      for (std::size_t u = 0; u < block_size; ++u) {
        for (std::size_t v = 0; v < block_size; ++v) {
          const double x = dense(a * block_size + u, b * block_size + v);
          sum += x * x;
        }
      }
      const double dx = positions[a].x - positions[b].x;
      const double dy = positions[a].y - positions[b].y;
      const double dz = positions[a].z - positions[b].z;
      out.push_back({std::sqrt(dx * dx + dy * dy + dz * dz), std::sqrt(sum)});
    }
  }
  return out;
}

std::vector<ProfileBin> bin_profile(const std::vector<ProfilePoint>& points, double bin_width) {
  if (!(bin_width > 0)) throw std::invalid_argument("bin width must be > 0");
  std::map<long long, std::pair<double, std::size_t>> bins;
  for (const ProfilePoint& p : points) {
    if (!(p.block_norm > 0)) continue;
    auto& [log_sum, count] = bins[static_cast<long long>(std::floor(p.distance / bin_width))];
    log_sum += std::log(p.block_norm);
    ++count;
  }
  std::vector<ProfileBin> out;
  out.reserve(bins.size());
  for (const auto& [index, acc] : bins) {
    out.push_back({double(index) * bin_width, std::exp(acc.first / double(acc.second)), acc.second});
  }
  return out;
}

LogLinearFit fit_log_linear(const std::vector<ProfilePoint>& points) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const ProfilePoint& p : points) {
    if (p.block_norm > 0) xy.emplace_back(p.distance, std::log(p.block_norm));
  }
  return regress(xy);
}

LogLinearFit fit_log_linear(const std::vector<ProfileBin>& bins) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(bins.size());
  for (const ProfileBin& b : bins) {
    if (b.geometric_mean > 0) xy.emplace_back(b.distance_lo, std::log(b.geometric_mean));
  }
  return regress(xy);
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& points) {
  out << "distance,block_norm\n";
  char buf[64];
  for (const ProfilePoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.distance, p.block_norm);
    out << buf;
  }
}

std::vector<sfc::Point3> chain_positions(std::size_t count, double spacing) {
  std::vector<sfc::Point3> out(count);
  for (std::size_t a = 0; a < count; ++a) out[a] = {spacing * double(a), 0.0, 0.0};
  return out;
}

std::vector<sfc::Point3> jittered_grid_positions(std::size_t count, std::uint64_t seed,
                                                 double jitter) {
  std::size_t side = 1;
  while (side * side * side < count) ++side;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-jitter, jitter);
  std::vector<sfc::Point3> out;
  out.reserve(count);
  for (std::size_t a = 0; a < count; ++a) {
    const double x = double(a % side), y = double((a / side) % side), z = double(a / (side * side));
    const double ox = offset(rng), oy = offset(rng), oz = offset(rng);
    out.push_back({x + ox, y + oy, z + oz});
  }
  return out;
}

}  // namespace spamm::decay
