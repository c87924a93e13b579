#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include "spamm/box_log.hpp"
#include "spamm/decay.hpp"
#include "spamm/kernel.hpp"
#include "spamm/matrix_market.hpp"
#include "spamm/purification.hpp"
#include "spamm/sfc.hpp"

namespace spamm::cli {

namespace {

// Output file, or stdout when path is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Execution execution(const Global& g) { return g.serial ? Execution::serial : Execution::parallel; }

DenseMatrix load_dense(const MatrixSource& src) {
  if (!src.path.empty()) return mm::read_file(src.path);
  if (src.kind == "exp") return decay::exponential_dense(src.n, src.alpha);
  if (src.kind == "alg") return decay::algebraic_dense(src.n, src.p);
  if (src.kind == "gapped") {
    return decay::model_hamiltonian_dense(decay::gapped_chain(src.n, src.gap, src.hop));
  }
  if (src.kind == "gapless") return decay::model_hamiltonian_dense(decay::gapless_chain(src.n, src.hop));
  throw std::invalid_argument("unknown matrix kind " + src.kind);
}

purify::AlgebraKind algebra(const std::string& mode) {
  if (mode == "spamm") return purify::AlgebraKind::spamm;
  if (mode == "drop") return purify::AlgebraKind::dropping;
  throw std::invalid_argument("unknown mode " + mode);
}

}  // namespace

int run_generate(const Global&, const GenerateArgs& args) {
  const DenseMatrix m = load_dense(args.source);
  mm::write_file(args.out, m, args.layout == "array" ? mm::Layout::array : mm::Layout::coordinate);
  return 0;
}

int run_multiply(const Global& g, const MultiplyArgs& args) {
  const QuadTreeMatrix a = mm::read_tree(args.a, g.leaf);
  const QuadTreeMatrix b = mm::read_tree(args.b, g.leaf);
  SpammConfig cfg;
  cfg.tau = args.tau;
  cfg.execution = execution(g);
  cfg.collect_boxes = !args.boxes.empty();
  cfg.policy = args.policy == "eighth" ? TauPolicy::per_tier_eighth : TauPolicy::constant;
  SpammResult r = spamm(a, b, cfg);

  Sink stats(args.stats);
  std::ostream& os = stats.stream();
  os << "n,tau,leaf_matmuls,pruned_calls,omitted_budget" << (args.error ? ",abs_err" : "") << '\n';
  os << a.logical_dim() << ',' << num(args.tau) << ',' << r.stats.leaf_matmuls << ','
     << r.stats.pruned_calls << ',' << num(r.stats.omitted_budget);
  if (args.error) {
    const QuadTreeMatrix exact = exact_multiply(a, b, cfg.execution);
    os << ',' << num(node_norm(add_scaled(r.product, exact, -1.0)));
  }
  os << '\n';

  if (!args.boxes.empty()) {
    std::ofstream out(args.boxes);
    if (!out) throw std::runtime_error("cannot write " + args.boxes);
    write_box_log(out, r.stats.boxes);
  }
  if (!args.out.empty()) mm::write_file(args.out, to_dense(r.product), mm::Layout::coordinate);
  return 0;
}

int run_purify(const Global& g, const PurifyArgs& args) {
  const QuadTreeMatrix f = from_dense(load_dense(args.source), g.leaf);
  const std::size_t nocc = args.nocc < 0 ? f.logical_dim() / 2 : std::size_t(args.nocc);
  purify::PurifyOptions opts;
  opts.max_iter = args.iters;
  opts.execution = execution(g);
  const auto result = purify::purify(f, nocc, {algebra(args.mode), args.tau}, opts);

  if (!args.report.empty()) {
    Sink report(args.report);
    purify::write_report_csv(report.stream(), result);
  }
  Sink summary(args.summary);
  purify::write_summary_csv(summary.stream(), result);
  if (!args.out.empty()) mm::write_file(args.out, to_dense(result.density), mm::Layout::coordinate);
  return 0;
}

int run_sweep(const Global& g, const SweepArgs& args) {
  if (args.sizes.empty() || args.modes.empty() || (args.taus.empty() && args.targets.empty())) {
    throw std::invalid_argument("sweep needs sizes, modes and taus or targets");
  }
  Sink sink(args.out);
  std::ostream& os = sink.stream();
  os << "n,mode,target,tau,iterations,avg_leaf_matmuls,total_leaf_matmuls,delta_e_rel\n";
  for (std::size_t n : args.sizes) {
    const auto spec = args.kind == "gapped" ? decay::gapped_chain(n, args.gap, args.hop)
                                            : decay::gapless_chain(n, args.hop);
    const QuadTreeMatrix f = decay::gen_model_hamiltonian(spec, g.leaf);
    purify::PurifyOptions opts;
    opts.max_iter = args.iters;
    opts.execution = execution(g);
    opts.reference_energy = purify::exact_energy(f, spec.n_occ, opts);

    auto row = [&](const std::string& mode, double target, double tau,
                   const purify::PurificationResult& r) {
      os << n << ',' << mode << ',' << num(target) << ',' << num(tau) << ',' << r.iterations << ','
         << num(r.avg_leaf_matmuls) << ',' << r.total_leaf_matmuls << ',' << num(r.delta_e_rel)
         << '\n';
    };
    for (const std::string& mode : args.modes) {
      for (double tau : args.taus) row(mode, 0.0, tau, purify::purify(f, spec.n_occ, {algebra(mode), tau}, opts));
      for (double target : args.targets) {
        purify::MatchOptions m;
        m.purify = opts;
        const auto match = purify::match_error_threshold(f, spec.n_occ, target, algebra(mode), m);
        if (match.status == purify::MatchStatus::not_converged) {
          std::cerr << "warning: n=" << n << " mode=" << mode << " target=" << target
                    << " not matched, closest delta_e_rel=" << match.delta_e_rel << '\n';
        }
        row(mode, target, match.tau, purify::purify(f, spec.n_occ, {algebra(mode), match.tau}, opts));
      }
    }
  }
  return 0;
}

int run_boxes(const Global& g, const BoxesArgs& args) {
  const QuadTreeMatrix a = mm::read_tree(args.a, g.leaf);
  const QuadTreeMatrix b = mm::read_tree(args.b, g.leaf);
  SpammConfig cfg;
  cfg.tau = args.tau;
  cfg.execution = execution(g);
  cfg.collect_boxes = true;
  const SpammResult r = spamm(a, b, cfg);
  {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    write_box_log(out, r.stats.boxes);
  }
  const BoxSummary s = summarize_boxes(r.stats.boxes, a.padded_dim(), a.depth());
  Sink sink(args.summary);
  std::ostream& os = sink.stream();
  os << "tier,boxes,volume_fraction\n";
  const double total = double(a.padded_dim()) * a.padded_dim() * a.padded_dim();
  for (std::size_t t = 0; t < s.boxes_per_tier.size(); ++t) {
    const double edge = double(a.padded_dim() >> t);
    os << t << ',' << s.boxes_per_tier[t] << ',' << num(s.boxes_per_tier[t] * edge * edge * edge / total)
       << '\n';
  }
  std::cerr << "pruned volume fraction " << num(s.pruned_volume_fraction) << " over "
            << r.stats.boxes.size() << " boxes\n";
  return 0;
}

int run_profile(const Global& g, const ProfileArgs& args) {
  const QuadTreeMatrix m = mm::read_tree(args.in, g.leaf);
  if (m.logical_dim() % args.block != 0) {
    throw DimensionError("profile: dimension not divisible by block size");
  }
  const std::size_t atoms = m.logical_dim() / args.block;
  const auto positions = args.geometry == "chain" ? decay::chain_positions(atoms)
                                                  : decay::jittered_grid_positions(atoms, args.seed);
  Sink sink(args.out);
  decay::write_profile_csv(sink.stream(), decay::decay_profile(m, positions, args.block));
  return 0;
}

int run_order(const Global& g, const OrderArgs& args) {
  auto positions = args.geometry == "chain" ? decay::chain_positions(args.count)
                                            : decay::jittered_grid_positions(args.count, args.seed);
  if (args.shuffle) {
    std::mt19937_64 rng(args.seed);
    std::shuffle(positions.begin(), positions.end(), rng);
  }
  const sfc::AtomLayout layout = sfc::order_atoms(positions, args.curve_order);
  {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    sfc::write_permutation(out, layout);
  }
  if (!args.matrix.empty()) {
    if (args.matrix_out.empty()) throw std::invalid_argument("--matrix needs --matrix-out");
    const QuadTreeMatrix m = mm::read_tree(args.matrix, g.leaf);
    mm::write_file(args.matrix_out, to_dense(sfc::apply_ordering(m, layout, args.block)),
                   mm::Layout::coordinate);
  }
  return 0;
}

}  // namespace spamm::cli
