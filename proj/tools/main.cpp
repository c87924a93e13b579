// spamm_bench: generate decay matrices, run SpAMM products and TC2
// purifications, write the CSV tables and box logs.

#include <omp.h>

#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"

using namespace spamm::cli;

namespace {

void add_source(CLI::App* cmd, MatrixSource& src) {
  cmd->add_option("--in", src.path, "MatrixMarket input (overrides --kind)");
  cmd->add_option("--kind", src.kind, "exp | alg | gapped | gapless")
      ->check(CLI::IsMember({"exp", "alg", "gapped", "gapless"}));
  cmd->add_option("--n", src.n, "dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", src.alpha, "exponential rate, A_ij = exp(-alpha|i-j|)");
  cmd->add_option("--p", src.p, "algebraic power, A_ij = 1/|i-j|^p");
  cmd->add_option("--gap", src.gap, "gapped model on-site splitting");
  cmd->add_option("--hop", src.hop, "nearest-neighbour hopping");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SpAMM benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Global global;
  bool deterministic = true;
  app.add_option("--leaf", global.leaf, "leaf block edge (power of two)");
  app.add_option("--threads", global.threads, "OpenMP threads (0 = runtime default)");
  app.add_flag("--serial", global.serial, "use the serial reference kernel");
  app.add_flag("--deterministic,!--no-deterministic", deterministic,
               "fixed accumulation order (always on)");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a decay matrix or model Hamiltonian");
  add_source(generate, gen.source);
  generate->add_option("--layout", gen.layout, "array | coordinate")
      ->check(CLI::IsMember({"array", "coordinate"}));
  generate->add_option("--out", gen.out, "output .mtx")->required();

  MultiplyArgs mul;
  auto* multiply = app.add_subcommand("multiply", "SpAMM product of two matrices");
  multiply->add_option("--a", mul.a)->required();
  multiply->add_option("--b", mul.b)->required();
  multiply->add_option("--tau", mul.tau)->check(CLI::NonNegativeNumber);
  multiply->add_option("--policy", mul.policy, "constant | eighth")
      ->check(CLI::IsMember({"constant", "eighth"}));
  multiply->add_option("--out", mul.out, "product .mtx");
  multiply->add_option("--stats", mul.stats, "stats CSV (default stdout)");
  multiply->add_option("--boxes", mul.boxes, "Morton-sorted pruned box log");
  multiply->add_flag("--error", mul.error, "also compute ||C~ - C||_F against tau = 0");

  PurifyArgs pur;
  auto* purify = app.add_subcommand("purify", "TC2 purification");
  add_source(purify, pur.source);
  purify->add_option("--nocc", pur.nocc, "occupied states (default n/2)");
  purify->add_option("--mode", pur.mode, "spamm | drop")->check(CLI::IsMember({"spamm", "drop"}));
  purify->add_option("--tau", pur.tau)->check(CLI::NonNegativeNumber);
  purify->add_option("--iters", pur.iters)->check(CLI::PositiveNumber);
  purify->add_option("--report", pur.report, "per-iteration CSV");
  purify->add_option("--summary", pur.summary, "summary CSV (default stdout)");
  purify->add_option("--out", pur.out, "density matrix .mtx");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "table over size x mode x tau");
  sweep->add_option("--kind", sw.kind)->check(CLI::IsMember({"gapped", "gapless"}));
  sweep->add_option("--gap", sw.gap);
  sweep->add_option("--hop", sw.hop);
  sweep->add_option("--sizes", sw.sizes)->delimiter(',');
  sweep->add_option("--taus", sw.taus)->delimiter(',');
  sweep->add_option("--modes", sw.modes)->delimiter(',');
  sweep->add_option("--targets", sw.targets, "matched-error targets for delta_e_rel")
      ->delimiter(',');
  sweep->add_option("--iters", sw.iters)->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw.out, "CSV (default stdout)");

  BoxesArgs bx;
  auto* boxes = app.add_subcommand("boxes", "pruned cuboids of one product");
  boxes->add_option("--a", bx.a)->required();
  boxes->add_option("--b", bx.b)->required();
  boxes->add_option("--tau", bx.tau)->check(CLI::NonNegativeNumber);
  boxes->add_option("--out", bx.out, "box log")->required();
  boxes->add_option("--summary", bx.summary, "per-tier summary CSV (default stdout)");

  ProfileArgs pr;
  auto* profile = app.add_subcommand("profile", "block-norm decay profile");
  profile->add_option("--in", pr.in)->required();
  profile->add_option("--block", pr.block)->check(CLI::PositiveNumber);
  profile->add_option("--geometry", pr.geometry, "chain | grid")
      ->check(CLI::IsMember({"chain", "grid"}));
  profile->add_option("--seed", pr.seed);
  profile->add_option("--out", pr.out, "CSV (default stdout)");

  OrderArgs ord;
  auto* order = app.add_subcommand("order", "Hilbert ordering of atom positions");
  order->add_option("--count", ord.count)->required()->check(CLI::PositiveNumber);
  order->add_option("--geometry", ord.geometry)->check(CLI::IsMember({"chain", "grid"}));
  order->add_option("--seed", ord.seed);
  order->add_flag("--shuffle", ord.shuffle, "shuffle positions before ordering");
  order->add_option("--curve-order", ord.curve_order)->check(CLI::Range(1, 20));
  order->add_option("--out", ord.out, "permutation file")->required();
  order->add_option("--matrix", ord.matrix, "matrix to reorder");
  order->add_option("--block", ord.block)->check(CLI::PositiveNumber);
  order->add_option("--matrix-out", ord.matrix_out);

  CLI11_PARSE(app, argc, argv);
  if (global.threads > 0) omp_set_num_threads(global.threads);

  try {
    if (*generate) return run_generate(global, gen);
    if (*multiply) return run_multiply(global, mul);
    if (*purify) return run_purify(global, pur);
    if (*sweep) return run_sweep(global, sw);
    if (*boxes) return run_boxes(global, bx);
    if (*profile) return run_profile(global, pr);
    if (*order) return run_order(global, ord);
  } catch (const std::exception& e) {
    std::cerr << "spamm_bench: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
