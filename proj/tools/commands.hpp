#ifndef SPAMM_TOOLS_COMMANDS_HPP
#define SPAMM_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace spamm::cli {

struct MatrixSource {
  std::string path;
  std::string kind = "gapped";
  std::size_t n = 256;
  double alpha = 1.0;
  double p = 3.0;
  double gap = 1.0;
  double hop = 1.0;
};

struct GenerateArgs {
  MatrixSource source;
  std::string layout = "coordinate";
  std::string out;
};

struct MultiplyArgs {
  std::string a, b;
  double tau = 0.0;
  std::string policy = "constant";
  std::string out;
  std::string stats;
  std::string boxes;
  bool error = false;
};

struct PurifyArgs {
  MatrixSource source;
  long long nocc = -1;
  std::string mode = "spamm";
  double tau = 0.0;
  int iters = 50;
  std::string report;
  std::string summary;
  std::string out;
};

struct SweepArgs {
  std::string kind = "gapped";
  double gap = 1.0;
  double hop = 1.0;
  std::vector<std::size_t> sizes{64, 128, 256};
  std::vector<double> taus{0.0, 1e-8};
  std::vector<std::string> modes{"spamm", "drop"};
  std::vector<double> targets;
  int iters = 50;
  std::string out;
};

struct BoxesArgs {
  std::string a, b;
  double tau = 0.0;
  std::string out;
  std::string summary;
};

struct ProfileArgs {
  std::string in;
  std::size_t block = 4;
  std::string geometry = "chain";
  std::uint64_t seed = 1;
  std::string out;
};

struct OrderArgs {
  std::size_t count = 0;
  std::string geometry = "grid";
  std::uint64_t seed = 1;
  bool shuffle = false;
  int curve_order = 10;
  std::string out;
  std::string matrix;
  std::size_t block = 1;
  std::string matrix_out;
};

struct Global {
  std::size_t leaf = 4;
  int threads = 0;
  bool serial = false;
};

int run_generate(const Global&, const GenerateArgs&);
int run_multiply(const Global&, const MultiplyArgs&);
int run_purify(const Global&, const PurifyArgs&);
int run_sweep(const Global&, const SweepArgs&);
int run_boxes(const Global&, const BoxesArgs&);
int run_profile(const Global&, const ProfileArgs&);
int run_order(const Global&, const OrderArgs&);

}  // namespace spamm::cli

#endif  // SPAMM_TOOLS_COMMANDS_HPP
