#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "drsplit/problems.hpp"
#include "drsplit/solvers.hpp"

namespace drsplit {

enum class Subcommand { denoise, bench, selftest };

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kCsvHeader = "iter,gap_per_pixel,primal_energy,dual_energy,elapsed_ms";

struct CliConfig {
  Subcommand subcommand = Subcommand::denoise;
  std::string input;
  std::string output;
  std::string synthetic;  ///< "WxH": use the built-in scene instead of a file
  Model model = Model::tv;
  std::optional<double> alpha;  ///< default 0.5 (tv) or 1.0 (huber)
  double lambda = 0.05;
  Algorithm algorithm = Algorithm::adr;
  std::optional<double> sigma0;  ///< default 1, 0.2 (adrsc), 0.15 (padrsc)
  std::optional<double> tau0;
  std::optional<double> gamma;
  std::string precond = "gs2";
  double tol = 1e-7;
  long max_iter = 10000;
  std::uint64_t seed = 0;
  std::optional<double> noise;
  std::string csv;
  int log_every = 10;
  int threads = 1;
  bool permissive = false;
  std::vector<std::string> algorithms{"dr", "adr", "padr"};  ///< bench rows, "alg[@precond]"
  std::vector<double> tolerances{1e-5, 1e-7};                ///< bench columns
  std::string inject_fault;                                  ///< selftest mutation hook

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Parses argv (without the program name). Throws ConfigError on bad input.
CliConfig parse_cli(const std::vector<std::string>& args);
/// Arguments that parse back to the same config.
std::vector<std::string> to_args(const CliConfig& config);

double default_alpha(Model m);
double default_sigma(Algorithm a);

/// Loads (or synthesizes) the noisy input image described by config.
GridImage load_input(const CliConfig& config);
RunConfig make_run_config(const CliConfig& config, Algorithm algorithm, const std::string& precond);

void write_csv_log(std::ostream& out, const std::vector<LogRecord>& history);

int run_denoise(const CliConfig& config, std::ostream& out, std::ostream& err);
int run_bench(const CliConfig& config, std::ostream& out, std::ostream& err);
int run_selftest(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Entry point: parses and dispatches, mapping errors to exit codes.
int cli_main(int argc, char** argv);

}  // namespace drsplit
