#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk::cli {

/// Invalid flags, config values or combinations. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Particle, Mode, Packet, Figure };

struct RunConfig {
  Command command = Command::Particle;

  std::string out = ".";
  std::string format = "csv";  // csv | svg | gnuplot
  std::uint64_t seed = 1;
  bool long_run = false;

  // particle
  std::string coin = "hadamard";  // hadamard | angles | rotation
  double eta = 0.0;
  double phi = 0.0;
  double coin_theta = 0.0;
  double varphi = 0.0;
  std::string start = "R";  // R | L | symmetric
  std::string order = "coin-then-shift";
  std::int64_t steps = 0;

  // mode and packet
  double a_r = 0.0;
  double a_l = 0.0;
  double theta = 0.0;
  double l = 0.0;
  double k = 0.0;
  double l0 = 0.0;
  bool measured = false;
  std::int64_t stride = 1;
  std::uint64_t samples = 0;

  // packet
  std::string preset = "gaussian";
  double width = 1.0;
  double center = 0.0;
  std::string input;
  std::string evolution = "measured";  // measured | coherent
  std::vector<std::int64_t> checkpoints;
  double x_min = 0.0;
  double x_max = 0.0;
  std::int64_t x_points = 0;
  double k_max = 0.0;
  std::int64_t k_points = 0;

  // figure
  int figure = 0;

  bool operator==(const RunConfig&) const = default;
};

const char* command_name(Command c);

/// Parses argv (without the program name). Flags override `--config` file values, which
/// override the built-in preset of the chosen subcommand. Throws ConfigError.
/// Returns false when help was requested and printed.
bool parse_args(std::span<const std::string> args, RunConfig& out);

/// key=value lines, one per option that applies to the command; feeding them back through
/// `--config` reproduces the same RunConfig.
std::string serialize(const RunConfig& cfg);

/// Shortest-round-trip-safe decimal with 17 significant digits.
std::string format_double(double v);

}  // namespace qwalk::cli
