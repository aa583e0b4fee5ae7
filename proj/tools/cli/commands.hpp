#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace qwalk::cli {

/// Everything a command produces; written out by `emit`.
struct RunOutput {
  std::vector<Table> tables;
  std::string title;
  /// Extra plain-text files (name, contents).
  std::vector<std::pair<std::string, std::string>> notes;
  /// Stem of the rendering script / SVG.
  std::string render_stem;
  bool always_script = false;
};

RunOutput cmd_particle(const RunConfig& cfg);
RunOutput cmd_mode(const RunConfig& cfg);
RunOutput cmd_packet(const RunConfig& cfg);
RunOutput cmd_figure(const RunConfig& cfg);

RunOutput run(const RunConfig& cfg);

/// CSV files always; a gnuplot script or SVG rendering as the format asks.
void emit(const RunConfig& cfg, const RunOutput& out);

/// Full front end: parse, run, write. Returns the process exit code and reports errors
/// as a single line on `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& err);

}  // namespace qwalk::cli
