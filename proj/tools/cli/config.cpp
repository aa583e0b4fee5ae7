#include "config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace qwalk::cli {

namespace {

const std::map<std::string, Command> kCommands{
    {"particle", Command::Particle}, {"mode", Command::Mode}, {"packet", Command::Packet}, {"figure", Command::Figure}};

const std::set<std::string> kCommon{"out", "format", "seed", "long-run"};

const std::map<Command, std::vector<std::string>> kApplies{
    {Command::Particle, {"coin", "eta", "phi", "coin-theta", "varphi", "start", "order", "steps", "l"}},
    {Command::Mode, {"a-r", "a-l", "k", "l", "theta", "l0", "steps", "measured", "stride", "samples"}},
    {Command::Packet,
     {"a-r", "a-l", "theta", "l", "preset", "width", "center", "input", "evolution", "checkpoints", "x-min", "x-max",
      "x-points", "k-max", "k-points"}},
    {Command::Figure, {"number"}},
};

bool applies(Command c, const std::string& key) {
  if (kCommon.contains(key)) return true;
  const auto& keys = kApplies.at(c);
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

// Values a flag or config key did not set.
void apply_preset(RunConfig& c, const std::set<std::string>& given) {
  const auto unset = [&](const char* key) { return !given.contains(key); };
  const double balanced = 1.0 / std::numbers::sqrt2;
  switch (c.command) {
    case Command::Particle:
      if (unset("steps")) c.steps = 100;
      if (unset("l")) c.l = 1.0;
      break;
    case Command::Mode:
      if (unset("a-r")) c.a_r = balanced;
      if (unset("a-l")) c.a_l = balanced;
      if (unset("k")) c.k = 1.0;
      if (unset("l")) c.l = 0.01;
      if (unset("steps")) c.steps = 10;
      break;
    case Command::Packet:
      if (unset("a-r")) c.a_r = balanced;
      if (unset("a-l")) c.a_l = balanced;
      if (unset("theta")) c.theta = -std::atan(0.9);
      if (unset("l")) c.l = 0.01;
      if (unset("checkpoints")) c.checkpoints = {1, 3, 5, 10, 20};
      if (unset("x-min")) c.x_min = -20.0;
      if (unset("x-max")) c.x_max = 10.0;
      if (unset("x-points")) c.x_points = 3072;
      if (unset("k-max")) c.k_max = 16.0;
      if (unset("k-points")) c.k_points = 4096;
      break;
    case Command::Figure:
      break;
  }
}

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& m) { throw ConfigError(m); };
  const auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) fail(std::string(name) + " must be finite");
  };
  if (c.format != "csv" && c.format != "svg" && c.format != "gnuplot") fail("format must be csv, svg or gnuplot");
  if (c.out.empty()) fail("output directory must not be empty");
  switch (c.command) {
    case Command::Particle:
      if (c.coin != "hadamard" && c.coin != "angles" && c.coin != "rotation")
        fail("coin must be hadamard, angles or rotation");
      if (c.start != "R" && c.start != "L" && c.start != "symmetric") fail("start must be R, L or symmetric");
      if (c.order != "coin-then-shift" && c.order != "shift-then-coin")
        fail("order must be coin-then-shift or shift-then-coin");
      if (c.steps < 0) fail("steps must be >= 0");
      if (!(c.l > 0.0) || !std::isfinite(c.l)) fail("l must be positive");
      for (double v : {c.eta, c.phi, c.coin_theta, c.varphi}) finite(v, "coin angle");
      break;
    case Command::Mode:
      for (double v : {c.a_r, c.a_l, c.k, c.l, c.theta, c.l0}) finite(v, "mode parameter");
      if (std::abs(c.a_r * c.a_r + c.a_l * c.a_l - 1.0) > 1e-12) fail("a-r^2 + a-l^2 must equal 1");
      if (c.k == 0.0) fail("k must be non-zero");
      if (c.steps < 0) fail("steps must be >= 0");
      if (c.stride < 1) fail("stride must be >= 1");
      if (c.samples != 0 && !c.measured) fail("samples requires --measured");
      if (c.samples != 0 && c.samples < 10000) fail("samples must be >= 10000");
      break;
    case Command::Packet:
      for (double v : {c.a_r, c.a_l, c.theta, c.l, c.width, c.center}) finite(v, "packet parameter");
      if (std::abs(c.a_r * c.a_r + c.a_l * c.a_l - 1.0) > 1e-12) fail("a-r^2 + a-l^2 must equal 1");
      if (c.preset != "gaussian" && c.preset != "csv") fail("preset must be gaussian or csv");
      if (c.preset == "csv" && c.input.empty()) fail("preset csv needs --input");
      if (c.preset == "gaussian" && !c.input.empty()) fail("--input requires --preset csv");
      if (!(c.width > 0.0)) fail("width must be positive");
      if (c.evolution != "measured" && c.evolution != "coherent") fail("evolution must be measured or coherent");
      if (c.checkpoints.empty()) fail("at least one checkpoint is required");
      if (c.checkpoints.front() < 0) fail("checkpoints must be >= 0");
      if (!std::is_sorted(c.checkpoints.begin(), c.checkpoints.end()) ||
          std::adjacent_find(c.checkpoints.begin(), c.checkpoints.end()) != c.checkpoints.end())
        fail("checkpoints must be strictly ascending");
      if (!(c.x_min < c.x_max) || !std::isfinite(c.x_min) || !std::isfinite(c.x_max)) fail("need x-min < x-max");
      if (c.x_points < 2 || c.k_points < 2) fail("grids need at least two points");
      if (!(c.k_max > 0.0) || !std::isfinite(c.k_max)) fail("k-max must be positive");
      break;
    case Command::Figure:
      if (c.figure < 1 || c.figure > 6) fail("figure must be 1..6");
      if (c.figure == 6 && !c.long_run) fail("figure 6 runs 6000+ steps; pass --long-run to confirm");
      break;
  }
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Particle: return "particle";
    case Command::Mode: return "mode";
    case Command::Packet: return "packet";
    case Command::Figure: return "figure";
  }
  return "";
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

bool parse_args(std::span<const std::string> args, RunConfig& out) {
  if (args.empty()) throw ConfigError("expected a subcommand: particle, mode, packet or figure");
  const auto found = kCommands.find(args[0]);
  if (found == kCommands.end()) {
    if (args[0] == "-h" || args[0] == "--help") {
      std::cout << "usage: qwalk <particle|mode|packet|figure> [flags]; qwalk <subcommand> --help\n";
      return false;
    }
    throw ConfigError("unknown subcommand '" + args[0] + "'");
  }

  RunConfig c;
  c.command = found->second;
  CLI::App app{std::string("qwalk ") + args[0], "qwalk " + args[0]};
  app.set_config("--config", "", "key=value configuration file");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--format", c.format, "csv, svg or gnuplot (CSV is always written)");
  app.add_option("--seed", c.seed, "generator seed");
  app.add_flag("--long-run", c.long_run, "allow runs of thousands of steps");
  switch (c.command) {
    case Command::Particle:
      app.add_option("--coin", c.coin, "hadamard, angles or rotation");
      app.add_option("--eta", c.eta);
      app.add_option("--phi", c.phi);
      app.add_option("--coin-theta", c.coin_theta, "middle-factor phase, or the rotation angle");
      app.add_option("--varphi", c.varphi);
      app.add_option("--start", c.start, "R, L or symmetric");
      app.add_option("--order", c.order, "coin-then-shift or shift-then-coin");
      app.add_option("--steps", c.steps);
      app.add_option("--l", c.l, "step length");
      break;
    case Command::Mode:
      app.add_option("--a-r", c.a_r);
      app.add_option("--a-l", c.a_l);
      app.add_option("--k", c.k, "wavenumber");
      app.add_option("--l", c.l, "step length");
      app.add_option("--theta", c.theta);
      app.add_option("--l0", c.l0, "initial offset");
      app.add_option("--steps", c.steps);
      app.add_flag("--measured", c.measured, "measure the coin after every step");
      app.add_option("--stride", c.stride, "row spacing in steps");
      app.add_option("--samples", c.samples, "Monte Carlo trajectories per row (measured only)");
      break;
    case Command::Packet:
      app.add_option("--a-r", c.a_r);
      app.add_option("--a-l", c.a_l);
      app.add_option("--theta", c.theta);
      app.add_option("--l", c.l, "step length");
      app.add_option("--preset", c.preset, "gaussian or csv");
      app.add_option("--width", c.width);
      app.add_option("--center", c.center);
      app.add_option("--input", c.input, "CSV of x, Re f, Im f");
      app.add_option("--evolution", c.evolution, "measured (all-left history) or coherent");
      app.add_option("--checkpoints", c.checkpoints)->delimiter(',');
      app.add_option("--x-min", c.x_min);
      app.add_option("--x-max", c.x_max);
      app.add_option("--x-points", c.x_points);
      app.add_option("--k-max", c.k_max);
      app.add_option("--k-points", c.k_points);
      break;
    case Command::Figure:
      app.add_option("number", c.figure, "figure 1..6")->required();
      break;
  }

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return false;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  std::set<std::string> given;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0 && opt->get_name() != "number") continue;
    std::string key = opt->get_single_name();
    if (key == "config" || key == "help") continue;
    if (!applies(c.command, key)) throw ConfigError("option '" + key + "' does not apply to " + args[0]);
    if (opt->count() > 0) given.insert(key);
  }
  apply_preset(c, given);
  validate(c);
  out = c;
  return true;
}

std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  const auto put = [&](const char* key, const std::string& v) { os << key << '=' << v << '\n'; };
  const auto quoted = [](const std::string& s) { return '"' + s + '"'; };
  put("out", quoted(c.out));
  put("format", quoted(c.format));
  put("seed", std::to_string(c.seed));
  put("long-run", c.long_run ? "true" : "false");
  switch (c.command) {
    case Command::Particle:
      put("coin", quoted(c.coin));
      put("eta", format_double(c.eta));
      put("phi", format_double(c.phi));
      put("coin-theta", format_double(c.coin_theta));
      put("varphi", format_double(c.varphi));
      put("start", quoted(c.start));
      put("order", quoted(c.order));
      put("steps", std::to_string(c.steps));
      put("l", format_double(c.l));
      break;
    case Command::Mode:
      put("a-r", format_double(c.a_r));
      put("a-l", format_double(c.a_l));
      put("k", format_double(c.k));
      put("l", format_double(c.l));
      put("theta", format_double(c.theta));
      put("l0", format_double(c.l0));
      put("steps", std::to_string(c.steps));
      put("measured", c.measured ? "true" : "false");
      put("stride", std::to_string(c.stride));
      put("samples", std::to_string(c.samples));
      break;
    case Command::Packet: {
      put("a-r", format_double(c.a_r));
      put("a-l", format_double(c.a_l));
      put("theta", format_double(c.theta));
      put("l", format_double(c.l));
      put("preset", quoted(c.preset));
      put("width", format_double(c.width));
      put("center", format_double(c.center));
      if (!c.input.empty()) put("input", quoted(c.input));
      put("evolution", quoted(c.evolution));
      std::string list = "[";
      for (std::size_t i = 0; i < c.checkpoints.size(); ++i) list += (i ? "," : "") + std::to_string(c.checkpoints[i]);
      put("checkpoints", list + "]");
      put("x-min", format_double(c.x_min));
      put("x-max", format_double(c.x_max));
      put("x-points", std::to_string(c.x_points));
      put("k-max", format_double(c.k_max));
      put("k-points", std::to_string(c.k_points));
      break;
    }
    case Command::Figure:
      put("number", std::to_string(c.figure));
      break;
  }
  return os.str();
}

}  // namespace qwalk::cli
