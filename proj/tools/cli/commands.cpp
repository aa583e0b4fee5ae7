#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qwalk/coin_walk.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/plane_wave.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/unmeasured_evolution.hpp"
#include "qwalk/wave_packet.hpp"

namespace qwalk::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> base_metadata(const RunConfig& cfg) {
  std::vector<std::string> m{std::string("qwalk ") + QWALK_VERSION, std::string("command: ") + command_name(cfg.command),
                             "seed: " + std::to_string(cfg.seed), std::string("generator: ") + rng::kGeneratorName};
  std::istringstream lines(serialize(cfg));
  for (std::string line; std::getline(lines, line);) m.push_back("config: " + line);
  return m;
}

std::string grid_line(const SpatialGrid& g) {
  return "spatial grid: x in [" + format_double(g.x_min) + ", " + format_double(g.x_max) +
         "], points=" + std::to_string(g.n_points);
}

std::string spectral_line(const SpectralGrid& g) {
  return "spectral grid: k in [" + format_double(g.k_min) + ", " + format_double(g.k_max) +
         "], modes=" + std::to_string(g.n_modes);
}

Table profile_table(const std::string& name, const WavePacketState& s, std::vector<std::string> meta) {
  Table t{name, std::move(meta), {"x", "abs_R", "abs_L", "density"}, {}};
  for (const auto& r : amplitude_profile(s)) t.rows.push_back({r.x, r.abs_r, r.abs_l, r.density});
  return t;
}

double defined_or_nan(bool defined, double v) { return defined ? v : kNaN; }

struct PacketSetup {
  SpatialGrid grid;
  SpectralGrid spectral;
  SpectralPacket source;
  Packet initial;
};

PacketSetup gaussian_setup(const SpatialGrid& grid, const SpectralGrid& spectral, double width, double center) {
  return {grid, spectral, gaussian_spectral_packet(grid, spectral, width, center), gaussian_packet(grid, width, center)};
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    std::size_t used = 0;
    out.push_back(std::stod(cell, &used));
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("bad number");
  }
  return out;
}

Packet read_packet_csv(const std::string& path, const SpatialGrid& grid) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read packet file '" + path + "'");
  std::vector<double> xs;
  std::vector<Complex> fs;
  std::size_t line_no = 0;
  for (std::string line; std::getline(f, line);) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> cells;
    try {
      cells = split_doubles(line);
    } catch (const std::exception&) {
      if (xs.empty()) continue;  // header row
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected x, Re f, Im f");
    }
    if (cells.size() != 3) throw ConfigError(path + ":" + std::to_string(line_no) + ": expected x, Re f, Im f");
    xs.push_back(cells[0]);
    fs.emplace_back(cells[1], cells[2]);
  }
  if (xs.size() < 2) throw ConfigError("packet file '" + path + "' needs at least two samples");
  try {
    return resample_packet(grid, xs, fs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<Table> packet_profiles(const PacketSetup& setup, const RunConfig& cfg, const std::string& stem,
                                   const std::vector<std::int64_t>& checkpoints, bool measured,
                                   std::vector<std::string> meta) {
  meta.push_back(grid_line(setup.grid));
  meta.push_back(spectral_line(setup.spectral));
  meta.push_back(std::string("evolution: ") + (measured ? "measured, all-left record" : "coherent"));
  std::vector<Table> out;
  for (std::int64_t t : checkpoints) {
    auto m = meta;
    m.push_back("t: " + std::to_string(t));
    WavePacketState s;
    if (measured) {
      const MeasuredPacket p = evolve_measured_all_left(setup.source, cfg.a_r, cfg.a_l, cfg.theta, cfg.l, t);
      m.push_back("log branch probability: " + format_double(p.log_branch_norm));
      s = p.state;
    } else {
      s = evolve_unmeasured(setup.source, {cfg.a_r, cfg.a_l}, cfg.theta, cfg.l, t);
    }
    out.push_back(profile_table(stem + "_t" + std::to_string(t), s, std::move(m)));
  }
  return out;
}

Table initial_table(const std::string& name, const PacketSetup& setup, std::vector<std::string> meta) {
  meta.push_back(grid_line(setup.grid));
  meta.push_back("t: initial packet");
  Table t{name, std::move(meta), {"x", "abs_f"}, {}};
  for (std::size_t i = 0; i < setup.grid.n_points; ++i) t.rows.push_back({setup.grid.x(i), std::abs(setup.initial.samples[i])});
  return t;
}

RunConfig figure_packet_config(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.a_r = c.a_l = 1.0 / std::numbers::sqrt2;
  c.theta = -std::atan(0.9);
  c.l = 0.01;
  return c;
}

Table scan_table(const std::string& name, ScanAxis axis, const ScanParams& p, double lo, double hi,
                 std::size_t samples, bool include_end, std::vector<std::string> meta) {
  const auto rows = displacement_scan(axis, p, lo, hi, samples, include_end);
  Table t{name, std::move(meta), {axis == ScanAxis::Theta ? "theta" : "k", "L1", "L2"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.axis, r.degenerate || r.p_r < 1e-14 ? kNaN : r.l1, r.degenerate || r.p_l < 1e-14 ? kNaN : r.l2});
  return t;
}

}  // namespace

RunOutput cmd_particle(const RunConfig& cfg) {
  CoinSpec coin = CoinSpec::hadamard();
  if (cfg.coin == "angles") coin = CoinSpec(CoinAngles{cfg.eta, cfg.phi, cfg.coin_theta, cfg.varphi});
  if (cfg.coin == "rotation") coin = CoinSpec::rotation(cfg.coin_theta);
  CoinPair start{1.0, 0.0};
  if (cfg.start == "L") start = {0.0, 1.0};
  if (cfg.start == "symmetric") start = {1.0 / std::numbers::sqrt2, Complex(0.0, 1.0 / std::numbers::sqrt2)};
  const auto order = cfg.order == "shift-then-coin" ? OperatorOrder::ShiftThenCoin : OperatorOrder::CoinThenShift;
  const LatticeWalkState s = walk_evolve(LatticeWalkState::point(0, start, cfg.l), coin, order, cfg.steps);

  auto meta = base_metadata(cfg);
  const auto stats = position_statistics(s);
  meta.push_back("mean: " + format_double(stats.mean));
  meta.push_back("variance: " + format_double(stats.variance));
  Table t{"particle", std::move(meta), {"x", "P", "Re_aR", "Im_aR", "Re_aL", "Im_aL"}, {}};
  for (std::int64_t site = s.first_site(); site <= s.last_site(); ++site) {
    const CoinPair a = s.amplitude(site);
    t.rows.push_back({static_cast<double>(site) * cfg.l, a.norm_squared(), a.r.real(), a.r.imag(), a.l.real(), a.l.imag()});
  }
  return {{std::move(t)}, "particle walk, t = " + std::to_string(cfg.steps), {}, "particle", false};
}

RunOutput cmd_mode(const RunConfig& cfg) {
  auto meta = base_metadata(cfg);
  std::vector<std::int64_t> ts;
  for (std::int64_t t = 0; t < cfg.steps; t += cfg.stride) ts.push_back(t);
  ts.push_back(cfg.steps);

  if (!cfg.measured) {
    Table table{"mode", std::move(meta), {"t", "P1", "L1", "P2", "L2"}, {}};
    for (std::int64_t t : ts) {
      const auto r = evolve_mode_closed_form({cfg.a_r, cfg.a_l, cfg.k, cfg.l, cfg.theta, t, cfg.l0});
      table.rows.push_back({static_cast<double>(t), r.p1, defined_or_nan(r.l1_defined, r.l1), r.p2,
                            defined_or_nan(r.l2_defined, r.l2)});
    }
    return {{std::move(table)}, "coherent mode", {}, "mode", false};
  }

  const MeasuredStepResult step = measured_step(cfg.a_r, cfg.a_l, cfg.theta, cfg.k, cfg.l);
  std::vector<std::string> cols{"t", "p_R", "l1", "p_L", "l2", "mean", "variance"};
  if (cfg.samples > 0) {
    for (const char* c : {"mc_mean", "mc_variance", "mc_mean_stderr", "mc_variance_stderr"}) cols.emplace_back(c);
    meta.push_back("monte carlo trajectories per row: " + std::to_string(cfg.samples));
  }
  Table table{"mode", std::move(meta), std::move(cols), {}};
  for (std::int64_t t : ts) {
    const Moments m = measured_moments(step, t);
    std::vector<double> row{static_cast<double>(t), step.p_r, defined_or_nan(step.l1_defined, step.l1), step.p_l,
                            defined_or_nan(step.l2_defined, step.l2), m.mean, m.variance};
    if (cfg.samples > 0) {
      const auto s = oracle::monte_carlo_measured_mode(step.p_r, step.l1_defined ? step.l1 : 0.0,
                                                       step.l2_defined ? step.l2 : 0.0, t, cfg.samples, cfg.seed);
      row.insert(row.end(), {s.mean, s.variance, s.mean_stderr, s.variance_stderr});
    }
    table.rows.push_back(std::move(row));
  }
  return {{std::move(table)}, "measured mode", {}, "mode", false};
}

RunOutput cmd_packet(const RunConfig& cfg) {
  const SpatialGrid grid = SpatialGrid::make(cfg.x_min, cfg.x_max, static_cast<std::size_t>(cfg.x_points));
  const SpectralGrid spectral = SpectralGrid::symmetric(cfg.k_max, static_cast<std::size_t>(cfg.k_points));
  auto meta = base_metadata(cfg);
  PacketSetup setup;
  if (cfg.preset == "gaussian") {
    setup = gaussian_setup(grid, spectral, cfg.width, cfg.center);
    meta.push_back("preset: gaussian, width=" + format_double(cfg.width) + ", center=" + format_double(cfg.center));
  } else {
    const Packet p = read_packet_csv(cfg.input, grid);
    setup = {grid, spectral, to_spectral(p, spectral), p};
    meta.push_back("preset: csv input, linearly resampled");
  }
  RunOutput out{packet_profiles(setup, cfg, "packet", cfg.checkpoints, cfg.evolution == "measured", meta),
                "packet profiles", {}, "packet", false};
  return out;
}

RunOutput cmd_figure(const RunConfig& cfg) {
  auto meta = base_metadata(cfg);
  const std::string n = std::to_string(cfg.figure);
  RunOutput out;
  out.render_stem = "fig" + n;
  out.always_script = true;
  switch (cfg.figure) {
    case 1: {
      meta.push_back("preset: k=1, l=0.01, a_R=a_L=1/sqrt2, theta over [0, 2pi), 2000 samples");
      out.tables.push_back(scan_table("fig1_scan", ScanAxis::Theta, ScanParams{}, 0.0, 2.0 * std::numbers::pi, 2000,
                                      false, meta));
      out.title = "L1 and L2 against theta";
      break;
    }
    case 2: {
      ScanParams p;
      p.theta = 5.55;
      p.l = 1.0;
      const std::string note =
          "theta = 5.55 with l = 1 is used for this scan; the alternative value theta = 1 (also listed for this "
          "preset) gives a different curve and can be produced with `qwalk mode` or a custom scan.";
      meta.push_back("preset: l=1, theta=5.55, a_R=a_L=1/sqrt2, k over [0.05, 2pi], 2000 samples");
      meta.push_back("note: " + note);
      out.tables.push_back(scan_table("fig2_scan", ScanAxis::K, p, 0.05, 2.0 * std::numbers::pi, 2000, true, meta));
      out.notes.emplace_back("fig2_README.txt", note + "\n");
      out.title = "L1 and L2 against k";
      break;
    }
    case 3:
    case 4: {
      const RunConfig c = figure_packet_config(cfg);
      const auto setup = gaussian_setup(SpatialGrid::make(-20.0, 10.0, 3072), SpectralGrid{}, 1.0, 0.0);
      meta.push_back("preset: gaussian width 1, theta=-atan(0.9), l=0.01, a_R=a_L=1/sqrt2");
      const std::vector<std::int64_t> ts = cfg.figure == 3 ? std::vector<std::int64_t>{1, 3, 5, 10, 20}
                                                            : std::vector<std::int64_t>{35};
      out.tables = packet_profiles(setup, c, "fig" + n, ts, true, meta);
      out.title = cfg.figure == 3 ? "all-left history after 1, 3, 5, 10, 20 steps" : "all-left history after 35 steps";
      break;
    }
    case 5:
    case 6: {
      const RunConfig c = figure_packet_config(cfg);
      const bool long_run = cfg.figure == 6;
      const auto setup = long_run ? gaussian_setup(SpatialGrid::make(-16.0, 16.0, 4096), SpectralGrid{}, 1.0, 0.0)
                                  : gaussian_setup(SpatialGrid::make(-20.0, 10.0, 3072), SpectralGrid{}, 1.0, 0.0);
      meta.push_back("preset: gaussian width 1, theta=-atan(0.9), l=0.01, a_R=a_L=1/sqrt2");
      out.tables.push_back(initial_table("fig" + n + "_initial", setup, meta));
      const std::vector<std::int64_t> ts =
          long_run ? std::vector<std::int64_t>{6000, 6001, 6002, 6003} : std::vector<std::int64_t>{1};
      for (auto& t : packet_profiles(setup, c, "fig" + n, ts, false, meta)) out.tables.push_back(std::move(t));
      out.title = long_run ? "coherent evolution after 6000 to 6003 steps" : "coherent evolution after one step";
      break;
    }
    default:
      throw ConfigError("figure must be 1..6");
  }
  return out;
}

RunOutput run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Particle: return cmd_particle(cfg);
    case Command::Mode: return cmd_mode(cfg);
    case Command::Packet: return cmd_packet(cfg);
    case Command::Figure: return cmd_figure(cfg);
  }
  throw ConfigError("unknown command");
}

void emit(const RunConfig& cfg, const RunOutput& out) {
  const std::filesystem::path dir(cfg.out);
  for (const auto& t : out.tables) write_file(dir, t.name + ".csv", to_csv(t));
  for (const auto& [name, text] : out.notes) write_file(dir, name, text);
  if (cfg.format == "gnuplot" || out.always_script) write_file(dir, out.render_stem + ".gp", to_gnuplot(out.tables, out.title));
  if (cfg.format == "svg") write_file(dir, out.render_stem + ".svg", to_svg(out.tables, out.title));
}

int main_entry(const std::vector<std::string>& args, std::ostream& err) {
  try {
    RunConfig cfg;
    if (!parse_args(args, cfg)) return 0;
    RunOutput out;
    try {
      out = run(cfg);
    } catch (const GridError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    try {
      emit(cfg, out);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    return 0;
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    for (auto& c : msg)
      if (c == '\n') c = ' ';
    err << "qwalk: " << msg << '\n';
    return 2;
  } catch (const GridError& e) {
    err << "qwalk: grid validation failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "qwalk: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qwalk::cli
