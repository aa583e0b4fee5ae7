#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "config.hpp"

namespace qwalk::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMargin = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string svg_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (const auto& m : t.metadata) out += "# " + m + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_gnuplot(const std::vector<Table>& tables, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set title '" << title << "'\n";
  if (!tables.empty()) os << "set xlabel '" << tables.front().columns.front() << "'\n";
  os << "plot ";
  bool first = true;
  for (const auto& t : tables) {
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
      if (!first) os << ", \\\n     ";
      first = false;
      os << "'" << t.name << ".csv' using 1:" << c + 1 << " with lines title '" << t.name << " " << t.columns[c] << "'";
    }
  }
  os << "\n";
  return os.str();
}

std::string to_svg(const std::vector<Table>& tables, const std::string& title) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& t : tables)
    for (const auto& row : t.rows) {
      if (!std::isfinite(row[0])) continue;
      x_lo = std::min(x_lo, row[0]);
      x_hi = std::max(x_hi, row[0]);
      for (std::size_t c = 1; c < row.size(); ++c) {
        if (!std::isfinite(row[c])) continue;
        y_lo = std::min(y_lo, row[c]);
        y_hi = std::max(y_hi, row[c]);
      }
    }
  if (!(x_lo < x_hi)) x_lo -= 1.0, x_hi += 1.0;
  if (!(y_lo < y_hi)) y_lo -= 1.0, y_hi += 1.0;
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  const auto sx = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * pw; };
  const auto sy = [&](double y) { return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0, fy = y_lo + (y_hi - y_lo) * i / 4.0;
    os << "<text x=\"" << svg_number(sx(fx)) << "\" y=\"" << kHeight - kMargin + 18
       << "\" text-anchor=\"middle\">" << svg_number(fx) << "</text>\n";
    os << "<text x=\"" << kMargin - 6 << "\" y=\"" << svg_number(sy(fy) + 4) << "\" text-anchor=\"end\">"
       << svg_number(fy) << "</text>\n";
  }
  if (!tables.empty())
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
       << escape(tables.front().columns.front()) << "</text>\n";

  std::size_t series = 0;
  for (const auto& t : tables) {
    for (std::size_t c = 1; c < t.columns.size(); ++c, ++series) {
      const char* colour = kPalette[series % std::size(kPalette)];
      os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
      for (const auto& row : t.rows)
        if (std::isfinite(row[0]) && std::isfinite(row[c])) os << svg_number(sx(row[0])) << ',' << svg_number(sy(row[c])) << ' ';
      os << "\"/>\n";
      const double ly = kMargin + 16 + 16 * static_cast<double>(series);
      os << "<line x1=\"" << kWidth - kMargin - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kMargin - 130
         << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\"/>\n";
      os << "<text x=\"" << kWidth - kMargin - 125 << "\" y=\"" << ly << "\">" << escape(t.name + " " + t.columns[c])
         << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& contents) {
  if (name.empty() || name.find('/') != std::string::npos || name.find('\\') != std::string::npos || name == "." ||
      name == "..")
    throw std::invalid_argument("refusing to write '" + name + "' outside the output directory");
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << contents;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace qwalk::cli
