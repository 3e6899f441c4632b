#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "geophase/sweep.hpp"

namespace geophase {

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// JSON has no NaN; missing values are written as null.
nlohmann::json json_number(double x) {
  return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void require_rows(const PhaseTable& table) {
  if (table.empty()) throw std::invalid_argument("phase table is empty");
}

}  // namespace

std::string format_csv(const PhaseTable& table) {
  require_rows(table);
  std::string out =
      "g,m,gamma_composite,gamma_I,gamma_II,gamma_sum,additivity_gap,p1,resultant_I,"
      "resultant_II,status\n";
  for (const PhaseRow& row : table) {
    for (int m = 0; m < 4; ++m) {
      const LevelEntry& e = row.levels[m];
      out += number(row.g) + "," + std::to_string(m + 1) + "," + number(e.gamma_composite) +
             "," + number(e.gamma_I) + "," + number(e.gamma_II) + "," + number(e.gamma_sum) +
             "," + number(e.additivity_gap) + "," + number(e.p1) + "," +
             number(e.resultant_I) + "," + number(e.resultant_II) + "," + e.status + "\n";
    }
  }
  return out;
}

nlohmann::json table_to_json(const PhaseTable& table, const SweepConfig& config) {
  require_rows(table);
  nlohmann::json rows = nlohmann::json::array();
  for (const PhaseRow& row : table) {
    for (int m = 0; m < 4; ++m) {
      const LevelEntry& e = row.levels[m];
      rows.push_back({
          {"g", row.g},
          {"m", m + 1},
          {"gamma_composite", json_number(e.gamma_composite)},
          {"gamma_I", json_number(e.gamma_I)},
          {"gamma_II", json_number(e.gamma_II)},
          {"gamma_sum", json_number(e.gamma_sum)},
          {"additivity_gap", json_number(e.additivity_gap)},
          {"p1", json_number(e.p1)},
          {"resultant_I", json_number(e.resultant_I)},
          {"resultant_II", json_number(e.resultant_II)},
          {"status", e.status},
      });
    }
  }
  return {
      {"metadata", {{"tool", "geophase"}, {"version", kToolVersion}, {"config", config_to_json(config)}}},
      {"rows", rows},
  };
}

std::string format_svg(const PhaseTable& table, const SweepConfig& config) {
  require_rows(table);
  constexpr double kWidth = 1200, kHeight = 900;
  constexpr double kPanelW = 600, kPanelH = 420, kTop = 60;
  constexpr double kMarginL = 70, kMarginR = 20, kMarginT = 30, kMarginB = 50;
  constexpr double kPi = std::numbers::pi;

  double g_lo = table.front().g, g_hi = table.back().g;
  if (g_hi <= g_lo) {
    g_lo -= 0.5;
    g_hi += 0.5;
  }

  struct Series {
    const char* name;
    const char* dash;  // empty: solid
    double LevelEntry::*field;
  };
  const Series series[] = {
      {"composite system", "", &LevelEntry::gamma_composite},
      {"subsystem I", "10,5", &LevelEntry::gamma_I},
      {"subsystem II", "10,4,2,4", &LevelEntry::gamma_II},
      {"sum of subsystems", "2,4", &LevelEntry::gamma_sum},
  };
  const char* colors[] = {"#000000", "#1f5fbf", "#bf3f1f", "#2f8f2f"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1200\" height=\"900\" viewBox=\"0 0 "
     << kWidth << " " << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"900\" fill=\"#ffffff\"/>\n"
     << "<text x=\"600\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">Berry phases vs g at theta = "
     << number(config.theta) << " (" << to_string(config.coupling_form) << ")</text>\n";

  // Legend along the top.
  for (int i = 0; i < 4; ++i) {
    const double x = 150 + 250 * i;
    os << "<line x1=\"" << coord(x) << "\" y1=\"45\" x2=\"" << coord(x + 40)
       << "\" y2=\"45\" stroke=\"" << colors[i] << "\" stroke-width=\"2\"";
    if (*series[i].dash) os << " stroke-dasharray=\"" << series[i].dash << "\"";
    os << "/>\n<text x=\"" << coord(x + 48) << "\" y=\"50\" font-family=\"sans-serif\" "
       << "font-size=\"13\">" << series[i].name << "</text>\n";
  }

  for (int m = 0; m < 4; ++m) {
    const double ox = (m % 2) * kPanelW, oy = kTop + (m / 2) * kPanelH;
    const double x0 = ox + kMarginL, x1 = ox + kPanelW - kMarginR;
    const double y0 = oy + kMarginT, y1 = oy + kPanelH - kMarginB;
    auto px = [&](double g) { return x0 + (g - g_lo) / (g_hi - g_lo) * (x1 - x0); };
    auto py = [&](double phase) { return y1 - (phase + kPi) / (2 * kPi) * (y1 - y0); };

    os << "<g id=\"panel-m" << m + 1 << "\">\n"
       << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y0) << "\" width=\"" << coord(x1 - x0)
       << "\" height=\"" << coord(y1 - y0) << "\" fill=\"none\" stroke=\"#888888\"/>\n"
       << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(y0 - 8)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">m = " << m + 1
       << "</text>\n"
       << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(y1 + 36)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">g</text>\n";
    const double ticks[] = {-kPi, 0.0, kPi};
    const char* tick_labels[] = {"-pi", "0", "pi"};
    for (int t = 0; t < 3; ++t) {
      os << "<text x=\"" << coord(x0 - 8) << "\" y=\"" << coord(py(ticks[t]) + 4)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
         << tick_labels[t] << "</text>\n";
    }
    os << "<text x=\"" << coord(x0) << "\" y=\"" << coord(y1 + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << number(g_lo)
       << "</text>\n<text x=\"" << coord(x1) << "\" y=\"" << coord(y1 + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << number(g_hi)
       << "</text>\n";

    for (int i = 0; i < 4; ++i) {
      os << "<polyline class=\"series\" data-series=\"" << series[i].name
         << "\" fill=\"none\" stroke=\"" << colors[i] << "\" stroke-width=\"1.5\"";
      if (*series[i].dash) os << " stroke-dasharray=\"" << series[i].dash << "\"";
      os << " points=\"";
      bool first = true;
      for (const PhaseRow& row : table) {
        const double value = row.levels[m].*series[i].field;
        if (std::isnan(value)) continue;
        if (!first) os << ' ';
        os << coord(px(row.g)) << ',' << coord(py(value));
        first = false;
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_csv(const PhaseTable& table, const std::filesystem::path& path) {
  write_file(path, format_csv(table));
}

void emit_json(const PhaseTable& table, const SweepConfig& config,
               const std::filesystem::path& path) {
  write_file(path, table_to_json(table, config).dump(2) + "\n");
}

void emit_svg(const PhaseTable& table, const SweepConfig& config,
              const std::filesystem::path& path) {
  write_file(path, format_svg(table, config));
}

}  // namespace geophase
