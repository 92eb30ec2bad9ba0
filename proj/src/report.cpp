#include "gcnsel/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gcnsel {
namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b"};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows, bool with_status) {
  out << kResultHeader << (with_status ? ",status" : "") << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.dataset) << ',' << policy_name(r.policy) << ',' << format_number(r.rate)
        << ',' << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ','
        << format_number(r.accuracy) << ',' << format_number(r.loss) << ','
        << format_number(r.stop_best) << ',' << format_number(r.stop_halt);
    if (with_status) out << ',' << csv_field(r.status);
    out << '\n';
  }
}

void write_spectrum_csv(std::ostream& out,
                        const std::vector<std::pair<std::string, SpectrumStats>>& rows) {
  out << "dataset,min,median,avg,std,max\n";
  for (const auto& [name, s] : rows) {
    out << csv_field(name) << ',' << format_number(s.min) << ',' << format_number(s.median)
        << ',' << format_number(s.avg) << ',' << format_number(s.std) << ','
        << format_number(s.max) << '\n';
  }
}

void write_centrality_csv(std::ostream& out, const CentralityScores& scores) {
  out << "node,score\n";
  for (std::size_t i = 0; i < scores.scores.size(); ++i) {
    out << i << ',' << format_number(scores.scores[i]) << '\n';
  }
}

std::vector<double> parse_rate_range(std::string_view spec) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = spec.find(':', start);
    const std::string tok(spec.substr(start, pos == std::string_view::npos ? pos : pos - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) {
      throw std::invalid_argument("bad rate range '" + std::string(spec) + "' (expected A:B:STEP)");
    }
    parts.push_back(v);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) {
    throw std::invalid_argument("bad rate range '" + std::string(spec) + "' (expected A:B:STEP)");
  }
  const double a = parts[0];
  const double b = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || b < a || !(a > 0.0) || b > 1.0) {
    throw std::invalid_argument("rate range '" + std::string(spec) +
                                "' must satisfy 0 < A <= B <= 1 and STEP > 0");
  }
  std::vector<double> rates;
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) {
    // Round away accumulated binary noise such as 0.15000000000000002.
    rates.push_back(std::round((a + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return rates;
}

std::string render_sweep_svg(std::span<const ResultRow> rows, std::string_view title) {
  // policy name -> rate -> (sum, count)
  std::map<std::string, std::map<double, std::pair<double, int>>> series;
  for (const auto& r : rows) {
    if (r.status != "ok" || !r.seed || !std::isfinite(r.accuracy)) continue;
    auto& cell = series[std::string(policy_name(r.policy))][r.rate];
    cell.first += r.accuracy;
    cell.second += 1;
  }
  // Policies whose every cell failed still get a legend entry.
  for (const auto& r : rows) series.try_emplace(std::string(policy_name(r.policy)));

  double x_min = 1.0, x_max = 0.0, y_min = 1.0, y_max = 0.0;
  for (const auto& [name, points] : series) {
    for (const auto& [rate, acc] : points) {
      const double mean = acc.first / acc.second;
      x_min = std::min(x_min, rate);
      x_max = std::max(x_max, rate);
      y_min = std::min(y_min, mean);
      y_max = std::max(y_max, mean);
    }
  }
  if (x_min > x_max) x_min = 0.0, x_max = 1.0;
  if (x_max - x_min < 1e-9) x_min -= 0.05, x_max += 0.05;
  if (y_min > y_max) y_min = 0.0, y_max = 1.0;
  y_min = std::max(0.0, std::floor(y_min * 10.0 - 1e-9) / 10.0);
  y_max = std::min(1.0, std::ceil(y_max * 10.0 + 1e-9) / 10.0);
  if (y_max - y_min < 0.1) y_max = std::min(1.0, y_min + 0.1), y_min = y_max - 0.1;

  constexpr double kLeft = 80, kRight = 640, kTop = 60, kBottom = 520;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" font-family=\"sans-serif\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"360\" y=\"32\" text-anchor=\"middle\" font-size=\"18\">" << xml_escape(title)
      << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\"/>\n</g>\n";
  svg << "<g font-size=\"12\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double x = x_min + (x_max - x_min) * k / 5.0;
    const double y = y_min + (y_max - y_min) * k / 5.0;
    svg << "<line x1=\"" << fixed2(px(x)) << "\" y1=\"" << kBottom << "\" x2=\"" << fixed2(px(x))
        << "\" y2=\"" << kBottom + 6 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fixed2(px(x)) << "\" y=\"" << kBottom + 22
        << "\" text-anchor=\"middle\">" << format_number(std::round(x * 1e4) / 1e4) << "</text>\n"
        << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << fixed2(py(y)) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fixed2(py(y)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 10 << "\" y=\"" << fixed2(py(y) + 4)
        << "\" text-anchor=\"end\">" << format_number(std::round(y * 1e4) / 1e4) << "</text>\n";
  }
  svg << "</g>\n"
      << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"570\" text-anchor=\"middle\" "
         "font-size=\"14\">Labeling rate</text>\n"
      << "<text x=\"24\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 24 "
      << (kTop + kBottom) / 2 << ")\">Test accuracy</text>\n";

  // Series, then legend; std::map iterates policy names lexicographically.
  std::size_t index = 0;
  std::ostringstream legend;
  legend << "<g class=\"legend\" font-size=\"13\">\n";
  for (const auto& [name, points] : series) {
    const char* color = kPalette[index % std::size(kPalette)];
    svg << "<polyline class=\"series\" data-policy=\"" << xml_escape(name)
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& [rate, acc] : points) {
      svg << (first ? "" : " ") << fixed2(px(rate)) << ',' << fixed2(py(acc.first / acc.second));
      first = false;
    }
    svg << "\"/>\n";
    for (const auto& [rate, acc] : points) {
      svg << "<circle cx=\"" << fixed2(px(rate)) << "\" cy=\"" << fixed2(py(acc.first / acc.second))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 24.0 * static_cast<double>(index);
    legend << "<line x1=\"660\" y1=\"" << fixed2(ly) << "\" x2=\"690\" y2=\"" << fixed2(ly)
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"698\" y=\"" << fixed2(ly + 4) << "\">" << xml_escape(name) << "</text>\n";
    ++index;
  }
  legend << "</g>\n";
  svg << legend.str() << "</svg>\n";
  return svg.str();
}

}  // namespace gcnsel
