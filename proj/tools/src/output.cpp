#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "scb/format.hpp"

namespace scb::cli {

namespace {

std::string csv_cell(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_g17(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

nlohmann::ordered_json json_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  out << "# scb-" << table.kind << " v" << table.version << '\n';
  if (table.rows.empty()) return;
  const Row& first = table.rows.front();
  for (std::size_t i = 0; i < first.size(); ++i) out << (i ? "," : "") << first[i].name;
  out << '\n';
  for (const Row& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i].value);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["schema"] = "scb-" + table.kind;
  doc["version"] = table.version;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const Row& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const Field& f : row) obj[f.name] = json_value(f.value);
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output.dir", "cannot create " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

std::vector<std::filesystem::path> write_table(const std::filesystem::path& dir, const std::string& stem,
                                               const Table& table, OutputFormat format) {
  ensure_directory(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& ext) {
    const auto path = dir / (stem + ext);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output.dir", "cannot write " + path.string());
    written.push_back(path);
    return f;
  };
  if (format != OutputFormat::kJson) {
    std::ofstream f = open(".csv");
    write_csv(f, table);
  }
  if (format != OutputFormat::kCsv) {
    std::ofstream f = open(".json");
    write_json(f, table);
  }
  return written;
}

void emit_table(std::ostream& out, const Table& table, OutputFormat format) {
  if (format != OutputFormat::kJson) write_csv(out, table);
  if (format != OutputFormat::kCsv) write_json(out, table);
}

void write_loglog_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double width = 720, height = 480;
  constexpr double left = 80, right = 180, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  auto usable = [](double x, double y) { return std::isfinite(x) && std::isfinite(y) && x > 0.0 && y > 0.0; };
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x_lo = std::min(x_lo, std::log10(s.x[i]));
      x_hi = std::max(x_hi, std::log10(s.x[i]));
      y_lo = std::min(y_lo, std::log10(s.y[i]));
      y_hi = std::max(y_hi, std::log10(s.y[i]));
    }
  }
  if (!(x_lo <= x_hi)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  x_lo = std::floor(x_lo), x_hi = std::max(std::ceil(x_hi), x_lo + 1.0);
  y_lo = std::floor(y_lo), y_hi = std::max(std::ceil(y_hi), y_lo + 1.0);
  auto px = [&](double x) { return left + (std::log10(x) - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + ph - (std::log10(y) - y_lo) / (y_hi - y_lo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(title) << "</text>\n";

  out << "<g stroke=\"#dddddd\">\n";
  for (double d = x_lo; d <= x_hi + 0.5; d += 1.0) {
    const double x = left + (d - x_lo) / (x_hi - x_lo) * pw;
    out << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(x) << "\" y2=\""
        << fixed(top + ph) << "\"/>\n";
  }
  for (double d = y_lo; d <= y_hi + 0.5; d += 1.0) {
    const double y = top + ph - (d - y_lo) / (y_hi - y_lo) * ph;
    out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(left + pw) << "\" y2=\""
        << fixed(y) << "\"/>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
      << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x_lo; d <= x_hi + 0.5; d += 1.0) {
    const double x = left + (d - x_lo) / (x_hi - x_lo) * pw;
    out << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">10<tspan dy=\"-5\" font-size=\"9\">"
        << static_cast<int>(d) << "</tspan></text>\n";
  }
  for (double d = y_lo; d <= y_hi + 0.5; d += 1.0) {
    const double y = top + ph - (d - y_lo) / (y_hi - y_lo) * ph;
    out << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">10<tspan dy=\"-5\" font-size=\"9\">"
        << static_cast<int>(d) << "</tspan></text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(height - 16) << "\" text-anchor=\"middle\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << fixed(top + ph / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

  double legend_y = top + 10;
  for (const PlotSeries& s : series) {
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        out << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i])) << "\" r=\"3\" fill=\""
            << s.color << "\"/>\n";
      }
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        out << (first ? "" : " ") << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i]));
        first = false;
      }
      out << "\"/>\n";
    }
    const double lx = left + pw + 14;
    if (s.markers) {
      out << "<circle cx=\"" << fixed(lx + 8) << "\" cy=\"" << fixed(legend_y - 4) << "\" r=\"3\" fill=\"" << s.color
          << "\"/>\n";
    } else {
      out << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(legend_y - 4) << "\" x2=\"" << fixed(lx + 16)
          << "\" y2=\"" << fixed(legend_y - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
    }
    out << "<text x=\"" << fixed(lx + 22) << "\" y=\"" << fixed(legend_y) << "\">" << escape_xml(s.label)
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

}  // namespace scb::cli
