#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace scb::cli {

using Value = std::variant<double, std::int64_t, std::string>;

/// One named column in a report row; column order is preserved on output.
struct Field {
  std::string name;
  Value value;
};
using Row = std::vector<Field>;

/// A versioned table: CSV carries "# scb-<kind> v<version>" on its first line.
struct Table {
  std::string kind;
  int version = 1;
  std::vector<Row> rows;
};

/// Header plus rows; doubles with 17 significant digits.
void write_csv(std::ostream& out, const Table& table);

/// {"schema": "scb-<kind>", "version": v, "rows": [...]} with shortest
/// round-trip doubles; non-finite values become null.
void write_json(std::ostream& out, const Table& table);

/// Writes <stem>.csv and/or <stem>.json into dir according to format.
/// Returns the paths written.
std::vector<std::filesystem::path> write_table(const std::filesystem::path& dir, const std::string& stem,
                                               const Table& table, OutputFormat format);

/// Writes the table to a stream in the chosen format(s).
void emit_table(std::ostream& out, const Table& table, OutputFormat format);

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x, y;
  bool markers = true;
};

/// Static log-log SVG: axes with decade ticks, point series and line series.
/// Points with non-positive or non-finite coordinates are skipped.
void write_loglog_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series);

/// Creates the directory (and parents) or throws ConfigError on output.dir.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace scb::cli
