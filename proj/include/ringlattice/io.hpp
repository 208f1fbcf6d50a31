#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ringlattice/angular.hpp"

// Data files: CSV with fixed headers, 17 significant digits and '\n' line
// endings, written atomically. Column units live in the run manifest.

namespace ringlattice::app {

enum class Schema { spectrum, profile, bands, radial_trace, field_slice, potential_map };

struct SchemaInfo {
  Schema schema;
  const char* name;
  int version;
  std::vector<std::string> columns;
  std::vector<std::string> units;
};

const SchemaInfo& schema_info(Schema schema);
std::string header_line(Schema schema);

/// Decimal with 17 significant digits; integral values print without a point.
std::string format_number(double v);

class CsvBuilder {
 public:
  explicit CsvBuilder(Schema schema);

  void row(std::initializer_list<double> values);
  Schema schema() const noexcept { return schema_; }
  const std::string& text() const noexcept { return text_; }
  std::size_t rows() const noexcept { return rows_; }

 private:
  Schema schema_;
  std::size_t width_;
  std::string text_;
  std::size_t rows_ = 0;
};

struct CsvTable {
  Schema schema;
  std::vector<std::vector<double>> rows;
};

/// Reads a data file and checks that its header matches the expected schema.
CsvTable read_csv(const std::filesystem::path& path, Schema expected);

/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

CsvBuilder spectrum_csv(const angular::AngularSpectrum& spec);
CsvBuilder profile_csv(const angular::AngularProfile& profile);
CsvBuilder slice_csv(const angular::AngularProfile& profile);

/// Spectrum rows must list consecutive m centred on zero.
angular::AngularSpectrum spectrum_from_table(const CsvTable& table);
/// Profile rows must sample the uniform grid phi_j = 2 pi j / n.
angular::AngularProfile profile_from_table(const CsvTable& table);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_lines(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);
/// Row-major values on an n x n grid; NaN cells are left blank.
std::string svg_heatmap(const std::string& title, int n, const std::vector<double>& values);

}  // namespace ringlattice::app
