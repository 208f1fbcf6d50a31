#include "ringlattice/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ringlattice/error.hpp"

namespace ringlattice::app {

namespace {

using angular::cplx;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += parts[i];
  }
  return s;
}

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
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

const SchemaInfo& schema_info(Schema schema) {
  static const std::vector<SchemaInfo> table = {
      {Schema::spectrum, "spectrum", 1, {"m", "re", "im", "prob"}, {"hbar", "1", "1", "1"}},
      {Schema::profile, "profile", 1, {"phi", "re", "im", "prob"}, {"rad", "rad^-1/2", "rad^-1/2", "rad^-1"}},
      {Schema::bands, "bands", 1, {"q", "band", "energy"}, {"hbar", "1", "hbar xi"}},
      {Schema::radial_trace, "radial_trace", 1, {"lambda_t", "mean_rho"}, {"1", "a"}},
      {Schema::field_slice, "field_slice", 1, {"phi", "prob"}, {"rad", "a^-2"}},
      {Schema::potential_map, "potential_map", 1, {"x", "y", "potential"}, {"a", "a", "hbar Omega"}},
  };
  return table[static_cast<std::size_t>(schema)];
}

std::string header_line(Schema schema) { return join(schema_info(schema).columns); }

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

CsvBuilder::CsvBuilder(Schema schema)
    : schema_(schema), width_(schema_info(schema).columns.size()), text_(header_line(schema) + "\n") {}

void CsvBuilder::row(std::initializer_list<double> values) {
  if (values.size() != width_) fail(ErrorKind::domain, "row width does not match the schema");
  bool first = true;
  for (double v : values) {
    if (!first) text_ += ',';
    text_ += format_number(v);
    first = false;
  }
  text_ += '\n';
  ++rows_;
}

CsvTable read_csv(const std::filesystem::path& path, Schema expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read input file '" + path.string() + "'");
  const SchemaInfo& info = schema_info(expected);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::schema, "input file '" + path.string() + "' is empty; expected " + info.name +
                                " schema v" + std::to_string(info.version));
  if (line != header_line(expected)) {
    std::string found = "unknown";
    for (int s = 0; s <= static_cast<int>(Schema::potential_map); ++s)
      if (line == header_line(static_cast<Schema>(s))) {
        const auto& other = schema_info(static_cast<Schema>(s));
        found = std::string(other.name) + " v" + std::to_string(other.version);
      }
    fail(ErrorKind::schema, "schema mismatch in '" + path.string() + "': expected " + info.name + " v" +
                                std::to_string(info.version) + " header '" + header_line(expected) +
                                "', found '" + line + "' (" + found + ")");
  }
  CsvTable table{expected, {}};
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != info.columns.size())
      fail(ErrorKind::schema, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(info.columns.size()) + " columns");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || p != c.data() + c.size())
        fail(ErrorKind::schema, path.string() + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrorKind::io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::io, "cannot move output into place at '" + path.string() + "'");
  }
}

CsvBuilder spectrum_csv(const angular::AngularSpectrum& spec) {
  CsvBuilder b(Schema::spectrum);
  for (int m = -spec.m_max(); m <= spec.m_max(); ++m) {
    const cplx a = spec[m];
    b.row({double(m), a.real(), a.imag(), std::norm(a)});
  }
  return b;
}

CsvBuilder profile_csv(const angular::AngularProfile& profile) {
  CsvBuilder b(Schema::profile);
  for (int j = 0; j < profile.size(); ++j) {
    const cplx v = profile[j];
    b.row({profile.phi(j), v.real(), v.imag(), std::norm(v)});
  }
  return b;
}

CsvBuilder slice_csv(const angular::AngularProfile& profile) {
  CsvBuilder b(Schema::field_slice);
  for (int j = 0; j < profile.size(); ++j) b.row({profile.phi(j), std::norm(profile[j])});
  return b;
}

angular::AngularSpectrum spectrum_from_table(const CsvTable& table) {
  const int n = static_cast<int>(table.rows.size());
  if (n == 0 || n % 2 == 0) fail(ErrorKind::schema, "spectrum needs an odd number of rows, m = -M..M");
  const int m_max = n / 2;
  angular::AngularSpectrum spec(m_max);
  for (int i = 0; i < n; ++i) {
    const auto& r = table.rows[static_cast<std::size_t>(i)];
    if (r[0] != double(i - m_max)) fail(ErrorKind::schema, "spectrum rows must list m = -M..M in order");
    spec[i - m_max] = cplx(r[1], r[2]);
  }
  return spec;
}

angular::AngularProfile profile_from_table(const CsvTable& table) {
  const int n = static_cast<int>(table.rows.size());
  if (n < 2) fail(ErrorKind::schema, "profile needs at least two rows");
  angular::AngularProfile profile(n);
  for (int j = 0; j < n; ++j) {
    const auto& r = table.rows[static_cast<std::size_t>(j)];
    if (std::abs(r[0] - profile.phi(j)) > 1e-12)
      fail(ErrorKind::schema, "profile rows must sample phi_j = 2 pi j / n");
    profile[j] = cplx(r[1], r[2]);
  }
  return profile;
}

std::string svg_lines(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  const double w = 640, h = 400, ml = 70, mr = 20, mt = 40, mb = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\"" << h - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << escape(x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << h / 2 << ")\">" << escape(y_label) << "</text>\n";
  o << "<text x=\"" << ml << "\" y=\"" << h - mb + 16 << "\" font-size=\"11\">" << fixed(x0) << "</text>\n";
  o << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 16 << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(x1)
    << "</text>\n";
  o << "<text x=\"" << ml - 4 << "\" y=\"" << h - mb << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(y0, 4)
    << "</text>\n";
  o << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(y1, 4)
    << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    o << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << colors[k % 5] << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.y[i])) o << fixed(px(s.x[i]), 2) << ',' << fixed(py(s.y[i]), 2) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << w - mr - 4 << "\" y=\"" << mt + 16 + 14 * k << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
      << colors[k % 5] << "\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::string& title, int n, const std::vector<double>& values) {
  const double size = 480, margin = 40;
  const double cell = size / n;
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) hi = lo + 1.0;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
    << size + 2 * margin << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << size / 2 + margin << "\" y=\"26\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
    << "</text>\n";
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double v = values[static_cast<std::size_t>(iy) * n + ix];
      if (!std::isfinite(v)) continue;
      int g = static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo)));
      // y grows upwards in the data, downwards in SVG
      o << "<rect x=\"" << fixed(margin + ix * cell, 2) << "\" y=\"" << fixed(margin + (n - 1 - iy) * cell, 2)
        << "\" width=\"" << fixed(cell + 0.05, 2) << "\" height=\"" << fixed(cell + 0.05, 2) << "\" fill=\"rgb("
        << g << ',' << g << ",255)\"/>\n";
    }
  o << "</svg>\n";
  return o.str();
}

}  // namespace ringlattice::app
