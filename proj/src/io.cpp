#include "hhd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hhd/coefficient_io.hpp"

namespace hhd {

namespace {

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& raw, int line) {
  const std::string tok = trim(raw);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail_line(line, "cannot parse number '" + tok + "'");
  }
  if (!std::isfinite(v)) fail_line(line, "non-finite value '" + tok + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

}  // namespace

SampleTable read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("line 1: missing header");
  std::vector<std::string> header = split_csv(line);
  for (auto& h : header) h = trim(h);

  SampleTable t;
  for (int n : {3, 2}) {
    bool ok = static_cast<int>(header.size()) >= 2 * n;
    for (int i = 0; ok && i < n; ++i) {
      ok = header[i] == "x" + std::to_string(i + 1) && header[n + i] == "u" + std::to_string(i + 1);
    }
    if (ok) {
      t.dim = n;
      break;
    }
  }
  if (t.dim == 0) throw std::runtime_error("line 1: header must start with x1,..,xn,u1,..,un (n = 2 or 3)");
  const auto width = header.size();
  if (width > static_cast<std::size_t>(2 * t.dim + 1)) throw std::runtime_error("line 1: too many columns");
  if (width == static_cast<std::size_t>(2 * t.dim + 1)) t.extra_name = header.back();

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != width) {
      fail_line(line_no, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    }
    Vec3 x = Vec3::Zero(), u = Vec3::Zero();
    for (int i = 0; i < t.dim; ++i) {
      x[i] = parse_field(fields[i], line_no);
      u[i] = parse_field(fields[t.dim + i], line_no);
    }
    t.points.push_back(x);
    t.values.push_back(u);
    if (!t.extra_name.empty()) t.extra.push_back(parse_field(fields.back(), line_no));
  }
  return t;
}

SampleTable read_sample_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return read_sample_csv(f);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

MeasurementSet to_measurements(SampleTable table, const Domain& dom) {
  if (table.dim != dom.dim()) {
    throw std::invalid_argument("measurement file is " + std::to_string(table.dim) + "D but the domain is " +
                                std::to_string(dom.dim()) + "D");
  }
  MeasurementSet m{dom, std::move(table.points), std::move(table.values)};
  m.validate();
  return m;
}

MeasurementSet read_measurements(const std::string& path, const Domain& dom) {
  return to_measurements(read_sample_csv(path), dom);
}

void write_sample_csv(std::ostream& out, int dim, const std::vector<Vec3>& points, const std::vector<Vec3>& values,
                      const std::vector<double>* extra, const std::string& extra_name) {
  if (points.size() != values.size() || (extra && extra->size() != points.size())) {
    throw std::invalid_argument("column lengths differ");
  }
  for (int i = 0; i < dim; ++i) out << (i ? "," : "") << 'x' << i + 1;
  for (int i = 0; i < dim; ++i) out << ",u" << i + 1;
  if (extra) out << ',' << extra_name;
  out << '\n';
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (int i = 0; i < dim; ++i) out << (i ? "," : "") << format_double(points[r][i]);
    for (int i = 0; i < dim; ++i) out << ',' << format_double(values[r][i]);
    if (extra) out << ',' << format_double((*extra)[r]);
    out << '\n';
  }
}

void write_sample_csv(const std::string& path, int dim, const std::vector<Vec3>& points,
                      const std::vector<Vec3>& values, const std::vector<double>* extra,
                      const std::string& extra_name) {
  auto f = open_out(path);
  write_sample_csv(f, dim, points, values, extra, extra_name);
}

void write_measurements(const std::string& path, const MeasurementSet& m) {
  write_sample_csv(path, m.domain.dim(), m.points, m.values);
}

void write_scalar_csv(const std::string& path, int dim, const std::vector<Vec3>& points,
                      const std::vector<double>& values, const std::string& name) {
  if (points.size() != values.size()) throw std::invalid_argument("column lengths differ");
  auto f = open_out(path);
  for (int i = 0; i < dim; ++i) f << (i ? "," : "") << 'x' << i + 1;
  f << ',' << name << '\n';
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (int i = 0; i < dim; ++i) f << (i ? "," : "") << format_double(points[r][i]);
    f << ',' << format_double(values[r]) << '\n';
  }
}

Image grid_to_image(const std::vector<double>& samples, int resolution) {
  if (samples.size() != static_cast<std::size_t>(resolution) * resolution) {
    throw std::invalid_argument("sample count does not match a square 2D grid");
  }
  Image img{resolution, resolution, std::vector<double>(samples.size())};
  for (int i1 = 0; i1 < resolution; ++i1) {
    for (int i2 = 0; i2 < resolution; ++i2) {
      const int row = resolution - 1 - i2;
      img.pixels[static_cast<std::size_t>(row) * resolution + i1] =
          samples[static_cast<std::size_t>(i1) * resolution + i2];
    }
  }
  return img;
}

namespace {

std::pair<double, double> heatmap_range(const Image& image, std::optional<double> vmin, std::optional<double> vmax) {
  if (image.rows <= 0 || image.cols <= 0 || image.pixels.empty()) {
    throw std::invalid_argument("cannot write an empty heatmap");
  }
  if (image.pixels.size() != static_cast<std::size_t>(image.rows) * image.cols) {
    throw std::invalid_argument("heatmap pixel count does not match its shape");
  }
  for (double v : image.pixels) {
    if (!std::isfinite(v)) throw std::invalid_argument("heatmap contains non-finite values");
  }
  const auto [lo, hi] = std::minmax_element(image.pixels.begin(), image.pixels.end());
  return {vmin.value_or(*lo), vmax.value_or(*hi)};
}

}  // namespace

void write_heatmap(std::ostream& out, const Image& image, std::optional<double> vmin, std::optional<double> vmax) {
  const auto [lo, hi] = heatmap_range(image, vmin, vmax);
  out << "P5\n" << image.cols << ' ' << image.rows << "\n255\n";
  const double span = hi - lo;
  for (double v : image.pixels) {
    double level = span > 0.0 ? 255.0 * (v - lo) / span : 0.0;
    level = std::clamp(std::round(level), 0.0, 255.0);
    out.put(static_cast<char>(static_cast<unsigned char>(level)));
  }
}

void write_heatmap(const std::string& path, const Image& image, std::optional<double> vmin,
                   std::optional<double> vmax) {
  const auto [lo, hi] = heatmap_range(image, vmin, vmax);
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_heatmap(f, image, lo, hi);
  }
  auto scale = open_out(path + ".scale");
  scale << format_double(lo) << ' ' << format_double(hi) << '\n';
}

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_line(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_line(line_no, "empty key");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path);
  try {
    return parse_config(f);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<double> vorticity(const CoefficientSet& coeffs, const std::vector<Vec3>& points) {
  if (coeffs.domain().dim() != 2) throw std::invalid_argument("vorticity grids are 2D only");
  // curl_spectral returns 2 pi j (xi x alpha-hat); the vorticity is its negative
  const auto spectrum = curl_spectral(coeffs);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    Complex w = 0.0;
    for (const auto& [alpha, c] : spectrum) w -= c[2] * basis_eval(x, alpha, coeffs.domain());
    out.push_back(w.real());
  }
  return out;
}

}  // namespace hhd
