#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhd/constraints.hpp"
#include "hhd/objective.hpp"

namespace hhd {

/// Points and vectors read from a CSV with header x1,..,xn,u1,..,un
/// (n = 2 or 3, inferred from the header).
struct SampleTable {
  int dim = 0;
  std::vector<Vec3> points;
  std::vector<Vec3> values;
  /// Optional trailing scalar column (grid files may carry `e`).
  std::vector<double> extra;
  std::string extra_name;
};

/// Throws std::runtime_error with "line N: ..." for malformed rows, wrong
/// field counts, or non-finite numbers.
SampleTable read_sample_csv(std::istream& in);
SampleTable read_sample_csv(const std::string& path);

MeasurementSet read_measurements(const std::string& path, const Domain& dom);
MeasurementSet to_measurements(SampleTable table, const Domain& dom);

/// Writes x1..xn,u1..un[,extra_name] with 17 significant digits.
void write_sample_csv(std::ostream& out, int dim, const std::vector<Vec3>& points, const std::vector<Vec3>& values,
                      const std::vector<double>* extra = nullptr, const std::string& extra_name = "e");
void write_sample_csv(const std::string& path, int dim, const std::vector<Vec3>& points,
                      const std::vector<Vec3>& values, const std::vector<double>* extra = nullptr,
                      const std::string& extra_name = "e");
void write_measurements(const std::string& path, const MeasurementSet& m);

/// CSV x1..xn,<name> for a scalar field on grid points.
void write_scalar_csv(const std::string& path, int dim, const std::vector<Vec3>& points,
                      const std::vector<double>& values, const std::string& name);

/// Scalar image in display order: row 0 is the top row.
struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<double> pixels;  ///< row-major
};

/// Reorders 2D grid samples (first coordinate slowest, as produced by
/// UniformGrid) so that columns follow x1 and row 0 is the max-x2 edge.
Image grid_to_image(const std::vector<double>& samples, int resolution);

/// Binary PGM (P5, 8 bit) with linear scaling from [vmin, vmax] to [0, 255];
/// the bounds default to the image range. Throws std::invalid_argument for
/// an empty image or non-finite pixels.
void write_heatmap(std::ostream& out, const Image& image, std::optional<double> vmin = std::nullopt,
                   std::optional<double> vmax = std::nullopt);
/// Also writes `<path>.scale` holding "min max".
void write_heatmap(const std::string& path, const Image& image, std::optional<double> vmin = std::nullopt,
                   std::optional<double> vmax = std::nullopt);

/// Flat `key = value` lines; `#` starts a comment. Throws std::runtime_error
/// naming the line for anything else.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// d1 u2 - d2 u1 of a 2D field at each point, computed from its Fourier
/// coefficients.
std::vector<double> vorticity(const CoefficientSet& coeffs, const std::vector<Vec3>& points);

}  // namespace hhd
