#pragma once

#include <functional>
#include <vector>

#include "hhd/constraints.hpp"

namespace hhd {

/// Cell-centred uniform grid, `resolution` points per direction:
/// x_i = (i + 1/2) L / N.
class UniformGrid {
public:
  /// Throws std::invalid_argument for resolution < 2.
  UniformGrid(Domain dom, int resolution);

  const Domain& domain() const { return dom_; }
  int resolution() const { return n_; }
  std::size_t size() const { return size_; }
  double cell_volume() const;

  /// Point number `flat`; the first coordinate varies slowest.
  Vec3 point(std::size_t flat) const;
  std::vector<Vec3> points() const;

private:
  Domain dom_;
  int n_;
  std::size_t size_;
};

using VectorField = std::function<Vec3(const Vec3&)>;

/// |exact(x) - approx(x)|.
double pointwise_error(const VectorField& exact, const VectorField& approx, const Vec3& x);

/// Pointwise errors on every grid point, in grid order.
std::vector<double> error_samples(const UniformGrid& grid, const VectorField& exact, const VectorField& approx);

double linf_error(const std::vector<double>& errors);
/// Midpoint-rule (sum e^2 dv)^{1/2} over the box (not normalized by volume).
double l2_error(const std::vector<double>& errors, const UniformGrid& grid);

/// Midpoint-rule (1/|D|) sum |f|^2 dv.
double mean_square(const UniformGrid& grid, const VectorField& f);

struct DecayFit {
  double exponent = 0.0;  ///< slope of ln|ln|xi|| against ln|alpha|
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS residual of the linear fit
  int shells = 0;
};

/// Least-squares fit over shell maxima of |xi_alpha| grouped by |alpha|.
/// Throws std::invalid_argument with fewer than five usable shells or when
/// the shell values carry no decay (zero spread).
DecayFit estimate_decay(const CoefficientSet& coeffs);
DecayFit estimate_decay(std::span<const SpectralTerm> terms);

}  // namespace hhd
