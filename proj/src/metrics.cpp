#include "hhd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hhd {

UniformGrid::UniformGrid(Domain dom, int resolution) : dom_(std::move(dom)), n_(resolution) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  size_ = 1;
  for (int i = 0; i < dom_.dim(); ++i) size_ *= static_cast<std::size_t>(n_);
}

double UniformGrid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dom_.dim(); ++i) v *= dom_.length(i) / n_;
  return v;
}

Vec3 UniformGrid::point(std::size_t flat) const {
  Vec3 x = Vec3::Zero();
  for (int c = dom_.dim() - 1; c >= 0; --c) {
    const auto i = static_cast<double>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
    x[c] = (i + 0.5) * dom_.length(c) / n_;
  }
  return x;
}

std::vector<Vec3> UniformGrid::points() const {
  std::vector<Vec3> pts(size_);
  for (std::size_t i = 0; i < size_; ++i) pts[i] = point(i);
  return pts;
}

double pointwise_error(const VectorField& exact, const VectorField& approx, const Vec3& x) {
  return (exact(x) - approx(x)).norm();
}

std::vector<double> error_samples(const UniformGrid& grid, const VectorField& exact, const VectorField& approx) {
  std::vector<double> e(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) e[i] = pointwise_error(exact, approx, grid.point(i));
  return e;
}

double linf_error(const std::vector<double>& errors) {
  double m = 0.0;
  for (double e : errors) m = std::max(m, e);
  return m;
}

double l2_error(const std::vector<double>& errors, const UniformGrid& grid) {
  double s = 0.0;
  for (double e : errors) s += e * e;
  return std::sqrt(s * grid.cell_volume());
}

double mean_square(const UniformGrid& grid, const VectorField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += f(grid.point(i)).squaredNorm();
  return s / static_cast<double>(grid.size());
}

DecayFit estimate_decay(std::span<const SpectralTerm> terms) {
  // shell radius -> largest coefficient magnitude
  std::map<long, double> shells;
  for (const auto& t : terms) {
    if (t.alpha.is_zero()) continue;
    long key = 0;
    for (int i = 0; i < 3; ++i) key += static_cast<long>(t.alpha[i]) * t.alpha[i];
    auto& v = shells[key];
    v = std::max(v, t.coeff.norm());
  }
  std::vector<double> xs, ys;
  for (const auto& [r2, mag] : shells) {
    if (!(mag > 0.0) || mag == 1.0 || !std::isfinite(mag)) continue;
    xs.push_back(0.5 * std::log(static_cast<double>(r2)));
    ys.push_back(std::log(std::abs(std::log(mag))));
  }
  const auto count = static_cast<int>(xs.size());
  if (count < 5) {
    throw std::invalid_argument("decay fit needs at least 5 shells with nonzero energy, got " +
                                std::to_string(count));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < count; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < count; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (syy <= 1e-24 * count * (1.0 + my * my)) {
    throw std::invalid_argument("decay fit is degenerate: shell magnitudes do not vary");
  }
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (int i = 0; i < count; ++i) {
    const double d = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / count);
  fit.shells = count;
  return fit;
}

DecayFit estimate_decay(const CoefficientSet& coeffs) {
  const auto terms = coeffs.materialize();
  return estimate_decay(terms);
}

}  // namespace hhd
