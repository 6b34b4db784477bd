#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "hhd/hhd.hpp"

namespace hhd::test {

inline constexpr double kPi = std::numbers::pi;

inline Domain square(double side, int dim = 2) {
  return Domain(std::vector<double>(static_cast<std::size_t>(dim), side));
}

inline Eigen::VectorXd random_vector(std::mt19937_64& gen, Eigen::Index size, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(size);
  for (auto& x : v) x = normal(gen);
  return v;
}

inline CoefficientSet random_coefficients(std::mt19937_64& gen, ConstraintKind kind, const Domain& dom,
                                          const IndexSet& indices, double scale = 1.0) {
  const auto layout = make_layout(kind, dom, indices);
  return CoefficientSet(layout, random_vector(gen, layout->size(), scale));
}

inline MeasurementSet random_measurements(std::mt19937_64& gen, const Domain& dom, std::size_t count) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  MeasurementSet m{dom, {}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    Vec3 x = Vec3::Zero(), u = Vec3::Zero();
    for (int c = 0; c < dom.dim(); ++c) {
      x[c] = unit(gen) * dom.length(c);
      u[c] = normal(gen);
    }
    m.points.push_back(x);
    m.values.push_back(u);
  }
  return m;
}

/// Samples of div + curl at random points.
inline MeasurementSet sample_coefficients(std::mt19937_64& gen, const CoefficientSet& div,
                                          const CoefficientSet& curl, std::size_t count) {
  MeasurementSet m = random_measurements(gen, div.domain(), count);
  for (std::size_t i = 0; i < count; ++i) m.values[i] = div.evaluate(m.points[i]) + curl.evaluate(m.points[i]);
  return m;
}

inline double max_rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale > 0.0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}

}  // namespace hhd::test
