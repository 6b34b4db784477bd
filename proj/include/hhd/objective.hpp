#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "hhd/constraints.hpp"

namespace hhd {

/// Scattered vector samples u_i at points x_i of a periodic box.
struct MeasurementSet {
  Domain domain;
  std::vector<Vec3> points;
  std::vector<Vec3> values;

  std::size_t size() const { return points.size(); }
  /// Throws std::invalid_argument unless sizes match, P >= 1 and every
  /// coordinate is finite.
  void validate() const;
};

/// Tikhonov weights and fractional Sobolev orders for both components.
struct RegularizationParams {
  double eps_div = 1e-4;
  double eps_curl = 1e-4;
  double k_div = 1.5;
  double k_curl = 1.5;

  /// Throws std::invalid_argument for negative weights or orders.
  void validate() const;
  /// Orders not exceeding n/2 lose the Sobolev embedding into continuous
  /// functions; reported, not rejected.
  std::vector<std::string> admissibility_warnings(int dim) const;
};

/// (1/P) sum |div(x_i) + curl(x_i) - u_i|^2 + eps_d |div|^2_{H^k_d} + eps_c |curl|^2_{H^k_c}
double objective(const CoefficientSet& div, const CoefficientSet& curl, const MeasurementSet& m,
                 const RegularizationParams& r);

/// Gradient with respect to the conjugated coefficients, scaled by 2, for
/// every member of each set (unconstrained complex coefficient space).
struct ComplexGradient {
  std::vector<SpectralTerm> div;
  std::vector<SpectralTerm> curl;
};

ComplexGradient complex_gradient(const CoefficientSet& div, const CoefficientSet& curl,
                                 const MeasurementSet& m, const RegularizationParams& r);

struct ReducedGradient {
  Eigen::VectorXd div;
  Eigen::VectorXd curl;
};

/// Exact gradient of objective() in the reduced coordinates of both layouts,
/// obtained by projecting complex_gradient() onto the subspace bases.
ReducedGradient reduced_gradient(const CoefficientSet& div, const CoefficientSet& curl,
                                 const MeasurementSet& m, const RegularizationParams& r);
ReducedGradient reduced_gradient(const Eigen::VectorXd& theta_div, const Eigen::VectorXd& theta_curl,
                                 const LayoutPtr& div_layout, const LayoutPtr& curl_layout,
                                 const MeasurementSet& m, const RegularizationParams& r);

/// Per-slot weight w such that eps |xi|^2_{H^k} = sum_slot w theta_slot^2.
Eigen::VectorXd regularization_diagonal(const CoefficientLayout& layout, double eps, double k);

/// Real design matrix mapping the concatenated reduced vector
/// [theta_div; theta_curl] to the stacked field values at the sample points.
/// Row n i + c holds component c of point i.
Eigen::MatrixXd design_matrix(const CoefficientLayout& div, const CoefficientLayout& curl,
                              const MeasurementSet& m);

/// Sample values stacked in the row order of design_matrix().
Eigen::VectorXd stacked_values(const MeasurementSet& m);

}  // namespace hhd
