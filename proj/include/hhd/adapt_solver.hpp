#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hhd/constraints.hpp"
#include "hhd/objective.hpp"

namespace hhd {

struct SolverConfig {
  /// Stop when |grad F| <= grad_tol (1 + |grad F(0)|).
  double grad_tol = 1e-10;
  /// 0 selects 10 x (number of reduced unknowns).
  int max_inner_iters = 0;
  bool warm_start = true;

  void validate() const;
};

/// Pruning fractions and stopping thresholds of the adaptive loop.
struct OuterConfig {
  double eps_boundary_div = 0.5;
  double eps_boundary_curl = 0.5;
  double delta_div = 1e-3;
  double delta_curl = 1e-3;
  int total_it = 30;

  void validate() const;
};

struct InnerResult {
  Eigen::VectorXd theta;  // [theta_div; theta_curl]
  double objective = 0.0;
  double grad_norm = 0.0;
  double grad_norm_at_zero = 0.0;
  int iterations = 0;
};

class InnerSolveError : public std::runtime_error {
public:
  InnerSolveError(const std::string& what, InnerResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const InnerResult& best() const { return best_; }

private:
  InnerResult best_;
};

/// Minimizes the joint regularized least-squares objective over both reduced
/// vectors with column-scaled CGLS, starting from theta0. Throws
/// InnerSolveError (carrying the last iterate) if the gradient tolerance is
/// not met within the iteration cap.
InnerResult solve_inner(const LayoutPtr& div, const LayoutPtr& curl, const Eigen::VectorXd& theta0,
                        const MeasurementSet& m, const RegularizationParams& r, const SolverConfig& cfg);

struct DenseSolution {
  Eigen::VectorXd theta;
  bool rank_deficient = false;
};

/// Test oracle: assembles the normal equations column by column from
/// CoefficientSet::evaluate() and seminorm_sq(), then solves them with a
/// complete orthogonal decomposition (minimum-norm when singular).
DenseSolution solve_dense_oracle(const LayoutPtr& div, const LayoutPtr& curl, const MeasurementSet& m,
                                 const RegularizationParams& r);

/// Copies coefficients of indices present in both sets; new indices start at zero.
CoefficientSet transfer(const CoefficientSet& src, const LayoutPtr& target);

/// Ranks the boundary +/- pairs by energy and keeps the strongest until their
/// cumulative energy reaches (1 - fraction) of the boundary energy; the
/// remaining boundary pairs are dropped. Interior members and the zero index
/// are never removed. fraction == 0 removes nothing.
CoefficientSet prune_boundary(const CoefficientSet& coeffs, double fraction);

struct TraceEntry {
  int iter = 0;
  std::size_t n_div = 0;
  std::size_t n_curl = 0;
  double energy_div = 0.0;
  double energy_curl = 0.0;
  double bratio_div = 0.0;
  double bratio_curl = 0.0;
  double objective = 0.0;
  int inner_iters = 0;
};

struct DecompositionResult {
  CoefficientSet div;
  CoefficientSet curl;
  std::vector<TraceEntry> trace;
  bool converged = false;
  std::vector<std::string> warnings;
};

class DecompositionError : public std::runtime_error {
public:
  DecompositionError(const std::string& what, std::vector<TraceEntry> partial)
      : std::runtime_error(what), trace_(std::move(partial)) {}
  const std::vector<TraceEntry>& trace() const { return trace_; }

private:
  std::vector<TraceEntry> trace_;
};

/// Adaptive grow / solve / prune loop starting from {-1,0,1}^n for both
/// components. Returns the last solved pair; `converged` is false when
/// total_it iterations ran without both boundary ratios dropping to their
/// thresholds.
/// `progress`, if set, sees each trace entry as soon as it is recorded.
DecompositionResult decompose(const MeasurementSet& m, const RegularizationParams& r,
                              const OuterConfig& outer, const SolverConfig& inner,
                              const std::function<void(const TraceEntry&)>& progress = {});

/// Boundary energy divided by total energy (0 for an all-zero field).
double boundary_ratio(const CoefficientSet& coeffs);

/// CSV: iter,n_div,n_curl,energy_div,energy_curl,bratio_div,bratio_curl,objective,inner_iters
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

}  // namespace hhd
