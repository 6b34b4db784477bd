#include "hhd/adapt_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "hhd/coefficient_io.hpp"

namespace hhd {

void SolverConfig::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (max_inner_iters < 0) throw std::invalid_argument("max_inner_iters must be >= 1 (or 0 for auto)");
}

void OuterConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(eps_boundary_div) || !in_unit(eps_boundary_curl)) {
    throw std::invalid_argument("boundary pruning fractions must lie in [0, 1]");
  }
  if (!(delta_div > 0.0) || !(delta_curl > 0.0)) {
    throw std::invalid_argument("boundary energy thresholds must be positive");
  }
  if (total_it < 1) throw std::invalid_argument("total_it must be at least 1");
}

namespace {

// min |M theta - b|^2 with M = [A / sqrt(P); diag(sqrt(w))], b = [u / sqrt(P); 0],
// which equals the objective. CGLS runs on M S with S = diag(1 / |M_j|).
class ScaledLeastSquares {
public:
  ScaledLeastSquares(Eigen::MatrixXd a, Eigen::VectorXd u, Eigen::VectorXd w, double inv_p)
      : a_(std::move(a)), u_(std::move(u)), sqrt_w_(w.cwiseSqrt()), root_inv_p_(std::sqrt(inv_p)) {
    a_ *= root_inv_p_;
    u_ *= root_inv_p_;
    col_norm_ = (a_.colwise().squaredNorm().transpose() + w).cwiseSqrt();
    for (auto& c : col_norm_) {
      if (c == 0.0) c = 1.0;
    }
  }

  Eigen::Index cols() const { return a_.cols(); }
  const Eigen::VectorXd& col_norm() const { return col_norm_; }

  // residual r = b - M theta, split into data and regularization blocks
  void residual(const Eigen::VectorXd& theta, Eigen::VectorXd& r_data, Eigen::VectorXd& r_reg) const {
    r_data = u_ - a_ * theta;
    r_reg = -sqrt_w_.cwiseProduct(theta);
  }

  // (M S)^T r
  Eigen::VectorXd adjoint(const Eigen::VectorXd& r_data, const Eigen::VectorXd& r_reg) const {
    return (a_.transpose() * r_data + sqrt_w_.cwiseProduct(r_reg)).cwiseQuotient(col_norm_);
  }

  // M S p
  void apply(const Eigen::VectorXd& p, Eigen::VectorXd& q_data, Eigen::VectorXd& q_reg) const {
    const Eigen::VectorXd sp = p.cwiseQuotient(col_norm_);
    q_data = a_ * sp;
    q_reg = sqrt_w_.cwiseProduct(sp);
  }

private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd u_;
  Eigen::VectorXd sqrt_w_;
  double root_inv_p_;
  Eigen::VectorXd col_norm_;
};

}  // namespace

InnerResult solve_inner(const LayoutPtr& div, const LayoutPtr& curl, const Eigen::VectorXd& theta0,
                        const MeasurementSet& m, const RegularizationParams& r, const SolverConfig& cfg) {
  cfg.validate();
  r.validate();
  m.validate();
  const Eigen::Index dof = div->size() + curl->size();
  if (theta0.size() != dof) {
    throw std::invalid_argument("warm start has length " + std::to_string(theta0.size()) + ", expected " +
                                std::to_string(dof));
  }

  Eigen::VectorXd w(dof);
  w << regularization_diagonal(*div, r.eps_div, r.k_div), regularization_diagonal(*curl, r.eps_curl, r.k_curl);
  const ScaledLeastSquares ls(design_matrix(*div, *curl, m), stacked_values(m), w,
                              1.0 / static_cast<double>(m.size()));

  // |grad F| = 2 |M^T r| = 2 |S^{-1} (M S)^T r|
  auto grad_norm = [&](const Eigen::VectorXd& s) { return 2.0 * s.cwiseProduct(ls.col_norm()).norm(); };

  Eigen::VectorXd r_data, r_reg, q_data, q_reg;
  ls.residual(Eigen::VectorXd::Zero(dof), r_data, r_reg);
  const double g0 = grad_norm(ls.adjoint(r_data, r_reg));
  const double target = cfg.grad_tol * (1.0 + g0);
  const int cap = cfg.max_inner_iters > 0 ? cfg.max_inner_iters : static_cast<int>(std::max<Eigen::Index>(10 * dof, 1));

  InnerResult out;
  out.grad_norm_at_zero = g0;

  Eigen::VectorXd y = theta0.cwiseProduct(ls.col_norm());
  ls.residual(theta0, r_data, r_reg);
  Eigen::VectorXd s = ls.adjoint(r_data, r_reg);
  Eigen::VectorXd p = s;
  double gamma = s.squaredNorm();

  auto finish = [&](int iters) {
    out.theta = y.cwiseQuotient(ls.col_norm());
    out.objective = r_data.squaredNorm() + r_reg.squaredNorm();
    out.grad_norm = grad_norm(s);
    out.iterations = iters;
  };

  int it = 0;
  while (true) {
    if (grad_norm(s) <= target) {
      // confirm against the true residual before accepting
      ls.residual(y.cwiseQuotient(ls.col_norm()), r_data, r_reg);
      s = ls.adjoint(r_data, r_reg);
      if (grad_norm(s) <= target) break;
      p = s;
      gamma = s.squaredNorm();
    }
    if (it >= cap) {
      finish(it);
      throw InnerSolveError("inner solver did not reach |grad| <= " + format_double(target) + " in " +
                                std::to_string(cap) + " iterations (|grad| = " + format_double(out.grad_norm) +
                                ")",
                            out);
    }
    ls.apply(p, q_data, q_reg);
    const double qq = q_data.squaredNorm() + q_reg.squaredNorm();
    if (qq == 0.0) break;
    const double step = gamma / qq;
    y += step * p;
    r_data -= step * q_data;
    r_reg -= step * q_reg;
    s = ls.adjoint(r_data, r_reg);
    const double gamma_next = s.squaredNorm();
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
    ++it;
  }
  finish(it);
  return out;
}

DenseSolution solve_dense_oracle(const LayoutPtr& div, const LayoutPtr& curl, const MeasurementSet& m,
                                 const RegularizationParams& r) {
  m.validate();
  const int n = m.domain.dim();
  const Eigen::Index nd = div->size();
  const Eigen::Index dof = nd + curl->size();
  const auto rows = static_cast<Eigen::Index>(m.size()) * n;

  Eigen::MatrixXd a(rows, dof);
  Eigen::VectorXd reg(dof);
  for (Eigen::Index j = 0; j < dof; ++j) {
    const bool is_div = j < nd;
    const LayoutPtr& layout = is_div ? div : curl;
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(layout->size());
    unit[is_div ? j : j - nd] = 1.0;
    const CoefficientSet field(layout, unit);
    for (std::size_t p = 0; p < m.size(); ++p) {
      const Vec3 v = field.evaluate(m.points[p]);
      for (int c = 0; c < n; ++c) a(static_cast<Eigen::Index>(p) * n + c, j) = v[c];
    }
    reg[j] = is_div ? r.eps_div * seminorm_sq(field, r.k_div) : r.eps_curl * seminorm_sq(field, r.k_curl);
  }
  Eigen::VectorXd u(rows);
  for (std::size_t p = 0; p < m.size(); ++p)
    for (int c = 0; c < n; ++c) u[static_cast<Eigen::Index>(p) * n + c] = m.values[p][c];

  const double inv_p = 1.0 / static_cast<double>(m.size());
  Eigen::MatrixXd h = inv_p * (a.transpose() * a);
  h.diagonal() += reg;
  const Eigen::VectorXd rhs = inv_p * (a.transpose() * u);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(h);
  return {cod.solve(rhs), cod.rank() < dof};
}

CoefficientSet transfer(const CoefficientSet& src, const LayoutPtr& target) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(target->size());
  if (target->has_zero_mode() && src.layout()->has_zero_mode()) {
    theta.head(target->domain().dim()) = src.reduced().head(target->domain().dim());
  }
  for (const auto& e : target->entries()) {
    if (!src.indices().contains(e.alpha)) continue;
    const auto pos = src.layout()->find(e.alpha);
    const auto& se = src.layout()->entries()[*pos];
    theta.segment(e.offset, 2 * e.basis.size) = src.reduced().segment(se.offset, 2 * se.basis.size);
  }
  return CoefficientSet(target, std::move(theta));
}

CoefficientSet prune_boundary(const CoefficientSet& coeffs, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("pruning fraction must lie in [0, 1]");
  }
  if (fraction == 0.0) return coeffs;

  struct Pair {
    MultiIndex alpha;
    double energy;
  };
  std::vector<Pair> pairs;
  for (const auto& rep : boundary(coeffs.indices()).representatives()) {
    if (rep.is_zero()) continue;
    pairs.push_back({rep, 2.0 * coeffs.coefficient(rep).squaredNorm()});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.energy > b.energy; });

  double total = 0.0;
  for (const auto& p : pairs) total += p.energy;
  const double keep_target = (1.0 - fraction) * total;

  IndexSet kept = coeffs.indices();
  double cumulative = 0.0;
  for (const auto& p : pairs) {
    if (cumulative >= keep_target) {
      kept.erase_pair(p.alpha);
    } else {
      cumulative += p.energy;
    }
  }
  return transfer(coeffs, make_layout(coeffs.kind(), coeffs.domain(), kept));
}

double boundary_ratio(const CoefficientSet& coeffs) {
  const double total = coeffs.energy();
  if (total == 0.0) return 0.0;
  return coeffs.energy(boundary(coeffs.indices())) / total;
}

DecompositionResult decompose(const MeasurementSet& m, const RegularizationParams& r,
                              const OuterConfig& outer, const SolverConfig& inner,
                              const std::function<void(const TraceEntry&)>& progress) {
  m.validate();
  r.validate();
  outer.validate();
  inner.validate();

  const int n = m.domain.dim();
  DecompositionResult result{
      CoefficientSet::zeros(ConstraintKind::DivergenceFree, m.domain, IndexSet::cube(n, 1)),
      CoefficientSet::zeros(ConstraintKind::CurlFree, m.domain, IndexSet::cube(n, 1)),
      {},
      false,
      r.admissibility_warnings(n)};
  CoefficientSet div = result.div;
  CoefficientSet curl = result.curl;

  for (int iter = 0; iter < outer.total_it; ++iter) {
    if (iter != 0) {
      div = transfer(div, make_layout(ConstraintKind::DivergenceFree, m.domain, grow(div.indices())));
      curl = transfer(curl, make_layout(ConstraintKind::CurlFree, m.domain, grow(curl.indices())));
    }
    const Eigen::Index nd = div.layout()->size();
    Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(nd + curl.layout()->size());
    if (inner.warm_start) theta0 << div.reduced(), curl.reduced();

    InnerResult solved;
    try {
      solved = solve_inner(div.layout(), curl.layout(), theta0, m, r, inner);
    } catch (const InnerSolveError& e) {
      throw DecompositionError(std::string("outer iteration ") + std::to_string(iter + 1) + ": " + e.what(),
                               result.trace);
    }
    div = CoefficientSet(div.layout(), solved.theta.head(nd));
    curl = CoefficientSet(curl.layout(), solved.theta.tail(curl.layout()->size()));

    TraceEntry t;
    t.iter = iter + 1;
    t.n_div = div.indices().size();
    t.n_curl = curl.indices().size();
    t.energy_div = div.energy();
    t.energy_curl = curl.energy();
    t.bratio_div = boundary_ratio(div);
    t.bratio_curl = boundary_ratio(curl);
    t.objective = solved.objective;
    t.inner_iters = solved.iterations;
    result.trace.push_back(t);
    if (progress) progress(t);
    result.div = div;
    result.curl = curl;

    if (t.bratio_div > outer.delta_div || t.bratio_curl > outer.delta_curl) {
      div = prune_boundary(div, outer.eps_boundary_div);
      curl = prune_boundary(curl, outer.eps_boundary_curl);
    } else {
      result.converged = true;
      break;
    }
  }
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iter,n_div,n_curl,energy_div,energy_curl,bratio_div,bratio_curl,objective,inner_iters\n";
  for (const auto& t : trace) {
    out << t.iter << ',' << t.n_div << ',' << t.n_curl << ',' << format_double(t.energy_div) << ','
        << format_double(t.energy_curl) << ',' << format_double(t.bratio_div) << ','
        << format_double(t.bratio_curl) << ',' << format_double(t.objective) << ',' << t.inner_iters << '\n';
  }
}

}  // namespace hhd
