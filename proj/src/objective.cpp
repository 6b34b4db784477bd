#include "hhd/objective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hhd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (2 pi)^{2k} (alpha-hat . alpha-hat)^k, with 0^0 = 1.
double sobolev_weight(const Vec3& scaled, double k) {
  if (k == 0.0) return 1.0;
  return std::pow(kTwoPi, 2.0 * k) * std::pow(scaled.dot(scaled), k);
}

void check_domains(const CoefficientSet& div, const CoefficientSet& curl, const MeasurementSet& m) {
  if (!(div.domain() == m.domain) || !(curl.domain() == m.domain)) {
    throw std::invalid_argument("coefficient sets and measurements live on different domains");
  }
}

std::vector<Vec3> residuals(const CoefficientSet& div, const CoefficientSet& curl,
                            const MeasurementSet& m) {
  std::vector<Vec3> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    r[i] = div.evaluate(m.points[i]) + curl.evaluate(m.points[i]) - m.values[i];
  }
  return r;
}

std::vector<SpectralTerm> component_gradient(const CoefficientSet& coeffs, const std::vector<Vec3>& res,
                                             const MeasurementSet& m, double eps, double k) {
  const double scale = 2.0 / static_cast<double>(m.size());
  std::vector<SpectralTerm> out;
  out.reserve(coeffs.indices().size());
  for (const auto& alpha : coeffs.indices().members()) {
    CVec3 g = CVec3::Zero();
    for (std::size_t i = 0; i < m.size(); ++i) {
      g += std::conj(basis_eval(m.points[i], alpha, m.domain)) * res[i].cast<Complex>();
    }
    g *= scale;
    const Vec3 ah = scaled_index(alpha, m.domain);
    if (!alpha.is_zero() || k == 0.0) {
      g += 2.0 * eps * sobolev_weight(ah, k) * coeffs.coefficient(alpha);
    }
    out.push_back({alpha, g});
  }
  return out;
}

Eigen::VectorXd project(const std::vector<SpectralTerm>& grad, const CoefficientLayout& layout) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.size());
  const int n = layout.domain().dim();
  for (const auto& t : grad) {
    if (t.alpha.is_zero()) {
      if (layout.has_zero_mode()) {
        for (int c = 0; c < n; ++c) out[c] = t.coeff[c].real();
      }
      continue;
    }
    if (!t.alpha.is_canonical()) continue;
    const auto& e = layout.entries()[*layout.find(t.alpha)];
    for (int j = 0; j < e.basis.size; ++j) {
      const Complex d = e.basis.vectors[j].cast<Complex>().dot(t.coeff);
      out[e.offset + 2 * j] = 2.0 * d.real();
      out[e.offset + 2 * j + 1] = 2.0 * d.imag();
    }
  }
  return out;
}

}  // namespace

void MeasurementSet::validate() const {
  if (points.size() != values.size()) {
    throw std::invalid_argument("measurement points and values differ in count");
  }
  if (points.empty()) throw std::invalid_argument("at least one measurement is required");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite() || !values[i].allFinite()) {
      throw std::invalid_argument("measurement " + std::to_string(i) + " is not finite");
    }
  }
}

void RegularizationParams::validate() const {
  if (!(eps_div >= 0.0) || !(eps_curl >= 0.0)) {
    throw std::invalid_argument("regularization weights must be nonnegative");
  }
  if (!(k_div >= 0.0) || !(k_curl >= 0.0)) {
    throw std::invalid_argument("Sobolev orders must be nonnegative");
  }
}

std::vector<std::string> RegularizationParams::admissibility_warnings(int dim) const {
  std::vector<std::string> w;
  const double limit = dim / 2.0;
  if (!(k_div > limit)) {
    w.push_back("k_div = " + std::to_string(k_div) + " does not exceed n/2 = " + std::to_string(limit));
  }
  if (!(k_curl > limit)) {
    w.push_back("k_curl = " + std::to_string(k_curl) + " does not exceed n/2 = " + std::to_string(limit));
  }
  return w;
}

double objective(const CoefficientSet& div, const CoefficientSet& curl, const MeasurementSet& m,
                 const RegularizationParams& r) {
  check_domains(div, curl, m);
  // extended accumulation keeps central differences of this value usable
  long double misfit = 0.0L;
  for (const auto& res : residuals(div, curl, m)) misfit += res.squaredNorm();
  misfit /= static_cast<long double>(m.size());
  const long double reg = static_cast<long double>(r.eps_div) * seminorm_sq(div, r.k_div) +
                          static_cast<long double>(r.eps_curl) * seminorm_sq(curl, r.k_curl);
  return static_cast<double>(misfit + reg);
}

ComplexGradient complex_gradient(const CoefficientSet& div, const CoefficientSet& curl,
                                 const MeasurementSet& m, const RegularizationParams& r) {
  check_domains(div, curl, m);
  const auto res = residuals(div, curl, m);
  return {component_gradient(div, res, m, r.eps_div, r.k_div),
          component_gradient(curl, res, m, r.eps_curl, r.k_curl)};
}

ReducedGradient reduced_gradient(const CoefficientSet& div, const CoefficientSet& curl,
                                 const MeasurementSet& m, const RegularizationParams& r) {
  const auto g = complex_gradient(div, curl, m, r);
  return {project(g.div, *div.layout()), project(g.curl, *curl.layout())};
}

ReducedGradient reduced_gradient(const Eigen::VectorXd& theta_div, const Eigen::VectorXd& theta_curl,
                                 const LayoutPtr& div_layout, const LayoutPtr& curl_layout,
                                 const MeasurementSet& m, const RegularizationParams& r) {
  return reduced_gradient(unpack(theta_div, div_layout), unpack(theta_curl, curl_layout), m, r);
}

Eigen::VectorXd regularization_diagonal(const CoefficientLayout& layout, double eps, double k) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(layout.size());
  if (layout.has_zero_mode() && k == 0.0) w.head(layout.domain().dim()).setConstant(eps);
  for (const auto& e : layout.entries()) {
    // both members of the pair contribute |c|^2
    w.segment(e.offset, 2 * e.basis.size).setConstant(2.0 * eps * sobolev_weight(e.scaled, k));
  }
  return w;
}

Eigen::MatrixXd design_matrix(const CoefficientLayout& div, const CoefficientLayout& curl,
                              const MeasurementSet& m) {
  const int n = m.domain.dim();
  const auto rows = static_cast<Eigen::Index>(m.size()) * n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, div.size() + curl.size());
  auto fill = [&](const CoefficientLayout& layout, Eigen::Index col0) {
    if (layout.has_zero_mode()) {
      for (std::size_t p = 0; p < m.size(); ++p)
        for (int c = 0; c < n; ++c) a(static_cast<Eigen::Index>(p) * n + c, col0 + c) = 1.0;
    }
    for (const auto& e : layout.entries()) {
      for (std::size_t p = 0; p < m.size(); ++p) {
        const double phase = kTwoPi * e.scaled.dot(m.domain.fold(m.points[p]));
        const double cs = 2.0 * std::cos(phase);
        const double sn = -2.0 * std::sin(phase);
        for (int j = 0; j < e.basis.size; ++j) {
          const Eigen::Index col = col0 + e.offset + 2 * j;
          for (int c = 0; c < n; ++c) {
            const Eigen::Index row = static_cast<Eigen::Index>(p) * n + c;
            a(row, col) = cs * e.basis.vectors[j][c];
            a(row, col + 1) = sn * e.basis.vectors[j][c];
          }
        }
      }
    }
  };
  fill(div, 0);
  fill(curl, div.size());
  return a;
}

Eigen::VectorXd stacked_values(const MeasurementSet& m) {
  const int n = m.domain.dim();
  Eigen::VectorXd b(static_cast<Eigen::Index>(m.size()) * n);
  for (std::size_t p = 0; p < m.size(); ++p)
    for (int c = 0; c < n; ++c) b[static_cast<Eigen::Index>(p) * n + c] = m.values[p][c];
  return b;
}

}  // namespace hhd
