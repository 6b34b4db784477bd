#include "hhd/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hhd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 normalized(const Vec3& v) { return v / v.norm(); }

SubspaceBasis canonical_basis(const Vec3& ah, ConstraintKind kind, int dim) {
  SubspaceBasis b;
  if (kind == ConstraintKind::CurlFree) {
    b.size = 1;
    b.vectors[0] = normalized(ah);
    return b;
  }
  if (dim == 2) {
    b.size = 1;
    b.vectors[0] = normalized(Vec3(-ah[1], ah[0], 0.0));
    return b;
  }
  // least aligned axis, ties to the lowest axis number
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(ah[i]) < std::abs(ah[axis])) axis = i;
  }
  const Vec3 e = Vec3::Unit(axis);
  b.size = 2;
  b.vectors[0] = normalized(ah.cross(e));
  b.vectors[1] = normalized(ah.cross(b.vectors[0]));
  return b;
}

}  // namespace

const char* to_string(ConstraintKind kind) {
  return kind == ConstraintKind::DivergenceFree ? "divergence_free" : "curl_free";
}

SubspaceBasis subspace_basis(const MultiIndex& alpha, ConstraintKind kind, const Domain& dom) {
  if (alpha.is_zero()) {
    throw std::invalid_argument("subspace basis is undefined for the zero index");
  }
  const MultiIndex canon = alpha.canonical();
  SubspaceBasis b = canonical_basis(scaled_index(canon, dom), kind, dom.dim());
  if (!alpha.is_canonical()) {
    for (int j = 0; j < b.size; ++j) b.vectors[j] = -b.vectors[j];
  }
  return b;
}

CoefficientLayout::CoefficientLayout(ConstraintKind kind, Domain dom, IndexSet indices)
    : kind_(kind), dom_(std::move(dom)), indices_(std::move(indices)) {
  if (indices_.dim() != dom_.dim()) {
    throw std::invalid_argument("index set dimension does not match domain");
  }
  for (const auto& m : indices_.members()) {
    if (!indices_.contains(-m)) {
      throw std::invalid_argument("index set is not negation-closed");
    }
  }
  int offset = 0;
  if (kind_ == ConstraintKind::DivergenceFree && indices_.contains(MultiIndex::zero(dom_.dim()))) {
    zero_mode_ = true;
    offset = dom_.dim();
  }
  for (const auto& rep : indices_.representatives()) {
    if (rep.is_zero()) continue;
    Entry e;
    e.alpha = rep;
    e.scaled = scaled_index(rep, dom_);
    e.basis = subspace_basis(rep, kind_, dom_);
    e.offset = offset;
    offset += 2 * e.basis.size;
    entries_.push_back(e);
  }
  size_ = offset;
}

std::optional<std::size_t> CoefficientLayout::find(const MultiIndex& canonical) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), canonical,
                             [](const Entry& e, const MultiIndex& a) { return e.alpha < a; });
  if (it == entries_.end() || it->alpha != canonical) return std::nullopt;
  return static_cast<std::size_t>(it - entries_.begin());
}

LayoutPtr make_layout(ConstraintKind kind, const Domain& dom, const IndexSet& indices) {
  return std::make_shared<const CoefficientLayout>(kind, dom, indices);
}

CoefficientSet::CoefficientSet(LayoutPtr layout)
    : CoefficientSet(layout, Eigen::VectorXd::Zero(layout->size())) {}

CoefficientSet::CoefficientSet(LayoutPtr layout, Eigen::VectorXd reduced)
    : layout_(std::move(layout)), reduced_(std::move(reduced)) {
  if (reduced_.size() != layout_->size()) {
    throw std::invalid_argument("reduced vector has length " + std::to_string(reduced_.size()) +
                                ", layout expects " + std::to_string(layout_->size()));
  }
  if (layout_->has_zero_mode()) {
    for (int i = 0; i < layout_->domain().dim(); ++i) zero_mode_[i] = reduced_[i];
  }
  canonical_.reserve(layout_->entries().size());
  for (const auto& e : layout_->entries()) {
    CVec3 c = CVec3::Zero();
    for (int j = 0; j < e.basis.size; ++j) {
      const Complex s(reduced_[e.offset + 2 * j], reduced_[e.offset + 2 * j + 1]);
      c += s * e.basis.vectors[j].cast<Complex>();
    }
    canonical_.push_back(c);
  }
}

CoefficientSet CoefficientSet::zeros(ConstraintKind kind, const Domain& dom, const IndexSet& indices) {
  return CoefficientSet(make_layout(kind, dom, indices));
}

CVec3 CoefficientSet::coefficient(const MultiIndex& alpha) const {
  if (!indices().contains(alpha)) return CVec3::Zero();
  if (alpha.is_zero()) return zero_mode_.cast<Complex>();
  const auto pos = layout_->find(alpha.canonical());
  const CVec3& c = canonical_[*pos];
  return alpha.is_canonical() ? c : CVec3(c.conjugate());
}

Complex CoefficientSet::reduced_scalar(const MultiIndex& alpha, int j) const {
  if (alpha.is_zero()) throw std::invalid_argument("zero index has no reduced scalar");
  const auto pos = layout_->find(alpha.canonical());
  if (!pos || !indices().contains(alpha)) throw std::invalid_argument("index is not a member");
  const auto& e = layout_->entries()[*pos];
  if (j < 0 || j >= e.basis.size) throw std::out_of_range("reduced scalar slot out of range");
  const Complex s(reduced_[e.offset + 2 * j], reduced_[e.offset + 2 * j + 1]);
  return alpha.is_canonical() ? s : -std::conj(s);
}

std::vector<SpectralTerm> CoefficientSet::materialize() const {
  std::vector<SpectralTerm> out;
  out.reserve(indices().size());
  for (const auto& m : indices().members()) out.push_back({m, coefficient(m)});
  return out;
}

CVec3 CoefficientSet::evaluate_complex(const Vec3& x) const {
  const Vec3 xf = domain().fold(x);
  CVec3 sum = zero_mode_.cast<Complex>();
  const auto& entries = layout_->entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double phase = kTwoPi * entries[i].scaled.dot(xf);
    const Complex phi(std::cos(phase), std::sin(phase));
    sum += canonical_[i] * phi;
    sum += canonical_[i].conjugate() * std::conj(phi);
  }
  return sum;
}

Vec3 CoefficientSet::evaluate(const Vec3& x) const {
  const CVec3 c = evaluate_complex(x);
  const Vec3 re = c.real();
  const double residue = c.imag().norm();
  if (residue > 1e-12 * (1.0 + re.norm())) {
    throw std::logic_error("coefficient set violates conjugate symmetry: imaginary residue " +
                           std::to_string(residue));
  }
  return re;
}

double CoefficientSet::energy() const {
  double e = zero_mode_.squaredNorm();
  for (const auto& c : canonical_) e += 2.0 * c.squaredNorm();
  return e;
}

double CoefficientSet::energy(const IndexSet& view) const {
  double e = 0.0;
  for (const auto& m : view.members()) {
    if (indices().contains(m)) e += coefficient(m).squaredNorm();
  }
  return e;
}

Eigen::VectorXd pack(const CoefficientSet& coeffs) { return coeffs.reduced(); }

CoefficientSet unpack(const Eigen::VectorXd& reduced, const LayoutPtr& layout) {
  return CoefficientSet(layout, reduced);
}

std::vector<std::pair<MultiIndex, Complex>> divergence_spectral(std::span<const SpectralTerm> terms,
                                                                const Domain& dom) {
  std::vector<std::pair<MultiIndex, Complex>> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    const Vec3 ah = scaled_index(t.alpha, dom);
    const Complex d = ah.cast<Complex>().dot(t.coeff);  // ah is real, so no conjugation
    out.emplace_back(t.alpha, Complex(0.0, kTwoPi) * d);
  }
  return out;
}

std::vector<std::pair<MultiIndex, Complex>> divergence_spectral(const CoefficientSet& coeffs) {
  const auto terms = coeffs.materialize();
  return divergence_spectral(terms, coeffs.domain());
}

std::vector<std::pair<MultiIndex, CVec3>> curl_spectral(std::span<const SpectralTerm> terms,
                                                        const Domain& dom) {
  std::vector<std::pair<MultiIndex, CVec3>> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    const Vec3 ah = scaled_index(t.alpha, dom);
    const CVec3& c = t.coeff;
    // written out: Eigen conjugates complex cross products
    const CVec3 x(c[1] * ah[2] - c[2] * ah[1], c[2] * ah[0] - c[0] * ah[2], c[0] * ah[1] - c[1] * ah[0]);
    out.emplace_back(t.alpha, Complex(0.0, kTwoPi) * x);
  }
  return out;
}

std::vector<std::pair<MultiIndex, CVec3>> curl_spectral(const CoefficientSet& coeffs) {
  const auto terms = coeffs.materialize();
  return curl_spectral(terms, coeffs.domain());
}

double seminorm_sq(std::span<const SpectralTerm> terms, const Domain& dom, double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("seminorm order must be nonnegative");
  long double s = 0.0L;
  for (const auto& t : terms) {
    const Vec3 ah = scaled_index(t.alpha, dom);
    const double w = (k == 0.0) ? 1.0 : std::pow(ah.dot(ah), k);
    s += static_cast<long double>(t.coeff.squaredNorm()) * w;
  }
  return static_cast<double>(std::pow(static_cast<long double>(kTwoPi), 2.0L * k) * s);
}

double seminorm_sq(const CoefficientSet& coeffs, double k) {
  const auto terms = coeffs.materialize();
  return seminorm_sq(terms, coeffs.domain(), k);
}

double l2_inner(const CoefficientSet& a, const CoefficientSet& b) {
  if (!(a.domain() == b.domain())) throw std::invalid_argument("domain mismatch");
  Complex s = 0.0;
  for (const auto& m : a.indices().members()) {
    if (!b.indices().contains(m)) continue;
    // a . conj(b) without Eigen's conjugating dot()
    s += (a.coefficient(m).array() * b.coefficient(m).conjugate().array()).sum();
  }
  return s.real();
}

double energy(const CoefficientSet& coeffs, const IndexSet& view) { return coeffs.energy(view); }

}  // namespace hhd
