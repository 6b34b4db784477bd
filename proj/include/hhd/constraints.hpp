#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hhd/spectral_core.hpp"

namespace hhd {

enum class ConstraintKind { DivergenceFree, CurlFree };

const char* to_string(ConstraintKind kind);

/// Real orthonormal directions admissible for the coefficient at a nonzero
/// index: n-1 vectors orthogonal to alpha-hat (divergence-free) or the single
/// unit vector along alpha-hat (curl-free).
///
/// The vectors are built for the canonical representative of +/-alpha and
/// negated for the other member, so the basis is odd in alpha.
struct SubspaceBasis {
  int size = 0;
  std::array<Vec3, 2> vectors{Vec3::Zero(), Vec3::Zero()};
};

/// Throws std::invalid_argument for the zero index.
SubspaceBasis subspace_basis(const MultiIndex& alpha, ConstraintKind kind, const Domain& dom);

/// One materialized Fourier coefficient.
struct SpectralTerm {
  MultiIndex alpha;
  CVec3 coeff;
};

/// Shape of a constrained coefficient set: the index set plus the layout of
/// the reduced real parameter vector.
///
/// Layout: the zero mode (n reals, divergence-free only) comes first, then
/// every nonzero canonical representative in lexicographic order, each
/// contributing (Re c_1, Im c_1[, Re c_2, Im c_2]).
class CoefficientLayout {
public:
  struct Entry {
    MultiIndex alpha;  // canonical representative, nonzero
    Vec3 scaled;       // alpha-hat
    SubspaceBasis basis;
    int offset = 0;    // first slot in the reduced vector
  };

  /// Throws std::invalid_argument if the index set dimension differs from the
  /// domain or the set is not negation-closed.
  CoefficientLayout(ConstraintKind kind, Domain dom, IndexSet indices);

  ConstraintKind kind() const { return kind_; }
  const Domain& domain() const { return dom_; }
  const IndexSet& indices() const { return indices_; }
  const std::vector<Entry>& entries() const { return entries_; }

  bool has_zero_mode() const { return zero_mode_; }
  /// Number of reals in the reduced vector.
  int size() const { return size_; }

  /// Position of a canonical representative in entries().
  std::optional<std::size_t> find(const MultiIndex& canonical) const;

private:
  ConstraintKind kind_;
  Domain dom_;
  IndexSet indices_;
  std::vector<Entry> entries_;
  bool zero_mode_ = false;
  int size_ = 0;
};

using LayoutPtr = std::shared_ptr<const CoefficientLayout>;

LayoutPtr make_layout(ConstraintKind kind, const Domain& dom, const IndexSet& indices);

/// A constrained, real-valued Fourier field: immutable value holding a layout
/// and a reduced parameter vector. Materialized coefficients satisfy the
/// divergence/curl constraint and conjugate symmetry by construction.
class CoefficientSet {
public:
  /// All-zero field.
  explicit CoefficientSet(LayoutPtr layout);
  /// Throws std::invalid_argument on a length mismatch.
  CoefficientSet(LayoutPtr layout, Eigen::VectorXd reduced);

  static CoefficientSet zeros(ConstraintKind kind, const Domain& dom, const IndexSet& indices);

  const LayoutPtr& layout() const { return layout_; }
  ConstraintKind kind() const { return layout_->kind(); }
  const Domain& domain() const { return layout_->domain(); }
  const IndexSet& indices() const { return layout_->indices(); }
  const Eigen::VectorXd& reduced() const { return reduced_; }

  /// Materialized coefficient; zero for non-members.
  CVec3 coefficient(const MultiIndex& alpha) const;
  /// Reduced complex scalar j of a member (the -alpha member carries
  /// -conj of the canonical scalar). Zero index is rejected.
  Complex reduced_scalar(const MultiIndex& alpha, int j) const;
  /// Mean value; zero for curl-free sets.
  const Vec3& zero_mode() const { return zero_mode_; }

  /// Every member with its coefficient, in lexicographic member order.
  std::vector<SpectralTerm> materialize() const;

  /// Full complex sum over all members. Throws std::logic_error if the
  /// imaginary residue exceeds 1e-12 (1 + |result|).
  Vec3 evaluate(const Vec3& x) const;
  CVec3 evaluate_complex(const Vec3& x) const;

  double energy() const;
  /// Energy restricted to the members of `view`.
  double energy(const IndexSet& view) const;

private:
  LayoutPtr layout_;
  Eigen::VectorXd reduced_;
  std::vector<CVec3> canonical_;  // aligned with layout entries
  Vec3 zero_mode_ = Vec3::Zero();
};

Eigen::VectorXd pack(const CoefficientSet& coeffs);
CoefficientSet unpack(const Eigen::VectorXd& reduced, const LayoutPtr& layout);

/// Fourier coefficients 2 pi j (xi_alpha . alpha-hat) of div xi.
std::vector<std::pair<MultiIndex, Complex>> divergence_spectral(std::span<const SpectralTerm> terms,
                                                                const Domain& dom);
std::vector<std::pair<MultiIndex, Complex>> divergence_spectral(const CoefficientSet& coeffs);

/// Fourier coefficients 2 pi j (xi_alpha x alpha-hat) of curl xi. In 2D only
/// the third component is nonzero.
std::vector<std::pair<MultiIndex, CVec3>> curl_spectral(std::span<const SpectralTerm> terms,
                                                        const Domain& dom);
std::vector<std::pair<MultiIndex, CVec3>> curl_spectral(const CoefficientSet& coeffs);

/// (2 pi)^{2k} sum |xi_alpha|^2 (alpha-hat . alpha-hat)^k over all members.
/// Throws std::invalid_argument for k < 0.
double seminorm_sq(std::span<const SpectralTerm> terms, const Domain& dom, double k);
double seminorm_sq(const CoefficientSet& coeffs, double k);

/// Parseval L2 inner product sum_{A cap B} a_alpha . conj(b_alpha).
/// Throws std::invalid_argument on a domain mismatch.
double l2_inner(const CoefficientSet& a, const CoefficientSet& b);

double energy(const CoefficientSet& coeffs, const IndexSet& view);

}  // namespace hhd
