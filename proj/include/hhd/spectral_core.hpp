#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <set>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hhd {

/// Real vector in R^n, padded with zeros beyond the domain dimension so that
/// 2D and 3D code share the same cross/dot products.
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Complex = std::complex<double>;

/// Periodic box [0, L_1] x ... x [0, L_n], n in {2, 3}.
class Domain {
public:
  Domain() = default;
  /// Throws std::invalid_argument unless lengths.size() is 2 or 3 and every
  /// length is positive and finite.
  explicit Domain(std::vector<double> lengths);

  int dim() const { return dim_; }
  double length(int axis) const { return lengths_[axis]; }
  std::vector<double> lengths() const;
  double volume() const;

  /// Coordinate-wise modulo into [0, L).
  Vec3 fold(const Vec3& x) const;

  bool operator==(const Domain& other) const = default;

private:
  int dim_ = 0;
  std::array<double, 3> lengths_{1.0, 1.0, 1.0};
};

/// Integer frequency tuple. Entries beyond dim() are zero.
class MultiIndex {
public:
  MultiIndex() = default;
  MultiIndex(int a1, int a2) : dim_(2), a_{a1, a2, 0} {}
  MultiIndex(int a1, int a2, int a3) : dim_(3), a_{a1, a2, a3} {}
  static MultiIndex zero(int dim);
  /// Throws std::invalid_argument for sizes other than 2 or 3.
  static MultiIndex from_entries(const std::vector<int>& entries);

  int dim() const { return dim_; }
  int operator[](int axis) const { return a_[axis]; }

  MultiIndex operator-() const;
  MultiIndex operator+(const MultiIndex& other) const;

  bool is_zero() const { return a_[0] == 0 && a_[1] == 0 && a_[2] == 0; }
  /// True when the first nonzero entry is positive, or the index is zero.
  bool is_canonical() const;
  MultiIndex canonical() const { return is_canonical() ? *this : -*this; }

  int max_abs() const;
  double norm() const;

  auto operator<=>(const MultiIndex& other) const = default;

private:
  int dim_ = 0;
  std::array<int, 3> a_{0, 0, 0};
};

/// alpha-hat: each entry divided by the matching domain length.
Vec3 scaled_index(const MultiIndex& alpha, const Domain& dom);

/// exp(2 pi j alpha-hat . x), with x folded into the box first.
Complex basis_eval(const Vec3& x, const MultiIndex& alpha, const Domain& dom);

/// All nonzero tuples in {-1, 0, 1}^n (3^n - 1 of them), lexicographic order.
std::vector<MultiIndex> offsets(int dim);

/// Finite, negation-closed set of multi-indices.
class IndexSet {
public:
  explicit IndexSet(int dim = 2) : dim_(dim) {}
  /// Inserts every member together with its negation.
  IndexSet(int dim, const std::vector<MultiIndex>& members);

  /// The hypercube {-r..r}^n.
  static IndexSet cube(int dim, int radius);

  int dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const MultiIndex& alpha) const { return members_.count(alpha) != 0; }

  /// Inserts alpha and -alpha.
  void insert_pair(const MultiIndex& alpha);
  /// Removes alpha and -alpha.
  void erase_pair(const MultiIndex& alpha);

  const std::set<MultiIndex>& members() const { return members_; }
  /// Canonical representatives (one per +/- pair, zero included if present),
  /// in lexicographic order.
  std::vector<MultiIndex> representatives() const;

  bool operator==(const IndexSet& other) const = default;

private:
  int dim_;
  std::set<MultiIndex> members_;
};

/// Members of A having at least one offset neighbour outside A.
IndexSet boundary(const IndexSet& set);

/// A united with every offset translate of every member.
IndexSet grow(const IndexSet& set);

}  // namespace hhd
