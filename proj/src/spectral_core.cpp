#include "hhd/spectral_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hhd {

Domain::Domain(std::vector<double> lengths) {
  if (lengths.size() != 2 && lengths.size() != 3) {
    throw std::invalid_argument("domain dimension must be 2 or 3, got " +
                                std::to_string(lengths.size()));
  }
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("domain lengths must be positive and finite");
    }
  }
  dim_ = static_cast<int>(lengths.size());
  for (int i = 0; i < dim_; ++i) lengths_[i] = lengths[i];
}

std::vector<double> Domain::lengths() const {
  return {lengths_.begin(), lengths_.begin() + dim_};
}

double Domain::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim_; ++i) v *= lengths_[i];
  return v;
}

Vec3 Domain::fold(const Vec3& x) const {
  Vec3 y = Vec3::Zero();
  for (int i = 0; i < dim_; ++i) {
    double r = std::fmod(x[i], lengths_[i]);
    if (r < 0.0) r += lengths_[i];
    // fmod of a tiny negative value can round up to exactly L
    if (r >= lengths_[i]) r = 0.0;
    y[i] = r;
  }
  return y;
}

MultiIndex MultiIndex::zero(int dim) {
  if (dim == 2) return {0, 0};
  if (dim == 3) return {0, 0, 0};
  throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
}

MultiIndex MultiIndex::from_entries(const std::vector<int>& entries) {
  if (entries.size() == 2) return {entries[0], entries[1]};
  if (entries.size() == 3) return {entries[0], entries[1], entries[2]};
  throw std::invalid_argument("multi-index must have 2 or 3 entries");
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex r = *this;
  for (auto& v : r.a_) v = -v;
  return r;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex r = *this;
  for (int i = 0; i < 3; ++i) r.a_[i] += other.a_[i];
  return r;
}

bool MultiIndex::is_canonical() const {
  for (int v : a_) {
    if (v != 0) return v > 0;
  }
  return true;
}

int MultiIndex::max_abs() const {
  int m = 0;
  for (int v : a_) m = std::max(m, std::abs(v));
  return m;
}

double MultiIndex::norm() const {
  double s = 0.0;
  for (int v : a_) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

Vec3 scaled_index(const MultiIndex& alpha, const Domain& dom) {
  if (alpha.dim() != dom.dim()) {
    throw std::invalid_argument("multi-index dimension does not match domain");
  }
  Vec3 r = Vec3::Zero();
  for (int i = 0; i < dom.dim(); ++i) r[i] = alpha[i] / dom.length(i);
  return r;
}

Complex basis_eval(const Vec3& x, const MultiIndex& alpha, const Domain& dom) {
  const Vec3 ah = scaled_index(alpha, dom);
  const Vec3 xf = dom.fold(x);
  const double phase = 2.0 * std::numbers::pi * ah.dot(xf);
  return {std::cos(phase), std::sin(phase)};
}

std::vector<MultiIndex> offsets(int dim) {
  std::vector<MultiIndex> out;
  if (dim == 2) {
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        if (a != 0 || b != 0) out.emplace_back(a, b);
  } else if (dim == 3) {
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          if (a != 0 || b != 0 || c != 0) out.emplace_back(a, b, c);
  } else {
    throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
  }
  return out;
}

IndexSet::IndexSet(int dim, const std::vector<MultiIndex>& members) : dim_(dim) {
  for (const auto& m : members) insert_pair(m);
}

IndexSet IndexSet::cube(int dim, int radius) {
  IndexSet s(dim);
  if (dim == 2) {
    for (int a = -radius; a <= radius; ++a)
      for (int b = -radius; b <= radius; ++b) s.members_.insert({a, b});
  } else if (dim == 3) {
    for (int a = -radius; a <= radius; ++a)
      for (int b = -radius; b <= radius; ++b)
        for (int c = -radius; c <= radius; ++c) s.members_.insert({a, b, c});
  } else {
    throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
  }
  return s;
}

void IndexSet::insert_pair(const MultiIndex& alpha) {
  if (alpha.dim() != dim_) throw std::invalid_argument("multi-index dimension mismatch");
  members_.insert(alpha);
  members_.insert(-alpha);
}

void IndexSet::erase_pair(const MultiIndex& alpha) {
  members_.erase(alpha);
  members_.erase(-alpha);
}

std::vector<MultiIndex> IndexSet::representatives() const {
  std::vector<MultiIndex> reps;
  for (const auto& m : members_) {
    if (m.is_canonical()) reps.push_back(m);
  }
  return reps;
}

IndexSet boundary(const IndexSet& set) {
  IndexSet out(set.dim());
  const auto offs = offsets(set.dim());
  for (const auto& m : set.members()) {
    for (const auto& d : offs) {
      if (!set.contains(m + d)) {
        out.insert_pair(m);
        break;
      }
    }
  }
  return out;
}

IndexSet grow(const IndexSet& set) {
  IndexSet out = set;
  const auto offs = offsets(set.dim());
  for (const auto& m : set.members()) {
    for (const auto& d : offs) out.insert_pair(m + d);
  }
  return out;
}

}  // namespace hhd
