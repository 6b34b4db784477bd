#pragma once

#include <cstdint>
#include <string>

#include "hhd/objective.hpp"
#include "hhd/spectral_core.hpp"

namespace hhd {

/// Exp(-|x - x0|^2 / 2).
double gaussian_psi(const Vec3& x, const Vec3& center);
/// Rotated gradient (-d2 psi, d1 psi); divergence-free in the plane.
Vec3 upsilon_d(const Vec3& x, const Vec3& center);
/// grad psi; curl-free.
Vec3 upsilon_c(const Vec3& x, const Vec3& center);

/// Total field and its exact divergence-free and curl-free parts at a point.
struct FieldParts {
  Vec3 u = Vec3::Zero();
  Vec3 ud = Vec3::Zero();
  Vec3 uc = Vec3::Zero();
};

enum class TestField {
  CounterRotating,   ///< vortex row with sources and sinks, box [0, 3 pi]^2
  TwoScaleSource2D,  ///< two-scale vortices plus a Gaussian sink, box [0, 2 pi]^2
  TwoScaleSource3D,  ///< 3D extension of the above, box [0, 2 pi]^3
};

/// Parses "counter_rotating", "two_scale_2d", "two_scale_3d".
TestField parse_test_field(const std::string& name);
std::string to_string(TestField field);

Domain test_field_domain(TestField field);
FieldParts evaluate_test_field(TestField field, const Vec3& x);

FieldParts field_counter_rotating(const Vec3& x);
FieldParts field_two_scale_2d(const Vec3& x);
FieldParts field_two_scale_3d(const Vec3& x);

/// P points drawn uniformly over the box from a seeded mt19937_64 (the
/// integer-to-double mapping is done by hand so the stream is identical on
/// every platform); values are exact total-field evaluations.
MeasurementSet sample_random(TestField field, const Domain& dom, std::size_t count, std::uint64_t seed);

}  // namespace hhd
