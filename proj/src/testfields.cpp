#include "hhd/testfields.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hhd {

namespace {

constexpr double kPi = std::numbers::pi;

// uniform double in [0, 1) from the top 53 bits
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

double gaussian_psi(const Vec3& x, const Vec3& center) { return std::exp(-0.5 * (x - center).squaredNorm()); }

Vec3 upsilon_d(const Vec3& x, const Vec3& center) {
  const double psi = gaussian_psi(x, center);
  const double d1 = -(x[0] - center[0]) * psi;
  const double d2 = -(x[1] - center[1]) * psi;
  return {-d2, d1, 0.0};
}

Vec3 upsilon_c(const Vec3& x, const Vec3& center) { return -(x - center) * gaussian_psi(x, center); }

TestField parse_test_field(const std::string& name) {
  if (name == "counter_rotating") return TestField::CounterRotating;
  if (name == "two_scale_2d") return TestField::TwoScaleSource2D;
  if (name == "two_scale_3d") return TestField::TwoScaleSource3D;
  throw std::invalid_argument("unknown test field '" + name +
                              "' (expected counter_rotating, two_scale_2d or two_scale_3d)");
}

std::string to_string(TestField field) {
  switch (field) {
    case TestField::CounterRotating: return "counter_rotating";
    case TestField::TwoScaleSource2D: return "two_scale_2d";
    case TestField::TwoScaleSource3D: return "two_scale_3d";
  }
  return "";
}

Domain test_field_domain(TestField field) {
  switch (field) {
    case TestField::CounterRotating: return Domain({3 * kPi, 3 * kPi});
    case TestField::TwoScaleSource2D: return Domain({2 * kPi, 2 * kPi});
    case TestField::TwoScaleSource3D: return Domain({2 * kPi, 2 * kPi, 2 * kPi});
  }
  throw std::invalid_argument("unknown test field");
}

FieldParts evaluate_test_field(TestField field, const Vec3& x) {
  switch (field) {
    case TestField::CounterRotating: return field_counter_rotating(x);
    case TestField::TwoScaleSource2D: return field_two_scale_2d(x);
    case TestField::TwoScaleSource3D: return field_two_scale_3d(x);
  }
  throw std::invalid_argument("unknown test field");
}

FieldParts field_counter_rotating(const Vec3& x) {
  constexpr double d = 3 * kPi;
  // vortex row along x2 = D/2; the outermost two are periodic images
  struct Signed {
    double sign;
    Vec3 center;
  };
  static const std::array<Signed, 6> vortices{{
      {-1.0, {1 * d / 8, d / 2, 0}},
      {+1.0, {3 * d / 8, d / 2, 0}},
      {-1.0, {5 * d / 8, d / 2, 0}},
      {+1.0, {7 * d / 8, d / 2, 0}},
      {+1.0, {-d / 8, d / 2, 0}},
      {-1.0, {9 * d / 8, d / 2, 0}},
  }};
  static const std::array<Signed, 8> sources{{
      {+1.0, {0, 0, 0}},
      {+1.0, {d, d, 0}},
      {+1.0, {0, d, 0}},
      {+1.0, {d, 0, 0}},
      {-1.0, {d / 2, d / 4, 0}},
      {-1.0, {d / 2, 3 * d / 4, 0}},
      {-1.0, {d / 2, -d / 4, 0}},
      {-1.0, {d / 2, 5 * d / 4, 0}},
  }};
  FieldParts f;
  for (const auto& v : vortices) f.ud += v.sign * upsilon_d(x, v.center);
  for (const auto& s : sources) f.uc += s.sign * upsilon_c(x, s.center);
  f.u = f.ud + f.uc;
  return f;
}

FieldParts field_two_scale_2d(const Vec3& x) {
  const double x1 = x[0], x2 = x[1];
  FieldParts f;
  f.ud = 0.5 * Vec3(std::cos(x1) * std::sin(x2) + std::cos(2 * x1) * std::sin(2 * x2),
                    -std::sin(x1) * std::cos(x2) - std::sin(2 * x1) * std::cos(2 * x2), 0.0);
  f.uc = -upsilon_c(x, Vec3(kPi, kPi, 0.0));
  f.u = f.ud + f.uc;
  return f;
}

FieldParts field_two_scale_3d(const Vec3& x) {
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  const double s1 = std::sin(x1), c1 = std::cos(x1), s2 = std::sin(x2), c2 = std::cos(x2);
  const double s21 = std::sin(2 * x1), c21 = std::cos(2 * x1), s22 = std::sin(2 * x2), c22 = std::cos(2 * x2);
  const double c3 = std::cos(x3), c23 = std::cos(2 * x3);
  const double h3 = std::sin(x3) - 0.5 * std::sin(2 * x3);
  FieldParts f;
  f.ud[0] = 0.5 * (c1 * s2 * c3 + c21 * s22 * c3);
  f.ud[1] = 0.5 * (-s1 * c2 * c3 - s21 * c22 * c23);
  f.ud[2] = 0.5 * (s1 * s2 * h3 + 2 * s21 * s22 * h3) - (0.5 * std::sin(x3) - 0.25 * std::sin(2 * x3)) * s1 * s2;
  f.uc = -upsilon_c(x, Vec3(kPi, kPi, kPi));
  f.u = f.ud + f.uc;
  return f;
}

MeasurementSet sample_random(TestField field, const Domain& dom, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  std::mt19937_64 gen(seed);
  MeasurementSet m{dom, {}, {}};
  m.points.reserve(count);
  m.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec3 x = Vec3::Zero();
    for (int c = 0; c < dom.dim(); ++c) x[c] = unit_uniform(gen) * dom.length(c);
    m.points.push_back(x);
    m.values.push_back(evaluate_test_field(field, x).u);
  }
  return m;
}

}  // namespace hhd
