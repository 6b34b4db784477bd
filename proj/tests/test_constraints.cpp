#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace hhd;
using hhd::test::kPi;

namespace {

const Domain kSquare({2 * kPi, 2 * kPi});

double grid_mean_square(const CoefficientSet& c, int res) {
  const UniformGrid grid(c.domain(), res);
  return mean_square(grid, [&](const Vec3& x) { return c.evaluate(x); });
}

}  // namespace

TEST_CASE("subspace basis examples") {
  const auto b = subspace_basis(MultiIndex(1, 0), ConstraintKind::DivergenceFree, kSquare);
  REQUIRE(b.size == 1);
  CHECK((b.vectors[0] - Vec3(0, 1, 0)).norm() < 1e-15);

  const auto c = subspace_basis(MultiIndex(0, 3), ConstraintKind::CurlFree, Domain({4.0, 4.0}));
  REQUIRE(c.size == 1);
  CHECK((c.vectors[0] - Vec3(0, 1, 0)).norm() < 1e-15);

  // axis-aligned 3D case: spans the x1-x2 plane
  const Domain cube({2 * kPi, 2 * kPi, 2 * kPi});
  const auto z = subspace_basis(MultiIndex(0, 0, 2), ConstraintKind::DivergenceFree, cube);
  REQUIRE(z.size == 2);
  for (const auto& v : z.vectors) {
    CHECK(std::abs(v[2]) < 1e-15);
    CHECK(v.norm() == doctest::Approx(1.0));
  }
  CHECK(std::abs(z.vectors[0].dot(z.vectors[1])) < 1e-15);

  CHECK_THROWS_AS(subspace_basis(MultiIndex(0, 0), ConstraintKind::CurlFree, kSquare), std::invalid_argument);
}

TEST_CASE("subspace bases are orthonormal, constrained and odd") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> idx(-5, 5);
  const Domain d3({1.0, 2.5, 7.0});
  const Domain d2({1.5, 4.0});
  for (int trial = 0; trial < 300; ++trial) {
    const bool three = trial % 2 == 0;
    const Domain& d = three ? d3 : d2;
    const MultiIndex a = three ? MultiIndex(idx(gen), idx(gen), idx(gen)) : MultiIndex(idx(gen), idx(gen));
    if (a.is_zero()) continue;
    const Vec3 ah = scaled_index(a, d);
    for (auto kind : {ConstraintKind::DivergenceFree, ConstraintKind::CurlFree}) {
      const auto b = subspace_basis(a, kind, d);
      const auto bn = subspace_basis(-a, kind, d);
      CHECK(b.size == (kind == ConstraintKind::CurlFree ? 1 : d.dim() - 1));
      for (int i = 0; i < b.size; ++i) {
        CHECK(std::abs(b.vectors[i].norm() - 1.0) <= 1e-14);
        CHECK((bn.vectors[i] + b.vectors[i]).norm() == 0.0);
        if (kind == ConstraintKind::DivergenceFree) {
          CHECK(std::abs(b.vectors[i].dot(ah)) <= 1e-14 * ah.norm());
        } else {
          CHECK(b.vectors[i].cross(ah).norm() <= 1e-14 * ah.norm());
        }
        for (int j = i + 1; j < b.size; ++j) CHECK(std::abs(b.vectors[i].dot(b.vectors[j])) <= 1e-14);
      }
    }
  }
}

TEST_CASE("reduced dimensions") {
  const IndexSet c = IndexSet::cube(2, 1);
  CHECK(make_layout(ConstraintKind::DivergenceFree, kSquare, c)->size() == 10);
  CHECK(make_layout(ConstraintKind::CurlFree, kSquare, c)->size() == 8);
  const Domain cube({1.0, 1.0, 1.0});
  CHECK(make_layout(ConstraintKind::DivergenceFree, cube, IndexSet::cube(3, 1))->size() == 3 + 13 * 4);
  CHECK(make_layout(ConstraintKind::CurlFree, cube, IndexSet::cube(3, 1))->size() == 13 * 2);
}

TEST_CASE("layout rejects mismatched input") {
  IndexSet s(2);
  s.insert_pair(MultiIndex(1, 0));
  CHECK_THROWS_AS(make_layout(ConstraintKind::CurlFree, Domain({1.0, 1.0, 1.0}), s), std::invalid_argument);
  const auto layout = make_layout(ConstraintKind::CurlFree, kSquare, s);
  CHECK_THROWS_AS(CoefficientSet(layout, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("evaluate examples") {
  const IndexSet c = IndexSet::cube(2, 1);
  const auto zero = CoefficientSet::zeros(ConstraintKind::DivergenceFree, kSquare, c);
  CHECK(zero.evaluate(Vec3(1, 2, 0)).isZero());

  const auto layout = make_layout(ConstraintKind::DivergenceFree, kSquare, c);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(layout->size());
  theta[0] = 0.25;
  theta[1] = -3.0;
  const CoefficientSet mean(layout, theta);
  CHECK((mean.evaluate(Vec3(0.3, 5.0, 0)) - Vec3(0.25, -3.0, 0)).norm() < 1e-15);

  IndexSet one(2);
  one.insert_pair(MultiIndex(1, 0));
  const auto single = make_layout(ConstraintKind::DivergenceFree, kSquare, one);
  const CoefficientSet s(single, Eigen::Vector2d(1.0, 0.0));
  for (double x1 : {0.0, 0.4, 2.0, 5.5}) {
    const Vec3 v = s.evaluate(Vec3(x1, 1.7, 0));
    CHECK(std::abs(v[0]) < 1e-15);
    CHECK(v[1] == doctest::Approx(2 * std::cos(x1)).epsilon(1e-14));
  }
}

TEST_CASE("materialized coefficients satisfy the constraints and conjugate symmetry") {
  std::mt19937_64 gen(5);
  for (int dim : {2, 3}) {
    const Domain d = dim == 2 ? Domain({3.0, 5.0}) : Domain({3.0, 5.0, 2.0});
    for (auto kind : {ConstraintKind::DivergenceFree, ConstraintKind::CurlFree}) {
      const auto cs = hhd::test::random_coefficients(gen, kind, d, IndexSet::cube(dim, 2));
      for (const auto& t : cs.materialize()) {
        CHECK(t.coeff == cs.coefficient(t.alpha));
        CHECK((cs.coefficient(-t.alpha) - t.coeff.conjugate()).norm() == 0.0);
        if (t.alpha.is_zero()) continue;
        const Vec3 ah = scaled_index(t.alpha, d);
        if (kind == ConstraintKind::DivergenceFree) {
          CHECK(std::abs(ah.cast<Complex>().dot(t.coeff)) <= 1e-14 * t.coeff.norm() * ah.norm());
        } else {
          CHECK(ah.cast<Complex>().cross(t.coeff).norm() <= 1e-14 * t.coeff.norm() * ah.norm());
        }
      }
      for (const auto& [a, c] : divergence_spectral(cs)) {
        if (kind == ConstraintKind::DivergenceFree) CHECK(std::abs(c) <= 1e-14);
      }
      for (const auto& [a, c] : curl_spectral(cs)) {
        if (kind == ConstraintKind::CurlFree) CHECK(c.norm() <= 1e-14);
      }
      const auto x = Vec3(0.7, 1.9, dim == 3 ? 0.4 : 0.0);
      const CVec3 z = cs.evaluate_complex(x);
      CHECK(z.imag().norm() <= 1e-12 * (1.0 + z.real().norm()));
    }
  }
}

TEST_CASE("reduced scalar sign rule") {
  std::mt19937_64 gen(9);
  const auto cs = hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, kSquare, IndexSet::cube(2, 2));
  const MultiIndex a(1, -2);
  CHECK(cs.reduced_scalar(-a, 0) == -std::conj(cs.reduced_scalar(a, 0)));
  CHECK_THROWS(cs.reduced_scalar(MultiIndex(0, 0), 0));
}

TEST_CASE("divergence of an unconstrained coefficient") {
  const std::vector<SpectralTerm> terms{{MultiIndex(1, 0), CVec3(1, 0, 0)}};
  const auto div = divergence_spectral(terms, kSquare);
  REQUIRE(div.size() == 1);
  CHECK(std::abs(div[0].second - Complex(0, 1)) < 1e-15);
}

TEST_CASE("seminorm examples") {
  const std::vector<SpectralTerm> pair{{MultiIndex(1, 0), CVec3(0, 1, 0)}, {MultiIndex(-1, 0), CVec3(0, 1, 0)}};
  CHECK(seminorm_sq(pair, kSquare, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(seminorm_sq(pair, kSquare, -0.5), std::invalid_argument);

  std::mt19937_64 gen(21);
  const auto cs = hhd::test::random_coefficients(gen, ConstraintKind::DivergenceFree, kSquare, IndexSet::cube(2, 2));
  CHECK(seminorm_sq(cs, 0.0) == doctest::Approx(cs.energy()).epsilon(1e-14));
  CHECK(seminorm_sq(CoefficientSet::zeros(ConstraintKind::CurlFree, kSquare, IndexSet::cube(2, 1)), 1.5) == 0.0);
}

TEST_CASE("energy of a single pair") {
  IndexSet one(2);
  one.insert_pair(MultiIndex(2, 1));
  const auto layout = make_layout(ConstraintKind::CurlFree, kSquare, one);
  const CoefficientSet cs(layout, Eigen::Vector2d(0.6, -0.8));
  CHECK(cs.energy() == doctest::Approx(2.0));
  CHECK(energy(cs, boundary(cs.indices())) == doctest::Approx(2.0));
}

TEST_CASE("boundary energy is zero when boundary coefficients vanish") {
  std::mt19937_64 gen(4);
  const auto layout = make_layout(ConstraintKind::DivergenceFree, kSquare, IndexSet::cube(2, 2));
  Eigen::VectorXd theta = hhd::test::random_vector(gen, layout->size());
  for (const auto& e : layout->entries()) {
    if (e.alpha.max_abs() == 2) theta.segment(e.offset, 2 * e.basis.size).setZero();
  }
  const CoefficientSet cs(layout, theta);
  CHECK(cs.energy(boundary(cs.indices())) == 0.0);
  CHECK(cs.energy() > 0.0);
}

TEST_CASE("l2 orthogonality of divergence-free and curl-free sets") {
  std::mt19937_64 gen(13);
  for (int dim : {2, 3}) {
    const Domain d = dim == 2 ? Domain({2.0, 3.0}) : Domain({2.0, 3.0, 2.5});
    const int radius = dim == 2 ? 3 : 2;
    const auto a = hhd::test::random_coefficients(gen, ConstraintKind::DivergenceFree, d, IndexSet::cube(dim, radius));
    const auto b = hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, d, IndexSet::cube(dim, radius));
    const double scale = std::sqrt(a.energy() * b.energy());
    CHECK(std::abs(l2_inner(a, b)) <= 1e-12 * scale);
    CHECK(l2_inner(a, a) == doctest::Approx(a.energy()).epsilon(1e-13));
    for (const auto& m : a.indices().members()) {
      if (m.is_zero()) continue;
      const CVec3 u = a.coefficient(m), s = b.coefficient(m);
      CHECK(std::abs((u.array() * s.conjugate().array()).sum()) <= 1e-14 * u.norm() * s.norm());
    }
    if (dim == 2) {
      const UniformGrid grid(d, 64);
      double q = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 x = grid.point(i);
        q += a.evaluate(x).dot(b.evaluate(x));
      }
      q /= static_cast<double>(grid.size());
      CHECK(std::abs(q) <= 1e-6 * scale);
    }
  }
  // disjoint sets
  IndexSet s1(2), s2(2);
  s1.insert_pair(MultiIndex(1, 0));
  s2.insert_pair(MultiIndex(0, 1));
  const auto a = hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, kSquare, s1);
  const auto b = hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, kSquare, s2);
  CHECK(l2_inner(a, b) == 0.0);
  CHECK_THROWS_AS(l2_inner(a, hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, Domain({1.0, 1.0}), s2)),
                  std::invalid_argument);
}

TEST_CASE("Parseval: coefficient energy matches grid quadrature") {
  std::mt19937_64 gen(17);
  for (auto kind : {ConstraintKind::DivergenceFree, ConstraintKind::CurlFree}) {
    const auto cs = hhd::test::random_coefficients(gen, kind, Domain({2.0, 5.0}), IndexSet::cube(2, 3));
    CHECK(std::abs(grid_mean_square(cs, 16) - cs.energy()) <= 1e-10 * cs.energy());
  }
  const auto c3 = hhd::test::random_coefficients(gen, ConstraintKind::DivergenceFree, Domain({1.0, 2.0, 3.0}),
                                                 IndexSet::cube(3, 1));
  CHECK(std::abs(grid_mean_square(c3, 8) - c3.energy()) <= 1e-10 * c3.energy());
}

TEST_CASE("evaluate is linear in the reduced vector") {
  std::mt19937_64 gen(19);
  const auto layout = make_layout(ConstraintKind::DivergenceFree, Domain({2.0, 3.0, 4.0}), IndexSet::cube(3, 2));
  const Eigen::VectorXd t1 = hhd::test::random_vector(gen, layout->size());
  const Eigen::VectorXd t2 = hhd::test::random_vector(gen, layout->size());
  const double a = 0.7, b = -1.3;
  const CoefficientSet c1(layout, t1), c2(layout, t2), mix(layout, a * t1 + b * t2);
  for (int i = 0; i < 10; ++i) {
    const Vec3 x(0.3 * i, 0.7 * i + 0.1, 1.1 * i);
    const Vec3 expect = a * c1.evaluate(x) + b * c2.evaluate(x);
    CHECK((mix.evaluate(x) - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
  }
  CHECK(pack(unpack(t1, layout)) == t1);
}

TEST_CASE("coefficient files round-trip bit-exactly") {
  std::mt19937_64 gen(23);
  for (int dim : {2, 3}) {
    const Domain d = dim == 2 ? Domain({2 * kPi, 3 * kPi}) : Domain({1.0 / 3.0, 2.0, kPi});
    for (auto kind : {ConstraintKind::DivergenceFree, ConstraintKind::CurlFree}) {
      const auto cs = hhd::test::random_coefficients(gen, kind, d, IndexSet::cube(dim, 2), 1e-3);
      std::stringstream ss;
      write_coefficients(ss, cs);
      const CoefficientSet back = read_coefficients(ss);
      CHECK(back.kind() == kind);
      CHECK(back.domain() == d);
      CHECK(back.indices() == cs.indices());
      CHECK(back.reduced() == cs.reduced());
    }
  }
}

TEST_CASE("coefficient reader rejects broken files") {
  std::mt19937_64 gen(29);
  IndexSet s(2);
  s.insert_pair(MultiIndex(1, 0));
  const auto cs = hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, kSquare, s);
  std::stringstream ss;
  write_coefficients(ss, cs);
  const std::string good = ss.str();

  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_coefficients(in), std::runtime_error);
  };
  // drop the last member line: the pair is incomplete
  fails(good.substr(0, good.rfind('\n', good.size() - 2) + 1));
  fails("# hhd coefficients\nkind sideways\n");
  std::string bad = good;
  bad.replace(bad.find("members 2"), 9, "members 3");
  fails(bad);
}
