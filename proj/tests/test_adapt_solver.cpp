#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace hhd;
using hhd::test::kPi;

namespace {

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

double joint_objective(const LayoutPtr& div, const LayoutPtr& curl, const Eigen::VectorXd& theta,
                       const MeasurementSet& m, const RegularizationParams& r) {
  return objective(CoefficientSet(div, theta.head(div->size())), CoefficientSet(curl, theta.tail(curl->size())), m, r);
}

// Coefficient set whose boundary pairs carry the given energies (2|c|^2 each).
CoefficientSet with_boundary_energies(const std::vector<double>& energies) {
  IndexSet s = IndexSet::cube(2, 0);
  const MultiIndex reps[] = {MultiIndex(1, 0), MultiIndex(0, 1), MultiIndex(1, 1), MultiIndex(1, -1)};
  for (std::size_t i = 0; i < energies.size(); ++i) s.insert_pair(reps[i]);
  const auto layout = make_layout(ConstraintKind::CurlFree, Domain({1.0, 1.0}), s);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(layout->size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    theta[*layout->find(reps[i]) * 2] = std::sqrt(energies[i] / 2.0);
  }
  return CoefficientSet(layout, theta);
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig s;
  s.grad_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  OuterConfig o;
  o.eps_boundary_div = 1.5;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = {};
  o.delta_curl = 0.0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = {};
  o.total_it = 0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
}

TEST_CASE("mean-only fit from one measurement") {
  const Domain d({2 * kPi, 2 * kPi});
  const IndexSet origin(2, {MultiIndex(0, 0)});
  const auto div = make_layout(ConstraintKind::DivergenceFree, d, origin);
  const auto curl = make_layout(ConstraintKind::CurlFree, d, origin);
  CHECK(curl->size() == 0);
  const MeasurementSet m{d, {Vec3(1.0, 2.0, 0)}, {Vec3(1.0, 0.0, 0)}};
  const auto res = solve_inner(div, curl, Eigen::VectorXd::Zero(2), m, {}, {});
  CHECK(res.theta[0] == doctest::Approx(1.0));
  CHECK(std::abs(res.theta[1]) < 1e-12);
  CHECK(res.objective < 1e-20);
}

TEST_CASE("band-limited recovery without regularization") {
  std::mt19937_64 gen(31);
  const Domain d({2.0, 3.0});
  const auto div = make_layout(ConstraintKind::DivergenceFree, d, IndexSet::cube(2, 2));
  const auto curl = make_layout(ConstraintKind::CurlFree, d, IndexSet::cube(2, 2));
  const Eigen::VectorXd truth = hhd::test::random_vector(gen, div->size() + curl->size());
  const CoefficientSet cd(div, truth.head(div->size())), cc(curl, truth.tail(curl->size()));
  const MeasurementSet m = hhd::test::sample_coefficients(gen, cd, cc, 120);
  const RegularizationParams none{0.0, 0.0, 1.5, 1.5};
  const auto res = solve_inner(div, curl, Eigen::VectorXd::Zero(truth.size()), m, none, {});
  CHECK(hhd::test::max_rel_diff(res.theta, truth) <= 1e-8);
  const auto dense = solve_dense_oracle(div, curl, m, none);
  CHECK_FALSE(dense.rank_deficient);
  CHECK(hhd::test::max_rel_diff(dense.theta, truth) <= 1e-8);
}

TEST_CASE("inner solver agrees with the dense oracle") {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = trial % 2 ? 3 : 2;
    const Domain d = dim == 2 ? Domain({2.0, 3.0}) : Domain({2.0, 3.0, 2.5});
    const IndexSet s = IndexSet::cube(dim, dim == 2 ? 3 : 1);
    const auto div = make_layout(ConstraintKind::DivergenceFree, d, s);
    const auto curl = make_layout(ConstraintKind::CurlFree, d, s);
    const MeasurementSet m = hhd::test::random_measurements(gen, d, 30);
    const RegularizationParams r{1e-3, 2e-3, 1.5, 1.2};
    const auto dense = solve_dense_oracle(div, curl, m, r);
    const auto res = solve_inner(div, curl, Eigen::VectorXd::Zero(dense.theta.size()), m, r, {});
    CHECK(hhd::test::max_rel_diff(res.theta, dense.theta) <= 1e-8);
    CHECK(res.grad_norm <= 1e-10 * (1.0 + res.grad_norm_at_zero));
    // descent from a warm start
    const Eigen::VectorXd start = hhd::test::random_vector(gen, dense.theta.size());
    const auto warm = solve_inner(div, curl, start, m, r, {});
    CHECK(warm.objective <= joint_objective(div, curl, start, m, r) + 1e-12);
  }
}

TEST_CASE("inner solver reports failure with its last iterate") {
  std::mt19937_64 gen(41);
  const Domain d({2.0, 3.0});
  const auto div = make_layout(ConstraintKind::DivergenceFree, d, IndexSet::cube(2, 3));
  const auto curl = make_layout(ConstraintKind::CurlFree, d, IndexSet::cube(2, 3));
  const MeasurementSet m = hhd::test::random_measurements(gen, d, 30);
  SolverConfig cfg;
  cfg.max_inner_iters = 2;
  try {
    solve_inner(div, curl, Eigen::VectorXd::Zero(div->size() + curl->size()), m, {}, cfg);
    FAIL("expected InnerSolveError");
  } catch (const InnerSolveError& e) {
    CHECK(e.best().iterations == 2);
    CHECK(e.best().theta.size() == div->size() + curl->size());
    CHECK(e.best().grad_norm > 0.0);
  }
  CHECK_THROWS_AS(solve_inner(div, curl, Eigen::VectorXd::Zero(3), m, {}, {}), std::invalid_argument);
}

TEST_CASE("dense oracle limits") {
  std::mt19937_64 gen(43);
  const Domain d({2.0, 3.0});
  const IndexSet s = IndexSet::cube(2, 1);
  const auto div = make_layout(ConstraintKind::DivergenceFree, d, s);
  const auto curl = make_layout(ConstraintKind::CurlFree, d, s);

  // more unknowns than data and no regularization: interpolates
  const MeasurementSet few = hhd::test::random_measurements(gen, d, 3);
  const auto interp = solve_dense_oracle(div, curl, few, {0.0, 0.0, 1.5, 1.5});
  CHECK(interp.rank_deficient);
  CHECK(joint_objective(div, curl, interp.theta, few, {0.0, 0.0, 1.5, 1.5}) < 1e-20);

  // heavy regularization leaves the data mean
  const MeasurementSet m = hhd::test::random_measurements(gen, d, 25);
  const auto ridge = solve_dense_oracle(div, curl, m, {1e12, 1e12, 1.5, 1.5});
  Vec3 mean = Vec3::Zero();
  for (const auto& u : m.values) mean += u;
  mean /= 25.0;
  CHECK(ridge.theta[0] == doctest::Approx(mean[0]).epsilon(1e-6));
  CHECK(ridge.theta[1] == doctest::Approx(mean[1]).epsilon(1e-6));
  CHECK(ridge.theta.tail(ridge.theta.size() - 2).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("prune_boundary examples") {
  const CoefficientSet c = with_boundary_energies({4, 3, 2, 1});
  CHECK(boundary(c.indices()).size() == 8);
  const CoefficientSet kept = prune_boundary(c, 0.5);
  CHECK(kept.indices().size() == 5);
  CHECK(kept.indices().contains(MultiIndex(1, 0)));
  CHECK(kept.indices().contains(MultiIndex(0, 1)));
  CHECK(kept.indices().contains(MultiIndex(0, 0)));
  CHECK_FALSE(kept.indices().contains(MultiIndex(1, 1)));
  CHECK_FALSE(kept.indices().contains(MultiIndex(-1, 1)));
  CHECK(kept.energy() == doctest::Approx(7.0));

  CHECK(prune_boundary(c, 0.0).indices() == c.indices());

  const CoefficientSet z = with_boundary_energies({0, 0, 0});
  CHECK(prune_boundary(z, 0.5).indices() == IndexSet(2, {MultiIndex(0, 0)}));

  CHECK_THROWS_AS(prune_boundary(c, -0.1), std::invalid_argument);
}

TEST_CASE("prune keeps interior members and negation closure") {
  std::mt19937_64 gen(47);
  const auto cs = hhd::test::random_coefficients(gen, ConstraintKind::DivergenceFree, Domain({2.0, 2.0}),
                                                 IndexSet::cube(2, 3));
  const auto pruned = prune_boundary(cs, 0.5);
  const IndexSet b = boundary(cs.indices());
  for (const auto& a : cs.indices().members()) {
    if (!b.contains(a)) CHECK(pruned.indices().contains(a));
  }
  for (const auto& a : pruned.indices().members()) {
    CHECK(pruned.indices().contains(-a));
    CHECK(pruned.coefficient(a) == cs.coefficient(a));
  }
  CHECK(pruned.indices().size() < cs.indices().size());
}

TEST_CASE("transfer keeps shared coefficients and zeroes new ones") {
  std::mt19937_64 gen(53);
  const Domain d({2.0, 3.0, 1.0});
  const auto cs = hhd::test::random_coefficients(gen, ConstraintKind::DivergenceFree, d, IndexSet::cube(3, 1));
  const auto grown = transfer(cs, make_layout(ConstraintKind::DivergenceFree, d, grow(cs.indices())));
  for (const auto& a : grown.indices().members()) {
    if (cs.indices().contains(a)) {
      CHECK(grown.coefficient(a) == cs.coefficient(a));
    } else {
      CHECK(grown.coefficient(a).isZero());
    }
  }
  CHECK(grown.energy() == doctest::Approx(cs.energy()));
}

TEST_CASE("boundary ratio") {
  const Domain d({1.0, 1.0});
  CHECK(boundary_ratio(CoefficientSet::zeros(ConstraintKind::CurlFree, d, IndexSet::cube(2, 2))) == 0.0);
  const CoefficientSet c = with_boundary_energies({4, 3, 2, 1});
  CHECK(boundary_ratio(c) == doctest::Approx(1.0));
}

TEST_CASE("decompose with zero data stops after one iteration") {
  const Domain d({2 * kPi, 2 * kPi});
  MeasurementSet m{d, {Vec3(1, 1, 0), Vec3(2, 3, 0)}, {Vec3::Zero(), Vec3::Zero()}};
  const auto res = decompose(m, {}, {}, {});
  CHECK(res.converged);
  REQUIRE(res.trace.size() == 1);
  CHECK(res.trace[0].iter == 1);
  CHECK(res.div.energy() == 0.0);
  CHECK(res.curl.energy() == 0.0);
}

TEST_CASE("decompose on data band-limited to the initial set") {
  std::mt19937_64 gen(59);
  const Domain d({2 * kPi, 2 * kPi});
  const auto div = hhd::test::random_coefficients(gen, ConstraintKind::DivergenceFree, d, IndexSet::cube(2, 1));
  const auto curl = hhd::test::random_coefficients(gen, ConstraintKind::CurlFree, d, IndexSet::cube(2, 1));
  const MeasurementSet m = hhd::test::sample_coefficients(gen, div, curl, 60);
  OuterConfig outer;
  outer.delta_div = outer.delta_curl = 1e-3;
  const auto res = decompose(m, {1e-12, 1e-12, 1.5, 1.5}, outer, {});
  CHECK(res.converged);
  REQUIRE(!res.trace.empty());
  // the initial set is all boundary, so the first iteration cannot pass
  CHECK(res.trace[0].bratio_div > outer.delta_div);
  for (const auto& t : res.trace) {
    CHECK(t.bratio_div >= 0.0);
    CHECK(t.bratio_curl >= 0.0);
  }
  const UniformGrid grid(d, 16);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.point(i);
    CHECK((res.div.evaluate(x) - div.evaluate(x)).norm() < 1e-5);
    CHECK((res.curl.evaluate(x) - curl.evaluate(x)).norm() < 1e-5);
  }
}

TEST_CASE("decompose trace invariants and determinism") {
  const TestField field = TestField::TwoScaleSource2D;
  const Domain d = test_field_domain(field);
  const MeasurementSet m = sample_random(field, d, 120, 3);
  OuterConfig outer;
  outer.total_it = 6;
  const auto a = decompose(m, {}, outer, {});
  const auto b = decompose(m, {}, outer, {});
  REQUIRE(a.trace.size() == b.trace.size());
  CHECK(a.trace.size() <= 6);
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].iter == static_cast<int>(i) + 1);
    CHECK(a.trace[i].objective == b.trace[i].objective);
    CHECK(a.trace[i].n_div == b.trace[i].n_div);
  }
  CHECK(a.div.reduced() == b.div.reduced());
  for (const auto& s : {a.div.indices(), a.curl.indices()}) {
    CHECK(s.contains(MultiIndex(0, 0)));
    for (const auto& x : s.members()) CHECK(s.contains(-x));
  }

  std::ostringstream csv;
  write_trace_csv(csv, a.trace);
  CHECK(csv.str().rfind("iter,n_div,n_curl,energy_div,energy_curl,bratio_div,bratio_curl,objective,inner_iters\n", 0) ==
        0);
}

TEST_CASE("objective does not increase across a warm-started grow") {
  const TestField field = TestField::CounterRotating;
  const Domain d = test_field_domain(field);
  const MeasurementSet m = sample_random(field, d, 100, 5);
  const RegularizationParams r;
  const auto div = make_layout(ConstraintKind::DivergenceFree, d, IndexSet::cube(2, 1));
  const auto curl = make_layout(ConstraintKind::CurlFree, d, IndexSet::cube(2, 1));
  const auto first = solve_inner(div, curl, Eigen::VectorXd::Zero(div->size() + curl->size()), m, r, {});
  const CoefficientSet cd(div, first.theta.head(div->size())), cc(curl, first.theta.tail(curl->size()));
  const auto gd = transfer(cd, make_layout(ConstraintKind::DivergenceFree, d, grow(cd.indices())));
  const auto gc = transfer(cc, make_layout(ConstraintKind::CurlFree, d, grow(cc.indices())));
  const double before = objective(cd, cc, m, r);
  CHECK(objective(gd, gc, m, r) <= before + 1e-10 * (1.0 + before));
  const auto second = solve_inner(gd.layout(), gc.layout(), concat(gd.reduced(), gc.reduced()), m, r, {});
  CHECK(second.objective <= before + 1e-10 * (1.0 + before));
}
