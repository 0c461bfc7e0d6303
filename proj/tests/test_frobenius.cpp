#include <doctest.h>

#include <cmath>
#include <limits>

#include "frob/checks.hpp"
#include "frob/frobenius.hpp"
#include "frob/transport.hpp"
#include "test_support.hpp"

using namespace frob;
using test::vec;

namespace {

ChartOptions options(IntegrabilityCheck check = IntegrabilityCheck::strict, ExecPolicy policy = ExecPolicy::openmp,
                     FrameRule rule = FrameRule::projected_transport) {
  ChartOptions o;
  o.h = 1e-3;
  o.check = check;
  o.policy = policy;
  o.frame_rule = rule;
  return o;
}

}  // namespace

TEST_CASE("grid coordinates are symmetric with an exact center") {
  CHECK(grid_coordinate(0, 9, 0.3) == -0.3);
  CHECK(grid_coordinate(8, 9, 0.3) == 0.3);
  CHECK(grid_coordinate(4, 9, 0.3) == 0.0);
  for (int j = 0; j < 9; ++j) CHECK(grid_coordinate(j, 9, 0.3) == -grid_coordinate(8 - j, 9, 0.3));
}

TEST_CASE("flat planes: identity chart and flat leaves") {
  const Scenario e = test::builtin("euclidean_planes");
  const FrobeniusChart chart(e.g, e.E, e.base, 0.3, 3, options());
  for (std::size_t i = 0; i < chart.grid_size(); ++i)
    CHECK((chart.grid_points()[i] - (e.base + chart.grid_params()[i])).norm() <= 1e-13);
  const std::size_t center = chart.index_of({1, 1, 1});
  CHECK(chart.tangency_residual(center) <= 1e-10);
  const InvertibilityReport r = chart.invertibility(center);
  CHECK(r.condition == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.determinant_sign == 1);
  CHECK_FALSE(r.singular);

  const LeafSample leaf = leaf_sample(e.g, e.E, e.base, 0.5, 5, options());
  REQUIRE(leaf.points.size() == 25);
  for (std::size_t i = 0; i < leaf.points.size(); ++i) {
    CHECK(leaf.points[i](2) == 0.0);
    CHECK(leaf.residuals[i] <= 1e-12);
  }
}

TEST_CASE("sphere leaf has constant radius") {
  const Scenario s = test::builtin("sphere_foliation");
  const LeafSample leaf = leaf_sample(s.g, s.E, s.base, 0.5, 5, options());
  for (const Vector& x : leaf.points) CHECK(std::abs(x.norm() - 2.0) <= 1e-6);
  CHECK(leaf.max_residual() <= 1e-5);
}

TEST_CASE("chart at the origin: base point and frame") {
  for (const char* name : {"sphere_foliation", "twisted_levels"}) {
    const Scenario s = test::builtin(name);
    const FrobeniusChart chart(s.g, s.E, s.base, 0.3, 3, options());
    CHECK(chart(Vector::Zero(3)) == s.base);
    CHECK(chart.grid_points()[chart.index_of({1, 1, 1})] == s.base);
    const Matrix J = chart.jacobian(Vector::Zero(3));
    CHECK((J - chart.frame()).cwiseAbs().maxCoeff() <= 1e-5);
    const InvertibilityReport r = chart.invertibility(chart.index_of({1, 1, 1}));
    CHECK(r.condition == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("leaf and chart agree on the zero transverse block") {
  for (const char* name : {"sphere_foliation", "twisted_levels"}) {
    const Scenario s = test::builtin(name);
    const FrobeniusChart chart(s.g, s.E, s.base, 0.3, 3, options());
    const LeafSample leaf = leaf_sample(s.g, s.E, s.base, 0.3, 3, options());
    for (std::size_t i = 0; i < leaf.points.size(); ++i) {
      Vector x = Vector::Zero(3);
      x.head(2) = leaf.params[i];
      CHECK((chart(x) - leaf.points[i]).norm() <= 1e-9);
    }
  }
}

TEST_CASE("E = TM: the chart is a single exponential") {
  const Scenario s = test::builtin("full_tm");
  const FrobeniusChart chart(s.g, s.E, s.base, 0.3, 3, options());
  const Vector x = vec({0.1, -0.2, 0.25});
  CHECK(chart(x) == exp_map(chart.connection(), s.base, Vector(chart.frame() * x), 1e-3));
}

TEST_CASE("tangency and invertibility on a 5-point grid") {
  const Scenario s = test::builtin("sphere_foliation");
  const FrobeniusChart chart(s.g, s.E, s.base, 0.3, 5, options());
  CHECK(chart.max_residual() <= 1e-5);
  const int sign = chart.invertibility(chart.index_of({2, 2, 2})).determinant_sign;
  for (std::size_t i = 0; i < chart.grid_size(); ++i) {
    if (!chart.interior(i)) {
      CHECK(std::isnan(chart.grid_residuals()[i]));
      continue;
    }
    const InvertibilityReport r = chart.invertibility(i);
    CHECK(r.determinant_sign == sign);
    CHECK_FALSE(r.singular);
  }
  CHECK(chart.tangency_residual(chart.grid_params()[chart.index_of({1, 2, 3})]) ==
        chart.grid_residuals()[chart.index_of({1, 2, 3})]);
  CHECK_THROWS_AS(chart.tangency_residual(vec({0.01, 0, 0})), GeometryError);
  CHECK_THROWS_AS(chart.tangency_residual(chart.index_of({0, 2, 2})), GeometryError);
}

TEST_CASE("the alternative frame rule also straightens the foliation") {
  const Scenario s = test::builtin("twisted_levels");
  const FrobeniusChart chart(s.g, s.E, s.base, 0.3, 5,
                             options(IntegrabilityCheck::strict, ExecPolicy::openmp, FrameRule::projected_frame));
  CHECK(chart.max_residual() <= 1e-5);
}

TEST_CASE("serial and parallel grids are bitwise identical") {
  const Scenario s = test::builtin("twisted_levels");
  const FrobeniusChart a(s.g, s.E, s.base, 0.3, 3, options(IntegrabilityCheck::strict, ExecPolicy::serial));
  const FrobeniusChart b(s.g, s.E, s.base, 0.3, 3, options(IntegrabilityCheck::strict, ExecPolicy::openmp));
  REQUIRE(a.grid_size() == b.grid_size());
  for (std::size_t i = 0; i < a.grid_size(); ++i) {
    CHECK(a.grid_points()[i] == b.grid_points()[i]);
    const double ra = a.grid_residuals()[i], rb = b.grid_residuals()[i];
    CHECK(((std::isnan(ra) && std::isnan(rb)) || ra == rb));
  }
  const LeafSample la = leaf_sample(s.g, s.E, s.base, 0.5, 3, options(IntegrabilityCheck::strict, ExecPolicy::serial));
  const LeafSample lb = leaf_sample(s.g, s.E, s.base, 0.5, 3, options(IntegrabilityCheck::strict, ExecPolicy::openmp));
  for (std::size_t i = 0; i < la.points.size(); ++i) CHECK(la.points[i] == lb.points[i]);
}

TEST_CASE("non-involutive distributions") {
  const Scenario c = test::builtin("contact3d");
  CHECK_THROWS_AS(FrobeniusChart(c.g, c.E, c.base, 0.3, 3, options()), GeometryError);
  CHECK_THROWS_AS(leaf_sample(c.g, c.E, c.base, 0.5, 3, options()), GeometryError);
  const LeafSample leaf = leaf_sample(c.g, c.E, c.base, 0.5, 5, options(IntegrabilityCheck::warn));
  CHECK_FALSE(leaf.warnings.empty());
  CHECK(leaf.max_residual() > 1e-2);
}

TEST_CASE("leaves through transversally displaced points are disjoint") {
  const Scenario s = test::builtin("sphere_foliation");
  const FrobeniusChart chart(s.g, s.E, s.base, 0.3, 3, options());
  const double shift = 0.1;
  const Vector q = chart(vec({0, 0, shift}));
  CHECK(q.norm() == doctest::Approx(2.0 + shift).epsilon(1e-8));
  const LeafSample a = leaf_sample(s.g, s.E, s.base, 0.5, 5, options());
  const LeafSample b = leaf_sample(s.g, s.E, q, 0.5, 5, options());
  double closest = std::numeric_limits<double>::infinity();
  for (const Vector& x : a.points)
    for (const Vector& y : b.points) closest = std::min(closest, (x - y).norm());
  CHECK(closest >= shift / 2);
  for (const Vector& y : b.points) CHECK(std::abs(y.norm() - q.norm()) <= 1e-6);
}
