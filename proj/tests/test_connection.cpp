#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <random>

#include "frob/checks.hpp"
#include "frob/christoffel.hpp"
#include "frob/connection.hpp"
#include "test_support.hpp"

using namespace frob;
using test::vec;

namespace {

double max_abs(const Tensor3<double>& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::abs(v));
  return m;
}

Tensor3<double> minus(const Tensor3<double>& a, const Tensor3<double>& b) {
  Tensor3<double> out(a.n);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
  return out;
}

// Closed forms for dz² + e^{2z}(dx² + dy²), E = span{∂x, ∂y}.
Tensor3<double> warped_levi_civita(double z) {
  Tensor3<double> g(3);
  g(2, 0, 0) = g(2, 1, 1) = -std::exp(2 * z);
  g(0, 0, 2) = g(0, 2, 0) = g(1, 1, 2) = g(1, 2, 1) = 1.0;
  return g;
}

// τ(∂z, ∂x) = (f′/f) ∂x = ∂x, likewise for y; everything else vanishes.
Tensor3<double> warped_torsion() {
  Tensor3<double> t(3);
  t(0, 2, 0) = t(1, 2, 1) = 1.0;
  t(0, 0, 2) = t(1, 1, 2) = -1.0;
  return t;
}

// K^k_ij = ½ g^{kl}( g(τ(∂l,∂i),∂j) − g(τ(∂j,∂l),∂i) + g(τ(∂i,∂j),∂l) )
Tensor3<double> contorsion_of(const Tensor3<double>& T, const Matrix& G) {
  const int n = T.n;
  const Matrix gi = G.inverse();
  auto low = [&](int l, int i, int j) {  // g(τ(∂i,∂j), ∂l)
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += G(l, k) * T(k, i, j);
    return s;
  };
  Tensor3<double> K(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += gi(k, l) * (low(j, l, i) - low(i, j, l) + low(l, i, j));
        K(k, i, j) = 0.5 * s;
      }
  return K;
}

std::vector<Vector> random_points(const Scenario& s, int count, std::uint64_t seed) { return probe_points(s, count, seed); }

}  // namespace

TEST_CASE("flat scenario has vanishing connection, torsion and curvature") {
  const Scenario e = test::builtin("euclidean_planes");
  const Vector p = vec({0.3, -0.2, 0.5});
  CHECK(max_abs(levi_civita_at(e.g, p).gamma) == 0.0);
  CHECK(max_abs(canonical_at(e.g, e.E, p).gamma) == 0.0);
  CHECK(max_abs(torsion_at(e.g, e.E, p).T) == 0.0);
  for (double r : curvature_at(e.g, e.E, p).R.data) CHECK(r == 0.0);
}

TEST_CASE("warped product closed forms") {
  const Scenario w = test::builtin("warped_product");
  for (double z : {-0.6, 0.0, 0.45}) {
    const Vector p = vec({0.2, -0.1, z});
    const ConnectionEval lc = levi_civita_at(w.g, p);
    CHECK(max_abs(minus(lc.gamma, warped_levi_civita(z))) <= 1e-13);
    const TorsionEval T = torsion_at(w.g, w.E, p);
    CHECK(max_abs(minus(T.T, warped_torsion())) <= 1e-13);
    const Matrix G = metric_at(w.g, p);
    const Tensor3<double> K = contorsion_of(warped_torsion(), G);
    const ConnectionEval can = canonical_at(w.g, w.E, p);
    CHECK(max_abs(minus(minus(can.gamma, lc.gamma), K)) <= 1e-13);
    // Leaves z = const are totally geodesic for the canonical connection.
    CHECK(std::abs(can.gamma(2, 0, 0)) <= 1e-13);
    CHECK(std::abs(can.gamma(2, 1, 1)) <= 1e-13);
  }
}

TEST_CASE("sphere foliation torsion is the radial shape operator") {
  const Scenario s = test::builtin("sphere_foliation");
  for (const Vector& p : random_points(s, 10, 3)) {
    const double rho = p.norm();
    const Vector xi = p / rho;
    Vector X = vec({-p(1), p(0), 0.0});
    if (X.norm() < 1e-3) X = vec({0.0, -p(2), p(1)});
    X.normalize();
    const Vector t = torsion_at(s.g, s.E, p)(xi, X);
    CHECK(t.dot(X) == doctest::Approx(1.0 / rho).epsilon(1e-10));
  }
}

TEST_CASE("torsion is antisymmetric and vanishes on E x E and on the complement") {
  for (const char* name : {"twisted_levels", "contact3d", "line_field"}) {
    const Scenario s = test::builtin(name);
    for (const Vector& p : random_points(s, 10, 4)) {
      const TorsionEval T = torsion_at(s.g, s.E, p);
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) CHECK(T.T(k, i, j) == -T.T(k, j, i));
      const auto pq = projector_at(s.g, s.E, p);
      const Vector u = vec({0.3, -0.7, 0.2}), v = vec({-0.4, 0.1, 0.9});
      CHECK(T(pq.P * u, pq.P * v).norm() <= 1e-9);
      CHECK(T(pq.Q * u, pq.Q * v).norm() <= 1e-9);
    }
  }
}

TEST_CASE("E = TM reduces to Levi-Civita") {
  const Scenario s = test::builtin("full_tm");
  for (const Vector& p : random_points(s, 20, 5)) {
    CHECK(max_abs(torsion_at(s.g, s.E, p).T) == 0.0);
    CHECK(max_abs(minus(canonical_at(s.g, s.E, p).gamma, levi_civita_at(s.g, p).gamma)) <= 1e-10);
    const ConnectionEval lc = levi_civita_at(s.g, p);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(lc.gamma(k, i, j) - lc.gamma(k, j, i)) <= 1e-10);
  }
}

TEST_CASE("Koszul right-hand side agrees with the coefficient tables") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_field = [&] { return VectorField::constant(vec({u(rng), u(rng), u(rng)})); };
  const Scenario full = test::builtin("full_tm");
  for (const Vector& p : random_points(full, 100, 6)) {
    const VectorField X = random_field(), Y = random_field(), Z = random_field();
    const TorsionEval zero{p, Tensor3<double>(3)};
    const Vector d = covariant_derivative(levi_civita_at(full.g, p), X, Y, p);
    CHECK(std::abs(0.5 * koszul_pairing(full.g, zero, X, Y, Z, p) - Z(p).dot(metric_at(full.g, p) * d)) <= 1e-8);
  }
  const Scenario t = test::builtin("twisted_levels");
  for (const Vector& p : random_points(t, 30, 7)) {
    const auto f = t.E.field(0);
    const VectorField Y = random_field(), Z = random_field();
    const TorsionEval T = torsion_at(t.g, t.E, p);
    const Vector d = covariant_derivative(canonical_at(t.g, t.E, p), f, Y, p);
    CHECK(std::abs(0.5 * koszul_pairing(t.g, T, f, Y, Z, p) - Z(p).dot(metric_at(t.g, p) * d)) <= 1e-8);
  }
}

TEST_CASE("blend endpoints and affine torsion") {
  const Scenario s = test::builtin("twisted_levels");
  const Vector p = vec({0.2, 0.3, -0.4});
  const ConnectionEval a = levi_civita_at(s.g, p), b = canonical_at(s.g, s.E, p);
  CHECK(blend(a, b, 0.0).gamma.data == a.gamma.data);
  CHECK(blend(a, b, 1.0).gamma.data == b.gamma.data);
  const TorsionEval t = torsion_of(blend(a, b, 0.3));
  const TorsionEval tb = torsion_at(s.g, s.E, p);
  for (std::size_t i = 0; i < t.T.data.size(); ++i) CHECK(std::abs(t.T.data[i] - 0.3 * tb.T.data[i]) <= 1e-10);
}

TEST_CASE("comparison connections") {
  const Scenario full = test::builtin("full_tm");
  const Vector p = vec({0.1, 0.4, -0.3});
  const auto X = VectorField::constant(vec({0.5, -1, 0.2}));
  const auto Y = full.E.field(1).scaled([](const auto& x) { return x(0) + 2.0; });
  const Vector lc = covariant_derivative(levi_civita_at(full.g, p), X, Y, p);
  CHECK((schouten_van_kampen_at(full.g, full.E, X, Y, p) - lc).norm() <= 1e-12);
  CHECK((vranceanu_at(full.g, full.E, X, Y, p) - lc).norm() <= 1e-12);

  // Flat planes: derivative of an E-field along E is the flat one, projected.
  const Scenario e = test::builtin("euclidean_planes");
  const auto Ye = VectorField([](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    Vec<S> out(3);
    out(0) = x(1) * x(1);
    out(1) = sin(x(0));
    out(2) = S(0.0);
    return out;
  });
  const auto Xe = VectorField::constant(vec({0.3, 0.8, 0}));
  const Vector q = vec({0.2, 0.6, -0.1});
  const Vector flat = vec({2 * q(1) * 0.8, std::cos(q(0)) * 0.3, 0});
  CHECK((schouten_van_kampen_at(e.g, e.E, Xe, Ye, q) - flat).norm() <= 1e-14);
  CHECK((vranceanu_at(e.g, e.E, Xe, Ye, q) - flat).norm() <= 1e-14);
}

TEST_CASE("Bott derivative and defect identity") {
  const Scenario e = test::builtin("euclidean_planes");
  const Vector p = vec({0.1, 0.2, 0.3});
  const BottEval b = bott_at(e.g, e.E, VectorField::constant(vec({1, 0, 0})), VectorField::constant(vec({0, 0, 1})), p);
  CHECK(b.derivative.norm() == 0.0);
  CHECK(b.defect == 0.0);

  const Scenario w = test::builtin("warped_product");
  const auto dx = VectorField::constant(vec({1, 0, 0}));
  const auto xi = VectorField::constant(vec({0, 0, 1})).scaled([](const auto& x) { return 1.0 + 0.5 * x(0); });
  const Vector q = vec({0.3, -0.2, 0.4});
  CHECK(bott_at(w.g, w.E, dx, VectorField::constant(vec({0, 0, 1})), q).defect == 0.0);
  const DefectIdentity id = bott_defect_identity(w.g, w.E, dx, xi, xi, q);
  CHECK(std::abs(id.lhs - id.rhs) <= 1e-8);
  // (L_X g)(ξ, ξ) = X g(ξ, ξ) − 2 g([X, ξ], ξ) with [∂x, ξ] = ½ ∂z.
  const double h = 1e-6;
  auto gxx = [&](const Vector& y) { return xi(y).dot(metric_at(w.g, y) * xi(y)); };
  const double xg = (gxx(q + h * vec({1, 0, 0})) - gxx(q - h * vec({1, 0, 0}))) / (2 * h);
  const Vector br = vec({0, 0, 0.5});  // [∂x, ξ]
  const double lie = xg - 2 * br.dot(metric_at(w.g, q) * xi(q));
  CHECK(std::abs(id.rhs - lie) <= 1e-8);
}

TEST_CASE("round sphere curvature") {
  const Scenario s = test::round_sphere();
  for (double th : {0.6, 1.1, 1.5707963267948966, 2.3}) {
    const Vector p = vec({th, 0.4});
    const ConnectionEval c = canonical_at(s.g, s.E, p);
    CHECK(c.gamma(0, 1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-13));
    CHECK(c.gamma(1, 0, 1) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-13));
    const CurvatureEval R = curvature_at(s.g, s.E, p);
    CHECK(R.R(0, 1, 0, 1) == doctest::Approx(std::sin(th) * std::sin(th)).epsilon(1e-12));
    CHECK(R.R(1, 0, 0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("curvature agrees with finite differences of the coefficients") {
  for (const char* name : {"twisted_levels", "sphere_foliation", "line_field"}) {
    const Scenario s = test::builtin(name);
    const Vector p = s.base + vec({0.1, -0.15, 0.05});
    const CurvatureEval R = curvature_at(s.g, s.E, p);
    const ConnectionEval c = canonical_at(s.g, s.E, p);
    const double h = 1e-5;
    std::vector<Tensor3<double>> d;
    for (int m = 0; m < 3; ++m) {
      Vector e = Vector::Zero(3);
      e(m) = h;
      // Pivots of the frame may differ between neighbours; Γ does not.
      const Tensor3<double> a = canonical_at(s.g, s.E, p + e).gamma, b = canonical_at(s.g, s.E, p - e).gamma;
      Tensor3<double> dm(3);
      for (std::size_t i = 0; i < dm.data.size(); ++i) dm.data[i] = (a.data[i] - b.data[i]) / (2 * h);
      d.push_back(dm);
    }
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double v = d[i](l, j, k) - d[j](l, i, k);
            for (int m = 0; m < 3; ++m) v += c.gamma(l, i, m) * c.gamma(m, j, k) - c.gamma(l, j, m) * c.gamma(m, i, k);
            CHECK(std::abs(R.R(l, k, i, j) - v) <= 1e-6);
            CHECK(R.R(l, k, i, j) == -R.R(l, k, j, i));
          }
  }
}

TEST_CASE("fast Christoffel kernel matches the reference kernel") {
  for (const auto& name : builtin_scenario_names()) {
    const Scenario s = test::builtin(name);
    const ChristoffelField fast(s.g, s.E, s.base);
    double gamma[kMaxDim * kMaxDim * kMaxDim];
    for (const Vector& p : random_points(s, 50, 8)) {
      const ConnectionEval ref = canonical_at(s.g, s.E, p);
      fast.eval(p.data(), gamma);
      double worst = 0.0;
      for (std::size_t i = 0; i < ref.gamma.data.size(); ++i)
        worst = std::max(worst, std::abs(gamma[i] - ref.gamma.data[i]));
      CHECK_MESSAGE(worst <= 1e-12, name);
    }
  }
}

TEST_CASE("generic dimension path of the fast kernel") {
  // n = 5 goes through the runtime-sized path.
  const Scenario s = test::custom(5,
                                  {"1 + 0.1*x2^2", "0", "0", "0", "0.05*x1", "1", "0", "0", "0", "exp(0.2*x3)", "0",
                                   "0", "1 + 0.1*x4^2", "0", "1"},
                                  {{"1", "0", "0", "0", "x2"}, {"0", "1", "0", "x1", "0"}}, -1, 1);
  const ChristoffelField fast(s.g, s.E, s.base);
  double gamma[kMaxDim * kMaxDim * kMaxDim];
  for (const Vector& p : random_points(s, 10, 9)) {
    const ConnectionEval ref = canonical_at(s.g, s.E, p);
    fast.eval(p.data(), gamma);
    for (std::size_t i = 0; i < ref.gamma.data.size(); ++i) CHECK(std::abs(gamma[i] - ref.gamma.data[i]) <= 1e-12);
  }
}
