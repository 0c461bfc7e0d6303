#include "frob/connection.hpp"

#include <cmath>

namespace frob {

std::string to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::canonical: return "canonical";
    case ConnectionKind::levi_civita: return "levi_civita";
    case ConnectionKind::schouten_van_kampen: return "schouten_van_kampen";
    case ConnectionKind::vranceanu: return "vranceanu";
    case ConnectionKind::blend: return "blend";
  }
  return "unknown";
}

Vector CurvatureEval::operator()(const Vector& u, const Vector& v, const Vector& w) const {
  const int n = R.n;
  Vector out = Vector::Zero(n);
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += R(l, k, i, j) * u(i) * v(j) * w(k);
    out(l) = s;
  }
  return out;
}

ConnectionEval levi_civita_at(const MetricField& g, const Vector& p) {
  metric_at(g, p);
  const auto mj = kernel::metric_jet(g, p);
  ConnectionEval c;
  c.point = p;
  c.kind = ConnectionKind::levi_civita;
  c.gamma = kernel::levi_civita(mj, spd_inverse(mj.G, "metric"));
  return c;
}

TorsionEval torsion_at(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  metric_at(g, p);
  check_frame_independent(e, p);
  const auto pivots = choose_pivots(g, e, p);
  TorsionEval t;
  t.point = p;
  t.T = kernel::torsion(g, e, pivots, p, kernel::metric_jet(g, p));
  return t;
}

ConnectionEval canonical_at(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  metric_at(g, p);
  check_frame_independent(e, p);
  ConnectionEval c;
  c.point = p;
  c.kind = ConnectionKind::canonical;
  c.gamma = kernel::canonical(g, e, choose_pivots(g, e, p), p).gamma;
  return c;
}

CanonicalJet canonical_jet(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  const int n = g.dimension();
  const auto pivots = choose_pivots(g, e, p);
  CanonicalJet jet;
  jet.point = p;
  jet.dgamma.resize(static_cast<std::size_t>(n));
  jet.dtorsion.resize(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const auto c = kernel::canonical(g, e, pivots, seed_point(p, Vector(Vector::Unit(n, m))));
    auto& dg = jet.dgamma[static_cast<std::size_t>(m)];
    auto& dt = jet.dtorsion[static_cast<std::size_t>(m)];
    dg = Tensor3<double>(n);
    dt = Tensor3<double>(n);
    if (m == 0) {
      jet.gamma = Tensor3<double>(n);
      jet.torsion = Tensor3<double>(n);
    }
    for (std::size_t i = 0; i < dg.data.size(); ++i) {
      dg.data[i] = c.gamma.data[i].du;
      dt.data[i] = c.torsion.data[i].du;
      if (m == 0) {
        jet.gamma.data[i] = c.gamma.data[i].re;
        jet.torsion.data[i] = c.torsion.data[i].re;
      }
    }
  }
  return jet;
}

CurvatureEval curvature_from_jet(const CanonicalJet& jet) {
  const int n = jet.gamma.n;
  const auto& G = jet.gamma;
  CurvatureEval out;
  out.point = jet.point;
  out.R = Tensor4(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = jet.dgamma[static_cast<std::size_t>(i)](l, j, k) - jet.dgamma[static_cast<std::size_t>(j)](l, i, k);
          for (int m = 0; m < n; ++m) s += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          out.R(l, k, i, j) = s;
        }
  return out;
}

CurvatureEval curvature_at(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  metric_at(g, p);
  check_frame_independent(e, p);
  return curvature_from_jet(canonical_jet(g, e, p));
}

TorsionEval torsion_of(const ConnectionEval& c) {
  const int n = c.gamma.n;
  TorsionEval t;
  t.point = c.point;
  t.T = Tensor3<double>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t.T(k, i, j) = c.gamma(k, i, j) - c.gamma(k, j, i);
  return t;
}

double koszul_pairing(const MetricField& g, const TorsionEval& T, const VectorField& x, const VectorField& y,
                      const VectorField& z, const Vector& p) {
  const Matrix G = g.eval(p);
  const Vector X = x(p), Y = y(p), Z = z(p);
  return metric_derivative(g, x, y, z, p) - metric_derivative(g, z, x, y, p) + metric_derivative(g, y, z, x, p) +
         inner(G, lie_bracket(z, x, p), Y) - inner(G, lie_bracket(y, z, p), X) + inner(G, lie_bracket(x, y, p), Z) +
         inner(G, T(Z, X), Y) - inner(G, T(Y, Z), X) + inner(G, T(X, Y), Z);
}

ConnectionEval blend(const ConnectionEval& c1, const ConnectionEval& c2, double lambda) {
  if (c1.point.size() != c2.point.size() || c1.point != c2.point || c1.gamma.n != c2.gamma.n)
    throw GeometryError("blend: connections evaluated at different points");
  ConnectionEval out = c1;
  out.kind = ConnectionKind::blend;
  for (std::size_t i = 0; i < out.gamma.data.size(); ++i)
    out.gamma.data[i] = (1.0 - lambda) * c1.gamma.data[i] + lambda * c2.gamma.data[i];
  return out;
}

Vector covariant_derivative(const ConnectionEval& c, const VectorField& x, const VectorField& y, const Vector& p) {
  const Vector X = x(p);
  return derivative(y, p, X) + c(X, y(p));
}

Vector schouten_van_kampen_at(const MetricField& g, const DistributionSpec& e, const VectorField& x,
                              const VectorField& y, const Vector& p) {
  const ProjectorPair pq = projector_at(g, e, p);
  const ConnectionEval lc = levi_civita_at(g, p);
  const VectorField py = project_tangent(g, e, y);
  const VectorField qy = project_normal(g, e, y);
  return pq.P * covariant_derivative(lc, x, py, p) + pq.Q * covariant_derivative(lc, x, qy, p);
}

Vector vranceanu_at(const MetricField& g, const DistributionSpec& e, const VectorField& x, const VectorField& y,
                    const Vector& p) {
  const ProjectorPair pq = projector_at(g, e, p);
  const ConnectionEval lc = levi_civita_at(g, p);
  const VectorField px = project_tangent(g, e, x);
  const VectorField qx = project_normal(g, e, x);
  const VectorField py = project_tangent(g, e, y);
  const VectorField qy = project_normal(g, e, y);
  return pq.P * covariant_derivative(lc, px, py, p) + pq.Q * covariant_derivative(lc, qx, qy, p) +
         pq.P * lie_bracket(qx, py, p) + pq.Q * lie_bracket(px, qy, p);
}

namespace {

template <class F>
ConnectionEval coefficients(const MetricField& g, const Vector& p, ConnectionKind kind, F&& derivative_of) {
  const int n = g.dimension();
  ConnectionEval c;
  c.point = p;
  c.kind = kind;
  c.gamma = Tensor3<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vector v = derivative_of(VectorField::constant(Vector::Unit(n, i)), VectorField::constant(Vector::Unit(n, j)));
      for (int k = 0; k < n; ++k) c.gamma(k, i, j) = v(k);
    }
  return c;
}

void require_membership(const Matrix& G, const Matrix& proj, const Vector& v, const char* what) {
  const double scale = std::max(1.0, g_norm(G, v));
  if (g_norm(G, proj * v) > 1e-8 * scale) throw GeometryError(what);
}

}  // namespace

ConnectionEval schouten_van_kampen_coefficients(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  return coefficients(g, p, ConnectionKind::schouten_van_kampen,
                      [&](const VectorField& x, const VectorField& y) { return schouten_van_kampen_at(g, e, x, y, p); });
}

ConnectionEval vranceanu_coefficients(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  return coefficients(g, p, ConnectionKind::vranceanu,
                      [&](const VectorField& x, const VectorField& y) { return vranceanu_at(g, e, x, y, p); });
}

BottEval bott_at(const MetricField& g, const DistributionSpec& e, const VectorField& x, const VectorField& xi,
                 const Vector& p) {
  const ProjectorPair pq = projector_at(g, e, p);
  const Matrix G = g.eval(p);
  require_membership(G, pq.Q, x(p), "bott_at: X(p) is not in E_p");
  require_membership(G, pq.P, xi(p), "bott_at: xi(p) is not in the orthogonal complement of E_p");
  BottEval out;
  out.derivative = pq.Q * lie_bracket(x, xi, p);
  out.defect = lie_derivative_metric(g, x, xi, xi, p);
  return out;
}

DefectIdentity bott_defect_identity(const MetricField& g, const DistributionSpec& e, const VectorField& x,
                                    const VectorField& xi, const VectorField& eta, const Vector& p) {
  const Matrix G = g.eval(p);
  const ProjectorPair pq = projector_at(g, e, p);
  require_membership(G, pq.P, eta(p), "bott_defect_identity: eta(p) is not in the orthogonal complement of E_p");
  const BottEval dxi = bott_at(g, e, x, xi, p);
  const Vector deta = pq.Q * lie_bracket(x, eta, p);
  DefectIdentity out;
  out.lhs = metric_derivative(g, x, xi, eta, p) - inner(G, dxi.derivative, eta(p)) - inner(G, xi(p), deta);
  out.rhs = lie_derivative_metric(g, x, xi, eta, p);
  return out;
}

}  // namespace frob
