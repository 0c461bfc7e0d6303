#include "frob/checks.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "frob/connection.hpp"
#include "frob/transport.hpp"

namespace frob {

CheckRecord make_check(std::string id, std::string probe, double value, double threshold,
                       const std::string& relation) {
  CheckRecord c;
  c.id = std::move(id);
  c.probe = std::move(probe);
  c.value = value;
  c.threshold = threshold;
  c.relation = relation;
  if (relation == "<=")
    c.pass = value <= threshold;
  else if (relation == ">")
    c.pass = value > threshold;
  else if (relation == ">=")
    c.pass = value >= threshold;
  else
    throw Error("unknown check relation '" + relation + "'");
  return c;
}

std::uint64_t ProbeRng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double ProbeRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Vector> probe_points(const Scenario& s, int count, std::uint64_t seed) {
  const Box box = s.g.domain().shrunk(0.1);
  ProbeRng rng(seed);
  std::vector<Vector> out;
  for (int c = 0; c < count; ++c) {
    Vector p(box.dimension());
    for (int i = 0; i < box.dimension(); ++i) p(i) = rng.uniform(box.lo(i), box.hi(i));
    out.push_back(p);
  }
  return out;
}

std::string describe_point(const Vector& p) {
  std::string out = "p=(";
  char buf[40];
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p(i));
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + ")";
}

bool is_involutive(const Scenario& s) {
  if (involutivity_residual(s.g, s.E, s.base) > kInvolutivityGate) return false;
  for (const Vector& p : probe_points(s, 20, s.numerics().seed))
    if (involutivity_residual(s.g, s.E, p) > kInvolutivityGate) return false;
  return true;
}

Vector reference_velocity(const Scenario& s) {
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  const int n = s.g.dimension();
  return 0.5 * F.rowwise().sum() / std::sqrt(static_cast<double>(n));
}

Vector reference_variation(const Scenario& s) {
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  const int n = s.g.dimension();
  Vector w(n);
  for (int c = 0; c < n; ++c) w(c) = (c % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.25 * c);
  return 0.3 * F * w / w.norm();
}

namespace checks {

namespace {

// Tracks the worst value and where it happened.
struct Worst {
  double value = 0.0;
  std::string probe = "none";
  bool seen = false;
  void update(double v, const std::string& where) {
    if (!seen || !(v <= value)) {  // NaN propagates as worst
      seen = true;
      value = v;
      probe = where;
    }
  }
};

double tol(const Scenario& s, const std::string& id, double fallback) { return s.numerics().tolerance(id, fallback); }

// Unit (in g) random combination of columns [c0, c1) of F.
Vector random_combination(const Matrix& G, const Matrix& F, int c0, int c1, ProbeRng& rng) {
  Vector v = Vector::Zero(F.rows());
  for (int c = c0; c < c1; ++c) v += rng.uniform(-1.0, 1.0) * F.col(c);
  const double nv = g_norm(G, v);
  if (!(nv > 1e-3)) return F.col(c0);
  return v / nv;
}

// Σ cᵢ Fᵢ with constant random coefficients over fields [c0, c1).
VectorField combination_field(const std::vector<VectorField>& fields, int c0, int c1, ProbeRng& rng) {
  std::vector<VectorField> fs(fields.begin() + c0, fields.begin() + c1);
  std::vector<double> cs;
  for (int c = c0; c < c1; ++c) cs.push_back(c == c0 ? rng.uniform(0.5, 1.5) : rng.uniform(-1.0, 1.0));
  return VectorField([fs, cs](const auto& p) {
    using S = typename std::decay_t<decltype(p)>::Scalar;
    Vec<S> out = cs[0] * fs[0](p);
    for (std::size_t i = 1; i < fs.size(); ++i) out += cs[i] * fs[i](p);
    return out;
  });
}

double max_abs_diff(const Tensor3<double>& a, const Tensor3<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace

CheckRecord reduction_to_levi_civita(const Scenario& s, const std::vector<Vector>& probes) {
  Worst w;
  for (const Vector& p : probes)
    w.update(max_abs_diff(canonical_at(s.g, s.E, p).gamma, levi_civita_at(s.g, p).gamma), describe_point(p));
  return make_check("reduction.levi_civita", w.probe, w.value, tol(s, "reduction.levi_civita", 1e-10));
}

std::vector<CheckRecord> torsion_conditions(const Scenario& s, const std::vector<Vector>& probes) {
  const int n = s.g.dimension(), r = s.E.rank();
  Worst c1, c2, c3;
  for (const Vector& p : probes) {
    const std::string where = describe_point(p);
    const Matrix G = s.g.eval(p);
    const Matrix F = adapted_frame_at(s.g, s.E, p).vectors;
    const auto fields = adapted_frame_fields(s.g, s.E, p);
    const TorsionEval T = torsion_at(s.g, s.E, p);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if ((a < r) == (b < r)) c1.update(g_norm(G, T(F.col(a), F.col(b))), where);
    for (int al = r; al < n; ++al)
      for (int i = 0; i < r; ++i) {
        const Vector t = T(F.col(al), F.col(i));
        for (int j = 0; j < r; ++j) {
          const double lie = lie_derivative_metric(s.g, fields[al], fields[i], fields[j], p);
          c2.update(std::abs(inner(G, t, Vector(F.col(j))) - 0.5 * lie), where);
        }
        for (int be = r; be < n; ++be) {
          const double lie = lie_derivative_metric(s.g, fields[i], fields[al], fields[be], p);
          c3.update(std::abs(inner(G, t, Vector(F.col(be))) + 0.5 * lie), where);
        }
      }
  }
  return {make_check("torsion.condition1", c1.probe, c1.value, tol(s, "torsion.condition1", 1e-9)),
          make_check("torsion.condition2", c2.probe, c2.value, tol(s, "torsion.condition2", 1e-8)),
          make_check("torsion.condition3", c3.probe, c3.value, tol(s, "torsion.condition3", 1e-8))};
}

CheckRecord metric_compatibility(const Scenario& s, const std::vector<Vector>& probes) {
  const int n = s.g.dimension();
  Worst w;
  for (const Vector& p : probes) {
    const auto mj = kernel::metric_jet(s.g, p);
    const ConnectionEval c = canonical_at(s.g, s.E, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = mj.dG[static_cast<std::size_t>(i)](j, k);
          for (int m = 0; m < n; ++m) v -= c.gamma(m, i, j) * mj.G(m, k) + c.gamma(m, i, k) * mj.G(j, m);
          w.update(std::abs(v), describe_point(p));
        }
  }
  return make_check("connection.metric_compatibility", w.probe, w.value,
                    tol(s, "connection.metric_compatibility", 1e-8));
}

CheckRecord torsion_recovery(const Scenario& s, const std::vector<Vector>& probes) {
  Worst w;
  for (const Vector& p : probes)
    w.update(max_abs_diff(torsion_of(canonical_at(s.g, s.E, p)).T, torsion_at(s.g, s.E, p).T), describe_point(p));
  return make_check("connection.torsion_recovery", w.probe, w.value, tol(s, "connection.torsion_recovery", 1e-9));
}

CheckRecord koszul_agreement(const Scenario& s, const std::vector<Vector>& probes) {
  const int n = s.g.dimension();
  Worst w;
  for (const Vector& p : probes) {
    const Matrix G = s.g.eval(p);
    const auto fields = adapted_frame_fields(s.g, s.E, p);
    const TorsionEval T = torsion_at(s.g, s.E, p);
    const ConnectionEval c = canonical_at(s.g, s.E, p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Vector d = covariant_derivative(c, fields[a], fields[b], p);
        for (int e = 0; e < n; ++e) {
          const double k = 0.5 * koszul_pairing(s.g, T, fields[a], fields[b], fields[e], p);
          w.update(std::abs(k - inner(G, d, fields[e](p))), describe_point(p));
        }
      }
  }
  return make_check("connection.koszul", w.probe, w.value, tol(s, "connection.koszul", 1e-8));
}

CheckRecord total_geodesy(const Scenario& s, const std::vector<Vector>& probes) {
  const int n = s.g.dimension(), r = s.E.rank();
  Worst w;
  for (const Vector& p : probes) {
    const Matrix G = s.g.eval(p);
    const auto fields = adapted_frame_fields(s.g, s.E, p);
    const ConnectionEval c = canonical_at(s.g, s.E, p);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const Vector d = covariant_derivative(c, fields[i], fields[j], p);
        for (int a = r; a < n; ++a) w.update(std::abs(inner(G, d, fields[a](p))), describe_point(p));
      }
  }
  return make_check("connection.total_geodesy", w.probe, w.value, tol(s, "connection.total_geodesy", 1e-8));
}

CheckRecord curvature_antisymmetry(const Scenario& s, const std::vector<Vector>& probes) {
  const int n = s.g.dimension();
  Worst w;
  for (const Vector& p : probes) {
    const CurvatureEval R = curvature_at(s.g, s.E, p);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) w.update(std::abs(R.R(l, k, i, j) + R.R(l, k, j, i)), describe_point(p));
  }
  return make_check("curvature.antisymmetry", w.probe, w.value, tol(s, "curvature.antisymmetry", 1e-8));
}

CheckRecord curvature_closure(const Scenario& s, const std::vector<Vector>& probes) {
  const int r = s.E.rank();
  Worst w;
  for (const Vector& p : probes) {
    const CurvatureEval R = curvature_at(s.g, s.E, p);
    const Matrix G = s.g.eval(p);
    const Matrix Q = projector_at(s.g, s.E, p).Q;
    const Matrix F = adapted_frame_at(s.g, s.E, p).vectors;
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c)
          w.update(g_norm(G, Q * R(F.col(a), F.col(b), F.col(c))), describe_point(p));
  }
  return make_check("curvature.e_closure", w.probe, w.value, tol(s, "curvature.e_closure", 1e-7));
}

CheckRecord geodesic_confinement(const Scenario& s, int count, std::uint64_t seed) {
  const int r = s.E.rank();
  const Matrix G0 = s.g.eval(s.base);
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  const ChristoffelField gamma(s.g, s.E, s.base);
  ProbeRng rng(seed);
  Worst w;
  for (int c = 0; c < count; ++c) {
    const Vector v0 = 0.5 * random_combination(G0, F, 0, r, rng);
    const Trajectory tr = integrate_geodesic(gamma, s.base, v0, 1.0, s.numerics().step);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const Matrix G = s.g.eval(tr.x[k]);
      const Matrix Q = projector_at(s.g, s.E, tr.x[k]).Q;
      w.update(g_norm(G, Q * tr.v[k]), "v0 #" + std::to_string(c) + " t=" + std::to_string(tr.t[k]));
    }
  }
  return make_check("transport.geodesic_in_E", w.probe, w.value, tol(s, "transport.geodesic_in_E", 1e-6));
}

std::vector<CheckRecord> transport_membership(const Scenario& s, int count, std::uint64_t seed) {
  const int n = s.g.dimension(), r = s.E.rank();
  const Matrix G0 = s.g.eval(s.base);
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  const ChristoffelField gamma(s.g, s.E, s.base);
  ProbeRng rng(seed);
  Worst inE, inPerp;
  for (int c = 0; c < count; ++c) {
    const Vector v0 = 0.5 * random_combination(G0, F, 0, r, rng);
    const Trajectory tr = integrate_geodesic(gamma, s.base, v0, 1.0, s.numerics().step);
    const TransportState te = parallel_transport(gamma, tr, random_combination(G0, F, 0, r, rng));
    std::optional<TransportState> tp;
    if (r < n) tp = parallel_transport(gamma, tr, random_combination(G0, F, r, n, rng));
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const Matrix G = s.g.eval(tr.x[k]);
      const ProjectorPair pq = projector_at(s.g, s.E, tr.x[k]);
      const std::string where = "curve #" + std::to_string(c) + " t=" + std::to_string(tr.t[k]);
      inE.update(g_norm(G, pq.Q * te.V[k]), where);
      if (tp) inPerp.update(g_norm(G, pq.P * tp->V[k]), where);
    }
  }
  std::vector<CheckRecord> out;
  out.push_back(make_check("transport.parallel_E", inE.probe, inE.value, tol(s, "transport.parallel_E", 1e-6)));
  if (r < n)
    out.push_back(make_check("transport.parallel_E_perp", inPerp.probe, inPerp.value,
                             tol(s, "transport.parallel_E_perp", 1e-6)));
  return out;
}

CheckRecord energy_conservation(const Scenario& s, int count, std::uint64_t seed) {
  const int n = s.g.dimension();
  const Matrix G0 = s.g.eval(s.base);
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  const ChristoffelField gamma(s.g, s.E, s.base);
  ProbeRng rng(seed);
  Worst w;
  for (int c = 0; c < count; ++c) {
    const Vector v0 = c == 0 ? reference_velocity(s) : Vector(0.5 * random_combination(G0, F, 0, n, rng));
    const Trajectory tr = integrate_geodesic(gamma, s.base, v0, 1.0, s.numerics().step);
    const double e0 = inner(G0, v0, v0);
    for (std::size_t k = 0; k < tr.size(); ++k)
      w.update(std::abs(inner(Matrix(s.g.eval(tr.x[k])), tr.v[k], tr.v[k]) - e0),
               "curve #" + std::to_string(c) + " t=" + std::to_string(tr.t[k]));
  }
  return make_check("transport.energy", w.probe, w.value, tol(s, "transport.energy", 1e-7));
}

CheckRecord jacobi_confinement(const Scenario& s) {
  const int r = s.E.rank();
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  const Vector v0 = 0.5 * (F.col(0) + F.col(r - 1)).normalized();
  const Matrix G0 = s.g.eval(s.base);
  const Vector v = v0 / g_norm(G0, v0) * 0.5;
  const Vector Y = 0.4 * F.col(r - 1) - 0.2 * F.col(0);
  const Trajectory tr = integrate_geodesic(s.g, s.E, s.base, v, 1.0, s.numerics().step);
  const TransportState js = jacobi_field_ode(s.g, s.E, tr, Vector::Zero(s.g.dimension()), Y);
  Worst w;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Matrix G = s.g.eval(tr.x[k]);
    w.update(g_norm(G, projector_at(s.g, s.E, tr.x[k]).Q * js.J[k]), "t=" + std::to_string(tr.t[k]));
  }
  return make_check("jacobi.confinement", w.probe, w.value, tol(s, "jacobi.confinement", 1e-5));
}

CheckRecord jacobi_oracle(const Scenario& s) {
  const int n = s.g.dimension();
  const Vector X = reference_velocity(s);
  const Vector Y = reference_variation(s);
  const double h = s.numerics().step;
  const Trajectory tr = integrate_geodesic(s.g, s.E, s.base, X, 1.0, h);
  const TransportState js = jacobi_field_ode(s.g, s.E, tr, Vector::Zero(n), Y);
  Worst worst;
  for (double t : {0.25, 0.5, 1.0}) {
    const std::size_t k = static_cast<std::size_t>(std::llround(t / tr.h));
    const Vector oracle = variation_jacobi_oracle(s.g, s.E, s.base, X, Y, t, h);
    worst.update((js.J[k] - oracle).norm() / oracle.norm(), "t=" + std::to_string(t));
  }
  return make_check("jacobi.oracle", worst.probe, worst.value, tol(s, "jacobi.oracle", 1e-4));
}

CheckRecord jacobi_velocity(const Scenario& s) {
  const Vector X = reference_velocity(s);
  const Trajectory tr = integrate_geodesic(s.g, s.E, s.base, X, 1.0, s.numerics().step);
  const TransportState js = jacobi_field_ode(s.g, s.E, tr, X, Vector::Zero(s.g.dimension()));
  Worst w;
  for (std::size_t k = 0; k < tr.size(); ++k) w.update((js.J[k] - tr.v[k]).norm(), "t=" + std::to_string(tr.t[k]));
  return make_check("jacobi.velocity", w.probe, w.value, tol(s, "jacobi.velocity", 1e-6));
}

CheckRecord blend_affine(const Scenario& s, const std::vector<Vector>& probes, std::uint64_t seed) {
  ProbeRng rng(seed);
  Worst w;
  for (const Vector& p : probes) {
    const double lambda = rng.uniform();
    const ConnectionEval lc = levi_civita_at(s.g, p);
    const ConnectionEval can = canonical_at(s.g, s.E, p);
    const TorsionEval tb = torsion_of(blend(lc, can, lambda));
    const TorsionEval t1 = torsion_of(lc);
    const TorsionEval t2 = torsion_at(s.g, s.E, p);
    double m = 0.0;
    for (std::size_t i = 0; i < tb.T.data.size(); ++i)
      m = std::max(m, std::abs(tb.T.data[i] - ((1.0 - lambda) * t1.T.data[i] + lambda * t2.T.data[i])));
    w.update(m, describe_point(p) + " lambda=" + std::to_string(lambda));
  }
  return make_check("connection.blend_affine", w.probe, w.value, tol(s, "connection.blend_affine", 1e-10));
}

CheckRecord bott_identity(const Scenario& s, const std::vector<Vector>& probes, std::uint64_t seed) {
  const int n = s.g.dimension(), r = s.E.rank();
  if (r == n) {
    CheckRecord c = make_check("bott.defect_identity", "none", 0.0, tol(s, "bott.defect_identity", 1e-8));
    c.note = "vacuous: E = TM has no orthogonal complement";
    return c;
  }
  constexpr double fd = 1e-5;
  ProbeRng rng(seed);
  Worst w;
  for (const Vector& p : probes) {
    const auto fields = adapted_frame_fields(s.g, s.E, p);
    const VectorField X = combination_field(fields, 0, r, rng);
    const VectorField xi = combination_field(fields, r, n, rng);
    const VectorField eta = combination_field(fields, r, n, rng);
    const DefectIdentity id = bott_defect_identity(s.g, s.E, X, xi, eta, p);
    // Same left side with X g(ξ, η) by central differences along X(p).
    const Vector dx = fd * X(p);
    auto pairing = [&](const Vector& q) { return inner(Matrix(s.g.eval(q)), xi(q), eta(q)); };
    const Matrix G = s.g.eval(p);
    const BottEval bx = bott_at(s.g, s.E, X, xi, p);
    const BottEval be = bott_at(s.g, s.E, X, eta, p);
    const double lhs_fd = (pairing(p + dx) - pairing(p - dx)) / (2.0 * fd) - inner(G, bx.derivative, eta(p)) -
                          inner(G, xi(p), be.derivative);
    w.update(std::max(std::abs(id.lhs - id.rhs), std::abs(lhs_fd - id.rhs)), describe_point(p));
  }
  return make_check("bott.defect_identity", w.probe, w.value, tol(s, "bott.defect_identity", 1e-8));
}

CheckRecord comparison_witness(const Scenario& s, const std::vector<Vector>& probes) {
  const int n = s.g.dimension();
  Worst w;
  for (const Vector& p : probes) {
    const Matrix G = s.g.eval(p);
    const auto fields = adapted_frame_fields(s.g, s.E, p);
    const ConnectionEval c = canonical_at(s.g, s.E, p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Vector d = covariant_derivative(c, fields[a], fields[b], p);
        const double to_svk = g_norm(G, d - schouten_van_kampen_at(s.g, s.E, fields[a], fields[b], p));
        const double to_vr = g_norm(G, d - vranceanu_at(s.g, s.E, fields[a], fields[b], p));
        w.update(std::min(to_svk, to_vr),
                 describe_point(p) + " X=frame" + std::to_string(a + 1) + " Y=frame" + std::to_string(b + 1));
      }
  }
  return make_check("compare.differs_from_both", w.probe, w.value, tol(s, "compare.differs_from_both", 1e-4), ">");
}

CheckRecord rk4_convergence(const Scenario& s) {
  const ChristoffelField gamma(s.g, s.E, s.base);
  const ConvergenceStudy st = rk4_self_convergence(gamma, s.base, reference_velocity(s), 1.0, 0.1, 4);
  std::string probe = "h0=0.1 levels=4 differences=";
  for (double d : st.differences) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g ", d);
    probe += buf;
  }
  CheckRecord c = make_check("transport.rk4_order", probe, st.observed_order(), tol(s, "transport.rk4_order", 3.5), ">=");
  if (st.exact) c.note = "endpoint differences at roundoff: RK4 is exact on this curve";
  return c;
}

CheckRecord chart_tangency(const Scenario& s, ExecPolicy policy, std::optional<FrobeniusChart>* keep) {
  const bool involutive = is_involutive(s);
  ChartOptions o;
  o.h = s.numerics().step;
  o.frame_rule = s.numerics().frame_rule;
  o.check = involutive ? IntegrabilityCheck::strict : IntegrabilityCheck::warn;
  o.policy = policy;
  FrobeniusChart chart(s.g, s.E, s.base, s.numerics().delta, s.numerics().grid, o);
  std::size_t worst = 0;
  double value = 0.0;
  for (std::size_t i = 0; i < chart.grid_size(); ++i)
    if (chart.interior(i) && chart.grid_residuals()[i] >= value) {
      value = chart.grid_residuals()[i];
      worst = i;
    }
  const std::string probe = "x" + describe_point(chart.grid_params()[worst]).substr(1);
  CheckRecord c = involutive
                      ? make_check("chart.tangency", probe, value, tol(s, "chart.tangency", 1e-5))
                      : make_check("chart.integrability_failure", probe, value, tol(s, "chart.integrability_failure", 1e-2), ">");
  if (keep) keep->emplace(std::move(chart));
  return c;
}

std::vector<CheckRecord> full_suite(const Scenario& s, ExecPolicy policy) {
  const std::uint64_t seed = s.numerics().seed;
  const auto probes = probe_points(s, 200, seed);
  const std::vector<Vector> few(probes.begin(), probes.begin() + 100);
  const bool involutive = is_involutive(s);
  const int n = s.g.dimension(), r = s.E.rank();

  std::vector<CheckRecord> out;
  auto add = [&](CheckRecord c) { out.push_back(std::move(c)); };
  auto add_all = [&](std::vector<CheckRecord> cs) {
    for (auto& c : cs) out.push_back(std::move(c));
  };

  if (r == n) add(reduction_to_levi_civita(s, few));
  add_all(torsion_conditions(s, probes));
  add(metric_compatibility(s, probes));
  add(torsion_recovery(s, probes));
  add(koszul_agreement(s, few));
  add(blend_affine(s, few, seed + 1));
  add(bott_identity(s, few, seed + 2));
  const std::vector<Vector> curv(probes.begin(), probes.begin() + 20);
  add(curvature_antisymmetry(s, curv));
  if (involutive) {
    add(total_geodesy(s, probes));
    add(curvature_closure(s, curv));
    add(geodesic_confinement(s, 20, seed + 3));
    add_all(transport_membership(s, 5, seed + 4));
    add(jacobi_confinement(s));
  }
  add(energy_conservation(s, 5, seed + 5));
  add(jacobi_velocity(s));
  add(jacobi_oracle(s));
  add(rk4_convergence(s));
  add(chart_tangency(s, policy));
  return out;
}

}  // namespace checks

}  // namespace frob
