#include "frob/transport.hpp"

#include <cmath>
#include <limits>

#include "frob/connection.hpp"

namespace frob {

namespace {

struct StageOutside {
  Vector x;
};

constexpr int kMaxTable = kMaxDim * kMaxDim * kMaxDim;

// Γ(u, w)^k = Γ^k_ij u^i w^j for a table laid out as (k·n + i)·n + j.
template <class Table>
Vector apply(const Table& gamma, int n, const Vector& u, const Vector& w) {
  Vector out(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ui = u(i);
      if (ui == 0.0) continue;
      for (int j = 0; j < n; ++j) s += gamma[(k * n + i) * n + j] * ui * w(j);
    }
    out(k) = s;
  }
  return out;
}

// One RK4 step of x' = v, v' = acc, y' = dy with stage callback
// f(x, v, y, acc&, dy&). The (x, v) arithmetic is independent of y, so a
// step restarted from a stored state reproduces the stored successor.
template <class F>
void rk4_step(double h, Vector& x, Vector& v, Vector& y, F&& f) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(y.size());
  Vector a1(n), a2(n), a3(n), a4(n), d1(m), d2(m), d3(m), d4(m);
  f(x, v, y, a1, d1);
  const Vector x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a1, y2 = y + 0.5 * h * d1;
  f(x2, v2, y2, a2, d2);
  const Vector x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2, y3 = y + 0.5 * h * d2;
  f(x3, v3, y3, a3, d3);
  const Vector x4 = x + h * v3, v4 = v + h * a3, y4 = y + h * d3;
  f(x4, v4, y4, a4, d4);
  x += (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
  v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  y += (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
}

void require_same_dimension(const ChristoffelField& gamma, const Vector& a, const char* what) {
  if (a.size() != gamma.dimension())
    throw GeometryError(std::string(what) + " has dimension " + std::to_string(a.size()) + ", expected " +
                        std::to_string(gamma.dimension()));
}

}  // namespace

int step_count(double T, double h) {
  if (!(h > 0.0) || !(T >= 0.0)) throw GeometryError("integration needs h > 0 and T >= 0");
  // The small slack keeps T/h = 1000.0000000000001 from adding a step.
  return std::max(1, static_cast<int>(std::ceil(T / h - 1e-9)));
}

Trajectory integrate_geodesic(const ChristoffelField& gamma, const Vector& p0, const Vector& v0, double T, double h) {
  require_same_dimension(gamma, p0, "initial point");
  require_same_dimension(gamma, v0, "initial velocity");
  const Box& box = gamma.metric().domain();
  const int n = gamma.dimension();
  const int steps = step_count(T, h);
  const double dt = T / steps;

  Trajectory traj;
  traj.h = dt;
  traj.t.reserve(steps + 1);
  traj.x.reserve(steps + 1);
  traj.v.reserve(steps + 1);
  if (!box.contains(p0)) throw DomainExit("initial point outside the domain", traj);
  traj.t.push_back(0.0);
  traj.x.push_back(p0);
  traj.v.push_back(v0);

  double table[kMaxTable];
  auto f = [&](const Vector& x, const Vector& v, const Vector&, Vector& acc, Vector&) {
    if (!box.contains(x)) throw StageOutside{x};
    gamma.eval(x.data(), table);
    acc = -apply(table, n, v, v);
  };
  Vector x = p0, v = v0, none(0);
  for (int k = 0; k < steps; ++k) {
    try {
      rk4_step(dt, x, v, none, f);
    } catch (const StageOutside&) {
      throw DomainExit("geodesic left the domain near t = " + std::to_string(traj.t.back()), traj);
    }
    if (!x.allFinite() || !v.allFinite()) throw DomainExit("geodesic state became non-finite", traj);
    traj.t.push_back((k + 1) * dt);
    traj.x.push_back(x);
    traj.v.push_back(v);
  }
  return traj;
}

Trajectory integrate_geodesic(const MetricField& g, const DistributionSpec& e, const Vector& p0, const Vector& v0,
                              double T, double h) {
  metric_at(g, p0);
  check_frame_independent(e, p0);
  return integrate_geodesic(ChristoffelField(g, e, p0), p0, v0, T, h);
}

namespace {

// Endpoint-only twin of integrate_geodesic: same operations in the same
// order on stack arrays, so the result is bitwise identical. Returns false
// on any failure; the caller re-runs the recording path for the error.
bool geodesic_endpoint(const ChristoffelField& gamma, const Vector& p0, const Vector& v0, double T, double h,
                       Vector& out) {
  const Box& box = gamma.metric().domain();
  const int n = gamma.dimension();
  const int steps = step_count(T, h);
  const double dt = T / steps;
  if (!box.contains(p0)) return false;

  double table[kMaxTable];
  Vector probe(n);
  auto inside = [&](const double* x) {
    for (int i = 0; i < n; ++i) probe(i) = x[i];
    return box.contains(probe);
  };
  auto accel = [&](const double* x, const double* v, double* a) {
    gamma.eval(x, table);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ui = v[i];
        if (ui == 0.0) continue;
        for (int j = 0; j < n; ++j) s += table[(k * n + i) * n + j] * ui * v[j];
      }
      a[k] = -s;
    }
  };

  double x[kMaxDim], v[kMaxDim], x2[kMaxDim], v2[kMaxDim], x3[kMaxDim], v3[kMaxDim], x4[kMaxDim], v4[kMaxDim];
  double a1[kMaxDim], a2[kMaxDim], a3[kMaxDim], a4[kMaxDim];
  for (int i = 0; i < n; ++i) {
    x[i] = p0(i);
    v[i] = v0(i);
  }
  const double half = 0.5 * dt, sixth = dt / 6.0;
  for (int k = 0; k < steps; ++k) {
    if (!inside(x)) return false;
    accel(x, v, a1);
    for (int i = 0; i < n; ++i) {
      x2[i] = x[i] + half * v[i];
      v2[i] = v[i] + half * a1[i];
    }
    if (!inside(x2)) return false;
    accel(x2, v2, a2);
    for (int i = 0; i < n; ++i) {
      x3[i] = x[i] + half * v2[i];
      v3[i] = v[i] + half * a2[i];
    }
    if (!inside(x3)) return false;
    accel(x3, v3, a3);
    for (int i = 0; i < n; ++i) {
      x4[i] = x[i] + dt * v3[i];
      v4[i] = v[i] + dt * a3[i];
    }
    if (!inside(x4)) return false;
    accel(x4, v4, a4);
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      x[i] += sixth * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
      v[i] += sixth * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
      finite = finite && std::isfinite(x[i]) && std::isfinite(v[i]);
    }
    if (!finite) return false;
  }
  out.resize(n);
  for (int i = 0; i < n; ++i) out(i) = x[i];
  return true;
}

}  // namespace

Vector exp_map(const ChristoffelField& gamma, const Vector& p, const Vector& v, double h) {
  require_same_dimension(gamma, p, "initial point");
  require_same_dimension(gamma, v, "initial velocity");
  Vector out;
  if (geodesic_endpoint(gamma, p, v, 1.0, h, out)) return out;
  return integrate_geodesic(gamma, p, v, 1.0, h).x.back();
}

Vector exp_map(const MetricField& g, const DistributionSpec& e, const Vector& p, const Vector& v, double h) {
  return integrate_geodesic(g, e, p, v, 1.0, h).x.back();
}

TransportState parallel_transport(const ChristoffelField& gamma, const Trajectory& traj, const Vector& V0) {
  require_same_dimension(gamma, V0, "transported vector");
  if (traj.size() == 0) throw GeometryError("empty trajectory");
  const int n = gamma.dimension();
  double table[kMaxTable];
  auto f = [&](const Vector& x, const Vector& v, const Vector& V, Vector& acc, Vector& dV) {
    gamma.eval(x.data(), table);
    acc = -apply(table, n, v, v);
    dV = -apply(table, n, v, V);
  };
  TransportState out;
  out.V.reserve(traj.size());
  out.V.push_back(V0);
  Vector V = V0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    Vector x = traj.x[k], v = traj.v[k];
    rk4_step(traj.h, x, v, V, f);
    out.V.push_back(V);
  }
  return out;
}

TransportState parallel_transport(const MetricField& g, const DistributionSpec& e, const Trajectory& traj,
                                  const Vector& V0) {
  if (traj.size() == 0) throw GeometryError("empty trajectory");
  return parallel_transport(ChristoffelField(g, e, traj.x.front()), traj, V0);
}

TransportState jacobi_field_ode(const MetricField& g, const DistributionSpec& e, const Trajectory& traj,
                                const Vector& J0, const Vector& J0prime) {
  if (traj.size() == 0) throw GeometryError("empty trajectory");
  const ChristoffelField fast(g, e, traj.x.front());
  const std::vector<int>& pivots = fast.pivots();
  const int n = g.dimension();
  require_same_dimension(fast, J0, "J0");
  require_same_dimension(fast, J0prime, "J0'");

  // Γ, ∂_vΓ, ∂_JΓ and T, ∂_vT at x from two dual passes.
  struct Local {
    std::vector<double> G, Gv, GJ, T, Tv;
  };
  auto local = [&](const Vector& x, const Vector& v, const Vector& J) {
    Local L;
    const auto cv = kernel::canonical(g, e, pivots, seed_point(x, v));
    const auto cj = kernel::canonical(g, e, pivots, seed_point(x, J));
    const std::size_t sz = cv.gamma.data.size();
    L.G.resize(sz), L.Gv.resize(sz), L.GJ.resize(sz), L.T.resize(sz), L.Tv.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) {
      L.G[i] = cv.gamma.data[i].re;
      L.Gv[i] = cv.gamma.data[i].du;
      L.GJ[i] = cj.gamma.data[i].du;
      L.T[i] = cv.torsion.data[i].re;
      L.Tv[i] = cv.torsion.data[i].du;
    }
    return L;
  };

  // y = (J, J̇) in coordinates.
  auto f = [&](const Vector& x, const Vector& v, const Vector& y, Vector& acc, Vector& dy) {
    const Vector J = y.head(n), Jd = y.tail(n);
    const Local L = local(x, v, J);
    const Vector a = -apply(L.G, n, v, v);
    const Vector DJ = Jd + apply(L.G, n, v, J);
    const Vector W = apply(L.T, n, v, J);
    const Vector dW = apply(L.Tv, n, v, J) + apply(L.T, n, a, J) + apply(L.T, n, v, Jd);
    // R(v, J)v = (∂_vΓ)(J, v) − (∂_JΓ)(v, v) + Γ(v, Γ(J, v)) − Γ(J, Γ(v, v))
    const Vector RvJv = apply(L.Gv, n, J, v) - apply(L.GJ, n, v, v) + apply(L.G, n, v, apply(L.G, n, J, v)) +
                        apply(L.G, n, J, a);
    const Vector rhs = RvJv + dW + apply(L.G, n, v, W);
    acc = a;
    dy.resize(2 * n);
    dy.head(n) = Jd;
    dy.tail(n) = rhs - apply(L.G, n, v, DJ) - apply(L.Gv, n, v, J) - apply(L.G, n, a, J) - apply(L.G, n, v, Jd);
  };

  auto covariant = [&](const Vector& x, const Vector& J, const Vector& Jd, const Vector& v) {
    double table[kMaxTable];
    fast.eval(x.data(), table);
    return Vector(Jd + apply(table, n, v, J));
  };
  auto coordinate = [&](const Vector& x, const Vector& J, const Vector& Jp, const Vector& v) {
    double table[kMaxTable];
    fast.eval(x.data(), table);
    return Vector(Jp - apply(table, n, v, J));
  };

  TransportState out;
  out.J.reserve(traj.size());
  out.Jprime.reserve(traj.size());
  Vector y(2 * n);
  y.head(n) = J0;
  y.tail(n) = coordinate(traj.x[0], J0, J0prime, traj.v[0]);
  out.J.push_back(J0);
  out.Jprime.push_back(J0prime);
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    Vector x = traj.x[k], v = traj.v[k];
    rk4_step(traj.h, x, v, y, f);
    out.J.push_back(y.head(n));
    out.Jprime.push_back(covariant(traj.x[k + 1], y.head(n), y.tail(n), traj.v[k + 1]));
  }
  return out;
}

Vector variation_jacobi_oracle(const MetricField& g, const DistributionSpec& e, const Vector& p, const Vector& X,
                               const Vector& Y, double t, double h) {
  constexpr double u0 = 1e-5;
  const ChristoffelField gamma(g, e, p);
  const Vector plus = exp_map(gamma, p, Vector(t * (X + u0 * Y)), h);
  const Vector minus = exp_map(gamma, p, Vector(t * (X - u0 * Y)), h);
  return (plus - minus) / (2.0 * u0);
}

double geodesic_residual_constant(const ChristoffelField& gamma, const Trajectory& traj) {
  const double h = traj.h;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const Vector second = (traj.x[k + 1] - 2.0 * traj.x[k] + traj.x[k - 1]) / (h * h);
    worst = std::max(worst, (second + gamma.contract(traj.x[k], traj.v[k], traj.v[k])).norm());
  }
  return worst / (h * h);
}

double ConvergenceStudy::observed_order() const {
  if (exact) return std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (double o : orders) worst = std::min(worst, o);
  return worst;
}

ConvergenceStudy rk4_self_convergence(const ChristoffelField& gamma, const Vector& p0, const Vector& v0, double T,
                                      double h0, int levels) {
  if (levels < 3) throw GeometryError("self-convergence needs at least three step sizes");
  ConvergenceStudy s;
  std::vector<Vector> ends;
  double h = h0;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    s.steps.push_back(h);
    ends.push_back(integrate_geodesic(gamma, p0, v0, T, h).x.back());
  }
  const double scale = 1.0 + ends.back().norm();
  bool all_tiny = true;
  for (int i = 0; i + 1 < levels; ++i) {
    s.differences.push_back((ends[i] - ends[i + 1]).norm());
    if (s.differences.back() > 1e-12 * scale) all_tiny = false;
  }
  s.exact = all_tiny;
  if (!s.exact)
    for (std::size_t i = 0; i + 1 < s.differences.size(); ++i)
      s.orders.push_back(std::log2(s.differences[i] / s.differences[i + 1]));
  return s;
}

}  // namespace frob
