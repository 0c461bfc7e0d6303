#include "frob/christoffel.hpp"

#include <algorithm>
#include <cmath>

namespace frob {

namespace {

constexpr std::size_t kStackScratch = 4096;

// A vector with its coordinate gradient: d[m][k] = ∂_m v^k.
template <int N>
struct Jet {
  double v[N];
  double d[N][N];
};

template <int N>
struct JetS {
  double v;
  double d[N];
};

// Inverse of an SPD matrix through its Cholesky factor; false if not SPD.
template <int N>
bool spd_invert(const double (&a)[N][N], double (&inv)[N][N], int n) {
  double L[N][N] = {};
  for (int j = 0; j < n; ++j) {
    double d = a[j][j];
    for (int k = 0; k < j; ++k) d -= L[j][k] * L[j][k];
    if (!(d > 0.0)) return false;
    L[j][j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      L[i][j] = s / L[j][j];
    }
  }
  // M = L⁻¹ (lower), then inv = Mᵀ M
  double M[N][N] = {};
  for (int j = 0; j < n; ++j) {
    M[j][j] = 1.0 / L[j][j];
    for (int i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s -= L[i][k] * M[k][j];
      M[i][j] = s / L[i][i];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = std::max(i, j); k < n; ++k) s += M[k][i] * M[k][j];
      inv[i][j] = s;
    }
  return true;
}

}  // namespace

ChristoffelField::ChristoffelField(const MetricField& g, const DistributionSpec& e, const Vector& anchor)
    : ChristoffelField(g, e, choose_pivots(g, e, anchor)) {}

ChristoffelField::ChristoffelField(const MetricField& g, const DistributionSpec& e, std::vector<int> pivots)
    : g_(g), e_(e), pivots_(std::move(pivots)), n_(g.dimension()), r_(e.rank()) {
  if (e_.dimension() != n_) throw GeometryError("distribution and metric dimensions differ");
  if (static_cast<int>(pivots_.size()) != n_ - r_) throw GeometryError("pivot count must be n - r");
  std::size_t nodes = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) nodes = std::max(nodes, g_.entry(i, j).nodes().size());
  for (int a = 0; a < r_; ++a)
    for (int k = 0; k < n_; ++k) nodes = std::max(nodes, e_.component(a, k).nodes().size());
  scratch_ = nodes * static_cast<std::size_t>(n_ + 1);

  const Vector center = g_.domain().center();
  auto constant_value = [&](const Expression& ex) {
    for (const auto& node : ex.nodes())
      if (node.op == Op::Coord) return std::nan("");
    try {
      return ex.evaluate(center);
    } catch (const DomainError&) {
      return std::nan("");  // let eval report it
    }
  };
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) constant_.push_back(constant_value(g_.entry(i, j)));
  for (int a = 0; a < r_; ++a)
    for (int k = 0; k < n_; ++k) constant_.push_back(constant_value(e_.component(a, k)));
}

void ChristoffelField::eval(const double* x, double* gamma) const {
  switch (n_) {
    case 2: return eval_n<2>(x, gamma);
    case 3: return eval_n<3>(x, gamma);
    case 4: return eval_n<4>(x, gamma);
    default: return eval_n<0>(x, gamma);
  }
}

// NN > 0 fixes the dimension at compile time so the small loops unroll.
template <int NN>
void ChristoffelField::eval_n(const double* x, double* gamma) const {
  constexpr int N = NN > 0 ? NN : kMaxDim;
  using JetVec = Jet<N>;
  using JetScalar = JetS<N>;
  const int n = NN > 0 ? NN : n_;
  const int r = r_;
  double stack[kStackScratch];
  std::vector<double> heap;
  double* scratch = stack;
  if (scratch_ > kStackScratch) {
    heap.resize(scratch_);
    scratch = heap.data();
  }

  // Metric and its first partials: dG[m][i][j] = ∂_m g_ij.
  double G[N][N], dG[N][N][N];
  double grad[N];
  std::size_t slot = 0;
  auto value_gradient = [&](const Expression& ex) {
    const double c = constant_[slot++];
    if (std::isnan(c)) return ex.eval_gradient(x, n, grad, scratch);
    for (int m = 0; m < n; ++m) grad[m] = 0.0;
    return c;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = value_gradient(g_.entry(i, j));
      G[i][j] = G[j][i] = v;
      for (int m = 0; m < n; ++m) dG[m][i][j] = dG[m][j][i] = grad[m];
    }

  double ginv[N][N];
  if (!spd_invert<N>(G, ginv, n)) throw GeometryError("metric: matrix not positive definite");

  // Levi-Civita part.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv[k][l] * (dG[i][j][l] + dG[j][i][l] - dG[l][i][j]);
        gamma[(k * n + i) * n + j] = 0.5 * s;
      }
  if (r == n) return;

  // Adapted frame as jets: declared fields, then pivot axes, Gram-Schmidt in g.
  JetVec U[N];
  for (int a = 0; a < r; ++a)
    for (int k = 0; k < n; ++k) {
      U[a].v[k] = value_gradient(e_.component(a, k));
      for (int m = 0; m < n; ++m) U[a].d[m][k] = grad[m];
    }
  for (int c = r; c < n; ++c) {
    for (int k = 0; k < n; ++k) {
      U[c].v[k] = k == pivots_[c - r] ? 1.0 : 0.0;
      for (int m = 0; m < n; ++m) U[c].d[m][k] = 0.0;
    }
  }

  auto ip = [&](const JetVec& a, const JetVec& b) {
    JetScalar s{};
    double Gb[N];
    for (int k = 0; k < n; ++k) {
      double t = 0.0;
      for (int l = 0; l < n; ++l) t += G[k][l] * b.v[l];
      Gb[k] = t;
    }
    for (int k = 0; k < n; ++k) s.v += a.v[k] * Gb[k];
    for (int m = 0; m < n; ++m) {
      double t = 0.0;
      for (int k = 0; k < n; ++k) {
        t += a.d[m][k] * Gb[k];
        double gdb = 0.0, dgb = 0.0;
        for (int l = 0; l < n; ++l) {
          gdb += G[k][l] * b.d[m][l];
          dgb += dG[m][k][l] * b.v[l];
        }
        t += a.v[k] * (gdb + dgb);
      }
      s.d[m] = t;
    }
    return s;
  };

  for (int c = 0; c < n; ++c) {
    JetVec& w = U[c];
    const double before = std::sqrt(std::max(0.0, ip(w, w).v));
    for (int b = 0; b < c; ++b) {
      const JetScalar s = ip(U[b], w);
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) w.d[m][k] -= s.d[m] * U[b].v[k] + s.v * U[b].d[m][k];
        w.v[k] -= s.v * U[b].v[k];
      }
    }
    const JetScalar nrm2 = ip(w, w);
    const double nrm = std::sqrt(std::max(0.0, nrm2.v));
    if (!(nrm > 1e-10 * before) || !(before > 0.0)) throw GeometryError("degenerate frame at point");
    for (int m = 0; m < n; ++m) {
      const double dn = nrm2.d[m] / (2.0 * nrm);
      for (int k = 0; k < n; ++k) w.d[m][k] = w.d[m][k] / nrm - w.v[k] * dn / (nrm * nrm);
    }
    for (int k = 0; k < n; ++k) w.v[k] /= nrm;
  }

  // (L_W g)(u, v) for W = frame column w; see kernel::torsion.
  auto lie_g = [&](int w, const double* u, const double* v) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double dg = 0.0;
        for (int m = 0; m < n; ++m) dg += U[w].v[m] * dG[m][i][j];
        s += u[i] * dg * v[j];
      }
    double ju[N], jv[N];
    for (int k = 0; k < n; ++k) {
      ju[k] = jv[k] = 0.0;
      for (int m = 0; m < n; ++m) {
        ju[k] += U[w].d[m][k] * u[m];
        jv[k] += U[w].d[m][k] * v[m];
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += G[i][j] * (ju[i] * v[j] + u[i] * jv[j]);
    return s;
  };

  const int q = n - r;
  double tau[N * N][N];  // tau[a·r + i] = τ(ξ_a, X_i)
  for (int a = 0; a < q; ++a)
    for (int i = 0; i < r; ++i) {
      double* t = tau[a * r + i];
      for (int k = 0; k < n; ++k) t[k] = 0.0;
      for (int j = 0; j < r; ++j) {
        const double c = 0.5 * lie_g(r + a, U[i].v, U[j].v);
        for (int k = 0; k < n; ++k) t[k] += c * U[j].v[k];
      }
      for (int b = 0; b < q; ++b) {
        const double c = -0.5 * lie_g(i, U[r + a].v, U[r + b].v);
        for (int k = 0; k < n; ++k) t[k] += c * U[r + b].v[k];
      }
    }

  double cf[N][N];  // cf[c][col] = g(∂c, frame col)
  for (int c = 0; c < n; ++c)
    for (int col = 0; col < n; ++col) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += G[c][l] * U[col].v[l];
      cf[c][col] = s;
    }

  double T[N][N][N];  // T[k][c][d]
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c) T[k][c][c] = 0.0;
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d) {
      double t[N] = {};
      for (int a = 0; a < q; ++a)
        for (int i = 0; i < r; ++i) {
          const double w = cf[c][r + a] * cf[d][i] - cf[d][r + a] * cf[c][i];
          for (int k = 0; k < n; ++k) t[k] += w * tau[a * r + i][k];
        }
      for (int k = 0; k < n; ++k) {
        T[k][c][d] = t[k];
        T[k][d][c] = -t[k];
      }
    }

  // Contorsion.
  double low[N][N][N];  // low[l][i][j] = g(τ(∂i,∂j), ∂l)
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += G[l][k] * T[k][i][j];
        low[l][i][j] = s;
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv[k][l] * (low[j][l][i] - low[i][j][l] + low[l][i][j]);
        gamma[(k * n + i) * n + j] += 0.5 * s;
      }
}

Vector ChristoffelField::contract(const Vector& x, const Vector& u, const Vector& v) const {
  const int n = n_;
  double gamma[kMaxDim * kMaxDim * kMaxDim];
  eval(x.data(), gamma);
  Vector out(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += gamma[(k * n + i) * n + j] * u(i) * v(j);
    out(k) = s;
  }
  return out;
}

}  // namespace frob
