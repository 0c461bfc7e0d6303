#pragma once

// The canonical metric connection of (g, E): Levi-Civita plus the contorsion
// of the torsion τ fixed by
//   τ(X,Y) = τ(ξ,η) = 0,
//   g(τ(ξ,X),Y) =  ½ (L_ξ g)(X,Y),
//   g(τ(ξ,X),η) = −½ (L_X g)(ξ,η),
// for X,Y ∈ Γ(E), ξ,η ∈ Γ(E⊥). Also the Schouten-Van Kampen, Vranceanu and
// Bott derivatives used for comparison.
//
// Index conventions (coordinate fields ∂1..∂n):
//   ∇_{∂i} ∂j  = Γ^k_ij ∂k            gamma(k, i, j)
//   τ(∂i, ∂j)  = T^k_ij ∂k            torsion(k, i, j)
//   R(∂i,∂j)∂k = R^l_kij ∂l           R(l, k, i, j)

#include <array>
#include <string>
#include <vector>

#include "frob/geometry.hpp"

namespace frob {

template <class S>
struct Tensor3 {
  int n = 0;
  std::vector<S> data;

  Tensor3() = default;
  explicit Tensor3(int dim) : n(dim), data(static_cast<std::size_t>(dim * dim * dim), S(0.0)) {}

  S& operator()(int k, int i, int j) { return data[static_cast<std::size_t>((k * n + i) * n + j)]; }
  const S& operator()(int k, int i, int j) const { return data[static_cast<std::size_t>((k * n + i) * n + j)]; }

  // Σ_ij A^k_ij u^i v^j
  template <class U, class V>
  Vec<S> contract(const U& u, const V& v) const {
    Vec<S> out = Vec<S>::Zero(n);
    for (int k = 0; k < n; ++k) {
      S s(0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += (*this)(k, i, j) * u(i) * v(j);
      out(k) = s;
    }
    return out;
  }
};

struct Tensor4 {
  int n = 0;
  std::vector<double> data;

  Tensor4() = default;
  explicit Tensor4(int dim) : n(dim), data(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}
  double& operator()(int l, int k, int i, int j) { return data[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)]; }
  double operator()(int l, int k, int i, int j) const {
    return data[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)];
  }
};

enum class ConnectionKind { canonical, levi_civita, schouten_van_kampen, vranceanu, blend };

std::string to_string(ConnectionKind k);

struct TorsionEval {
  Vector point;
  Tensor3<double> T;

  // τ(u, v)
  Vector operator()(const Vector& u, const Vector& v) const { return T.contract(u, v); }
};

struct ConnectionEval {
  Vector point;
  ConnectionKind kind = ConnectionKind::canonical;
  Tensor3<double> gamma;

  // Γ(u, v) = Σ Γ^k_ij u^i v^j, the zeroth-order part of ∇_u v.
  Vector operator()(const Vector& u, const Vector& v) const { return gamma.contract(u, v); }
};

struct CurvatureEval {
  Vector point;
  Tensor4 R;

  // R(u, v) w
  Vector operator()(const Vector& u, const Vector& v, const Vector& w) const;
};

// Connection coefficients and torsion with their first partial derivatives.
struct CanonicalJet {
  Vector point;
  Tensor3<double> gamma;
  Tensor3<double> torsion;
  std::vector<Tensor3<double>> dgamma;   // dgamma[m] = ∂_m Γ
  std::vector<Tensor3<double>> dtorsion;  // dtorsion[m] = ∂_m T
};

namespace kernel {

template <class S>
struct MetricJet {
  Mat<S> G;
  std::vector<Mat<S>> dG;  // dG[m] = ∂_m g
};

template <class S>
MetricJet<S> metric_jet(const MetricField& g, const Vec<S>& p) {
  const int n = g.dimension();
  MetricJet<S> out;
  out.dG.resize(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const Mat<Dual<S>> Gd = g.eval(seed_point(p, Vec<S>(Vec<S>::Unit(n, m))));
    if (m == 0) out.G = value(Gd);
    out.dG[static_cast<std::size_t>(m)] = tangent(Gd);
  }
  return out;
}

template <class S>
Tensor3<S> levi_civita(const MetricJet<S>& mj, const Mat<S>& ginv) {
  const int n = static_cast<int>(mj.G.rows());
  Tensor3<S> gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S s(0.0);
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (mj.dG[i](j, l) + mj.dG[j](i, l) - mj.dG[l](i, j));
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

// Coordinate components of τ at p from the adapted frame field with frozen
// pivots. The frame is g-orthonormal at p, so frame coefficients of a vector
// are its g-inner products with the frame vectors.
template <class S>
Tensor3<S> torsion(const MetricField& g, const DistributionSpec& e, const std::vector<int>& pivots,
                   const Vec<S>& p, const MetricJet<S>& mj) {
  const int n = g.dimension();
  const int r = e.rank();
  Tensor3<S> T(n);
  if (r == n) return T;

  Mat<S> fr;
  std::vector<Mat<S>> dfr(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const Mat<Dual<S>> fd = kernel::adapted_frame(g, e, pivots, seed_point(p, Vec<S>(Vec<S>::Unit(n, m))));
    if (m == 0) fr = value(fd);
    dfr[static_cast<std::size_t>(m)] = tangent(fd);
  }
  const Mat<S>& G = mj.G;

  // jac[c](:, m) = ∂_m of frame column c
  auto jac = [&](int c) {
    Mat<S> j(n, n);
    for (int m = 0; m < n; ++m) j.col(m) = dfr[static_cast<std::size_t>(m)].col(c);
    return j;
  };
  auto dG_along = [&](const Vec<S>& w) {
    Mat<S> d = Mat<S>::Zero(n, n);
    for (int m = 0; m < n; ++m) d += w(m) * mj.dG[static_cast<std::size_t>(m)];
    return d;
  };
  // (L_W g)(U, V) = (∂_W g)(U, V) + g(DW·U, V) + g(U, DW·V); independent of
  // how U and V extend off p.
  auto lie_g = [&](int w, const Vec<S>& u, const Vec<S>& v) {
    const Mat<S> jw = jac(w);
    const Vec<S> wcol = fr.col(w);
    return S(u.dot(dG_along(wcol) * v) + inner(G, Vec<S>(jw * u), v) + inner(G, u, Vec<S>(jw * v)));
  };

  const int q = n - r;
  // tau_vec[a * r + i] = τ(ξ_a, X_i)
  std::vector<Vec<S>> tau(static_cast<std::size_t>(q * r), Vec<S>::Zero(n));
  for (int a = 0; a < q; ++a) {
    const Vec<S> xi = fr.col(r + a);
    for (int i = 0; i < r; ++i) {
      const Vec<S> xi_i = fr.col(i);
      Vec<S> t = Vec<S>::Zero(n);
      for (int j = 0; j < r; ++j) t += (0.5 * lie_g(r + a, xi_i, Vec<S>(fr.col(j)))) * Vec<S>(fr.col(j));
      for (int b = 0; b < q; ++b)
        t += (-0.5 * lie_g(i, xi, Vec<S>(fr.col(r + b)))) * Vec<S>(fr.col(r + b));
      tau[static_cast<std::size_t>(a * r + i)] = t;
    }
  }

  // τ(u, v) = τ(Qu, Pv) − τ(Qv, Pu), frame coefficients via g.
  const Mat<S> cf = G * fr;  // cf(c, col) = g(∂c, frame col)
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d) {
      Vec<S> t = Vec<S>::Zero(n);
      for (int a = 0; a < q; ++a)
        for (int i = 0; i < r; ++i) {
          const S w = cf(c, r + a) * cf(d, i) - cf(d, r + a) * cf(c, i);
          t += w * tau[static_cast<std::size_t>(a * r + i)];
        }
      for (int k = 0; k < n; ++k) {
        T(k, c, d) = t(k);
        T(k, d, c) = -t(k);
      }
    }
  return T;
}

// K^k_ij = ½ g^{kl} ( g(τ(∂l,∂i),∂j) − g(τ(∂j,∂l),∂i) + g(τ(∂i,∂j),∂l) )
template <class S>
Tensor3<S> contorsion(const Tensor3<S>& T, const Mat<S>& G, const Mat<S>& ginv) {
  const int n = T.n;
  Tensor3<S> low(n);  // low(l, i, j) = g(τ(∂i,∂j), ∂l)
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S s(0.0);
        for (int k = 0; k < n; ++k) s += G(l, k) * T(k, i, j);
        low(l, i, j) = s;
      }
  Tensor3<S> K(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(k, l) * (low(j, l, i) - low(i, j, l) + low(l, i, j));
        K(k, i, j) = 0.5 * s;
      }
  return K;
}

template <class S>
struct Canonical {
  Mat<S> G;
  Tensor3<S> gamma;
  Tensor3<S> torsion;
};

template <class S>
Canonical<S> canonical(const MetricField& g, const DistributionSpec& e, const std::vector<int>& pivots,
                       const Vec<S>& p) {
  const MetricJet<S> mj = metric_jet(g, p);
  const Mat<S> ginv = spd_inverse(mj.G, "metric");
  Canonical<S> out;
  out.G = mj.G;
  out.gamma = levi_civita(mj, ginv);
  out.torsion = torsion(g, e, pivots, p, mj);
  if (e.rank() < g.dimension()) {
    const Tensor3<S> K = contorsion(out.torsion, mj.G, ginv);
    for (std::size_t i = 0; i < K.data.size(); ++i) out.gamma.data[i] += K.data[i];
  }
  return out;
}

}  // namespace kernel

ConnectionEval levi_civita_at(const MetricField& g, const Vector& p);
TorsionEval torsion_at(const MetricField& g, const DistributionSpec& e, const Vector& p);
ConnectionEval canonical_at(const MetricField& g, const DistributionSpec& e, const Vector& p);
CanonicalJet canonical_jet(const MetricField& g, const DistributionSpec& e, const Vector& p);

// T^k_ij = Γ^k_ij − Γ^k_ji (coordinate brackets vanish).
TorsionEval torsion_of(const ConnectionEval& c);

// Right-hand side of the Koszul formula for the metric connection with
// torsion T at p; equals 2 g(D_X Y, Z)(p).
double koszul_pairing(const MetricField& g, const TorsionEval& T, const VectorField& x, const VectorField& y,
                      const VectorField& z, const Vector& p);

// Coefficient-wise (1 − λ) c1 + λ c2.
ConnectionEval blend(const ConnectionEval& c1, const ConnectionEval& c2, double lambda);

// ∇_X Y at p for a connection given by its coefficients at p.
Vector covariant_derivative(const ConnectionEval& c, const VectorField& x, const VectorField& y, const Vector& p);

Vector schouten_van_kampen_at(const MetricField& g, const DistributionSpec& e, const VectorField& x,
                              const VectorField& y, const Vector& p);
Vector vranceanu_at(const MetricField& g, const DistributionSpec& e, const VectorField& x, const VectorField& y,
                    const Vector& p);
// Coefficient tables of the two comparison connections (∇_{∂i}∂j).
ConnectionEval schouten_van_kampen_coefficients(const MetricField& g, const DistributionSpec& e, const Vector& p);
ConnectionEval vranceanu_coefficients(const MetricField& g, const DistributionSpec& e, const Vector& p);

struct BottEval {
  Vector derivative;  // D_X ξ = Q [X, ξ]
  double defect = 0;  // (L_X g)(ξ, ξ)
};

// Requires X(p) ∈ E_p and ξ(p) ∈ E⊥_p (to 1e-8, relative).
BottEval bott_at(const MetricField& g, const DistributionSpec& e, const VectorField& x, const VectorField& xi,
                 const Vector& p);

struct DefectIdentity {
  double lhs = 0;  // X g(ξ,η) − g(D_X ξ, η) − g(ξ, D_X η)
  double rhs = 0;  // (L_X g)(ξ, η)
};

DefectIdentity bott_defect_identity(const MetricField& g, const DistributionSpec& e, const VectorField& x,
                                    const VectorField& xi, const VectorField& eta, const Vector& p);

CurvatureEval curvature_at(const MetricField& g, const DistributionSpec& e, const Vector& p);
CurvatureEval curvature_from_jet(const CanonicalJet& jet);

}  // namespace frob
