#pragma once

// Small dense kernels, templated over the dual tower so that projectors and
// inverse metrics can be differentiated. Sizes here are the manifold
// dimension (a handful), so plain loops are used for the factorizations.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "frob/dual.hpp"
#include "frob/errors.hpp"

namespace frob {

// Manifold dimension is bounded so that all small vectors and matrices live
// on the stack.
inline constexpr int kMaxDim = 8;

template <class S> using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <class S> using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using Vector = Vec<double>;
using Matrix = Mat<double>;

template <class S>
Vec<S> lift(const Vector& v) {
  Vec<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = S(v(i));
  return out;
}

template <class S>
Vector primal(const Vec<S>& v) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = primal(v(i));
  return out;
}

template <class S>
Matrix primal(const Mat<S>& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = primal(m(i, j));
  return out;
}

// Tangent part of a first-level dual vector/matrix.
template <class S>
Vec<S> tangent(const Vec<Dual<S>>& v) {
  Vec<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).du;
  return out;
}
template <class S>
Vec<S> value(const Vec<Dual<S>>& v) {
  Vec<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).re;
  return out;
}
template <class S>
Mat<S> tangent(const Mat<Dual<S>>& m) {
  Mat<S> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).du;
  return out;
}
template <class S>
Mat<S> value(const Mat<Dual<S>>& m) {
  Mat<S> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).re;
  return out;
}

// Lower-triangular L with A = L Lᵀ. Throws GeometryError naming `what` when a
// pivot is not positive.
template <class S>
Mat<S> cholesky(const Mat<S>& a, const char* what = "matrix") {
  using std::sqrt;
  const Eigen::Index n = a.rows();
  Mat<S> l = Mat<S>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    S d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(primal(d) > 0.0)) {
      throw GeometryError(std::string(what) + " is not positive definite (pivot " + std::to_string(j) +
                          " = " + std::to_string(primal(d)) + ")");
    }
    l(j, j) = sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      S s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Solves (L Lᵀ) X = B.
template <class S>
Mat<S> cholesky_solve(const Mat<S>& l, const Mat<S>& b) {
  const Eigen::Index n = l.rows();
  Mat<S> x = b;
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      S s = x(i, c);
      for (Eigen::Index k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      S s = x(i, c);
      for (Eigen::Index k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  }
  return x;
}

template <class S>
Mat<S> spd_inverse(const Mat<S>& a, const char* what = "matrix") {
  return cholesky_solve(cholesky(a, what), Mat<S>(Mat<S>::Identity(a.rows(), a.cols())));
}

template <class S>
S inner(const Mat<S>& g, const Vec<S>& u, const Vec<S>& v) {
  return u.dot(g * v);
}

// Modified Gram-Schmidt in the inner product g. Returns false if a vector's
// residual norm falls below `rel_tol` times its original norm.
template <class S>
bool gram_schmidt(const Mat<S>& g, std::vector<Vec<S>>& vs, double rel_tol = 1e-10) {
  using std::sqrt;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double before = std::sqrt(primal(inner(g, vs[i], vs[i])));
    for (std::size_t k = 0; k < i; ++k) vs[i] -= inner(g, vs[k], vs[i]) * vs[k];
    S nrm2 = inner(g, vs[i], vs[i]);
    if (!(std::sqrt(primal(nrm2)) > rel_tol * before) || !(before > 0.0)) return false;
    vs[i] /= sqrt(nrm2);
  }
  return true;
}

}  // namespace frob
