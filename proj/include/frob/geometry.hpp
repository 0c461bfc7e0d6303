#pragma once

// Pointwise metric algebra on an open box of ℝⁿ: metric evaluation,
// g-orthogonal projection onto a distribution E, adapted frames, Lie
// brackets and Lie derivatives of the metric.

#include <string>
#include <vector>

#include "frob/expr.hpp"
#include "frob/fields.hpp"
#include "frob/linalg.hpp"

namespace frob {

struct Box {
  Vector lo;
  Vector hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& p) const;  // open box
  Vector center() const { return 0.5 * (lo + hi); }
  // Shrinks every axis about the center by `fraction` of its width.
  Box shrunk(double fraction) const;
};

class MetricField {
 public:
  MetricField() = default;
  // `upper` holds g_ij for i <= j, row by row: g11 g12 .. g1n g22 .. gnn.
  MetricField(std::vector<Expression> upper, Box domain);

  static MetricField euclidean(Box domain);

  int dimension() const { return n_; }
  const Box& domain() const { return domain_; }
  const Expression& entry(int i, int j) const;

  template <class S>
  Mat<S> eval(const Vec<S>& p) const {
    Mat<S> g(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        g(i, j) = entry(i, j).eval(p);
        if (j != i) g(j, i) = g(i, j);
      }
    return g;
  }

 private:
  int n_ = 0;
  std::vector<Expression> upper_;
  Box domain_;
};

class DistributionSpec {
 public:
  DistributionSpec() = default;
  // fields[a][k] is the k-th coordinate component of the a-th spanning field.
  explicit DistributionSpec(std::vector<std::vector<Expression>> fields);

  int rank() const { return static_cast<int>(fields_.size()); }
  int dimension() const { return n_; }
  const Expression& component(int field, int k) const { return fields_.at(field).at(k); }

  // n×r matrix whose columns are the declared fields at p.
  template <class S>
  Mat<S> frame(const Vec<S>& p) const {
    Mat<S> f(n_, rank());
    for (int a = 0; a < rank(); ++a)
      for (int k = 0; k < n_; ++k) f(k, a) = fields_[a][k].eval(p);
    return f;
  }

  VectorField field(int a) const;
  // Fields Y_b = Σ_a m(a, b) X_a; m must be r×r.
  DistributionSpec recombined(const Matrix& m) const;

 private:
  int n_ = 0;
  std::vector<std::vector<Expression>> fields_;
};

struct ProjectorPair {
  Matrix P;  // g-orthogonal projection onto E_p
  Matrix Q;  // I − P
};

struct AdaptedFrame {
  Matrix vectors;           // columns: first r span E_p, rest span E_p^⊥; g-orthonormal
  int rank = 0;
  std::vector<int> pivots;  // coordinate axes used to complete the frame, in order
};

namespace kernel {

template <class S>
Mat<S> projector(const MetricField& g, const DistributionSpec& e, const Vec<S>& p) {
  const Mat<S> G = g.eval(p);
  const Mat<S> F = e.frame(p);
  const Mat<S> FtG = F.transpose() * G;
  const Mat<S> gram = FtG * F;
  return F * cholesky_solve(cholesky(gram, "frame Gram matrix"), FtG);
}

// Adapted frame as a smooth field: Gram-Schmidt in g(p) on E's declared
// fields followed by the frozen pivot axes. Columns are g(p)-orthonormal.
template <class S>
Mat<S> adapted_frame(const MetricField& g, const DistributionSpec& e, const std::vector<int>& pivots,
                     const Vec<S>& p) {
  const int n = g.dimension();
  const Mat<S> G = g.eval(p);
  const Mat<S> F = e.frame(p);
  std::vector<Vec<S>> vs;
  vs.reserve(n);
  for (int a = 0; a < e.rank(); ++a) vs.emplace_back(F.col(a));
  for (int k : pivots) {
    Vec<S> ek = Vec<S>::Zero(n);
    ek(k) = S(1.0);
    vs.push_back(ek);
  }
  if (!gram_schmidt(G, vs)) throw GeometryError("degenerate frame at point");
  Mat<S> out(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = vs[c];
  return out;
}

}  // namespace kernel

// Validates the metric at p (symmetric by storage, positive definite by
// factorization). Throws GeometryError reporting the smallest eigenvalue.
Matrix metric_at(const MetricField& g, const Vector& p);

// Throws GeometryError if E's declared fields are not independent at p
// (smallest singular value ≤ 1e-10 · largest).
void check_frame_independent(const DistributionSpec& e, const Vector& p);

ProjectorPair projector_at(const MetricField& g, const DistributionSpec& e, const Vector& p);

// Greedy completion axes: repeatedly the coordinate axis with largest
// residual g-norm after removing the span so far, ties to lowest index.
std::vector<int> choose_pivots(const MetricField& g, const DistributionSpec& e, const Vector& p);

AdaptedFrame adapted_frame_at(const MetricField& g, const DistributionSpec& e, const Vector& p);

// The adapted frame as n smooth vector fields with pivots frozen at p.
std::vector<VectorField> adapted_frame_fields(const MetricField& g, const DistributionSpec& e, const Vector& p);

// P(x)·V(x) and Q(x)·V(x) as fields.
VectorField project_tangent(const MetricField& g, const DistributionSpec& e, const VectorField& v);
VectorField project_normal(const MetricField& g, const DistributionSpec& e, const VectorField& v);

Vector lie_bracket(const VectorField& u, const VectorField& v, const Vector& p);

// (L_W g)(U, V) = W(g(U,V)) − g([W,U],V) − g(U,[W,V]) at p.
double lie_derivative_metric(const MetricField& g, const VectorField& w, const VectorField& u,
                             const VectorField& v, const Vector& p);

// W(g(U,V)) at p.
double metric_derivative(const MetricField& g, const VectorField& w, const VectorField& u, const VectorField& v,
                         const Vector& p);

// Norm of the E⊥-valued bracket form Q[·,·] on a g-orthonormal basis of E_p
// (root of the sum of squares over pairs). Zero iff brackets of E-fields stay
// in E at p; independent of the declared frame.
double involutivity_residual(const MetricField& g, const DistributionSpec& e, const Vector& p);

double g_norm(const Matrix& G, const Vector& v);

}  // namespace frob
