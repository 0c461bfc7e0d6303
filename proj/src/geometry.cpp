#include "frob/geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace frob {

bool Box::contains(const Vector& p) const {
  if (p.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (!(p(i) > lo(i) && p(i) < hi(i))) return false;
  return true;
}

Box Box::shrunk(double fraction) const {
  Box b = *this;
  const Vector w = hi - lo;
  b.lo = lo + 0.5 * fraction * w;
  b.hi = hi - 0.5 * fraction * w;
  return b;
}

MetricField::MetricField(std::vector<Expression> upper, Box domain) : upper_(std::move(upper)), domain_(std::move(domain)) {
  n_ = domain_.dimension();
  if (n_ < 1 || n_ > kMaxDim) throw GeometryError("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (static_cast<int>(upper_.size()) != n_ * (n_ + 1) / 2)
    throw GeometryError("metric needs n(n+1)/2 = " + std::to_string(n_ * (n_ + 1) / 2) + " entries");
  for (const auto& e : upper_)
    if (e.dimension() != n_) throw GeometryError("metric entry parsed for a different dimension");
}

MetricField MetricField::euclidean(Box domain) {
  const int n = domain.dimension();
  std::vector<Expression> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) upper.push_back(Expression::constant(i == j ? 1.0 : 0.0, n));
  return MetricField(std::move(upper), std::move(domain));
}

const Expression& MetricField::entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  // offset of row i in the packed upper triangle
  const int row = i * n_ - i * (i - 1) / 2;
  return upper_[static_cast<std::size_t>(row + (j - i))];
}

DistributionSpec::DistributionSpec(std::vector<std::vector<Expression>> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) throw GeometryError("distribution needs at least one field");
  n_ = static_cast<int>(fields_.front().size());
  for (const auto& f : fields_) {
    if (static_cast<int>(f.size()) != n_) throw GeometryError("distribution fields have inconsistent lengths");
    for (const auto& c : f)
      if (c.dimension() != n_) throw GeometryError("field component parsed for a different dimension");
  }
  if (rank() > n_) throw GeometryError("rank exceeds dimension");
}

VectorField DistributionSpec::field(int a) const {
  std::vector<Expression> comps = fields_.at(static_cast<std::size_t>(a));
  return VectorField([comps](const auto& p) {
    using S = typename std::decay_t<decltype(p)>::Scalar;
    Vec<S> out(static_cast<Eigen::Index>(comps.size()));
    for (std::size_t k = 0; k < comps.size(); ++k) out(static_cast<Eigen::Index>(k)) = comps[k].eval(p);
    return out;
  });
}

DistributionSpec DistributionSpec::recombined(const Matrix& m) const {
  if (m.rows() != rank() || m.cols() != rank()) throw GeometryError("recombination matrix must be r×r");
  std::vector<std::vector<Expression>> out(static_cast<std::size_t>(rank()));
  for (int b = 0; b < rank(); ++b) {
    for (int k = 0; k < n_; ++k) {
      std::ostringstream text;
      text.precision(17);
      for (int a = 0; a < rank(); ++a) {
        if (a) text << " + ";
        text << "(" << m(a, b) << ")*" << fields_[a][k].serialize();
      }
      out[b].push_back(Expression::parse(text.str(), n_));
    }
  }
  return DistributionSpec(std::move(out));
}

double g_norm(const Matrix& G, const Vector& v) { return std::sqrt(std::max(0.0, v.dot(G * v))); }

Matrix metric_at(const MetricField& g, const Vector& p) {
  Matrix G = g.eval(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(G), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (!(lmin > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "metric not positive definite (smallest eigenvalue " << lmin << ")";
    throw GeometryError(msg.str());
  }
  return G;
}

void check_frame_independent(const DistributionSpec& e, const Vector& p) {
  const Matrix F = e.frame(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(F)};
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-10 * s(0))) throw GeometryError("distribution frame degenerate at point");
}

ProjectorPair projector_at(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  metric_at(g, p);
  check_frame_independent(e, p);
  ProjectorPair out;
  out.P = kernel::projector(g, e, p);
  out.Q = Matrix::Identity(g.dimension(), g.dimension()) - out.P;
  return out;
}

std::vector<int> choose_pivots(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  const int n = g.dimension();
  const Matrix G = g.eval(p);
  const Matrix F = e.frame(p);
  std::vector<Vector> basis;
  for (int a = 0; a < e.rank(); ++a) basis.emplace_back(F.col(a));
  if (!gram_schmidt(G, basis)) throw GeometryError("degenerate frame at point");

  std::vector<int> pivots;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (static_cast<int>(basis.size()) < n) {
    int best = -1;
    double best_norm = -1.0;
    Vector best_res;
    for (int k = 0; k < n; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      Vector r = Vector::Unit(n, k);
      for (const auto& b : basis) r -= inner(G, b, r) * b;
      const double nr = g_norm(G, r);
      if (nr > best_norm) {  // strict: ties keep the lower index
        best = k;
        best_norm = nr;
        best_res = r;
      }
    }
    if (best < 0 || !(best_norm > 1e-10)) throw GeometryError("could not complete adapted frame");
    used[static_cast<std::size_t>(best)] = true;
    pivots.push_back(best);
    basis.emplace_back(best_res / best_norm);
  }
  return pivots;
}

AdaptedFrame adapted_frame_at(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  metric_at(g, p);
  check_frame_independent(e, p);
  AdaptedFrame f;
  f.rank = e.rank();
  f.pivots = choose_pivots(g, e, p);
  f.vectors = kernel::adapted_frame(g, e, f.pivots, p);
  return f;
}

std::vector<VectorField> adapted_frame_fields(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  const std::vector<int> pivots = choose_pivots(g, e, p);
  std::vector<VectorField> out;
  for (int c = 0; c < g.dimension(); ++c) {
    out.emplace_back([g, e, pivots, c](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::Scalar;
      return Vec<S>(kernel::adapted_frame(g, e, pivots, x).col(c));
    });
  }
  return out;
}

VectorField project_tangent(const MetricField& g, const DistributionSpec& e, const VectorField& v) {
  return VectorField([g, e, v](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    return Vec<S>(kernel::projector(g, e, x) * v(x));
  });
}

VectorField project_normal(const MetricField& g, const DistributionSpec& e, const VectorField& v) {
  return VectorField([g, e, v](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    const Vec<S> vx = v(x);
    return Vec<S>(vx - kernel::projector(g, e, x) * vx);
  });
}

Vector lie_bracket(const VectorField& u, const VectorField& v, const Vector& p) {
  return derivative(v, p, u(p)) - derivative(u, p, v(p));
}

double metric_derivative(const MetricField& g, const VectorField& w, const VectorField& u, const VectorField& v,
                         const Vector& p) {
  const Vec<D1> x = seed_point(p, w(p));
  const Mat<D1> G = g.eval(x);
  return inner(G, u(x), v(x)).du;
}

double lie_derivative_metric(const MetricField& g, const VectorField& w, const VectorField& u,
                             const VectorField& v, const Vector& p) {
  const Matrix G = g.eval(p);
  return metric_derivative(g, w, u, v, p) - inner(G, lie_bracket(w, u, p), v(p)) -
         inner(G, u(p), lie_bracket(w, v, p));
}

double involutivity_residual(const MetricField& g, const DistributionSpec& e, const Vector& p) {
  const int r = e.rank();
  const ProjectorPair pq = projector_at(g, e, p);
  const Matrix G = g.eval(p);
  const Matrix F = e.frame(p);
  std::vector<VectorField> fields;
  for (int a = 0; a < r; ++a) fields.push_back(e.field(a));

  // omega[i][j] = Q [X_i, X_j]
  std::vector<std::vector<Vector>> omega(r, std::vector<Vector>(r, Vector::Zero(g.dimension())));
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      omega[i][j] = pq.Q * lie_bracket(fields[i], fields[j], p);
      omega[j][i] = -omega[i][j];
    }

  // Orthonormal basis U = F C with C = L^{-T}, gram = L Lᵀ.
  const Matrix L = cholesky(Matrix(F.transpose() * G * F), "frame Gram matrix");
  const Matrix C = L.transpose().triangularView<Eigen::Upper>().solve(Matrix(Matrix::Identity(r, r)));
  double sum = 0.0;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      Vector w = Vector::Zero(g.dimension());
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) w += C(i, a) * C(j, b) * omega[i][j];
      const double nw = g_norm(G, w);
      sum += nw * nw;
    }
  return std::sqrt(sum);
}

}  // namespace frob
