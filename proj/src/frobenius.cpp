#include "frob/frobenius.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "frob/transport.hpp"

namespace frob {

namespace {

std::string involutivity_gate(const MetricField& g, const DistributionSpec& e, const Vector& p,
                              IntegrabilityCheck check) {
  const double res = involutivity_residual(g, e, p);
  if (res <= kInvolutivityGate) return {};
  std::ostringstream msg;
  msg.precision(17);
  msg << "distribution is not involutive at the base point (residual " << res << ")";
  if (check == IntegrabilityCheck::strict) throw GeometryError(msg.str());
  return msg.str();
}

// Multi-index for flat index i of an m^d grid, last axis fastest.
std::vector<int> unflatten(std::size_t i, int m, int d) {
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int a = d - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(i % static_cast<std::size_t>(m));
    i /= static_cast<std::size_t>(m);
  }
  return idx;
}

std::size_t power(int m, int d) {
  std::size_t out = 1;
  for (int a = 0; a < d; ++a) out *= static_cast<std::size_t>(m);
  return out;
}

void require_grid(int m, double extent, const char* what) {
  if (m < 1) throw GeometryError(std::string(what) + ": grid needs at least one point per axis");
  if (!(extent > 0.0)) throw GeometryError(std::string(what) + ": radius must be positive");
}

// Columns of `frame` made g-orthonormal (in order).
Matrix orthonormalized(const Matrix& G, const Matrix& frame) {
  std::vector<Vector> vs;
  for (Eigen::Index c = 0; c < frame.cols(); ++c) vs.emplace_back(frame.col(c));
  if (!gram_schmidt(G, vs)) throw GeometryError("transported E-frame degenerated");
  Matrix out(frame.rows(), frame.cols());
  for (std::size_t c = 0; c < vs.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = vs[c];
  return out;
}

}  // namespace

double grid_coordinate(int j, int m, double a) {
  if (m == 1) return 0.0;
  return a * static_cast<double>(2 * j - (m - 1)) / static_cast<double>(m - 1);
}

double tangency_from_columns(const MetricField& g, const DistributionSpec& e, const Vector& y,
                             const std::vector<Vector>& columns) {
  const ProjectorPair pq = projector_at(g, e, y);
  const Matrix G = g.eval(y);
  double worst = 0.0;
  for (const Vector& d : columns) {
    const double nd = g_norm(G, d);
    if (!(nd > 0.0)) throw GeometryError("chart direction vanished; map is singular here");
    worst = std::max(worst, g_norm(G, pq.Q * d) / nd);
  }
  return worst;
}

InvertibilityReport invertibility_from_jacobian(const Matrix& G, const Matrix& J) {
  const Matrix L = cholesky(G, "metric");
  const Matrix A = L.transpose() * J;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(A)};
  const auto& s = svd.singularValues();
  InvertibilityReport rep;
  const double smax = s(0), smin = s(s.size() - 1);
  rep.singular = !(smin > smax * std::numeric_limits<double>::epsilon());
  rep.condition = rep.singular ? std::numeric_limits<double>::infinity() : smax / smin;
  const double det = Eigen::MatrixXd(J).determinant();
  rep.determinant_sign = det > 0 ? 1 : (det < 0 ? -1 : 0);
  return rep;
}

double LeafSample::max_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

Vector leaf_point(const ChristoffelField& gamma, const LeafSample& leaf, const Vector& t, double h) {
  return exp_map(gamma, leaf.base, Vector(leaf.frame * t), h);
}

LeafSample leaf_sample(const MetricField& g, const DistributionSpec& e, const Vector& p, double epsilon, int m,
                       const ChartOptions& opts) {
  require_grid(m, epsilon, "leaf_sample");
  LeafSample leaf;
  if (auto w = involutivity_gate(g, e, p, opts.check); !w.empty()) leaf.warnings.push_back(w);
  const AdaptedFrame af = adapted_frame_at(g, e, p);
  const int r = e.rank();
  leaf.base = p;
  leaf.frame = af.vectors.leftCols(r);
  leaf.epsilon = epsilon;
  leaf.m = m;
  const ChristoffelField gamma(g, e, af.pivots);

  const std::size_t count = power(m, r);
  leaf.params.resize(count);
  leaf.points.resize(count);
  leaf.residuals.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = unflatten(i, m, r);
    Vector t(r);
    for (int a = 0; a < r; ++a) t(a) = grid_coordinate(idx[static_cast<std::size_t>(a)], m, epsilon);
    leaf.params[i] = t;
  }
  parallel_for(count, opts.policy, [&](std::size_t i) {
    const Vector& t = leaf.params[i];
    leaf.points[i] = leaf_point(gamma, leaf, t, opts.h);
    std::vector<Vector> cols;
    for (int a = 0; a < r; ++a) {
      Vector tp = t, tm = t;
      tp(a) += kTangencyStep;
      tm(a) -= kTangencyStep;
      cols.emplace_back((leaf_point(gamma, leaf, tp, opts.h) - leaf_point(gamma, leaf, tm, opts.h)) /
                        (2.0 * kTangencyStep));
    }
    leaf.residuals[i] = tangency_from_columns(g, e, leaf.points[i], cols);
  });
  return leaf;
}

FrobeniusChart::FrobeniusChart(const MetricField& g, const DistributionSpec& e, const Vector& p, double delta, int m,
                               const ChartOptions& opts)
    : g_(g),
      e_(e),
      gamma_(g, e, p),
      base_(p),
      delta_(delta),
      m_(m),
      n_(g.dimension()),
      r_(e.rank()),
      opts_(opts) {
  require_grid(m, delta, "build_frobenius_chart");
  if (auto w = involutivity_gate(g, e, p, opts.check); !w.empty()) warnings_.push_back(w);
  frame_ = kernel::adapted_frame(g, e, gamma_.pivots(), p);

  const int q = n_ - r_;
  const std::size_t count = power(m, n_);
  params_.resize(count);
  points_.resize(count);
  residuals_.assign(count, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = unflatten(i, m, n_);
    Vector x(n_);
    for (int a = 0; a < n_; ++a) x(a) = grid_coordinate(idx[static_cast<std::size_t>(a)], m, delta);
    params_[i] = x;
  }

  // Transverse stages are shared by every grid point with the same
  // transverse block: grid index = E index · m^q + transverse index.
  const std::size_t transverse_count = power(m, q);
  std::vector<TransverseStage> stages(transverse_count);
  parallel_for(transverse_count, opts_.policy, [&](std::size_t t) {
    stages[t] = transverse(params_[t].tail(q));
  });
  parallel_for(count, opts_.policy, [&](std::size_t i) {
    const TransverseStage& st = stages[i % transverse_count];
    points_[i] = shoot(st, params_[i].head(r_));
    if (interior(i)) residuals_[i] = residual_with(st, params_[i]);
  });

  const InvertibilityReport at0 = invertibility_from_jacobian(g_.eval(p), jacobian(Vector::Zero(n_)));
  if (at0.singular) throw GeometryError("chart Jacobian at 0 is singular (radius too large or degenerate scenario)");
}

FrobeniusChart::TransverseStage FrobeniusChart::transverse(const Vector& s) const {
  const int q = n_ - r_;
  if (s.size() != q) throw GeometryError("transverse block has the wrong length");
  TransverseStage st;
  if (q == 0 || s.isZero(0.0)) {
    st.q = base_;
    st.frame = frame_.leftCols(r_);
    return st;
  }
  const Vector w = frame_.rightCols(q) * s;
  const Trajectory traj = integrate_geodesic(gamma_, base_, w, 1.0, opts_.h);
  st.q = traj.x.back();
  const Matrix G = metric_at(g_, st.q);
  Matrix Y(n_, r_);
  if (opts_.frame_rule == FrameRule::projected_transport) {
    const Matrix P = projector_at(g_, e_, st.q).P;
    for (int a = 0; a < r_; ++a) Y.col(a) = P * parallel_transport(gamma_, traj, Vector(frame_.col(a))).V.back();
  } else {
    Y = e_.frame(st.q);
  }
  st.frame = orthonormalized(G, Y);
  return st;
}

Vector FrobeniusChart::shoot(const TransverseStage& stage, const Vector& xe) const {
  if (xe.size() != r_) throw GeometryError("E block has the wrong length");
  if (xe.isZero(0.0)) return stage.q;
  return exp_map(gamma_, stage.q, Vector(stage.frame * xe), opts_.h);
}

Vector FrobeniusChart::operator()(const Vector& x) const {
  if (x.size() != n_) throw GeometryError("chart parameter has the wrong length");
  return shoot(transverse(x.tail(n_ - r_)), x.head(r_));
}

bool FrobeniusChart::interior(std::size_t index) const {
  if (index >= params_.size()) return false;
  for (int j : unflatten(index, m_, n_))
    if (j == 0 || j == m_ - 1) return false;
  return true;
}

std::size_t FrobeniusChart::index_of(const std::vector<int>& multi) const {
  if (static_cast<int>(multi.size()) != n_) throw GeometryError("grid multi-index has the wrong length");
  std::size_t i = 0;
  for (int j : multi) {
    if (j < 0 || j >= m_) throw GeometryError("grid multi-index out of range");
    i = i * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j);
  }
  return i;
}

double FrobeniusChart::residual_with(const TransverseStage& stage, const Vector& x) const {
  std::vector<Vector> cols;
  const Vector xe = x.head(r_);
  for (int a = 0; a < r_; ++a) {
    Vector xp = xe, xm = xe;
    xp(a) += kTangencyStep;
    xm(a) -= kTangencyStep;
    cols.emplace_back((shoot(stage, xp) - shoot(stage, xm)) / (2.0 * kTangencyStep));
  }
  return tangency_from_columns(g_, e_, shoot(stage, xe), cols);
}

double FrobeniusChart::tangency_residual(std::size_t index) const {
  if (!interior(index)) throw GeometryError("tangency residual needs an interior grid point");
  return residuals_[index];
}

double FrobeniusChart::tangency_residual(const Vector& x) const {
  if (x.size() != n_) throw GeometryError("chart parameter has the wrong length");
  std::vector<int> multi;
  const double step = m_ > 1 ? 2.0 * delta_ / (m_ - 1) : 1.0;
  for (int a = 0; a < n_; ++a) {
    const double j = (x(a) + delta_) / step;
    const long jr = std::lround(j);
    if (std::abs(j - static_cast<double>(jr)) > 1e-9 || jr < 0 || jr >= m_)
      throw GeometryError("parameter is off the chart grid");
    multi.push_back(static_cast<int>(jr));
  }
  return tangency_residual(index_of(multi));
}

double FrobeniusChart::max_residual() const {
  double worst = 0.0;
  for (double r : residuals_)
    if (!std::isnan(r)) worst = std::max(worst, r);
  return worst;
}

Matrix FrobeniusChart::jacobian(const Vector& x) const {
  Matrix J(n_, n_);
  for (int a = 0; a < n_; ++a) {
    Vector xp = x, xm = x;
    xp(a) += kTangencyStep;
    xm(a) -= kTangencyStep;
    J.col(a) = ((*this)(xp) - (*this)(xm)) / (2.0 * kTangencyStep);
  }
  return J;
}

InvertibilityReport FrobeniusChart::invertibility(std::size_t index) const {
  if (!interior(index)) throw GeometryError("invertibility report needs an interior grid point");
  return invertibility_from_jacobian(g_.eval(points_[index]), jacobian(params_[index]));
}

}  // namespace frob
