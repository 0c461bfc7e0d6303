#pragma once

// Leaves and the double-exponential chart
//
//   Φ(x) = exp_q(x¹Y₁ + … + xʳYᵣ),   q = exp_p(x^{r+1}X_{r+1} + … + xⁿXₙ)
//
// where X is the adapted frame at p and Y₁..Yᵣ is an E-frame at q built by
// the configured FrameRule. Grids are evaluated point-independently under an
// ExecPolicy; cached grids are immutable once built.

#include <optional>
#include <string>
#include <vector>

#include "frob/christoffel.hpp"
#include "frob/parallel.hpp"
#include "frob/scenario.hpp"

namespace frob {

enum class IntegrabilityCheck {
  strict,  // refuse when involutivity_residual(p) > 1e-6
  warn,    // record a warning and proceed (demonstrates failure)
};

struct ChartOptions {
  double h = 1e-3;
  FrameRule frame_rule = FrameRule::projected_transport;
  IntegrabilityCheck check = IntegrabilityCheck::strict;
  ExecPolicy policy = ExecPolicy::openmp;
};

inline constexpr double kTangencyStep = 1e-5;
inline constexpr double kInvolutivityGate = 1e-6;

struct LeafSample {
  Vector base;
  Matrix frame;  // n×r, adapted E-frame at p
  double epsilon = 0;
  int m = 0;
  std::vector<Vector> params;  // (t₁..tᵣ)
  std::vector<Vector> points;
  std::vector<double> residuals;
  std::vector<std::string> warnings;

  double max_residual() const;
};

// Grid coordinate j of m on [−a, a]; the middle index of odd m is exactly 0.
double grid_coordinate(int j, int m, double a);

LeafSample leaf_sample(const MetricField& g, const DistributionSpec& e, const Vector& p, double epsilon, int m,
                       const ChartOptions& opts = {});

// Leaf map t ↦ exp_p(Σ tᵢXᵢ) with the frame of `leaf`.
Vector leaf_point(const ChristoffelField& gamma, const LeafSample& leaf, const Vector& t, double h);

struct InvertibilityReport {
  double condition = 0;  // 2-norm condition number of Lᵀ·DΦ, g(Φ(x)) = L Lᵀ
  int determinant_sign = 0;
  bool singular = false;  // condition number overflowed
};

class FrobeniusChart {
 public:
  struct TransverseStage {
    Vector q;
    Matrix frame;  // n×r E-frame at q
  };

  FrobeniusChart(const MetricField& g, const DistributionSpec& e, const Vector& p, double delta, int m,
                 const ChartOptions& opts = {});

  int dimension() const { return n_; }
  int rank() const { return r_; }
  const Vector& base() const { return base_; }
  const Matrix& frame() const { return frame_; }  // adapted X₁..Xₙ at p
  double delta() const { return delta_; }
  int resolution() const { return m_; }
  const ChartOptions& options() const { return opts_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Vector operator()(const Vector& x) const;
  TransverseStage transverse(const Vector& s) const;  // s = (x^{r+1}..xⁿ)
  Vector shoot(const TransverseStage& stage, const Vector& xe) const;

  // Cached grid, row-major over axes 1..n (last axis fastest).
  std::size_t grid_size() const { return params_.size(); }
  const std::vector<Vector>& grid_params() const { return params_; }
  const std::vector<Vector>& grid_points() const { return points_; }
  bool interior(std::size_t index) const;
  std::size_t index_of(const std::vector<int>& multi) const;
  // NaN at boundary points (tangency needs an interior point).
  const std::vector<double>& grid_residuals() const { return residuals_; }
  double max_residual() const;

  // max_i ‖Q d_i‖_g / ‖d_i‖_g at an interior grid point; the Vector form
  // throws GeometryError for parameters off the interior grid.
  double tangency_residual(std::size_t index) const;
  double tangency_residual(const Vector& x) const;
  InvertibilityReport invertibility(std::size_t index) const;

  // Finite-difference columns ∂Φ/∂xⁱ at x (central, step kTangencyStep).
  Matrix jacobian(const Vector& x) const;

  const ChristoffelField& connection() const { return gamma_; }

 private:
  double residual_with(const TransverseStage& stage, const Vector& x) const;

  MetricField g_;
  DistributionSpec e_;
  ChristoffelField gamma_;
  Vector base_;
  Matrix frame_;
  double delta_;
  int m_;
  int n_;
  int r_;
  ChartOptions opts_;
  std::vector<std::string> warnings_;
  std::vector<Vector> params_;
  std::vector<Vector> points_;
  std::vector<double> residuals_;
};

// max over columns dᵢ of ‖Q(y)·dᵢ‖_g / ‖dᵢ‖_g, g and Q taken at y.
double tangency_from_columns(const MetricField& g, const DistributionSpec& e, const Vector& y,
                             const std::vector<Vector>& columns);

InvertibilityReport invertibility_from_jacobian(const Matrix& G, const Matrix& J);

}  // namespace frob
