#pragma once

// Fixed-step RK4 integration of the canonical connection's curve ODEs.
//
//   geodesic:   x' = v,  v' = −Γ(v, v)
//   transport:  V' = −Γ(γ', V)
//   Jacobi:     ∇∇J = R(γ', J)γ' + ∇(τ(γ', J)), carried as coordinate (J, J̇)
//
// Transport and Jacobi ride on a stored geodesic: each step restarts the
// augmented system from the stored state (x_k, v_k), so the geodesic part of
// the step reproduces (x_{k+1}, v_{k+1}) exactly and no interpolation is
// needed.

#include <vector>

#include "frob/christoffel.hpp"
#include "frob/errors.hpp"

namespace frob {

struct Trajectory {
  double h = 0.0;
  std::vector<double> t;
  std::vector<Vector> x;  // γ(t_k)
  std::vector<Vector> v;  // γ′(t_k)

  std::size_t size() const { return t.size(); }
};

struct TransportState {
  std::vector<Vector> V;       // parallel transport
  std::vector<Vector> J;       // Jacobi field
  std::vector<Vector> Jprime;  // ∇_{γ′}J (covariant)
};

// Thrown when a stage point leaves the domain box; carries the samples
// accepted so far.
class DomainExit : public GeometryError {
 public:
  DomainExit(const std::string& what, Trajectory partial) : GeometryError(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

// N = ceil(T/h) steps of size T/N.
int step_count(double T, double h);

Trajectory integrate_geodesic(const ChristoffelField& gamma, const Vector& p0, const Vector& v0, double T, double h);
Trajectory integrate_geodesic(const MetricField& g, const DistributionSpec& e, const Vector& p0, const Vector& v0,
                              double T, double h);

// Endpoint of the geodesic with initial velocity v at t = 1.
Vector exp_map(const ChristoffelField& gamma, const Vector& p, const Vector& v, double h);
Vector exp_map(const MetricField& g, const DistributionSpec& e, const Vector& p, const Vector& v, double h);

TransportState parallel_transport(const ChristoffelField& gamma, const Trajectory& traj, const Vector& V0);
TransportState parallel_transport(const MetricField& g, const DistributionSpec& e, const Trajectory& traj,
                                  const Vector& V0);

// J(0) = J0, ∇_{γ′}J(0) = J0prime. traj must be a canonical geodesic.
TransportState jacobi_field_ode(const MetricField& g, const DistributionSpec& e, const Trajectory& traj,
                                const Vector& J0, const Vector& J0prime);

// ∂/∂u exp_p(t(X + uY)) at u = 0 by central difference, u₀ = 1e-5.
Vector variation_jacobi_oracle(const MetricField& g, const DistributionSpec& e, const Vector& p, const Vector& X,
                               const Vector& Y, double t, double h);

// max over interior samples of ‖(x_{k+1} − 2x_k + x_{k−1})/h² + Γ(v_k, v_k)‖ / h².
double geodesic_residual_constant(const ChristoffelField& gamma, const Trajectory& traj);

struct ConvergenceStudy {
  std::vector<double> steps;
  std::vector<double> differences;  // ‖x_h(T) − x_{h/2}(T)‖ for consecutive pairs
  std::vector<double> orders;       // log2 of consecutive difference ratios
  bool exact = false;               // differences at roundoff: integrator exact on this curve
  double observed_order() const;    // smallest measured order (∞ when exact)
};

// Endpoint self-convergence over h0, h0/2, …, h0/2^(levels−1).
ConvergenceStudy rk4_self_convergence(const ChristoffelField& gamma, const Vector& p0, const Vector& v0, double T,
                                      double h0, int levels);

}  // namespace frob
