#pragma once

// Allocation-free evaluation of the canonical Christoffel symbols at double
// precision, for the integrators' inner loops. One gradient sweep over the
// expression tapes replaces the n dual passes of kernel::canonical; results
// agree with it to roundoff (tests compare the two).

#include <vector>

#include "frob/geometry.hpp"

namespace frob {

class ChristoffelField {
 public:
  // Pivots for the adapted-frame completion are frozen at `anchor`.
  ChristoffelField(const MetricField& g, const DistributionSpec& e, const Vector& anchor);
  ChristoffelField(const MetricField& g, const DistributionSpec& e, std::vector<int> pivots);

  int dimension() const { return n_; }
  const MetricField& metric() const { return g_; }
  const DistributionSpec& distribution() const { return e_; }
  const std::vector<int>& pivots() const { return pivots_; }

  // gamma[(k·n + i)·n + j] = Γ^k_ij(x); throws GeometryError/DomainError.
  void eval(const double* x, double* gamma) const;

  // Γ(u, v)^k = Γ^k_ij u^i v^j at x.
  Vector contract(const Vector& x, const Vector& u, const Vector& v) const;

 private:
  template <int NN>
  void eval_n(const double* x, double* gamma) const;

  MetricField g_;
  DistributionSpec e_;
  std::vector<int> pivots_;
  int n_ = 0;
  int r_ = 0;
  std::size_t scratch_ = 0;  // doubles needed by the largest tape
  // Value of each metric entry (upper triangle, row by row) then frame
  // component (a·n + k) when it has no coordinate dependence; NaN otherwise.
  std::vector<double> constant_;
};

}  // namespace frob
