#pragma once

// The invariant suite behind `verify` and the acceptance run. Each check
// reports its worst case over the probes it visits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frob/frobenius.hpp"
#include "frob/scenario.hpp"

namespace frob {

struct CheckRecord {
  std::string id;
  std::string probe;  // where the worst value occurred
  double value = 0;
  double threshold = 0;
  std::string relation = "<=";  // value <= threshold, or ">" for witnesses
  bool pass = false;
  std::string note;
};

CheckRecord make_check(std::string id, std::string probe, double value, double threshold,
                       const std::string& relation = "<=");

// SplitMix64; doubles from the top 53 bits, so streams are identical across
// standard libraries.
class ProbeRng {
 public:
  explicit ProbeRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

// Uniform over the domain box shrunk by 10% per axis.
std::vector<Vector> probe_points(const Scenario& s, int count, std::uint64_t seed);

std::string describe_point(const Vector& p);

// Involutivity residual ≤ 1e-6 at the base point and at 20 seeded probes.
bool is_involutive(const Scenario& s);

// g-norm 0.5 velocity along the normalized sum of the adapted frame at the
// base point: generic (neither in E nor in E⊥).
Vector reference_velocity(const Scenario& s);

// g-norm 0.3 alternating combination of the adapted frame; the variation
// direction Y of the Jacobi checks.
Vector reference_variation(const Scenario& s);

namespace checks {

CheckRecord reduction_to_levi_civita(const Scenario& s, const std::vector<Vector>& probes);
std::vector<CheckRecord> torsion_conditions(const Scenario& s, const std::vector<Vector>& probes);
CheckRecord metric_compatibility(const Scenario& s, const std::vector<Vector>& probes);
CheckRecord torsion_recovery(const Scenario& s, const std::vector<Vector>& probes);
CheckRecord koszul_agreement(const Scenario& s, const std::vector<Vector>& probes);
CheckRecord total_geodesy(const Scenario& s, const std::vector<Vector>& probes);
CheckRecord curvature_antisymmetry(const Scenario& s, const std::vector<Vector>& probes);
CheckRecord curvature_closure(const Scenario& s, const std::vector<Vector>& probes);

CheckRecord geodesic_confinement(const Scenario& s, int count, std::uint64_t seed);
std::vector<CheckRecord> transport_membership(const Scenario& s, int count, std::uint64_t seed);
CheckRecord energy_conservation(const Scenario& s, int count, std::uint64_t seed);

CheckRecord jacobi_confinement(const Scenario& s);
CheckRecord jacobi_oracle(const Scenario& s);
CheckRecord jacobi_velocity(const Scenario& s);

CheckRecord blend_affine(const Scenario& s, const std::vector<Vector>& probes, std::uint64_t seed);
CheckRecord bott_identity(const Scenario& s, const std::vector<Vector>& probes, std::uint64_t seed);

// Largest min(‖∇_X Y − ∇°_X Y‖_g, ‖∇_X Y − ∇*_X Y‖_g) over probes and
// adapted-frame pairs; the worst probe is the documented one.
CheckRecord comparison_witness(const Scenario& s, const std::vector<Vector>& probes);

CheckRecord rk4_convergence(const Scenario& s);

// Builds the chart with the scenario's numerics; involutive scenarios check
// max residual ≤ tolerance, non-involutive ones witness > 1e-2.
CheckRecord chart_tangency(const Scenario& s, ExecPolicy policy, std::optional<FrobeniusChart>* keep = nullptr);

// Everything above that applies to the scenario.
std::vector<CheckRecord> full_suite(const Scenario& s, ExecPolicy policy);

}  // namespace checks

}  // namespace frob
