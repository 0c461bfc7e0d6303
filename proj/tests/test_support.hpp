#pragma once

#include <cmath>
#include <random>

#include "frob/linalg.hpp"

namespace test {

inline frob::Vector vec(std::initializer_list<double> v) {
  frob::Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline double max_abs(const frob::Matrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace test

#include <string>
#include <vector>

#include "frob/scenario.hpp"

namespace test {

inline frob::Scenario custom(int n, std::vector<std::string> metric, std::vector<std::vector<std::string>> frame,
                             double lo, double hi, std::vector<double> base = {}) {
  frob::ScenarioConfig c;
  c.name = "custom";
  c.n = n;
  c.r = static_cast<int>(frame.size());
  c.metric = std::move(metric);
  c.frame = std::move(frame);
  c.lower.assign(static_cast<std::size_t>(n), lo);
  c.upper.assign(static_cast<std::size_t>(n), hi);
  if (!base.empty()) c.base_point = base;
  return frob::build_scenario(c);
}

inline frob::Scenario builtin(const std::string& name) { return frob::resolve_scenario(name); }

// Round unit 2-sphere in (θ, φ), E = TM.
inline frob::Scenario round_sphere() {
  return custom(2, {"1", "0", "sin(x1)^2"}, {{"1", "0"}, {"0", "1"}}, 0.2, 2.9, {1.5707963267948966, 0.3});
}

}  // namespace test
