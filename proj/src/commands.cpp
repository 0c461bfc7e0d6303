#include "frob/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "frob/connection.hpp"
#include "frob/frobenius.hpp"
#include "frob/transport.hpp"

namespace frob {

namespace {

struct Context {
  const Scenario& s;
  const CommandOptions& opts;
  CommandResult& result;

  Report& report() { return result.report; }
  std::string path(const std::string& file) const { return (std::filesystem::path(opts.out_dir) / file).string(); }

  CsvWriter csv(const std::string& product, const std::string& file, const std::vector<std::string>& header) {
    result.report.outputs.emplace_back(product, path(file));
    return CsvWriter(path(file), header);
  }
  void check(CheckRecord c) { result.report.checks.push_back(std::move(c)); }
  void checks(std::vector<CheckRecord> cs) {
    for (auto& c : cs) check(std::move(c));
  }
  void value(const std::string& name, double v) { result.report.results.emplace_back(name, v); }
  void say(const std::string& line) { result.summary.push_back(line); }
};

template <class F>
auto at_probe(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " (probe " + where + ")");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void append(std::vector<double>& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
}

std::vector<std::string> concat(std::vector<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Vector> command_probes(const Scenario& s, int count) {
  std::vector<Vector> out{s.base};
  for (const Vector& p : probe_points(s, count, s.numerics().seed)) out.push_back(p);
  return out;
}

ChartOptions chart_options(const Scenario& s, bool involutive, ExecPolicy policy) {
  ChartOptions o;
  o.h = s.numerics().step;
  o.frame_rule = s.numerics().frame_rule;
  o.check = involutive ? IntegrabilityCheck::strict : IntegrabilityCheck::warn;
  o.policy = policy;
  return o;
}

void check_involutive(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension(), m = s.numerics().grid;
  const Box box = s.g.domain().shrunk(0.1);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  std::vector<Vector> points(total);
  std::vector<double> res(total);
  parallel_for(total, c.opts.policy, [&](std::size_t idx) {
    Vector p(n);
    std::size_t rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      const int j = static_cast<int>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
      p(i) = box.lo(i) + (box.hi(i) - box.lo(i)) * j / (m - 1);
    }
    points[idx] = p;
    res[idx] = at_probe(describe_point(p), [&] { return involutivity_residual(s.g, s.E, p); });
  });
  CsvWriter out = c.csv("residual_grid", "involutivity.csv", concat({numbered("x", n), {"residual"}}));
  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> row;
    append(row, points[i]);
    row.push_back(res[i]);
    out.row(row);
    worst = std::max(worst, res[i]);
  }
  const double base = involutivity_residual(s.g, s.E, s.base);
  const bool involutive = is_involutive(s);
  c.value("residual_at_base", base);
  c.value("max_residual_on_grid", worst);
  c.value("involutive", involutive ? 1.0 : 0.0);
  c.check(make_check("involutivity.base", describe_point(s.base), base, kInvolutivityGate));
  c.say("involutivity residual at base " + describe_point(s.base) + ": " + fmt(base));
  c.say("max residual over " + std::to_string(total) + " grid points: " + fmt(worst));
  c.say(std::string("scenario is ") + (involutive ? "involutive" : "NOT involutive"));
}

void connection(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension();
  const auto probes = command_probes(s, 10);
  CsvWriter gt = c.csv("connection", "connection.csv", concat({{"probe"}, numbered("x", n), {"k", "i", "j", "gamma", "torsion"}}));
  CsvWriter rt = c.csv("curvature", "curvature.csv", concat({{"probe"}, numbered("x", n), {"l", "k", "i", "j", "R"}}));
  for (std::size_t q = 0; q < probes.size(); ++q) {
    const Vector& p = probes[q];
    at_probe(describe_point(p), [&] {
      const ConnectionEval con = canonical_at(s.g, s.E, p);
      const TorsionEval tor = torsion_at(s.g, s.E, p);
      const CurvatureEval cur = curvature_at(s.g, s.E, p);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            std::vector<double> row{static_cast<double>(q)};
            append(row, p);
            for (double v : {k + 1.0, i + 1.0, j + 1.0, con.gamma(k, i, j), tor.T(k, i, j)}) row.push_back(v);
            gt.row(row);
          }
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              std::vector<double> row{static_cast<double>(q)};
              append(row, p);
              for (double v : {l + 1.0, k + 1.0, i + 1.0, j + 1.0, cur.R(l, k, i, j)}) row.push_back(v);
              rt.row(row);
            }
    });
  }
  if (s.E.rank() == n) c.check(checks::reduction_to_levi_civita(s, probes));
  c.checks(checks::torsion_conditions(s, probes));
  c.check(checks::metric_compatibility(s, probes));
  c.check(checks::torsion_recovery(s, probes));
  c.check(checks::curvature_antisymmetry(s, probes));
  c.say("tables at " + std::to_string(probes.size()) + " probes (probe 0 is the base point)");
}

void compare(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension(), r = s.E.rank();
  const auto probes = probe_points(s, 20, s.numerics().seed);
  CsvWriter ct = c.csv("comparison", "compare.csv",
                       concat({{"probe"}, numbered("x", n), {"a", "b"}, numbered("canonical", n), numbered("svk", n),
                               numbered("vranceanu", n), {"dist_svk", "dist_vranceanu"}}));
  double max_svk = 0.0, max_vr = 0.0;
  for (std::size_t q = 0; q < probes.size(); ++q) {
    const Vector& p = probes[q];
    at_probe(describe_point(p), [&] {
      const Matrix G = s.g.eval(p);
      const auto fields = adapted_frame_fields(s.g, s.E, p);
      const ConnectionEval con = canonical_at(s.g, s.E, p);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Vector d = covariant_derivative(con, fields[a], fields[b], p);
          const Vector svk = schouten_van_kampen_at(s.g, s.E, fields[a], fields[b], p);
          const Vector vr = vranceanu_at(s.g, s.E, fields[a], fields[b], p);
          const double ds = g_norm(G, d - svk), dv = g_norm(G, d - vr);
          max_svk = std::max(max_svk, ds);
          max_vr = std::max(max_vr, dv);
          std::vector<double> row{static_cast<double>(q)};
          append(row, p);
          row.push_back(a + 1.0);
          row.push_back(b + 1.0);
          append(row, d);
          append(row, svk);
          append(row, vr);
          row.push_back(ds);
          row.push_back(dv);
          ct.row(row);
        }
    });
  }
  if (r < n) {
    CsvWriter bt = c.csv("bott_defect", "bott.csv", concat({{"probe"}, numbered("x", n), {"i", "alpha", "beta", "lhs", "rhs"}}));
    for (std::size_t q = 0; q < probes.size(); ++q) {
      const Vector& p = probes[q];
      at_probe(describe_point(p), [&] {
        const auto fields = adapted_frame_fields(s.g, s.E, p);
        for (int i = 0; i < r; ++i)
          for (int al = r; al < n; ++al)
            for (int be = r; be < n; ++be) {
              const DefectIdentity d = bott_defect_identity(s.g, s.E, fields[i], fields[al], fields[be], p);
              std::vector<double> row{static_cast<double>(q)};
              append(row, p);
              for (double v : {i + 1.0, al + 1.0, be + 1.0, d.lhs, d.rhs}) row.push_back(v);
              bt.row(row);
            }
      });
    }
  }
  c.value("max_dist_to_schouten_van_kampen", max_svk);
  c.value("max_dist_to_vranceanu", max_vr);
  c.check(checks::comparison_witness(s, probes));
  c.check(checks::bott_identity(s, probes, s.numerics().seed + 2));
  c.say("max ‖∇ − ∇°‖_g = " + fmt(max_svk) + ", max ‖∇ − ∇*‖_g = " + fmt(max_vr) + " over adapted-frame pairs");
}

void write_trajectory(Context& c, const Trajectory& tr) {
  const int n = c.s.g.dimension();
  CsvWriter out = c.csv("trajectory", "geodesic.csv", concat({{"t"}, numbered("x", n), numbered("v", n)}));
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<double> row{tr.t[k]};
    append(row, tr.x[k]);
    append(row, tr.v[k]);
    out.row(row);
  }
}

void geodesic(Context& c) {
  const Scenario& s = c.s;
  const Vector v0 = reference_velocity(s);
  const ChristoffelField gamma(s.g, s.E, s.base);
  const Trajectory tr = integrate_geodesic(gamma, s.base, v0, 1.0, s.numerics().step);
  write_trajectory(c, tr);
  const Matrix G0 = s.g.eval(s.base);
  const double e0 = inner(G0, v0, v0);
  double drift = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k)
    drift = std::max(drift, std::abs(inner(Matrix(s.g.eval(tr.x[k])), tr.v[k], tr.v[k]) - e0));
  c.value("energy_drift", drift);
  c.check(make_check("transport.energy", "reference geodesic", drift, s.numerics().tolerance("transport.energy", 1e-7)));
  c.check(checks::rk4_convergence(s));
  c.say("reference geodesic from " + describe_point(s.base) + ", " + std::to_string(tr.size() - 1) +
        " steps, endpoint " + describe_point(tr.x.back()).substr(2));
}

void transport(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension();
  const ChristoffelField gamma(s.g, s.E, s.base);
  const Trajectory tr = integrate_geodesic(gamma, s.base, reference_velocity(s), 1.0, s.numerics().step);
  const Matrix F = adapted_frame_at(s.g, s.E, s.base).vectors;
  std::vector<TransportState> frames;
  for (int a = 0; a < n; ++a) frames.push_back(parallel_transport(gamma, tr, F.col(a)));
  std::vector<std::vector<std::string>> header{{"t"}, numbered("x", n), numbered("v", n)};
  for (int a = 0; a < n; ++a) header.push_back(numbered("V" + std::to_string(a + 1) + "_", n));
  CsvWriter out = c.csv("transport", "transport.csv", concat(header));
  double iso = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<double> row{tr.t[k]};
    append(row, tr.x[k]);
    append(row, tr.v[k]);
    for (int a = 0; a < n; ++a) append(row, frames[a].V[k]);
    out.row(row);
    const Matrix G = s.g.eval(tr.x[k]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        iso = std::max(iso, std::abs(inner(G, frames[a].V[k], frames[b].V[k]) - (a == b ? 1.0 : 0.0)));
  }
  c.value("orthonormality_drift", iso);
  c.check(make_check("transport.isometry", "adapted frame along the reference geodesic", iso,
                     s.numerics().tolerance("transport.isometry", 1e-7)));
  if (is_involutive(s)) c.checks(checks::transport_membership(s, 5, s.numerics().seed + 4));
  c.say("transported the adapted frame at the base point along the reference geodesic");
}

void jacobi(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension();
  const double h = s.numerics().step;
  const Vector X = reference_velocity(s), Y = reference_variation(s);
  const Trajectory tr = integrate_geodesic(s.g, s.E, s.base, X, 1.0, h);
  const TransportState js = jacobi_field_ode(s.g, s.E, tr, Vector::Zero(n), Y);
  CsvWriter out = c.csv("jacobi", "jacobi.csv", concat({{"t"}, numbered("x", n), numbered("J", n), numbered("DJ", n)}));
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<double> row{tr.t[k]};
    append(row, tr.x[k]);
    append(row, js.J[k]);
    append(row, js.Jprime[k]);
    out.row(row);
  }
  CsvWriter ot = c.csv("jacobi_oracle", "jacobi_oracle.csv",
                       concat({{"t"}, numbered("ode", n), numbered("oracle", n), {"relative_error"}}));
  double worst = 0.0;
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    const std::size_t k = static_cast<std::size_t>(std::llround(t / tr.h));
    const Vector oracle = variation_jacobi_oracle(s.g, s.E, s.base, X, Y, t, h);
    const double err = (js.J[k] - oracle).norm() / oracle.norm();
    worst = std::max(worst, err);
    std::vector<double> row{t};
    append(row, js.J[k]);
    append(row, oracle);
    row.push_back(err);
    ot.row(row);
  }
  c.value("max_relative_error", worst);
  c.check(checks::jacobi_oracle(s));
  c.check(checks::jacobi_velocity(s));
  if (is_involutive(s)) c.check(checks::jacobi_confinement(s));
  c.say("Jacobi ODE vs variation oracle: max relative error " + fmt(worst));
}

void leaf(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension(), r = s.E.rank();
  const bool involutive = is_involutive(s);
  const LeafSample L = leaf_sample(s.g, s.E, s.base, s.numerics().epsilon, s.numerics().grid,
                                   chart_options(s, involutive, c.opts.policy));
  CsvWriter out = c.csv("leaf", "leaf.csv", concat({numbered("t", r), numbered("x", n), {"residual"}}));
  for (std::size_t i = 0; i < L.points.size(); ++i) {
    std::vector<double> row;
    append(row, L.params[i]);
    append(row, L.points[i]);
    row.push_back(L.residuals[i]);
    out.row(row);
  }
  for (const auto& w : L.warnings) c.report().notes.push_back(w);
  const double worst = L.max_residual();
  c.value("max_residual", worst);
  if (involutive)
    c.check(make_check("leaf.tangency", "leaf grid", worst, s.numerics().tolerance("leaf.tangency", 1e-5)));
  else
    c.check(make_check("leaf.integrability_failure", "leaf grid", worst,
                       s.numerics().tolerance("leaf.integrability_failure", 1e-2), ">"));
  c.say("leaf through " + describe_point(s.base) + ": " + std::to_string(L.points.size()) +
        " samples, max residual " + fmt(worst));
}

void chart(Context& c) {
  const Scenario& s = c.s;
  const int n = s.g.dimension();
  std::optional<FrobeniusChart> keep;
  const CheckRecord tangency = checks::chart_tangency(s, c.opts.policy, &keep);
  const FrobeniusChart& ch = *keep;
  CsvWriter out = c.csv("chart", "chart.csv", concat({numbered("x", n), numbered("y", n), {"residual"}}));
  for (std::size_t i = 0; i < ch.grid_size(); ++i) {
    std::vector<double> row;
    append(row, ch.grid_params()[i]);
    append(row, ch.grid_points()[i]);
    row.push_back(ch.grid_residuals()[i]);
    out.row(row);
  }
  for (const auto& w : ch.warnings()) c.report().notes.push_back(w);

  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < ch.grid_size(); ++i)
    if (ch.interior(i)) interior.push_back(i);
  std::vector<InvertibilityReport> inv(interior.size());
  parallel_for(interior.size(), c.opts.policy, [&](std::size_t k) { inv[k] = ch.invertibility(interior[k]); });
  const InvertibilityReport center = ch.invertibility(ch.grid_size() / 2);
  int flips = 0;
  double worst_cond = 0.0;
  for (const auto& r : inv) {
    flips += r.determinant_sign != center.determinant_sign || r.singular;
    worst_cond = std::max(worst_cond, r.condition);
  }
  c.value("max_tangency_residual", ch.max_residual());
  c.value("condition_at_center", center.condition);
  c.value("determinant_sign_at_center", center.determinant_sign);
  c.value("max_condition", worst_cond);
  c.check(tangency);
  c.check(make_check("chart.determinant_sign_constant", "interior grid", flips, 0.0));
  c.say("max tangency residual = " + fmt(ch.max_residual()) + " over " + std::to_string(interior.size()) +
        " interior grid points (delta " + fmt(ch.delta()) + ", m " + std::to_string(ch.resolution()) + ")");
  c.say("Jacobian at center: condition " + fmt(center.condition) + ", det sign " +
        std::to_string(center.determinant_sign) + "; sign changes on grid: " + std::to_string(flips));
}

void verify(Context& c) {
  c.checks(checks::full_suite(c.s, c.opts.policy));
  int failed = 0;
  for (const auto& r : c.report().checks) failed += !r.pass;
  c.say(std::to_string(c.report().checks.size() - failed) + "/" + std::to_string(c.report().checks.size()) +
        " checks passed");
  c.result.exit_code = failed ? 1 : 0;
}

const std::map<std::string, std::function<void(Context&)>>& registry() {
  static const std::map<std::string, std::function<void(Context&)>> r{
      {"check-involutive", check_involutive},
      {"connection", connection},
      {"compare", compare},
      {"geodesic", geodesic},
      {"transport", transport},
      {"jacobi", jacobi},
      {"leaf", leaf},
      {"chart", chart},
      {"verify", verify},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check-involutive", "connection", "compare", "geodesic", "transport",
                                              "jacobi",           "leaf",       "chart",   "verify"};
  return names;
}

CommandResult run_command(const std::string& command, const CommandOptions& options) {
  const auto it = registry().find(command);
  if (it == registry().end()) throw ConfigError("unknown command '" + command + "'");
  Scenario s = resolve_scenario(options.scenario);
  if (options.seed) s.config.numerics.seed = *options.seed;
  if (options.step) {
    if (!(*options.step > 0.0)) throw ConfigError("step must be positive");
    s.config.numerics.step = *options.step;
  }
  std::filesystem::create_directories(options.out_dir);

  CommandResult result;
  result.report.scenario = s.name();
  result.report.command = command;
  result.report.numerics = s.numerics();
  Context ctx{s, options, result};
  try {
    it->second(ctx);
  } catch (const Error& e) {
    throw Error("scenario '" + s.name() + "', command '" + command + "': " + e.what());
  }
  const std::string report_path = ctx.path("report.json");
  result.report.write(report_path);
  result.summary.push_back("report: " + report_path);
  return result;
}

}  // namespace frob
