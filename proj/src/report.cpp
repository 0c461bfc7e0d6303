#include "frob/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "frob/errors.hpp"

namespace frob {

namespace {

using ordered = nlohmann::ordered_json;

// JSON has no nan/inf; write them as strings.
ordered number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw Error(path_ + ": row has " + std::to_string(values.size()) + " values, header has " +
                std::to_string(columns_));
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
  ++rows_;
}

std::vector<std::string> numbered(const std::string& prefix, int count, int first) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(first + i));
  return out;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json() const {
  ordered j;
  j["artifact_version"] = FROB_VERSION;
  j["scenario"] = scenario;
  j["command"] = command;
  ordered num;
  num["step"] = numerics.step;
  num["delta"] = numerics.delta;
  num["epsilon"] = numerics.epsilon;
  num["grid"] = numerics.grid;
  num["seed"] = numerics.seed;
  num["frame_rule"] = to_string(numerics.frame_rule);
  ordered tol = ordered::object();
  for (const auto& [k, v] : numerics.tolerances) tol[k] = v;
  num["tolerances"] = tol;
  j["numerics"] = num;
  ordered cs = ordered::array();
  for (const auto& c : checks) {
    ordered r;
    r["id"] = c.id;
    r["probe"] = c.probe;
    r["value"] = number(c.value);
    r["relation"] = c.relation;
    r["threshold"] = number(c.threshold);
    r["pass"] = c.pass;
    if (!c.note.empty()) r["note"] = c.note;
    cs.push_back(r);
  }
  j["checks"] = cs;
  j["all_pass"] = all_pass();
  ordered res = ordered::object();
  for (const auto& [k, v] : results) res[k] = number(v);
  j["results"] = res;
  ordered outs = ordered::object();
  for (const auto& [k, v] : outputs) outs[k] = v;
  j["outputs"] = outs;
  if (!notes.empty()) j["notes"] = notes;
  return j.dump(2) + "\n";
}

void Report::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << to_json();
}

}  // namespace frob
