// SPDX-License-Identifier: Apache-2.0
#include "gem/config.hpp"

#include <cmath>
#include <fstream>

namespace gem {

using nlohmann::json;

StandardProtocol standard_protocol(double fwhm) {
  if (!(fwhm > 0)) throw std::invalid_argument("fwhm must be > 0");
  StandardProtocol sp;
  sp.center_time = 1.3 * fwhm;
  sp.timings.t_ctrl_off = sp.center_time + 1.1 * fwhm;
  sp.timings.t_flip = sp.center_time + 1.4 * fwhm;
  sp.timings.t_total = 6.0 * fwhm;
  return sp;
}

namespace {

double stark_center(double delta_c, double rabi) {
  const double r = (std::hypot(delta_c, rabi) - std::fabs(delta_c)) / 2.0;
  return delta_c >= 0 ? r : -r;
}

double get_num(const json& j, const char* key, double fallback,
               bool required = false) {
  if (!j.contains(key)) {
    if (required) throw std::invalid_argument(std::string("config: missing ") + key);
    return fallback;
  }
  if (!j.at(key).is_number())
    throw std::invalid_argument(std::string("config: ") + key + " must be a number");
  return j.at(key).get<double>();
}

} // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.name = j.value("name", "scenario");

  if (!j.contains("params"))
    throw std::invalid_argument("config: missing params");
  const json& jp = j.at("params");
  s.params = make_params(get_num(jp, "d", 0, true),
                         get_num(jp, "gamma_e_mhz", 0, true),
                         get_num(jp, "gamma_s_mhz", 0.0),
                         get_num(jp, "delta_c_mhz", 0, true),
                         get_num(jp, "rabi_mhz", 0, true),
                         get_num(jp, "bandwidth_mhz", 0, true));

  if (!j.contains("pulse"))
    throw std::invalid_argument("config: missing pulse");
  const json& jl = j.at("pulse");
  const std::string shape = jl.value("shape", "gaussian");
  if (shape != "gaussian")
    throw std::invalid_argument("config: unsupported pulse shape " + shape);
  s.pulse.shape = PulseShape::gaussian;
  s.pulse.fwhm = get_num(jl, "fwhm_us", 0, true);
  s.pulse.center_time = get_num(jl, "center_time_us", 0, true);
  s.pulse.amplitude = get_num(jl, "amplitude", 1.0);
  if (jl.contains("carrier_offset_mhz") && jl.at("carrier_offset_mhz").is_string()) {
    if (jl.at("carrier_offset_mhz").get<std::string>() != "auto")
      throw std::invalid_argument("config: carrier_offset_mhz must be a number or \"auto\"");
    s.pulse.carrier_offset = stark_center(s.params.delta_c, s.params.rabi);
  } else {
    s.pulse.carrier_offset = mhz_to_rad_us(get_num(jl, "carrier_offset_mhz", 0.0));
  }
  s.pulse.validate();

  if (!j.contains("schedule"))
    throw std::invalid_argument("config: missing schedule");
  const json& js = j.at("schedule");
  if (js.contains("segments")) {
    for (const auto& jseg : js.at("segments")) {
      ProtocolSegment seg;
      seg.t_start = get_num(jseg, "t_start_us", 0, true);
      seg.t_end = get_num(jseg, "t_end_us", 0, true);
      seg.gradient_sign = (int)get_num(jseg, "gradient_sign", 0, true);
      seg.control_on = jseg.value("control_on", true);
      s.schedule.segments.push_back(seg);
    }
    s.schedule.validate();
  } else {
    const std::string order_str = js.value("order", "eit");
    if (order_str != "eit" && order_str != "eia")
      throw std::invalid_argument("config: schedule order must be eit or eia");
    ProtocolTimings t;
    t.t_flip = get_num(js, "t_flip_us", 0, true);
    t.t_total = get_num(js, "t_total_us", 0, true);
    t.t_ctrl_off = get_num(js, "t_ctrl_off_us", -1.0);
    s.schedule = make_standard_schedule(
        order_str == "eit" ? GradientOrder::eit : GradientOrder::eia,
        s.params.delta_c, t);
  }

  if (!j.contains("grid"))
    throw std::invalid_argument("config: missing grid");
  const json& jg = j.at("grid");
  s.grid.nz = (int)get_num(jg, "nz", 256);
  s.grid.nt = (int)get_num(jg, "nt", 0);
  s.grid.t_total = get_num(jg, "t_total_us", s.schedule.total_time());
  s.grid.phase_ceiling = get_num(jg, "phase_ceiling_rad", 0.1);
  s.grid.validate_against(s.params);

  if (j.contains("outputs")) {
    const json& jo = j.at("outputs");
    s.outputs.summary = jo.value("summary", true);
    s.outputs.traces = jo.value("traces", true);
    s.outputs.snapshots = jo.value("snapshots", false);
    s.outputs.trace_stride = (int)get_num(jo, "trace_stride", 8);
    s.outputs.snapshot_nz = (int)get_num(jo, "snapshot_nz", 128);
    s.outputs.snapshot_nt = (int)get_num(jo, "snapshot_nt", 256);
    s.outputs.snapshot_format = jo.value("snapshot_format", "csv");
    if (s.outputs.snapshot_format != "csv" && s.outputs.snapshot_format != "bin")
      throw std::invalid_argument("config: snapshot_format must be csv or bin");
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["params"] = {{"d", s.params.d},
                 {"gamma_e_mhz", rad_us_to_mhz(s.params.gamma_e)},
                 {"gamma_s_mhz", rad_us_to_mhz(s.params.gamma_s)},
                 {"delta_c_mhz", rad_us_to_mhz(s.params.delta_c)},
                 {"rabi_mhz", rad_us_to_mhz(s.params.rabi)},
                 {"bandwidth_mhz", rad_us_to_mhz(s.params.bandwidth)}};
  j["pulse"] = {{"shape", "gaussian"},
                {"fwhm_us", s.pulse.fwhm},
                {"carrier_offset_mhz", rad_us_to_mhz(s.pulse.carrier_offset)},
                {"center_time_us", s.pulse.center_time},
                {"amplitude", s.pulse.amplitude}};
  json segs = json::array();
  for (const auto& seg : s.schedule.segments)
    segs.push_back({{"t_start_us", seg.t_start},
                    {"t_end_us", seg.t_end},
                    {"gradient_sign", seg.gradient_sign},
                    {"control_on", seg.control_on}});
  j["schedule"] = {{"segments", segs}};
  j["grid"] = {{"nz", s.grid.nz},
               {"nt", s.grid.nt},
               {"t_total_us", s.grid.t_total},
               {"phase_ceiling_rad", s.grid.phase_ceiling}};
  j["outputs"] = {{"summary", s.outputs.summary},
                  {"traces", s.outputs.traces},
                  {"snapshots", s.outputs.snapshots},
                  {"trace_stride", s.outputs.trace_stride},
                  {"snapshot_nz", s.outputs.snapshot_nz},
                  {"snapshot_nt", s.outputs.snapshot_nt},
                  {"snapshot_format", s.outputs.snapshot_format}};
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

std::string hash_json(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

std::string config_hash(const Scenario& s) { return hash_json(scenario_to_json(s)); }

Scenario default_scenario(double d, double delta_c_mhz, GradientOrder order,
                          double gamma_s_mhz) {
  const double fwhm = 5.0;
  const StandardProtocol sp = standard_protocol(fwhm);
  const double bw_mhz = 1.0 / fwhm; // nominal 2*pi/fwhm in angular units

  Scenario s;
  s.name = "gem-d" + std::to_string((long)d) + "-dc" +
           std::to_string((long)delta_c_mhz) + "-" + to_string(order);
  s.params = make_params(d, 5.75, gamma_s_mhz, delta_c_mhz,
                         /*rabi placeholder*/ 1.0, bw_mhz);
  s.pulse.fwhm = fwhm;
  s.pulse.center_time = sp.center_time;
  s.pulse.amplitude = 1.0;
  s.pulse.carrier_offset = stark_center(s.params.delta_c, s.params.rabi);
  s.schedule = make_standard_schedule(order, s.params.delta_c, sp.timings);
  s.grid.nz = 256;
  s.grid.nt = 0;
  s.grid.t_total = sp.timings.t_total;
  s.grid.phase_ceiling = 0.1;
  return s;
}

} // namespace gem
