// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "gem/core.hpp"

namespace gem {

struct OutputSpec {
  bool summary = true;
  bool traces = true;
  bool snapshots = false;
  int trace_stride = 8;
  int snapshot_nz = 128;
  int snapshot_nt = 256;
  std::string snapshot_format = "csv"; // csv | bin
};

/// One fully-resolved run description: physical parameters, pulse, protocol,
/// grid and requested outputs.
struct Scenario {
  std::string name = "scenario";
  PhysicalParams params;
  PulseSpec pulse;
  ProtocolSchedule schedule;
  SolverGrid grid;
  OutputSpec outputs;
};

/// Default protocol timeline for a given pulse width: pulse centered at
/// 1.3 fwhm, control off during the hold from 2.4 fwhm, gradient flip at
/// 2.7 fwhm, total span 6 fwhm.
struct StandardProtocol {
  double center_time;
  ProtocolTimings timings;
};
StandardProtocol standard_protocol(double fwhm);

/// Parses the documented JSON schema (frequencies in MHz, times in us).
/// The schedule accepts either explicit "segments" or the standard template
/// ("order", "t_flip_us", "t_total_us", optional "t_ctrl_off_us");
/// "carrier_offset_mhz" accepts a number or "auto" (AC-Stark-shifted memory
/// center for the configured Rabi frequency).
Scenario scenario_from_json(const nlohmann::json& j);

/// Canonical resolved form: explicit segments, numeric carrier offset,
/// frequencies in MHz. Round-trips through scenario_from_json.
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::string& path);

/// FNV-1a hash of the canonical resolved config, for provenance headers.
std::string config_hash(const Scenario& s);

/// FNV-1a hash of an arbitrary resolved-option JSON value.
std::string hash_json(const nlohmann::json& j);

/// Built-in preset used by the reproduction subcommands.
Scenario default_scenario(double d, double delta_c_mhz, GradientOrder order,
                          double gamma_s_mhz = 0.0);

} // namespace gem
