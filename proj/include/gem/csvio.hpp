// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace gem {

inline constexpr const char* kToolVersion = "0.1.0";

/// CSV emitter with provenance comment lines. Data rows are header-free
/// numeric columns; column names live in a '# columns:' comment. The
/// '# generated:' line is the only non-reproducible content.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::string& config_hash,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }

private:
  std::string path_;
  std::ofstream out_;
  std::size_t n_columns_;
};

/// Deterministic shortest-round-trip-ish formatting used for all numeric
/// output ("%.12g").
std::string format_number(double v);

std::string iso_timestamp();

/// Flat binary snapshot: magic "GEMSNAP1", 16-byte zero-padded field name,
/// u32 nz, u32 nt, f64 z0, f64 dz, f64 t0, f64 dt, then nt*nz f64 values
/// row-major [t][z], little-endian.
void write_snapshot_binary(const std::string& path, const std::string& name,
                           const std::vector<double>& z,
                           const std::vector<double>& t,
                           const std::vector<double>& data);

} // namespace gem
