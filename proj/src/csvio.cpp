// SPDX-License-Identifier: Apache-2.0
#include "gem/csvio.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace gem {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& config_hash,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path), n_columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
  out_ << "# gem " << kToolVersion << "\n";
  out_ << "# config-hash: " << config_hash << "\n";
  out_ << "# generated: " << iso_timestamp() << "\n";
  out_ << "# columns: ";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw std::invalid_argument("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_number(values[i]);
  out_ << "\n";
}

void write_snapshot_binary(const std::string& path, const std::string& name,
                           const std::vector<double>& z,
                           const std::vector<double>& t,
                           const std::vector<double>& data) {
  if (data.size() != z.size() * t.size())
    throw std::invalid_argument("snapshot dims mismatch");
  if (z.size() < 2 || t.size() < 2)
    throw std::invalid_argument("snapshot needs at least 2x2 samples");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write("GEMSNAP1", 8);
  char namebuf[16] = {};
  name.copy(namebuf, sizeof namebuf - 1);
  out.write(namebuf, sizeof namebuf);
  const std::uint32_t nz = (std::uint32_t)z.size();
  const std::uint32_t nt = (std::uint32_t)t.size();
  out.write(reinterpret_cast<const char*>(&nz), 4);
  out.write(reinterpret_cast<const char*>(&nt), 4);
  const double z0 = z.front(), dz = z[1] - z[0];
  const double t0 = t.front(), dt = t[1] - t[0];
  out.write(reinterpret_cast<const char*>(&z0), 8);
  out.write(reinterpret_cast<const char*>(&dz), 8);
  out.write(reinterpret_cast<const char*>(&t0), 8);
  out.write(reinterpret_cast<const char*>(&dt), 8);
  out.write(reinterpret_cast<const char*>(data.data()),
            (std::streamsize)(data.size() * sizeof(double)));
}

} // namespace gem
