// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gem/cli.hpp"
#include "gem/config.hpp"

using namespace gem;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"gem"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli((int)argv.size(), argv.data());
}

std::string temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("gem_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

// rows of a provenance-headed CSV
std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string file_without_timestamp(const std::string& path) {
  std::ifstream in(path);
  std::string out, line;
  while (std::getline(in, line))
    if (line.rfind("# generated:", 0) != 0) out += line + "\n";
  return out;
}

std::string write_fast_config(const std::string& dir) {
  const json j = {
      {"name", "cli-test"},
      {"params",
       {{"d", 400}, {"gamma_e_mhz", 5.75}, {"gamma_s_mhz", 0},
        {"delta_c_mhz", 175}, {"rabi_mhz", 7.7}, {"bandwidth_mhz", 0.26}}},
      {"pulse",
       {{"shape", "gaussian"}, {"fwhm_us", 5}, {"carrier_offset_mhz", "auto"},
        {"center_time_us", 6.5}, {"amplitude", 1}}},
      {"schedule",
       {{"order", "eit"}, {"t_flip_us", 13.5}, {"t_ctrl_off_us", 12.0},
        {"t_total_us", 30}}},
      {"grid",
       {{"nz", 96}, {"nt", 0}, {"t_total_us", 30}, {"phase_ceiling_rad", 1.5}}},
      {"outputs", {{"trace_stride", 16}}}};
  const std::string path = dir + "/config.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

} // namespace

TEST_CASE("spectrum: small-detuning default shows both peaks and the window") {
  const std::string dir = temp_dir("spectrum");
  REQUIRE(cli({"spectrum", "--out", dir}) == 0);
  const auto rows = read_csv(dir + "/spectrum.csv");
  REQUIRE(rows.size() > 100);

  // locate the well-separated local maxima of alpha
  std::vector<std::size_t> peaks;
  double best = 0;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double a = rows[i][1];
    if (a > rows[i - 1][1] && a > rows[i + 1][1] && a > 5.0) peaks.push_back(i);
    best = std::max(best, a);
  }
  REQUIRE(peaks.size() == 2);
  // interior transparency point between the two peaks
  double min_between = 1e300;
  for (std::size_t i = peaks[0]; i <= peaks[1]; ++i)
    min_between = std::min(min_between, rows[i][1]);
  CHECK(min_between < 1e-4 * best);
}

TEST_CASE("spectrum: no control field leaves a single resonance line") {
  const std::string dir = temp_dir("spectrum0");
  REQUIRE(cli({"spectrum", "--out", dir, "--rabi-mhz", "0", "--detuning-mhz",
               "17.25"}) == 0);
  const auto rows = read_csv(dir + "/spectrum.csv");
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i)
    if (rows[i][1] > rows[i - 1][1] && rows[i][1] > rows[i + 1][1] &&
        rows[i][1] > 5.0)
      ++maxima;
  CHECK(maxima == 1);
  // residual column collapses to alpha when there is no Raman line
  for (std::size_t i = 0; i < rows.size(); i += 97) {
    CHECK(rows[i][2] == 0.0);
    CHECK(rows[i][3] == doctest::Approx(rows[i][1]));
  }
}

TEST_CASE("spectrum: dephasing lifts the transparency floor") {
  const std::string dir = temp_dir("spectrumg");
  REQUIRE(cli({"spectrum", "--out", dir, "--gamma-s-mhz", "0.02"}) == 0);
  const auto rows = read_csv(dir + "/spectrum.csv");
  double min_alpha = 1e300;
  for (const auto& r : rows) min_alpha = std::min(min_alpha, r[1]);
  CHECK(min_alpha > 0.0);
}

TEST_CASE("geffect emits the four documented columns") {
  const std::string dir = temp_dir("geffect");
  REQUIRE(cli({"geffect", "--out", dir, "--d", "400", "--detuning-mhz",
               "175"}) == 0);
  const auto rows = read_csv(dir + "/geffect.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == 400.0);
  CHECK(rows[0][1] == 175.0);
  CHECK(std::fabs(std::fabs(rows[0][2]) - 0.08) < 0.01); // closed form
  CHECK(std::fabs(rows[0][3] - rows[0][2]) / std::fabs(rows[0][2]) < 0.25);
}

TEST_CASE("run: summary, traces, reproducibility, dump-config") {
  const std::string dir = temp_dir("run");
  const std::string cfg = write_fast_config(dir);

  REQUIRE(cli({"run", "--config", cfg, "--out", dir}) == 0);
  std::ifstream sj(dir + "/summary.json");
  REQUIRE(sj.good());
  json summary;
  sj >> summary;
  CHECK(summary["eta"].get<double>() > 0.3);
  CHECK(summary["eta"].get<double>() < 1.0);
  CHECK(summary["leakage_fraction"].get<double>() < 0.5);
  CHECK(summary["t_flip_us"].get<double>() == 13.5);
  const auto traces = read_csv(dir + "/traces.csv");
  CHECK(traces.size() > 100);

  SUBCASE("byte-identical rerun modulo the timestamp line") {
    const std::string first = file_without_timestamp(dir + "/traces.csv");
    REQUIRE(cli({"run", "--config", cfg, "--out", dir}) == 0);
    CHECK(file_without_timestamp(dir + "/traces.csv") == first);
  }
  SUBCASE("snapshots flag emits the three field maps") {
    REQUIRE(cli({"run", "--config", cfg, "--out", dir, "--snapshots"}) == 0);
    for (const char* f : {"snapshot_e_abs.csv", "snapshot_s_abs.csv",
                          "snapshot_p_sq.csv"})
      CHECK(fs::exists(dir + "/" + f));
  }
  SUBCASE("binary snapshot carries the documented header") {
    json j;
    std::ifstream(cfg) >> j;
    j["outputs"]["snapshot_format"] = "bin";
    j["outputs"]["snapshot_nz"] = 16;
    j["outputs"]["snapshot_nt"] = 8;
    const std::string cfg2 = dir + "/config_bin.json";
    std::ofstream(cfg2) << j.dump();
    REQUIRE(cli({"run", "--config", cfg2, "--out", dir, "--snapshots"}) == 0);
    std::ifstream bin(dir + "/snapshot_p_sq.bin", std::ios::binary);
    REQUIRE(bin.good());
    char magic[8], name[16];
    std::uint32_t nz = 0, nt = 0;
    double z0, dz, t0, dt;
    bin.read(magic, 8);
    bin.read(name, 16);
    bin.read(reinterpret_cast<char*>(&nz), 4);
    bin.read(reinterpret_cast<char*>(&nt), 4);
    bin.read(reinterpret_cast<char*>(&z0), 8);
    bin.read(reinterpret_cast<char*>(&dz), 8);
    bin.read(reinterpret_cast<char*>(&t0), 8);
    bin.read(reinterpret_cast<char*>(&dt), 8);
    CHECK(std::string(magic, 8) == "GEMSNAP1");
    CHECK(std::string(name) == "p_sq");
    CHECK(nz >= 6);
    CHECK(nt >= 8);
    CHECK(z0 == doctest::Approx(-0.5));
    CHECK(dz > 0);
    CHECK(dt > 0);
    std::vector<double> data(nz * nt);
    bin.read(reinterpret_cast<char*>(data.data()), nz * nt * 8);
    CHECK(bin.gcount() == (std::streamsize)(nz * nt * 8));
    double maxv = 0;
    for (double v : data) maxv = std::max(maxv, v);
    CHECK(maxv > 0); // atoms were excited during storage
  }
  SUBCASE("dump-config output re-parses to an equivalent scenario") {
    std::stringstream captured;
    auto* old = std::cout.rdbuf(captured.rdbuf());
    const int rc = cli({"run", "--config", cfg, "--dump-config"});
    std::cout.rdbuf(old);
    REQUIRE(rc == 0);
    const Scenario s1 = load_scenario(cfg);
    const Scenario s2 = scenario_from_json(json::parse(captured.str()));
    CHECK(config_hash(s1) == config_hash(s2));
  }
}

TEST_CASE("exit codes: usage 2, config errors 2") {
  CHECK(cli({"frobnicate"}) == 2);
  CHECK(cli({"run"}) == 2); // missing required --config
  CHECK(cli({"run", "--config", "/nonexistent.json"}) == 2);

  const std::string dir = temp_dir("badcfg");
  const std::string bad = dir + "/bad.json";
  std::ofstream(bad) << "{\"params\": {}}";
  CHECK(cli({"run", "--config", bad}) == 2);
}

TEST_CASE("sweep: a single detuning yields exactly two ordered rows") {
  const std::string dir = temp_dir("sweep");
  REQUIRE(cli({"sweep", "--out", dir, "--d", "400", "--detuning-mhz", "150",
               "--iters", "4", "--jobs", "2"}) == 0);
  const auto rows = read_csv(dir + "/sweep.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == 150.0);
  CHECK(rows[0][1] == 1.0);  // eit row first
  CHECK(rows[1][1] == -1.0); // then eia
  CHECK(rows[0][5] > rows[1][5]); // efficient order wins
  CHECK(rows[0][6] <= rows[0][5] + 5e-3); // 1.2x omega never helps
}

TEST_CASE("optimize preset mode writes optimum and audit trail") {
  const std::string dir = temp_dir("opt");
  REQUIRE(cli({"optimize", "--out", dir, "--d", "400", "--detuning-mhz", "175",
               "--order", "eit", "--iters", "6", "--scout-nz", "64",
               "--scout-ceiling", "2.5"}) == 0);
  std::ifstream oj(dir + "/optimum.json");
  REQUIRE(oj.good());
  json optimum;
  oj >> optimum;
  CHECK(optimum["eta"].get<double>() > 0.3);
  CHECK(optimum["omega_mhz"].get<double>() > 0.0);
  const auto evals = read_csv(dir + "/evals.csv");
  CHECK(evals.size() == optimum["evaluations"].get<std::size_t>());
}
