// SPDX-License-Identifier: Apache-2.0
#include "gem/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gem/config.hpp"
#include "gem/csvio.hpp"
#include "gem/optimize.hpp"
#include "gem/spectrum.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gem {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int hardware_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::string join_path(const std::string& dir, const std::string& file) {
  fs::create_directories(dir);
  return (fs::path(dir) / file).string();
}

double order_code(GradientOrder o) { return o == GradientOrder::eit ? 1.0 : -1.0; }

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- spectrum
struct SpectrumArgs {
  std::string config, out = ".";
  double d = 400, gamma_e = 5.75, gamma_s = 0.0, delta_c = 17.25;
  double rabi = -1; // <0: illustration default (rabi = 2 gamma_e), which
                    // makes the Raman line and its EIT/EIA wings visible on
                    // a detuning-scale plot
  double bw = 0.3;
  double dmin = 0, dmax = 0; // MHz; both 0 -> automatic range
  int points = 2001;
};

int cmd_spectrum(const SpectrumArgs& a) {
  PhysicalParams p;
  if (!a.config.empty()) {
    p = load_scenario(a.config).params;
  } else {
    const double rabi = a.rabi >= 0 ? a.rabi : 2.0 * a.gamma_e;
    p = make_params(a.d, a.gamma_e, a.gamma_s, a.delta_c, rabi, a.bw);
  }
  double lo = mhz_to_rad_us(a.dmin), hi = mhz_to_rad_us(a.dmax);
  if (a.dmin == 0 && a.dmax == 0) {
    const double span = std::fabs(p.delta_c) > 0 ? std::fabs(p.delta_c)
                                                 : 10 * p.gamma_e;
    lo = -1.0 * span + std::min(0.0, p.delta_c) * 1.5;
    hi = 2.5 * span + std::max(0.0, p.delta_c) * 0.0;
    if (p.delta_c < 0) {
      lo = -2.5 * span;
      hi = 1.0 * span;
    }
  }
  json meta = {{"cmd", "spectrum"},
               {"params", scenario_to_json(Scenario{"", p, {}, {}, {}, {}})["params"]},
               {"delta_min_mhz", rad_us_to_mhz(lo)},
               {"delta_max_mhz", rad_us_to_mhz(hi)},
               {"points", a.points}};
  CsvWriter csv(join_path(a.out, "spectrum.csv"), hash_json(meta),
                {"delta_s_mhz", "alpha", "alpha_lorentzian", "alpha_prime"});
  const bool has_line = p.rabi > 0 && p.delta_c != 0;
  for (int i = 0; i < a.points; ++i) {
    const double ds = lo + (hi - lo) * i / (a.points - 1);
    const double al = alpha(p, ds);
    const double lor = has_line ? alpha_far_lorentzian(p, ds) : 0.0;
    csv.row({rad_us_to_mhz(ds), al, lor, al - lor});
  }
  std::cout << "wrote " << csv.path() << "\n";
  return 0;
}

// ----------------------------------------------------------------- geffect
struct GeffectArgs {
  std::string out = ".";
  std::vector<double> d = {400};
  std::vector<double> delta_c;
  double gamma_e = 5.75, bw = 0.3;
};

int cmd_geffect(const GeffectArgs& a) {
  std::vector<double> dcs = a.delta_c;
  if (dcs.empty())
    for (double v = 75; v <= 300; v += 25) dcs.push_back(v);
  json meta = {{"cmd", "geffect"}, {"d", a.d}, {"delta_c_mhz", dcs},
               {"gamma_e_mhz", a.gamma_e}, {"bw_mhz", a.bw}};
  CsvWriter csv(join_path(a.out, "geffect.csv"), hash_json(meta),
                {"d", "delta_c_mhz", "g_closed", "g_numeric"});
  for (double d : a.d) {
    for (double dc : dcs) {
      const double delta_gamma = dc / a.gamma_e;
      const double gc = gradient_order_effect_closed(d, delta_gamma).g_closed;
      PhysicalParams p = make_params(
          d, a.gamma_e, 0.0, dc,
          rad_us_to_mhz(omega_for_optimal(d, mhz_to_rad_us(a.gamma_e),
                                          mhz_to_rad_us(a.bw),
                                          mhz_to_rad_us(dc))),
          a.bw);
      const double gn = gradient_order_effect_numeric(p).g_numeric;
      csv.row({d, dc, gc, gn});
    }
  }
  std::cout << "wrote " << csv.path() << "\n";
  return 0;
}

// --------------------------------------------------------------------- run
struct RunArgs {
  std::string config, out = ".";
  bool snapshots = false;
  bool dump_config = false;
  int jobs = 0;
};

json summary_json(const Scenario& s, const MemoryResult& r) {
  return {{"name", s.name},
          {"config_hash", config_hash(s)},
          {"tool", std::string("gem ") + kToolVersion},
          {"eta", r.eta},
          {"leakage_fraction", r.leakage_fraction},
          {"recall_peak_time_us", r.recall_peak_time},
          {"input_energy", r.input_energy},
          {"t_flip_us", r.t_flip},
          {"leakage_warning", r.leakage_warning},
          {"multi_flip", r.multi_flip}};
}

void write_run_outputs(const Scenario& s, const MemoryResult& r,
                       const std::string& out_dir) {
  const std::string hash = config_hash(s);
  if (s.outputs.summary)
    write_json(join_path(out_dir, "summary.json"), summary_json(s, r));
  if (s.outputs.traces) {
    CsvWriter csv(join_path(out_dir, "traces.csv"), hash,
                  {"t_us", "e_in_sq", "e_out_sq"});
    const int stride = std::max(1, s.outputs.trace_stride);
    for (std::size_t i = 0; i < r.traces.t.size(); i += stride)
      csv.row({r.traces.t[i], r.traces.e_in_sq[i], r.traces.e_out_sq[i]});
  }
  if (r.snapshots) {
    const auto& sn = *r.snapshots;
    const struct {
      const char* name;
      const std::vector<double>* data;
    } fields[3] = {{"e_abs", &sn.e_abs}, {"s_abs", &sn.s_abs}, {"p_sq", &sn.p_sq}};
    for (const auto& f : fields) {
      if (s.outputs.snapshot_format == "bin") {
        write_snapshot_binary(join_path(out_dir, std::string("snapshot_") +
                                                     f.name + ".bin"),
                              f.name, sn.z, sn.t, *f.data);
      } else {
        CsvWriter csv(join_path(out_dir, std::string("snapshot_") + f.name +
                                             ".csv"),
                      hash, {"t_us", "z", f.name});
        for (std::size_t it = 0; it < sn.t.size(); ++it)
          for (std::size_t iz = 0; iz < sn.z.size(); ++iz)
            csv.row({sn.t[it], sn.z[iz], (*f.data)[it * sn.z.size() + iz]});
      }
    }
  }
}

int cmd_run(const RunArgs& a) {
  Scenario s = load_scenario(a.config);
  if (a.snapshots) s.outputs.snapshots = true;
  if (a.dump_config) {
    std::cout << scenario_to_json(s).dump(2) << "\n";
    return 0;
  }
  SolverOptions opts;
  if (a.jobs > 1) {
#ifdef _OPENMP
    omp_set_num_threads(a.jobs);
    opts.parallel = true;
#endif
  }
  opts.snapshots = s.outputs.snapshots;
  opts.snapshot_nz = s.outputs.snapshot_nz;
  opts.snapshot_nt = s.outputs.snapshot_nt;
  MemoryResult r = run_gem(s.params, s.pulse, s.schedule, s.grid, opts);
  if (r.leakage_warning)
    std::cerr << "warning: leakage fraction " << r.leakage_fraction
              << " > 0.5 (badly tuned parameters)\n";
  write_run_outputs(s, r, a.out);
  std::cout << "eta = " << format_number(r.eta)
            << "  leakage = " << format_number(r.leakage_fraction)
            << "  recall_peak_t = " << format_number(r.recall_peak_time)
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- optimize
struct OptArgs {
  std::string config, out = ".";
  double d = 400, delta_c = 175, gamma_s = 0.0;
  std::string order = "eit";
  std::string free = "omega,bw,delta0";
  int iters = 60;
  int scout_nz = 128;
  double scout_ceiling = 1.0;
  int jobs = 0;
  bool dump_config = false;
};

OptimizationSpec make_spec(const OptArgs& a) {
  OptimizationSpec spec;
  spec.free_params.clear();
  std::stringstream ss(a.free);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "omega") spec.free_params.push_back(FreeParam::omega);
    else if (tok == "bw") spec.free_params.push_back(FreeParam::bw);
    else if (tok == "delta0") spec.free_params.push_back(FreeParam::delta0);
    else throw std::invalid_argument("unknown free parameter: " + tok);
  }
  spec.max_refine_iters = a.iters;
  spec.scout_nz = a.scout_nz;
  spec.scout_ceiling = a.scout_ceiling;
  return spec;
}

Scenario opt_scenario(const OptArgs& a) {
  if (!a.config.empty()) return load_scenario(a.config);
  return default_scenario(a.d, a.delta_c,
                          a.order == "eia" ? GradientOrder::eia
                                           : GradientOrder::eit,
                          a.gamma_s);
}

int phase_code(const std::string& phase) {
  if (phase == "seed") return 0;
  if (phase == "coarse") return 1;
  if (phase == "simplex") return 2;
  if (phase == "final") return 3;
  return 4;
}

int cmd_optimize(const OptArgs& a) {
  Scenario s = opt_scenario(a);
  if (a.dump_config) {
    std::cout << scenario_to_json(s).dump(2) << "\n";
    return 0;
  }
  if (a.jobs > 0) {
#ifdef _OPENMP
    omp_set_num_threads(a.jobs);
#endif
  }
  OptimizationSpec spec = make_spec(a);
  OptimizeResult r = optimize(s.params, s.pulse, s.schedule, s.grid, spec);
  if (r.on_bound)
    std::cerr << "warning: optimum lies on a search bound\n";
  // companion mode: carrier pinned to the AC-Stark center of the tuned
  // coupling instead of being tuned itself
  double eta_stark = r.eta;
  {
    PhysicalParams p = s.params;
    p.rabi = r.omega;
    p.bandwidth = r.bw;
    PulseSpec pl = s.pulse;
    const double stark = (std::hypot(p.delta_c, p.rabi) - std::fabs(p.delta_c)) / 2;
    pl.carrier_offset = p.delta_c >= 0 ? stark : -stark;
    eta_stark = run_gem(p, pl, s.schedule, s.grid).eta;
  }
  const std::string hash = config_hash(s);
  json j = {{"config_hash", hash},
            {"omega_mhz", rad_us_to_mhz(r.omega)},
            {"bw_mhz", rad_us_to_mhz(r.bw)},
            {"delta0_mhz", rad_us_to_mhz(r.delta0)},
            {"eta", r.eta},
            {"eta_at_stark_carrier", eta_stark},
            {"eta_scout", r.eta_scout},
            {"on_bound", r.on_bound},
            {"evaluations", r.evaluations.size()}};
  write_json(join_path(a.out, "optimum.json"), j);
  CsvWriter csv(join_path(a.out, "evals.csv"), hash,
                {"index", "omega_mhz", "bw_mhz", "delta0_mhz", "eta",
                 "phase(0=seed,1=coarse,2=simplex,3=final)"});
  for (std::size_t i = 0; i < r.evaluations.size(); ++i) {
    const auto& e = r.evaluations[i];
    csv.row({(double)i, rad_us_to_mhz(e.omega), rad_us_to_mhz(e.bw),
             rad_us_to_mhz(e.delta0), e.eta, (double)phase_code(e.phase)});
  }
  std::cout << "eta* = " << format_number(r.eta) << " at omega = "
            << format_number(rad_us_to_mhz(r.omega)) << " MHz, bw = "
            << format_number(rad_us_to_mhz(r.bw)) << " MHz, delta0 = "
            << format_number(rad_us_to_mhz(r.delta0)) << " MHz\n";
  return 0;
}

// ------------------------------------------------------------------- sweep
struct SweepArgs {
  std::string config, out = ".";
  double d = 400, gamma_s = 0.0;
  std::vector<double> detunings; // MHz, signed
  int iters = 60;
  int scout_nz = 128;
  double scout_ceiling = 1.0;
  int jobs = 0;
  std::string csv_name = "sweep.csv";
};

SweepResult run_sweep(const SweepArgs& a, json& meta) {
  Scenario base = a.config.empty()
                      ? default_scenario(a.d, a.detunings.empty()
                                                ? 175.0
                                                : a.detunings.front(),
                                         GradientOrder::eit, a.gamma_s)
                      : load_scenario(a.config);
  std::vector<double> dcs;
  for (double mhz : a.detunings) dcs.push_back(mhz_to_rad_us(mhz));
  if (dcs.empty())
    for (double v = 75; v <= 400; v += 25) dcs.push_back(mhz_to_rad_us(v));

  OptArgs oa;
  oa.iters = a.iters;
  oa.scout_nz = a.scout_nz;
  oa.scout_ceiling = a.scout_ceiling;
  OptimizationSpec spec = make_spec(oa);

  const StandardProtocol sp = standard_protocol(base.pulse.fwhm);
  const int jobs = a.jobs > 0 ? a.jobs : hardware_jobs();
  meta = {{"cmd", "sweep"},
          {"base", scenario_to_json(base)},
          {"detunings_mhz", json::array()}};
  for (double dc : dcs) meta["detunings_mhz"].push_back(rad_us_to_mhz(dc));
  return sweep_detuning(base.params, base.pulse, sp.timings, base.grid, dcs,
                        spec, jobs);
}

void write_sweep_csv(const std::string& path, const std::string& hash,
                     const SweepResult& sweep) {
  CsvWriter csv(path, hash,
                {"delta_c_mhz", "gradient_order(1=eit,-1=eia)",
                 "omega_star_mhz", "bw_star_mhz", "delta0_star_mhz",
                 "eta_star", "eta_at_1p2_omega"});
  for (const auto& row : sweep.rows) {
    if (row.failed) {
      csv.row({rad_us_to_mhz(row.delta_c), order_code(row.order),
               std::nan(""), std::nan(""), std::nan(""), std::nan(""),
               std::nan("")});
    } else {
      csv.row({rad_us_to_mhz(row.delta_c), order_code(row.order),
               rad_us_to_mhz(row.omega), rad_us_to_mhz(row.bw),
               rad_us_to_mhz(row.delta0), row.eta, row.eta_high_omega});
    }
  }
}

int cmd_sweep(const SweepArgs& a) {
  json meta;
  SweepResult sweep = run_sweep(a, meta);
  write_sweep_csv(join_path(a.out, a.csv_name), hash_json(meta), sweep);
  int failed = 0;
  for (const auto& r : sweep.rows) failed += r.failed;
  std::cout << "sweep: " << sweep.rows.size() << " rows, " << failed
            << " failed\n";
  return failed == (int)sweep.rows.size() ? 3 : 0;
}

// --------------------------------------------------------- reproduce-fig2b
struct Fig2bArgs {
  std::string out = ".";
  bool include_d1000 = false;
  int jobs = 0;
  int iters = 60;
};

json sweep_stats(const SweepResult& sweep) {
  double eta_max = -1, argmax = 0;
  double gap_at_max = 0, gap_at_end = 0, end_dc = -1;
  bool lossy_monotone = true;
  double prev_lossy = -1;
  for (std::size_t i = 0; i + 1 < sweep.rows.size(); i += 2) {
    const auto& eit = sweep.rows[i];
    const auto& eia = sweep.rows[i + 1];
    if (eit.failed || eia.failed) continue;
    if (eit.eta > eta_max) {
      eta_max = eit.eta;
      argmax = rad_us_to_mhz(eit.delta_c);
      gap_at_max = eit.eta - eia.eta;
    }
    if (rad_us_to_mhz(eit.delta_c) > end_dc) {
      end_dc = rad_us_to_mhz(eit.delta_c);
      gap_at_end = eit.eta - eia.eta;
    }
    if (prev_lossy >= 0 && eia.eta < prev_lossy) lossy_monotone = false;
    prev_lossy = eia.eta;
  }
  return {{"eta_max", eta_max},
          {"argmax_delta_c_mhz", argmax},
          {"gap_at_argmax", gap_at_max},
          {"gap_at_largest_detuning", gap_at_end},
          {"largest_detuning_mhz", end_dc},
          {"lossy_order_monotone_increasing", lossy_monotone}};
}

int cmd_fig2b(const Fig2bArgs& a) {
  json summary = {
      {"tool", std::string("gem ") + kToolVersion},
      {"assumptions",
       "5 us FWHM Gaussian pulse; write/hold/flip at 1.3/2.4/2.7 fwhm with "
       "control off during the hold; omega, BW and carrier tuned per row"}};
  {
    SweepArgs sa;
    sa.out = a.out;
    sa.d = 400;
    sa.jobs = a.jobs;
    sa.iters = a.iters;
    for (double v = 75; v <= 400; v += 25) sa.detunings.push_back(v);
    json meta;
    SweepResult sweep = run_sweep(sa, meta);
    write_sweep_csv(join_path(a.out, "fig2b_d400.csv"), hash_json(meta), sweep);
    summary["d400"] = sweep_stats(sweep);
  }
  if (a.include_d1000) {
    SweepArgs sa;
    sa.out = a.out;
    sa.d = 1000;
    sa.jobs = a.jobs;
    sa.iters = a.iters;
    for (double v = 150; v <= 550; v += 25) sa.detunings.push_back(v);
    json meta;
    SweepResult sweep = run_sweep(sa, meta);
    write_sweep_csv(join_path(a.out, "fig2b_d1000.csv"), hash_json(meta),
                    sweep);
    summary["d1000"] = sweep_stats(sweep);
  }
  write_json(join_path(a.out, "fig2b_summary.json"), summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------- experiment-band
struct BandArgs {
  std::string out = ".";
  double d = 400;
  double gamma_s = 0.005; // MHz; nonzero experimental dephasing
  bool gamma_zero = false;
  int jobs = 0;
  int iters = 60;
};

int cmd_band(const BandArgs& a) {
  std::vector<double> dcs;
  for (double v : {100.0, 140.0, 180.0, 220.0, 260.0}) {
    dcs.push_back(v);
    dcs.push_back(-v);
  }
  auto run_band = [&](double gamma_s_mhz, const std::string& file) {
    SweepArgs sa;
    sa.out = a.out;
    sa.d = a.d;
    sa.gamma_s = gamma_s_mhz;
    sa.detunings = dcs;
    sa.jobs = a.jobs;
    sa.iters = a.iters;
    json meta;
    SweepResult sweep = run_sweep(sa, meta);
    CsvWriter csv(join_path(a.out, file), hash_json(meta),
                  {"delta_c_mhz", "gradient_order(1=eit,-1=eia)",
                   "eta_optimal", "eta_1p2_omega"});
    for (const auto& row : sweep.rows) {
      csv.row({rad_us_to_mhz(row.delta_c), order_code(row.order),
               row.failed ? std::nan("") : row.eta,
               row.failed ? std::nan("") : row.eta_high_omega});
    }
  };
  run_band(a.gamma_s, "band.csv");
  if (a.gamma_zero) run_band(0.0, "band_gamma0.csv");
  std::cout << "wrote band.csv" << (a.gamma_zero ? " and band_gamma0.csv" : "")
            << "\n";
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Raman gradient echo memory simulator and analytics"};
  app.require_subcommand(1);

  SpectrumArgs spec_args;
  auto* sp = app.add_subcommand("spectrum",
                                "Absorption/Lorentzian/residual scan -> CSV");
  sp->add_option("--config", spec_args.config, "scenario config (params used)");
  sp->add_option("--out", spec_args.out, "output directory");
  sp->add_option("--d", spec_args.d, "optical depth");
  sp->add_option("--gamma-e-mhz", spec_args.gamma_e, "excited linewidth (MHz)");
  sp->add_option("--gamma-s-mhz", spec_args.gamma_s, "spinwave dephasing (MHz)");
  sp->add_option("--detuning-mhz", spec_args.delta_c, "control detuning (MHz)");
  sp->add_option("--rabi-mhz", spec_args.rabi,
                 "control Rabi frequency (MHz; default: optimal-constraint seed)");
  sp->add_option("--bw-mhz", spec_args.bw, "memory bandwidth (MHz)");
  sp->add_option("--delta-min-mhz", spec_args.dmin, "scan start (MHz)");
  sp->add_option("--delta-max-mhz", spec_args.dmax, "scan end (MHz)");
  sp->add_option("--points", spec_args.points, "scan points");

  GeffectArgs ge_args;
  auto* ge = app.add_subcommand("geffect",
                                "Gradient-order effect, closed form vs quadrature");
  ge->add_option("--out", ge_args.out, "output directory");
  ge->add_option("--d", ge_args.d, "optical depths");
  ge->add_option("--detuning-mhz", ge_args.delta_c, "control detunings (MHz)");
  ge->add_option("--gamma-e-mhz", ge_args.gamma_e, "excited linewidth (MHz)");
  ge->add_option("--bw-mhz", ge_args.bw, "memory bandwidth (MHz)");

  RunArgs run_args;
  auto* rn = app.add_subcommand("run", "Integrate one protocol from a config");
  rn->add_option("--config", run_args.config, "scenario config file")
      ->required();
  rn->add_option("--out", run_args.out, "output directory");
  rn->add_option("--jobs", run_args.jobs, "max threads");
  rn->add_flag("--snapshots", run_args.snapshots, "record field snapshots");
  rn->add_flag("--dump-config", run_args.dump_config,
               "print the resolved config and exit");

  OptArgs opt_args;
  auto* op = app.add_subcommand("optimize",
                                "Tune omega/BW/carrier for one detuning");
  op->add_option("--config", opt_args.config, "scenario config file");
  op->add_option("--out", opt_args.out, "output directory");
  op->add_option("--d", opt_args.d, "optical depth (preset mode)");
  op->add_option("--detuning-mhz", opt_args.delta_c, "control detuning (MHz)");
  op->add_option("--gamma-s-mhz", opt_args.gamma_s, "spinwave dephasing (MHz)");
  op->add_option("--order", opt_args.order, "gradient order (eit|eia)")
      ->check(CLI::IsMember({"eit", "eia"}));
  op->add_option("--free", opt_args.free,
                 "free parameters (comma list of omega,bw,delta0)");
  op->add_option("--iters", opt_args.iters, "max refinement iterations");
  op->add_option("--scout-nz", opt_args.scout_nz, "search-grid z points");
  op->add_option("--scout-ceiling", opt_args.scout_ceiling,
                 "search-grid phase ceiling (rad)");
  op->add_option("--jobs", opt_args.jobs, "max threads");
  op->add_flag("--dump-config", opt_args.dump_config,
               "print the resolved config and exit");

  SweepArgs sweep_args;
  auto* sw = app.add_subcommand("sweep", "Optimize over a detuning list");
  sw->add_option("--config", sweep_args.config, "base scenario config file");
  sw->add_option("--out", sweep_args.out, "output directory");
  sw->add_option("--d", sweep_args.d, "optical depth (preset mode)");
  sw->add_option("--gamma-s-mhz", sweep_args.gamma_s, "spinwave dephasing (MHz)");
  sw->add_option("--detuning-mhz", sweep_args.detunings,
                 "control detunings (MHz, signed; repeatable)");
  sw->add_option("--iters", sweep_args.iters, "max refinement iterations");
  sw->add_option("--jobs", sweep_args.jobs, "parallel rows");

  Fig2bArgs fig_args;
  auto* fg = app.add_subcommand("reproduce-fig2b",
                                "Efficiency-vs-detuning reproduction sweep");
  fg->add_option("--out", fig_args.out, "output directory");
  fg->add_flag("--include-d1000", fig_args.include_d1000,
               "also run the long d=1000 sweep");
  fg->add_option("--jobs", fig_args.jobs, "parallel rows");
  fg->add_option("--iters", fig_args.iters, "max refinement iterations");

  BandArgs band_args;
  auto* bd = app.add_subcommand("experiment-band",
                                "Optimal and 20%-high-omega efficiency bands");
  bd->add_option("--out", band_args.out, "output directory");
  bd->add_option("--d", band_args.d, "optical depth");
  bd->add_option("--gamma-s-mhz", band_args.gamma_s,
                 "spinwave dephasing (MHz)");
  bd->add_flag("--gamma-zero", band_args.gamma_zero,
               "also emit the gamma=0 band for comparison");
  bd->add_option("--jobs", band_args.jobs, "parallel rows");
  bd->add_option("--iters", band_args.iters, "max refinement iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (sp->parsed()) return cmd_spectrum(spec_args);
    if (ge->parsed()) return cmd_geffect(ge_args);
    if (rn->parsed()) return cmd_run(run_args);
    if (op->parsed()) return cmd_optimize(opt_args);
    if (sw->parsed()) return cmd_sweep(sweep_args);
    if (fg->parsed()) return cmd_fig2b(fig_args);
    if (bd->parsed()) return cmd_band(band_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

} // namespace gem
