// transmon-lab -- command-line front end for the simulated two-transmon
// device: calibration, per-gate error metrics, repeated-gate and CNOT-chain
// series, compiled-circuit experiments, and cross-resonance amplitude scans.
//
// Exit codes: 0 success, 2 invalid arguments or unreadable inputs,
// 3 calibration failure.
#include "transmon/calibrate.hpp"
#include "transmon/circuits.hpp"
#include "transmon/experiments.hpp"
#include "transmon/gates.hpp"
#include "transmon/metrics.hpp"
#include "transmon/model.hpp"
#include "transmon/pulses.hpp"
#include "transmon/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace transmon;

namespace {

struct Profile {
  double tau = 1e-3;       // propagation step, ns
  long samples = 10000;    // Monte Carlo budget
  CalibrationProfile cal;
};

Profile make_profile(const std::string& name) {
  if (name == "full") return {1e-4, 100000, CalibrationProfile::full()};
  return {1e-3, 10000, CalibrationProfile::fast()};
}

struct Context {
  std::string device_path, pulses_path;
  std::string scheme_name = "cr2";
  bool scheme_explicit = false;
  std::string profile_name = "fast";
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int workers = 0;  // 0: hardware concurrency

  DeviceParameters dev;
  std::array<TransmonEigenbasis, 2> eig;
  CalibratedGateTable table;
  Profile profile;

  CrScheme scheme() const { return cr_scheme_from_string(scheme_name); }
  int worker_count() const {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }

  // Loads inputs; throws std::runtime_error on unreadable files.
  void prepare() {
    profile = make_profile(profile_name);
    dev = device_path.empty() ? DeviceParameters::defaults()
                              : DeviceParameters::from_file(device_path);
    eig = diagonalize_device(dev);
    table = pulses_path.empty() ? CalibratedGateTable::defaults()
                                : CalibratedGateTable::load(pulses_path);
    fs::create_directories(out_dir);
  }

  fs::path out(const std::string& name) const {
    return fs::path(out_dir) / name;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::string& header) : path_(path) {
    f_.open(path);
    if (!f_) throw std::runtime_error("cannot write " + path.string());
    f_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i)
      f_ << (i ? "," : "") << cells[i];
    f_ << "\n";
  }
  ~Csv() {
    f_.close();
    std::printf("wrote %s\n", path_.string().c_str());
  }

 private:
  fs::path path_;
  std::ofstream f_;
};

std::vector<CrScheme> scheme_list(const Context& ctx,
                                  std::vector<CrScheme> fallback) {
  if (ctx.scheme_explicit) return {ctx.scheme()};
  return fallback;
}

std::optional<GateSpec> parse_gate(const std::string& name, CrScheme scheme) {
  if (name == "x90_q1") return GateSpec{GateSpec::Kind::x90, 0, scheme};
  if (name == "x180_q1") return GateSpec{GateSpec::Kind::x180, 0, scheme};
  if (name == "x90_q2") return GateSpec{GateSpec::Kind::x90, 1, scheme};
  if (name == "x180_q2") return GateSpec{GateSpec::Kind::x180, 1, scheme};
  if (name == "cnot12") return GateSpec{GateSpec::Kind::cnot, 0, scheme};
  if (name == "cnot21") return GateSpec{GateSpec::Kind::cnot, 1, scheme};
  return std::nullopt;
}

void print_list() {
  std::printf(
      "experiments (each writes deterministic CSVs into --out):\n"
      "  calibrate   fits the dressed frequencies and refines every pulse\n"
      "              parameter; writes the pulse table it found\n"
      "  metrics     per-gate table: duration, ideal-mismatch, average\n"
      "              fidelity, worst-case / incoherent / upper-bound error\n"
      "              rates, and unitarity for all calibrated gates\n"
      "  repeat      error growth over 1..n repeated applications of one\n"
      "              gate (or every gate), each from a single continuous\n"
      "              pulse program\n"
      "  cnot-chain  output-distribution drift of CNOT chains started from\n"
      "              |00> and |10>, against the exact alternating outcome\n"
      "  qft4        mismatch and worst-case error of the four-fold\n"
      "              Fourier-transform circuit per CNOT construction\n"
      "  singlet     correlation sweep of the entangled-pair program versus\n"
      "              the ideal -cos(theta1 - theta2) curve, two sweep modes\n"
      "  scan-cr     conditional target-rotation rates versus the\n"
      "              cross-resonance drive amplitude\n"
      "  run FILE    compiles a two-qubit assembly program and reports the\n"
      "              outcome distribution from all four initial states\n");
}

// ---------------------------------------------------------------------------
// Subcommands.

nlohmann::json single_params_json(const SingleQubitPulseParams& p) {
  return {{"omega0", p.omega0}, {"beta", p.beta}};
}

nlohmann::json cr_params_json(const CrPulseParams& p) {
  return {{"t_cr", p.t_cr},
          {"omega_cr", p.omega_cr},
          {"phi_cr", p.phi_cr},
          {"omega_cancel", p.omega_cancel},
          {"phi_cancel", p.phi_cancel}};
}

int cmd_calibrate(Context& ctx, bool skip_cnots, bool all_schemes) {
  CalibratedGateTable seed_table = ctx.table;
  nlohmann::json gates_json = nlohmann::json::array();

  auto record = [&](const std::string& name, const GateFit& fit,
                    const nlohmann::json& seed, const nlohmann::json& final_p,
                    double vz1, double vz2) {
    std::printf("%-22s mismatch %.3e  (%d evaluations)\n", name.c_str(),
                fit.discrepancy, fit.evals);
    gates_json.push_back({{"name", name},
                          {"mismatch", fit.discrepancy},
                          {"evaluations", fit.evals},
                          {"seed", seed},
                          {"final", final_p},
                          {"vz", {vz1, vz2}},
                          {"trajectory", fit.trajectory}});
  };

  try {
    auto freq = calibrate_frequencies(ctx.dev, ctx.eig, ctx.profile.cal);
    ctx.table.omega_bar = freq.omega_bar;
    std::printf("dressed frequencies: %.6f %.6f GHz\n",
                radns_to_ghz(freq.omega_bar[0]),
                radns_to_ghz(freq.omega_bar[1]));

    static const char* single_names[2][2] = {{"x90 q1", "x180 q1"},
                                             {"x90 q2", "x180 q2"}};
    for (int q = 0; q < 2; ++q)
      for (int a = 0; a < 2; ++a) {
        auto fit = optimize_single_qubit_gate(ctx.dev, ctx.eig, ctx.table, q,
                                              a, ctx.profile.cal);
        const auto& p = ctx.table.gd[q][a];
        record(single_names[q][a], fit, single_params_json(seed_table.gd[q][a]),
               single_params_json(p), p.vz1, p.vz2);
      }

    std::string name = "pulses_" + std::string(to_string(ctx.scheme())) +
                       ".txt";
    if (!skip_cnots) {
      std::vector<CrScheme> schemes{ctx.scheme()};
      if (all_schemes) {
        schemes = {CrScheme::cr1, CrScheme::cr2, CrScheme::cr4};
        name = "pulses_all.txt";
      }
      for (CrScheme s : schemes)
        for (int control = 0; control < 2; ++control) {
          auto fit = optimize_cnot_gate(ctx.dev, ctx.eig, ctx.table, s,
                                        control, ctx.profile.cal);
          const auto& p = ctx.table.gf[static_cast<int>(s)][control];
          record("cnot " + std::string(to_string(s)) + " control q" +
                     std::to_string(control + 1),
                 fit,
                 cr_params_json(seed_table.gf[static_cast<int>(s)][control]),
                 cr_params_json(p), p.vz1, p.vz2);
        }
    }

    ctx.table.save(ctx.out(name).string());
    std::printf("wrote %s\n", ctx.out(name).string().c_str());

    nlohmann::json report{
        {"frequencies_ghz",
         {radns_to_ghz(freq.omega_bar[0]), radns_to_ghz(freq.omega_bar[1])}},
        {"fit_residuals", {freq.residual[0], freq.residual[1]}},
        {"gates", gates_json}};
    std::ofstream jf(ctx.out("calibration_report.json"));
    jf << report.dump(2) << "\n";
    std::printf("wrote %s\n",
                ctx.out("calibration_report.json").string().c_str());
  } catch (const CalibrationError& e) {
    std::fprintf(stderr, "calibration failed: %s\n", e.what());
    return 3;
  }
  return 0;
}

int cmd_metrics(Context& ctx) {
  MetricsOptions opt;
  opt.tau = ctx.profile.tau;
  opt.samples = ctx.profile.samples;
  opt.seed = ctx.seed;
  auto rows =
      metrics_table(ctx.dev, ctx.eig, ctx.table, opt, ctx.worker_count());

  Csv csv(ctx.out("metrics.csv"), "gate,T_ns,delta,f_avg,eta,eta_pauli,eta_ub,u");
  std::printf("%-12s %9s %10s %8s %8s %9s %8s %7s\n", "gate", "T_ns", "delta",
              "f_avg", "eta", "eta_pauli", "eta_ub", "u");
  for (const auto& r : rows) {
    csv.row({r.gate, num(r.duration), num(r.delta), num(r.f_avg), num(r.eta),
             num(r.eta_pauli), num(r.eta_ub), num(r.unitarity)});
    std::printf("%-12s %9.3f %10.3e %8.5f %8.5f %9.5f %8.4f %7.4f\n",
                r.gate.c_str(), r.duration, r.delta, r.f_avg, r.eta,
                r.eta_pauli, r.eta_ub, r.unitarity);
  }
  return 0;
}

int cmd_repeat(Context& ctx, const std::string& gate_name, int n_max) {
  std::vector<GateSpec> gates;
  if (gate_name == "all") {
    gates = standard_gate_set();
  } else {
    auto g = parse_gate(gate_name, ctx.scheme());
    if (!g) {
      std::fprintf(stderr, "unknown gate: %s\n", gate_name.c_str());
      return 2;
    }
    gates.push_back(*g);
  }

  std::vector<std::vector<RepeatMetricsRow>> all(gates.size());
  parallel_tasks(static_cast<int>(gates.size()), ctx.worker_count(),
                 [&](int i) {
                   auto series =
                       repeat_maps(ctx.dev, ctx.eig, ctx.table,
                                   gates[static_cast<size_t>(i)], n_max,
                                   ctx.profile.tau);
                   all[static_cast<size_t>(i)] = repeat_metrics(series);
                 });

  for (size_t i = 0; i < gates.size(); ++i) {
    std::string label = gate_label(gates[i]);
    Csv csv(ctx.out("repeat_" + label + ".csv"), "n,eta,delta,infidelity");
    for (const auto& r : all[i])
      csv.row({std::to_string(r.n), num(r.eta), num(r.delta),
               num(r.infidelity)});
    std::printf("%-12s eta(1) %.4f  eta(%d) %.4f\n", label.c_str(),
                all[i].front().eta, n_max, all[i].back().eta);
  }
  return 0;
}

int cmd_chain(Context& ctx, int n_max) {
  auto schemes =
      scheme_list(ctx, {CrScheme::cr1, CrScheme::cr2, CrScheme::cr4});
  for (CrScheme s : schemes) {
    GateSpec g{GateSpec::Kind::cnot, 0, s};
    auto series = repeat_maps(ctx.dev, ctx.eig, ctx.table, g, n_max,
                              ctx.profile.tau);
    auto rows = chain_distances(series);
    Csv csv(ctx.out("chain_" + std::string(to_string(s)) + ".csv"),
            "n,D_00,D_10");
    for (const auto& r : rows)
      csv.row({std::to_string(r.n), num(r.d00), num(r.d10)});
    std::printf("%-4s D_00(%d) %.4f  D_10(%d) %.4f\n", to_string(s), n_max,
                rows.back().d00, n_max, rows.back().d10);
  }
  return 0;
}

int cmd_qft4(Context& ctx) {
  auto schemes = scheme_list(ctx, {CrScheme::cr2, CrScheme::cr4});
  Csv csv(ctx.out("qft4.csv"), "scheme,T_ns,delta,infidelity,eta");
  for (CrScheme s : schemes) {
    auto res = circuit_map(ctx.dev, ctx.eig, ctx.table, s, qft4_circuit(),
                           ctx.profile.tau);
    double delta = gate_discrepancy(res.m, res.ideal);
    double infid = 1.0 - average_gate_fidelity_exact(res.m, res.ideal);
    double eta = diamond_error_rate(res.m, res.ideal);
    csv.row({to_string(s), num(res.duration), num(delta), num(infid),
             num(eta)});
    std::printf("%-4s T %.1f ns  delta %.4f  infidelity %.4f  eta %.4f\n",
                to_string(s), res.duration, delta, infid, eta);
  }
  return 0;
}

int cmd_singlet(Context& ctx, double step_deg) {
  Csv csv(ctx.out("singlet.csv"),
          "mode,theta1_deg,theta2_deg,f1,f2,f12,e1,e2,e12,"
          "p00,p01,p10,p11,leak");
  for (bool equal : {false, true}) {
    auto angles = singlet_panel_angles(equal, step_deg);
    auto points = singlet_sweep(ctx.dev, ctx.eig, ctx.table, ctx.scheme(),
                                angles, ctx.profile.tau);
    double worst = 0.0;
    for (const auto& pt : points) {
      csv.row({equal ? "equal" : "fixed0", num(pt.theta1 * 180.0 / pi),
               num(pt.theta2 * 180.0 / pi), num(pt.f1), num(pt.f2),
               num(pt.f12), num(pt.e1), num(pt.e2), num(pt.e12), num(pt.p[0]),
               num(pt.p[1]), num(pt.p[2]), num(pt.p[3]), num(pt.leak)});
      worst = std::max(worst, std::abs(pt.f12 - pt.e12));
    }
    std::printf("%s sweep: %zu points, max |F - E| = %.4f\n",
                equal ? "equal-angle" : "fixed-theta1", points.size(), worst);
  }
  return 0;
}

int cmd_scan_cr(Context& ctx, int control, double amp_min, double amp_max,
                double amp_step, double window) {
  if (control != 1 && control != 2) {
    std::fprintf(stderr, "control must be 1 or 2\n");
    return 2;
  }
  std::vector<double> amps;
  for (double a = amp_min; a <= amp_max + 1e-12; a += amp_step)
    amps.push_back(a);

  auto pts = scan_cr_amplitudes(ctx.dev, ctx.eig, ctx.table, control - 1,
                                amps, window, ctx.profile.tau);
  Csv csv(ctx.out("cr_scan_q" + std::to_string(control) + ".csv"),
          "omega_cr,f_control0,f_control1,ix_rate,zx_rate");
  for (const auto& p : pts) {
    csv.row({num(p.omega_cr), num(p.f_control0), num(p.f_control1),
             num(p.ix_rate), num(p.zx_rate)});
    std::printf("omega_cr %.3f: target rates %.3f / %.3f MHz, "
                "conditional split %.3f MHz\n",
                p.omega_cr, 1e3 * p.f_control0, 1e3 * p.f_control1,
                1e3 * 2.0 * std::abs(p.zx_rate));
  }
  return 0;
}

int cmd_run(Context& ctx, const std::string& program_path) {
  std::ifstream in(program_path);
  if (!in) {
    std::fprintf(stderr, "cannot read %s\n", program_path.c_str());
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  Circuit c;
  try {
    c = Circuit::parse(buf.str());
  } catch (const CircuitError& e) {
    std::fprintf(stderr, "%s: %s\n", program_path.c_str(), e.what());
    return 2;
  }

  auto program = compile_circuit(c, ctx.table, ctx.scheme());
  std::printf("%zu statements, %zu pulses, %.1f ns\n", c.ops.size(),
              program.schedule.terms.size(), program.duration);

  static const char* names[4] = {"00", "01", "10", "11"};
  Csv csv(ctx.out("run.csv"), "label,p00,p01,p10,p11,leak");
  for (int initial = 0; initial < 4; ++initial) {
    auto d = run_circuit(ctx.dev, ctx.eig, program, initial, ctx.profile.tau);
    csv.row({names[initial], num(d.p[0]), num(d.p[1]), num(d.p[2]),
             num(d.p[3]), num(d.leak)});
    std::printf("|%s>  ->  %.4f %.4f %.4f %.4f  (leak %.1e)\n",
                names[initial], d.p[0], d.p[1], d.p[2], d.p[3], d.leak);
  }
  for (int initial = 0; initial < 4; ++initial) {
    auto d = ideal_outcome(c, initial);
    csv.row({std::string("ideal_") + names[initial], num(d.p[0]), num(d.p[1]),
             num(d.p[2]), num(d.p[3]), num(0.0)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulated two-transmon device laboratory"};
  app.require_subcommand(0, 1);

  Context ctx;
  bool list = false;
  app.add_flag("--list", list, "describe every experiment and exit");

  auto add_common = [&](CLI::App* sub, bool with_scheme = true) {
    sub->add_option("--device", ctx.device_path, "device parameter file")
        ->check(CLI::ExistingFile);
    sub->add_option("--pulses", ctx.pulses_path, "calibrated pulse table")
        ->check(CLI::ExistingFile);
    sub->add_option("--profile", ctx.profile_name, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));
    sub->add_option("--seed", ctx.seed, "Monte Carlo seed");
    sub->add_option("--out", ctx.out_dir, "output directory");
    sub->add_option("--workers", ctx.workers, "worker thread cap");
    if (with_scheme)
      sub->add_option("--scheme", ctx.scheme_name, "cr1, cr2 or cr4")
          ->check(CLI::IsMember({"cr1", "cr2", "cr4"}));
  };

  auto* calibrate = app.add_subcommand(
      "calibrate", "fit frequencies and pulse parameters");
  bool skip_cnots = false, all_schemes = false;
  calibrate->add_flag("--singles-only", skip_cnots,
                      "skip the cross-resonance gates");
  calibrate->add_flag("--all-schemes", all_schemes,
                      "fit the cross-resonance gates of every scheme");
  add_common(calibrate);

  auto* metrics =
      app.add_subcommand("metrics", "error metrics for every gate");
  add_common(metrics, false);

  auto* repeat =
      app.add_subcommand("repeat", "repeated-application error series");
  std::string gate_name = "all";
  int n_max = 20;
  repeat->add_option("--gate", gate_name,
                     "all, x90_q1, x180_q1, x90_q2, x180_q2, cnot12, cnot21");
  repeat->add_option("--n", n_max, "number of applications")
      ->check(CLI::PositiveNumber);
  add_common(repeat);

  auto* chain = app.add_subcommand("cnot-chain",
                                   "CNOT-chain distribution drift");
  chain->add_option("--n", n_max, "chain length")->check(CLI::PositiveNumber);
  add_common(chain);

  auto* qft4 = app.add_subcommand("qft4", "four-fold Fourier-transform map");
  add_common(qft4);

  auto* singlet =
      app.add_subcommand("singlet", "entangled-pair correlation sweep");
  double step_deg = 5.0;
  singlet->add_option("--step-deg", step_deg, "sweep step in degrees")
      ->check(CLI::PositiveNumber);
  add_common(singlet);

  auto* scan = app.add_subcommand("scan-cr",
                                  "cross-resonance amplitude scan");
  int control = 1;
  double amp_min = 0.02, amp_max = 0.12, amp_step = 0.02, window = 400.0;
  scan->add_option("--control", control, "driving qubit, 1 or 2");
  scan->add_option("--amp-min", amp_min, "lowest drive amplitude");
  scan->add_option("--amp-max", amp_max, "highest drive amplitude");
  scan->add_option("--amp-step", amp_step, "amplitude increment")
      ->check(CLI::PositiveNumber);
  scan->add_option("--window", window, "flat drive length, ns");
  add_common(scan);

  auto* run = app.add_subcommand("run", "execute a two-qubit program file");
  std::string program_path;
  run->add_option("program", program_path, "assembly program file")
      ->required();
  add_common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list) {
    print_list();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "%s", app.help().c_str());
    return 2;
  }
  const auto* scheme_opt =
      app.get_subcommands().front()->get_option_no_throw("--scheme");
  ctx.scheme_explicit = scheme_opt && scheme_opt->count() > 0;

  try {
    ctx.prepare();
    if (calibrate->parsed())
      return cmd_calibrate(ctx, skip_cnots, all_schemes);
    if (metrics->parsed()) return cmd_metrics(ctx);
    if (repeat->parsed()) return cmd_repeat(ctx, gate_name, n_max);
    if (chain->parsed()) return cmd_chain(ctx, n_max);
    if (qft4->parsed()) return cmd_qft4(ctx);
    if (singlet->parsed()) return cmd_singlet(ctx, step_deg);
    if (scan->parsed())
      return cmd_scan_cr(ctx, control, amp_min, amp_max, amp_step, window);
    if (run->parsed()) return cmd_run(ctx, program_path);
  } catch (const CalibrationError& e) {
    std::fprintf(stderr, "calibration failed: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
