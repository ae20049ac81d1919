// Command-line front end: simulate, verify, pairs, norms.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frachartree/campaigns.hpp"
#include "frachartree/errors.hpp"
#include "frachartree/estimates.hpp"
#include "frachartree/io.hpp"
#include "frachartree/run_config.hpp"
#include "frachartree/solver.hpp"
#include "frachartree/timefreq.hpp"

namespace fs = std::filesystem;
using namespace frachartree;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kCampaignFailed = 1;
constexpr int kUsage = 2;
constexpr int kGate = 3;
constexpr int kBlowUp = 4;

std::mutex g_print_mutex;

void print_line(std::ostream& os, const std::string& line) {
  std::lock_guard<std::mutex> lock(g_print_mutex);
  os << line << '\n' << std::flush;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

nlohmann::json gate_json(const RangeReport& gate, bool forced) {
  nlohmann::json clauses = nlohmann::json::array();
  for (const auto& c : gate.clauses) {
    clauses.push_back({{"name", c.name}, {"statement", c.statement}, {"holds", c.holds}});
  }
  return {{"admissible", gate.admissible()},
          {"forced", forced},
          {"radial_fractional", gate.radial_fractional},
          {"classical", gate.classical},
          {"clauses", clauses}};
}

nlohmann::json double_array(const std::vector<double>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (double v : values) out.push_back(json_number(v));
  return out;
}

struct SimulateJob {
  fs::path config_path;
  RunConfig config;
  fs::path out_dir;
};

int run_simulation(const SimulateJob& job, bool force) {
  const RunConfig& rc = job.config;
  const std::string tag = job.out_dir.string();
  const RangeReport gate = rc.gate();
  if (!gate.admissible() && !force) {
    print_line(std::cerr, tag + ": outside the theorem's hypotheses (" + gate.failures() + "); use --force to run anyway");
    return kGate;
  }

  rc.validate();
  const SolveConfig cfg = rc.solve_config();
  const Field u0 = rc.initial_field();
  const std::string u0_hash = field_hash(u0);

  fs::create_directories(job.out_dir / "reports");
  save_field((job.out_dir / "initial.field").string(), u0);

  RunConfig echoed = rc;
  echoed.output_dir = job.out_dir.string();
  if (rc.profile == "file") echoed.initial_path = "initial.field";

  nlohmann::json manifest;
  manifest["config"] = echoed.to_json();
  manifest["config_source"] = job.config_path.string();
  manifest["grid"] = {{"dim", rc.dim},
                      {"L", rc.extent},
                      {"N", rc.points},
                      {"dx", cfg.kernel.grid().spacing()},
                      {"frequency_step", cfg.kernel.grid().freq_step()}};
  manifest["kernel"] = {{"lambda", rc.lambda},
                        {"gamma", format_rational(rc.gamma)},
                        {"dc_rule", to_string(rc.dc_rule)},
                        {"riesz_constant", cfg.kernel.riesz_constant()},
                        {"symbol_exponent", cfg.kernel.symbol_exponent()}};
  manifest["propagator"] = {{"alpha", format_rational(rc.alpha)},
                            {"phase_constant", rc.phase_constant},
                            {"direction", rc.direction == Direction::Forward ? "forward" : "backward"}};
  manifest["solver"] = {{"method", to_string(cfg.method)},
                        {"dt", cfg.dt},
                        {"effective_dt", cfg.effective_dt()},
                        {"steps", cfg.step_count()},
                        {"t_end", cfg.t_end},
                        {"picard_tol", cfg.picard_tol},
                        {"picard_max_iter", cfg.picard_max_iter},
                        {"picard_window", cfg.picard_window},
                        {"record_stride", cfg.record_stride}};
  manifest["initial"] = {{"profile", rc.profile}, {"hash", u0_hash}, {"l2", lp_norm(u0, 2.0)}};
  manifest["gate"] = gate_json(gate, force && !gate.admissible());
  write_text_file(job.out_dir / "reports" / "gate.json", manifest["gate"].dump(2) + "\n");

  auto write_manifest = [&] { write_text_file(job.out_dir / "manifest.json", manifest.dump(2) + "\n"); };

  SolveResult result{u0, {}, {}, {}};
  try {
    result = solve(u0, cfg);
  } catch (const BlowUpError& e) {
    manifest["summary"] = {{"status", "blow-up"}, {"message", e.what()}, {"last_good_time", e.last_good_time()}};
    write_manifest();
    print_line(std::cerr, tag + ": blow-up: " + e.what() + " (last good time " + format_double(e.last_good_time()) + ")");
    return kBlowUp;
  } catch (const ConvergenceError& e) {
    manifest["summary"] = {{"status", "no-convergence"},
                           {"message", e.what()},
                           {"increments", double_array(e.increments())}};
    write_manifest();
    print_line(std::cerr, tag + ": Picard iteration did not converge: " + e.what());
    return kBlowUp;
  }

  {
    std::ostringstream csv;
    result.series.write_csv(csv);
    write_text_file(job.out_dir / "norms.csv", csv.str());
  }
  save_field((job.out_dir / "final.field").string(), result.final);

  const NormSeries& s = result.series;
  const double final_drift = s.l2_drift.empty() ? 0.0 : s.l2_drift.back();
  const double h_end = s.gronwall_h.empty() ? 0.0 : s.gronwall_h.back();

  nlohmann::json gronwall;
  gronwall["monitor"] = s.mpq.empty() ? "fl1" : "mpq_" + format_double(s.mpq_exponents[0].p) + "_" +
                                                     format_double(s.mpq_exponents[0].q);
  gronwall["final"] = json_number(h_end);
  bool finite = true;
  bool nondecreasing = true;
  for (std::size_t i = 0; i < s.gronwall_h.size(); ++i) {
    finite = finite && std::isfinite(s.gronwall_h[i]);
    if (i > 0) nondecreasing = nondecreasing && s.gronwall_h[i] >= s.gronwall_h[i - 1];
  }
  gronwall["finite"] = finite;
  gronwall["nondecreasing"] = nondecreasing;
  if (finite && !s.gronwall_h.empty()) {
    const AffineEnvelope env = log_affine_envelope(s.times, s.gronwall_h);
    gronwall["log_affine_fit"] = {{"intercept", json_number(env.intercept)},
                                  {"slope", json_number(env.slope)},
                                  {"max_residual", json_number(env.max_residual)},
                                  {"rms_residual", json_number(env.rms_residual)},
                                  {"bounded", env.bounded}};
  }
  write_text_file(job.out_dir / "reports" / "gronwall.json", gronwall.dump(2) + "\n");

  nlohmann::json summary = {{"status", "ok"},
                            {"final_time", s.times.empty() ? 0.0 : s.times.back()},
                            {"final_l2_drift", json_number(final_drift)},
                            {"max_abs_l2_drift", json_number(s.max_abs_drift())},
                            {"gronwall_h_final", json_number(h_end)},
                            {"final_hash", field_hash(result.final)}};
  if (result.picard) {
    nlohmann::json picard = {{"iterations", result.picard->iterations},
                             {"increments", double_array(result.picard->increments)},
                             {"ratios", double_array(result.picard->ratios)}};
    summary["picard"] = picard;
    write_text_file(job.out_dir / "reports" / "picard.json", picard.dump(2) + "\n");
  }
  manifest["summary"] = summary;
  write_manifest();

  print_line(std::cout, tag + ": ok, steps=" + std::to_string(cfg.step_count()) + ", final_drift=" +
                            sci(final_drift) + ", gronwall_h(T)=" + format_double(h_end));
  return kOk;
}

int run_guarded(const std::function<int()>& body, const std::string& tag) {
  try {
    return body();
  } catch (const ParameterError& e) {
    print_line(std::cerr, tag + ": invalid parameters: " + e.what());
    return kUsage;
  } catch (const IoError& e) {
    print_line(std::cerr, tag + ": " + e.what());
    return kUsage;
  } catch (const std::exception& e) {
    print_line(std::cerr, tag + ": error: " + e.what());
    return kInternal;
  }
}

int cmd_simulate(const std::vector<std::string>& configs, const std::string& out, bool force, unsigned jobs) {
  if (configs.empty()) {
    std::cerr << "simulate: at least one --config is required\n";
    return kUsage;
  }
  std::vector<SimulateJob> work;
  std::set<fs::path> dirs;
  for (const auto& path : configs) {
    SimulateJob job;
    job.config_path = path;
    const int status = run_guarded(
        [&] {
          job.config = load_run_config(path);
          return kOk;
        },
        path);
    if (status != kOk) return status;
    if (!out.empty()) {
      job.out_dir = configs.size() == 1 ? fs::path(out) : fs::path(out) / fs::path(path).stem();
    } else {
      job.out_dir = job.config.output_dir;
    }
    job.out_dir = job.out_dir.lexically_normal();
    if (!dirs.insert(job.out_dir).second) {
      std::cerr << "simulate: two runs would share the output directory " << job.out_dir << "\n";
      return kUsage;
    }
    work.push_back(std::move(job));
  }

  std::vector<int> status(work.size(), kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      status[i] = run_guarded([&] { return run_simulation(work[i], force); }, work[i].out_dir.string());
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return *std::max_element(status.begin(), status.end());
}

int cmd_verify(const std::string& suite, const std::string& config_path, const std::string& out) {
  const auto names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "verify: unknown suite '" << suite << "'\n";
    return kUsage;
  }
  RunConfig rc;
  if (!config_path.empty()) rc = load_run_config(config_path);
  const auto reports = run_suite(suite, rc.verify_options());

  const fs::path dir = out.empty() ? fs::path("verify_output") : fs::path(out);
  const nlohmann::json aggregate = to_json(reports);
  write_text_file(dir / (suite + ".json"), aggregate.dump(2) + "\n");
  std::ostringstream csv;
  write_reports_csv(csv, reports);
  write_text_file(dir / (suite + ".csv"), csv.str());
  for (const auto& r : reports) write_text_file(dir / "reports" / (r.name + ".json"), to_json(r).dump(2) + "\n");

  bool failed = false;
  for (const auto& r : reports) {
    std::string line = (r.failed() ? "FAIL " : "PASS ") + r.name + "  sup_ratio=" + format_double(r.sup_ratio);
    if (r.refined_sup_ratio != 0.0) line += "  refinement_drift=" + sci(r.grid_refinement_drift);
    for (const auto& f : r.failures) line += "\n    " + f;
    std::cout << line << '\n';
    failed = failed || r.failed();
  }
  std::cout << (failed ? "FAIL" : "PASS") << " " << suite << " (" << reports.size() << " campaigns)\n";
  return failed ? kCampaignFailed : kOk;
}

int cmd_pairs(const std::string& alpha_text, int dim, const std::string& gamma_text) {
  const Rational alpha = parse_rational(alpha_text);
  const Rational gamma = parse_rational(gamma_text);
  std::optional<ProofExponents> found;
  try {
    found = proof_exponents(alpha, dim, gamma);
  } catch (const ParameterError& e) {
    std::cerr << "pairs: infeasible parameters: " << e.what() << "\n";
    return kGate;
  }
  const ProofExponents& ex = *found;
  std::cout << "alpha = " << format_rational(alpha) << ", d = " << dim << ", gamma = " << format_rational(gamma)
            << "\n";
  std::cout << "s      = " << format_rational(ex.s) << "\n";
  std::cout << "q      = " << ex.pair.q.str() << "\n";
  std::cout << "r      = " << format_rational(ex.pair.r) << "\n";
  std::cout << "delta  = " << format_rational(ex.delta) << "\n";
  std::cout << "q'     = " << format_rational(ex.q_dual) << "\n";
  std::cout << "r'     = " << format_rational(ex.r_dual) << "\n";
  for (const auto& id : ex.identities) {
    std::cout << (id.holds() ? "✓ " : "✗ ") << id.name << ": " << format_rational(id.lhs) << " = "
              << format_rational(id.rhs) << "\n";
  }
  return ex.all_hold() ? kOk : kInternal;
}

int cmd_norms(const std::string& field_path, const std::string& config_path, const std::string& out) {
  RunConfig rc;
  if (!config_path.empty()) rc = load_run_config(config_path);
  Field f = load_field(field_path);
  if (f.space() != Space::Physical) f = idft(f);

  ModulationParams lattice;
  lattice.window = Window::gaussian(rc.window_width);
  lattice.x_stride = rc.x_stride;
  lattice.w_step = static_cast<double>(rc.w_stride) * f.grid().freq_step();

  std::vector<NormSpec> specs = {NormSpec::lebesgue(1),         NormSpec::lebesgue(2),
                                 NormSpec::lebesgue(kInfinity), NormSpec::fourier_lebesgue(1),
                                 NormSpec::fourier_lebesgue(2), NormSpec::modulation(1, 1),
                                 NormSpec::modulation(2, 1),    NormSpec::modulation(2, 2)};
  for (const auto& e : rc.mpq) specs.push_back(NormSpec::modulation(e.p, e.q, e.s));

  const std::string id = fs::path(field_path).stem().string();
  std::vector<NormRow> rows;
  for (const auto& spec : specs) {
    rows.push_back({id, spec.name(), spec.p, spec.q, spec.s, evaluate_norm(f, spec, lattice)});
  }
  std::ostringstream csv;
  write_norm_rows_csv(csv, rows);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out, csv.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Hartree equation solver and estimate verifier"};
  app.require_subcommand(1);

  std::vector<std::string> sim_configs;
  std::string sim_out;
  bool sim_force = false;
  unsigned sim_jobs = 1;
  auto* simulate = app.add_subcommand("simulate", "Run the solver for one or more configurations");
  simulate->add_option("--config,configs", sim_configs, "Run configuration file (key = value, or manifest.json)");
  simulate->add_option("--out", sim_out, "Output directory (one subdirectory per config when several are given)");
  simulate->add_flag("--force", sim_force, "Run even when the configuration is outside the theorem's hypotheses");
  simulate->add_option("--jobs", sim_jobs, "Number of runs executed concurrently")->check(CLI::PositiveNumber);

  std::string verify_suite;
  std::string verify_config;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Run estimate verification campaigns");
  verify->add_option("suite", verify_suite, "trilinear, difference, strichartz, hls, propagator, algebra, embeddings or all")
      ->required();
  verify->add_option("--config", verify_config, "Configuration file for the verify.* keys");
  verify->add_option("--out", verify_out, "Output directory (default verify_output)");

  std::string pairs_alpha;
  int pairs_dim = 1;
  std::string pairs_gamma;
  auto* pairs = app.add_subcommand("pairs", "Print the Hartree admissible pair and exponent identities");
  pairs->add_option("alpha", pairs_alpha, "Dispersion order alpha (rational)")->required();
  pairs->add_option("d", pairs_dim, "Dimension")->required();
  pairs->add_option("gamma", pairs_gamma, "Kernel exponent gamma (rational)")->required();

  std::string norms_field;
  std::string norms_config;
  std::string norms_out;
  auto* norms = app.add_subcommand("norms", "Compute norms of a stored field");
  norms->add_option("field", norms_field, "Field file")->required();
  norms->add_option("--config", norms_config, "Configuration file for the norms.* keys");
  norms->add_option("--out", norms_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*simulate) return cmd_simulate(sim_configs, sim_out, sim_force, sim_jobs);
  if (*verify) return run_guarded([&] { return cmd_verify(verify_suite, verify_config, verify_out); }, "verify");
  if (*pairs) return run_guarded([&] { return cmd_pairs(pairs_alpha, pairs_dim, pairs_gamma); }, "pairs");
  if (*norms) return run_guarded([&] { return cmd_norms(norms_field, norms_config, norms_out); }, "norms");
  return kUsage;
}
