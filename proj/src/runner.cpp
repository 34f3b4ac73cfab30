#include "sphere_trace/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sphere_trace/field_synth.hpp"

namespace sphere_trace {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_series_csv(std::ostream& os, const QuantitySeries& series) {
  os << "t,estimate,stderr,oracle_trace,oracle_moment\n";
  for (Eigen::Index i = 0; i < series.times.size(); ++i) {
    os << fmt17(series.times[i]) << "," << fmt17(series.estimate[i]) << ","
       << fmt17(series.stderr_[i]) << ",";
    if (series.has_trace()) os << fmt17(series.oracle_trace[i]);
    os << "," << fmt17(series.oracle_moment[i]) << "\n";
  }
}

CheckReport check_series(const QuantitySeries& series) {
  CheckReport report;
  report.points = static_cast<int>(series.times.size());
  for (Eigen::Index i = 0; i < series.times.size(); ++i) {
    const double dev = std::abs(series.estimate[i] - series.oracle_moment[i]);
    if (series.stderr_[i] > 0.0) {
      if (dev <= 3.0 * series.stderr_[i]) ++report.within;
    } else {
      // zero spread: the estimate must reproduce the oracle to rounding
      if (dev <= 1e-9 * std::max(1.0, std::abs(series.oracle_moment[i]))) ++report.within;
    }
  }
  report.fraction = report.points ? static_cast<double>(report.within) / report.points : 0.0;
  report.pass = report.fraction >= 0.95;
  const Eigen::Index last = series.times.size() - 1;
  if (last >= 1) {
    // slope over the trailing tenth of the grid
    Eigen::Index k = std::max<Eigen::Index>(1, series.times.size() / 10);
    report.terminal_slope = (series.oracle_moment[last] - series.oracle_moment[last - k]) /
                            (series.times[last] - series.times[last - k]);
  }
  return report;
}

RunOutcome run_to_files(const RunConfig& config, bool check) {
  const ExperimentConfig experiment = config.experiment();
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome outcome;
  outcome.series = run_experiment(experiment);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path dir(config.out_dir());
  std::filesystem::create_directories(dir);
  outcome.series_path = (dir / "series.csv").string();
  outcome.manifest_path = (dir / "manifest.txt").string();

  {
    std::ofstream csv(outcome.series_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + outcome.series_path);
    write_series_csv(csv, outcome.series);
  }

  std::vector<std::string> snapshot_paths;
  if (config.snapshot_n_theta() > 0 && config.snapshot_n_phi() > 0) {
    const GridSpec grid{config.snapshot_n_theta(), config.snapshot_n_phi()};
    const Eigen::ArrayXd coeffs = single_path_scalar_coefficients(experiment);
    const Eigen::MatrixXd field = evaluate_on_grid(coeffs, {experiment.kappa}, grid);
    const std::string path = (dir / "snapshot.txt").string();
    std::ofstream snap(path, std::ios::binary);
    write_snapshot(snap, field, experiment.kappa, experiment.T);
    snapshot_paths.push_back(path);
  }

  if (check) {
    outcome.check = check_series(outcome.series);
    outcome.checked = true;
  }

  const std::string echo = config.echo();
  std::ofstream man(outcome.manifest_path, std::ios::binary);
  if (!man) throw std::runtime_error("cannot write " + outcome.manifest_path);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(echo)));
  man << "# sphere-trace run manifest\n";
  man << "config_hash=" << hash << "\n";
  man << "created_unix="
      << std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()
      << "\n";
  man << "elapsed_seconds=" << fmt17(elapsed) << "\n";
  man << "workers=" << worker_count() << "\n";
  man << "series_csv=" << outcome.series_path << "\n";
  for (const std::string& p : snapshot_paths) man << "snapshot=" << p << "\n";
  man << "oracle_trace="
      << (outcome.series.has_trace() ? "available"
                                     : "unavailable (no affine law for this scheme/noise)")
      << "\n";
  man << "[config]\n" << echo;
  return outcome;
}

namespace {

void print_check(std::ostream& out, const CheckReport& r) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "%s: %d/%d points within 3*stderr of the moment oracle (%.1f%%, need 95%%); "
                "terminal oracle slope %.6g",
                r.pass ? "CHECK PASS" : "CHECK FAIL", r.within, r.points, 100.0 * r.fraction,
                r.terminal_slope);
  out << line << "\n";
}

int run_command(const std::vector<std::string>& args, bool check_mode, std::ostream& out,
                std::ostream& err) {
  RunConfig config;
  bool paper_scale = false;
  bool check = check_mode;
  // first pass: preset and paper-scale shape the base configuration
  std::string preset_name;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--preset") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--preset needs a name");
      preset_name = args[++i];
    } else if (args[i] == "--paper-scale") {
      paper_scale = true;
    }
  }
  if (!preset_name.empty()) config = preset_config(preset_name, paper_scale);

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--paper-scale") continue;
    if (a == "--preset") { ++i; continue; }
    if (a == "--check") { check = true; continue; }
    if (a == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a path");
      config.load_file(args[++i]);
      continue;
    }
    if (a.rfind("--", 0) != 0) throw std::invalid_argument("unexpected argument: " + a);
    const std::string body = a.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      config.set(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= args.size()) throw std::invalid_argument("flag --" + body + " needs a value");
      config.set(body, args[++i]);
    }
  }

  // finite expected energy in the kappa -> infinity limit needs gamma > 1
  if (config.get("initial.kind") != "zero") {
    try {
      if (std::stod(config.get("initial.gamma")) <= 1.0)
        out << "warning: initial.gamma <= 1 gives divergent expected energy as kappa grows\n";
    } catch (const std::exception&) {
      // malformed value; experiment() reports it with the key name
    }
  }

  const RunOutcome outcome = run_to_files(config, check);
  out << "wrote " << outcome.series_path << "\n";
  if (outcome.checked) {
    print_check(out, outcome.check);
    if (!outcome.check.pass) return 2;
  }
  (void)err;
  return 0;
}

int list_presets_command(std::ostream& out) {
  out << "presets (default runs use the listed M; --paper-scale restores the published M):\n";
  for (const Preset& p : presets()) {
    RunConfig cfg = preset_config(p.name, false);
    out << "  " << p.name << ": " << p.description << "\n    kappa=" << cfg.get("kappa")
        << " N=" << cfg.get("N") << " T=" << cfg.get("T") << " M=" << cfg.get("M");
    if (p.paper_samples > 0) out << " (paper M=" << p.paper_samples << ")";
    out << " scheme=" << cfg.get("scheme") << " levy.kind=" << cfg.get("levy.kind") << "\n";
  }
  return 0;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    err << "usage: sphere-trace run|check|list-presets [--preset NAME] [--config FILE] "
           "[--check] [--paper-scale] [--key value | --key=value ...]\n";
    return 1;
  }
  const std::string cmd = args.front();
  args.erase(args.begin());
  try {
    if (cmd == "run") return run_command(args, false, out, err);
    if (cmd == "check") return run_command(args, true, out, err);
    if (cmd == "list-presets") return list_presets_command(out);
    err << "unknown command: " << cmd << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sphere_trace
