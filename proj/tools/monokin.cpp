#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "monokin/app.hpp"
#include "monokin/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monokinetic alignment solvers: runs, sweeps and reports"};
  app.require_subcommand(1);

  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string snapshot_times;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "Output directory (overrides out_dir)");
    sub->add_option("--seed", seed, "Random seed (overrides seed)");
    sub->add_option("--threads", threads, "Worker threads (fallback: MONOKIN_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--snapshot-times", snapshot_times, "Comma-separated sample times");
  };

  std::string config_path, plan_path, report_dir;
  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", config_path, "Config file")->required();
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("plan", plan_path, "Sweep plan file")->required();
  add_common(sweep);
  CLI::App* report = app.add_subcommand("report", "Merge run diagnostics into summary.csv");
  report->add_option("dir", report_dir, "Directory holding completed runs")->required();
  report->add_option("--threads", threads, "Unused; accepted for symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : monokin::kExitValidation;
  }

  if (threads > 0) monokin::set_thread_count(threads);

  monokin::Overrides o;
  CLI::App* active = app.get_subcommands().front();
  if (active != report && active->count("--out-dir")) o.out_dir = out_dir;
  if (active != report && active->count("--seed")) o.seed = seed;
  if (active != report && active->count("--snapshot-times")) {
    std::vector<double> ts;
    std::stringstream ss(snapshot_times);
    std::string item;
    try {
      while (std::getline(ss, item, ',')) ts.push_back(std::stod(item));
    } catch (const std::exception&) {
      std::cerr << "error: invalid snapshot_times: '" << snapshot_times << "'\n";
      return monokin::kExitValidation;
    }
    o.snapshot_times = ts;
  }

  if (active == run) return monokin::cmd_run(config_path, o, std::cout, std::cerr);
  if (active == sweep) return monokin::cmd_sweep(plan_path, o, std::cout, std::cerr);
  return monokin::cmd_report(report_dir, std::cout, std::cerr);
}
