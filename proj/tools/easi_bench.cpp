// Benchmark harness for the streaming separation library.
//
//   easi_bench run     seed-swept optimizer comparison -> runs.csv,
//                      summary.csv, plot_<arm>.svg
//   easi_bench table1  throughput-model reproduction of the reference
//                      design's figures
//   easi_bench sweep   hyperparameter grid -> sweep.csv and the best point
//   easi_bench plot    re-render SVG plots from an existing runs.csv
//
// `easi_bench --print-default-config` emits the default JSON config.
// Exit code 0 on success, 1 on validation or I/O failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "easi/bench/config.hpp"
#include "easi/bench/csv.hpp"
#include "easi/bench/runner.hpp"
#include "easi/bench/svg_plot.hpp"
#include "easi/bench/table1.hpp"

namespace {

std::size_t default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void apply_seed_count(easi::bench::ExperimentConfig& config, std::size_t count) {
  config.seeds.resize(count);
  for (std::size_t i = 0; i < count; ++i) config.seeds[i] = i;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming source-separation benchmark harness"};
  app.set_version_flag("--version", "easi_bench 1.0.0");
  app.require_subcommand(0, 1);
  bool print_default_config = false;
  app.add_flag("--print-default-config", print_default_config,
               "Print the default experiment config as JSON and exit");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the configured experiment");
  std::string run_config_path;
  std::size_t run_seed_count = 0;
  std::string run_out;
  std::vector<std::string> run_arms;
  std::size_t run_max_samples = 0;
  std::size_t run_jobs = default_jobs();
  bool run_no_plots = false;
  run_cmd->add_option("--config", run_config_path, "Experiment config JSON file");
  run_cmd->add_option("--seeds", run_seed_count, "Override: run seeds 0..N-1");
  run_cmd->add_option("--out", run_out, "Override: output directory");
  run_cmd->add_option("--arm", run_arms,
                      "Override: replace arms with these optimizers (sgd, momentum, smbgd); "
                      "repeatable");
  run_cmd->add_option("--max-samples", run_max_samples, "Override: per-run sample budget");
  run_cmd->add_option("--jobs", run_jobs, "Worker threads for the seed sweep");
  run_cmd->add_flag("--no-plots", run_no_plots, "Skip SVG plot generation");

  // table1
  auto* table1_cmd =
      app.add_subcommand("table1", "Reproduce the reference design's throughput figures");
  double t1_sgd_clock = easi::bench::kReferenceSgdClockMhz;
  double t1_smbgd_clock = easi::bench::kReferenceSmbgdClockMhz;
  std::size_t t1_m = easi::bench::kReferenceM;
  std::size_t t1_n = easi::bench::kReferenceN;
  std::string t1_csv;
  table1_cmd->add_option("--sgd-clock", t1_sgd_clock, "Multi-cycle SGD design clock in MHz");
  table1_cmd->add_option("--smbgd-clock", t1_smbgd_clock, "Pipelined design clock in MHz");
  table1_cmd->add_option("--m", t1_m, "Input dimension");
  table1_cmd->add_option("--n", t1_n, "Output dimension");
  table1_cmd->add_option("--csv", t1_csv, "Also write the rows to this CSV file");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Hyperparameter grid search");
  std::string sweep_config_path;
  std::string sweep_optimizer = "smbgd";
  std::vector<float> sweep_mu{0.01f};
  std::vector<float> sweep_beta{0.0f, 0.25f, 0.5f, 0.75f};
  std::vector<float> sweep_gamma{0.0f, 0.25f, 0.5f, 0.75f};
  std::vector<std::size_t> sweep_batch{8};
  std::size_t sweep_seed_count = 0;
  std::size_t sweep_jobs = default_jobs();
  std::string sweep_out;
  sweep_cmd->add_option("--config", sweep_config_path,
                        "Base config (mixture, seeds, convergence)");
  sweep_cmd->add_option("--optimizer", sweep_optimizer, "Optimizer to sweep")
      ->check(CLI::IsMember({"sgd", "momentum", "smbgd"}));
  sweep_cmd->add_option("--mu", sweep_mu, "Learning-rate grid")->expected(-1);
  sweep_cmd->add_option("--beta", sweep_beta, "Within-batch decay grid")->expected(-1);
  sweep_cmd->add_option("--gamma", sweep_gamma, "Momentum grid")->expected(-1);
  sweep_cmd->add_option("--batch-size", sweep_batch, "Batch-size grid")->expected(-1);
  sweep_cmd->add_option("--seeds", sweep_seed_count, "Override: run seeds 0..N-1");
  sweep_cmd->add_option("--jobs", sweep_jobs, "Worker threads");
  sweep_cmd->add_option("--out", sweep_out, "Override: output directory");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Re-render plots from a runs.csv");
  std::string plot_runs = "bench_out/runs.csv";
  std::string plot_out = "bench_out";
  plot_cmd->add_option("--runs", plot_runs, "Path to runs.csv");
  plot_cmd->add_option("--out", plot_out, "Directory for the SVG files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_default_config) {
      std::cout << easi::bench::config_text(easi::bench::default_config());
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 1;
    }

    if (run_cmd->parsed()) {
      easi::bench::ExperimentConfig config = run_config_path.empty()
                                                 ? easi::bench::default_config()
                                                 : easi::bench::load_config(run_config_path);
      if (run_cmd->count("--seeds")) apply_seed_count(config, run_seed_count);
      if (run_cmd->count("--max-samples")) config.max_samples = run_max_samples;
      if (!run_out.empty()) config.out_dir = run_out;
      if (!run_arms.empty()) {
        config.arms.clear();
        for (const std::string& name : run_arms) {
          easi::bench::ArmConfig arm;
          arm.hp.optimizer = easi::bench::parse_optimizer(name);
          arm.name = name;
          config.arms.push_back(arm);
        }
      }
      easi::bench::validate(config);
      const easi::bench::ExperimentResult result =
          easi::bench::run_experiment(config, std::max<std::size_t>(1, run_jobs));
      easi::bench::write_outputs(result, config.out_dir);
      std::cout << easi::bench::report_text(result.summary);
      std::cout << "wrote " << config.out_dir << "/runs.csv and " << config.out_dir
                << "/summary.csv\n";
      if (!run_no_plots)
        for (const std::string& path : easi::bench::emit_plot(result.runs, config.out_dir))
          std::cout << "wrote " << path << '\n';
      return 0;
    }

    if (table1_cmd->parsed()) {
      const std::vector<easi::bench::Table1Row> rows =
          easi::bench::table1_rows(t1_sgd_clock, t1_smbgd_clock, t1_m, t1_n);
      std::cout << easi::bench::table1_text(rows);
      bool mismatch = false;
      for (const easi::bench::Table1Row& row : rows) mismatch = mismatch || row.mismatch;
      if (!t1_csv.empty()) {
        easi::bench::emit_table1_csv(rows, t1_csv);
        std::cout << "wrote " << t1_csv << '\n';
      }
      return mismatch ? 1 : 0;
    }

    if (sweep_cmd->parsed()) {
      easi::bench::ExperimentConfig config = sweep_config_path.empty()
                                                 ? easi::bench::default_config()
                                                 : easi::bench::load_config(sweep_config_path);
      if (sweep_cmd->count("--seeds")) apply_seed_count(config, sweep_seed_count);
      if (!sweep_out.empty()) config.out_dir = sweep_out;
      const std::vector<easi::bench::SweepPoint> points = easi::bench::sweep(
          config, easi::bench::parse_optimizer(sweep_optimizer), sweep_mu, sweep_beta,
          sweep_gamma, sweep_batch, std::max<std::size_t>(1, sweep_jobs));
      std::filesystem::create_directories(config.out_dir);
      const std::string csv_path = config.out_dir + "/sweep.csv";
      easi::bench::emit_sweep_csv(points, csv_path);
      std::cout << "wrote " << csv_path << '\n';
      const easi::bench::SweepPoint& best = easi::bench::pick_best(points);
      std::printf("best: mu=%g beta=%g gamma=%g P=%zu  mean_iters=%.1f converged=%zu/%zu\n",
                  static_cast<double>(best.mu), static_cast<double>(best.beta),
                  static_cast<double>(best.gamma), best.batch_size, *best.summary.mean_iters,
                  best.summary.converged, config.seeds.size());
      return 0;
    }

    if (plot_cmd->parsed()) {
      const std::vector<easi::bench::RunSeries> runs = easi::bench::parse_runs_csv(plot_runs);
      for (const std::string& path : easi::bench::emit_plot(runs, plot_out))
        std::cout << "wrote " << path << '\n';
      return 0;
    }

    std::cerr << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
