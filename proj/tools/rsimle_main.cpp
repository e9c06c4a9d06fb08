// Command-line front end: train / sweep / theory / plot / eval.
//
// Exit codes: 0 success, 2 configuration error, 3 rejection sampling starved
// (nothing accepted), 4 theory suite failed its KS gate, 1 anything else.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rsimle/errors.hpp"
#include "rsimle/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerateEpsilon = 3;
constexpr int kExitTheoryFailure = 4;

struct CommonFlags {
  std::string config_path;
  std::string seeds;
  std::string epsilon;
  std::string objective;
  std::string out_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool epsilon_is_list) {
  cmd->add_option("--config", flags.config_path, "Config file (section.key = value lines)");
  cmd->add_option("--seed", flags.seeds, "Comma-separated run seeds (overrides run.seeds)");
  cmd->add_option("--epsilon", flags.epsilon,
                  epsilon_is_list ? "Comma-separated margins to sweep (overrides sweep.epsilons)"
                                  : "Rejection margin (overrides trainer.epsilon)");
  cmd->add_option("--objective", flags.objective, "imle or rs-imle (overrides trainer.objective)");
  cmd->add_option("--out", flags.out_dir, "Output directory (overrides run.out_dir)");
}

rsimle::ExperimentConfig load_config(const CommonFlags& flags, bool epsilon_is_list) {
  rsimle::ExperimentConfig config = flags.config_path.empty()
                                        ? rsimle::ExperimentConfig{}
                                        : rsimle::ExperimentConfig::from_file(flags.config_path);
  if (!flags.seeds.empty()) config.apply_override("run.seeds", flags.seeds);
  if (!flags.epsilon.empty()) {
    config.apply_override(epsilon_is_list ? "sweep.epsilons" : "trainer.epsilon", flags.epsilon);
  }
  if (!flags.objective.empty()) config.apply_override("trainer.objective", flags.objective);
  if (!flags.out_dir.empty()) config.apply_override("run.out_dir", flags.out_dir);
  return config;
}

void print_summary(const rsimle::RunSummary& summary) {
  for (const rsimle::SeedRunResult& r : summary.results) {
    std::printf(
        "seed=%llu objective=%s epsilon=%.6g frechet=%.6g precision=%.4f recall=%.4f "
        "sample_to_data=%.6g data_to_sample=%.6g acceptance=%.4f\n",
        static_cast<unsigned long long>(r.seed), std::string(to_string(r.objective)).c_str(),
        r.epsilon, r.frechet, r.precision, r.recall, r.mean_sample_to_data, r.mean_data_to_sample,
        r.mean_acceptance_rate);
  }
  std::printf("summary: %s\n", summary.summary_csv.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale lab for implicit maximum likelihood training with a "
               "rejection-sampling prior"};
  app.require_subcommand(1);

  CommonFlags train_flags;
  CLI::App* train_cmd = app.add_subcommand("train", "Train at one epsilon per seed");
  add_common_flags(train_cmd, train_flags, false);

  CommonFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Train across a list of epsilons per seed");
  add_common_flags(sweep_cmd, sweep_flags, true);

  std::string theory_out = "out/theory";
  std::size_t theory_trials = 100000;
  std::uint64_t theory_seed = 423977;
  CLI::App* theory_cmd =
      app.add_subcommand("theory", "Check min-of-m distance law against Monte Carlo");
  theory_cmd->add_option("--out", theory_out, "Output directory");
  theory_cmd->add_option("--trials", theory_trials, "Monte Carlo trials per m");
  theory_cmd->add_option("--seed", theory_seed, "Monte Carlo seed");

  std::string plot_run_dir;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Rebuild the SVGs of a finished run directory");
  plot_cmd->add_option("--run-dir", plot_run_dir, "Run directory holding the CSVs")->required();

  std::string eval_real, eval_fake;
  std::size_t eval_pr_k = 3;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Compare two point-cloud CSVs");
  eval_cmd->add_option("--real", eval_real, "Reference point CSV")->required();
  eval_cmd->add_option("--fake", eval_fake, "Generated point CSV")->required();
  eval_cmd->add_option("--pr-k", eval_pr_k, "Neighbour count for precision/recall");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (train_cmd->parsed()) {
      rsimle::ExperimentConfig config = load_config(train_flags, false);
      if (!config.sweep_epsilons.empty()) {
        throw rsimle::ConfigError("config sets sweep.epsilons; use the sweep subcommand");
      }
      print_summary(rsimle::run_experiment(config));
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      rsimle::ExperimentConfig config = load_config(sweep_flags, true);
      if (config.sweep_epsilons.empty()) {
        throw rsimle::ConfigError("sweep needs sweep.epsilons (or --epsilon <list>)");
      }
      print_summary(rsimle::run_experiment(config));
      return kExitOk;
    }
    if (theory_cmd->parsed()) {
      const rsimle::TheoryReport report =
          rsimle::run_theory_suite(theory_out, theory_trials, theory_seed);
      for (const rsimle::TheoryKsRow& row : report.rows) {
        std::printf("m=%-4zu ks=%.6f critical_99=%.6f pdf_integral=%.9f %s\n", row.m, row.ks,
                    row.critical_99, row.pdf_integral, row.pass ? "pass" : "FAIL");
      }
      std::printf("theory suite: %s\n", report.all_pass ? "pass" : "FAIL");
      return report.all_pass ? kExitOk : kExitTheoryFailure;
    }
    if (plot_cmd->parsed()) {
      rsimle::replot_run_dir(plot_run_dir);
      std::printf("rebuilt SVGs in %s\n", plot_run_dir.c_str());
      return kExitOk;
    }
    if (eval_cmd->parsed()) {
      const rsimle::Tensor2 real = rsimle::load_csv(eval_real);
      const rsimle::Tensor2 fake = rsimle::load_csv(eval_fake);
      const rsimle::CloudComparison cmp = rsimle::compare_point_clouds(real, fake, eval_pr_k);
      std::printf("frechet,precision,recall,mean_fake_to_real,mean_real_to_fake\n");
      std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", cmp.frechet, cmp.precision, cmp.recall,
                  cmp.mean_fake_to_real, cmp.mean_real_to_fake);
      return kExitOk;
    }
  } catch (const rsimle::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const rsimle::DegenerateEpsilonError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerateEpsilon;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
