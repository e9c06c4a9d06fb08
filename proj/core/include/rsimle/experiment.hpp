#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsimle/datasets.hpp"
#include "rsimle/metrics.hpp"
#include "rsimle/trainer.hpp"

namespace rsimle {

struct MetricsConfig {
  std::size_t eval_samples = 1000;  // fresh prior samples scored at the end
  std::size_t pr_k = 3;             // neighbour count for the manifold estimate
};

// Everything a run needs, parsed from a flat `section.key = value` file with
// '#' comments.  Command-line overrides reuse apply_override, so the file and
// the flags speak the same language.
struct ExperimentConfig {
  ToyDatasetSpec dataset;
  TrainerConfig trainer;
  MetricsConfig metrics;
  std::vector<double> sweep_epsilons;  // non-empty switches runs into sweep layout
  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir = "out";
  // When set, trainer.epsilon and sweep values are fractions of the dataset
  // diameter instead of absolute distances.
  bool epsilon_relative = false;

  static ExperimentConfig from_file(const std::string& path);
  void apply_override(const std::string& key, const std::string& value);
  // Cross-field checks (rs-imle wants epsilon > 0, imle wants epsilon = 0, ...).
  void validate() const;
  // Canonical echo, itself valid config-file input.
  std::string echo() const;
};

// Final metrics of one (seed, epsilon) training run.
struct SeedRunResult {
  std::uint64_t seed = 0;
  Objective objective = Objective::kImle;
  double epsilon = 0.0;  // effective absolute margin
  double frechet = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double mean_sample_to_data = 0.0;
  double mean_data_to_sample = 0.0;
  double final_mean_loss = 0.0;
  double mean_acceptance_rate = 0.0;
  double wall_seconds = 0.0;
  std::string run_dir;
};

struct RunSummary {
  std::vector<SeedRunResult> results;  // seeds in config order, epsilons outermost
  std::string out_dir;
  std::string summary_csv;
};

// Trains per the config (single setting, or the full epsilon sweep when
// sweep_epsilons is set), writing per-run CSVs and SVGs plus a summary CSV.
// In sweeps, epsilon = 0 runs the plain objective -- with nothing rejected
// the two coincide anyway.
RunSummary run_experiment(const ExperimentConfig& config);

// One Monte Carlo vs closed-form comparison for the min-of-m distance law.
struct TheoryKsRow {
  std::size_t m = 0;
  std::size_t trials = 0;
  double ks = 0.0;
  double critical_99 = 0.0;
  bool pass = false;
  double pdf_integral = 0.0;  // min-density integrated over its support
};

struct TheoryReport {
  bool all_pass = false;
  std::vector<TheoryKsRow> rows;
  std::string out_dir;
};

// Order-statistics checks on the worked example family (noncentral
// chi-squared, dof 3, noncentrality 2): min-CDF curves for
// m in {1, 2, 5, 10, 100}, Monte Carlo overlays with KS statistics at the
// 99% level, misalignment gap tables and density normalization.
TheoryReport run_theory_suite(const std::string& out_dir, std::size_t trials = 100000,
                              std::uint64_t seed = 423977);

// Rebuilds the scatter SVGs of a finished run directory from its CSVs.
void replot_run_dir(const std::string& run_dir);

// Metrics between two already-materialized point clouds.
struct CloudComparison {
  double frechet = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double mean_fake_to_real = 0.0;
  double mean_real_to_fake = 0.0;
};

CloudComparison compare_point_clouds(const Tensor2& real, const Tensor2& fake, std::size_t pr_k);

}  // namespace rsimle
