#include "rsimle/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "rsimle/errors.hpp"
#include "rsimle/nn_index.hpp"
#include "rsimle/order_stats.hpp"
#include "rsimle/rng.hpp"
#include "rsimle/svg.hpp"

namespace fs = std::filesystem;

namespace rsimle {

namespace {

constexpr std::uint64_t kEvalSeedStream = 1000;

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value[0] != '-') {
      const unsigned long long v = std::stoull(value, &used);
      if (used == value.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Short, filesystem-friendly rendering for directory names.
std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values, const char* sep,
                 std::string (*fmt)(T)) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += fmt(values[i]);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);

  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + " line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    try {
      config.apply_override(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

void ExperimentConfig::apply_override(const std::string& key, const std::string& value) {
  if (key == "dataset.shape") {
    dataset.shape = toy_shape_from_string(value);
  } else if (key == "dataset.n_points") {
    dataset.n_points = parse_u64(key, value);
  } else if (key == "dataset.noise_sigma") {
    dataset.noise_sigma = parse_double(key, value);
  } else if (key == "dataset.seed") {
    dataset.seed = parse_u64(key, value);
  } else if (key == "dataset.dim") {
    dataset.dim = parse_u64(key, value);
  } else if (key == "dataset.csv_path") {
    dataset.csv_path = value;
  } else if (key == "trainer.objective") {
    trainer.objective = objective_from_string(value);
  } else if (key == "trainer.epsilon") {
    trainer.epsilon = parse_double(key, value);
  } else if (key == "trainer.sample_factor") {
    trainer.sample_factor = parse_u64(key, value);
  } else if (key == "trainer.epochs") {
    trainer.epochs = parse_u64(key, value);
  } else if (key == "trainer.inner_steps") {
    trainer.inner_steps = parse_u64(key, value);
  } else if (key == "trainer.batch_size") {
    trainer.batch_size = parse_u64(key, value);
  } else if (key == "trainer.lr") {
    trainer.lr = parse_double(key, value);
  } else if (key == "trainer.max_rounds") {
    trainer.max_rounds = parse_u64(key, value);
  } else if (key == "trainer.latent_dim") {
    trainer.latent_dim = parse_u64(key, value);
  } else if (key == "trainer.hidden_dims") {
    trainer.hidden_dims.clear();
    for (const std::string& item : split_list(value)) {
      trainer.hidden_dims.push_back(parse_u64(key, item));
    }
  } else if (key == "trainer.activation") {
    try {
      trainer.activation = activation_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "trainer.projected_dim") {
    trainer.projected_dim = parse_u64(key, value);
  } else if (key == "metrics.eval_samples") {
    metrics.eval_samples = parse_u64(key, value);
  } else if (key == "metrics.pr_k") {
    metrics.pr_k = parse_u64(key, value);
  } else if (key == "run.seeds") {
    seeds.clear();
    for (const std::string& item : split_list(value)) seeds.push_back(parse_u64(key, item));
  } else if (key == "run.out_dir") {
    out_dir = value;
  } else if (key == "run.epsilon_relative") {
    epsilon_relative = parse_bool(key, value);
  } else if (key == "sweep.epsilons") {
    sweep_epsilons.clear();
    for (const std::string& item : split_list(value)) {
      sweep_epsilons.push_back(parse_double(key, item));
    }
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("run.seeds must list at least one seed");
  if (out_dir.empty()) throw ConfigError("run.out_dir must not be empty");
  if (metrics.eval_samples == 0) throw ConfigError("metrics.eval_samples must be >= 1");
  if (metrics.pr_k == 0) throw ConfigError("metrics.pr_k must be >= 1");
  for (double eps : sweep_epsilons) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw ConfigError("sweep.epsilons entries must be >= 0 and finite");
    }
  }
  // Objective/epsilon coherence only binds outside sweeps; a sweep assigns
  // its own epsilon (and pairs 0 with the plain objective) per run.
  if (sweep_epsilons.empty()) {
    if (trainer.objective == Objective::kRsImle && !(trainer.epsilon > 0.0)) {
      throw ConfigError("rs-imle needs trainer.epsilon > 0; epsilon 0 rejects nothing "
                        "(that is plain imle)");
    }
    if (trainer.objective == Objective::kImle && trainer.epsilon != 0.0) {
      throw ConfigError("imle ignores no samples, so trainer.epsilon must be 0 "
                        "(use rs-imle for a positive margin)");
    }
  }
}

std::string ExperimentConfig::echo() const {
  std::ostringstream out;
  out << "dataset.shape = " << to_string(dataset.shape) << "\n";
  out << "dataset.n_points = " << dataset.n_points << "\n";
  out << "dataset.noise_sigma = " << format_double(dataset.noise_sigma) << "\n";
  out << "dataset.seed = " << dataset.seed << "\n";
  out << "dataset.dim = " << dataset.dim << "\n";
  if (!dataset.csv_path.empty()) out << "dataset.csv_path = " << dataset.csv_path << "\n";
  out << "trainer.objective = " << to_string(trainer.objective) << "\n";
  out << "trainer.epsilon = " << format_double(trainer.epsilon) << "\n";
  out << "trainer.sample_factor = " << trainer.sample_factor << "\n";
  out << "trainer.epochs = " << trainer.epochs << "\n";
  out << "trainer.inner_steps = " << trainer.inner_steps << "\n";
  out << "trainer.batch_size = " << trainer.batch_size << "\n";
  out << "trainer.lr = " << format_double(trainer.lr) << "\n";
  out << "trainer.max_rounds = " << trainer.max_rounds << "\n";
  out << "trainer.latent_dim = " << trainer.latent_dim << "\n";
  out << "trainer.hidden_dims = "
      << join<std::size_t>(trainer.hidden_dims, ",",
                           [](std::size_t v) { return std::to_string(v); })
      << "\n";
  out << "trainer.activation = " << to_string(trainer.activation) << "\n";
  out << "trainer.projected_dim = " << trainer.projected_dim << "\n";
  out << "metrics.eval_samples = " << metrics.eval_samples << "\n";
  out << "metrics.pr_k = " << metrics.pr_k << "\n";
  out << "run.seeds = "
      << join<std::uint64_t>(seeds, ",", [](std::uint64_t v) { return std::to_string(v); })
      << "\n";
  out << "run.out_dir = " << out_dir << "\n";
  out << "run.epsilon_relative = " << (epsilon_relative ? "true" : "false") << "\n";
  if (!sweep_epsilons.empty()) {
    out << "sweep.epsilons = "
        << join<double>(sweep_epsilons, ",", [](double v) { return format_double(v); }) << "\n";
  }
  return out.str();
}

namespace {

void write_epochs_csv(const std::string& path, const std::vector<TrainRecord>& records) {
  std::ofstream out = open_out(path);
  out << "epoch,mean_loss,acceptance_rate,min_selected_dist,mean_selected_dist,max_selected_dist\n";
  for (const TrainRecord& r : records) {
    double lo = 0.0, hi = 0.0, sum = 0.0;
    if (!r.selected_dist.empty()) {
      lo = hi = r.selected_dist.front();
      for (double d : r.selected_dist) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        sum += d;
      }
      sum /= static_cast<double>(r.selected_dist.size());
    }
    out << r.epoch << "," << format_double(r.mean_loss) << "," << format_double(r.acceptance_rate)
        << "," << format_double(lo) << "," << format_double(sum) << "," << format_double(hi)
        << "\n";
  }
  finish_out(out, path);
}

void write_final_metrics_csv(const std::string& path, const SeedRunResult& r) {
  std::ofstream out = open_out(path);
  out << "seed,objective,epsilon,frechet,precision,recall,mean_sample_to_data,"
         "mean_data_to_sample,final_mean_loss,mean_acceptance_rate\n";
  out << r.seed << "," << to_string(r.objective) << "," << format_double(r.epsilon) << ","
      << format_double(r.frechet) << "," << format_double(r.precision) << ","
      << format_double(r.recall) << "," << format_double(r.mean_sample_to_data) << ","
      << format_double(r.mean_data_to_sample) << "," << format_double(r.final_mean_loss) << ","
      << format_double(r.mean_acceptance_rate) << "\n";
  finish_out(out, path);
}

void write_run_svgs(const std::string& run_dir, const Tensor2& data, const Tensor2& samples,
                    const Tensor2& selected, const Tensor2* latents) {
  {
    std::vector<ScatterSeries> series;
    series.push_back({samples, ScatterSeries::Marker::kCircle, "#9ecae8", 3.0, "samples"});
    series.push_back({selected, ScatterSeries::Marker::kStar, "#1f4e9c", 4.0, "selected"});
    series.push_back({data, ScatterSeries::Marker::kSquare, "#d62728", 4.0, "data"});
    SvgWindow window = fit_window({&data, &samples});
    window.title = "data space";
    write_scatter_svg(run_dir + "/scatter_data.svg", window, series);
  }
  if (latents != nullptr && latents->cols() == 2) {
    std::vector<ScatterSeries> series;
    for (std::size_t i = 0; i < latents->rows(); ++i) {
      Tensor2 one(1, 2);
      one(0, 0) = (*latents)(i, 0);
      one(0, 1) = (*latents)(i, 1);
      series.push_back({std::move(one), ScatterSeries::Marker::kCircle,
                        color_for_index(i, latents->rows()), 4.0, ""});
    }
    SvgWindow window = fit_window({latents}, 0.2);
    window.title = "latent space (selected latents, one color per data point)";
    write_scatter_svg(run_dir + "/scatter_latent.svg", window, series);
  }
}

struct RunInputs {
  const ExperimentConfig* config;
  const Tensor2* data;
  double diameter;
};

SeedRunResult run_single(const RunInputs& in, std::uint64_t seed, Objective objective,
                         double epsilon_raw, const std::string& run_dir) {
  TrainerConfig tcfg = in.config->trainer;
  tcfg.seed = seed;
  tcfg.objective = objective;
  tcfg.epsilon = in.config->epsilon_relative ? epsilon_raw * in.diameter : epsilon_raw;
  if (objective == Objective::kRsImle && !(tcfg.epsilon > 0.0)) {
    throw ConfigError("rs-imle needs a positive epsilon margin");
  }

  fs::create_directories(run_dir);

  Trainer trainer(tcfg, *in.data);
  const std::vector<TrainRecord> records = trainer.run();
  if (records.empty()) throw ConfigError("trainer.epochs must be >= 1 for experiment runs");

  const TestTimeEval eval = evaluate_test_time(trainer.net(), *in.data, in.config->metrics.eval_samples,
                                               derive_seed(seed, kEvalSeedStream));
  const CloudComparison cmp = compare_point_clouds(*in.data, eval.samples, in.config->metrics.pr_k);

  SeedRunResult result;
  result.seed = seed;
  result.objective = objective;
  result.epsilon = tcfg.epsilon;
  result.frechet = cmp.frechet;
  result.precision = cmp.precision;
  result.recall = cmp.recall;
  result.mean_sample_to_data = eval.mean_sample_to_data;
  result.mean_data_to_sample = eval.mean_data_to_sample;
  result.final_mean_loss = records.back().mean_loss;
  result.run_dir = run_dir;
  double acc = 0.0, wall = 0.0;
  for (const TrainRecord& r : records) {
    acc += r.acceptance_rate;
    wall += r.wall_seconds;
  }
  result.mean_acceptance_rate = acc / static_cast<double>(records.size());
  result.wall_seconds = wall;

  // Effective per-run config; reusable as a config file.
  ExperimentConfig echo_config = *in.config;
  echo_config.trainer = tcfg;
  echo_config.seeds = {seed};
  echo_config.sweep_epsilons.clear();
  echo_config.epsilon_relative = false;  // epsilon above is already absolute
  {
    std::ofstream out = open_out(run_dir + "/config_echo.txt");
    out << echo_config.echo();
    finish_out(out, run_dir + "/config_echo.txt");
  }

  save_csv(run_dir + "/data.csv", *in.data);
  save_csv(run_dir + "/samples.csv", eval.samples);
  const Tensor2 selected = trainer.net().forward(records.back().selected_latents);
  save_csv(run_dir + "/selected.csv", selected);
  save_csv(run_dir + "/latents.csv", records.back().selected_latents);
  write_epochs_csv(run_dir + "/epochs.csv", records);
  write_final_metrics_csv(run_dir + "/final_metrics.csv", result);
  {
    // Kept out of the CSVs so those stay byte-identical across reruns.
    std::ofstream out = open_out(run_dir + "/timing.txt");
    out << "train_wall_seconds " << format_double(result.wall_seconds) << "\n";
    finish_out(out, run_dir + "/timing.txt");
  }

  const Tensor2& latents = records.back().selected_latents;
  write_run_svgs(run_dir, *in.data, eval.samples, selected,
                 latents.cols() == 2 ? &latents : nullptr);
  return result;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);

  const Tensor2 data = make_dataset(config.dataset);
  if (config.metrics.eval_samples < data.rows()) {
    throw ConfigError("metrics.eval_samples (" + std::to_string(config.metrics.eval_samples) +
                      ") must be at least the dataset size (" + std::to_string(data.rows()) + ")");
  }
  if (config.metrics.pr_k >= data.rows()) {
    throw ConfigError("metrics.pr_k must be smaller than the dataset size");
  }

  RunInputs in{&config, &data, dataset_diameter(data)};

  RunSummary summary;
  summary.out_dir = config.out_dir;
  {
    std::ofstream out = open_out(config.out_dir + "/config_echo.txt");
    out << config.echo();
    finish_out(out, config.out_dir + "/config_echo.txt");
  }

  if (config.sweep_epsilons.empty()) {
    for (std::uint64_t seed : config.seeds) {
      const std::string run_dir = config.out_dir + "/seed_" + std::to_string(seed);
      summary.results.push_back(
          run_single(in, seed, config.trainer.objective, config.trainer.epsilon, run_dir));
    }
  } else {
    for (double eps : config.sweep_epsilons) {
      // Epsilon 0 rejects nothing, so run it as the plain objective.
      const Objective objective = eps > 0.0 ? Objective::kRsImle : Objective::kImle;
      for (std::uint64_t seed : config.seeds) {
        const std::string run_dir =
            config.out_dir + "/eps_" + format_short(eps) + "/seed_" + std::to_string(seed);
        summary.results.push_back(run_single(in, seed, objective, eps, run_dir));
      }
    }
  }

  summary.summary_csv = config.out_dir + "/summary.csv";
  std::ofstream out = open_out(summary.summary_csv);
  out << "seed,objective,epsilon,frechet,precision,recall,mean_sample_to_data,"
         "mean_data_to_sample,final_mean_loss,mean_acceptance_rate,run_dir\n";
  for (const SeedRunResult& r : summary.results) {
    out << r.seed << "," << to_string(r.objective) << "," << format_double(r.epsilon) << ","
        << format_double(r.frechet) << "," << format_double(r.precision) << ","
        << format_double(r.recall) << "," << format_double(r.mean_sample_to_data) << ","
        << format_double(r.mean_data_to_sample) << "," << format_double(r.final_mean_loss) << ","
        << format_double(r.mean_acceptance_rate) << ","
        << fs::relative(r.run_dir, config.out_dir).string() << "\n";
  }
  finish_out(out, summary.summary_csv);
  return summary;
}

TheoryReport run_theory_suite(const std::string& out_dir, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ConfigError("theory suite needs trials >= 1");
  fs::create_directories(out_dir);

  const NoncentralChiSquared family(3.0, 2.0);
  const ScalarFn cdf = [&](double t) { return family.cdf(t); };
  const ScalarFn pdf = [&](double t) { return family.pdf(t); };
  const ScalarDistribution dist = ScalarDistribution::noncentral_chi_squared(3.0, 2.0);
  const std::vector<std::size_t> ms = {1, 2, 5, 10, 100};

  const double t_hi = family.quantile(0.9999);
  constexpr std::size_t kGridPoints = 201;
  std::vector<double> grid(kGridPoints);
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    grid[i] = t_hi * static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
  }

  std::vector<EmpiricalCdf> mc;
  mc.reserve(ms.size());
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    mc.push_back(monte_carlo_min_distance(dist, ms[mi], trials, derive_seed(seed, mi)));
  }

  TheoryReport report;
  report.out_dir = out_dir;
  report.all_pass = true;
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    const std::size_t m = ms[mi];
    TheoryKsRow row;
    row.m = m;
    row.trials = trials;
    row.ks = ks_statistic(mc[mi], [&](double t) { return min_cdf_transform(cdf, m, t); });
    row.critical_99 = ks_critical_value_99(trials);
    row.pass = row.ks < row.critical_99;

    // Integrate the min-density over (0, T] with T far enough out that the
    // min of m draws exceeds it with probability ~1e-8: solve
    // (1 - F(T))^m = 1e-8 for T, so the quadrature interval and the spike of
    // the density stay comparable even for large m.
    const double p_hi = 1.0 - std::pow(1e-8, 1.0 / static_cast<double>(m));
    const double t_m = family.quantile(p_hi);
    row.pdf_integral = adaptive_simpson(
        [&](double t) { return min_pdf_transform(pdf, cdf, m, t); }, 0.0, t_m, 1e-9);

    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }

  {
    const std::string path = out_dir + "/min_cdf_curves.csv";
    std::ofstream out = open_out(path);
    out << "t";
    for (std::size_t m : ms) out << ",m" << m;
    out << "\n";
    for (double t : grid) {
      out << format_double(t);
      for (std::size_t m : ms) out << "," << format_double(min_cdf_transform(cdf, m, t));
      out << "\n";
    }
    finish_out(out, path);
  }
  {
    const std::string path = out_dir + "/mc_overlay.csv";
    std::ofstream out = open_out(path);
    out << "t";
    for (std::size_t m : ms) out << ",analytic_m" << m << ",empirical_m" << m;
    out << "\n";
    for (double t : grid) {
      out << format_double(t);
      for (std::size_t mi = 0; mi < ms.size(); ++mi) {
        out << "," << format_double(min_cdf_transform(cdf, ms[mi], t)) << ","
            << format_double(mc[mi](t));
      }
      out << "\n";
    }
    finish_out(out, path);
  }
  {
    const std::string path = out_dir + "/misalignment_gap.csv";
    std::ofstream out = open_out(path);
    out << "t";
    for (std::size_t m : ms) out << ",gap_m" << m;
    out << "\n";
    std::vector<std::vector<double>> gaps;
    for (std::size_t m : ms) gaps.push_back(misalignment_gap(cdf, m, grid));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << format_double(grid[i]);
      for (const auto& g : gaps) out << "," << format_double(g[i]);
      out << "\n";
    }
    finish_out(out, path);
  }
  {
    const std::string path = out_dir + "/ks.csv";
    std::ofstream out = open_out(path);
    out << "m,trials,ks_statistic,critical_99,pass,pdf_integral\n";
    for (const TheoryKsRow& row : report.rows) {
      out << row.m << "," << row.trials << "," << format_double(row.ks) << ","
          << format_double(row.critical_99) << "," << (row.pass ? "true" : "false") << ","
          << format_double(row.pdf_integral) << "\n";
    }
    finish_out(out, path);
  }
  return report;
}

void replot_run_dir(const std::string& run_dir) {
  const Tensor2 data = load_csv(run_dir + "/data.csv");
  const Tensor2 samples = load_csv(run_dir + "/samples.csv");
  const Tensor2 selected = load_csv(run_dir + "/selected.csv");
  Tensor2 latents(0, 0);
  const std::string latents_path = run_dir + "/latents.csv";
  const bool have_latents = fs::exists(latents_path);
  if (have_latents) latents = load_csv(latents_path);
  write_run_svgs(run_dir, data, samples, selected,
                 have_latents && latents.cols() == 2 ? &latents : nullptr);
}

CloudComparison compare_point_clouds(const Tensor2& real, const Tensor2& fake, std::size_t pr_k) {
  CloudComparison cmp;
  cmp.frechet = frechet_distance(fit_gaussian(real), fit_gaussian(fake));
  const PrecisionRecall pr = precision_recall(real, fake, pr_k);
  cmp.precision = pr.precision;
  cmp.recall = pr.recall;

  const DistanceMatrix dm = pairwise_distances(real, fake, DistanceKind::kEuclidean);
  for (std::size_t j = 0; j < fake.rows(); ++j) cmp.mean_fake_to_real += dm.min_over_data(j);
  cmp.mean_fake_to_real /= static_cast<double>(fake.rows());
  for (std::size_t i = 0; i < real.rows(); ++i) {
    double best = dm(i, 0);
    for (std::size_t j = 1; j < fake.rows(); ++j) best = std::min(best, dm(i, j));
    cmp.mean_real_to_fake += best;
  }
  cmp.mean_real_to_fake /= static_cast<double>(real.rows());
  return cmp;
}

}  // namespace rsimle
