#include "rsimle/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "rsimle/errors.hpp"
#include "rsimle/rng.hpp"

namespace rsimle {

Objective objective_from_string(std::string_view name) {
  if (name == "imle") return Objective::kImle;
  if (name == "rs-imle" || name == "rs_imle") return Objective::kRsImle;
  throw ConfigError("unknown objective '" + std::string(name) + "' (want imle or rs-imle)");
}

std::string_view to_string(Objective objective) {
  return objective == Objective::kImle ? "imle" : "rs-imle";
}

void TrainerConfig::validate(std::size_t n_points, std::size_t data_dim) const {
  if (n_points == 0) throw ConfigError("trainer: dataset is empty");
  if (data_dim == 0) throw ConfigError("trainer: dataset has zero width");
  if (sample_factor == 0) {
    throw ConfigError("trainer.sample_factor must be >= 1 so each epoch draws at least as many "
                      "latents as there are data points");
  }
  if (inner_steps == 0) throw ConfigError("trainer.inner_steps must be >= 1");
  if (batch_size > n_points) {
    throw ConfigError("trainer.batch_size " + std::to_string(batch_size) + " exceeds dataset size " +
                      std::to_string(n_points));
  }
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("trainer.lr must be positive and finite");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("trainer.epsilon must be >= 0 and finite");
  }
  if (latent_dim == 0) throw ConfigError("trainer.latent_dim must be >= 1");
  if (max_rounds == 0) throw ConfigError("trainer.max_rounds must be >= 1");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw ConfigError("trainer.hidden_dims entries must be >= 1");
  }
}

namespace {

// Seed streams carved out of the user seed; keeping them distinct means the
// network init does not shift when e.g. the prior is consumed differently.
enum SeedStream : std::uint64_t { kNetInit = 0, kPrior = 1, kBatch = 2, kProjection = 3 };

std::vector<std::size_t> build_layer_dims(const TrainerConfig& cfg, std::size_t data_dim) {
  std::vector<std::size_t> dims;
  dims.reserve(cfg.hidden_dims.size() + 2);
  dims.push_back(cfg.latent_dim);
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(data_dim);
  return dims;
}

// Validates the config before any member construction can trip over it.
GeneratorNet make_net(const TrainerConfig& cfg, const Tensor2& data) {
  cfg.validate(data.rows(), data.cols());
  return GeneratorNet(build_layer_dims(cfg, data.cols()), cfg.activation,
                      derive_seed(cfg.seed, kNetInit));
}

}  // namespace

Trainer::Trainer(TrainerConfig config, Tensor2 data)
    : cfg_(std::move(config)),
      data_(std::move(data)),
      net_(make_net(cfg_, data_)),
      opt_(AdamState::for_net(net_)),
      prior_(cfg_.latent_dim, derive_seed(cfg_.seed, kPrior)),
      batch_rng_(derive_seed(cfg_.seed, kBatch)),
      space_(FilterSpace::for_dims(data_.cols(), cfg_.projected_dim,
                                   derive_seed(cfg_.seed, kProjection))),
      mapped_data_(space_.map(data_)) {
  data_.ensure_finite("Trainer data");
}

TrainRecord Trainer::run_epoch() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = cfg_.sample_factor * data_.rows();

  TrainRecord record;
  if (cfg_.objective == Objective::kRsImle) {
    RejectionBatch batch =
        rejection_sample(prior_, net_, data_, cfg_.epsilon, m, cfg_.max_rounds, space_);
    record = epoch_with_latents(std::move(batch.accepted_latents), batch.acceptance_rate);
  } else {
    record = epoch_with_latents(prior_.draw_gaussian(m), 1.0);
  }
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

TrainRecord Trainer::epoch_with_latents(Tensor2 latents, double acceptance_rate) {
  const std::size_t n = data_.rows();

  // Freeze the assignment for this epoch: nearest accepted sample per data
  // point, measured in the filter space.
  const Tensor2 samples = net_.forward(latents);
  const Tensor2 mapped_samples = space_.map(samples);
  const DistanceMatrix dm =
      pairwise_distances(mapped_data_, mapped_samples, DistanceKind::kSquaredEuclidean);
  std::vector<std::size_t> all(dm.sample_count());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const AssignmentResult assign = assign_nearest(dm, all);

  TrainRecord record;
  record.epoch = epoch_;
  record.acceptance_rate = acceptance_rate;
  record.selected_dist.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    record.selected_dist[i] = std::sqrt(assign.dist[i]);
  }
  record.selected_latents = gather_rows(latents, assign.sigma);

  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loss += squared_distance(data_.row(i), samples.row(assign.sigma[i]));
  }
  record.mean_loss = loss / static_cast<double>(n);

  // Inner optimisation against the frozen pairing.
  const std::size_t batch_size = cfg_.batch_size == 0 ? n : cfg_.batch_size;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t step = 0; step < cfg_.inner_steps; ++step) {
    shuffle_indices(order, batch_rng_);
    const std::span<const std::size_t> batch(order.data(), batch_size);
    const Tensor2 z_batch = gather_rows(record.selected_latents, batch);
    const Tensor2 x_batch = gather_rows(data_, batch);

    GradientTape tape;
    const Tensor2 y = net_.forward(z_batch, tape);
    Tensor2 grad(batch_size, data_.cols());
    const double scale = 2.0 / static_cast<double>(batch_size);
    for (std::size_t r = 0; r < batch_size; ++r) {
      auto yr = y.row(r);
      auto xr = x_batch.row(r);
      auto gr = grad.row(r);
      for (std::size_t c = 0; c < gr.size(); ++c) gr[c] = scale * (yr[c] - xr[c]);
    }
    const Gradients grads = net_.backward(tape, grad);
    adam_step(net_, grads, opt_, cfg_.lr);
  }

  ++epoch_;
  return record;
}

std::vector<TrainRecord> Trainer::run() {
  std::vector<TrainRecord> records;
  records.reserve(cfg_.epochs);
  for (std::size_t e = 0; e < cfg_.epochs; ++e) {
    records.push_back(run_epoch());
  }
  return records;
}

TestTimeEval evaluate_test_time(const GeneratorNet& net, const Tensor2& data,
                                std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("evaluate_test_time: n_samples must be positive");
  PriorSampler prior(net.latent_dim(), seed);
  const Tensor2 samples = net.forward(prior.draw_gaussian(n_samples));
  const DistanceMatrix dm = pairwise_distances(data, samples, DistanceKind::kEuclidean);

  TestTimeEval eval;
  eval.samples = samples;
  eval.sample_to_data.resize(samples.rows());
  for (std::size_t j = 0; j < samples.rows(); ++j) {
    eval.sample_to_data[j] = dm.min_over_data(j);
    eval.mean_sample_to_data += dm.min_over_data(j);
  }
  eval.mean_sample_to_data /= static_cast<double>(samples.rows());

  eval.data_to_sample.resize(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    double best = dm(i, 0);
    for (std::size_t j = 1; j < samples.rows(); ++j) best = std::min(best, dm(i, j));
    eval.data_to_sample[i] = best;
    eval.mean_data_to_sample += best;
  }
  eval.mean_data_to_sample /= static_cast<double>(data.rows());
  return eval;
}

}  // namespace rsimle
