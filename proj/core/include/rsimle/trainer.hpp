#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "rsimle/net.hpp"
#include "rsimle/nn_index.hpp"
#include "rsimle/optim.hpp"
#include "rsimle/sampler.hpp"
#include "rsimle/tensor.hpp"

namespace rsimle {

// Which latent pool feeds the per-epoch assignment: every prior draw, or
// only draws whose sample clears the epsilon margin around the data.
enum class Objective { kImle, kRsImle };

Objective objective_from_string(std::string_view name);
std::string_view to_string(Objective objective);

struct TrainerConfig {
  Objective objective = Objective::kImle;
  double epsilon = 0.0;          // plain Euclidean margin, used by kRsImle
  std::size_t sample_factor = 10;  // latents per epoch = sample_factor * n
  std::size_t epochs = 2000;
  std::size_t inner_steps = 10;
  std::size_t batch_size = 0;    // 0 = full batch
  double lr = 1e-3;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 50;   // rejection round budget per epoch
  std::size_t latent_dim = 2;
  std::vector<std::size_t> hidden_dims = {32, 32};
  Activation activation = Activation::kTanh;
  std::size_t projected_dim = 0;  // 0 or >= data dim: filter in raw data space

  // Structural checks against a concrete dataset.  Throws ConfigError.
  // Whether epsilon fits the objective is the config front end's business,
  // so library code can still drive the rs path at epsilon = 0.
  void validate(std::size_t n_points, std::size_t data_dim) const;
};

// One epoch's outcome.  selected_dist holds the realised nearest-neighbour
// distance per data point, plain Euclidean, measured in the filter space --
// the same units as epsilon, so the rejection guarantee is checkable:
// min_i selected_dist[i] >= epsilon on every rs epoch.
struct TrainRecord {
  std::size_t epoch = 0;
  std::vector<double> selected_dist;
  Tensor2 selected_latents;  // n x latent_dim
  double mean_loss = 0.0;    // mean squared Euclidean distance in data space, at selection
  double acceptance_rate = 1.0;
  double wall_seconds = 0.0;
};

class Trainer {
 public:
  Trainer(TrainerConfig config, Tensor2 data);

  // One epoch: draw (and for rs filter) latents, freeze the nearest-sample
  // assignment, then take inner_steps gradient steps against it.
  TrainRecord run_epoch();
  std::vector<TrainRecord> run();

  const GeneratorNet& net() const noexcept { return net_; }
  const TrainerConfig& config() const noexcept { return cfg_; }
  const Tensor2& data() const noexcept { return data_; }
  std::size_t epochs_completed() const noexcept { return epoch_; }
  const FilterSpace& filter_space() const noexcept { return space_; }

 private:
  TrainerConfig cfg_;
  Tensor2 data_;
  GeneratorNet net_;
  AdamState opt_;
  PriorSampler prior_;
  std::mt19937_64 batch_rng_;
  FilterSpace space_;
  Tensor2 mapped_data_;  // data_ mapped into the filter space, fixed
  std::size_t epoch_ = 0;

  TrainRecord epoch_with_latents(Tensor2 latents, double acceptance_rate);
};

// Fresh unfiltered prior samples pushed through the network, scored against
// the data from both directions (plain Euclidean, data space).
struct TestTimeEval {
  Tensor2 samples;                     // n_samples x data_dim
  std::vector<double> sample_to_data;  // per sample: distance to nearest data point
  std::vector<double> data_to_sample;  // per data point: distance to nearest sample
  double mean_sample_to_data = 0.0;
  double mean_data_to_sample = 0.0;
};

TestTimeEval evaluate_test_time(const GeneratorNet& net, const Tensor2& data,
                                std::size_t n_samples, std::uint64_t seed);

}  // namespace rsimle
