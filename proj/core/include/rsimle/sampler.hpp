#pragma once

#include <cstdint>
#include <random>

#include "rsimle/net.hpp"
#include "rsimle/nn_index.hpp"
#include "rsimle/tensor.hpp"

namespace rsimle {

// Owns an RNG and hands out i.i.d. standard normal latent batches.  Two
// samplers built from the same seed produce identical streams.
class PriorSampler {
 public:
  PriorSampler(std::size_t latent_dim, std::uint64_t seed);

  std::size_t latent_dim() const noexcept { return latent_dim_; }

  // (count x latent_dim) batch of fresh draws; advances the stream.
  Tensor2 draw_gaussian(std::size_t count);

 private:
  std::size_t latent_dim_;
  std::mt19937_64 rng_;
};

// Outcome of a rejection-sampling pass.
struct RejectionBatch {
  Tensor2 accepted_latents;        // accepted x latent_dim
  std::size_t proposals_drawn = 0;
  std::size_t rounds = 0;
  double acceptance_rate = 0.0;    // accepted / proposals_drawn
  bool reached_target = false;
};

// Draws rounds of `target_count` latent proposals, pushes them through the
// network and keeps those whose generated sample is at least epsilon (plain
// Euclidean, measured in `space`) away from every data point.  Stops once
// target_count latents are accepted or max_rounds rounds are spent; a pass
// that accepts nothing at all throws DegenerateEpsilonError.  epsilon = 0
// accepts every proposal, so the first round already reaches the target.
RejectionBatch rejection_sample(PriorSampler& prior, const GeneratorNet& net, const Tensor2& data,
                                double epsilon, std::size_t target_count,
                                std::size_t max_rounds = 50,
                                const FilterSpace& space = FilterSpace::raw());

}  // namespace rsimle
