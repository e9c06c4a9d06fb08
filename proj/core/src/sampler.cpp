#include "rsimle/sampler.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsimle/errors.hpp"
#include "rsimle/rng.hpp"

namespace rsimle {

PriorSampler::PriorSampler(std::size_t latent_dim, std::uint64_t seed)
    : latent_dim_(latent_dim), rng_(seed) {
  if (latent_dim == 0) throw std::invalid_argument("PriorSampler: latent_dim must be positive");
}

Tensor2 PriorSampler::draw_gaussian(std::size_t count) {
  if (count == 0) throw std::invalid_argument("PriorSampler::draw_gaussian: count must be positive");
  Tensor2 out(count, latent_dim_);
  for (std::size_t r = 0; r < count; ++r) {
    for (double& v : out.row(r)) v = standard_normal(rng_);
  }
  return out;
}

RejectionBatch rejection_sample(PriorSampler& prior, const GeneratorNet& net, const Tensor2& data,
                                double epsilon, std::size_t target_count, std::size_t max_rounds,
                                const FilterSpace& space) {
  if (target_count == 0) {
    throw std::invalid_argument("rejection_sample: target_count must be positive");
  }
  if (max_rounds == 0) {
    throw std::invalid_argument("rejection_sample: max_rounds must be positive");
  }
  if (prior.latent_dim() != net.latent_dim()) {
    throw std::invalid_argument("rejection_sample: prior/net latent dimension mismatch");
  }

  const Tensor2 mapped_data = space.map(data);

  RejectionBatch batch;
  std::vector<double> kept;  // accepted latent rows, flattened; capped at target_count
  std::size_t kept_rows = 0;
  std::size_t accepted_total = 0;  // acceptances before the cap, for the rate

  while (batch.rounds < max_rounds && kept_rows < target_count) {
    batch.rounds += 1;
    Tensor2 z = prior.draw_gaussian(target_count);
    batch.proposals_drawn += target_count;

    Tensor2 mapped = space.map(net.forward(z));
    DistanceMatrix dm = pairwise_distances(mapped_data, mapped, DistanceKind::kSquaredEuclidean);
    for (std::size_t j : filter_by_epsilon(dm, epsilon)) {
      ++accepted_total;
      if (kept_rows == target_count) continue;
      auto row = z.row(j);
      kept.insert(kept.end(), row.begin(), row.end());
      ++kept_rows;
    }
  }

  if (kept_rows == 0) {
    throw DegenerateEpsilonError(epsilon, 0.0, batch.proposals_drawn);
  }

  Tensor2 latents(kept_rows, prior.latent_dim());
  std::copy(kept.begin(), kept.end(), latents.data());
  batch.accepted_latents = std::move(latents);
  batch.acceptance_rate =
      static_cast<double>(accepted_total) / static_cast<double>(batch.proposals_drawn);
  batch.reached_target = kept_rows == target_count;
  return batch;
}

}  // namespace rsimle
