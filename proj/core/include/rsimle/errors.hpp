#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsimle {

// Invalid or inconsistent user-facing configuration (bad field values,
// malformed config/CSV input).  Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampling made no progress: after the round budget was exhausted
// not a single proposal survived the epsilon filter.  Carries the observed
// acceptance rate so the caller can report how tight the threshold was.
// Maps to exit code 3 in the CLI.
class DegenerateEpsilonError : public std::runtime_error {
 public:
  DegenerateEpsilonError(double epsilon, double observed_rate, std::size_t proposals)
      : std::runtime_error("rejection sampling accepted 0 of " + std::to_string(proposals) +
                           " proposals at epsilon=" + std::to_string(epsilon) +
                           " (acceptance rate " + std::to_string(observed_rate) +
                           "); lower epsilon or raise the round budget"),
        epsilon(epsilon),
        observed_acceptance_rate(observed_rate),
        proposals_drawn(proposals) {}

  double epsilon;
  double observed_acceptance_rate;
  std::size_t proposals_drawn;
};

// Nearest-neighbour assignment was asked to select from an empty accepted
// set; the caller has to resample before assigning.
class EmptyAcceptedSetError : public std::runtime_error {
 public:
  EmptyAcceptedSetError()
      : std::runtime_error("accepted sample set is empty; resample before assigning") {}
};

}  // namespace rsimle
