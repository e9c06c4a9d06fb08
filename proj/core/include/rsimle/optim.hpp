#pragma once

#include <cstdint>
#include <vector>

#include "rsimle/net.hpp"
#include "rsimle/tensor.hpp"

namespace rsimle {

// First/second moment estimates for Adam, shaped like the network parameters.
struct AdamState {
  std::vector<Tensor2> m_weights, v_weights;
  std::vector<std::vector<double>> m_biases, v_biases;
  std::int64_t step = 0;

  static AdamState for_net(const GeneratorNet& net);
};

// One Adam update with beta1 = 0.9, beta2 = 0.999, eps = 1e-8 (the usual
// defaults, fixed here).  Mutates the network in place and advances `state`.
void adam_step(GeneratorNet& net, const Gradients& grads, AdamState& state, double lr);

}  // namespace rsimle
