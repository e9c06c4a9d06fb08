#include "rsimle/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsimle {

namespace {
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
}  // namespace

AdamState AdamState::for_net(const GeneratorNet& net) {
  AdamState s;
  Gradients shape = net.zero_gradients();
  s.m_weights = shape.weights;
  s.v_weights = shape.weights;
  s.m_biases = shape.biases;
  s.v_biases = shape.biases;
  return s;
}

void adam_step(GeneratorNet& net, const Gradients& grads, AdamState& state, double lr) {
  if (grads.weights.size() != net.layer_count() || grads.biases.size() != net.layer_count() ||
      state.m_weights.size() != net.layer_count()) {
    throw std::invalid_argument("adam_step: gradient/state layer count mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));

  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    const Tensor2& gw = grads.weights[k];
    Tensor2& w = net.mutable_weight(k);
    if (gw.rows() != w.rows() || gw.cols() != w.cols()) {
      throw std::invalid_argument("adam_step: weight gradient shape mismatch at layer " +
                                  std::to_string(k));
    }
    Tensor2& mw = state.m_weights[k];
    Tensor2& vw = state.v_weights[k];
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      const double g = gw.data()[idx];
      double& m = mw.data()[idx];
      double& v = vw.data()[idx];
      m = kBeta1 * m + (1.0 - kBeta1) * g;
      v = kBeta2 * v + (1.0 - kBeta2) * g * g;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      w.data()[idx] -= lr * m_hat / (std::sqrt(v_hat) + kEps);
    }

    const std::vector<double>& gb = grads.biases[k];
    std::vector<double>& b = net.mutable_bias(k);
    if (gb.size() != b.size()) {
      throw std::invalid_argument("adam_step: bias gradient shape mismatch at layer " +
                                  std::to_string(k));
    }
    std::vector<double>& mb = state.m_biases[k];
    std::vector<double>& vb = state.v_biases[k];
    for (std::size_t idx = 0; idx < b.size(); ++idx) {
      const double g = gb[idx];
      mb[idx] = kBeta1 * mb[idx] + (1.0 - kBeta1) * g;
      vb[idx] = kBeta2 * vb[idx] + (1.0 - kBeta2) * g * g;
      const double m_hat = mb[idx] / bc1;
      const double v_hat = vb[idx] / bc2;
      b[idx] -= lr * m_hat / (std::sqrt(v_hat) + kEps);
    }
  }
}

}  // namespace rsimle
