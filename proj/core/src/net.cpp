#include "rsimle/net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "rsimle/rng.hpp"

namespace rsimle {

Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "' (want tanh or relu)");
}

std::string_view to_string(Activation activation) {
  return activation == Activation::kTanh ? "tanh" : "relu";
}

GeneratorNet::GeneratorNet(std::vector<std::size_t> layer_dims, Activation activation,
                           std::uint64_t seed)
    : layer_dims_(std::move(layer_dims)), activation_(activation) {
  if (layer_dims_.size() < 2) {
    throw std::invalid_argument("GeneratorNet: need at least an input and an output layer");
  }
  for (std::size_t d : layer_dims_) {
    if (d == 0) throw std::invalid_argument("GeneratorNet: zero-width layer");
  }

  std::mt19937_64 rng(seed);
  weights_.reserve(layer_dims_.size() - 1);
  biases_.reserve(layer_dims_.size() - 1);
  for (std::size_t k = 0; k + 1 < layer_dims_.size(); ++k) {
    const std::size_t fan_in = layer_dims_[k];
    const std::size_t fan_out = layer_dims_[k + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor2 w(fan_out, fan_in);
    for (std::size_t r = 0; r < fan_out; ++r) {
      for (std::size_t c = 0; c < fan_in; ++c) {
        w(r, c) = (2.0 * uniform_unit(rng) - 1.0) * limit;
      }
    }
    weights_.push_back(std::move(w));
    biases_.emplace_back(fan_out, 0.0);
  }
}

std::size_t GeneratorNet::parameter_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    n += weights_[k].size() + biases_[k].size();
  }
  return n;
}

namespace {

double activate(Activation a, double x) {
  return a == Activation::kTanh ? std::tanh(x) : (x > 0.0 ? x : 0.0);
}

// Derivative of the activation, expressed through the activated value h.
// tanh' = 1 - h^2; relu' = [h > 0] (zero at the kink).
double activate_grad_from_output(Activation a, double h) {
  return a == Activation::kTanh ? 1.0 - h * h : (h > 0.0 ? 1.0 : 0.0);
}

}  // namespace

Tensor2 GeneratorNet::forward(const Tensor2& z_batch) const {
  GradientTape scratch;
  return forward(z_batch, scratch);
}

Tensor2 GeneratorNet::forward(const Tensor2& z_batch, GradientTape& tape) const {
  if (z_batch.cols() != latent_dim()) {
    throw std::invalid_argument("GeneratorNet::forward: input has " +
                                std::to_string(z_batch.cols()) + " columns, expected " +
                                std::to_string(latent_dim()));
  }
  z_batch.ensure_finite("GeneratorNet::forward input");

  tape.layer_inputs_.clear();
  tape.layer_inputs_.reserve(layer_count());
  const std::size_t batch = z_batch.rows();

  Tensor2 h = z_batch;
  for (std::size_t k = 0; k < layer_count(); ++k) {
    const Tensor2& w = weights_[k];
    const std::vector<double>& b = biases_[k];
    const bool last = (k + 1 == layer_count());

    Tensor2 a(batch, w.rows());
    for (std::size_t r = 0; r < batch; ++r) {
      auto in = h.row(r);
      auto out = a.row(r);
      for (std::size_t o = 0; o < w.rows(); ++o) {
        double acc = b[o];
        auto wrow = w.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) acc += wrow[i] * in[i];
        out[o] = acc;
      }
    }
    if (!last) {
      for (std::size_t r = 0; r < batch; ++r) {
        for (double& v : a.row(r)) v = activate(activation_, v);
      }
    }
    tape.layer_inputs_.push_back(std::move(h));
    h = std::move(a);
  }
  h.ensure_finite("GeneratorNet::forward output");

  tape.net_revision_ = revision_;
  tape.net_ = this;
  tape.recorded_ = true;
  return h;
}

Gradients GeneratorNet::backward(const GradientTape& tape, const Tensor2& output_grad) const {
  if (!tape.recorded_ || tape.net_ != this) {
    throw std::logic_error("GeneratorNet::backward: tape was not recorded by this network");
  }
  if (tape.net_revision_ != revision_) {
    throw std::logic_error(
        "GeneratorNet::backward: stale tape (parameters changed since the forward pass)");
  }
  const std::size_t batch = tape.layer_inputs_.front().rows();
  if (output_grad.rows() != batch || output_grad.cols() != data_dim()) {
    throw std::invalid_argument("GeneratorNet::backward: output_grad shape mismatch");
  }

  Gradients grads = zero_gradients();
  // g holds d(loss)/d(pre-activation of layer k); for the linear output layer
  // that is just output_grad.
  Tensor2 g = output_grad;
  for (std::size_t k = layer_count(); k-- > 0;) {
    const Tensor2& input = tape.layer_inputs_[k];
    const bool last = (k + 1 == layer_count());
    if (!last) {
      // The activated output of layer k is the recorded input of layer k+1.
      const Tensor2& h = tape.layer_inputs_[k + 1];
      for (std::size_t r = 0; r < batch; ++r) {
        auto grow = g.row(r);
        auto hrow = h.row(r);
        for (std::size_t o = 0; o < grow.size(); ++o) {
          grow[o] *= activate_grad_from_output(activation_, hrow[o]);
        }
      }
    }

    Tensor2& dw = grads.weights[k];
    std::vector<double>& db = grads.biases[k];
    for (std::size_t r = 0; r < batch; ++r) {
      auto grow = g.row(r);
      auto in = input.row(r);
      for (std::size_t o = 0; o < grow.size(); ++o) {
        db[o] += grow[o];
        auto dwrow = dw.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) dwrow[i] += grow[o] * in[i];
      }
    }

    if (k > 0) {
      const Tensor2& w = weights_[k];
      Tensor2 g_prev(batch, w.cols());
      for (std::size_t r = 0; r < batch; ++r) {
        auto grow = g.row(r);
        auto prev = g_prev.row(r);
        for (std::size_t o = 0; o < grow.size(); ++o) {
          auto wrow = w.row(o);
          for (std::size_t i = 0; i < prev.size(); ++i) prev[i] += grow[o] * wrow[i];
        }
      }
      g = std::move(g_prev);
    }
  }
  return grads;
}

Tensor2& GeneratorNet::mutable_weight(std::size_t layer) {
  ++revision_;
  return weights_.at(layer);
}

std::vector<double>& GeneratorNet::mutable_bias(std::size_t layer) {
  ++revision_;
  return biases_.at(layer);
}

Gradients GeneratorNet::zero_gradients() const {
  Gradients g;
  g.weights.reserve(layer_count());
  g.biases.reserve(layer_count());
  for (std::size_t k = 0; k < layer_count(); ++k) {
    g.weights.emplace_back(weights_[k].rows(), weights_[k].cols());
    g.biases.emplace_back(biases_[k].size(), 0.0);
  }
  return g;
}

}  // namespace rsimle
