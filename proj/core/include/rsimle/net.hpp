#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rsimle/tensor.hpp"

namespace rsimle {

enum class Activation { kTanh, kRelu };

Activation activation_from_string(std::string_view name);
std::string_view to_string(Activation activation);

// Parameter gradients, one entry per affine layer, shaped like the network's
// weights and biases.
struct Gradients {
  std::vector<Tensor2> weights;
  std::vector<std::vector<double>> biases;
};

class GeneratorNet;

// Activations recorded by a forward pass, consumed exactly once by
// GeneratorNet::backward.  A tape remembers the revision of the network that
// wrote it; backward refuses tapes from a mutated or different network.
class GradientTape {
 public:
  bool recorded() const noexcept { return recorded_; }

 private:
  friend class GeneratorNet;
  std::vector<Tensor2> layer_inputs_;  // input batch to each affine layer
  std::uint64_t net_revision_ = 0;
  const GeneratorNet* net_ = nullptr;
  bool recorded_ = false;
};

// Fully-connected latent-to-data generator.  Hidden layers use the configured
// activation; the output layer is always linear.  Weights are initialized
// uniformly in +-sqrt(6 / (fan_in + fan_out)) per layer, biases at zero.
class GeneratorNet {
 public:
  // layer_dims lists every layer width, input first: {latent, hidden..., data}.
  GeneratorNet(std::vector<std::size_t> layer_dims, Activation activation, std::uint64_t seed);

  std::size_t latent_dim() const noexcept { return layer_dims_.front(); }
  std::size_t data_dim() const noexcept { return layer_dims_.back(); }
  std::size_t layer_count() const noexcept { return weights_.size(); }
  std::size_t parameter_count() const noexcept;
  Activation activation() const noexcept { return activation_; }
  const std::vector<std::size_t>& layer_dims() const noexcept { return layer_dims_; }

  // Plain forward pass; z_batch is (batch x latent_dim), result (batch x data_dim).
  Tensor2 forward(const Tensor2& z_batch) const;
  // Forward pass that records activations for a subsequent backward call.
  Tensor2 forward(const Tensor2& z_batch, GradientTape& tape) const;
  // Backpropagates d(loss)/d(output) through the taped pass.  Throws
  // std::logic_error if the tape is missing, from another network, or written
  // before the last parameter mutation.
  Gradients backward(const GradientTape& tape, const Tensor2& output_grad) const;

  // Weight k maps layer k to layer k+1 and is (layer_dims[k+1] x layer_dims[k]).
  const Tensor2& weight(std::size_t layer) const { return weights_.at(layer); }
  const std::vector<double>& bias(std::size_t layer) const { return biases_.at(layer); }

  // Mutable access bumps the revision stamp, invalidating existing tapes.
  Tensor2& mutable_weight(std::size_t layer);
  std::vector<double>& mutable_bias(std::size_t layer);
  std::uint64_t revision() const noexcept { return revision_; }

  Gradients zero_gradients() const;

 private:
  std::vector<std::size_t> layer_dims_;
  Activation activation_;
  std::vector<Tensor2> weights_;
  std::vector<std::vector<double>> biases_;
  std::uint64_t revision_ = 0;
};

}  // namespace rsimle
