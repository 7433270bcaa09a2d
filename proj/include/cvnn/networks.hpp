#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <cvnn/cost_model.hpp>
#include <cvnn/grid.hpp>
#include <cvnn/numerics.hpp>

// Executable, metered implementations of the six architectures. Every real
// multiplication in this module goes through the cvnn::numerics kernels; the
// counter delta of infer() equals the inference closed form and the delta of
// train_step() equals the training closed form, as exact integers. The
// per-operation inventories live in docs/decompositions.md.
namespace cvnn::networks {

using cost_model::AnySpec;
using cost_model::ArchKind;
using numerics::ComplexScalar;
using numerics::Meter;

/// Step sizes for one online update. Center and width rates default to the
/// weight rate when unset.
struct TrainConfig {
  double learning_rate{0.05};
  std::optional<double> center_rate{};
  std::optional<double> width_rate{};

  [[nodiscard]] double weights_rate() const { return learning_rate; }
  [[nodiscard]] double centers_rate() const { return center_rate.value_or(learning_rate); }
  [[nodiscard]] double widths_rate() const { return width_rate.value_or(learning_rate); }
  void validate() const;  // all rates finite and > 0
};

// ---------------------------------------------------------------------------
// Parameter state
// ---------------------------------------------------------------------------

struct PerceptronLayer {
  Grid<ComplexScalar> weights;       // units x fan_in
  std::vector<ComplexScalar> bias;   // units
};

struct PerceptronState {
  std::vector<PerceptronLayer> layers;
};

struct CrbfState {
  Grid<ComplexScalar> centers;           // neurons x inputs
  std::vector<double> width_sq;          // neurons, strictly positive
  Grid<ComplexScalar> out_weights;       // outputs x neurons
  std::vector<ComplexScalar> out_bias;   // outputs
};

struct FcrbfState {
  Grid<ComplexScalar> centers;           // neurons x inputs
  Grid<ComplexScalar> dilation;          // neurons x inputs, complex widths
  Grid<ComplexScalar> out_weights;       // outputs x neurons
  std::vector<ComplexScalar> out_bias;   // outputs
};

struct PtrbfLayer {
  Grid<ComplexScalar> centers;           // units x in_dim
  std::vector<double> width_re_sq;       // units, strictly positive
  std::vector<double> width_im_sq;       // units, strictly positive
  Grid<ComplexScalar> proj;              // out_dim x units, bottleneck projection
  std::vector<ComplexScalar> proj_bias;  // out_dim
};

struct PtrbfState {
  std::vector<PtrbfLayer> layers;
};

/// One architecture instance: spec plus parameters. Single-owner mutable state
/// together with its Meter; independent networks may run concurrently.
struct Network {
  ArchKind arch{ArchKind::CVFNN};
  AnySpec spec{};
  std::variant<PerceptronState, CrbfState, FcrbfState, PtrbfState> state{};

  [[nodiscard]] std::size_t input_size() const;
  [[nodiscard]] std::size_t output_size() const;

  /// Flat view of every trainable parameter, complex values as re,im pairs,
  /// in a fixed documented order. Round-trips with set_parameters.
  [[nodiscard]] std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Deterministic seeded initialization: complex weights uniform scaled by
/// fan_in^(-1/2), centers uniform in the unit square per component, widths 1.
[[nodiscard]] Network build(const AnySpec& spec, std::uint64_t seed);

/// One forward pass under Phase::Forward. The metered delta equals the
/// inference closed form for the network's spec.
[[nodiscard]] std::vector<ComplexScalar> infer(const Network& net,
                                               std::span<const ComplexScalar> input,
                                               Meter& meter);

/// One online update (forward, backward, parameter update). Returns the loss
/// at the pre-update parameters: half squared error, or the mean angular error
/// for MLMVN. The metered delta equals the training closed form and its
/// Forward share equals the inference closed form.
double train_step(Network& net, std::span<const ComplexScalar> input,
                  std::span<const ComplexScalar> target, const TrainConfig& config,
                  Meter& meter);

// ---------------------------------------------------------------------------
// Single multi-valued neuron with the derivative-free correction rule
// ---------------------------------------------------------------------------

struct MvnNeuron {
  std::vector<ComplexScalar> weights;
  ComplexScalar bias{};
};

[[nodiscard]] ComplexScalar mvn_weighted_sum(const MvnNeuron& neuron,
                                             std::span<const ComplexScalar> inputs,
                                             Meter& meter);

/// w_i += (eta over (n+1)) * (desired - z) * conj(x_i), bias treated as the
/// weight of a constant input 1. With eta = 1 and all inputs on the unit
/// circle the corrected weighted sum equals `desired` exactly.
void mvn_correct(MvnNeuron& neuron, std::span<const ComplexScalar> inputs,
                 ComplexScalar desired, double eta, Meter& meter);

}  // namespace cvnn::networks
