#include <cmath>
#include <random>

#include "common.hpp"

namespace cvnn::networks {

namespace {

using cost_model::DeepSpec;
using cost_model::ShallowSpec;
using detail::require;

// Seeded initialization. Draw order is fixed so that identical (spec, seed)
// always produce identical parameters: per structure, complex values row-major
// with the real component drawn first.

class Init {
 public:
  explicit Init(std::uint64_t seed) : rng_(seed) {}

  ComplexScalar weight(double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    const double re = dist(rng_);
    const double im = dist(rng_);
    return {re, im};
  }

  ComplexScalar center() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const double re = dist(rng_);
    const double im = dist(rng_);
    return {re, im};
  }

  void fill_weights(Grid<ComplexScalar>& grid) {
    const double scale = std::pow(static_cast<double>(grid.cols()), -0.5);
    for (auto& value : grid.data()) {
      value = weight(scale);
    }
  }

  void fill_bias(std::vector<ComplexScalar>& bias, std::size_t fan_in) {
    const double scale = std::pow(static_cast<double>(fan_in), -0.5);
    for (auto& value : bias) {
      value = weight(scale);
    }
  }

  void fill_centers(Grid<ComplexScalar>& grid) {
    for (auto& value : grid.data()) {
      value = center();
    }
  }

 private:
  std::mt19937_64 rng_;
};

PerceptronState build_perceptron(std::uint64_t inputs,
                                 std::span<const std::uint64_t> layer_units, Init& init) {
  PerceptronState state;
  std::size_t fan_in = static_cast<std::size_t>(inputs);
  for (std::uint64_t units_u64 : layer_units) {
    const auto units = static_cast<std::size_t>(units_u64);
    PerceptronLayer layer;
    layer.weights = Grid<ComplexScalar>(units, fan_in);
    layer.bias.resize(units);
    init.fill_weights(layer.weights);
    init.fill_bias(layer.bias, fan_in);
    state.layers.push_back(std::move(layer));
    fan_in = units;
  }
  return state;
}

CrbfState build_crbf(const ShallowSpec& spec, Init& init) {
  CrbfState state;
  const auto inputs = static_cast<std::size_t>(spec.inputs);
  const auto neurons = static_cast<std::size_t>(spec.neurons);
  const auto outputs = static_cast<std::size_t>(spec.outputs);
  state.centers = Grid<ComplexScalar>(neurons, inputs);
  init.fill_centers(state.centers);
  state.width_sq.assign(neurons, 1.0);
  state.out_weights = Grid<ComplexScalar>(outputs, neurons);
  init.fill_weights(state.out_weights);
  state.out_bias.resize(outputs);
  init.fill_bias(state.out_bias, neurons);
  return state;
}

FcrbfState build_fcrbf(const ShallowSpec& spec, Init& init) {
  FcrbfState state;
  const auto inputs = static_cast<std::size_t>(spec.inputs);
  const auto neurons = static_cast<std::size_t>(spec.neurons);
  const auto outputs = static_cast<std::size_t>(spec.outputs);
  state.centers = Grid<ComplexScalar>(neurons, inputs);
  init.fill_centers(state.centers);
  state.dilation = Grid<ComplexScalar>(neurons, inputs);
  for (auto& value : state.dilation.data()) {
    value = {1.0, 0.0};
  }
  state.out_weights = Grid<ComplexScalar>(outputs, neurons);
  init.fill_weights(state.out_weights);
  state.out_bias.resize(outputs);
  init.fill_bias(state.out_bias, neurons);
  return state;
}

PtrbfState build_ptrbf(std::uint64_t inputs, std::span<const std::uint64_t> layer_units,
                       std::span<const std::uint64_t> bottlenecks, Init& init) {
  PtrbfState state;
  std::size_t in_dim = static_cast<std::size_t>(inputs);
  for (std::size_t l = 0; l < layer_units.size(); ++l) {
    const auto units = static_cast<std::size_t>(layer_units[l]);
    const auto out_dim = static_cast<std::size_t>(bottlenecks[l]);
    PtrbfLayer layer;
    layer.centers = Grid<ComplexScalar>(units, in_dim);
    init.fill_centers(layer.centers);
    layer.width_re_sq.assign(units, 1.0);
    layer.width_im_sq.assign(units, 1.0);
    layer.proj = Grid<ComplexScalar>(out_dim, units);
    init.fill_weights(layer.proj);
    layer.proj_bias.resize(out_dim);
    init.fill_bias(layer.proj_bias, units);
    state.layers.push_back(std::move(layer));
    in_dim = out_dim;
  }
  return state;
}

void flatten_complex(const Grid<ComplexScalar>& grid, std::vector<double>& out) {
  for (const auto& value : grid.data()) {
    out.push_back(value.re);
    out.push_back(value.im);
  }
}

void flatten_complex(const std::vector<ComplexScalar>& values, std::vector<double>& out) {
  for (const auto& value : values) {
    out.push_back(value.re);
    out.push_back(value.im);
  }
}

void flatten_real(const std::vector<double>& values, std::vector<double>& out) {
  out.insert(out.end(), values.begin(), values.end());
}

class Unflatten {
 public:
  explicit Unflatten(std::span<const double> flat) : flat_(flat) {}

  void read(Grid<ComplexScalar>& grid) {
    for (auto& value : grid.data()) {
      value.re = next();
      value.im = next();
    }
  }
  void read(std::vector<ComplexScalar>& values) {
    for (auto& value : values) {
      value.re = next();
      value.im = next();
    }
  }
  void read(std::vector<double>& values) {
    for (auto& value : values) {
      value = next();
    }
  }
  void finish() const {
    require(index_ == flat_.size(), "flat parameter vector has the wrong length");
  }

 private:
  double next() {
    require(index_ < flat_.size(), "flat parameter vector has the wrong length");
    return flat_[index_++];
  }

  std::span<const double> flat_;
  std::size_t index_{0};
};

}  // namespace

void TrainConfig::validate() const {
  const double rates[] = {weights_rate(), centers_rate(), widths_rate()};
  for (double rate : rates) {
    if (!std::isfinite(rate) || rate <= 0.0) {
      throw InvalidArgumentError("learning rates must be finite and positive");
    }
  }
}

std::size_t Network::input_size() const {
  return static_cast<std::size_t>(cost_model::spec_inputs(spec));
}

std::size_t Network::output_size() const {
  return static_cast<std::size_t>(cost_model::spec_outputs(spec));
}

std::vector<double> Network::parameters() const {
  std::vector<double> flat;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PerceptronState>) {
          for (const auto& layer : s.layers) {
            flatten_complex(layer.weights, flat);
            flatten_complex(layer.bias, flat);
          }
        } else if constexpr (std::is_same_v<T, CrbfState>) {
          flatten_complex(s.centers, flat);
          flatten_real(s.width_sq, flat);
          flatten_complex(s.out_weights, flat);
          flatten_complex(s.out_bias, flat);
        } else if constexpr (std::is_same_v<T, FcrbfState>) {
          flatten_complex(s.centers, flat);
          flatten_complex(s.dilation, flat);
          flatten_complex(s.out_weights, flat);
          flatten_complex(s.out_bias, flat);
        } else {
          for (const auto& layer : s.layers) {
            flatten_complex(layer.centers, flat);
            flatten_real(layer.width_re_sq, flat);
            flatten_real(layer.width_im_sq, flat);
            flatten_complex(layer.proj, flat);
            flatten_complex(layer.proj_bias, flat);
          }
        }
      },
      state);
  return flat;
}

void Network::set_parameters(std::span<const double> flat) {
  Unflatten reader(flat);
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PerceptronState>) {
          for (auto& layer : s.layers) {
            reader.read(layer.weights);
            reader.read(layer.bias);
          }
        } else if constexpr (std::is_same_v<T, CrbfState>) {
          reader.read(s.centers);
          reader.read(s.width_sq);
          reader.read(s.out_weights);
          reader.read(s.out_bias);
        } else if constexpr (std::is_same_v<T, FcrbfState>) {
          reader.read(s.centers);
          reader.read(s.dilation);
          reader.read(s.out_weights);
          reader.read(s.out_bias);
        } else {
          for (auto& layer : s.layers) {
            reader.read(layer.centers);
            reader.read(layer.width_re_sq);
            reader.read(layer.width_im_sq);
            reader.read(layer.proj);
            reader.read(layer.proj_bias);
          }
        }
      },
      state);
  reader.finish();
}

Network build(const AnySpec& spec, std::uint64_t seed) {
  cost_model::validate_spec(spec);
  Network net;
  net.arch = cost_model::spec_arch(spec);
  net.spec = spec;
  Init init(seed);

  if (std::holds_alternative<ShallowSpec>(spec)) {
    const ShallowSpec& shallow = std::get<ShallowSpec>(spec);
    switch (net.arch) {
      case ArchKind::CVFNN:
      case ArchKind::SCFNN:
      case ArchKind::MLMVN: {
        const std::uint64_t units[] = {shallow.neurons, shallow.outputs};
        net.state = build_perceptron(shallow.inputs, units, init);
        break;
      }
      case ArchKind::CRBF:
        net.state = build_crbf(shallow, init);
        break;
      case ArchKind::FCRBF:
        net.state = build_fcrbf(shallow, init);
        break;
      case ArchKind::PTRBF: {
        const std::uint64_t units[] = {shallow.neurons};
        const std::uint64_t bneck[] = {shallow.outputs};
        net.state = build_ptrbf(shallow.inputs, units, bneck, init);
        break;
      }
    }
    return net;
  }

  const auto& deep = std::get<DeepSpec>(spec);
  if (net.arch == ArchKind::PTRBF) {
    net.state = build_ptrbf(deep.inputs, deep.layer_units, deep.bottleneck_dims, init);
  } else {
    net.state = build_perceptron(deep.inputs, deep.layer_units, init);
  }
  return net;
}

std::vector<ComplexScalar> infer(const Network& net, std::span<const ComplexScalar> input,
                                 Meter& meter) {
  require(input.size() == net.input_size(), "input length must equal the spec input count");
  return std::visit(
      [&](const auto& s) -> std::vector<ComplexScalar> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PerceptronState>) {
          return detail::perceptron_infer(s, net.arch, input, meter);
        } else if constexpr (std::is_same_v<T, CrbfState>) {
          return detail::crbf_infer(s, input, meter);
        } else if constexpr (std::is_same_v<T, FcrbfState>) {
          return detail::fcrbf_infer(s, input, meter);
        } else {
          return detail::ptrbf_infer(s, input, meter);
        }
      },
      net.state);
}

double train_step(Network& net, std::span<const ComplexScalar> input,
                  std::span<const ComplexScalar> target, const TrainConfig& config,
                  Meter& meter) {
  require(input.size() == net.input_size(), "input length must equal the spec input count");
  require(target.size() == net.output_size(), "target length must equal the spec output count");
  config.validate();
  return std::visit(
      [&](auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PerceptronState>) {
          return detail::perceptron_train(s, net.arch, input, target, config, meter);
        } else if constexpr (std::is_same_v<T, CrbfState>) {
          return detail::crbf_train(s, input, target, config, meter);
        } else if constexpr (std::is_same_v<T, FcrbfState>) {
          return detail::fcrbf_train(s, input, target, config, meter);
        } else {
          return detail::ptrbf_train(s, input, target, config, meter);
        }
      },
      net.state);
}

ComplexScalar mvn_weighted_sum(const MvnNeuron& neuron, std::span<const ComplexScalar> inputs,
                               Meter& meter) {
  require(inputs.size() == neuron.weights.size(), "input length must match the weight count");
  numerics::PhaseGuard guard(meter, numerics::Phase::Forward);
  ComplexScalar acc = neuron.bias;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    acc += numerics::cmul(neuron.weights[i], inputs[i], meter);
  }
  return acc;
}

void mvn_correct(MvnNeuron& neuron, std::span<const ComplexScalar> inputs,
                 ComplexScalar desired, double eta, Meter& meter) {
  const ComplexScalar weighted_sum = mvn_weighted_sum(neuron, inputs, meter);
  const ComplexScalar delta = desired - weighted_sum;
  numerics::PhaseGuard guard(meter, numerics::Phase::ParameterUpdate);
  const double share = static_cast<double>(inputs.size() + 1);
  const double factor = numerics::div_real(eta, share, meter);
  const ComplexScalar correction = numerics::cscale(delta, factor, meter);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    neuron.weights[i] += numerics::cmul(correction, numerics::conj(inputs[i]), meter);
  }
  neuron.bias += correction;
}

}  // namespace cvnn::networks
