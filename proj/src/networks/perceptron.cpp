#include <algorithm>
#include <cmath>

#include "common.hpp"

// CVFNN, SCFNN and MLMVN share the layer structure and differ in activation
// and backward rule. Delta convention throughout: delta(u) is the negated
// loss gradient with respect to u's components, so updates always read
// parameter += rate applied to delta times conj(layer input).
namespace cvnn::networks::detail {

namespace {

constexpr double kMagnitudeFloor = 1e-30;

struct ForwardTrace {
  std::vector<std::vector<ComplexScalar>> layer_inputs;
  std::vector<std::vector<ComplexScalar>> pre;
  std::vector<std::vector<ComplexScalar>> post;
};

ComplexScalar activate(ArchKind arch, ComplexScalar z, Meter& meter) {
  switch (arch) {
    case ArchKind::CVFNN:
      return numerics::act::complex_tanh(z);
    case ArchKind::SCFNN:
      return {numerics::act::real_tanh(z.re), numerics::act::real_tanh(z.im)};
    default: {
      // Unit-circle projection; the only activation with arithmetic cost
      // (squared magnitude plus two real divisions).
      const double mag_sq = numerics::sqmag(z, meter);
      const double mag = std::max(std::sqrt(mag_sq), kMagnitudeFloor);
      return {numerics::div_real(z.re, mag, meter), numerics::div_real(z.im, mag, meter)};
    }
  }
}

std::vector<ComplexScalar> run_forward(const PerceptronState& state, ArchKind arch,
                                       std::span<const ComplexScalar> input, Meter& meter,
                                       ForwardTrace& trace) {
  PhaseGuard guard(meter, Phase::Forward);
  const std::size_t layer_count = state.layers.size();
  trace.layer_inputs.assign(layer_count, {});
  trace.pre.assign(layer_count, {});
  trace.post.assign(layer_count, {});

  std::vector<ComplexScalar> current(input.begin(), input.end());
  for (std::size_t l = 0; l < layer_count; ++l) {
    const PerceptronLayer& layer = state.layers[l];
    const std::size_t units = layer.bias.size();
    const std::size_t fan_in = layer.weights.cols();
    trace.layer_inputs[l] = current;
    trace.pre[l].resize(units);
    trace.post[l].resize(units);
    for (std::size_t i = 0; i < units; ++i) {
      ComplexScalar acc = layer.bias[i];
      for (std::size_t j = 0; j < fan_in; ++j) {
        acc += numerics::cmul(layer.weights.at(i, j), current[j], meter);
      }
      trace.pre[l][i] = acc;
      trace.post[l][i] = activate(arch, acc, meter);
    }
    current = trace.post[l];
  }
  return current;
}

/// Gradient-family delta: upstream is the output error at the last layer and
/// the backpropagated sum elsewhere.
ComplexScalar gradient_delta(ArchKind arch, ComplexScalar upstream, ComplexScalar activated,
                             Meter& meter) {
  if (arch == ArchKind::CVFNN) {
    const ComplexScalar f_sq = numerics::cmul(activated, activated, meter);
    const ComplexScalar derivative{1.0 - f_sq.re, -f_sq.im};
    return numerics::cmul(upstream, numerics::conj(derivative), meter);
  }
  // Split tanh: components handled independently.
  const double re_sq = numerics::rmul(activated.re, activated.re, meter);
  const double im_sq = numerics::rmul(activated.im, activated.im, meter);
  return {numerics::rmul(upstream.re, 1.0 - re_sq, meter),
          numerics::rmul(upstream.im, 1.0 - im_sq, meter)};
}

}  // namespace

std::vector<ComplexScalar> perceptron_infer(const PerceptronState& state, ArchKind arch,
                                            std::span<const ComplexScalar> input, Meter& meter) {
  ForwardTrace trace;
  return run_forward(state, arch, input, meter, trace);
}

double perceptron_train(PerceptronState& state, ArchKind arch,
                        std::span<const ComplexScalar> input,
                        std::span<const ComplexScalar> target, const TrainConfig& config,
                        Meter& meter) {
  ForwardTrace trace;
  const std::vector<ComplexScalar> output = run_forward(state, arch, input, meter, trace);

  const double loss = arch == ArchKind::MLMVN
                          ? numerics::observe::mean_angular_error(target, output)
                          : numerics::observe::half_squared_error(target, output);
  if (!std::isfinite(loss)) {
    throw InvalidArgumentError("training loss is not finite");
  }

  const std::size_t layer_count = state.layers.size();
  std::vector<std::vector<ComplexScalar>> deltas(layer_count);
  std::vector<std::vector<double>> pre_mags(layer_count);  // MLMVN only

  {
    PhaseGuard guard(meter, Phase::BackwardDelta);
    for (std::size_t step = 0; step < layer_count; ++step) {
      const std::size_t l = layer_count - 1 - step;
      const std::size_t units = state.layers[l].bias.size();
      deltas[l].resize(units);
      if (arch == ArchKind::MLMVN) {
        pre_mags[l].resize(units);
      }
      for (std::size_t i = 0; i < units; ++i) {
        ComplexScalar upstream;
        if (l + 1 == layer_count) {
          upstream = target[i] - output[i];
        } else {
          const PerceptronLayer& next = state.layers[l + 1];
          ComplexScalar acc{};
          for (std::size_t k = 0; k < next.bias.size(); ++k) {
            acc += numerics::cmul(numerics::conj(next.weights.at(k, i)), deltas[l + 1][k], meter);
          }
          upstream = acc;
        }
        if (arch != ArchKind::MLMVN) {
          deltas[l][i] = gradient_delta(arch, upstream, trace.post[l][i], meter);
          continue;
        }
        // Derivative-free rule: cache the pre-activation magnitude; hidden
        // errors are shared backward divided by fan_in + 1 and by that
        // magnitude, the output error is used as-is.
        const double mag_sq = numerics::sqmag(trace.pre[l][i], meter);
        const double mag = std::max(std::sqrt(mag_sq), kMagnitudeFloor);
        pre_mags[l][i] = mag;
        if (l + 1 == layer_count) {
          deltas[l][i] = upstream;
        } else {
          const double share = static_cast<double>(state.layers[l].weights.cols() + 1);
          const double shared_re = numerics::div_real(upstream.re, share, meter);
          const double shared_im = numerics::div_real(upstream.im, share, meter);
          deltas[l][i] = {numerics::div_real(shared_re, mag, meter),
                          numerics::div_real(shared_im, mag, meter)};
        }
      }
    }
  }

  {
    PhaseGuard guard(meter, Phase::ParameterUpdate);
    const double rate = config.weights_rate();
    for (std::size_t l = 0; l < layer_count; ++l) {
      PerceptronLayer& layer = state.layers[l];
      const std::vector<ComplexScalar>& layer_input = trace.layer_inputs[l];
      const std::size_t units = layer.bias.size();
      const std::size_t fan_in = layer.weights.cols();
      const bool output_layer = l + 1 == layer_count;
      for (std::size_t i = 0; i < units; ++i) {
        const ComplexScalar delta = deltas[l][i];
        switch (arch) {
          case ArchKind::CVFNN: {
            // Step-size folds into the adjacent counted products.
            for (std::size_t j = 0; j < fan_in; ++j) {
              const ComplexScalar prod =
                  numerics::cmul(delta, numerics::conj(layer_input[j]), meter);
              layer.weights.at(i, j) += numerics::lr_scale(prod, rate);
            }
            layer.bias[i] += numerics::lr_scale(delta, rate);
            break;
          }
          case ArchKind::SCFNN: {
            // Explicit step-size scaling; hidden layers scale the bias path
            // separately from the weight path.
            const ComplexScalar u_weights = numerics::cscale(delta, rate, meter);
            const ComplexScalar u_bias =
                output_layer ? u_weights : numerics::cscale(delta, rate, meter);
            for (std::size_t j = 0; j < fan_in; ++j) {
              layer.weights.at(i, j) +=
                  numerics::cmul(u_weights, numerics::conj(layer_input[j]), meter);
            }
            layer.bias[i] += u_bias;
            break;
          }
          default: {
            // Correction factor rate over (magnitude times fan_in + 1).
            const double share = static_cast<double>(fan_in + 1);
            double factor = numerics::div_real(rate, pre_mags[l][i], meter);
            factor = numerics::div_real(factor, share, meter);
            const ComplexScalar u_weights = numerics::cscale(delta, factor, meter);
            const ComplexScalar u_bias = numerics::cscale(delta, factor, meter);
            for (std::size_t j = 0; j < fan_in; ++j) {
              layer.weights.at(i, j) +=
                  numerics::cmul(u_weights, numerics::conj(layer_input[j]), meter);
            }
            layer.bias[i] += u_bias;
            break;
          }
        }
      }
    }
  }

  return loss;
}

}  // namespace cvnn::networks::detail
