#include <cmath>

#include "common.hpp"

// FC-RBF: fully complex kernel sech(sum_p dilation * (input - center)) per
// neuron, complex dilation vector in place of a real width, complex linear
// output layer. Holomorphic throughout, so backward is plain Wirtinger
// chain-rule with conjugated derivative factors.
namespace cvnn::networks::detail {

namespace {

struct Trace {
  std::vector<ComplexScalar> kernel_arg;  // per neuron, before sech
  std::vector<ComplexScalar> response;    // sech(kernel_arg)
};

std::vector<ComplexScalar> run_forward(const FcrbfState& state,
                                       std::span<const ComplexScalar> input, Meter& meter,
                                       Trace& trace) {
  PhaseGuard guard(meter, Phase::Forward);
  const std::size_t neurons = state.centers.rows();
  const std::size_t inputs = state.centers.cols();
  const std::size_t outputs = state.out_bias.size();

  trace.kernel_arg.resize(neurons);
  trace.response.resize(neurons);
  for (std::size_t n = 0; n < neurons; ++n) {
    ComplexScalar acc{};
    for (std::size_t p = 0; p < inputs; ++p) {
      acc += numerics::cmul(state.dilation.at(n, p), input[p] - state.centers.at(n, p), meter);
    }
    trace.kernel_arg[n] = acc;
    trace.response[n] = numerics::act::complex_sech(acc);
  }

  std::vector<ComplexScalar> output(outputs);
  for (std::size_t r = 0; r < outputs; ++r) {
    ComplexScalar acc = state.out_bias[r];
    for (std::size_t n = 0; n < neurons; ++n) {
      acc += numerics::cmul(state.out_weights.at(r, n), trace.response[n], meter);
    }
    output[r] = acc;
  }
  return output;
}

}  // namespace

std::vector<ComplexScalar> fcrbf_infer(const FcrbfState& state,
                                       std::span<const ComplexScalar> input, Meter& meter) {
  Trace trace;
  return run_forward(state, input, meter, trace);
}

double fcrbf_train(FcrbfState& state, std::span<const ComplexScalar> input,
                   std::span<const ComplexScalar> target, const TrainConfig& config,
                   Meter& meter) {
  Trace trace;
  const std::vector<ComplexScalar> output = run_forward(state, input, meter, trace);

  const double loss = numerics::observe::half_squared_error(target, output);
  if (!std::isfinite(loss)) {
    throw InvalidArgumentError("training loss is not finite");
  }

  const std::size_t neurons = state.centers.rows();
  const std::size_t inputs = state.centers.cols();
  const std::size_t outputs = state.out_bias.size();

  std::vector<ComplexScalar> error(outputs);
  for (std::size_t r = 0; r < outputs; ++r) {
    error[r] = target[r] - output[r];
  }

  // delta[n] = backprop_sum * conj(sech'(arg)) with sech' = -sech * tanh.
  std::vector<ComplexScalar> delta(neurons);
  {
    PhaseGuard guard(meter, Phase::BackwardDelta);
    for (std::size_t n = 0; n < neurons; ++n) {
      ComplexScalar backprop{};
      for (std::size_t r = 0; r < outputs; ++r) {
        backprop +=
            numerics::cmul(numerics::conj(state.out_weights.at(r, n)), error[r], meter);
      }
      const ComplexScalar sech_tanh =
          numerics::cmul(trace.response[n], numerics::act::complex_tanh(trace.kernel_arg[n]),
                         meter);
      delta[n] = -numerics::cmul(backprop, numerics::conj(sech_tanh), meter);
    }
  }

  {
    PhaseGuard guard(meter, Phase::ParameterUpdate);
    const double weight_rate = config.weights_rate();
    for (std::size_t r = 0; r < outputs; ++r) {
      const ComplexScalar u_weights = numerics::cscale(error[r], weight_rate, meter);
      const ComplexScalar u_bias = numerics::cscale(error[r], weight_rate, meter);
      for (std::size_t n = 0; n < neurons; ++n) {
        state.out_weights.at(r, n) +=
            numerics::cmul(u_weights, numerics::conj(trace.response[n]), meter);
      }
      state.out_bias[r] += u_bias;
    }
    const double center_rate = config.centers_rate();
    const double dilation_rate = config.widths_rate();
    for (std::size_t n = 0; n < neurons; ++n) {
      const ComplexScalar u_center = numerics::cscale(delta[n], center_rate, meter);
      const ComplexScalar u_dilation = numerics::cscale(delta[n], dilation_rate, meter);
      for (std::size_t p = 0; p < inputs; ++p) {
        const ComplexScalar old_dilation = state.dilation.at(n, p);
        state.dilation.at(n, p) += numerics::cmul(
            u_dilation, numerics::conj(input[p] - state.centers.at(n, p)), meter);
        state.centers.at(n, p) -=
            numerics::cmul(u_center, numerics::conj(old_dilation), meter);
      }
    }
  }

  return loss;
}

}  // namespace cvnn::networks::detail
