#include <algorithm>
#include <cmath>

#include "common.hpp"

// C-RBF: real Gaussian responses exp(-dist_sq over width_sq) combined by a
// complex output layer. Width parameters are stored squared so the exponent
// costs a single real division per neuron.
namespace cvnn::networks::detail {

namespace {

constexpr double kWidthFloor = 1e-6;

struct Trace {
  std::vector<double> ratio;       // dist_sq over width_sq
  std::vector<double> response;    // exp(-ratio), in (0, 1]
};

std::vector<ComplexScalar> run_forward(const CrbfState& state,
                                       std::span<const ComplexScalar> input, Meter& meter,
                                       Trace& trace) {
  PhaseGuard guard(meter, Phase::Forward);
  const std::size_t neurons = state.centers.rows();
  const std::size_t inputs = state.centers.cols();
  const std::size_t outputs = state.out_bias.size();

  trace.ratio.resize(neurons);
  trace.response.resize(neurons);
  for (std::size_t n = 0; n < neurons; ++n) {
    double dist_sq = 0.0;
    for (std::size_t p = 0; p < inputs; ++p) {
      dist_sq += numerics::sqmag(input[p] - state.centers.at(n, p), meter);
    }
    trace.ratio[n] = numerics::div_real(dist_sq, state.width_sq[n], meter);
    trace.response[n] = numerics::act::gaussian(trace.ratio[n]);
  }

  std::vector<ComplexScalar> output(outputs);
  for (std::size_t r = 0; r < outputs; ++r) {
    ComplexScalar acc = state.out_bias[r];
    for (std::size_t n = 0; n < neurons; ++n) {
      acc += numerics::cscale(state.out_weights.at(r, n), trace.response[n], meter);
    }
    output[r] = acc;
  }
  return output;
}

}  // namespace

std::vector<ComplexScalar> crbf_infer(const CrbfState& state,
                                      std::span<const ComplexScalar> input, Meter& meter) {
  Trace trace;
  return run_forward(state, input, meter, trace);
}

double crbf_train(CrbfState& state, std::span<const ComplexScalar> input,
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

  // response_delta[n]: real sensitivity of the loss to the n-th response,
  // negated; then the chain down to center and width factors.
  std::vector<double> center_factor(neurons);  // 2 q' , multiplies (input - center)
  std::vector<double> width_step(neurons);     // q' ratio, the width gradient step
  {
    PhaseGuard guard(meter, Phase::BackwardDelta);
    for (std::size_t n = 0; n < neurons; ++n) {
      double response_delta = 0.0;
      for (std::size_t r = 0; r < outputs; ++r) {
        response_delta += numerics::rmul(error[r].re, state.out_weights.at(r, n).re, meter);
        response_delta += numerics::rmul(error[r].im, state.out_weights.at(r, n).im, meter);
      }
      const double q = numerics::rmul(response_delta, trace.response[n], meter);
      const double q_over_width = numerics::div_real(q, state.width_sq[n], meter);
      center_factor[n] = numerics::rmul(2.0, q_over_width, meter);
      width_step[n] = numerics::rmul(q_over_width, trace.ratio[n], meter);
    }
  }

  {
    PhaseGuard guard(meter, Phase::ParameterUpdate);
    const double weight_rate = config.weights_rate();
    for (std::size_t r = 0; r < outputs; ++r) {
      const ComplexScalar u_weights = numerics::cscale(error[r], weight_rate, meter);
      const ComplexScalar u_bias = numerics::cscale(error[r], weight_rate, meter);
      for (std::size_t n = 0; n < neurons; ++n) {
        state.out_weights.at(r, n) += numerics::cscale(u_weights, trace.response[n], meter);
      }
      state.out_bias[r] += u_bias;
    }
    const double center_rate = config.centers_rate();
    const double width_rate = config.widths_rate();
    for (std::size_t n = 0; n < neurons; ++n) {
      for (std::size_t p = 0; p < inputs; ++p) {
        const ComplexScalar diff = input[p] - state.centers.at(n, p);
        const double move_re = numerics::rmul(center_factor[n], diff.re, meter);
        const double move_im = numerics::rmul(center_factor[n], diff.im, meter);
        state.centers.at(n, p).re += numerics::lr_scale(move_re, center_rate);
        state.centers.at(n, p).im += numerics::lr_scale(move_im, center_rate);
      }
      state.width_sq[n] += numerics::lr_scale(width_step[n], width_rate);
      state.width_sq[n] = std::max(state.width_sq[n], kWidthFloor);
    }
  }

  return loss;
}

}  // namespace cvnn::networks::detail
