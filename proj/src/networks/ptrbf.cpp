#include <algorithm>
#include <cmath>

#include "common.hpp"

// PT-RBF: split Gaussian units (independent bells over the real and imaginary
// distance components, each with its own squared width) followed by a complex
// linear bottleneck projection per layer. Deep stacks chain bottleneck outputs
// into the next layer's units.
namespace cvnn::networks::detail {

namespace {

constexpr double kWidthFloor = 1e-6;

struct LayerTrace {
  std::vector<ComplexScalar> input;
  std::vector<double> ratio_re;        // dist_re_sq over width_re_sq
  std::vector<double> ratio_im;
  std::vector<ComplexScalar> response; // exp(-ratio_re) + i exp(-ratio_im)
};

std::vector<ComplexScalar> run_forward(const PtrbfState& state,
                                       std::span<const ComplexScalar> input, Meter& meter,
                                       std::vector<LayerTrace>& trace) {
  PhaseGuard guard(meter, Phase::Forward);
  const std::size_t layer_count = state.layers.size();
  trace.assign(layer_count, {});

  std::vector<ComplexScalar> current(input.begin(), input.end());
  for (std::size_t l = 0; l < layer_count; ++l) {
    const PtrbfLayer& layer = state.layers[l];
    const std::size_t units = layer.centers.rows();
    const std::size_t in_dim = layer.centers.cols();
    const std::size_t out_dim = layer.proj_bias.size();

    LayerTrace& t = trace[l];
    t.input = current;
    t.ratio_re.resize(units);
    t.ratio_im.resize(units);
    t.response.resize(units);
    for (std::size_t n = 0; n < units; ++n) {
      double dist_re_sq = 0.0;
      double dist_im_sq = 0.0;
      for (std::size_t p = 0; p < in_dim; ++p) {
        const ComplexScalar diff = current[p] - layer.centers.at(n, p);
        dist_re_sq += numerics::rmul(diff.re, diff.re, meter);
        dist_im_sq += numerics::rmul(diff.im, diff.im, meter);
      }
      t.ratio_re[n] = numerics::div_real(dist_re_sq, layer.width_re_sq[n], meter);
      t.ratio_im[n] = numerics::div_real(dist_im_sq, layer.width_im_sq[n], meter);
      t.response[n] = {numerics::act::gaussian(t.ratio_re[n]),
                       numerics::act::gaussian(t.ratio_im[n])};
    }

    std::vector<ComplexScalar> next(out_dim);
    for (std::size_t o = 0; o < out_dim; ++o) {
      ComplexScalar acc = layer.proj_bias[o];
      for (std::size_t n = 0; n < units; ++n) {
        acc += numerics::cmul(layer.proj.at(o, n), t.response[n], meter);
      }
      next[o] = acc;
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace

std::vector<ComplexScalar> ptrbf_infer(const PtrbfState& state,
                                       std::span<const ComplexScalar> input, Meter& meter) {
  std::vector<LayerTrace> trace;
  return run_forward(state, input, meter, trace);
}

double ptrbf_train(PtrbfState& state, std::span<const ComplexScalar> input,
                   std::span<const ComplexScalar> target, const TrainConfig& config,
                   Meter& meter) {
  std::vector<LayerTrace> trace;
  const std::vector<ComplexScalar> output = run_forward(state, input, meter, trace);

  const double loss = numerics::observe::half_squared_error(target, output);
  if (!std::isfinite(loss)) {
    throw InvalidArgumentError("training loss is not finite");
  }

  const std::size_t layer_count = state.layers.size();
  const double weight_rate = config.weights_rate();
  const double center_rate = config.centers_rate();
  const double width_rate = config.widths_rate();

  std::vector<ComplexScalar> delta(target.size());
  for (std::size_t o = 0; o < target.size(); ++o) {
    delta[o] = target[o] - output[o];
  }

  for (std::size_t step = 0; step < layer_count; ++step) {
    const std::size_t l = layer_count - 1 - step;
    PtrbfLayer& layer = state.layers[l];
    const LayerTrace& t = trace[l];
    const std::size_t units = layer.centers.rows();
    const std::size_t in_dim = layer.centers.cols();
    const std::size_t out_dim = layer.proj_bias.size();

    std::vector<double> factor_re(units);  // 2 q' per component, drives centers
    std::vector<double> factor_im(units);
    std::vector<double> ratio_step_re(units);  // q' ratio, drives widths
    std::vector<double> ratio_step_im(units);
    std::vector<ComplexScalar> delta_prev(in_dim);

    {
      PhaseGuard guard(meter, Phase::BackwardDelta);
      for (std::size_t n = 0; n < units; ++n) {
        ComplexScalar backprop{};
        for (std::size_t o = 0; o < out_dim; ++o) {
          backprop += numerics::cmul(numerics::conj(layer.proj.at(o, n)), delta[o], meter);
        }
        const double q_re = numerics::rmul(backprop.re, t.response[n].re, meter);
        const double q_im = numerics::rmul(backprop.im, t.response[n].im, meter);
        const double qp_re = numerics::div_real(q_re, layer.width_re_sq[n], meter);
        const double qp_im = numerics::div_real(q_im, layer.width_im_sq[n], meter);
        factor_re[n] = numerics::rmul(2.0, qp_re, meter);
        factor_im[n] = numerics::rmul(2.0, qp_im, meter);
        ratio_step_re[n] = numerics::rmul(qp_re, t.ratio_re[n], meter);
        ratio_step_im[n] = numerics::rmul(qp_im, t.ratio_im[n], meter);
        if (l > 0) {
          for (std::size_t p = 0; p < in_dim; ++p) {
            const ComplexScalar diff = t.input[p] - layer.centers.at(n, p);
            delta_prev[p].re -=
                numerics::rmul(2.0, numerics::rmul(qp_re, diff.re, meter), meter);
            delta_prev[p].im -=
                numerics::rmul(2.0, numerics::rmul(qp_im, diff.im, meter), meter);
          }
        }
      }
    }

    {
      PhaseGuard guard(meter, Phase::ParameterUpdate);
      for (std::size_t o = 0; o < out_dim; ++o) {
        const ComplexScalar u_weights = numerics::cscale(delta[o], weight_rate, meter);
        const ComplexScalar u_bias = numerics::cscale(delta[o], weight_rate, meter);
        for (std::size_t n = 0; n < units; ++n) {
          layer.proj.at(o, n) +=
              numerics::cmul(u_weights, numerics::conj(t.response[n]), meter);
        }
        layer.proj_bias[o] += u_bias;
      }
      for (std::size_t n = 0; n < units; ++n) {
        for (std::size_t p = 0; p < in_dim; ++p) {
          const ComplexScalar diff = t.input[p] - layer.centers.at(n, p);
          const double move_re = numerics::rmul(factor_re[n], diff.re, meter);
          const double move_im = numerics::rmul(factor_im[n], diff.im, meter);
          layer.centers.at(n, p).re += numerics::lr_scale(move_re, center_rate);
          layer.centers.at(n, p).im += numerics::lr_scale(move_im, center_rate);
        }
        layer.width_re_sq[n] += numerics::rmul(width_rate, ratio_step_re[n], meter);
        layer.width_im_sq[n] += numerics::rmul(width_rate, ratio_step_im[n], meter);
        layer.width_re_sq[n] = std::max(layer.width_re_sq[n], kWidthFloor);
        layer.width_im_sq[n] = std::max(layer.width_im_sq[n], kWidthFloor);
      }
    }

    delta = std::move(delta_prev);
  }

  return loss;
}

}  // namespace cvnn::networks::detail
