#include <cvnn/harness.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace cvnn::harness {

namespace {

using cost_model::AnySpec;
using cost_model::ArchKind;
using cost_model::DeepSpec;
using cost_model::Mode;
using cost_model::ShallowSpec;
using numerics::Meter;
using numerics::MultCounter;
using numerics::Phase;

constexpr std::uint64_t kDataSeedSalt = 0x9e3779b97f4a7c15ULL;

std::vector<ComplexScalar> random_signal(std::size_t length, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<ComplexScalar> out(length);
  for (auto& value : out) {
    const double re = dist(rng);
    const double im = dist(rng);
    value = {re, im};
  }
  return out;
}

}  // namespace

std::string describe(const CountReport& report) {
  std::ostringstream out;
  out << report.spec_label << " " << cost_model::mode_id(report.mode) << ": formula "
      << report.formula_count << ", metered " << report.metered_count << " (forward "
      << report.forward_mults << ", backward " << report.backward_mults << ", update "
      << report.update_mults << ")";
  if (report.mode == Mode::Training) {
    out << ", forward share vs inference formula " << report.forward_mults << "/"
        << report.inference_formula;
  }
  out << (report.match ? " MATCH" : " MISMATCH");
  return out.str();
}

CountReport run_count_check(const AnySpec& spec, Mode mode, std::uint64_t seed) {
  networks::Network net = networks::build(spec, seed);
  std::mt19937_64 rng(seed ^ kDataSeedSalt);

  CountReport report;
  report.arch = cost_model::spec_arch(spec);
  report.spec_label = cost_model::spec_label(spec);
  report.mode = mode;
  report.formula_count = cost_model::cost(spec, mode);

  Meter meter;
  const std::vector<ComplexScalar> input = random_signal(net.input_size(), rng);
  if (mode == Mode::Inference) {
    (void)networks::infer(net, input, meter);
  } else {
    const std::vector<ComplexScalar> target = random_signal(net.output_size(), rng);
    (void)networks::train_step(net, input, target, networks::TrainConfig{}, meter);
    report.inference_formula = cost_model::cost(spec, Mode::Inference);
  }

  const MultCounter& counter = meter.counter();
  report.metered_count = counter.grand_total();
  report.forward_mults = counter.phase_total(Phase::Forward);
  report.backward_mults = counter.phase_total(Phase::BackwardDelta);
  report.update_mults = counter.phase_total(Phase::ParameterUpdate);
  report.match = report.metered_count == report.formula_count;
  if (mode == Mode::Training) {
    report.forward_share_matches = report.forward_mults == report.inference_formula;
    report.match = report.match && report.forward_share_matches;
  }
  return report;
}

AnySpec random_shallow_spec(ArchKind arch, std::uint64_t seed, const RandomSpecBounds& bounds) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> inputs(1, bounds.max_inputs);
  std::uniform_int_distribution<std::uint64_t> outputs(1, bounds.max_outputs);
  std::uniform_int_distribution<std::uint64_t> neurons(1, bounds.max_neurons);
  return ShallowSpec{arch, inputs(rng), outputs(rng), neurons(rng)};
}

AnySpec random_deep_spec(ArchKind arch, std::uint64_t seed, const RandomSpecBounds& bounds) {
  if (!cost_model::deep_capable(arch)) {
    throw InvalidArgumentError("deep specs only exist for deep-capable architectures");
  }
  std::mt19937_64 rng(seed);
  const std::uint64_t min_layers = arch == ArchKind::PTRBF ? 1 : 2;
  std::uniform_int_distribution<std::uint64_t> layer_count(min_layers, bounds.max_layers);
  std::uniform_int_distribution<std::uint64_t> width(1, bounds.max_deep_width);
  DeepSpec spec;
  spec.arch = arch;
  spec.inputs = width(rng);
  const std::uint64_t layers = layer_count(rng);
  for (std::uint64_t l = 0; l < layers; ++l) {
    spec.layer_units.push_back(width(rng));
    if (arch == ArchKind::PTRBF) {
      spec.bottleneck_dims.push_back(width(rng));
    }
  }
  return spec;
}

std::vector<CountReport> verify_counts(std::uint64_t shallow_trials, std::uint64_t deep_trials,
                                       std::uint64_t seed, const RandomSpecBounds& bounds) {
  std::vector<CountReport> reports;
  std::uint64_t stream = seed;
  for (ArchKind arch : cost_model::all_archs()) {
    for (std::uint64_t t = 0; t < shallow_trials; ++t) {
      const AnySpec spec = random_shallow_spec(arch, ++stream, bounds);
      reports.push_back(run_count_check(spec, Mode::Inference, ++stream));
      reports.push_back(run_count_check(spec, Mode::Training, ++stream));
    }
  }
  for (ArchKind arch : cost_model::all_archs()) {
    if (!cost_model::deep_capable(arch)) {
      continue;
    }
    for (std::uint64_t t = 0; t < deep_trials; ++t) {
      const AnySpec spec = random_deep_spec(arch, ++stream, bounds);
      reports.push_back(run_count_check(spec, Mode::Inference, ++stream));
      reports.push_back(run_count_check(spec, Mode::Training, ++stream));
    }
  }
  return reports;
}

double gradient_check(const networks::Network& net, std::span<const ComplexScalar> input,
                      std::span<const ComplexScalar> target, double step) {
  if (net.arch == ArchKind::MLMVN) {
    throw InvalidArgumentError("gradient checks apply to gradient-family architectures only");
  }
  if (!(step >= 1e-7 && step <= 1e-4)) {
    throw InvalidArgumentError("finite-difference step must lie in [1e-7, 1e-4]");
  }

  const std::vector<double> base = net.parameters();

  // Analytic direction: every update is exactly linear in its rate, so one
  // small-rate step divided by the rate recovers minus the loss gradient. The
  // small rate keeps the width floors out of play.
  constexpr double kProbeRate = 1e-3;
  networks::TrainConfig probe_rates;
  probe_rates.learning_rate = kProbeRate;
  probe_rates.center_rate = kProbeRate;
  probe_rates.width_rate = kProbeRate;
  networks::Network probe = net;
  Meter meter;
  (void)networks::train_step(probe, input, target, probe_rates, meter);
  const std::vector<double> moved = probe.parameters();

  const auto loss_at = [&](const std::vector<double>& flat) {
    networks::Network candidate = net;
    candidate.set_parameters(flat);
    Meter scratch;
    const std::vector<ComplexScalar> output = networks::infer(candidate, input, scratch);
    return numerics::observe::half_squared_error(target, output);
  };

  double worst = 0.0;
  std::vector<double> perturbed = base;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double analytic = (base[i] - moved[i]) / kProbeRate;
    perturbed[i] = base[i] + step;
    const double loss_plus = loss_at(perturbed);
    perturbed[i] = base[i] - step;
    const double loss_minus = loss_at(perturbed);
    perturbed[i] = base[i];
    const double finite_diff = (loss_plus - loss_minus) / (2.0 * step);
    if (!std::isfinite(finite_diff)) {
      throw InvalidArgumentError("finite-difference quotient is not finite");
    }
    const double scale = std::max({std::abs(analytic), std::abs(finite_diff), 1e-3});
    worst = std::max(worst, std::abs(analytic - finite_diff) / scale);
  }
  return worst;
}

XorOutcome xor_demo(std::uint64_t seed, std::uint64_t max_steps) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexScalar weight{dist(rng), dist(rng)};
  ComplexScalar bias{dist(rng), dist(rng)};

  // Patterns x1 + i x2 with targets in the quadrant whose sign product is the
  // XOR class; reachable exactly by weight = i, bias = 0.
  const double level = std::tanh(1.0);
  struct Pattern {
    ComplexScalar input;
    ComplexScalar target;
    int cls;
  };
  const Pattern patterns[4] = {
      {{-1.0, -1.0}, {level, -level}, -1},
      {{-1.0, 1.0}, {-level, -level}, +1},
      {{1.0, -1.0}, {level, level}, +1},
      {{1.0, 1.0}, {-level, level}, -1},
  };

  Meter meter;
  const double rate = 0.4;
  const auto activate = [&](ComplexScalar z) -> ComplexScalar {
    return {numerics::act::real_tanh(z.re), numerics::act::real_tanh(z.im)};
  };
  const auto classify = [](ComplexScalar f) {
    const int sign_re = f.re >= 0.0 ? 1 : -1;  // epsilon-free read; exact zero counts as +
    const int sign_im = f.im >= 0.0 ? 1 : -1;
    return sign_re * sign_im;
  };
  const auto accuracy = [&]() {
    numerics::PhaseGuard guard(meter, Phase::Forward);
    int hits = 0;
    for (const Pattern& pattern : patterns) {
      const ComplexScalar f = activate(numerics::cmul(weight, pattern.input, meter) + bias);
      if (classify(f) == pattern.cls) {
        ++hits;
      }
    }
    return static_cast<double>(hits) / 4.0;
  };

  double best = accuracy();
  std::uint64_t step = 0;
  while (step < max_steps && best < 1.0) {
    const Pattern& pattern = patterns[step % 4];
    ++step;
    ComplexScalar pre;
    ComplexScalar post;
    {
      numerics::PhaseGuard guard(meter, Phase::Forward);
      pre = numerics::cmul(weight, pattern.input, meter) + bias;
      post = activate(pre);
    }
    const ComplexScalar error = pattern.target - post;
    numerics::PhaseGuard guard(meter, Phase::ParameterUpdate);
    const double d_re = numerics::rmul(error.re, 1.0 - numerics::rmul(post.re, post.re, meter),
                                       meter);
    const double d_im = numerics::rmul(error.im, 1.0 - numerics::rmul(post.im, post.im, meter),
                                       meter);
    const ComplexScalar update = numerics::cscale({d_re, d_im}, rate, meter);
    weight += numerics::cmul(update, numerics::conj(pattern.input), meter);
    bias += update;
    if (step % 4 == 0) {
      best = std::max(best, accuracy());
    }
  }
  return {best, step};
}

AsymptoteFit empirical_asymptote(ArchKind arch, cost_model::AsymptoticRegime regime, Mode mode) {
  // Throws for the not-applicable cells before any evaluation.
  (void)cost_model::asymptotic_class(arch, regime);

  std::vector<std::pair<double, double>> points;  // (log2 N, log2 cost)
  const auto add_point = [&](std::uint64_t n, std::uint64_t c) {
    points.emplace_back(std::log2(static_cast<double>(n)), std::log2(static_cast<double>(c)));
  };

  using cost_model::AsymptoticRegime;
  switch (regime) {
    case AsymptoticRegime::ShallowNDominant:
      for (int k = 4; k <= 14; ++k) {
        const std::uint64_t n = 1ULL << k;
        add_point(n, cost_model::shallow_cost({arch, 4, 4, n}, mode));
      }
      break;
    case AsymptoticRegime::ShallowBalanced:
      for (int k = 4; k <= 14; ++k) {
        const std::uint64_t n = 1ULL << k;
        add_point(n, cost_model::shallow_cost({arch, n, n, n}, mode));
      }
      break;
    case AsymptoticRegime::DeepNDominant:
      for (int k = 4; k <= 12; ++k) {
        const std::uint64_t n = 1ULL << k;
        DeepSpec spec;
        spec.arch = arch;
        spec.inputs = n;
        spec.layer_units.assign(4, n);
        if (arch == ArchKind::PTRBF) {
          spec.bottleneck_dims.assign(4, n);
        }
        add_point(n, cost_model::deep_cost(spec, mode));
      }
      break;
    case AsymptoticRegime::DeepBalanced:
      for (int k = 2; k <= 8; ++k) {
        const std::uint64_t n = 1ULL << k;
        DeepSpec spec;
        spec.arch = arch;
        spec.inputs = n;
        spec.layer_units.assign(static_cast<std::size_t>(n), n);
        if (arch == ArchKind::PTRBF) {
          spec.bottleneck_dims.assign(static_cast<std::size_t>(n), n);
        }
        add_point(n, cost_model::deep_cost(spec, mode));
      }
      break;
  }

  // Least-squares slope over the tail of the series, where lower-order terms
  // have died off.
  const std::size_t window = std::min<std::size_t>(5, points.size());
  const std::size_t first = points.size() - window;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < points.size(); ++i) {
    sx += points[i].first;
    sy += points[i].second;
    sxx += points[i].first * points[i].first;
    sxy += points[i].first * points[i].second;
  }
  const double count = static_cast<double>(window);
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return {slope, static_cast<int>(std::lround(slope))};
}

}  // namespace cvnn::harness
