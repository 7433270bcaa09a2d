#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <cvnn/cost_model.hpp>
#include <cvnn/networks.hpp>
#include <cvnn/use_cases.hpp>

// Verification suites binding the metered networks to the closed-form cost
// model, plus the supporting oracles (finite differences, slope fits, the
// single-neuron XOR demonstration).
namespace cvnn::harness {

using numerics::ComplexScalar;

// ---------------------------------------------------------------------------
// Count verification
// ---------------------------------------------------------------------------

struct CountReport {
  cost_model::ArchKind arch{cost_model::ArchKind::CVFNN};
  std::string spec_label;
  cost_model::Mode mode{cost_model::Mode::Inference};
  std::uint64_t formula_count{0};
  std::uint64_t metered_count{0};
  std::uint64_t forward_mults{0};
  std::uint64_t backward_mults{0};
  std::uint64_t update_mults{0};
  // Training only: the inference closed form the Forward share must equal.
  std::uint64_t inference_formula{0};
  bool forward_share_matches{true};
  bool match{false};
};

[[nodiscard]] std::string describe(const CountReport& report);

struct RandomSpecBounds {
  std::uint64_t max_inputs{16};
  std::uint64_t max_outputs{16};
  std::uint64_t max_neurons{64};
  std::uint64_t max_layers{5};
  std::uint64_t max_deep_width{16};
};

/// Builds the network for `spec`, runs one metered operation on random data
/// and compares the counter delta against the closed form. Training reports
/// additionally require the Forward share to equal the inference closed form.
[[nodiscard]] CountReport run_count_check(const cost_model::AnySpec& spec, cost_model::Mode mode,
                                          std::uint64_t seed);

[[nodiscard]] cost_model::AnySpec random_shallow_spec(cost_model::ArchKind arch,
                                                      std::uint64_t seed,
                                                      const RandomSpecBounds& bounds = {});
[[nodiscard]] cost_model::AnySpec random_deep_spec(cost_model::ArchKind arch, std::uint64_t seed,
                                                   const RandomSpecBounds& bounds = {});

/// Randomized oracle-equivalence suite: `shallow_trials` specs per
/// architecture and `deep_trials` per deep-capable architecture, each checked
/// in both modes. Every report must match.
[[nodiscard]] std::vector<CountReport> verify_counts(std::uint64_t shallow_trials,
                                                     std::uint64_t deep_trials,
                                                     std::uint64_t seed,
                                                     const RandomSpecBounds& bounds = {});

// ---------------------------------------------------------------------------
// Functional oracles
// ---------------------------------------------------------------------------

/// Central finite differences over every real and imaginary parameter
/// component against the analytic update direction of train_step. Returns the
/// worst relative error. Gradient-family architectures only; step must lie in
/// [1e-7, 1e-4].
[[nodiscard]] double gradient_check(const networks::Network& net,
                                    std::span<const ComplexScalar> input,
                                    std::span<const ComplexScalar> target, double step);

struct XorOutcome {
  double accuracy{0.0};
  std::uint64_t steps{0};
};

/// Trains a single split-activation complex neuron on the four XOR patterns
/// (inputs encoded x1 + i x2, class read as sign(Re) * sign(Im) of the
/// activation). Stops early on 4/4.
[[nodiscard]] XorOutcome xor_demo(std::uint64_t seed, std::uint64_t max_steps = 10000);

struct AsymptoteFit {
  double slope{0.0};
  int order{0};  // nearest integer
};

/// Least-squares slope of log2 cost against log2 N over a geometric series at
/// the regime's parameter coupling. Throws NotApplicableError for the C-RBF /
/// FC-RBF deep cells.
[[nodiscard]] AsymptoteFit empirical_asymptote(cost_model::ArchKind arch,
                                               cost_model::AsymptoticRegime regime,
                                               cost_model::Mode mode);

}  // namespace cvnn::harness
