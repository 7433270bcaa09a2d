#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <cvnn/errors.hpp>

namespace cvnn::cost_model {

// ---------------------------------------------------------------------------
// Architecture inventory
// ---------------------------------------------------------------------------

enum class ArchKind : int { CVFNN = 0, SCFNN, MLMVN, CRBF, FCRBF, PTRBF };
inline constexpr int kArchCount = 6;

[[nodiscard]] std::span<const ArchKind> all_archs();
[[nodiscard]] const char* arch_id(ArchKind arch);       // "cvfnn", "crbf", ...
[[nodiscard]] const char* arch_display(ArchKind arch);  // "CVFNN", "C-RBF", ...
[[nodiscard]] std::optional<ArchKind> parse_arch(const std::string& id);

/// C-RBF and FC-RBF only exist in shallow form.
[[nodiscard]] constexpr bool deep_capable(ArchKind arch) {
  return arch != ArchKind::CRBF && arch != ArchKind::FCRBF;
}
[[nodiscard]] constexpr bool perceptron_family(ArchKind arch) {
  return arch == ArchKind::CVFNN || arch == ArchKind::SCFNN || arch == ArchKind::MLMVN;
}

enum class Mode : int { Training = 0, Inference = 1 };
[[nodiscard]] const char* mode_id(Mode mode);  // "training" / "inference"
[[nodiscard]] std::optional<Mode> parse_mode(const std::string& id);

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

/// Single hidden layer: `inputs` complex inputs, `neurons` hidden complex
/// neurons, `outputs` complex outputs. All strictly positive.
struct ShallowSpec {
  ArchKind arch{ArchKind::CVFNN};
  std::uint64_t inputs{1};
  std::uint64_t outputs{1};
  std::uint64_t neurons{1};

  void validate() const;  // throws InvalidSpecError
  bool operator==(const ShallowSpec&) const = default;
};

/// Multi-layer stack.
///
/// Perceptron family: `layer_units[l]` is the neuron count of layer l+1; the
/// last entry is the output layer, so layer_units.back() == outputs. At least
/// two layers.
///
/// PT-RBF: `layer_units[l]` is the Gaussian unit count of layer l+1 and
/// `bottleneck_dims[l]` the bottleneck output width, with
/// bottleneck_dims.back() == outputs. At least one layer.
struct DeepSpec {
  ArchKind arch{ArchKind::CVFNN};
  std::uint64_t inputs{1};
  std::vector<std::uint64_t> layer_units{};
  std::vector<std::uint64_t> bottleneck_dims{};  // PT-RBF only

  [[nodiscard]] std::size_t layer_count() const { return layer_units.size(); }
  [[nodiscard]] std::uint64_t outputs() const;
  void validate() const;  // throws InvalidSpecError / NotApplicableError
  bool operator==(const DeepSpec&) const = default;
};

using AnySpec = std::variant<ShallowSpec, DeepSpec>;

[[nodiscard]] ArchKind spec_arch(const AnySpec& spec);
[[nodiscard]] std::uint64_t spec_inputs(const AnySpec& spec);
[[nodiscard]] std::uint64_t spec_outputs(const AnySpec& spec);
void validate_spec(const AnySpec& spec);
[[nodiscard]] std::string spec_label(const AnySpec& spec);  // human-readable summary

// ---------------------------------------------------------------------------
// Closed-form costs (exact integer arithmetic)
// ---------------------------------------------------------------------------

/// Real multiplications of one online training step (shallow closed forms).
/// Training covers forward + backward + update for one sample; Inference is
/// one forward pass.
[[nodiscard]] std::uint64_t shallow_cost(const ShallowSpec& spec, Mode mode);

/// Deep closed forms. Throws NotApplicableError for C-RBF / FC-RBF.
[[nodiscard]] std::uint64_t deep_cost(const DeepSpec& spec, Mode mode);

[[nodiscard]] std::uint64_t cost(const AnySpec& spec, Mode mode);

// ---------------------------------------------------------------------------
// Asymptotic classes
// ---------------------------------------------------------------------------

/// Parameter couplings under which the asymptotic order is classified:
/// shallow with inputs = outputs fixed and neurons dominant, shallow with all
/// three proportional, deep with layer widths dominating the layer count, and
/// deep with widths proportional to the layer count.
enum class AsymptoticRegime : int {
  ShallowNDominant = 0,
  ShallowBalanced,
  DeepNDominant,
  DeepBalanced,
};
inline constexpr int kRegimeCount = 4;

[[nodiscard]] const char* regime_id(AsymptoticRegime regime);
[[nodiscard]] std::optional<AsymptoticRegime> parse_regime(const std::string& id);

enum class ComplexityOrder : int { Linear = 1, Quadratic = 2, Cubic = 3 };
[[nodiscard]] const char* order_label(ComplexityOrder order);  // "O(N)", ...

/// Mode-independent lookup. Throws NotApplicableError for C-RBF / FC-RBF in
/// deep regimes.
[[nodiscard]] ComplexityOrder asymptotic_class(ArchKind arch, AsymptoticRegime regime);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Arithmetic progression start, start+step, ... up to and including stop.
struct NRange {
  std::uint64_t start{1};
  std::uint64_t stop{1};
  std::uint64_t step{1};

  void validate() const;  // step >= 1
  [[nodiscard]] std::vector<std::uint64_t> values() const;
  [[nodiscard]] static NRange parse(const std::string& text);  // "start:stop:step"
};

struct SweepRow {
  ArchKind arch;
  Mode mode;
  std::uint64_t inputs;
  std::uint64_t outputs;
  std::uint64_t neurons;
  std::uint64_t multiplications;

  bool operator==(const SweepRow&) const = default;
};

/// One row per (arch, neuron count), ordered by architecture enum order then
/// ascending neuron count. Duplicate architectures in the request collapse.
[[nodiscard]] std::vector<SweepRow> sweep(std::span<const ArchKind> archs, Mode mode,
                                          std::uint64_t inputs, std::uint64_t outputs,
                                          const NRange& range);

}  // namespace cvnn::cost_model
