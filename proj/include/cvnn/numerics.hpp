#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <cvnn/errors.hpp>

namespace cvnn::numerics {

// ---------------------------------------------------------------------------
// Value type
// ---------------------------------------------------------------------------

/// Double-precision complex value.
///
/// Deliberately has no operator*: any multiplying operation on complex data has
/// to go through one of the metered kernels below, so no real multiplication can
/// bypass the ledger. Additions and subtractions carry no cost and are plain
/// operators.
struct ComplexScalar {
  double re{0.0};
  double im{0.0};

  bool operator==(const ComplexScalar&) const = default;
};

[[nodiscard]] constexpr ComplexScalar conj(ComplexScalar a) { return {a.re, -a.im}; }

[[nodiscard]] constexpr ComplexScalar operator+(ComplexScalar a, ComplexScalar b) {
  return {a.re + b.re, a.im + b.im};
}
[[nodiscard]] constexpr ComplexScalar operator-(ComplexScalar a, ComplexScalar b) {
  return {a.re - b.re, a.im - b.im};
}
[[nodiscard]] constexpr ComplexScalar operator-(ComplexScalar a) { return {-a.re, -a.im}; }

inline ComplexScalar& operator+=(ComplexScalar& a, ComplexScalar b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}
inline ComplexScalar& operator-=(ComplexScalar& a, ComplexScalar b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}

// ---------------------------------------------------------------------------
// Multiplication taxonomy
// ---------------------------------------------------------------------------

/// Computation phase a metered operation executes under. Training steps run
/// Forward, then BackwardDelta, then ParameterUpdate; inference runs Forward
/// only.
enum class Phase : int { Forward = 0, BackwardDelta = 1, ParameterUpdate = 2 };
inline constexpr int kPhaseCount = 3;

/// Kind of multiplication event. Each kind has a fixed cost in real-valued
/// scalar multiplications.
enum class MultKind : int {
  ComplexTimesComplex = 0,  // schoolbook product, 4 real multiplications
  ComplexTimesReal = 1,     // 2
  RealTimesReal = 2,        // 1
  SquaredMagnitude = 3,     // re^2 + im^2, 2
  RealDivision = 4,         // treated as multiply-by-reciprocal, 1
};
inline constexpr int kMultKindCount = 5;

[[nodiscard]] constexpr std::uint64_t mult_cost(MultKind kind) {
  switch (kind) {
    case MultKind::ComplexTimesComplex: return 4;
    case MultKind::ComplexTimesReal: return 2;
    case MultKind::RealTimesReal: return 1;
    case MultKind::SquaredMagnitude: return 2;
    case MultKind::RealDivision: return 1;
  }
  return 0;
}

[[nodiscard]] const char* phase_name(Phase phase);
[[nodiscard]] const char* mult_kind_name(MultKind kind);

struct MultEvent {
  Phase phase;
  MultKind kind;
};

// ---------------------------------------------------------------------------
// Ledger
// ---------------------------------------------------------------------------

/// Categorized, phase-tagged ledger of multiplication events. Cells hold event
/// occurrences; real-multiplication totals are occurrences weighted by the
/// fixed per-kind cost. Cells only grow between resets; 64-bit overflow is an
/// error, never wraparound.
class MultCounter {
 public:
  [[nodiscard]] std::uint64_t occurrences(Phase phase, MultKind kind) const;
  [[nodiscard]] std::uint64_t real_mults(Phase phase, MultKind kind) const;
  [[nodiscard]] std::uint64_t phase_total(Phase phase) const;
  [[nodiscard]] std::uint64_t kind_occurrences(MultKind kind) const;
  [[nodiscard]] std::uint64_t grand_total() const;

  void add(Phase phase, MultKind kind, std::uint64_t count = 1);
  void reset();

  bool operator==(const MultCounter&) const = default;

 private:
  std::array<std::uint64_t, static_cast<std::size_t>(kPhaseCount* kMultKindCount)> cells_{};
};

/// Componentwise `after - before`. Throws LedgerError if any cell of `after`
/// is below the corresponding cell of `before`.
[[nodiscard]] MultCounter counter_diff(const MultCounter& before, const MultCounter& after);

/// Counter context handed to the metered kernels. Single-owner mutable state:
/// it may move between threads but must not be shared concurrently.
class Meter {
 public:
  [[nodiscard]] const MultCounter& counter() const { return counter_; }
  [[nodiscard]] MultCounter snapshot() const { return counter_; }
  void reset();

  [[nodiscard]] std::optional<Phase> phase() const { return phase_; }

  /// Optional event log, used by replay-style tests.
  void set_recording(bool on) { recording_ = on; }
  [[nodiscard]] const std::vector<MultEvent>& events() const { return events_; }

  /// Records one event under the active phase. Throws KernelError when no
  /// phase is active.
  void record(MultKind kind);

 private:
  friend class PhaseGuard;

  MultCounter counter_{};
  std::optional<Phase> phase_{};
  bool recording_{false};
  std::vector<MultEvent> events_{};
};

[[nodiscard]] inline MultCounter counter_snapshot(const Meter& meter) { return meter.snapshot(); }
inline void counter_reset(Meter& meter) { meter.reset(); }

/// Scoped phase activation; restores the previous phase on destruction.
class PhaseGuard {
 public:
  PhaseGuard(Meter& meter, Phase phase) : meter_(meter), previous_(meter.phase_) {
    meter_.phase_ = phase;
  }
  ~PhaseGuard() { meter_.phase_ = previous_; }

  PhaseGuard(const PhaseGuard&) = delete;
  PhaseGuard& operator=(const PhaseGuard&) = delete;

 private:
  Meter& meter_;
  std::optional<Phase> previous_;
};

// ---------------------------------------------------------------------------
// Metered kernels
// ---------------------------------------------------------------------------

/// a * b, one ComplexTimesComplex event (4 real multiplications, schoolbook).
[[nodiscard]] ComplexScalar cmul(ComplexScalar a, ComplexScalar b, Meter& meter);

/// r * a, one ComplexTimesReal event (2).
[[nodiscard]] ComplexScalar cscale(ComplexScalar a, double r, Meter& meter);

/// a * b, one RealTimesReal event (1).
[[nodiscard]] double rmul(double a, double b, Meter& meter);

/// re^2 + im^2, one SquaredMagnitude event (2). The square root of the result,
/// when a caller needs it, costs nothing (lookup-table convention).
[[nodiscard]] double sqmag(ComplexScalar a, Meter& meter);

/// a / b, one RealDivision event (1). b == 0 violates the caller contract and
/// throws KernelError.
[[nodiscard]] double div_real(double a, double b, Meter& meter);

/// Learning-rate fold. The cost taxonomy treats learning-rate scalings as
/// fused into the adjacent counted product, so these record nothing. Only for
/// applying a configured step size; never for model arithmetic.
[[nodiscard]] inline ComplexScalar lr_scale(ComplexScalar a, double eta) {
  return {eta * a.re, eta * a.im};
}
[[nodiscard]] inline double lr_scale(double a, double eta) { return eta * a; }

// ---------------------------------------------------------------------------
// Activation lookups (cost 0 by convention) and unmetered observation helpers
// ---------------------------------------------------------------------------

namespace act {

[[nodiscard]] ComplexScalar complex_tanh(ComplexScalar z);
[[nodiscard]] ComplexScalar complex_sech(ComplexScalar z);
[[nodiscard]] double real_tanh(double x);
/// exp(-t); the Gaussian bell evaluated on an already-metered exponent.
[[nodiscard]] double gaussian(double t);

}  // namespace act

/// Reporting-only arithmetic (loss values, magnitudes for assertions). Never
/// feeds model state and is excluded from the ledger by design; model code must
/// not use it for anything a formula accounts for.
namespace observe {

[[nodiscard]] double sqmag(ComplexScalar a);
[[nodiscard]] double magnitude(ComplexScalar a);
/// 0.5 * sum |want - got|^2
[[nodiscard]] double half_squared_error(std::span<const ComplexScalar> want,
                                        std::span<const ComplexScalar> got);
/// Mean absolute principal-angle difference, the loss proxy for unit-circle
/// outputs.
[[nodiscard]] double mean_angular_error(std::span<const ComplexScalar> want,
                                        std::span<const ComplexScalar> got);
[[nodiscard]] bool all_finite(std::span<const ComplexScalar> values);

}  // namespace observe

}  // namespace cvnn::numerics
