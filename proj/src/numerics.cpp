#include <cvnn/numerics.hpp>

#include <cmath>
#include <complex>
#include <limits>

namespace cvnn::numerics {

namespace {

constexpr std::size_t cell_index(Phase phase, MultKind kind) {
  return static_cast<std::size_t>(phase) * static_cast<std::size_t>(kMultKindCount) +
         static_cast<std::size_t>(kind);
}

}  // namespace

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Forward: return "forward";
    case Phase::BackwardDelta: return "backward-delta";
    case Phase::ParameterUpdate: return "parameter-update";
  }
  return "?";
}

const char* mult_kind_name(MultKind kind) {
  switch (kind) {
    case MultKind::ComplexTimesComplex: return "complex*complex";
    case MultKind::ComplexTimesReal: return "complex*real";
    case MultKind::RealTimesReal: return "real*real";
    case MultKind::SquaredMagnitude: return "squared-magnitude";
    case MultKind::RealDivision: return "real-division";
  }
  return "?";
}

std::uint64_t MultCounter::occurrences(Phase phase, MultKind kind) const {
  return cells_[cell_index(phase, kind)];
}

std::uint64_t MultCounter::real_mults(Phase phase, MultKind kind) const {
  return occurrences(phase, kind) * mult_cost(kind);
}

std::uint64_t MultCounter::phase_total(Phase phase) const {
  std::uint64_t total = 0;
  for (int k = 0; k < kMultKindCount; ++k) {
    total += real_mults(phase, static_cast<MultKind>(k));
  }
  return total;
}

std::uint64_t MultCounter::kind_occurrences(MultKind kind) const {
  std::uint64_t total = 0;
  for (int p = 0; p < kPhaseCount; ++p) {
    total += occurrences(static_cast<Phase>(p), kind);
  }
  return total;
}

std::uint64_t MultCounter::grand_total() const {
  std::uint64_t total = 0;
  for (int p = 0; p < kPhaseCount; ++p) {
    total += phase_total(static_cast<Phase>(p));
  }
  return total;
}

void MultCounter::add(Phase phase, MultKind kind, std::uint64_t count) {
  auto& cell = cells_[cell_index(phase, kind)];
  if (cell > std::numeric_limits<std::uint64_t>::max() - count) {
    throw LedgerError("multiplication counter overflow");
  }
  cell += count;
}

void MultCounter::reset() { cells_.fill(0); }

MultCounter counter_diff(const MultCounter& before, const MultCounter& after) {
  MultCounter out;
  for (int p = 0; p < kPhaseCount; ++p) {
    for (int k = 0; k < kMultKindCount; ++k) {
      const auto phase = static_cast<Phase>(p);
      const auto kind = static_cast<MultKind>(k);
      const std::uint64_t b = before.occurrences(phase, kind);
      const std::uint64_t a = after.occurrences(phase, kind);
      if (a < b) {
        throw LedgerError("counter diff would be negative: ledger corruption");
      }
      out.add(phase, kind, a - b);
    }
  }
  return out;
}

void Meter::reset() {
  counter_.reset();
  events_.clear();
}

void Meter::record(MultKind kind) {
  if (!phase_) {
    throw KernelError("metered kernel invoked without an active phase");
  }
  counter_.add(*phase_, kind);
  if (recording_) {
    events_.push_back({*phase_, kind});
  }
}

ComplexScalar cmul(ComplexScalar a, ComplexScalar b, Meter& meter) {
  meter.record(MultKind::ComplexTimesComplex);
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexScalar cscale(ComplexScalar a, double r, Meter& meter) {
  meter.record(MultKind::ComplexTimesReal);
  return {r * a.re, r * a.im};
}

double rmul(double a, double b, Meter& meter) {
  meter.record(MultKind::RealTimesReal);
  return a * b;
}

double sqmag(ComplexScalar a, Meter& meter) {
  meter.record(MultKind::SquaredMagnitude);
  return a.re * a.re + a.im * a.im;
}

double div_real(double a, double b, Meter& meter) {
  if (b == 0.0) {
    throw KernelError("real division by zero");
  }
  meter.record(MultKind::RealDivision);
  return a / b;
}

namespace act {

ComplexScalar complex_tanh(ComplexScalar z) {
  const std::complex<double> w = std::tanh(std::complex<double>(z.re, z.im));
  return {w.real(), w.imag()};
}

ComplexScalar complex_sech(ComplexScalar z) {
  const std::complex<double> w = 1.0 / std::cosh(std::complex<double>(z.re, z.im));
  return {w.real(), w.imag()};
}

double real_tanh(double x) { return std::tanh(x); }

double gaussian(double t) { return std::exp(-t); }

}  // namespace act

namespace observe {

double sqmag(ComplexScalar a) { return a.re * a.re + a.im * a.im; }

double magnitude(ComplexScalar a) { return std::hypot(a.re, a.im); }

double half_squared_error(std::span<const ComplexScalar> want,
                          std::span<const ComplexScalar> got) {
  double total = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const ComplexScalar e = want[i] - got[i];
    total += sqmag(e);
  }
  return 0.5 * total;
}

double mean_angular_error(std::span<const ComplexScalar> want,
                          std::span<const ComplexScalar> got) {
  if (want.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    double d = std::atan2(want[i].im, want[i].re) - std::atan2(got[i].im, got[i].re);
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    total += std::abs(d);
  }
  return total / static_cast<double>(want.size());
}

bool all_finite(std::span<const ComplexScalar> values) {
  for (const auto& v : values) {
    if (!std::isfinite(v.re) || !std::isfinite(v.im)) {
      return false;
    }
  }
  return true;
}

}  // namespace observe

}  // namespace cvnn::numerics
