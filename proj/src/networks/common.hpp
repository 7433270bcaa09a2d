#pragma once

#include <cvnn/networks.hpp>

// Internal glue shared by the architecture implementations. Everything in
// src/networks is kept free of raw multiply and divide tokens; arithmetic that
// the cost taxonomy accounts for goes through the metered kernels, index math
// goes through Grid, and reporting goes through numerics::observe.
namespace cvnn::networks::detail {

using numerics::Meter;
using numerics::Phase;
using numerics::PhaseGuard;

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw InvalidArgumentError(message);
  }
}

// Per-architecture entry points, dispatched from networks.cpp.
[[nodiscard]] std::vector<ComplexScalar> perceptron_infer(const PerceptronState& state,
                                                          ArchKind arch,
                                                          std::span<const ComplexScalar> input,
                                                          Meter& meter);
double perceptron_train(PerceptronState& state, ArchKind arch,
                        std::span<const ComplexScalar> input,
                        std::span<const ComplexScalar> target, const TrainConfig& config,
                        Meter& meter);

[[nodiscard]] std::vector<ComplexScalar> crbf_infer(const CrbfState& state,
                                                    std::span<const ComplexScalar> input,
                                                    Meter& meter);
double crbf_train(CrbfState& state, std::span<const ComplexScalar> input,
                  std::span<const ComplexScalar> target, const TrainConfig& config, Meter& meter);

[[nodiscard]] std::vector<ComplexScalar> fcrbf_infer(const FcrbfState& state,
                                                     std::span<const ComplexScalar> input,
                                                     Meter& meter);
double fcrbf_train(FcrbfState& state, std::span<const ComplexScalar> input,
                   std::span<const ComplexScalar> target, const TrainConfig& config, Meter& meter);

[[nodiscard]] std::vector<ComplexScalar> ptrbf_infer(const PtrbfState& state,
                                                     std::span<const ComplexScalar> input,
                                                     Meter& meter);
double ptrbf_train(PtrbfState& state, std::span<const ComplexScalar> input,
                   std::span<const ComplexScalar> target, const TrainConfig& config, Meter& meter);

}  // namespace cvnn::networks::detail
