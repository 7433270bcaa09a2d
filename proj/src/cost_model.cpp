#include <cvnn/cost_model.hpp>

#include <algorithm>
#include <array>
#include <sstream>

namespace cvnn::cost_model {

namespace {

constexpr std::array<ArchKind, kArchCount> kAllArchs = {
    ArchKind::CVFNN, ArchKind::SCFNN, ArchKind::MLMVN,
    ArchKind::CRBF,  ArchKind::FCRBF, ArchKind::PTRBF,
};

[[noreturn]] void throw_shallow_only(ArchKind arch) {
  throw NotApplicableError(std::string(arch_display(arch)) +
                           " has no deep form: C-RBF and FC-RBF are "
                           "only proposed for shallow architectures");
}

}  // namespace

std::span<const ArchKind> all_archs() { return kAllArchs; }

const char* arch_id(ArchKind arch) {
  switch (arch) {
    case ArchKind::CVFNN: return "cvfnn";
    case ArchKind::SCFNN: return "scfnn";
    case ArchKind::MLMVN: return "mlmvn";
    case ArchKind::CRBF: return "crbf";
    case ArchKind::FCRBF: return "fcrbf";
    case ArchKind::PTRBF: return "ptrbf";
  }
  return "?";
}

const char* arch_display(ArchKind arch) {
  switch (arch) {
    case ArchKind::CVFNN: return "CVFNN";
    case ArchKind::SCFNN: return "SCFNN";
    case ArchKind::MLMVN: return "MLMVN";
    case ArchKind::CRBF: return "C-RBF";
    case ArchKind::FCRBF: return "FC-RBF";
    case ArchKind::PTRBF: return "PT-RBF";
  }
  return "?";
}

std::optional<ArchKind> parse_arch(const std::string& id) {
  for (ArchKind arch : kAllArchs) {
    if (id == arch_id(arch)) {
      return arch;
    }
  }
  return std::nullopt;
}

const char* mode_id(Mode mode) { return mode == Mode::Training ? "training" : "inference"; }

std::optional<Mode> parse_mode(const std::string& id) {
  if (id == "training") return Mode::Training;
  if (id == "inference") return Mode::Inference;
  return std::nullopt;
}

void ShallowSpec::validate() const {
  if (inputs < 1 || outputs < 1 || neurons < 1) {
    throw InvalidSpecError("shallow spec requires inputs, outputs and neurons >= 1");
  }
}

std::uint64_t DeepSpec::outputs() const {
  if (arch == ArchKind::PTRBF) {
    return bottleneck_dims.empty() ? 0 : bottleneck_dims.back();
  }
  return layer_units.empty() ? 0 : layer_units.back();
}

void DeepSpec::validate() const {
  if (!deep_capable(arch)) {
    throw_shallow_only(arch);
  }
  if (inputs < 1) {
    throw InvalidSpecError("deep spec requires inputs >= 1");
  }
  for (std::uint64_t u : layer_units) {
    if (u < 1) throw InvalidSpecError("deep spec layer widths must be >= 1");
  }
  if (arch == ArchKind::PTRBF) {
    if (layer_units.empty()) {
      throw InvalidSpecError("PT-RBF deep spec requires at least one layer");
    }
    if (bottleneck_dims.size() != layer_units.size()) {
      throw InvalidSpecError("PT-RBF deep spec needs one bottleneck width per layer");
    }
    for (std::uint64_t o : bottleneck_dims) {
      if (o < 1) throw InvalidSpecError("PT-RBF bottleneck widths must be >= 1");
    }
  } else {
    if (layer_units.size() < 2) {
      throw InvalidSpecError("perceptron deep spec requires at least two layers "
                             "(the last one is the output layer)");
    }
    if (!bottleneck_dims.empty()) {
      throw InvalidSpecError("bottleneck widths only apply to PT-RBF");
    }
  }
}

ArchKind spec_arch(const AnySpec& spec) {
  return std::visit([](const auto& s) { return s.arch; }, spec);
}

std::uint64_t spec_inputs(const AnySpec& spec) {
  return std::visit([](const auto& s) { return s.inputs; }, spec);
}

std::uint64_t spec_outputs(const AnySpec& spec) {
  if (const auto* shallow = std::get_if<ShallowSpec>(&spec)) {
    return shallow->outputs;
  }
  return std::get<DeepSpec>(spec).outputs();
}

void validate_spec(const AnySpec& spec) {
  std::visit([](const auto& s) { s.validate(); }, spec);
}

std::string spec_label(const AnySpec& spec) {
  std::ostringstream out;
  if (const auto* shallow = std::get_if<ShallowSpec>(&spec)) {
    out << arch_id(shallow->arch) << " shallow P=" << shallow->inputs
        << " R=" << shallow->outputs << " N=" << shallow->neurons;
    return out.str();
  }
  const auto& deep = std::get<DeepSpec>(spec);
  out << arch_id(deep.arch) << " deep P=" << deep.inputs << " units=[";
  for (std::size_t i = 0; i < deep.layer_units.size(); ++i) {
    out << (i ? "," : "") << deep.layer_units[i];
  }
  out << "]";
  if (!deep.bottleneck_dims.empty()) {
    out << " bottlenecks=[";
    for (std::size_t i = 0; i < deep.bottleneck_dims.size(); ++i) {
      out << (i ? "," : "") << deep.bottleneck_dims[i];
    }
    out << "]";
  }
  return out.str();
}

std::uint64_t shallow_cost(const ShallowSpec& spec, Mode mode) {
  spec.validate();
  const std::uint64_t p = spec.inputs;
  const std::uint64_t r = spec.outputs;
  const std::uint64_t n = spec.neurons;
  const bool training = mode == Mode::Training;
  switch (spec.arch) {
    case ArchKind::CVFNN:
      return training ? n * (8 * p + 12 * r + 8) + 8 * r : 4 * n * (p + r);
    case ArchKind::SCFNN:
      return training ? n * (8 * p + 12 * r + 8) + 6 * r : 4 * n * (p + r);
    case ArchKind::MLMVN:
      return training ? n * (8 * p + 12 * r + 16) + 12 * r : 4 * n * (p + r + 1) + 4 * r;
    case ArchKind::CRBF:
      return training ? n * (4 * p + 6 * r + 5) + 4 * r : n * (2 * p + 2 * r + 1);
    case ArchKind::FCRBF:
      return training ? n * (12 * p + 12 * r + 12) + 4 * r : 4 * n * (p + r);
    case ArchKind::PTRBF:
      return training ? n * (4 * p + 12 * r + 12) + 4 * r : 2 * n * (p + 2 * r + 1);
  }
  throw InvalidSpecError("unknown architecture");
}

std::uint64_t deep_cost(const DeepSpec& spec, Mode mode) {
  spec.validate();
  const bool training = mode == Mode::Training;

  if (spec.arch == ArchKind::PTRBF) {
    // width(l) = Gaussian units of layer l (1-based), bneck(l) = bottleneck
    // outputs of layer l, bneck(0) = network inputs.
    const std::size_t layers = spec.layer_count();
    auto width = [&](std::size_t l) { return spec.layer_units[l - 1]; };
    auto bneck = [&](std::size_t l) { return l == 0 ? spec.inputs : spec.bottleneck_dims[l - 1]; };
    std::uint64_t total = 0;
    if (training) {
      for (std::size_t l = 1; l <= layers; ++l) {
        total += 4 * width(l) * (bneck(l - 1) + 3 * bneck(l) + 3);
      }
      for (std::size_t l = 1; l + 1 <= layers; ++l) {
        total += 4 * bneck(l) * (width(l + 1) + 1);
      }
      total += 4 * bneck(layers);
    } else {
      for (std::size_t l = 1; l <= layers; ++l) {
        total += 2 * width(l) * (bneck(l - 1) + 2 * bneck(l) + 1);
      }
    }
    return total;
  }

  // Perceptron family: units(l) for l = 1..L with units(0) = inputs and
  // units(L) the output layer.
  const std::size_t layers = spec.layer_count();
  auto units = [&](std::size_t l) { return l == 0 ? spec.inputs : spec.layer_units[l - 1]; };
  std::uint64_t total = 0;
  if (!training) {
    for (std::size_t l = 1; l <= layers; ++l) {
      total += 4 * units(l) * units(l - 1);
      if (spec.arch == ArchKind::MLMVN) {
        total += 4 * units(l);
      }
    }
    return total;
  }
  const std::uint64_t hidden_extra = spec.arch == ArchKind::MLMVN ? 4 : 2;
  for (std::size_t l = 1; l + 1 <= layers; ++l) {
    total += 4 * units(l) * (2 * units(l - 1) + units(l + 1) + hidden_extra);
  }
  switch (spec.arch) {
    case ArchKind::CVFNN:
      total += 8 * units(layers) * (units(layers - 1) + 1);
      break;
    case ArchKind::SCFNN:
      total += 2 * units(layers) * (4 * units(layers - 1) + 3);
      break;
    case ArchKind::MLMVN:
      total += 4 * units(layers) * (2 * units(layers - 1) + 3);
      break;
    default:
      break;
  }
  return total;
}

std::uint64_t cost(const AnySpec& spec, Mode mode) {
  if (const auto* shallow = std::get_if<ShallowSpec>(&spec)) {
    return shallow_cost(*shallow, mode);
  }
  return deep_cost(std::get<DeepSpec>(spec), mode);
}

const char* regime_id(AsymptoticRegime regime) {
  switch (regime) {
    case AsymptoticRegime::ShallowNDominant: return "shallow-n-dominant";
    case AsymptoticRegime::ShallowBalanced: return "shallow-balanced";
    case AsymptoticRegime::DeepNDominant: return "deep-n-dominant";
    case AsymptoticRegime::DeepBalanced: return "deep-balanced";
  }
  return "?";
}

std::optional<AsymptoticRegime> parse_regime(const std::string& id) {
  for (int i = 0; i < kRegimeCount; ++i) {
    const auto regime = static_cast<AsymptoticRegime>(i);
    if (id == regime_id(regime)) {
      return regime;
    }
  }
  return std::nullopt;
}

const char* order_label(ComplexityOrder order) {
  switch (order) {
    case ComplexityOrder::Linear: return "O(N)";
    case ComplexityOrder::Quadratic: return "O(N^2)";
    case ComplexityOrder::Cubic: return "O(N^3)";
  }
  return "?";
}

ComplexityOrder asymptotic_class(ArchKind arch, AsymptoticRegime regime) {
  switch (regime) {
    case AsymptoticRegime::ShallowNDominant:
      return ComplexityOrder::Linear;
    case AsymptoticRegime::ShallowBalanced:
      return ComplexityOrder::Quadratic;
    case AsymptoticRegime::DeepNDominant:
      if (!deep_capable(arch)) throw_shallow_only(arch);
      return ComplexityOrder::Quadratic;
    case AsymptoticRegime::DeepBalanced:
      if (!deep_capable(arch)) throw_shallow_only(arch);
      return ComplexityOrder::Cubic;
  }
  throw InvalidArgumentError("unknown asymptotic regime");
}

void NRange::validate() const {
  if (step < 1) {
    throw InvalidArgumentError("neuron range step must be >= 1");
  }
  if (start < 1) {
    throw InvalidArgumentError("neuron range start must be >= 1");
  }
}

std::vector<std::uint64_t> NRange::values() const {
  validate();
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = start; n <= stop; n += step) {
    out.push_back(n);
  }
  return out;
}

NRange NRange::parse(const std::string& text) {
  NRange range;
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(text);
  if (!(in >> range.start >> sep1 >> range.stop >> sep2 >> range.step) || sep1 != ':' ||
      sep2 != ':' || !(in >> std::ws).eof()) {
    throw InvalidArgumentError("neuron range must look like start:stop:step");
  }
  range.validate();
  return range;
}

std::vector<SweepRow> sweep(std::span<const ArchKind> archs, Mode mode, std::uint64_t inputs,
                            std::uint64_t outputs, const NRange& range) {
  const std::vector<std::uint64_t> neuron_counts = range.values();
  std::vector<SweepRow> rows;
  for (ArchKind arch : kAllArchs) {  // canonical enum order regardless of request order
    if (std::find(archs.begin(), archs.end(), arch) == archs.end()) {
      continue;
    }
    for (std::uint64_t n : neuron_counts) {
      const ShallowSpec spec{arch, inputs, outputs, n};
      rows.push_back({arch, mode, inputs, outputs, n, shallow_cost(spec, mode)});
    }
  }
  return rows;
}

}  // namespace cvnn::cost_model
