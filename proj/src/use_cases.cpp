#include <cvnn/use_cases.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cvnn::harness {

namespace {

using cost_model::AnySpec;
using cost_model::ArchKind;
using cost_model::DeepSpec;
using cost_model::ShallowSpec;
using nlohmann::json;

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& item : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
          return item.key() == key;
        }) == allowed.end()) {
      throw InvalidArgumentError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

std::uint64_t read_u64(const json& object, const char* key, const char* where) {
  if (!object.contains(key) || !object.at(key).is_number_unsigned()) {
    throw InvalidArgumentError(std::string("missing or non-integer '") + key + "' in " + where);
  }
  return object.at(key).get<std::uint64_t>();
}

std::vector<std::uint64_t> read_u64_list(const json& value, const char* where) {
  if (!value.is_array() || value.empty()) {
    throw InvalidArgumentError(std::string("expected a non-empty integer list in ") + where);
  }
  std::vector<std::uint64_t> out;
  for (const auto& item : value) {
    if (!item.is_number_unsigned()) {
      throw InvalidArgumentError(std::string("expected unsigned integers in ") + where);
    }
    out.push_back(item.get<std::uint64_t>());
  }
  return out;
}

AnySpec parse_spec(ArchKind arch, const json& spec_json) {
  reject_unknown_keys(spec_json, {"inputs", "outputs", "neurons", "bottlenecks"}, "spec");
  const std::uint64_t inputs = read_u64(spec_json, "inputs", "spec");
  const std::uint64_t outputs = read_u64(spec_json, "outputs", "spec");
  if (!spec_json.contains("neurons")) {
    throw InvalidArgumentError("spec is missing 'neurons'");
  }
  const json& neurons = spec_json.at("neurons");
  if (neurons.is_number_unsigned() && !spec_json.contains("bottlenecks")) {
    ShallowSpec spec{arch, inputs, outputs, neurons.get<std::uint64_t>()};
    spec.validate();
    return spec;
  }
  DeepSpec spec;
  spec.arch = arch;
  spec.inputs = inputs;
  spec.layer_units = neurons.is_number_unsigned()
                         ? std::vector<std::uint64_t>{neurons.get<std::uint64_t>()}
                         : read_u64_list(neurons, "spec.neurons");
  if (spec_json.contains("bottlenecks")) {
    spec.bottleneck_dims = read_u64_list(spec_json.at("bottlenecks"), "spec.bottlenecks");
  }
  spec.validate();
  if (spec.outputs() != outputs) {
    throw InvalidArgumentError("deep spec output layer width disagrees with 'outputs'");
  }
  return spec;
}

}  // namespace

std::vector<std::string> UseCaseTable::case_ids() const {
  std::vector<std::string> ids;
  for (const auto& entry : entries) {
    if (std::find(ids.begin(), ids.end(), entry.use_case) == ids.end()) {
      ids.push_back(entry.use_case);
    }
  }
  return ids;
}

UseCaseTable parse_use_case_table(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("use-case table is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(root, {"use_cases"}, "table");
  if (!root.contains("use_cases") || !root.at("use_cases").is_array()) {
    throw InvalidArgumentError("use-case table needs a 'use_cases' array");
  }

  UseCaseTable table;
  for (const auto& use_case : root.at("use_cases")) {
    reject_unknown_keys(use_case, {"name", "title", "entries"}, "use case");
    const std::string name = use_case.value("name", "");
    const std::string title = use_case.value("title", name);
    if (name.empty() || !use_case.contains("entries")) {
      throw InvalidArgumentError("each use case needs a 'name' and 'entries'");
    }
    for (const auto& entry_json : use_case.at("entries")) {
      reject_unknown_keys(entry_json, {"architecture", "status", "spec", "expected", "derivation"},
                          "entry");
      UseCaseEntry entry;
      entry.use_case = name;
      entry.title = title;
      const auto arch = cost_model::parse_arch(entry_json.value("architecture", ""));
      if (!arch) {
        throw InvalidArgumentError("entry has an unknown 'architecture'");
      }
      entry.arch = *arch;
      const std::string status = entry_json.value("status", "");
      if (status == "derived") {
        entry.status = UseCaseStatus::Derived;
      } else if (status == "open") {
        entry.status = UseCaseStatus::Open;
      } else {
        throw InvalidArgumentError("entry status must be 'derived' or 'open'");
      }
      if (!entry_json.contains("expected")) {
        throw InvalidArgumentError("entry is missing 'expected'");
      }
      const json& expected = entry_json.at("expected");
      reject_unknown_keys(expected, {"training", "inference"}, "expected");
      entry.expected_training = read_u64(expected, "training", "expected");
      entry.expected_inference = read_u64(expected, "inference", "expected");
      entry.derivation = entry_json.value("derivation", "");
      if (entry.status == UseCaseStatus::Derived) {
        if (!entry_json.contains("spec")) {
          throw InvalidArgumentError("derived entries need a 'spec'");
        }
        entry.spec = parse_spec(entry.arch, entry_json.at("spec"));
      } else if (entry_json.contains("spec")) {
        throw InvalidArgumentError("open entries must not carry a 'spec'");
      }
      table.entries.push_back(std::move(entry));
    }
  }
  return table;
}

UseCaseTable load_use_case_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open use-case table: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_use_case_table(buffer.str());
}

UseCaseTable default_use_case_table() { return parse_use_case_table(default_use_case_json()); }

ReproductionReport reproduce_use_cases(const UseCaseTable& table) {
  ReproductionReport report;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const UseCaseEntry& entry = table.entries[i];
    for (cost_model::Mode mode : {cost_model::Mode::Training, cost_model::Mode::Inference}) {
      ReproductionCell cell;
      cell.entry_index = i;
      cell.mode = mode;
      cell.expected =
          mode == cost_model::Mode::Training ? entry.expected_training : entry.expected_inference;
      if (entry.status == UseCaseStatus::Open) {
        report.open_cells += 1;
      } else {
        cell.actual = cost_model::cost(*entry.spec, mode);
        cell.matched = *cell.actual == cell.expected;
        report.derived_cells += 1;
        if (cell.matched) {
          report.matched_cells += 1;
        }
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace cvnn::harness
