#include <cvnn/cli.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <cvnn/cost_model.hpp>
#include <cvnn/harness.hpp>
#include <cvnn/use_cases.hpp>

#include "svg_plot.hpp"

namespace cvnn::cli {

namespace {

using cost_model::AnySpec;
using cost_model::ArchKind;
using cost_model::DeepSpec;
using cost_model::Mode;
using cost_model::ShallowSpec;

std::vector<std::uint64_t> parse_u64_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const std::uint64_t value = std::stoull(item, &used);
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
      out.push_back(value);
    } catch (const std::exception&) {
      throw InvalidArgumentError(std::string(what) + " must be a comma list of integers");
    }
  }
  if (out.empty()) {
    throw InvalidArgumentError(std::string(what) + " must not be empty");
  }
  return out;
}

ArchKind parse_arch_or_throw(const std::string& id) {
  const auto arch = cost_model::parse_arch(id);
  if (!arch) {
    throw InvalidArgumentError("unknown architecture '" + id +
                               "' (expected cvfnn, scfnn, mlmvn, crbf, fcrbf or ptrbf)");
  }
  return *arch;
}

std::vector<Mode> parse_modes_or_throw(const std::string& id) {
  if (id == "both") {
    return {Mode::Training, Mode::Inference};
  }
  const auto mode = cost_model::parse_mode(id);
  if (!mode) {
    throw InvalidArgumentError("mode must be training, inference or both");
  }
  return {*mode};
}

AnySpec build_spec(ArchKind arch, std::uint64_t inputs, std::uint64_t outputs,
                   const std::vector<std::uint64_t>& neurons,
                   const std::vector<std::uint64_t>& bottlenecks) {
  if (neurons.size() == 1 && bottlenecks.empty()) {
    const ShallowSpec spec{arch, inputs, outputs, neurons[0]};
    spec.validate();
    return spec;
  }
  DeepSpec spec;
  spec.arch = arch;
  spec.inputs = inputs;
  spec.layer_units = neurons;
  spec.bottleneck_dims = bottlenecks;
  spec.validate();
  if (spec.outputs() != outputs) {
    throw InvalidSpecError("the last layer width must equal --outputs");
  }
  return spec;
}

AnySpec spec_from_config_file(const std::string& path, std::vector<Mode>& modes) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("config file is not valid JSON: ") + e.what());
  }
  static const char* kKeys[] = {"architecture", "mode", "inputs", "outputs", "neurons",
                                "bottlenecks"};
  for (const auto& item : root.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* k) { return item.key() == k; }) == std::end(kKeys)) {
      throw InvalidArgumentError("unknown key '" + item.key() + "' in config file");
    }
  }
  const auto read_u64 = [&](const char* key) {
    if (!root.contains(key) || !root.at(key).is_number_unsigned()) {
      throw InvalidArgumentError(std::string("config needs unsigned integer '") + key + "'");
    }
    return root.at(key).get<std::uint64_t>();
  };
  if (!root.contains("architecture") || !root.at("architecture").is_string()) {
    throw InvalidArgumentError("config needs a string 'architecture'");
  }
  const ArchKind arch = parse_arch_or_throw(root.at("architecture").get<std::string>());
  modes = parse_modes_or_throw(root.value("mode", "both"));

  const auto read_list = [&](const char* key) {
    std::vector<std::uint64_t> values;
    const auto& node = root.at(key);
    if (node.is_number_unsigned()) {
      values.push_back(node.get<std::uint64_t>());
    } else if (node.is_array()) {
      for (const auto& v : node) {
        if (!v.is_number_unsigned()) {
          throw InvalidArgumentError(std::string("config '") + key + "' must hold integers");
        }
        values.push_back(v.get<std::uint64_t>());
      }
    } else {
      throw InvalidArgumentError(std::string("config '") + key +
                                 "' must be an integer or integer list");
    }
    return values;
  };

  if (!root.contains("neurons")) {
    throw InvalidArgumentError("config needs 'neurons'");
  }
  std::vector<std::uint64_t> bottlenecks;
  if (root.contains("bottlenecks")) {
    bottlenecks = read_list("bottlenecks");
  }
  return build_spec(arch, read_u64("inputs"), read_u64("outputs"), read_list("neurons"),
                    bottlenecks);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CVNN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgumentError("CVNN_SEED must be an unsigned integer");
    }
  }
  return 0;
}

int cmd_cost(const std::string& config_path, const std::string& arch_id, std::uint64_t inputs,
             std::uint64_t outputs, const std::string& neurons_text,
             const std::string& bottlenecks_text, const std::string& mode_id, std::ostream& out) {
  AnySpec spec;
  std::vector<Mode> modes;
  if (!config_path.empty()) {
    spec = spec_from_config_file(config_path, modes);
  } else {
    if (arch_id.empty() || neurons_text.empty()) {
      throw InvalidArgumentError("cost needs --arch, --inputs, --outputs and --neurons "
                                 "(or --config)");
    }
    const ArchKind arch = parse_arch_or_throw(arch_id);
    modes = parse_modes_or_throw(mode_id);
    std::vector<std::uint64_t> bottlenecks;
    if (!bottlenecks_text.empty()) {
      bottlenecks = parse_u64_list(bottlenecks_text, "--bottlenecks");
    }
    spec = build_spec(arch, inputs, outputs, parse_u64_list(neurons_text, "--neurons"),
                      bottlenecks);
  }
  if (modes.size() == 1) {
    out << cost_model::cost(spec, modes[0]) << "\n";
  } else {
    for (Mode mode : modes) {
      out << cost_model::mode_id(mode) << " " << cost_model::cost(spec, mode) << "\n";
    }
  }
  return kExitOk;
}

int cmd_sweep(const std::string& archs_text, const std::string& mode_id, std::uint64_t inputs,
              std::uint64_t outputs, const std::string& range_text, const std::string& out_path,
              const std::string& plot_path, std::ostream& out) {
  std::vector<ArchKind> archs;
  if (archs_text == "all") {
    archs.assign(cost_model::all_archs().begin(), cost_model::all_archs().end());
  } else {
    std::istringstream in(archs_text);
    std::string item;
    while (std::getline(in, item, ',')) {
      archs.push_back(parse_arch_or_throw(item));
    }
    if (archs.empty()) {
      throw InvalidArgumentError("--archs must name at least one architecture");
    }
  }
  const std::vector<Mode> modes = parse_modes_or_throw(mode_id);
  const cost_model::NRange range = cost_model::NRange::parse(range_text);
  const ShallowSpec probe{ArchKind::CVFNN, inputs, outputs, 1};
  probe.validate();  // surfaces bad --inputs/--outputs before writing anything

  std::ofstream csv(out_path);
  if (!csv) {
    throw IoError("cannot write CSV file: " + out_path);
  }
  csv << "arch,mode,P,R,N,multiplications\n";
  std::vector<PlotSeries> series;
  for (ArchKind arch : cost_model::all_archs()) {
    if (std::find(archs.begin(), archs.end(), arch) == archs.end()) {
      continue;
    }
    std::map<Mode, PlotSeries> arch_series;
    for (std::uint64_t n : range.values()) {
      for (Mode mode : modes) {
        const std::uint64_t cost = cost_model::shallow_cost({arch, inputs, outputs, n}, mode);
        csv << cost_model::arch_id(arch) << "," << cost_model::mode_id(mode) << "," << inputs
            << "," << outputs << "," << n << "," << cost << "\n";
        auto& s = arch_series[mode];
        if (s.label.empty()) {
          s.label = cost_model::arch_display(arch);
          if (modes.size() > 1) {
            s.label += std::string(" ") + cost_model::mode_id(mode);
          }
        }
        s.points.emplace_back(static_cast<double>(n), static_cast<double>(cost));
      }
    }
    for (auto& [mode, s] : arch_series) {
      series.push_back(std::move(s));
    }
  }
  csv.flush();
  if (!csv) {
    throw IoError("failed while writing CSV file: " + out_path);
  }

  if (!plot_path.empty()) {
    std::ofstream svg(plot_path);
    if (!svg) {
      throw IoError("cannot write chart file: " + plot_path);
    }
    std::ostringstream title;
    title << "Real multiplications vs hidden neurons (P=" << inputs << ", R=" << outputs << ")";
    svg << render_loglog_svg(title.str(), "hidden neurons N", "real multiplications", series);
    if (!svg) {
      throw IoError("failed while writing chart file: " + plot_path);
    }
  }
  out << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_verify(std::uint64_t trials, std::uint64_t seed, bool corrupt_formula, std::ostream& out,
               std::ostream& err) {
  if (trials < 1) {
    throw InvalidArgumentError("--trials must be >= 1");
  }
  std::uint64_t stream = seed;
  std::vector<harness::CountReport> mismatches;
  std::uint64_t total = 0;
  std::uint64_t matched = 0;
  for (ArchKind arch : cost_model::all_archs()) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      const AnySpec spec = harness::random_shallow_spec(arch, ++stream);
      harness::CountReport report = harness::run_count_check(spec, Mode::Training, ++stream);
      if (corrupt_formula) {  // test fixture: force a formula-side discrepancy
        report.formula_count += 1;
        report.match = false;
      }
      ++total;
      if (report.match) {
        ++matched;
      } else {
        mismatches.push_back(std::move(report));
      }
    }
  }
  out << matched << "/" << total << " match\n";
  constexpr std::size_t kMaxPrinted = 10;
  for (std::size_t i = 0; i < mismatches.size() && i < kMaxPrinted; ++i) {
    err << harness::describe(mismatches[i]) << "\n";
  }
  if (mismatches.size() > kMaxPrinted) {
    err << "... and " << mismatches.size() - kMaxPrinted << " more mismatches\n";
  }
  return mismatches.empty() ? kExitOk : kExitVerificationFailure;
}

int cmd_reproduce(const std::string& table_path, std::ostream& out) {
  const harness::UseCaseTable table = table_path.empty()
                                          ? harness::default_use_case_table()
                                          : harness::load_use_case_table(table_path);
  const harness::ReproductionReport report = harness::reproduce_use_cases(table);

  // cell text per (entry, mode), from the reproduction cells
  std::map<std::pair<std::size_t, int>, std::string> cell_text;
  for (const auto& cell : report.cells) {
    std::ostringstream text;
    text << cell.expected;
    if (!cell.actual.has_value()) {
      text << " open";
    } else if (cell.matched) {
      text << " ✓";
    } else {
      text << " ✗(" << *cell.actual << ")";
    }
    cell_text[{cell.entry_index, static_cast<int>(cell.mode)}] = text.str();
  }

  // setw counts bytes, not glyphs; pad by display width so the check marks
  // keep columns aligned.
  const auto pad = [](std::string text, std::size_t width) {
    std::size_t display = 0;
    for (std::size_t i = 0; i < text.size(); ++display) {
      const auto c = static_cast<unsigned char>(text[i]);
      i += c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
    }
    if (display < width) {
      text.append(width - display, ' ');
    }
    return text;
  };

  const std::vector<std::string> cases = table.case_ids();
  constexpr std::size_t kCell = 14;
  out << pad("CVNN", 8);
  for (const auto& id : cases) {
    out << pad(id, 2 * kCell);
  }
  out << "\n" << pad("", 8);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    out << pad("training", kCell) << pad("inference", kCell);
  }
  out << "\n";
  for (ArchKind arch : cost_model::all_archs()) {
    out << pad(cost_model::arch_display(arch), 8);
    for (const auto& id : cases) {
      bool found = false;
      for (std::size_t e = 0; e < table.entries.size(); ++e) {
        if (table.entries[e].use_case == id && table.entries[e].arch == arch) {
          out << pad(cell_text[{e, 0}], kCell) << pad(cell_text[{e, 1}], kCell);
          found = true;
          break;
        }
      }
      if (!found) {
        out << pad("-", kCell) << pad("-", kCell);
      }
    }
    out << "\n";
  }
  out << report.matched_cells << "/" << report.derived_cells << " derived cells match, "
      << report.open_cells << " open\n";
  return report.all_derived_match() ? kExitOk : kExitVerificationFailure;
}

int cmd_asym(const std::string& arch_id, const std::string& regime_id, std::ostream& out) {
  const ArchKind arch = parse_arch_or_throw(arch_id);
  const auto regime = cost_model::parse_regime(regime_id);
  if (!regime) {
    throw InvalidArgumentError(
        "regime must be shallow-n-dominant, shallow-balanced, deep-n-dominant or deep-balanced");
  }
  out << cost_model::order_label(cost_model::asymptotic_class(arch, *regime)) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metered complex-valued neural networks and their multiplication cost model"};
  app.name("cvnnmeter");
  app.require_subcommand(0, 1);

  // cost
  auto* cost = app.add_subcommand("cost", "Evaluate the closed-form multiplication cost");
  std::string cost_arch, cost_neurons, cost_bottlenecks, cost_mode = "both", cost_config;
  std::uint64_t cost_inputs = 0, cost_outputs = 0;
  cost->add_option("--arch", cost_arch, "Architecture id");
  cost->add_option("--inputs", cost_inputs, "Complex input count");
  cost->add_option("--outputs", cost_outputs, "Complex output count");
  cost->add_option("--neurons", cost_neurons, "Hidden neurons (scalar) or layer list for deep");
  cost->add_option("--bottlenecks", cost_bottlenecks, "Bottleneck widths (ptrbf deep)");
  cost->add_option("--mode", cost_mode, "training, inference or both")->capture_default_str();
  cost->add_option("--config", cost_config, "JSON run config instead of flags");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Tabulate costs across a neuron range into CSV");
  std::string sweep_archs = "all", sweep_mode = "inference", sweep_range, sweep_out, sweep_plot;
  std::uint64_t sweep_inputs = 0, sweep_outputs = 0;
  sweep->add_option("--archs", sweep_archs, "Comma list of architecture ids or 'all'")
      ->capture_default_str();
  sweep->add_option("--mode", sweep_mode, "training, inference or both")->capture_default_str();
  sweep->add_option("--inputs", sweep_inputs, "Complex input count")->required();
  sweep->add_option("--outputs", sweep_outputs, "Complex output count")->required();
  sweep->add_option("--n-range", sweep_range, "Neuron range start:stop:step")->required();
  sweep->add_option("--out", sweep_out, "CSV output path")->required();
  sweep->add_option("--plot", sweep_plot, "Optional SVG chart path");

  // verify
  auto* verify = app.add_subcommand("verify", "Compare metered runs against the closed forms");
  std::uint64_t verify_trials = 100;
  std::uint64_t verify_seed = 0;
  bool verify_seed_given = false;
  bool verify_corrupt = false;
  verify->add_option("--trials", verify_trials, "Random specs per architecture")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "Random seed (default: CVNN_SEED or 0)")
      ->each([&](const std::string&) { verify_seed_given = true; });
  verify->add_flag("--corrupt-formula", verify_corrupt)->group("");  // test fixture

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "Evaluate the bundled use-case table");
  std::string reproduce_table;
  reproduce->add_option("--table", reproduce_table, "Use-case table JSON (default: bundled)");

  // asym
  auto* asym = app.add_subcommand("asym", "Print the asymptotic complexity class");
  std::string asym_arch, asym_regime;
  asym->add_option("--arch", asym_arch, "Architecture id")->required();
  asym->add_option("--regime", asym_regime, "Parameter-coupling regime")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (app.get_subcommands().empty()) {
      out << app.help();
      return kExitOk;
    }
    if (cost->parsed()) {
      if (!cost_config.empty() &&
          (!cost_arch.empty() || !cost_neurons.empty() || !cost_bottlenecks.empty())) {
        throw InvalidArgumentError("--config excludes the spec flags");
      }
      return cmd_cost(cost_config, cost_arch, cost_inputs, cost_outputs, cost_neurons,
                      cost_bottlenecks, cost_mode, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_archs, sweep_mode, sweep_inputs, sweep_outputs, sweep_range,
                       sweep_out, sweep_plot, out);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_trials, verify_seed_given ? verify_seed : default_seed(),
                        verify_corrupt, out, err);
    }
    if (reproduce->parsed()) {
      return cmd_reproduce(reproduce_table, out);
    }
    if (asym->parsed()) {
      return cmd_asym(asym_arch, asym_regime, out);
    }
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NotApplicableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotApplicable;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidSpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}

}  // namespace cvnn::cli
