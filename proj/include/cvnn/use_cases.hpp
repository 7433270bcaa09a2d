#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <cvnn/cost_model.hpp>

namespace cvnn::harness {

enum class UseCaseStatus { Derived, Open };

/// One architecture entry of a bundled use case. Derived entries carry the
/// configuration that reproduces the published multiplication counts exactly
/// together with the solving note; Open entries only echo the target numbers.
struct UseCaseEntry {
  std::string use_case;  // short id, e.g. "mimo"
  std::string title;     // display title of the use case
  cost_model::ArchKind arch{cost_model::ArchKind::CVFNN};
  UseCaseStatus status{UseCaseStatus::Derived};
  std::optional<cost_model::AnySpec> spec{};  // absent for Open entries
  std::uint64_t expected_training{0};
  std::uint64_t expected_inference{0};
  std::string derivation{};

  bool operator==(const UseCaseEntry&) const = default;
};

struct UseCaseTable {
  std::vector<UseCaseEntry> entries;

  /// Use-case ids in first-appearance order.
  [[nodiscard]] std::vector<std::string> case_ids() const;
  bool operator==(const UseCaseTable&) const = default;
};

/// The table bundled with the project (same content as data/use_cases.json).
[[nodiscard]] const std::string& default_use_case_json();
[[nodiscard]] UseCaseTable default_use_case_table();

[[nodiscard]] UseCaseTable parse_use_case_table(const std::string& json_text);
[[nodiscard]] UseCaseTable load_use_case_table(const std::string& path);

struct ReproductionCell {
  std::size_t entry_index{0};
  cost_model::Mode mode{cost_model::Mode::Training};
  std::uint64_t expected{0};
  std::optional<std::uint64_t> actual{};  // absent for open cells
  bool matched{false};                    // false for open cells
};

struct ReproductionReport {
  std::vector<ReproductionCell> cells;
  std::size_t derived_cells{0};
  std::size_t matched_cells{0};
  std::size_t open_cells{0};

  [[nodiscard]] bool all_derived_match() const { return matched_cells == derived_cells; }
};

/// Evaluates every Derived entry's closed form against its expected numbers.
[[nodiscard]] ReproductionReport reproduce_use_cases(const UseCaseTable& table);

}  // namespace cvnn::harness
