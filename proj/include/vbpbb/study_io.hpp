#pragma once

#include "vbpbb/simulation.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vbpbb {

using json = nlohmann::json;

[[nodiscard]] json to_json(const Scenario& scenario);
/// Fields missing from `j` take their values from `defaults`.
[[nodiscard]] Scenario scenario_from_json(const json& j, const Scenario& defaults);

/// Grid document: either an array of scenario objects or
/// {"defaults": {...}, "scenarios": [...]}. Scenarios without a master_seed get `seed`.
[[nodiscard]] std::vector<Scenario> parse_grid(const json& document, Seed seed);

[[nodiscard]] json to_json(const ComparisonRecord& record);
[[nodiscard]] ComparisonRecord record_from_json(const json& j);
[[nodiscard]] json to_json(const ScenarioSummary& summary);

/// Full report: scenario echo, rng identity, summary and per-repetition records.
[[nodiscard]] json to_json(const ScenarioReport& report);
/// Rebuilds a report; the summary is recomputed from the stored records.
[[nodiscard]] ScenarioReport report_from_json(const json& j);

/// The four study tables: width ratio, r-squared gain, outside-fraction gap,
/// and width ratio for null-component scenarios.
enum class TableId { width_ratio = 1, rsq_difference = 2, outside_difference = 3, null_width_ratio = 4 };

[[nodiscard]] std::optional<TableId> table_from_number(int number) noexcept;
[[nodiscard]] std::string table_file_name(TableId id);

struct StudyTable {
    TableId id;
    std::vector<std::string> rows;     ///< period labels, ordered by period
    std::vector<double> columns;       ///< noise variances, ascending
    std::vector<std::optional<double>> cells;  ///< row-major

    [[nodiscard]] const std::optional<double>& cell(std::size_t row, std::size_t col) const {
        return cells.at(row * columns.size() + col);
    }
};

/// Throws Error(invalid_parameter) if two reports land in the same cell.
[[nodiscard]] StudyTable build_table(std::span<const ScenarioReport> reports, TableId id);

/// CSV with `#` metadata lines, header `period,<variance>...` and one row per period.
/// Paper style rounds to two decimals and renders the outside-fraction table
/// as "<0.01" / "<0.05" thresholds.
[[nodiscard]] std::string render_table(const StudyTable& table, bool paper_style = false);

}  // namespace vbpbb
