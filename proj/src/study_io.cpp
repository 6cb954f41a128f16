#include "vbpbb/study_io.hpp"

#include "vbpbb/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

namespace vbpbb {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorKind::invalid_parameter, fmt::format("malformed scenario: {}", what));
}

std::size_t count_field(const json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) malformed(fmt::format("'{}' must be a nonnegative integer", key));
    return v.get<std::size_t>();
}

double real_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) malformed(fmt::format("'{}' must be a number", key));
    return v.get<double>();
}

bool bool_field(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_boolean()) malformed(fmt::format("'{}' must be true or false", key));
    return v.get<bool>();
}

/// JSON has no infinity; non-finite values travel as strings.
json real_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double real_from_json(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw Error(ErrorKind::parse, "expected a number in report");
}

json optional_json(const std::optional<double>& v) {
    return v ? real_json(*v) : json(nullptr);
}

const std::set<std::string>& scenario_keys() {
    static const std::set<std::string> keys{
        "period", "noise_variance", "n",    "B",         "repetitions", "kzft_m",
        "kzft_k", "level",          "mode", "null_component", "unit_gain", "master_seed"};
    return keys;
}

std::string row_label(const Scenario& s) {
    std::string label = std::to_string(s.period);
    if (s.kzft_m != 11 || s.kzft_k != 1) label += fmt::format(" [m={} k={}]", s.kzft_m, s.kzft_k);
    if (s.mode != ResampleMode::phasewise) label += fmt::format(" [{}]", to_string(s.mode));
    if (s.unit_gain) label += " [unit-gain]";
    return label;
}

const char* table_title(TableId id) {
    switch (id) {
        case TableId::width_ratio:
            return "table 1: median ratio of band widths, PBB over VBPBB";
        case TableId::rsq_difference:
            return "table 2: median r-squared difference with the true component, VBPBB minus PBB, "
                   "percentage points";
        case TableId::outside_difference:
            return "table 3: median difference in share of the true component outside the band, "
                   "VBPBB minus PBB";
        case TableId::null_width_ratio:
            return "table 4: median ratio of band widths, PBB over VBPBB, null component";
    }
    return "";
}

}  // namespace

json to_json(const Scenario& s) {
    return json{{"period", s.period},
                {"noise_variance", s.noise_variance},
                {"n", s.length},
                {"B", s.resamples},
                {"repetitions", s.repetitions},
                {"kzft_m", s.kzft_m},
                {"kzft_k", s.kzft_k},
                {"level", s.level},
                {"mode", std::string(to_string(s.mode))},
                {"null_component", s.null_component},
                {"unit_gain", s.unit_gain},
                {"master_seed", s.master_seed}};
}

Scenario scenario_from_json(const json& j, const Scenario& defaults) {
    if (!j.is_object()) malformed("scenario entries must be JSON objects");
    for (const auto& [key, value] : j.items()) {
        if (!scenario_keys().contains(key)) malformed(fmt::format("unknown field '{}'", key));
    }
    Scenario s = defaults;
    s.period = count_field(j, "period", defaults.period);
    s.noise_variance = real_field(j, "noise_variance", defaults.noise_variance);
    s.length = count_field(j, "n", defaults.length);
    s.resamples = count_field(j, "B", defaults.resamples);
    s.repetitions = count_field(j, "repetitions", defaults.repetitions);
    s.kzft_m = count_field(j, "kzft_m", defaults.kzft_m);
    s.kzft_k = count_field(j, "kzft_k", defaults.kzft_k);
    s.level = real_field(j, "level", defaults.level);
    if (j.contains("mode")) {
        const auto& v = j.at("mode");
        const auto mode = v.is_string() ? parse_resample_mode(v.get<std::string>()) : std::nullopt;
        if (!mode) malformed("'mode' must be \"phasewise\" or \"season-block\"");
        s.mode = *mode;
    }
    s.null_component = bool_field(j, "null_component", defaults.null_component);
    s.unit_gain = bool_field(j, "unit_gain", defaults.unit_gain);
    if (j.contains("master_seed")) {
        const auto& v = j.at("master_seed");
        if (!v.is_number_unsigned()) malformed("'master_seed' must be a nonnegative integer");
        s.master_seed = v.get<Seed>();
    }
    return s;
}

std::vector<Scenario> parse_grid(const json& document, Seed seed) {
    Scenario defaults;
    defaults.master_seed = seed;
    const json* list = &document;
    if (document.is_object()) {
        for (const auto& [key, value] : document.items()) {
            if (key != "defaults" && key != "scenarios") {
                malformed(fmt::format("unknown grid field '{}'", key));
            }
        }
        if (!document.contains("scenarios")) malformed("grid object needs a 'scenarios' array");
        if (document.contains("defaults")) defaults = scenario_from_json(document.at("defaults"), defaults);
        list = &document.at("scenarios");
    }
    if (!list->is_array() || list->empty()) malformed("grid must list at least one scenario");
    std::vector<Scenario> grid;
    for (const auto& entry : *list) grid.push_back(scenario_from_json(entry, defaults));
    return grid;
}

json to_json(const ComparisonRecord& r) {
    return json{{"width_pbb", real_json(r.width_pbb)},
                {"width_vbpbb", real_json(r.width_vbpbb)},
                {"outside_pbb", real_json(r.outside_pbb)},
                {"outside_vbpbb", real_json(r.outside_vbpbb)},
                {"rsq_pbb", optional_json(r.rsq_pbb)},
                {"rsq_vbpbb", optional_json(r.rsq_vbpbb)}};
}

ComparisonRecord record_from_json(const json& j) {
    try {
        ComparisonRecord r;
        r.width_pbb = real_from_json(j.at("width_pbb"));
        r.width_vbpbb = real_from_json(j.at("width_vbpbb"));
        r.outside_pbb = real_from_json(j.at("outside_pbb"));
        r.outside_vbpbb = real_from_json(j.at("outside_vbpbb"));
        if (!j.at("rsq_pbb").is_null()) r.rsq_pbb = real_from_json(j.at("rsq_pbb"));
        if (!j.at("rsq_vbpbb").is_null()) r.rsq_vbpbb = real_from_json(j.at("rsq_vbpbb"));
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, fmt::format("bad comparison record: {}", e.what()));
    }
}

json to_json(const ScenarioSummary& s) {
    return json{{"repetitions", s.repetitions},
                {"width_ratio", real_json(s.width_ratio)},
                {"median_width_pbb", real_json(s.median_width_pbb)},
                {"median_width_vbpbb", real_json(s.median_width_vbpbb)},
                {"rsq_difference", optional_json(s.rsq_difference)},
                {"outside_difference", real_json(s.outside_difference)}};
}

json to_json(const ScenarioReport& report) {
    json records = json::array();
    for (const auto& r : report.records) records.push_back(to_json(r));
    return json{{"scenario", to_json(report.scenario)},
                {"rng",
                 {{"generator", std::string(kRngName)},
                  {"version", kRngVersion},
                  {"master_seed", report.scenario.master_seed}}},
                {"summary", to_json(report.summary)},
                {"records", std::move(records)}};
}

ScenarioReport report_from_json(const json& j) {
    if (!j.is_object() || !j.contains("scenario") || !j.contains("records") ||
        !j.at("records").is_array()) {
        throw Error(ErrorKind::parse, "report needs 'scenario' and 'records'");
    }
    ScenarioReport report;
    try {
        report.scenario = scenario_from_json(j.at("scenario"), Scenario{});
    } catch (const Error& e) {
        throw Error(ErrorKind::parse, e.what());
    }
    for (const auto& r : j.at("records")) report.records.push_back(record_from_json(r));
    report.summary = aggregate(report.records);
    return report;
}

std::optional<TableId> table_from_number(int number) noexcept {
    if (number < 1 || number > 4) return std::nullopt;
    return static_cast<TableId>(number);
}

std::string table_file_name(TableId id) {
    switch (id) {
        case TableId::width_ratio: return "table1_width_ratio.csv";
        case TableId::rsq_difference: return "table2_rsq_difference.csv";
        case TableId::outside_difference: return "table3_outside_difference.csv";
        case TableId::null_width_ratio: return "table4_null_width_ratio.csv";
    }
    return "table.csv";
}

StudyTable build_table(std::span<const ScenarioReport> reports, TableId id) {
    const bool want_null = id == TableId::null_width_ratio;
    // Row key (period, label) keeps rows in period order.
    std::map<std::pair<std::size_t, std::string>, std::map<double, std::optional<double>>> grid;
    std::set<double> columns;
    for (const auto& report : reports) {
        const auto& s = report.scenario;
        if (s.null_component != want_null) continue;
        std::optional<double> value;
        switch (id) {
            case TableId::width_ratio:
            case TableId::null_width_ratio: value = report.summary.width_ratio; break;
            case TableId::rsq_difference: value = report.summary.rsq_difference; break;
            case TableId::outside_difference: value = report.summary.outside_difference; break;
        }
        auto& row = grid[{s.period, row_label(s)}];
        if (row.contains(s.noise_variance)) {
            throw Error(ErrorKind::invalid_parameter,
                        fmt::format("two scenarios share table cell ({}, {})", row_label(s),
                                    s.noise_variance));
        }
        row[s.noise_variance] = value;
        columns.insert(s.noise_variance);
    }
    StudyTable table{id, {}, {columns.begin(), columns.end()}, {}};
    for (const auto& [key, row] : grid) {
        table.rows.push_back(key.second);
        for (double c : table.columns) {
            const auto it = row.find(c);
            table.cells.push_back(it == row.end() ? std::nullopt : it->second);
        }
    }
    return table;
}

std::string render_table(const StudyTable& table, bool paper_style) {
    std::string out = fmt::format("# {}\n# rng: {} v{}\nperiod", table_title(table.id), kRngName,
                                  kRngVersion);
    for (double c : table.columns) out += fmt::format(",{}", c);
    out += '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += table.rows[r];
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out += ',';
            const auto& cell = table.cell(r, c);
            if (!cell) continue;
            if (!paper_style) {
                out += format_real(*cell);
            } else if (table.id == TableId::outside_difference && std::abs(*cell) < 0.01) {
                out += "<0.01";
            } else if (table.id == TableId::outside_difference && std::abs(*cell) < 0.05) {
                out += "<0.05";
            } else {
                out += fmt::format("{:.2f}", *cell);
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace vbpbb
