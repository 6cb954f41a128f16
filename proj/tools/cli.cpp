#include "cli.hpp"

#include "vbpbb/bootstrap.hpp"
#include "vbpbb/error.hpp"
#include "vbpbb/kz_filter.hpp"
#include "vbpbb/series.hpp"
#include "vbpbb/simulation.hpp"
#include "vbpbb/study_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vbpbb::cli {

namespace fs = std::filesystem;

namespace {

/// Raised for problems that are the caller's fault but not library errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Missing or unreadable inputs.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_period:
        case ErrorKind::invalid_parameter: return kExitUsage;
        case ErrorKind::scenario_infeasible: return kExitInfeasible;
        default: return kExitData;
    }
}

/// Writes through a sibling temp file and renames, so a failed run leaves no partial file.
void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path == "-") {
        out << content;
        return;
    }
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError(fmt::format("cannot write '{}'", tmp.string()));
        f << content;
        if (!f.flush()) throw DataError(fmt::format("cannot write '{}'", tmp.string()));
    }
    fs::rename(tmp, target);
}

TimeSeries load_series(const std::string& path) {
    if (path == "-") return read_series(std::cin);
    if (!fs::exists(path)) throw DataError(fmt::format("input '{}' does not exist", path));
    return read_series_file(path);
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError(fmt::format("cannot read '{}'", path));
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

EdgePolicy parse_edge(const std::string& text) {
    if (text == "truncate") return EdgePolicy::truncate;
    if (text == "renormalize") return EdgePolicy::renormalize;
    throw UsageError(fmt::format("--edge must be truncate or renormalize, got '{}'", text));
}

std::pair<std::size_t, std::size_t> parse_filter_spec(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument("comma");
        std::size_t used = 0;
        const auto m = std::stoul(text.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("m");
        const auto rest = text.substr(comma + 1);
        const auto k = std::stoul(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("k");
        return {m, k};
    } catch (const std::logic_error&) {
        throw UsageError(fmt::format("--filter expects \"m,k\", got '{}'", text));
    }
}

struct FilterArgs {
    std::string input;
    std::string output = "-";
    std::size_t m = 11;
    std::size_t k = 1;
    double nu = 0.0;
    std::string edge = "truncate";
    bool unit_gain = false;
};

int cmd_filter(const FilterArgs& a, std::ostream& out) {
    const auto series = load_series(a.input);
    const auto edge = parse_edge(a.edge);
    const BandSpec band{a.nu, a.m, a.k};
    std::string reconstruction = "kz";
    TimeSeries result = [&] {
        if (a.nu == 0.0) {
            return kz_filter(series, kz_kernel(a.m, a.k), edge);
        }
        const auto z = kzft_filter(series, band, edge);
        reconstruction = a.unit_gain ? "unit-gain" : "2re";
        return a.unit_gain ? bandpass_reconstruct_unit_gain(z, band) : bandpass_reconstruct(z);
    }();
    std::string text = fmt::format("# vbpbb filter m={} k={} nu={} edge={} reconstruction={}\n", a.m,
                                   a.k, format_real(a.nu), a.edge, reconstruction);
    text += format_series(result);
    write_output(a.output, text, out);
    return kExitOk;
}

struct BootstrapArgs {
    std::string input;
    std::string output = "-";
    std::size_t period = 0;
    std::size_t resamples = 1000;
    double level = 0.95;
    std::string mode = "phasewise";
    Seed seed = 0;
    bool seed_given = false;
    std::string filter;
    bool unit_gain = false;
    std::size_t threads = 1;
};

int cmd_bootstrap(const BootstrapArgs& a, std::ostream& out, std::ostream& err) {
    const auto mode = parse_resample_mode(a.mode);
    if (!mode) throw UsageError(fmt::format("--mode must be phasewise or season-block, got '{}'", a.mode));
    if (a.period == 0) throw Error(ErrorKind::invalid_period, "--period must be >= 1");
    const Seed seed = a.seed_given ? a.seed : entropy_seed();
    if (!a.seed_given) err << fmt::format("vbpbb: using seed {}\n", seed);

    auto series = load_series(a.input);
    std::string filter_note = "none";
    if (!a.filter.empty()) {
        const auto [m, k] = parse_filter_spec(a.filter);
        const BandSpec band{1.0 / static_cast<double>(a.period), m, k};
        const auto z = kzft_filter(series, band, EdgePolicy::truncate);
        series = a.unit_gain ? bandpass_reconstruct_unit_gain(z, band) : bandpass_reconstruct(z);
        filter_note = fmt::format("kzft m={} k={} nu={} edge=truncate reconstruction={}", m, k,
                                  format_real(band.nu), a.unit_gain ? "unit-gain" : "2re");
    }
    BootstrapOptions options;
    options.period = a.period;
    options.resamples = a.resamples;
    options.level = a.level;
    options.mode = *mode;
    options.seed = seed;
    options.threads = a.threads;
    const auto band = bootstrap_band(series, options);

    std::string text = fmt::format(
        "# vbpbb bootstrap period={} B={} level={} mode={} seed={} rng={} v{}\n# filter: {}\n",
        a.period, a.resamples, format_real(a.level), to_string(*mode), seed, kRngName, kRngVersion,
        filter_note);
    text += format_band(band);
    write_output(a.output, text, out);
    return kExitOk;
}

struct SimulateArgs {
    std::string grid;
    std::string preset;
    bool m5_reruns = false;
    std::string out_dir;
    std::size_t threads = 1;
    Seed seed = 0;
    bool seed_given = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& err) {
    if (a.grid.empty() == a.preset.empty()) {
        throw UsageError("give exactly one of --grid or --preset");
    }
    const Seed seed = a.seed_given ? a.seed : entropy_seed();
    if (!a.seed_given) err << fmt::format("vbpbb: using seed {}\n", seed);

    std::vector<Scenario> grid;
    if (!a.grid.empty()) {
        if (!fs::exists(a.grid)) throw UsageError(fmt::format("grid '{}' does not exist", a.grid));
        json document;
        try {
            document = json::parse(read_text(a.grid));
        } catch (const json::parse_error& e) {
            throw UsageError(fmt::format("grid '{}' is not valid JSON: {}", a.grid, e.what()));
        }
        grid = parse_grid(document, seed);
    } else if (a.preset == "desk" || a.preset == "full") {
        grid = paper_grid(a.preset == "full" ? StudyScale::full : StudyScale::desk, seed, a.m5_reruns);
    } else {
        throw UsageError(fmt::format("--preset must be desk or full, got '{}'", a.preset));
    }

    const auto reports = run_study(grid, a.threads);
    for (TableId id : {TableId::width_ratio, TableId::rsq_difference, TableId::outside_difference,
                       TableId::null_width_ratio}) {
        (void)build_table(reports, id);  // reject cell collisions before writing anything
    }

    fs::create_directories(a.out_dir);
    json scenarios = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        write_output((fs::path(a.out_dir) / fmt::format("report_{:04}.json", i)).string(),
                     to_json(reports[i]).dump(2) + "\n", err);
        scenarios.push_back(to_json(reports[i].scenario));
    }
    const json study{{"seed", seed},
                     {"rng", {{"generator", std::string(kRngName)}, {"version", kRngVersion}}},
                     {"source", a.grid.empty() ? "preset:" + a.preset : a.grid},
                     {"scenarios", std::move(scenarios)}};
    write_output((fs::path(a.out_dir) / "study.json").string(), study.dump(2) + "\n", err);
    for (TableId id : {TableId::width_ratio, TableId::rsq_difference, TableId::outside_difference,
                       TableId::null_width_ratio}) {
        write_output((fs::path(a.out_dir) / table_file_name(id)).string(),
                     render_table(build_table(reports, id)), err);
    }
    return kExitOk;
}

struct TransferArgs {
    std::size_t m = 11;
    std::size_t k = 1;
    double nu = 0.0;
    std::size_t grid_points = 501;
    std::string output = "-";
};

int cmd_transfer(const TransferArgs& a, std::ostream& out) {
    const BandSpec band{a.nu, a.m, a.k};
    const auto curve = transfer_curve(band, a.grid_points);
    std::string text = fmt::format("# vbpbb transfer m={} k={} nu={} grid-points={}\nlambda,energy\n",
                                   a.m, a.k, format_real(a.nu), a.grid_points);
    for (const auto& point : curve) {
        text += fmt::format("{},{}\n", format_real(point.lambda), format_real(point.energy));
    }
    write_output(a.output, text, out);
    return kExitOk;
}

struct ReportArgs {
    std::string in_dir;
    int table = 1;
    bool paper_style = false;
    std::string output = "-";
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    const auto id = table_from_number(a.table);
    if (!id) throw UsageError("--table must be 1, 2, 3 or 4");
    if (!fs::is_directory(a.in_dir)) throw DataError(fmt::format("'{}' is not a directory", a.in_dir));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.in_dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("report_") && name.ends_with(".json")) {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) throw DataError(fmt::format("no report_*.json files in '{}'", a.in_dir));
    std::sort(files.begin(), files.end());

    std::vector<ScenarioReport> reports;
    for (const auto& file : files) {
        try {
            reports.push_back(report_from_json(json::parse(read_text(file.string()))));
        } catch (const json::exception& e) {
            throw DataError(fmt::format("cannot read report '{}': {}", file.string(), e.what()));
        }
    }
    write_output(a.output, render_table(build_table(reports, *id), a.paper_style), out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic block bootstrap with KZFT bandpass separation"};
    app.require_subcommand(1);

    FilterArgs filter;
    auto* filter_cmd = app.add_subcommand("filter", "Apply a KZ low-pass or KZFT bandpass filter");
    filter_cmd->add_option("--input", filter.input, "Input series CSV (t,value), '-' for stdin")->required();
    filter_cmd->add_option("--m", filter.m, "Window length (odd)");
    filter_cmd->add_option("--k", filter.k, "Iterations");
    filter_cmd->add_option("--nu", filter.nu, "Center frequency in [0, 1/2]; 0 selects the KZ low-pass");
    filter_cmd->add_option("--edge", filter.edge, "truncate or renormalize");
    filter_cmd->add_flag("--unit-gain", filter.unit_gain, "Scale the bandpass output to unit gain at nu");
    filter_cmd->add_option("--output", filter.output, "Output CSV, '-' for stdout");

    BootstrapArgs boot;
    auto* boot_cmd = app.add_subcommand("bootstrap", "Periodic-mean bootstrap band (PBB, or VBPBB with --filter)");
    boot_cmd->add_option("--input", boot.input, "Input series CSV")->required();
    boot_cmd->add_option("--period", boot.period, "Period p")->required();
    boot_cmd->add_option("-B,--B,--resamples", boot.resamples, "Bootstrap resamples");
    boot_cmd->add_option("--level", boot.level, "Confidence level");
    boot_cmd->add_option("--mode", boot.mode, "phasewise or season-block");
    auto* boot_seed = boot_cmd->add_option("--seed", boot.seed, "Random seed (default: from entropy)");
    boot_cmd->add_option("--filter", boot.filter, "\"m,k\": apply KZFT at nu = 1/period first");
    boot_cmd->add_flag("--unit-gain", boot.unit_gain, "Scale the filtered series to unit gain at nu");
    boot_cmd->add_option("--threads", boot.threads, "Worker threads");
    boot_cmd->add_option("--output", boot.output, "Output CSV, '-' for stdout");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo study grid");
    sim_cmd->add_option("--grid", sim.grid, "Scenario grid JSON");
    sim_cmd->add_option("--preset", sim.preset, "desk or full: the five-period, three-noise study grid");
    sim_cmd->add_flag("--m5-reruns", sim.m5_reruns, "With --preset, add the m = 5 reruns");
    sim_cmd->add_option("--out-dir", sim.out_dir, "Directory for reports and tables")->required();
    sim_cmd->add_option("--threads", sim.threads, "Worker threads");
    auto* sim_seed = sim_cmd->add_option("--seed", sim.seed, "Master seed (default: from entropy)");

    TransferArgs transfer;
    auto* transfer_cmd = app.add_subcommand("transfer", "Emit the energy transfer curve over [0, 1/2]");
    transfer_cmd->add_option("--m", transfer.m, "Window length (odd)");
    transfer_cmd->add_option("--k", transfer.k, "Iterations");
    transfer_cmd->add_option("--nu", transfer.nu, "Center frequency");
    transfer_cmd->add_option("--grid-points", transfer.grid_points, "Number of samples (>= 2)");
    transfer_cmd->add_option("--output", transfer.output, "Output CSV, '-' for stdout");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Re-render a study table from stored reports");
    report_cmd->add_option("--in-dir", report.in_dir, "Directory written by simulate")->required();
    report_cmd->add_option("--table", report.table, "Table number 1-4")->required();
    report_cmd->add_flag("--paper-style", report.paper_style, "Two decimals and <0.01 / <0.05 thresholds");
    report_cmd->add_option("--output", report.output, "Output CSV, '-' for stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (filter_cmd->parsed()) return cmd_filter(filter, out);
        if (boot_cmd->parsed()) {
            boot.seed_given = boot_seed->count() > 0;
            return cmd_bootstrap(boot, out, err);
        }
        if (sim_cmd->parsed()) {
            sim.seed_given = sim_seed->count() > 0;
            return cmd_simulate(sim, err);
        }
        if (transfer_cmd->parsed()) return cmd_transfer(transfer, out);
        if (report_cmd->parsed()) return cmd_report(report, out);
    } catch (const Error& e) {
        err << fmt::format("vbpbb: {} error: {}\n", to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const UsageError& e) {
        err << "vbpbb: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "vbpbb: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "vbpbb: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace vbpbb::cli
