#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flopforge/pipeline.hpp"
#include "flopforge/powermeter.hpp"
#include "flopforge/rotbench.hpp"

namespace flopforge {

// Provenance block embedded in every emitted report.
struct RunManifest {
    std::string tool = "flopforge";
    std::string version;
    std::string subcommand;
    std::string started;  // ISO 8601 UTC
    std::string finished; // filled in right before the report is written
    std::string host;
    nlohmann::json config = nlohmann::json::object(); // full flag echo

    static RunManifest begin(std::string subcommand);
    void finish();
};

std::string iso8601_utc_now();
std::string host_descriptor();

nlohmann::json to_json(const RunManifest& manifest);

// Sweep CSV: header `workers,elapsed_s,flops,checksum`, one row per point,
// ascending workers.
void write_sweep_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_sweep_csv(std::istream& in);

nlohmann::json sweep_to_json(const SweepResult& result, const RunManifest& manifest);
nlohmann::json pipeline_report_to_json(const PipelineReport& report, const RunManifest& manifest);
nlohmann::json power_report_to_json(const PowerReport& report, const RunManifest& manifest);

// Plot-ready data series extracted from recorded reports: a sweep CSV
// becomes workers-vs-FLOPS, a power log becomes time-vs-current.
enum class SeriesKind { sweep, power };

struct Series {
    SeriesKind kind = SeriesKind::sweep;
    std::string name; // derived from the source file name
    std::vector<std::pair<double, double>> points;
};

Series load_series(const std::filesystem::path& path);
void write_series(std::ostream& out, const Series& series);

} // namespace flopforge
