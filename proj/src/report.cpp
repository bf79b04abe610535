#include "flopforge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <sys/utsname.h>

#include "flopforge/errors.hpp"
#include "flopforge/version.hpp"

namespace flopforge {

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

std::string host_descriptor() {
    utsname info{};
    if (uname(&info) != 0) {
        return "unknown";
    }
    std::ostringstream out;
    out << info.sysname << " " << info.release << " " << info.machine << ", "
        << std::thread::hardware_concurrency() << " hardware threads";
    return out.str();
}

RunManifest RunManifest::begin(std::string subcommand) {
    RunManifest manifest;
    manifest.version = kVersion;
    manifest.subcommand = std::move(subcommand);
    manifest.started = iso8601_utc_now();
    manifest.host = host_descriptor();
    return manifest;
}

void RunManifest::finish() { finished = iso8601_utc_now(); }

nlohmann::json to_json(const RunManifest& manifest) {
    return nlohmann::json{{"tool", manifest.tool},       {"version", manifest.version},
                          {"subcommand", manifest.subcommand}, {"started", manifest.started},
                          {"finished", manifest.finished},     {"host", manifest.host},
                          {"config", manifest.config}};
}

void write_sweep_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "workers,elapsed_s,flops,checksum\n";
    char buffer[160];
    for (const BenchRecord& record : records) {
        std::snprintf(buffer, sizeof buffer, "%lld,%.12g,%.12g,%.12g\n",
                      static_cast<long long>(record.workers), record.elapsed_s, record.flops,
                      record.checksum);
        out << buffer;
    }
    if (!out) {
        throw InputError("failed to write sweep CSV");
    }
}

std::vector<BenchRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.find("workers,elapsed_s,flops,checksum") != 0) {
        throw FormatError("not a sweep CSV: missing the workers,elapsed_s,flops,checksum header");
    }
    std::vector<BenchRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        BenchRecord record;
        long long workers = 0;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf", &workers, &record.elapsed_s,
                        &record.flops, &record.checksum) != 4) {
            throw FormatError("sweep CSV row " + std::to_string(row) + " is malformed: " + line);
        }
        record.workers = workers;
        records.push_back(std::move(record));
    }
    return records;
}

namespace {

nlohmann::json kernel_to_json(const RotationKernelSpec& kernel) {
    return {{"dimensionality", kernel.dimensionality},
            {"iterations", kernel.iterations},
            {"angle_rad", kernel.angle}};
}

nlohmann::json record_to_json(const BenchRecord& record) {
    return {{"workers", record.workers},
            {"elapsed_s", record.elapsed_s},
            {"flops", record.flops},
            {"checksum", record.checksum},
            {"warnings", record.warnings}};
}

nlohmann::json stage_to_json(const StageStats& stats) {
    return {{"series_s", stats.series_s}, {"mean_s", stats.mean_s}, {"sd_s", stats.sd_s}};
}

nlohmann::json detection_to_json(const Detection& det) {
    return {{"x", det.x},         {"y", det.y},
            {"w", det.width},     {"h", det.height},
            {"label", det.label}, {"confidence", det.confidence}};
}

} // namespace

nlohmann::json sweep_to_json(const SweepResult& result, const RunManifest& manifest) {
    nlohmann::json records = nlohmann::json::array();
    for (const BenchRecord& record : result.records) {
        records.push_back(record_to_json(record));
    }
    nlohmann::json doc{{"manifest", to_json(manifest)},
                       {"sweep",
                        {{"worker_start", result.config.worker_start},
                         {"worker_end", result.config.worker_end},
                         {"worker_step", result.config.worker_step},
                         {"backend", result.config.backend_id},
                         {"kernel", kernel_to_json(result.config.kernel)}}},
                       {"timing_note", "elapsed covers the full kernel dispatch, "
                                       "including any launch overhead"},
                       {"records", std::move(records)}};
    if (result.failure) {
        doc["failure"] = {{"workers", result.failure->workers},
                          {"message", result.failure->message}};
    } else {
        doc["failure"] = nullptr;
    }
    return doc;
}

nlohmann::json pipeline_report_to_json(const PipelineReport& report,
                                       const RunManifest& manifest) {
    nlohmann::json detections = nlohmann::json::array();
    for (const auto& frame : report.detections) {
        nlohmann::json list = nlohmann::json::array();
        for (const Detection& det : frame) {
            list.push_back(detection_to_json(det));
        }
        detections.push_back(std::move(list));
    }
    nlohmann::json doc{{"manifest", to_json(manifest)},
                       {"frames_in", report.frames_in},
                       {"frames_processed", report.frames_processed},
                       {"stages",
                        {{"preprocess", stage_to_json(report.preprocess)},
                         {"detect", stage_to_json(report.detect)},
                         {"end_to_end", stage_to_json(report.end_to_end)}}},
                       {"throughput_fps", report.throughput_fps},
                       {"sd_formula", report.sd_formula},
                       {"detections", std::move(detections)}};
    if (report.failure) {
        doc["failure"] = {{"frame", report.failure->frame_index},
                          {"stage", report.failure->stage},
                          {"message", report.failure->message}};
    } else {
        doc["failure"] = nullptr;
    }
    return doc;
}

nlohmann::json power_report_to_json(const PowerReport& report, const RunManifest& manifest) {
    nlohmann::json doc{{"manifest", to_json(manifest)},
                       {"samples", report.samples},
                       {"supply_voltage_v", report.supply_voltage_v},
                       {"average_current_a", report.average_current_a},
                       {"average_power_w", report.average_power_w}};
    if (report.battery) {
        doc["battery"] = {{"voltage_v", report.battery->voltage_v},
                          {"capacity_ah", report.battery->capacity_ah}};
        doc["battery_life_min"] = *report.battery_life_min;
    }
    if (report.flops) {
        doc["flops"] = *report.flops;
        doc["efficiency_power_w"] = *report.efficiency_power_w;
        doc["gflops_per_watt"] = *report.gflops_per_watt;
        doc["efficiency_note"] = report.efficiency_note;
    }
    return doc;
}

Series load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    Series series;
    series.name = path.stem().string();

    std::string first;
    while (std::getline(in, first)) {
        if (!first.empty()) {
            break;
        }
    }
    if (first.find("workers,elapsed_s,flops,checksum") == 0) {
        in.seekg(0);
        series.kind = SeriesKind::sweep;
        for (const BenchRecord& record : read_sweep_csv(in)) {
            series.points.emplace_back(static_cast<double>(record.workers), record.flops);
        }
    } else {
        // anything else must parse as a power log (with or without header)
        in.clear();
        in.seekg(0);
        series.kind = SeriesKind::power;
        for (const PowerSample& sample : parse_power_log(in)) {
            series.points.emplace_back(sample.timestamp_s, sample.current_a);
        }
    }
    std::sort(series.points.begin(), series.points.end());
    return series;
}

void write_series(std::ostream& out, const Series& series) {
    out << "# flopforge plotdata: "
        << (series.kind == SeriesKind::sweep ? "workers flops" : "time_s current_a") << "\n";
    char buffer[80];
    for (const auto& [x, y] : series.points) {
        std::snprintf(buffer, sizeof buffer, "%.12g %.12g\n", x, y);
        out << buffer;
    }
    if (!out) {
        throw InputError("failed to write series data");
    }
}

} // namespace flopforge
