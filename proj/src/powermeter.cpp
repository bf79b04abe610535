#include "flopforge/powermeter.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flopforge/errors.hpp"

namespace flopforge {

void BatterySpec::validate() const {
    if (voltage_v <= 0 || capacity_ah <= 0) {
        throw ConfigError("battery voltage and capacity must be positive");
    }
}

double average_current(const std::vector<PowerSample>& log) {
    if (log.empty()) {
        throw InputError("power log is empty");
    }
    const double span = log.back().timestamp_s - log.front().timestamp_s;
    if (span < 0) {
        throw InputError("power log timestamps must be non-decreasing");
    }
    if (span == 0) {
        double sum = 0;
        for (const PowerSample& s : log) {
            sum += s.current_a;
        }
        return sum / static_cast<double>(log.size());
    }
    double integral = 0;
    for (std::size_t i = 1; i < log.size(); ++i) {
        const double dt = log[i].timestamp_s - log[i - 1].timestamp_s;
        if (dt < 0) {
            throw InputError("power log timestamps must be non-decreasing");
        }
        integral += 0.5 * (log[i].current_a + log[i - 1].current_a) * dt;
    }
    return integral / span;
}

double power_watts(double voltage_v, double current_a) {
    if (voltage_v <= 0) {
        throw InputError("supply voltage must be positive");
    }
    return voltage_v * current_a;
}

double battery_life_minutes(const BatterySpec& battery, double avg_power_w) {
    battery.validate();
    if (avg_power_w <= 0) {
        throw InputError("average power must be positive");
    }
    return battery.voltage_v * battery.capacity_ah / avg_power_w * 60.0;
}

double flops_per_watt(double flops, double power_w) {
    if (power_w <= 0) {
        throw InputError("power must be positive");
    }
    return flops / power_w;
}

namespace {

constexpr const char* kHeader = "timestamp_s,current_a,voltage_v";

std::string trimmed(std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    if (from == std::string::npos) {
        return {};
    }
    return s.substr(from, to - from + 1);
}

double parse_field(const std::string& text, std::size_t row, const char* name) {
    const std::string t = trimmed(text);
    double value = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) {
        throw FormatError("row " + std::to_string(row) + ": non-numeric " + name + " '" + text +
                          "'");
    }
    return value;
}

} // namespace

std::vector<PowerSample> parse_power_log(std::istream& in) {
    std::vector<PowerSample> samples;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string text = trimmed(line);
        if (text.empty()) {
            continue;
        }
        if (row == 1 && text == kHeader) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream splitter(text);
        std::string field;
        while (std::getline(splitter, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 3) {
            throw FormatError("row " + std::to_string(row) + ": expected 3 columns (" + kHeader +
                              "), got " + std::to_string(fields.size()));
        }
        PowerSample sample;
        sample.timestamp_s = parse_field(fields[0], row, "timestamp");
        sample.current_a = parse_field(fields[1], row, "current");
        sample.voltage_v = parse_field(fields[2], row, "voltage");
        if (sample.current_a < 0) {
            throw FormatError("row " + std::to_string(row) + ": current must be >= 0");
        }
        if (sample.voltage_v <= 0) {
            throw FormatError("row " + std::to_string(row) + ": voltage must be > 0");
        }
        if (!samples.empty() && sample.timestamp_s < samples.back().timestamp_s) {
            throw FormatError("row " + std::to_string(row) + ": timestamp decreases");
        }
        samples.push_back(sample);
    }
    if (samples.empty()) {
        throw InputError("power log contains no samples");
    }
    return samples;
}

std::vector<PowerSample> parse_power_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return parse_power_log(in);
}

void write_power_log(std::ostream& out, const std::vector<PowerSample>& log) {
    out << kHeader << "\n";
    char buffer[128];
    for (const PowerSample& s : log) {
        std::snprintf(buffer, sizeof buffer, "%.12g,%.12g,%.12g\n", s.timestamp_s, s.current_a,
                      s.voltage_v);
        out << buffer;
    }
}

PowerReport build_power_report(const std::vector<PowerSample>& log, double supply_voltage_v,
                               std::optional<BatterySpec> battery, std::optional<double> flops,
                               std::optional<double> efficiency_power) {
    PowerReport report;
    report.samples = log.size();
    report.supply_voltage_v = supply_voltage_v;
    report.average_current_a = average_current(log);
    report.average_power_w = power_watts(supply_voltage_v, report.average_current_a);
    if (battery) {
        battery->validate();
        report.battery = battery;
        report.battery_life_min = battery_life_minutes(*battery, report.average_power_w);
    }
    if (flops) {
        report.flops = flops;
        const double paired_power = efficiency_power.value_or(report.average_power_w);
        report.efficiency_power_w = paired_power;
        report.gflops_per_watt = flops_per_watt(*flops, paired_power) / 1e9;
        report.efficiency_note = efficiency_power
                                     ? "efficiency uses the explicitly supplied power figure"
                                     : "efficiency uses the log's average power";
    }
    return report;
}

} // namespace flopforge
