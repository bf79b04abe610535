#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flopforge {

// One reading of a bench power supply log.
struct PowerSample {
    double timestamp_s = 0; // monotone non-decreasing within a log
    double current_a = 0;   // >= 0
    double voltage_v = 0;   // > 0
};

struct BatterySpec {
    double voltage_v = 0;
    double capacity_ah = 0;

    void validate() const; // both strictly positive
};

// Mean current over the log. Non-uniform logs are integrated trapezoidally
// over [t_first, t_last]; logs without a time span fall back to the
// arithmetic mean (for uniform sampling the two agree).
double average_current(const std::vector<PowerSample>& log);

// V * I.
double power_watts(double voltage_v, double current_a);

// Minutes until a battery of the given spec is drained at constant power:
// voltage * capacity / power * 60. Assumes the system compensates a sagging
// supply voltage by drawing more current.
double battery_life_minutes(const BatterySpec& battery, double avg_power_w);

// Compute efficiency, operations per second per watt.
double flops_per_watt(double flops, double power_w);

// CSV with columns timestamp_s,current_a,voltage_v; an optional header line
// naming exactly those columns is skipped. Malformed rows raise FormatError
// naming the row; an empty log raises InputError.
std::vector<PowerSample> parse_power_log(std::istream& in);
std::vector<PowerSample> parse_power_log(const std::filesystem::path& path);
void write_power_log(std::ostream& out, const std::vector<PowerSample>& log);

// Everything the power-report command derives from one log.
struct PowerReport {
    std::size_t samples = 0;
    double supply_voltage_v = 0;
    double average_current_a = 0;
    double average_power_w = 0;
    std::optional<BatterySpec> battery;
    std::optional<double> battery_life_min;
    std::optional<double> flops;              // as supplied by the caller
    std::optional<double> efficiency_power_w; // the power figure paired with it
    std::optional<double> gflops_per_watt;
    std::string efficiency_note;
};

// The efficiency figure is only produced when `flops` is given, and is paired
// with `efficiency_power` when set, else with the log's average power; the
// report notes which one was used.
PowerReport build_power_report(const std::vector<PowerSample>& log, double supply_voltage_v,
                               std::optional<BatterySpec> battery, std::optional<double> flops,
                               std::optional<double> efficiency_power);

} // namespace flopforge
