#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flopforge/backends.hpp"
#include "flopforge/demosaic.hpp"
#include "flopforge/errors.hpp"
#include "flopforge/image.hpp"
#include "flopforge/lens.hpp"
#include "flopforge/pipeline.hpp"
#include "flopforge/powermeter.hpp"
#include "flopforge/report.hpp"
#include "flopforge/reproject.hpp"
#include "flopforge/rotbench.hpp"
#include "flopforge/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct BenchArgs {
    std::string regime;  // "cpu", "gpu" or empty
    std::string workers; // "start:end:step"
    int dimensionality = 4;
    long long iterations = 40000;
    std::string backend = "parallel";
    int repeat = 1;
    bool no_warmup = false;
    std::string csv_path;
    std::string json_path;
};

struct SizeArg {
    int width = 1280;
    int height = 1024;
};

SizeArg parse_size(const std::string& text) {
    SizeArg size;
    char sep = 0;
    std::istringstream in(text);
    if (!(in >> size.width >> sep >> size.height) || sep != 'x' || size.width < 1 ||
        size.height < 1) {
        throw flopforge::ConfigError("expected a size like 1280x1024, got '" + text + "'");
    }
    return size;
}

flopforge::SweepConfig parse_workers(const std::string& text) {
    flopforge::SweepConfig config;
    char sep1 = 0;
    char sep2 = 0;
    std::istringstream in(text);
    if (!(in >> config.worker_start >> sep1 >> config.worker_end >> sep2 >>
          config.worker_step) ||
        sep1 != ':' || sep2 != ':') {
        throw flopforge::ConfigError("expected --workers start:end:step, got '" + text + "'");
    }
    return config;
}

flopforge::BatterySpec parse_battery(const std::string& text) {
    flopforge::BatterySpec battery;
    char sep = 0;
    std::istringstream in(text);
    if (!(in >> battery.voltage_v >> sep >> battery.capacity_ah) || sep != ':') {
        throw flopforge::ConfigError("expected --battery voltage:capacity_ah, got '" + text +
                                     "'");
    }
    battery.validate();
    return battery;
}

void write_json_file(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) {
        throw flopforge::InputError("cannot write " + path.string());
    }
    out << doc.dump(2) << "\n";
    if (!out) {
        throw flopforge::InputError("failed to write " + path.string());
    }
}

int cmd_bench(const BenchArgs& args) {
    auto manifest = flopforge::RunManifest::begin("bench");

    flopforge::SweepConfig config;
    if (!args.regime.empty() && !args.workers.empty()) {
        throw flopforge::ConfigError("--regime and --workers are mutually exclusive");
    }
    flopforge::RotationKernelSpec kernel;
    kernel.dimensionality = args.dimensionality;
    kernel.iterations = args.iterations;
    if (args.regime == "cpu") {
        config = flopforge::cpu_regime(kernel, args.backend);
    } else if (args.regime == "gpu") {
        config = flopforge::gpu_regime(kernel, args.backend);
    } else if (!args.regime.empty()) {
        throw flopforge::ConfigError("unknown regime '" + args.regime + "' (cpu or gpu)");
    } else if (!args.workers.empty()) {
        config = parse_workers(args.workers);
        config.kernel = kernel;
        config.backend_id = args.backend;
    } else {
        throw flopforge::ConfigError("one of --regime or --workers is required");
    }

    manifest.config = {{"regime", args.regime},
                       {"workers",
                        {{"start", config.worker_start},
                         {"end", config.worker_end},
                         {"step", config.worker_step}}},
                       {"dim", args.dimensionality},
                       {"iterations", args.iterations},
                       {"backend", args.backend},
                       {"repeat", args.repeat},
                       {"warmup", !args.no_warmup},
                       {"csv", args.csv_path},
                       {"json", args.json_path}};

    const flopforge::ComputeBackend& backend = flopforge::backend_by_id(args.backend);
    flopforge::RunOptions options;
    options.warmup = !args.no_warmup;
    options.repetitions = args.repeat;

    const flopforge::SweepResult result = flopforge::run_sweep(config, backend, options);
    manifest.finish();

    if (!args.csv_path.empty()) {
        std::ofstream out(args.csv_path);
        if (!out) {
            throw flopforge::InputError("cannot write " + args.csv_path);
        }
        flopforge::write_sweep_csv(out, result.records);
    }
    if (!args.json_path.empty()) {
        write_json_file(args.json_path, flopforge::sweep_to_json(result, manifest));
    }
    if (args.csv_path.empty() && args.json_path.empty()) {
        flopforge::write_sweep_csv(std::cout, result.records);
    }

    if (result.failure) {
        std::cerr << "error: sweep aborted at " << result.failure->workers
                  << " workers: " << result.failure->message << "\n";
        return 1;
    }
    std::cerr << "bench: " << result.records.size() << " points on backend '" << args.backend
              << "'\n";
    return 0;
}

int cmd_demosaic(const std::string& in_path, const std::string& out_path) {
    const flopforge::BayerImage raw = flopforge::read_pgm(in_path);
    flopforge::write_ppm(out_path, flopforge::demosaic_bilinear(raw));
    return 0;
}

int cmd_reproject(const std::string& in_path, const std::string& out_path, double lens_fov_deg,
                  double cam_fov_deg, const std::string& out_size,
                  std::optional<double> r_pp) {
    const flopforge::RgbImage src = flopforge::read_ppm(in_path);
    const SizeArg size = parse_size(out_size);
    const flopforge::EquidistantLens lens(src.width, src.height,
                                          flopforge::deg2rad(lens_fov_deg), r_pp);
    const flopforge::RectilinearCamera cam(size.width, size.height,
                                           flopforge::deg2rad(cam_fov_deg));
    flopforge::write_ppm(out_path, flopforge::reproject(src, lens, cam));
    return 0;
}

std::unique_ptr<flopforge::DetectorStage> make_detector(const std::string& spec,
                                                        const std::vector<double>& delays_ms) {
    if (spec == "stub") {
        std::vector<double> delays_s;
        for (const double ms : delays_ms) {
            delays_s.push_back(ms / 1000.0);
        }
        if (delays_s.empty()) {
            delays_s.push_back(0.0);
        }
        return std::make_unique<flopforge::StubDetector>(delays_s);
    }
    if (spec.rfind("exec:", 0) == 0) {
        return std::make_unique<flopforge::ExecDetector>(spec.substr(5));
    }
    throw flopforge::ConfigError("unknown detector '" + spec + "' (stub or exec:<cmd>)");
}

int cmd_pipeline(const std::string& frames_dir, double lens_fov_deg, double cam_fov_deg,
                 const std::string& out_size, std::optional<double> r_pp,
                 const std::string& detector_spec, const std::vector<double>& stub_delays_ms,
                 const std::string& mode, bool pipelined, double fps,
                 const std::string& report_path) {
    auto manifest = flopforge::RunManifest::begin("pipeline");
    manifest.config = {{"frames", frames_dir},   {"lens_fov_deg", lens_fov_deg},
                       {"cam_fov_deg", cam_fov_deg}, {"out_size", out_size},
                       {"detector", detector_spec}, {"stub_delay_ms", stub_delays_ms},
                       {"mode", mode},              {"pipelined", pipelined},
                       {"fps", fps},                {"report", report_path}};

    flopforge::FrameSource source;
    source.nominal_fps = fps;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (entry.path().extension() == ".pgm") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
        throw flopforge::InputError("no .pgm frames in " + frames_dir);
    }
    for (const fs::path& path : paths) {
        source.frames.push_back(flopforge::read_pgm(path));
    }

    const SizeArg size = parse_size(out_size);
    const flopforge::EquidistantLens lens(source.frames.front().width,
                                          source.frames.front().height,
                                          flopforge::deg2rad(lens_fov_deg), r_pp);
    const flopforge::RectilinearCamera cam(size.width, size.height,
                                           flopforge::deg2rad(cam_fov_deg));

    flopforge::PipelineConfig config;
    if (mode == "fused") {
        config.mode = flopforge::PreprocessMode::fused;
    } else if (mode == "sequential") {
        config.mode = flopforge::PreprocessMode::sequential;
    } else {
        throw flopforge::ConfigError("unknown mode '" + mode + "' (fused or sequential)");
    }
    config.pipelined = pipelined;

    auto detector = make_detector(detector_spec, stub_delays_ms);
    const flopforge::PipelineReport report =
        flopforge::run_pipeline(source, lens, cam, *detector, config);
    manifest.finish();

    write_json_file(report_path, flopforge::pipeline_report_to_json(report, manifest));

    std::cerr << "pipeline: " << report.frames_processed << "/" << report.frames_in
              << " frames, preprocess " << report.preprocess.mean_s * 1e3 << " ms (SD "
              << report.preprocess.sd_s * 1e3 << "), detect " << report.detect.mean_s << " s (SD "
              << report.detect.sd_s << "), " << report.throughput_fps << " fps\n";
    if (report.failure) {
        std::cerr << "error: " << report.failure->stage << " failed on frame "
                  << report.failure->frame_index << ": " << report.failure->message << "\n";
        return 1;
    }
    return 0;
}

int cmd_power_report(const std::string& log_path, double supply_voltage,
                     const std::string& battery_arg, std::optional<double> flops,
                     std::optional<double> efficiency_power, const std::string& json_path) {
    auto manifest = flopforge::RunManifest::begin("power-report");
    manifest.config = {{"log", log_path},
                       {"supply_voltage", supply_voltage},
                       {"battery", battery_arg},
                       {"flops", flops ? json(*flops) : json(nullptr)},
                       {"efficiency_power", efficiency_power ? json(*efficiency_power)
                                                             : json(nullptr)},
                       {"json", json_path}};

    const auto samples = flopforge::parse_power_log(fs::path(log_path));
    std::optional<flopforge::BatterySpec> battery;
    if (!battery_arg.empty()) {
        battery = parse_battery(battery_arg);
    }
    const flopforge::PowerReport report =
        flopforge::build_power_report(samples, supply_voltage, battery, flops, efficiency_power);
    manifest.finish();

    const json doc = flopforge::power_report_to_json(report, manifest);
    if (json_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        write_json_file(json_path, doc);
    }
    return 0;
}

int cmd_plotdata(const std::vector<std::string>& inputs, const std::string& out_dir) {
    if (inputs.empty()) {
        throw flopforge::InputError("plotdata needs at least one report file");
    }
    std::vector<flopforge::Series> series;
    for (const std::string& input : inputs) {
        series.push_back(flopforge::load_series(input));
    }
    for (const flopforge::Series& s : series) {
        if (s.kind != series.front().kind) {
            throw flopforge::InputError("cannot mix sweep CSVs and power logs in one plotdata "
                                        "call");
        }
    }
    fs::create_directories(out_dir);
    for (const flopforge::Series& s : series) {
        const fs::path out_path = fs::path(out_dir) / (s.name + ".dat");
        std::ofstream out(out_path);
        if (!out) {
            throw flopforge::InputError("cannot write " + out_path.string());
        }
        flopforge::write_series(out, s);
        std::cerr << "plotdata: wrote " << out_path.string() << " (" << s.points.size()
                  << " points)\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flopforge: rotation-kernel FLOPS benchmarking and fisheye vision "
                 "preprocessing toolkit"};
    app.set_version_flag("--version", flopforge::kVersion);
    app.require_subcommand(1);

    // bench
    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a rotation-kernel worker sweep");
    bench_cmd->add_option("--regime", bench.regime, "Preset sweep: cpu (1..4096 by 32) or gpu "
                                                    "(256..1024000 by 256)");
    bench_cmd->add_option("--workers", bench.workers, "Custom sweep start:end:step");
    bench_cmd->add_option("--dim", bench.dimensionality, "Points per worker (1, 2 or 4)")
        ->default_val(4);
    bench_cmd->add_option("--iterations", bench.iterations, "Rotations per point")
        ->default_val(40000);
    bench_cmd->add_option("--backend", bench.backend, "Execution backend")->default_val("parallel");
    bench_cmd->add_option("--repeat", bench.repeat, "Repetitions per point; the median-elapsed "
                                                    "run is kept")
        ->default_val(1);
    bench_cmd->add_flag("--no-warmup", bench.no_warmup, "Skip the untimed warm-up run");
    bench_cmd->add_option("--csv", bench.csv_path, "Write the sweep as CSV");
    bench_cmd->add_option("--json", bench.json_path, "Write the sweep as JSON with manifest");

    // demosaic
    std::string demosaic_in;
    std::string demosaic_out;
    auto* demosaic_cmd = app.add_subcommand("demosaic", "Convert a BGGR mosaic PGM to RGB PPM");
    demosaic_cmd->add_option("input", demosaic_in, "Raw mosaic (PGM)")->required();
    demosaic_cmd->add_option("output", demosaic_out, "RGB image (PPM)")->required();

    // reproject
    std::string reproject_in;
    std::string reproject_out;
    double lens_fov_deg = 195.0;
    double cam_fov_deg = 150.0;
    std::string out_size = "1280x1024";
    double r_pp_value = 0.0;
    auto* reproject_cmd =
        app.add_subcommand("reproject", "Reproject an equidistant image onto a rectilinear one");
    reproject_cmd->add_option("--lens-fov", lens_fov_deg, "Lens field of view, degrees")
        ->default_val(195.0);
    reproject_cmd->add_option("--cam-fov", cam_fov_deg, "Target field of view, degrees")
        ->default_val(150.0);
    reproject_cmd->add_option("--out-size", out_size, "Target size WxH")->default_val("1280x1024");
    auto* rpp_opt = reproject_cmd->add_option("--r-pp", r_pp_value,
                                              "Radians per source pixel (default fov/width)");
    reproject_cmd->add_option("input", reproject_in, "Equidistant RGB image (PPM)")->required();
    reproject_cmd->add_option("output", reproject_out, "Rectilinear RGB image (PPM)")->required();

    // pipeline
    std::string frames_dir;
    std::string detector_spec = "stub";
    std::vector<double> stub_delays_ms;
    std::string mode = "fused";
    bool pipelined = false;
    double fps = 30.0;
    std::string report_path;
    double pipe_lens_fov = 195.0;
    double pipe_cam_fov = 150.0;
    std::string pipe_out_size = "1280x1024";
    double pipe_r_pp = 0.0;
    auto* pipeline_cmd =
        app.add_subcommand("pipeline", "Run frames through demosaic, reprojection and a detector");
    pipeline_cmd->add_option("--frames", frames_dir, "Directory of raw .pgm frames")->required();
    pipeline_cmd->add_option("--lens-fov", pipe_lens_fov, "Lens field of view, degrees")
        ->default_val(195.0);
    pipeline_cmd->add_option("--cam-fov", pipe_cam_fov, "Target field of view, degrees")
        ->default_val(150.0);
    pipeline_cmd->add_option("--out-size", pipe_out_size, "Target size WxH")
        ->default_val("1280x1024");
    auto* pipe_rpp_opt =
        pipeline_cmd->add_option("--r-pp", pipe_r_pp, "Radians per source pixel");
    pipeline_cmd->add_option("--detector", detector_spec, "stub or exec:<cmd>")
        ->default_val("stub");
    pipeline_cmd->add_option("--stub-delay-ms", stub_delays_ms,
                             "Stub detector delay schedule, milliseconds (cycled)");
    pipeline_cmd->add_option("--mode", mode, "Preprocess mode: fused or sequential")
        ->default_val("fused");
    pipeline_cmd->add_flag("--pipelined", pipelined,
                           "Overlap preprocessing of the next frame with detection");
    pipeline_cmd->add_option("--fps", fps, "Nominal source rate (<= 60)")->default_val(30.0);
    pipeline_cmd->add_option("--report", report_path, "Pipeline report JSON path")->required();

    // power-report
    std::string log_path;
    double supply_voltage = 16.0;
    std::string battery_arg;
    double flops_value = 0.0;
    double efficiency_power_value = 0.0;
    std::string power_json;
    auto* power_cmd =
        app.add_subcommand("power-report", "Summarize a current log into power and battery life");
    power_cmd->add_option("--log", log_path, "CSV log: timestamp_s,current_a,voltage_v")
        ->required();
    power_cmd->add_option("--supply-voltage", supply_voltage, "Supply voltage, volts")
        ->default_val(16.0);
    power_cmd->add_option("--battery", battery_arg, "Battery as voltage:capacity_ah, e.g. "
                                                    "14.8:3.85");
    auto* flops_opt = power_cmd->add_option("--flops", flops_value,
                                            "Measured FLOPS to pair with a power figure");
    auto* eff_opt = power_cmd->add_option(
        "--efficiency-power", efficiency_power_value,
        "Explicit power figure (watts) for the GFLOPS/W ratio; default: log average");
    power_cmd->add_option("--json", power_json, "Write the report to a file instead of stdout");

    // plotdata
    std::vector<std::string> plot_inputs;
    std::string plot_out_dir = ".";
    auto* plot_cmd = app.add_subcommand(
        "plotdata", "Turn sweep CSVs or power logs into whitespace-separated series files");
    plot_cmd->add_option("inputs", plot_inputs, "Sweep CSVs or power logs")->required();
    plot_cmd->add_option("--out-dir", plot_out_dir, "Output directory")->default_val(".");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench_cmd->parsed()) {
            return cmd_bench(bench);
        }
        if (demosaic_cmd->parsed()) {
            return cmd_demosaic(demosaic_in, demosaic_out);
        }
        if (reproject_cmd->parsed()) {
            return cmd_reproject(reproject_in, reproject_out, lens_fov_deg, cam_fov_deg, out_size,
                                 rpp_opt->count() ? std::optional<double>(r_pp_value)
                                                  : std::nullopt);
        }
        if (pipeline_cmd->parsed()) {
            return cmd_pipeline(frames_dir, pipe_lens_fov, pipe_cam_fov, pipe_out_size,
                                pipe_rpp_opt->count() ? std::optional<double>(pipe_r_pp)
                                                      : std::nullopt,
                                detector_spec, stub_delays_ms, mode, pipelined, fps, report_path);
        }
        if (power_cmd->parsed()) {
            return cmd_power_report(log_path, supply_voltage, battery_arg,
                                    flops_opt->count() ? std::optional<double>(flops_value)
                                                       : std::nullopt,
                                    eff_opt->count() ? std::optional<double>(efficiency_power_value)
                                                     : std::nullopt,
                                    power_json);
        }
        if (plot_cmd->parsed()) {
            return cmd_plotdata(plot_inputs, plot_out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
