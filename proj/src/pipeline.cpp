#include "flopforge/pipeline.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "flopforge/demosaic.hpp"
#include "flopforge/errors.hpp"
#include "flopforge/parallel.hpp"

namespace flopforge {

using steady_clock = std::chrono::steady_clock;

void FrameSource::validate() const {
    if (!(nominal_fps > 0.0) || nominal_fps > 60.0) {
        throw ConfigError("nominal frame rate must be in (0, 60] fps");
    }
    for (const BayerImage& frame : frames) {
        if (frame.width != frames.front().width || frame.height != frames.front().height) {
            throw ConfigError("all frames of a source must share dimensions");
        }
    }
}

std::pair<double, double> summarize(const std::vector<double>& series) {
    if (series.empty()) {
        throw StatisticsError("cannot summarize an empty series");
    }
    const double n = static_cast<double>(series.size());
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
    if (series.size() == 1) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (const double x : series) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0))};
}

StubDetector::StubDetector(std::vector<double> delays_s, std::vector<Detection> scripted)
    : delays_s_(std::move(delays_s)), scripted_(std::move(scripted)) {
    if (delays_s_.empty()) {
        delays_s_.push_back(0.0);
    }
    for (const double d : delays_s_) {
        if (d < 0.0) {
            throw ConfigError("stub detector delays must be >= 0");
        }
    }
    for (const Detection& det : scripted_) {
        if (det.confidence < 0.0 || det.confidence > 1.0) {
            throw ConfigError("detection confidence must be in [0, 1]");
        }
    }
}

std::vector<Detection> StubDetector::detect(const RgbImage&) {
    const double delay = delays_s_[calls_++ % delays_s_.size()];
    if (delay > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    return scripted_;
}

namespace {

void write_all(int fd, const char* data, std::size_t count) {
    while (count > 0) {
        const ssize_t written = ::write(fd, data, count);
        if (written < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw Error(std::string("writing to external detector failed: ") +
                        std::strerror(errno));
        }
        data += written;
        count -= static_cast<std::size_t>(written);
    }
}

std::vector<Detection> parse_detections_line(const std::string& line) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("external detector emitted invalid JSON: ") + e.what());
    }
    if (!parsed.is_array()) {
        throw FormatError("external detector must emit one JSON array per frame");
    }
    std::vector<Detection> detections;
    detections.reserve(parsed.size());
    for (const auto& item : parsed) {
        Detection det;
        det.x = item.value("x", 0.0);
        det.y = item.value("y", 0.0);
        det.width = item.value("w", 0.0);
        det.height = item.value("h", 0.0);
        det.label = item.value("label", std::string{});
        det.confidence = item.value("confidence", 0.0);
        if (det.confidence < 0.0 || det.confidence > 1.0) {
            throw FormatError("detection confidence must be in [0, 1]");
        }
        detections.push_back(std::move(det));
    }
    return detections;
}

} // namespace

ExecDetector::ExecDetector(std::string command) : command_(std::move(command)) {
    // a dying child must surface as a write error, not kill the process
    std::signal(SIGPIPE, SIG_IGN);

    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) {
        throw Error(std::string("pipe failed: ") + std::strerror(errno));
    }
    if (::pipe(from_child) != 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw Error(std::string("pipe failed: ") + std::strerror(errno));
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        throw Error(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    child_pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
}

ExecDetector::~ExecDetector() {
    if (to_child_ >= 0) {
        ::close(to_child_);
    }
    if (from_child_ >= 0) {
        ::close(from_child_);
    }
    if (child_pid_ > 0) {
        int status = 0;
        ::waitpid(child_pid_, &status, 0);
    }
}

std::vector<Detection> ExecDetector::detect(const RgbImage& frame) {
    std::ostringstream ppm;
    write_ppm(ppm, frame);
    const std::string payload = ppm.str();
    write_all(to_child_, payload.data(), payload.size());

    for (;;) {
        const auto newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            const std::string line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            return parse_detections_line(line);
        }
        char chunk[4096];
        const ssize_t got = ::read(from_child_, chunk, sizeof chunk);
        if (got < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw Error(std::string("reading from external detector failed: ") +
                        std::strerror(errno));
        }
        if (got == 0) {
            throw Error("external detector closed its output before answering");
        }
        buffer_.append(chunk, static_cast<std::size_t>(got));
    }
}

RgbImage preprocess_frame(const BayerImage& raw, const RemapTable& map, PreprocessMode mode) {
    raw.validate();
    if (raw.width != map.src_width || raw.height != map.src_height) {
        throw ConfigError("frame dimensions do not match the remap table's source");
    }
    if (mode == PreprocessMode::sequential) {
        return apply_remap(demosaic_bilinear(raw), map);
    }
    RgbImage out(map.width, map.height);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const std::size_t i = map.index(x, y);
            out.set_pixel(x, y, bilinear_sample(map.src_width, map.src_height, map.src_x[i],
                                                map.src_y[i], [&raw](int sx, int sy) {
                                                    return demosaic_at(raw, sx, sy);
                                                }));
        }
    }
    return out;
}

namespace {

double seconds_between(steady_clock::time_point a, steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

struct PreprocessResult {
    RgbImage rgb;
    double elapsed_s = 0;
    steady_clock::time_point started;
};

void commit_frame(PipelineReport& report, double pre_s, double det_s, double e2e_s,
                  std::vector<Detection> detections) {
    report.preprocess.series_s.push_back(pre_s);
    report.detect.series_s.push_back(det_s);
    report.end_to_end.series_s.push_back(e2e_s);
    report.detections.push_back(std::move(detections));
}

} // namespace

PipelineReport run_pipeline(const FrameSource& source, const EquidistantLens& lens,
                            const RectilinearCamera& cam, DetectorStage& detector,
                            const PipelineConfig& config) {
    source.validate();
    if (source.frames.empty()) {
        throw InputError("frame source is empty");
    }
    if (source.frames.front().width != lens.width ||
        source.frames.front().height != lens.height) {
        throw ConfigError("frame dimensions do not match the lens");
    }

    const RemapTable map = build_remap(lens, cam);
    const std::vector<BayerImage>& frames = source.frames;
    PipelineReport report;
    report.frames_in = frames.size();

    const auto run_started = steady_clock::now();

    if (!config.pipelined) {
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const auto t0 = steady_clock::now();
            RgbImage rgb;
            try {
                rgb = preprocess_frame(frames[i], map, config.mode);
            } catch (const std::exception& e) {
                report.failure = PipelineFailure{i, "preprocess", e.what()};
                break;
            }
            const auto t1 = steady_clock::now();
            std::vector<Detection> detections;
            try {
                detections = detector.detect(rgb);
            } catch (const std::exception& e) {
                report.failure = PipelineFailure{i, "detect", e.what()};
                break;
            }
            const auto t2 = steady_clock::now();
            commit_frame(report, seconds_between(t0, t1), seconds_between(t1, t2),
                         seconds_between(t0, t2), std::move(detections));
        }
    } else {
        // one frame of lookahead: frame i+1 is preprocessed while frame i is
        // in the detector
        auto timed_preprocess = [&](std::size_t i) {
            PreprocessResult result;
            result.started = steady_clock::now();
            result.rgb = preprocess_frame(frames[i], map, config.mode);
            result.elapsed_s = seconds_between(result.started, steady_clock::now());
            return result;
        };
        std::future<PreprocessResult> pending =
            std::async(std::launch::async, timed_preprocess, std::size_t{0});
        for (std::size_t i = 0; i < frames.size(); ++i) {
            PreprocessResult pre;
            try {
                pre = pending.get();
            } catch (const std::exception& e) {
                report.failure = PipelineFailure{i, "preprocess", e.what()};
                break;
            }
            if (i + 1 < frames.size()) {
                pending = std::async(std::launch::async, timed_preprocess, i + 1);
            }
            const auto t1 = steady_clock::now();
            std::vector<Detection> detections;
            try {
                detections = detector.detect(pre.rgb);
            } catch (const std::exception& e) {
                report.failure = PipelineFailure{i, "detect", e.what()};
                break;
            }
            const auto t2 = steady_clock::now();
            commit_frame(report, pre.elapsed_s, seconds_between(t1, t2),
                         seconds_between(pre.started, t2), std::move(detections));
        }
        // a still-running lookahead is joined by the future's destructor
    }

    const double total_s = seconds_between(run_started, steady_clock::now());
    report.frames_processed = report.detections.size();
    for (StageStats* stats : {&report.preprocess, &report.detect, &report.end_to_end}) {
        if (!stats->series_s.empty()) {
            std::tie(stats->mean_s, stats->sd_s) = summarize(stats->series_s);
        }
    }
    if (total_s > 0) {
        report.throughput_fps = static_cast<double>(report.frames_processed) / total_s;
    }
    return report;
}

} // namespace flopforge
