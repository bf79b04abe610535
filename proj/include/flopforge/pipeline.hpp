#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flopforge/image.hpp"
#include "flopforge/lens.hpp"
#include "flopforge/reproject.hpp"

namespace flopforge {

// An ordered run of raw frames with a nominal capture rate (at most 60 fps).
struct FrameSource {
    std::vector<BayerImage> frames;
    double nominal_fps = 30.0;

    void validate() const; // same dimensions everywhere, fps in (0, 60]
};

struct Detection {
    double x = 0; // bounding box in pixels, top-left corner
    double y = 0;
    double width = 0;
    double height = 0;
    std::string label;
    double confidence = 0; // in [0, 1]

    bool operator==(const Detection&) const = default;
};

// A detection stage plugged into the pipeline. Implementations must be pure
// with respect to the input frame; latency is measured by the harness.
class DetectorStage {
public:
    virtual ~DetectorStage() = default;
    virtual std::string id() const = 0;
    virtual std::vector<Detection> detect(const RgbImage& frame) = 0;
};

// Test stand-in for a real network: sleeps through a cycled delay schedule
// and returns a scripted detection list verbatim.
class StubDetector final : public DetectorStage {
public:
    explicit StubDetector(std::vector<double> delays_s = {0.0},
                          std::vector<Detection> scripted = {});
    std::string id() const override { return "stub"; }
    std::vector<Detection> detect(const RgbImage& frame) override;

private:
    std::vector<double> delays_s_;
    std::vector<Detection> scripted_;
    std::size_t calls_ = 0;
};

// Bridges to an external detector process: every frame is written to the
// child's stdin as binary PPM and one JSON line of detections is read back
// from its stdout, e.g. [{"x":0,"y":0,"w":10,"h":10,"label":"person",
// "confidence":0.9}].
class ExecDetector final : public DetectorStage {
public:
    explicit ExecDetector(std::string command);
    ~ExecDetector() override;
    ExecDetector(const ExecDetector&) = delete;
    ExecDetector& operator=(const ExecDetector&) = delete;

    std::string id() const override { return "exec:" + command_; }
    std::vector<Detection> detect(const RgbImage& frame) override;

private:
    std::string command_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

enum class PreprocessMode {
    fused,     // demosaic only the neighbourhoods the remap actually samples
    sequential // full demosaic, then remap; used by the timing-decomposition test
};

struct PipelineConfig {
    PreprocessMode mode = PreprocessMode::fused;
    bool pipelined = false; // overlap preprocess of frame i+1 with detection of frame i
};

struct StageStats {
    std::vector<double> series_s;
    double mean_s = 0;
    double sd_s = 0; // sample standard deviation, n-1 denominator
};

struct PipelineFailure {
    std::size_t frame_index = 0;
    std::string stage;
    std::string message;
};

struct PipelineReport {
    std::size_t frames_in = 0;
    std::size_t frames_processed = 0; // frames that completed every stage
    StageStats preprocess;            // demosaic + reprojection combined
    StageStats detect;
    StageStats end_to_end;
    double throughput_fps = 0;
    std::vector<std::vector<Detection>> detections; // one list per processed frame
    std::optional<PipelineFailure> failure;
    std::string sd_formula = "sample(n-1)";
};

// Mean and sample standard deviation (n-1 denominator; 0 for a single
// sample). Throws StatisticsError on an empty series.
std::pair<double, double> summarize(const std::vector<double>& series);

// Demosaic + reproject one frame over a prebuilt remap table. Both modes
// produce bit-identical output; fused avoids materialising the intermediate
// RGB frame.
RgbImage preprocess_frame(const BayerImage& raw, const RemapTable& map,
                          PreprocessMode mode = PreprocessMode::fused);

// Streams every frame through preprocess and detection, timing each stage
// per frame. A stage failure on frame k yields a report covering the frames
// before k with the failure flagged.
PipelineReport run_pipeline(const FrameSource& source, const EquidistantLens& lens,
                            const RectilinearCamera& cam, DetectorStage& detector,
                            const PipelineConfig& config = {});

} // namespace flopforge
