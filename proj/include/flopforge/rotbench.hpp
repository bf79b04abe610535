#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flopforge {

// Configuration of the rotation micro-kernel: every worker rotates D
// independent 2D points N times by a fixed angle of 2 radians. One iteration
// of one point costs 6 floating point operations (4 mul + 2 add), so a full
// run performs 6*D*N*W of them across W workers.
struct RotationKernelSpec {
    int dimensionality = 4;          // D: number of 2D points per worker, one of {1, 2, 4}
    std::int64_t iterations = 40000; // N
    double angle = 2.0;              // radians; the rotation matrix uses cos(2), sin(2)

    void validate() const; // throws ConfigError
};

// Kernel working state: up to four 2D points in single precision.
struct PointBlock {
    int dim = 1;
    std::array<float, 4> x{}; // first components
    std::array<float, 4> y{}; // second components

    // Every point starts at (1, 0).
    static PointBlock initial(int dim);
};

// A worker-count ramp over one kernel configuration.
struct SweepConfig {
    std::int64_t worker_start = 1;
    std::int64_t worker_end = 1;
    std::int64_t worker_step = 1;
    RotationKernelSpec kernel;
    std::string backend_id = "parallel";

    void validate() const; // throws ConfigError
};

// One sweep point's measured result.
struct BenchRecord {
    std::int64_t workers = 0;
    double elapsed_s = 0; // wall clock, > 0
    double flops = 0;     // 6*D*N*W / elapsed_s
    double checksum = 0;  // sum of per-worker readouts
    std::vector<std::string> warnings;
};

enum class BackendKind { scalar, parallel, accelerator };

const char* to_string(BackendKind kind);

struct ExecResult {
    double elapsed_s = 0;       // kernel execution only, excluding setup
    std::vector<float> outputs; // one readout per worker
};

// Executes W independent kernel instances. Workers are pure and share the
// same initial block, so results do not depend on scheduling order.
class ComputeBackend {
public:
    virtual ~ComputeBackend() = default;
    virtual std::string id() const = 0;
    virtual BackendKind kind() const = 0;
    virtual ExecResult execute(const RotationKernelSpec& spec, std::int64_t workers) const = 0;
};

// Applies the rotation matrix N times to every point of the block. Single
// precision throughout; this is the timed benchmark path.
PointBlock rotate_iterative(PointBlock x0, const RotationKernelSpec& spec);

// Test oracle: rotating n times by `angle` equals one rotation by n*angle.
// Double precision, with the total angle reduced mod 2*pi.
std::array<double, 2> rotate_closed_form(std::array<double, 2> x0, std::int64_t n, double angle);

// Inner product of the first-component vector with the second-component
// vector: D multiplications and D-1 additions. Feeding the result into the
// checksum keeps the compiler from optimising the kernel away.
float readout(const PointBlock& xn);

// 6*D*N*W / t. The (2D-1)*W/t readout term is deliberately excluded.
double compute_flops(int dimensionality, std::int64_t iterations, std::int64_t workers,
                     double elapsed_s);

// Worker counts a sweep visits: start, start+step, ... <= end.
std::vector<std::int64_t> sweep_worker_counts(const SweepConfig& config);

// Preset load ramps: the GPU-style regime (256 to 1,024,000 in steps of 256)
// and the CPU-style regime (1 up to 4,096 in steps of 32; only reachable
// counts are visited, so the ramp tops out at 4,065).
SweepConfig gpu_regime(RotationKernelSpec kernel = {}, std::string backend_id = "parallel");
SweepConfig cpu_regime(RotationKernelSpec kernel = {}, std::string backend_id = "parallel");

struct RunOptions {
    bool warmup = true; // one untimed warm-up run per sweep point
    int repetitions = 1; // when > 1, the median-elapsed record is kept
};

// One load point: runs the kernel on the backend, checks worker outputs
// against the closed-form oracle, and fills in FLOPS and checksum.
BenchRecord run_point(const RotationKernelSpec& spec, std::int64_t workers,
                      const ComputeBackend& backend, const RunOptions& options = {});

struct SweepFailure {
    std::int64_t workers = 0;
    std::string message;
};

struct SweepResult {
    SweepConfig config;
    std::vector<BenchRecord> records; // ascending workers; partial when failed
    std::optional<SweepFailure> failure;
};

// Sequential sweep over all worker counts; a point failure aborts the sweep
// with the records collected so far preserved.
SweepResult run_sweep(const SweepConfig& config, const ComputeBackend& backend,
                      const RunOptions& options = {});

// Measured granularity of the monotonic clock, in seconds.
double timer_resolution();

} // namespace flopforge
