#include "flopforge/backends.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>

#include "flopforge/errors.hpp"
#include "flopforge/parallel.hpp"

namespace flopforge {

namespace {

using steady_clock = std::chrono::steady_clock;

double seconds_since(steady_clock::time_point t0) {
    return std::chrono::duration<double>(steady_clock::now() - t0).count();
}

// Rotates D*LANES independent points for `iterations` steps and writes one
// readout per lane. LANES is sized so the live state stays in registers;
// the n-loop is a serial dependency chain, so all parallelism comes from the
// lanes.
template <int D, int LANES>
void run_lane_block(float c, float s, std::int64_t iterations, float* outputs, int count) {
    float x[D][LANES];
    float y[D][LANES];
    for (int d = 0; d < D; ++d) {
        for (int l = 0; l < LANES; ++l) {
            x[d][l] = 1.0f;
            y[d][l] = 0.0f;
        }
    }
    for (std::int64_t n = 0; n < iterations; ++n) {
        for (int d = 0; d < D; ++d) {
#pragma omp simd
            for (int l = 0; l < LANES; ++l) {
                const float nx = c * x[d][l] - s * y[d][l];
                const float ny = s * x[d][l] + c * y[d][l];
                x[d][l] = nx;
                y[d][l] = ny;
            }
        }
    }
    for (int l = 0; l < count; ++l) {
        float out = x[0][l] * y[0][l];
        for (int d = 1; d < D; ++d) {
            out += x[d][l] * y[d][l];
        }
        outputs[l] = out;
    }
}

// 64 points in flight regardless of D: 64 workers for D=1, 16 for D=4.
template <int D>
void run_batch(float c, float s, std::int64_t iterations, float* outputs, std::int64_t workers) {
    constexpr int kLanes = 64 / D;
    const std::int64_t blocks = (workers + kLanes - 1) / kLanes;
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::int64_t first = b * kLanes;
        const int count = static_cast<int>(std::min<std::int64_t>(kLanes, workers - first));
        run_lane_block<D, kLanes>(c, s, iterations, outputs + first, count);
    }
}

} // namespace

ExecResult ScalarBackend::execute(const RotationKernelSpec& spec, std::int64_t workers) const {
    spec.validate();
    if (workers < 1) {
        throw ConfigError("worker count must be >= 1");
    }
    ExecResult result;
    result.outputs.resize(static_cast<std::size_t>(workers));
    const auto t0 = steady_clock::now();
    for (std::int64_t w = 0; w < workers; ++w) {
        PointBlock block = PointBlock::initial(spec.dimensionality);
        block = rotate_iterative(block, spec);
        result.outputs[static_cast<std::size_t>(w)] = readout(block);
    }
    result.elapsed_s = seconds_since(t0);
    return result;
}

ExecResult ParallelBackend::execute(const RotationKernelSpec& spec, std::int64_t workers) const {
    spec.validate();
    if (workers < 1) {
        throw ConfigError("worker count must be >= 1");
    }
    const float c = static_cast<float>(std::cos(spec.angle));
    const float s = static_cast<float>(std::sin(spec.angle));
    ExecResult result;
    result.outputs.resize(static_cast<std::size_t>(workers));
    float* outputs = result.outputs.data();
    const auto t0 = steady_clock::now();
    switch (spec.dimensionality) {
    case 1: run_batch<1>(c, s, spec.iterations, outputs, workers); break;
    case 2: run_batch<2>(c, s, spec.iterations, outputs, workers); break;
    case 4: run_batch<4>(c, s, spec.iterations, outputs, workers); break;
    default: throw ConfigError("unsupported dimensionality");
    }
    result.elapsed_s = seconds_since(t0);
    return result;
}

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, std::shared_ptr<ComputeBackend>>& registry() {
    static std::map<std::string, std::shared_ptr<ComputeBackend>> backends = [] {
        std::map<std::string, std::shared_ptr<ComputeBackend>> m;
        m.emplace("scalar", std::make_shared<ScalarBackend>());
        m.emplace("parallel", std::make_shared<ParallelBackend>());
        return m;
    }();
    return backends;
}

} // namespace

const ComputeBackend& backend_by_id(const std::string& id) {
    std::lock_guard lock(registry_mutex());
    const auto& backends = registry();
    const auto it = backends.find(id);
    if (it == backends.end()) {
        std::string known;
        for (const auto& [name, backend] : backends) {
            if (!known.empty()) {
                known += ", ";
            }
            known += name;
        }
        throw BackendError("unknown backend '" + id + "' (known: " + known + ")");
    }
    return *it->second;
}

std::vector<std::string> backend_ids() {
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> ids;
    for (const auto& [name, backend] : registry()) {
        ids.push_back(name);
    }
    return ids;
}

void register_backend(std::shared_ptr<ComputeBackend> backend) {
    if (!backend) {
        throw BackendError("cannot register a null backend");
    }
    std::lock_guard lock(registry_mutex());
    const auto [it, inserted] = registry().emplace(backend->id(), std::move(backend));
    if (!inserted) {
        throw BackendError("backend '" + it->first + "' is already registered");
    }
}

} // namespace flopforge
