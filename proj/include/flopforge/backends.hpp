#pragma once

#include <memory>
#include <string>
#include <vector>

#include "flopforge/rotbench.hpp"

namespace flopforge {

// Serial reference backend: one worker after another through the public
// kernel functions. Kept as the ground truth the parallel backend is tested
// against.
class ScalarBackend final : public ComputeBackend {
public:
    std::string id() const override { return "scalar"; }
    BackendKind kind() const override { return BackendKind::scalar; }
    ExecResult execute(const RotationKernelSpec& spec, std::int64_t workers) const override;
};

// OpenMP backend: workers are processed in fixed-width lane blocks so the
// iteration loop vectorizes across workers, and blocks are distributed over
// all available threads (capped by FLOPFORGE_THREADS).
class ParallelBackend final : public ComputeBackend {
public:
    std::string id() const override { return "parallel"; }
    BackendKind kind() const override { return BackendKind::parallel; }
    ExecResult execute(const RotationKernelSpec& spec, std::int64_t workers) const override;
};

// Registry of selectable backends. "scalar" and "parallel" are always
// present; accelerator plug-ins conforming to ComputeBackend can be added at
// startup with register_backend.
const ComputeBackend& backend_by_id(const std::string& id); // throws BackendError
std::vector<std::string> backend_ids();
void register_backend(std::shared_ptr<ComputeBackend> backend);

} // namespace flopforge
