// Times the OpenMP kernels against their serial references and prints a
// speedup table. `--quick` shrinks the workloads for smoke runs.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include "flopforge/backends.hpp"
#include "flopforge/demosaic.hpp"
#include "flopforge/image.hpp"
#include "flopforge/lens.hpp"
#include "flopforge/parallel.hpp"
#include "flopforge/pipeline.hpp"
#include "flopforge/reproject.hpp"
#include "flopforge/rotbench.hpp"

using namespace flopforge;

namespace {

double time_once(const std::function<void()>& work) {
    const auto t0 = std::chrono::steady_clock::now();
    work();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double best_of(int reps, const std::function<void()>& work) {
    double best = time_once(work);
    for (int i = 1; i < reps; ++i) {
        best = std::min(best, time_once(work));
    }
    return best;
}

void print_row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s %12.4f %12.4f %10.2fx\n", name, serial_s, parallel_s,
                serial_s / parallel_s);
}

BayerImage synthetic_mosaic(int width, int height) {
    BayerImage raw(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            raw.sample(x, y) = static_cast<std::uint8_t>((x * 7 + y * 13) & 0xff);
        }
    }
    return raw;
}

} // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        }
    }

    const int reps = quick ? 1 : 3;
    std::printf("threads: %d\n", max_threads());
    std::printf("%-28s %12s %12s %10s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    // rotation kernel: scalar backend vs lane-batched OpenMP backend
    {
        RotationKernelSpec spec;
        spec.dimensionality = 4;
        spec.iterations = quick ? 1000 : 40000;
        const std::int64_t workers = quick ? 512 : 4096;
        const ScalarBackend scalar;
        const ParallelBackend parallel;
        scalar.execute(spec, workers);   // warm-up
        parallel.execute(spec, workers); // warm-up
        double serial_s = 0;
        double parallel_s = 0;
        for (int i = 0; i < reps; ++i) {
            serial_s = i ? std::min(serial_s, scalar.execute(spec, workers).elapsed_s)
                         : scalar.execute(spec, workers).elapsed_s;
            parallel_s = i ? std::min(parallel_s, parallel.execute(spec, workers).elapsed_s)
                           : parallel.execute(spec, workers).elapsed_s;
        }
        print_row("rotation (D=4)", serial_s, parallel_s);
        const double gflops = compute_flops(spec.dimensionality, spec.iterations, workers,
                                            parallel_s) /
                              1e9;
        std::printf("%-28s %36.1f GFLOPS\n", "  parallel throughput", gflops);
    }

    const int width = quick ? 320 : 1280;
    const int height = quick ? 256 : 1024;
    const BayerImage raw = synthetic_mosaic(width, height);
    const EquidistantLens lens(width, height, deg2rad(195.0));
    const RectilinearCamera cam(width, height, deg2rad(150.0));

    // demosaic
    {
        const double serial_s = best_of(reps, [&] { demosaic_bilinear_serial(raw); });
        const double parallel_s = best_of(reps, [&] { demosaic_bilinear(raw); });
        print_row("demosaic", serial_s, parallel_s);
    }

    // remap application over a prebuilt table
    {
        const RemapTable map = build_remap(lens, cam);
        const RgbImage rgb = demosaic_bilinear(raw);
        const double serial_s = best_of(reps, [&] { apply_remap_serial(rgb, map); });
        const double parallel_s = best_of(reps, [&] { apply_remap(rgb, map); });
        print_row("remap", serial_s, parallel_s);
    }

    // fused preprocessing vs the two-pass sequential route
    {
        const RemapTable map = build_remap(lens, cam);
        const double sequential_s =
            best_of(reps, [&] { preprocess_frame(raw, map, PreprocessMode::sequential); });
        const double fused_s =
            best_of(reps, [&] { preprocess_frame(raw, map, PreprocessMode::fused); });
        std::printf("%-28s %12.4f %12.4f %10.2fx  (both OpenMP)\n", "preprocess seq vs fused",
                    sequential_s, fused_s, sequential_s / fused_s);
    }

    return 0;
}
