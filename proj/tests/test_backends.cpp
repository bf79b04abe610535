#include <cstdlib>

#include <doctest.h>

#include "flopforge/backends.hpp"
#include "flopforge/errors.hpp"
#include "flopforge/parallel.hpp"

using namespace flopforge;

namespace {

RotationKernelSpec spec_of(int dim, std::int64_t iterations) {
    RotationKernelSpec spec;
    spec.dimensionality = dim;
    spec.iterations = iterations;
    return spec;
}

} // namespace

TEST_CASE("parallel backend agrees with the scalar reference") {
    const ScalarBackend scalar;
    const ParallelBackend parallel;
    for (const int dim : {1, 2, 4}) {
        // 70 workers spans multiple lane blocks plus a ragged tail
        const auto spec = spec_of(dim, 40000);
        const auto serial = scalar.execute(spec, 70);
        const auto simd = parallel.execute(spec, 70);
        REQUIRE(serial.outputs.size() == 70);
        REQUIRE(simd.outputs.size() == 70);
        for (std::size_t i = 0; i < 70; ++i) {
            // identical math modulo vectorization/contraction differences
            CHECK(simd.outputs[i] == doctest::Approx(serial.outputs[i]).epsilon(5e-3));
        }
    }
}

TEST_CASE("parallel backend handles awkward worker counts") {
    const ParallelBackend parallel;
    for (const std::int64_t workers : {1, 17, 63, 64, 65, 200}) {
        const auto result = parallel.execute(spec_of(1, 10), workers);
        CHECK(result.outputs.size() == static_cast<std::size_t>(workers));
        for (const float out : result.outputs) {
            CHECK(out == result.outputs.front());
        }
    }
}

TEST_CASE("parallel backend is deterministic across runs") {
    const ParallelBackend parallel;
    const auto a = parallel.execute(spec_of(2, 7500), 100);
    const auto b = parallel.execute(spec_of(2, 7500), 100);
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
        CHECK(a.outputs[i] == b.outputs[i]);
    }
}

TEST_CASE("backends reject invalid requests") {
    const ParallelBackend parallel;
    const ScalarBackend scalar;
    CHECK_THROWS_AS(parallel.execute(spec_of(1, 10), 0), ConfigError);
    CHECK_THROWS_AS(scalar.execute(spec_of(1, 10), -1), ConfigError);
    CHECK_THROWS_AS(parallel.execute(spec_of(3, 10), 1), ConfigError);
    CHECK_THROWS_AS(scalar.execute(spec_of(1, 0), 1), ConfigError);
}

TEST_CASE("backend registry resolves ids") {
    CHECK(backend_by_id("scalar").id() == "scalar");
    CHECK(backend_by_id("parallel").id() == "parallel");
    CHECK(backend_by_id("parallel").kind() == BackendKind::parallel);

    const auto ids = backend_ids();
    CHECK(std::find(ids.begin(), ids.end(), "scalar") != ids.end());
    CHECK(std::find(ids.begin(), ids.end(), "parallel") != ids.end());

    CHECK_THROWS_WITH_AS(backend_by_id("cuda"),
                         doctest::Contains("unknown backend 'cuda'"), BackendError);
}

namespace {

// Minimal accelerator-style plug-in used to exercise registration.
class ToyBackend final : public ComputeBackend {
public:
    std::string id() const override { return "toy"; }
    BackendKind kind() const override { return BackendKind::accelerator; }
    ExecResult execute(const RotationKernelSpec& spec, std::int64_t workers) const override {
        const ScalarBackend fallback;
        return fallback.execute(spec, workers);
    }
};

} // namespace

TEST_CASE("accelerator plug-ins register through the same contract") {
    register_backend(std::make_shared<ToyBackend>());
    CHECK(backend_by_id("toy").kind() == BackendKind::accelerator);
    CHECK(backend_by_id("toy").execute(spec_of(1, 5), 2).outputs.size() == 2);
    CHECK_THROWS_AS(register_backend(std::make_shared<ToyBackend>()), BackendError);
    CHECK_THROWS_AS(register_backend(nullptr), BackendError);
}

TEST_CASE("FLOPFORGE_THREADS caps the thread budget") {
    const int unrestricted = max_threads();
    CHECK(unrestricted >= 1);

    setenv("FLOPFORGE_THREADS", "1", 1);
    CHECK(max_threads() == 1);

    setenv("FLOPFORGE_THREADS", "junk", 1);
    CHECK(max_threads() == unrestricted);

    setenv("FLOPFORGE_THREADS", "100000", 1);
    CHECK(max_threads() == unrestricted); // cap never raises the budget

    unsetenv("FLOPFORGE_THREADS");
    CHECK(max_threads() == unrestricted);
}
