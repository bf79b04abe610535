#include "flopforge/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flopforge {

int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* cap = std::getenv("FLOPFORGE_THREADS")) {
        try {
            const int c = std::stoi(cap);
            if (c >= 1 && c < n) {
                n = c;
            }
        } catch (...) {
            // unparsable cap: keep the hardware count
        }
    }
    return n;
}

} // namespace flopforge
