#pragma once

namespace flopforge {

// Thread budget for parallel kernels: the hardware thread count, optionally
// capped by the FLOPFORGE_THREADS environment variable.
int max_threads();

} // namespace flopforge
