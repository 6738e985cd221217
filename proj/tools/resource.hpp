#pragma once

#include <cstdint>

namespace ppn::cli {

/// Peak resident set size of this process in KiB (VmHWM on Linux, falling
/// back to getrusage). Approximate and platform dependent.
std::uint64_t peak_rss_kib();

/// Best effort: resets the kernel's peak RSS counter so the next reading
/// covers only what follows. Returns false if the platform does not allow it.
bool reset_peak_rss();

}  // namespace ppn::cli
