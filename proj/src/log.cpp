#include "spclust/log.hpp"

#include <atomic>
#include <iostream>

namespace spclust {

namespace {
std::atomic<bool> g_warnings{true};
}

void warn(const std::string& msg) {
    if (g_warnings.load(std::memory_order_relaxed))
        std::cerr << "[spclust] warning: " << msg << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

bool warnings_enabled() { return g_warnings.load(); }

} // namespace spclust
