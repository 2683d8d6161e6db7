#include <atomic>
#include <cstdlib>

#include "evolab/core/errors.hpp"
#include "evolab/core/kernels.hpp"

namespace evolab::kern {

namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* pick_auto() {
    if (const Ops* simd = avx2_ops()) return simd;
    return &scalar_ops();
}

const Ops* pick_named(const std::string& name) {
    if (name == "scalar") return &scalar_ops();
    if (name == "avx2") {
        const Ops* simd = avx2_ops();
        if (!simd) throw ArgumentError("AVX2 kernels requested but unavailable on this CPU/build");
        return simd;
    }
    if (name == "auto" || name.empty()) return pick_auto();
    throw ArgumentError("unknown kernel set '" + name + "' (expected scalar|avx2|auto)");
}

const Ops* init_from_env() {
    const char* env = std::getenv("EVOLAB_KERNELS");
    return pick_named(env ? env : "auto");
}

}  // namespace

const Ops& ops() {
    const Ops* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = init_from_env();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void set_active(const std::string& name) {
    g_active.store(pick_named(name), std::memory_order_release);
}

std::string active_name() { return ops().name; }

}  // namespace evolab::kern
