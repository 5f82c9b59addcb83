#include "spbm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace spbm::kernels {
namespace {

const Ops* pick_default() {
    if (const char* env = std::getenv("SPBM_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar();
        if (std::strcmp(env, "avx2") == 0 && avx2()) return avx2();
    }
    if (const Ops* v = avx2()) return v;
    return &scalar();
}

const Ops*& active_slot() {
    static const Ops* slot = pick_default();
    return slot;
}

} // namespace

const Ops& active() { return *active_slot(); }

bool select(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        active_slot() = &scalar();
        return true;
    }
    if (std::strcmp(name, "avx2") == 0) {
        if (const Ops* v = avx2()) {
            active_slot() = v;
            return true;
        }
        return false;
    }
    if (std::strcmp(name, "auto") == 0) {
        active_slot() = avx2() ? avx2() : &scalar();
        return true;
    }
    return false;
}

} // namespace spbm::kernels
