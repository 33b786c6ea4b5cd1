#include "nkc/kernels/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace nkc::kernels {

const Ops& scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

const char* kind_name(Kind kind) {
    switch (kind) {
        case Kind::scalar: return "scalar";
        case Kind::avx2: return "avx2";
        case Kind::neon: return "neon";
    }
    return "?";
}

bool available(Kind kind) {
    switch (kind) {
        case Kind::scalar:
            return true;
        case Kind::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Kind::neon:
#if defined(__aarch64__)
            return true;  // baseline on aarch64
#else
            return false;
#endif
    }
    return false;
}

std::vector<Kind> available_kinds() {
    std::vector<Kind> kinds;
    for (Kind k : {Kind::scalar, Kind::avx2, Kind::neon})
        if (available(k)) kinds.push_back(k);
    return kinds;
}

const Ops& get(Kind kind) {
    switch (kind) {
        case Kind::scalar:
            return scalar_ops();
        case Kind::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (available(Kind::avx2)) return avx2_ops();
#endif
            break;
        case Kind::neon:
#if defined(__aarch64__)
            return neon_ops();
#endif
            break;
    }
    throw std::invalid_argument(std::string("kernel variant unavailable: ") +
                                kind_name(kind));
}

namespace {

Kind pick_default() {
    if (const char* env = std::getenv("NKC_KERNEL")) {
        for (Kind k : {Kind::scalar, Kind::avx2, Kind::neon}) {
            if (std::strcmp(env, kind_name(k)) == 0) {
                if (available(k)) return k;
                std::fprintf(stderr,
                             "nkcollab: NKC_KERNEL=%s unavailable on this "
                             "CPU, using default\n",
                             env);
                break;
            }
        }
    }
    if (available(Kind::avx2)) return Kind::avx2;
    if (available(Kind::neon)) return Kind::neon;
    return Kind::scalar;
}

Kind g_active = pick_default();

}  // namespace

const Ops& active() { return get(g_active); }

Kind active_kind() { return g_active; }

void set_active(Kind kind) {
    get(kind);  // validates
    g_active = kind;
}

}  // namespace nkc::kernels
