#include "lmstab/kernels.hpp"

namespace lmstab::kernels {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

struct Selection {
    const Ops* ops;
    const char* name;
};

Selection select() {
    if (const Ops* a = avx2_ops()) return {a, "avx2"};
    return {&scalar_ops(), "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

}  // namespace

const Ops& ops() { return *selection().ops; }
const char* active_name() { return selection().name; }

}  // namespace lmstab::kernels
