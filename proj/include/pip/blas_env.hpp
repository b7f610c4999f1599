#pragma once

// OpenBLAS built with DYNAMIC_ARCH picks its kernels from the CPU model name.
// Virtualized CPUs that report a generic model fall back to the SSE3
// "Prescott" kernels even when AVX2/AVX-512 are available. The kernel is
// fixed when the library loads, so the only remedy is to restart the
// process with OPENBLAS_CORETYPE set.

#include <cstdlib>
#include <cstring>
#include <string>

#if defined(__linux__)
#include <unistd.h>
#endif

extern "C" char* openblas_get_corename();

namespace pip {

/// Kernel name OpenBLAS should use on this CPU, or nullptr to keep its choice.
inline const char* preferred_blas_core() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx512f")) return "SkylakeX";
    if (__builtin_cpu_supports("avx2")) return "Haswell";
#endif
    return nullptr;
}

/// Re-executes the current program with a matching OPENBLAS_CORETYPE when
/// OpenBLAS fell back to a generic kernel. Returns normally otherwise.
inline void ensure_blas_kernel(char** argv) {
#if defined(__linux__)
    if (std::getenv("OPENBLAS_CORETYPE") || std::getenv("PIP_NO_BLAS_REEXEC")) return;
    const char* core = openblas_get_corename();
    if (!core) return;
    const std::string current = core;
    if (current != "Prescott" && current != "Core2" && current != "Penryn" && current != "Nehalem" && current != "generic") return;
    const char* want = preferred_blas_core();
    if (!want) return;
    ::setenv("OPENBLAS_CORETYPE", want, 1);
    ::execv("/proc/self/exe", argv);
    // execv only returns on failure; carry on with the slow kernels.
    ::unsetenv("OPENBLAS_CORETYPE");
#else
    (void)argv;
#endif
}

} // namespace pip
