#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace capsynth {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; Parallel uses OpenMP with static scheduling. Both must produce
/// identical bytes for identical input.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void parallel_for(int n, Exec exec, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
#else
    (void)exec;
#endif
    for (int i = 0; i < n; ++i) body(i);
}

}  // namespace capsynth
