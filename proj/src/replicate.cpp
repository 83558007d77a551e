#include "mshit/replicate.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mshit {

namespace {
std::atomic<Backend> g_backend{Backend::openmp};
std::atomic<int> g_threads{0};
}  // namespace

ExecutionConfig execution_config() noexcept
{
    return {g_backend.load(), g_threads.load()};
}

void set_execution_config(ExecutionConfig config) noexcept
{
    g_backend.store(config.backend);
    g_threads.store(config.threads < 0 ? 0 : config.threads);
}

namespace detail {
int begin_parallel_threads() noexcept
{
    const int t = g_threads.load();
#ifdef _OPENMP
    return t > 0 ? t : omp_get_max_threads();
#else
    return t > 0 ? t : 1;
#endif
}
}  // namespace detail

}  // namespace mshit
