#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <utility>

namespace mshit {

/// How replica loops are executed. Both backends visit every replica index
/// exactly once with its own stream, and estimators reduce per-replica
/// outputs serially in index order, so results are bit-identical.
enum class Backend
{
    serial,
    openmp,
};

struct ExecutionConfig
{
    Backend backend = Backend::openmp;
    /// 0 keeps the OpenMP default.
    int threads = 0;
};

ExecutionConfig execution_config() noexcept;
void set_execution_config(ExecutionConfig config) noexcept;

/// Restores the previous configuration on scope exit.
class ScopedExecution
{
public:
    explicit ScopedExecution(ExecutionConfig config) noexcept : saved_(execution_config())
    {
        set_execution_config(config);
    }
    ~ScopedExecution() { set_execution_config(saved_); }
    ScopedExecution(const ScopedExecution&) = delete;
    ScopedExecution& operator=(const ScopedExecution&) = delete;

private:
    ExecutionConfig saved_;
};

namespace detail {
int begin_parallel_threads() noexcept;
}

/// Runs body(i, scratch) for i in [0, n). make_scratch() is called once per
/// worker. If replicas throw, the exception of the lowest failing index is
/// rethrown after the loop.
template <class MakeScratch, class Body>
void run_replicas(std::size_t n, MakeScratch&& make_scratch, Body&& body, Backend backend)
{
    if (backend == Backend::serial) {
        auto scratch = make_scratch();
        for (std::size_t i = 0; i < n; ++i)
            body(i, scratch);
        return;
    }

    std::exception_ptr error;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    const int threads = detail::begin_parallel_threads();
    const auto count = static_cast<long long>(n);
#pragma omp parallel num_threads(threads)
    {
        auto scratch = make_scratch();
#pragma omp for schedule(static)
        for (long long i = 0; i < count; ++i) {
            try {
                body(static_cast<std::size_t>(i), scratch);
            } catch (...) {
#pragma omp critical(mshit_replica_error)
                {
                    if (static_cast<std::size_t>(i) < error_index) {
                        error_index = static_cast<std::size_t>(i);
                        error = std::current_exception();
                    }
                }
            }
        }
    }
    if (error)
        std::rethrow_exception(error);
}

template <class MakeScratch, class Body>
void run_replicas(std::size_t n, MakeScratch&& make_scratch, Body&& body)
{
    run_replicas(n, std::forward<MakeScratch>(make_scratch), std::forward<Body>(body),
                 execution_config().backend);
}

}  // namespace mshit
