#include "cavitytrio/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cavitytrio::parallel {

namespace {
std::atomic<std::size_t> g_cap{0};

std::size_t env_cap() {
    if (const char* raw = std::getenv("CAVITY_TRIO_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(raw, &end, 10);
        if (end != raw && parsed > 0) return static_cast<std::size_t>(parsed);
    }
    return 0;
}
}  // namespace

std::size_t thread_cap() {
    const std::size_t override_cap = g_cap.load(std::memory_order_relaxed);
    if (override_cap > 0) return override_cap;
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t env = env_cap();
    return env > 0 ? std::min(env, hw) : hw;
}

void set_thread_cap(std::size_t cap) {
    g_cap.store(cap, std::memory_order_relaxed);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cavitytrio::parallel
