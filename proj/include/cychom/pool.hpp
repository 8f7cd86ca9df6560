// Small worker pool over an indexed task list. The library is pure, so
// workers share nothing; results land in preallocated slots and are merged
// in index order, keeping every run deterministic.
#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cychom {

inline int default_thread_count() {
    if (const char* env = std::getenv("CYCHOM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <class Result, class Task>
std::vector<Result> run_tasks(const std::vector<Task>& tasks,
                              const std::function<Result(const Task&)>& fn, int threads) {
    std::vector<Result> results(tasks.size());
    if (threads <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = fn(tasks[i]);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    int n = std::min<int>(threads, static_cast<int>(tasks.size()));
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    for (int t = 0; t < n; ++t)
        workers.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    results[i] = fn(tasks[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace cychom
