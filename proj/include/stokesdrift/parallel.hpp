#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace stokesdrift {

/// Worker count from STOKESDRIFT_WORKERS, falling back to the hardware concurrency.
inline unsigned default_workers() {
    if (const char* env = std::getenv("STOKESDRIFT_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, n) on up to `workers` threads and returns the
/// results in index order. When several jobs throw, the exception of the
/// lowest index is rethrown so failures are reported deterministically.
template <class Fn>
auto parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
    using Result = decltype(fn(std::size_t{0}));
    std::vector<Result> out(n);
    std::vector<std::exception_ptr> errors(n);
    const unsigned w = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1)));

    auto run = [&](unsigned id) {
        for (std::size_t i = id; i < n; i += w) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (w == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(w);
        for (unsigned id = 0; id < w; ++id) pool.emplace_back(run, id);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace stokesdrift
