#ifndef DIFFBAND_PARALLEL_HPP
#define DIFFBAND_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace diffband {

/// Applies fn to every item on up to `threads` workers. Results come back in input order,
/// so output never depends on the worker count. The lowest-index exception is rethrown.
template <class T, class Fn>
auto ordered_parallel_map(std::span<const T> items, unsigned threads, Fn fn)
    -> std::vector<std::invoke_result_t<Fn&, const T&>> {
    using R = std::invoke_result_t<Fn&, const T&>;
    const std::size_t count = items.size();
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next.fetch_add(1); idx < count; idx = next.fetch_add(1)) {
            try {
                slots[idx].emplace(fn(items[idx]));
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace diffband

#endif
