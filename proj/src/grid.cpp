#include "pathfinder/grid.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace pathfinder {

std::vector<Complex> evaluate_grid(const std::function<EvaluationRequest(double, double)>& request_at,
                                   const GridAxis& x_axis, const GridAxis& y_axis, int threads) {
    const int nx = x_axis.count, ny = y_axis.count;
    const long total = static_cast<long>(nx) * ny;
    std::vector<Complex> values(total);
    threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, total)));

    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (long i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
                const int ix = static_cast<int>(i % nx);
                const int iy = static_cast<int>(i / nx);
                values[i] = evaluate(request_at(x_axis.at(ix), y_axis.at(iy))).value;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next.store(total);
        }
    };

    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return values;
}

} // namespace pathfinder
