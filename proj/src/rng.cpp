#include "torus_lqg/rng.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "torus_lqg/error.hpp"

namespace torus_lqg {

RngStream::RngStream(uint64_t seed, uint64_t stream_id) : seed_(seed), stream_(stream_id)
{
    std::seed_seq sq{uint32_t(seed), uint32_t(seed >> 32), uint32_t(stream_id), uint32_t(stream_id >> 32),
                     0x9e3779b9u};
    eng_.seed(sq);
}

double RngStream::uniform()
{
    // 53 random bits, never exactly 0
    return (double(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal()
{
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

std::complex<double> RngStream::complex_normal()
{
    double a = normal(), b = normal();
    return {a * M_SQRT1_2, b * M_SQRT1_2};
}

double RngStream::gamma(double shape, double rate)
{
    if (!(shape > 0.0) || !(rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma needs positive parameters");
    if (shape < 1.0) {
        double u = uniform();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang
    const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

void parallel_for(int count, int threads, const std::function<void(int)>& body)
{
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    threads = std::min(threads, count);
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    for (int t = 0; t < threads; ++t) {
        int lo = int(int64_t(count) * t / threads), hi = int(int64_t(count) * (t + 1) / threads);
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace torus_lqg
