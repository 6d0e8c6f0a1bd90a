#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace torus_lqg {

// Deterministic stream keyed by (seed, stream_id).  mt19937_64 seeded through
// seed_seq; normals by Box-Muller so the output does not depend on the
// standard library's distribution implementations.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream_id);

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_; }

    double uniform();  // (0,1)
    double normal();
    std::complex<double> complex_normal();  // (g1 + i g2)/sqrt2, E|z|^2 = 1
    double gamma(double shape, double rate);

private:
    uint64_t seed_, stream_;
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Runs body(i) for i in [0, count) over `threads` workers.  Work is split in
// contiguous blocks, so results written per index are thread-count independent.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace torus_lqg
