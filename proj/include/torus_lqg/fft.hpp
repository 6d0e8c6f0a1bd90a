#pragma once

#include <complex>

namespace torus_lqg {

// Complex-to-real 2D inverse transform on a G x G grid:
//   out[j*G + k] = sum_{n,m} in[n][m] exp(+2 pi i (n j + m k)/G)
// with the Hermitian half spectrum stored as in[n * (G/2+1) + m], m <= G/2.
// Owns aligned buffers and a plan; plan creation is serialised internally.
class C2RTransform {
public:
    explicit C2RTransform(int G);
    ~C2RTransform();
    C2RTransform(const C2RTransform&) = delete;
    C2RTransform& operator=(const C2RTransform&) = delete;

    int size() const { return G_; }
    int half() const { return G_ / 2 + 1; }
    std::complex<double>* in() { return in_; }
    const double* out() const { return out_; }
    void clear_input();
    // adds c at frequency (n, m) for m >= 0, mirrored for m < 0
    void put(long n, long m, std::complex<double> c);
    void execute();  // input is destroyed

private:
    int G_;
    std::complex<double>* in_ = nullptr;
    double* out_ = nullptr;
    void* plan_ = nullptr;
};

}  // namespace torus_lqg
