#include "torus_lqg/fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "torus_lqg/error.hpp"

namespace torus_lqg {

namespace {
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
}  // namespace

C2RTransform::C2RTransform(int G) : G_(G)
{
    if (G < 2) throw Error(ErrorKind::InvalidArgument, "transform size must be >= 2");
    std::lock_guard<std::mutex> lock(planner_mutex());
    in_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_t(G) * half()));
    out_ = static_cast<double*>(fftw_malloc(sizeof(double) * size_t(G) * G));
    if (!in_ || !out_) throw Error(ErrorKind::InvalidArgument, "fftw_malloc failed");
    plan_ = fftw_plan_dft_c2r_2d(G, G, reinterpret_cast<fftw_complex*>(in_), out_, FFTW_ESTIMATE);
    clear_input();
}

C2RTransform::~C2RTransform()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(out_);
}

void C2RTransform::clear_input() { std::memset(static_cast<void*>(in_), 0, sizeof(fftw_complex) * size_t(G_) * half()); }

void C2RTransform::put(long n, long m, std::complex<double> c)
{
    auto wrap = [this](long v) {
        long r = v % G_;
        return r < 0 ? r + G_ : r;
    };
    if (m < 0) {
        n = -n;
        m = -m;
        c = std::conj(c);
    }
    if (m >= half()) throw Error(ErrorKind::IndexOutOfCutoff, "frequency outside the transform grid");
    in_[wrap(n) * half() + m] += c;
    if (m == 0) in_[wrap(-n) * half()] += std::conj(c);
}

void C2RTransform::execute() { fftw_execute(static_cast<fftw_plan>(plan_)); }

}  // namespace torus_lqg
