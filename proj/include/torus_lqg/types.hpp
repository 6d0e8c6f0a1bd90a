#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "torus_lqg/error.hpp"

namespace torus_lqg {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// point of the upper half-plane
struct ComplexUH {
    double re = 0.0;
    double im = 1.0;

    ComplexUH() = default;
    ComplexUH(double r, double i) : re(r), im(i)
    {
        if (!(i > 0.0) || !std::isfinite(r) || !std::isfinite(i))
            throw Error(ErrorKind::InvalidArgument, "tau must lie in the upper half-plane");
    }
    explicit ComplexUH(cplx z) : ComplexUH(z.real(), z.imag()) {}
    cplx value() const { return {re, im}; }
};

inline double wrap01(double v)
{
    double r = v - std::floor(v);
    if (r >= 1.0) r = 0.0;  // floor rounding at -tiny
    return r;
}

// point of R^2/Z^2, coordinates kept in [0,1)
struct TorusPoint {
    double x1 = 0.0;
    double x2 = 0.0;

    TorusPoint() = default;
    TorusPoint(double a, double b) : x1(wrap01(a)), x2(wrap01(b)) {}
};

inline TorusPoint operator-(TorusPoint a, TorusPoint b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline TorusPoint operator+(TorusPoint a, TorusPoint b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline TorusPoint operator-(TorusPoint a) { return {-a.x1, -a.x2}; }

// p_tau(x) = x1 + tau x2
inline cplx to_complex(ComplexUH tau, double x1, double x2) { return {x1 + tau.re * x2, tau.im * x2}; }

// G x G values on the nodes (j/G, k/G), j along x1
struct RealGrid {
    int size = 0;
    std::vector<double> values;

    RealGrid() = default;
    explicit RealGrid(int g) : size(g), values(static_cast<size_t>(g) * g, 0.0) {}
    double& operator()(int j, int k) { return values[static_cast<size_t>(j) * size + k]; }
    double operator()(int j, int k) const { return values[static_cast<size_t>(j) * size + k]; }
};

}  // namespace torus_lqg
