#pragma once

#include <vector>

#include "torus_lqg/modular_group.hpp"
#include "torus_lqg/types.hpp"

namespace torus_lqg {

enum class GreenMode { ClosedForm, EigenSeries, AppendixSeries };

struct GreenEvalConfig {
    GreenMode mode = GreenMode::ClosedForm;
    int eigen_cutoff = 400;   // |n|,|m| <= N in eigen mode
    double tolerance = 1e-12;  // eigen mode: bound on the reported error estimate
};

// c_{n,m}(tau) = Im tau / (2 pi |n tau - m|^2)
double green_coefficient(ComplexUH tau, long n, long m);

double green(ComplexUH tau, TorusPoint x, const GreenEvalConfig& cfg = {});

// reported (not guaranteed) truncation error of the eigen series
double green_eigen_error_estimate(ComplexUH tau, TorusPoint x, int N);

// smallest |k + l tau| over nonzero lattice vectors
double shortest_period(ComplexUH tau);
// complex coordinate of the lattice image of x closest to 0
cplx nearest_image(ComplexUH tau, TorusPoint x);
// inverse of p_tau: torus coordinates of a small complex displacement
TorusPoint from_complex(ComplexUH tau, cplx z);

// G(x) + ln|nearest_image(x)|, smooth near 0; equals Theta(tau) at x = 0
double green_regular_part(ComplexUH tau, TorusPoint x);

// int G d lambda_tau on a grid x grid midpoint rule with the log singularity subtracted
double green_mean_zero_check(ComplexUH tau, int grid = 256, const GreenEvalConfig& cfg = {});

// (1/4pi^2) int int G(x + c(eps e^{it}) - w - c(eps e^{it'})) dt dt'
double green_regularized_pair(ComplexUH tau, TorusPoint x, TorusPoint w, double eps, int quad_points = 64);
inline double green_regularized(ComplexUH tau, TorusPoint x, double eps, int quad_points = 64)
{
    return green_regularized_pair(tau, x, TorusPoint{0.0, 0.0}, eps, quad_points);
}

double modular_invariance_residual(ComplexUH tau, const ModularElement& psi,
                                   const std::vector<TorusPoint>& points);

}  // namespace torus_lqg
