#pragma once

#include "torus_lqg/types.hpp"

namespace torus_lqg {

struct QSeriesConfig {
    double tolerance = 1e-15;  // absolute truncation error
    int max_terms = 100000;
};

inline constexpr double kMinImTau = 1e-3;

enum class Theta1Path { Series, Product };

cplx dedekind_eta(ComplexUH tau, const QSeriesConfig& cfg = {});
// q^{1/12} prod (1 - q^{2n}), kept as an independent evaluation path
cplx dedekind_eta_product(ComplexUH tau, const QSeriesConfig& cfg = {});

cplx theta1(cplx z, ComplexUH tau, const QSeriesConfig& cfg = {}, Theta1Path path = Theta1Path::Series);
cplx theta1_z_derivative_at_zero(ComplexUH tau, const QSeriesConfig& cfg = {});
// theta_k(0, tau) for k in {2,3,4}
cplx theta_aux(int k, ComplexUH tau, const QSeriesConfig& cfg = {});

// -ln 2pi - 2 ln|eta(tau)|
double theta_const(ComplexUH tau);

}  // namespace torus_lqg
