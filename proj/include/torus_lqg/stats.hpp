#pragma once

#include <functional>
#include <vector>

namespace torus_lqg {

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};
MeanSE mean_se(const std::vector<double>& x);
double median(std::vector<double> x);

// P(K > lambda) for the Kolmogorov limit law
double kolmogorov_sf(double lambda);

struct KSResult {
    double D = 0.0;
    double p_value = 1.0;
    double n_eff = 0.0;
};
KSResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// importance-weighted samples; the effective sizes are Kish's (sum w)^2 / sum w^2
KSResult ks_two_sample_weighted(const std::vector<double>& a, const std::vector<double>& wa,
                                const std::vector<double>& b, const std::vector<double>& wb);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};
// observed counts against cell probabilities; cells with expected count < min_expected
// are pooled in order until they reach it
ChiSquareResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs,
                               double min_expected = 5.0);

double gamma_cdf(double x, double shape, double rate);
double chi_square_sf(double x, int dof);

struct Correlation {
    double r = 0.0;
    double se = 0.0;  // (1 - r^2)/sqrt(n - 1)
};
Correlation pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace torus_lqg
