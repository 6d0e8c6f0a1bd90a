#pragma once

#include <array>
#include <string>

#include "torus_lqg/types.hpp"

namespace torus_lqg {

// PSL2(Z) element; sign fixed so that c > 0, or c == 0 and d > 0
struct ModularElement {
    long a = 1, b = 0, c = 0, d = 1;

    ModularElement() = default;
    ModularElement(long a_, long b_, long c_, long d_);

    static ModularElement identity() { return {}; }
    static ModularElement translation(long n = 1) { return {1, n, 0, 1}; }  // tau -> tau + n
    static ModularElement inversion() { return {0, -1, 1, 0}; }             // tau -> -1/tau

    ModularElement inverse() const { return {d, -b, -c, a}; }
    bool operator==(const ModularElement& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    std::string str() const;
};

// (psi o phi)(tau) = psi(phi(tau))
ModularElement compose(const ModularElement& psi, const ModularElement& phi);

ComplexUH act_on_uhp(const ModularElement& psi, ComplexUH tau);
// psi'(tau) = 1/(c tau + d)^2
cplx derivative(const ModularElement& psi, ComplexUH tau);

// (d x1 + b x2, c x1 + a x2) mod 1
TorusPoint act_on_torus(const ModularElement& psi, TorusPoint x);
// the same map on integer grid nodes of a G x G grid (exact)
std::array<int, 2> act_on_grid(const ModularElement& psi, int j, int k, int G);

// exact inverses of the two maps above, using the matrix inverse without the
// projective sign normalisation
TorusPoint act_on_torus_inverse(const ModularElement& psi, TorusPoint x);
std::array<int, 2> act_on_grid_inverse(const ModularElement& psi, int j, int k, int G);

ModularElement transpose(const ModularElement& psi);

// psi~^{t,-1}(n, m): the relabelling of Fourier indices under psi
std::array<long, 2> dual_index(const ModularElement& psi, long n, long m);

struct FundamentalDomainPoint {
    ComplexUH tau;
    ModularElement witness;  // maps the input point to tau
};

FundamentalDomainPoint reduce_to_fundamental(ComplexUH tau);
bool in_fundamental_domain(ComplexUH tau, double slack = 1e-12);

}  // namespace torus_lqg
