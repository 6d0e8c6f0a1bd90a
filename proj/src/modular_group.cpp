#include "torus_lqg/modular_group.hpp"

#include <cmath>
#include <sstream>

namespace torus_lqg {

ModularElement::ModularElement(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_)
{
    if (a * d - b * c != 1) throw Error(ErrorKind::InvalidArgument, "modular element needs ad - bc = 1");
    if (c < 0 || (c == 0 && d < 0)) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
}

std::string ModularElement::str() const
{
    std::ostringstream os;
    os << "(" << a << "," << b << ";" << c << "," << d << ")";
    return os.str();
}

ModularElement compose(const ModularElement& p, const ModularElement& f)
{
    return {p.a * f.a + p.b * f.c, p.a * f.b + p.b * f.d, p.c * f.a + p.d * f.c, p.c * f.b + p.d * f.d};
}

ComplexUH act_on_uhp(const ModularElement& psi, ComplexUH tau)
{
    cplx t = tau.value();
    cplx den = double(psi.c) * t + double(psi.d);
    cplx r = (double(psi.a) * t + double(psi.b)) / den;
    // imaginary part from the exact formula, avoids cancellation
    return {r.real(), tau.im / std::norm(den)};
}

cplx derivative(const ModularElement& psi, ComplexUH tau)
{
    cplx den = double(psi.c) * tau.value() + double(psi.d);
    return 1.0 / (den * den);
}

TorusPoint act_on_torus(const ModularElement& psi, TorusPoint x)
{
    return {psi.d * x.x1 + psi.b * x.x2, psi.c * x.x1 + psi.a * x.x2};
}

static int mod_int(long v, int G)
{
    long r = v % G;
    return int(r < 0 ? r + G : r);
}

std::array<int, 2> act_on_grid(const ModularElement& psi, int j, int k, int G)
{
    return {mod_int(psi.d * j + psi.b * k, G), mod_int(psi.c * j + psi.a * k, G)};
}

TorusPoint act_on_torus_inverse(const ModularElement& psi, TorusPoint x)
{
    return {psi.a * x.x1 - psi.b * x.x2, -psi.c * x.x1 + psi.d * x.x2};
}

std::array<int, 2> act_on_grid_inverse(const ModularElement& psi, int j, int k, int G)
{
    return {mod_int(psi.a * j - psi.b * k, G), mod_int(-psi.c * j + psi.d * k, G)};
}

ModularElement transpose(const ModularElement& psi) { return {psi.a, psi.c, psi.b, psi.d}; }

std::array<long, 2> dual_index(const ModularElement& psi, long n, long m)
{
    return {psi.a * n - psi.c * m, -psi.b * n + psi.d * m};
}

bool in_fundamental_domain(ComplexUH tau, double slack)
{
    return std::abs(tau.re) <= 0.5 + slack && tau.re * tau.re + tau.im * tau.im >= 1.0 - slack;
}

FundamentalDomainPoint reduce_to_fundamental(ComplexUH tau)
{
    const double eps = 1e-13;
    ModularElement w;
    ComplexUH t = tau;
    for (int it = 0; it < 100000; ++it) {
        long n = std::lround(t.re);
        if (n != 0) {
            t = ComplexUH(t.re - double(n), t.im);
            w = compose(ModularElement::translation(-n), w);
        }
        double r2 = t.re * t.re + t.im * t.im;
        if (r2 < 1.0 - eps) {
            t = act_on_uhp(ModularElement::inversion(), t);
            w = compose(ModularElement::inversion(), w);
            continue;
        }
        break;
    }
    // boundary identifications
    if (t.re < -0.5 + eps) {
        t = ComplexUH(t.re + 1.0, t.im);
        w = compose(ModularElement::translation(1), w);
    }
    double r2 = t.re * t.re + t.im * t.im;
    if (std::abs(r2 - 1.0) <= eps && t.re < -eps) {
        t = act_on_uhp(ModularElement::inversion(), t);
        w = compose(ModularElement::inversion(), w);
    }
    return {t, w};
}

}  // namespace torus_lqg
