#pragma once

// Independent reference implementations used only by the tests. Each oracle
// deliberately takes a different computational route from the library code it
// checks: plain DFT summation vs the radix-2 transform, polynomial expansion
// vs companion-matrix root finding, numerical quadrature vs the closed-form
// two-tone power expression.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ihpower/signal.hpp"

namespace oracle {

using cdouble = std::complex<double>;

// O(N^2) normalized DFT, one std::polar call per term.
inline std::vector<cdouble> direct_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<cdouble> bins(n);
    for (std::size_t k = 0; k < n; ++k) {
        cdouble acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * ihpower::pi * static_cast<double>(k) *
                               static_cast<double>(i) / static_cast<double>(n);
            acc += x[i] * std::polar(1.0, ang);
        }
        bins[k] = acc / static_cast<double>(n);
    }
    return bins;
}

// Coefficients of prod_y (x - r_y), ascending powers; leading coefficient 1.
template <typename Scalar>
std::vector<Scalar> poly_from_roots(const std::vector<Scalar>& roots) {
    std::vector<Scalar> c{Scalar{1}};
    for (const auto& r : roots) {
        std::vector<Scalar> next(c.size() + 1, Scalar{0});
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

// Coefficients of prod_y (r_y + u) in ascending powers of u, i.e. the
// elementary symmetric functions: coefficient of u^m is e_{q-m}(r).
template <typename Scalar>
std::vector<Scalar> elementary_symmetric_poly(const std::vector<Scalar>& roots) {
    std::vector<Scalar> c{Scalar{1}};
    for (const auto& r : roots) {
        std::vector<Scalar> next(c.size() + 1, Scalar{0});
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] += r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

// Numerator coefficients d_m of sum_x alpha_x prod_{y != x} (beta_y - k)
// expanded in powers of (-k): forward construction for the residue-recovery
// round trip. Returns q values d_0 .. d_{q-1}.
inline std::vector<cdouble> numerator_coeffs(const std::vector<cdouble>& alphas,
                                             const std::vector<cdouble>& betas) {
    const std::size_t q = betas.size();
    if (alphas.size() != q) throw std::invalid_argument("numerator_coeffs: size mismatch");
    std::vector<cdouble> d(q, cdouble{0.0, 0.0});
    for (std::size_t x = 0; x < q; ++x) {
        std::vector<cdouble> others;
        for (std::size_t y = 0; y < q; ++y)
            if (y != x) others.push_back(betas[y]);
        // prod (beta_y + u) with u = -k: coefficient of u^m multiplies (-k)^m.
        const auto c = elementary_symmetric_poly(others);
        for (std::size_t m = 0; m < q; ++m) d[m] += alphas[x] * c[m];
    }
    return d;
}

// Mean power of the product of two sinusoids over tau in [0, K] with
// tau = f1 * t: (1/K) integral U sin(2 pi a tau + theta) I sin(2 pi b tau + phi).
// Composite 10-point Gauss-Legendre with panel doubling until two successive
// refinements agree to ~1e-13.
inline double quadrature_pair_power(double u_amp, double i_amp, double a, double b,
                                    double theta, double phi, double k_cycles) {
    static const double nodes[5] = {0.1488743389816312108848260,
                                    0.4333953941292471907992659,
                                    0.6794095682990244062343274,
                                    0.8650633666889845107320967,
                                    0.9739065285171717200779640};
    static const double weights[5] = {0.2955242247147528701738930,
                                      0.2692667193099963550912269,
                                      0.2190863625159820439955349,
                                      0.1494513491505805931457763,
                                      0.0666713443086881375935688};

    auto integrand = [&](double tau) {
        return u_amp * std::sin(2.0 * ihpower::pi * a * tau + theta) *
               i_amp * std::sin(2.0 * ihpower::pi * b * tau + phi);
    };
    auto integrate = [&](std::size_t panels) {
        const double h = k_cycles / static_cast<double>(panels);
        double total = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double mid = (static_cast<double>(p) + 0.5) * h;
            const double half = 0.5 * h;
            double acc = 0.0;
            for (int j = 0; j < 5; ++j)
                acc += weights[j] * (integrand(mid - half * nodes[j]) +
                                     integrand(mid + half * nodes[j]));
            total += acc * half;
        }
        return total;
    };

    std::size_t panels =
        static_cast<std::size_t>(std::max(8.0, std::ceil(2.0 * k_cycles * (std::abs(a) + std::abs(b)))));
    double prev = integrate(panels);
    for (int iter = 0; iter < 14; ++iter) {
        panels *= 2;
        const double cur = integrate(panels);
        if (std::abs(cur - prev) < 1e-13 * std::max(1.0, std::abs(cur)))
            return cur / k_cycles;
        prev = cur;
    }
    return prev / k_cycles;
}

}  // namespace oracle
