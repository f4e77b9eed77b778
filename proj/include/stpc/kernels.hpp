#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stpc/arith.hpp"
#include "stpc/quadrature.hpp"

namespace stpc {

// An even test function known through its Fourier transform, supported in
// [-1,1] and normalized so sup{|t| : fhat(t) != 0} = 1. `space_eval` is the
// closed-form space-side function when one is known; it only feeds the
// lattice-sum cross-check.
struct SpectralTestFunction {
    std::string name;
    std::function<double(double)> fourier_eval;
    double value_at_zero = 0.0;
    double square_integral = 0.0;  // int_{-1}^{1} fhat(t)^2 dt
    std::function<double(double)> space_eval;  // empty if no closed form

    bool has_space() const { return static_cast<bool>(space_eval); }
};

namespace detail {

inline double sinc(double y) {
    if (std::abs(y) < 1e-8) {
        const double z = M_PI * y;
        return 1.0 - z * z / 6.0;
    }
    return std::sin(M_PI * y) / (M_PI * y);
}

inline SpectralTestFunction make_test_function(std::string name,
                                               std::function<double(double)> fhat,
                                               std::function<double(double)> space) {
    SpectralTestFunction f;
    f.name = std::move(name);
    f.fourier_eval = std::move(fhat);
    f.value_at_zero = f.fourier_eval(0.0);
    f.square_integral = integrate(
        [&](double t) { const double v = f.fourier_eval(t); return v * v; }, -1.0, 1.0);
    f.space_eval = std::move(space);
    return f;
}

} // namespace detail

// Fejer pair: rhohat(t) = (1-|t|)_+ with space form (sin(pi x)/(pi x))^2.
inline const SpectralTestFunction& fejer_function() {
    static const SpectralTestFunction f = detail::make_test_function(
        "fejer",
        [](double t) { return std::max(0.0, 1.0 - std::abs(t)); },
        [](double x) { const double s = detail::sinc(x); return s * s; });
    return f;
}

// Raised cosine: ghat(t) = cos^2(pi t/2) on [-1,1],
// space form sinc(2x) + (sinc(2x+1) + sinc(2x-1))/2.
inline const SpectralTestFunction& raised_cosine_function() {
    static const SpectralTestFunction f = detail::make_test_function(
        "cosine2",
        [](double t) {
            if (std::abs(t) > 1.0) return 0.0;
            const double c = std::cos(M_PI * t / 2.0);
            return c * c;
        },
        [](double x) {
            return detail::sinc(2.0 * x) +
                   0.5 * (detail::sinc(2.0 * x + 1.0) + detail::sinc(2.0 * x - 1.0));
        });
    return f;
}

inline const SpectralTestFunction& test_function_by_name(const std::string& name) {
    if (name == "fejer") return fejer_function();
    if (name == "cosine2" || name == "raised_cosine") return raised_cosine_function();
    throw std::invalid_argument("unknown test function '" + name +
                                "' (expected fejer or cosine2)");
}

// Finite cosine polynomial representing sum_n f(scale (theta+n)):
// eval = c_0 + sum_{l>=1} c_l 2cos(2 pi l theta), c_l = fhat(l/scale)/scale.
struct PeriodizedKernel {
    long long scale = 1;
    std::vector<double> coeffs;  // c_0 .. c_scale
};

inline PeriodizedKernel make_kernel(const SpectralTestFunction& f, long long scale) {
    if (scale < 1) throw std::invalid_argument("make_kernel: scale must be >= 1");
    PeriodizedKernel k;
    k.scale = scale;
    k.coeffs.resize(static_cast<size_t>(scale) + 1);
    for (long long l = 0; l <= scale; ++l)
        k.coeffs[static_cast<size_t>(l)] =
            f.fourier_eval(static_cast<double>(l) / static_cast<double>(scale)) /
            static_cast<double>(scale);
    return k;
}

// Exactly 1-periodic by construction. Cosines advance by the angle-addition
// recurrence; one sin/cos call per evaluation.
inline double eval_kernel(const PeriodizedKernel& k, double theta) {
    if (k.coeffs.empty()) return 0.0;
    double total = k.coeffs[0];
    const double step_c = std::cos(2.0 * M_PI * theta);
    const double step_s = std::sin(2.0 * M_PI * theta);
    double c = 1.0, s = 0.0;
    for (size_t l = 1; l < k.coeffs.size(); ++l) {
        const double c2 = c * step_c - s * step_s;
        const double s2 = s * step_c + c * step_s;
        c = c2;
        s = s2;
        total += 2.0 * k.coeffs[l] * c;
    }
    return total;
}

// Truncated space-side sum sum_{|n|<=terms} f(scale (theta+n)); cross-check
// oracle for eval_kernel, tail O(1/terms) for the built-ins.
inline double lattice_sum_oracle(const SpectralTestFunction& f, long long scale,
                                 double theta, long long terms) {
    if (!f.has_space())
        throw std::invalid_argument("lattice_sum_oracle: '" + f.name +
                                    "' has no space-side closed form");
    double total = 0.0;
    for (long long n = -terms; n <= terms; ++n)
        total += f.space_eval(static_cast<double>(scale) * (theta + static_cast<double>(n)));
    return total;
}

// U(l) = rhohat(l/L) 2cos(2 pi l psi) - rhohat((l+1)/L) 2cos(2 pi (l+1) psi),
// 0 <= l <= L, and G(n) = ghat(n/M), 0 <= n <= M. M is always pi_N(x) of the
// active window (or the synthetic stand-in in kernel-only runs).
struct CoefficientTable {
    double psi = 0.0;
    double A = 0.0;  // 2 sin^2(pi psi)
    long long L = 0;
    long long M = 0;
    std::vector<double> U;
    std::vector<double> G;
};

inline void validate_psi(double psi) {
    if (!(psi > 0.0 && psi < 1.0) || psi == 0.5)
        throw std::invalid_argument("psi must lie in (0,1) and differ from 1/2");
}

inline std::vector<double> u_table(const SpectralTestFunction& rho, long long L, double psi) {
    if (L < 1) throw std::invalid_argument("u_table: L must be >= 1");
    validate_psi(psi);
    std::vector<double> U(static_cast<size_t>(L) + 1);
    auto v = [&](long long l) {
        return rho.fourier_eval(static_cast<double>(l) / static_cast<double>(L)) * 2.0 *
               std::cos(2.0 * M_PI * static_cast<double>(l) * psi);
    };
    for (long long l = 0; l <= L; ++l) U[static_cast<size_t>(l)] = v(l) - v(l + 1);
    return U;
}

inline CoefficientTable make_coefficient_table(const SpectralTestFunction& rho,
                                               const SpectralTestFunction& g, long long L,
                                               long long M, double psi) {
    if (M < 1) throw std::invalid_argument("make_coefficient_table: M must be >= 1");
    CoefficientTable t;
    t.psi = psi;
    const double sp = std::sin(M_PI * psi);
    t.A = 2.0 * sp * sp;
    t.L = L;
    t.M = M;
    t.U = u_table(rho, L, psi);
    t.G.resize(static_cast<size_t>(M) + 1);
    for (long long n = 0; n <= M; ++n)
        t.G[static_cast<size_t>(n)] =
            g.fourier_eval(static_cast<double>(n) / static_cast<double>(M));
    return t;
}

// T(g,rho) = sum_{l>=1} (U(l)-U(l-1))^2 ghat(l/M), summed for
// 1 <= l <= min(L+1, M) with the convention U(L+1) = 0.
inline double t_g_rho(const CoefficientTable& t) {
    const long long lmax = std::min(t.L + 1, t.M);
    double total = 0.0;
    auto U = [&](long long l) {
        return l <= t.L ? t.U[static_cast<size_t>(l)] : 0.0;
    };
    for (long long l = 1; l <= lmax; ++l) {
        const double d = U(l) - U(l - 1);
        total += d * d * t.G[static_cast<size_t>(l)];
    }
    return total;
}

// A^2 ghat(0) (rho*rho)(0), with (rho*rho)(0) = int_{-1}^{1} rhohat^2 by
// Parseval (quadrature).
inline double poisson_limit(double psi, const SpectralTestFunction& g,
                            const SpectralTestFunction& rho) {
    validate_psi(psi);
    const double sp = std::sin(M_PI * psi);
    const double A = 2.0 * sp * sp;
    const double conv0 = integrate(
        [&](double t) { const double v = rho.fourier_eval(t); return v * v; }, -1.0, 1.0);
    return A * A * g.value_at_zero * conv0;
}

// (U(0)/2L, int_0^1 rho_L(t-psi) mu(t) dt); the two sides agree exactly in
// exact arithmetic.
inline std::pair<double, double> mean_mass_identity(const CoefficientTable& t,
                                                    const PeriodizedKernel& rho_kernel) {
    const double lhs = t.U[0] / (2.0 * static_cast<double>(t.L));
    const double rhs = integrate(
        [&](double x) { return eval_kernel(rho_kernel, x - t.psi) * st_density(x); }, 0.0,
        1.0, 1e-12);
    return {lhs, rhs};
}

} // namespace stpc
