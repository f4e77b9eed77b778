#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stpc {

// Rounding slack tolerated on |a_p| <= 2; eigenvalue data converted from
// exact rationals can land a few ulp outside the Deligne interval.
inline constexpr double kDeligneSlack = 1e-9;

// Sato-Tate density mu(t) = 2 sin^2(pi t) on [0,1].
inline double st_density(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("st_density: t outside [0,1]");
    const double s = std::sin(M_PI * t);
    return 2.0 * s * s;
}

// CDF of the Sato-Tate measure: H(theta) = theta - sin(2 pi theta)/(2 pi).
inline double straighten(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error("straighten: theta outside [0,1]");
    return theta - std::sin(2.0 * M_PI * theta) / (2.0 * M_PI);
}

// theta with a_p = 2 cos(pi theta). Inputs within `slack` of [-2,2] are
// clamped; anything farther out violates the Deligne bound and is rejected.
inline double angle_from_eigenvalue(double a_p, double slack = kDeligneSlack) {
    if (std::abs(a_p) > 2.0 + slack)
        throw std::domain_error("angle_from_eigenvalue: |a_p| > 2 beyond rounding slack");
    const double c = std::clamp(a_p / 2.0, -1.0, 1.0);
    return std::acos(c) / M_PI;
}

// Normalized a_f(p^m) as a function of theta_f(p), by the three-term
// recurrence u_{m+1} = 2cos(pi theta) u_m - u_{m-1}, u_0 = 1. The recurrence
// is stable near theta in {0,1} where the sin-ratio closed form cancels.
inline double chebyshev_eigenvalue(double theta, int m) {
    if (m < 0) throw std::invalid_argument("chebyshev_eigenvalue: m < 0");
    const double c = 2.0 * std::cos(M_PI * theta);
    if (m == 0) return 1.0;
    double prev = 1.0, cur = c;
    for (int i = 1; i < m; ++i) {
        double next = c * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// lhs = 2cos(2 pi l theta) by direct trig, rhs = a(p^{2l}) - a(p^{2l-2}) via
// the recurrence; both are 2 at l = 0. Callers assert |lhs-rhs| small.
inline std::pair<double, double> check_cosine_identity(double theta, int l) {
    if (l == 0) return {2.0, 2.0};
    const double lhs = 2.0 * std::cos(2.0 * M_PI * l * theta);
    const double rhs =
        chebyshev_eigenvalue(theta, 2 * l) - chebyshev_eigenvalue(theta, 2 * l - 2);
    return {lhs, rhs};
}

namespace detail {

// a(p^{2n}) - a(p^{2n-2}) for n >= 1, and 2 for n = 0.
inline double cheb_diff(double theta, int n) {
    if (n == 0) return 2.0;
    return chebyshev_eigenvalue(theta, 2 * n) - chebyshev_eigenvalue(theta, 2 * n - 2);
}

} // namespace detail

// Max residual over the same-prime product identities, evaluated at a given
// angle:
//   (a) a(p^i) a(p^j) = sum_{t=0}^{min(i,j)} a(p^{i+j-2t})
//   (b) (a(p^{2n1})-a(p^{2n1-2}))(a(p^{2n2})-a(p^{2n2-2}))
//         = a(p^{2n1+2n2}) - a(p^{2n1+2n2-2})
//           + a(p^{|2n1-2n2|}) - a(p^{|2n1-2n2|-2})   (n1 != n2)
//         = a(p^{4n1}) - a(p^{4n1-2}) + 2             (n1 == n2)
//   (c) a(p^{2l})(a(p^{2n})-a(p^{2n-2}))
//         = a(p^{2l+2n}) + a(p^{2l-2n})               (l >= n)
//         = a(p^{2l+2n}) - a(p^{2n-2l-2})             (l <  n)
// The formula in (b) is only invoked for n1 != n2 with |2n1-2n2| >= 2, so the
// exponent |2n1-2n2|-2 never goes negative.
inline double hecke_product_residual(double theta, int i, int j, int l, int n) {
    if (i < 0 || j < 0 || l < 0 || n < 1)
        throw std::invalid_argument("hecke_product_residual: bad indices");
    auto a = [&](int m) { return chebyshev_eigenvalue(theta, m); };
    double worst = 0.0;

    double lhs = a(i) * a(j);
    double rhs = 0.0;
    for (int t = 0; t <= std::min(i, j); ++t) rhs += a(i + j - 2 * t);
    worst = std::max(worst, std::abs(lhs - rhs));

    {   // equal branch at n1 = n2 = n
        lhs = detail::cheb_diff(theta, n) * detail::cheb_diff(theta, n);
        rhs = a(4 * n) - a(4 * n - 2) + 2.0;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    {   // unequal branch at (n1, n2) = (n, n + l + 1)
        const int n2 = n + l + 1;
        lhs = detail::cheb_diff(theta, n) * detail::cheb_diff(theta, n2);
        const int dd = std::abs(2 * n - 2 * n2);
        rhs = a(2 * n + 2 * n2) - a(2 * n + 2 * n2 - 2) + a(dd) - a(dd - 2);
        worst = std::max(worst, std::abs(lhs - rhs));
    }

    lhs = a(2 * l) * detail::cheb_diff(theta, n);
    rhs = (l >= n) ? a(2 * l + 2 * n) + a(2 * l - 2 * n)
                   : a(2 * l + 2 * n) - a(2 * n - 2 * l - 2);
    worst = std::max(worst, std::abs(lhs - rhs));
    return worst;
}

inline bool check_hecke_products(double theta1, double theta2, int i, int j, int l, int n,
                                 double tol = 1e-9) {
    const double r1 = hecke_product_residual(theta1, i, j, l, n);
    const double r2 = hecke_product_residual(theta2, i, j, l, n);
    return std::max(r1, r2) < tol;
}

// Primes p <= x with (p, level) = 1.
struct PrimeWindow {
    long long x = 0;
    long long level = 1;
    std::vector<long long> primes;

    long long count() const { return static_cast<long long>(primes.size()); }
    bool empty() const { return primes.empty(); }
};

// Sieve of Eratosthenes; x < 2 yields an empty window.
inline PrimeWindow prime_window(long long x, long long level = 1) {
    if (level < 1) throw std::invalid_argument("prime_window: level < 1");
    PrimeWindow w;
    w.x = x;
    w.level = level;
    if (x < 2) return w;
    std::vector<char> is_comp(static_cast<size_t>(x) + 1, 0);
    for (long long i = 2; i * i <= x; ++i)
        if (!is_comp[i])
            for (long long j = i * i; j <= x; j += i) is_comp[j] = 1;
    for (long long p = 2; p <= x; ++p)
        if (!is_comp[p] && level % p != 0) w.primes.push_back(p);
    return w;
}

} // namespace stpc
