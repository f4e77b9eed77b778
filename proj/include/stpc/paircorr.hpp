#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stpc/arith.hpp"
#include "stpc/kernels.hpp"
#include "stpc/rng.hpp"

namespace stpc {

// The +-theta mod 1 family of one form, represented by the theta list
// aligned with the window primes.
struct AngleSet {
    std::string label;
    PrimeWindow window;
    std::vector<double> angles;
};

inline AngleSet make_angle_set(std::string label, PrimeWindow window,
                               std::vector<double> angles) {
    if (static_cast<long long>(angles.size()) != window.count())
        throw std::invalid_argument("make_angle_set: angles/primes length mismatch");
    for (double t : angles)
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("make_angle_set: angle outside [0,1]");
    AngleSet a;
    a.label = std::move(label);
    a.window = std::move(window);
    a.angles = std::move(angles);
    return a;
}

struct PairCorrConfig {
    double psi = 0.25;
    long long L = 10;
    SpectralTestFunction rho = fejer_function();
    SpectralTestFunction g = fejer_function();
    double s = 1.0;                  // counting-statistic window parameter
    long long series_n_cap = -1;     // <0: full sum to M; >=0 caps T3's n-sum
    int threads = 1;
    bool straightened_counting = false;
};

namespace detail {

// Kahan-compensated accumulator; keeps the long K/L/M sums accurate to a few
// ulp regardless of term count, so thread counts only move results at the
// 1e-12 documented reproducibility level.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

template <class Fn>
void parallel_chunks(long long n, int threads, Fn&& fn) {
    if (n <= 0) return;
    const int chunks = std::max(1, threads);
    if (chunks == 1 || n < 2 * chunks) {
        fn(0, 0ll, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(chunks));
    const long long step = (n + chunks - 1) / chunks;
    for (int c = 0; c < chunks; ++c) {
        const long long lo = c * step;
        const long long hi = std::min(n, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// A_p = rho_L(theta_p - psi) + rho_L(-theta_p - psi)
inline std::vector<double> pm_kernel_weights(const AngleSet& a, const PeriodizedKernel& rk,
                                             double psi) {
    std::vector<double> w(a.angles.size());
    for (size_t i = 0; i < a.angles.size(); ++i)
        w[i] = eval_kernel(rk, a.angles[i] - psi) + eval_kernel(rk, -a.angles[i] - psi);
    return w;
}

// V_p = sum_{l=0..L} U(l) a_f(p^{2l}); the even-index Chebyshev values are
// walked with the three-term recurrence.
inline std::vector<double> series_weights(const AngleSet& a, std::span<const double> U) {
    std::vector<double> v(a.angles.size(), 0.0);
    for (size_t i = 0; i < a.angles.size(); ++i) {
        const double c = 2.0 * std::cos(M_PI * a.angles[i]);
        double prev = 1.0, cur = c;  // u_0, u_1
        double acc = U[0];
        for (size_t l = 1; l < U.size(); ++l) {
            // advance from u_{2l-2} to u_{2l}
            double u2lm1 = (l == 1) ? cur : c * cur - prev;
            if (l > 1) { prev = cur; cur = u2lm1; }
            double u2l = c * cur - prev;
            prev = cur;
            cur = u2l;
            acc += U[l] * u2l;
        }
        v[i] = acc;
    }
    return v;
}

// D[n][p] = a(p^{2n}) - a(p^{2n-2}) for n = 1..ncap (equals 2cos(2 pi n theta_p)).
inline std::vector<std::vector<double>> cheb_diff_rows(const AngleSet& a, long long ncap) {
    const size_t n = a.angles.size();
    std::vector<std::vector<double>> D(static_cast<size_t>(ncap) + 1,
                                       std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        const double c = 2.0 * std::cos(M_PI * a.angles[i]);
        double prev = 1.0, cur = c;  // u_0, u_1
        for (long long m = 1; m <= ncap; ++m) {
            // u_{2m-1} = cur after this step, u_{2m} = next
            double u2m = c * cur - prev;
            D[static_cast<size_t>(m)][i] = u2m - prev;  // u_{2m} - u_{2m-2}
            double u2mp1 = c * u2m - cur;
            prev = u2m;
            cur = u2mp1;
        }
    }
    return D;
}

struct SeriesContext {
    CoefficientTable table;
    std::vector<double> V;                   // T1 = T2 values per prime
    std::vector<std::vector<double>> D;      // cheb diffs, rows n = 0..ncap
    long long ncap = 0;

    double t3(size_t p, size_t q) const {
        double acc = 4.0 * table.G[0];
        for (long long n = 1; n <= ncap; ++n)
            acc += 2.0 * table.G[static_cast<size_t>(n)] * D[static_cast<size_t>(n)][p] *
                   D[static_cast<size_t>(n)][q];
        return acc;
    }
    // the n >= 1 part only
    double t3_plus(size_t p, size_t q) const { return t3(p, q) - 4.0 * table.G[0]; }
};

inline SeriesContext make_series_context(const AngleSet& a, const PairCorrConfig& c) {
    SeriesContext ctx;
    const long long M = a.window.count();
    ctx.table = make_coefficient_table(c.rho, c.g, c.L, std::max(1ll, M), c.psi);
    ctx.ncap = (c.series_n_cap >= 0) ? std::min(c.series_n_cap, M) : M;
    ctx.V = series_weights(a, ctx.table.U);
    ctx.D = cheb_diff_rows(a, ctx.ncap);
    return ctx;
}

} // namespace detail

enum class SmoothStrategy { kAuto, kNaivePairs, kGrouped };

// Smoothed pair correlation
//   R2 = L/(8 pi_N(x)) sum_{p != q} rho_L(+-theta_p - psi) rho_L(+-theta_q - psi)
//                                   G_x(+-theta_p +- theta_q)
// with rho_L(+-t - psi) = rho_L(t-psi) + rho_L(-t-psi) and the G factor summed
// over all four sign choices. The grouped strategy regroups the identical sum
// by Fourier index (O(pi*M) instead of O(pi^2*M)); chunk partials are combined
// in fixed order, so results are deterministic per thread count.
inline double r2_smooth(const AngleSet& a, const PairCorrConfig& c,
                        SmoothStrategy strategy = SmoothStrategy::kAuto) {
    const long long n = a.window.count();
    if (n == 0) return 0.0;
    const long long M = n;
    const PeriodizedKernel rk = make_kernel(c.rho, c.L);
    const std::vector<double> A = detail::pm_kernel_weights(a, rk, c.psi);

    if (strategy == SmoothStrategy::kAuto)
        strategy = (n > 512) ? SmoothStrategy::kGrouped : SmoothStrategy::kNaivePairs;

    double pair_sum = 0.0;
    if (strategy == SmoothStrategy::kNaivePairs) {
        const PeriodizedKernel gk = make_kernel(c.g, M);
        std::vector<double> partials(static_cast<size_t>(std::max(1, c.threads)), 0.0);
        detail::parallel_chunks(n, c.threads, [&](int chunk, long long lo, long long hi) {
            double acc = 0.0;
            for (long long i = lo; i < hi; ++i) {
                for (long long j = i + 1; j < n; ++j) {
                    const double tp = a.angles[static_cast<size_t>(i)];
                    const double tq = a.angles[static_cast<size_t>(j)];
                    const double g4 = eval_kernel(gk, tp + tq) + eval_kernel(gk, tp - tq) +
                                      eval_kernel(gk, -tp + tq) + eval_kernel(gk, -tp - tq);
                    acc += 2.0 * A[static_cast<size_t>(i)] * A[static_cast<size_t>(j)] * g4;
                }
            }
            partials[static_cast<size_t>(chunk)] = acc;
        });
        pair_sum = pairwise_sum(partials);
    } else {
        // sum_{p,q} A_p A_q G4 = sum_n w_n cg_n C_n^2, with the p = q diagonal
        // removed; C_n = sum_p A_p cos(2 pi n theta_p), w_0 = 4, w_n = 8.
        // The cosine ladder cos((m+1)a) = 2cos(a)cos(ma) - cos((m-1)a) runs
        // across the prime axis so the inner loop vectorizes.
        std::vector<double> cg(static_cast<size_t>(M) + 1);
        for (long long m = 0; m <= M; ++m)
            cg[static_cast<size_t>(m)] =
                c.g.fourier_eval(static_cast<double>(m) / static_cast<double>(M)) /
                static_cast<double>(M);
        const int chunks = std::max(1, c.threads);
        std::vector<std::vector<double>> C(static_cast<size_t>(chunks)),
            D2(static_cast<size_t>(chunks));
        detail::parallel_chunks(n, c.threads, [&](int chunk, long long lo, long long hi) {
            auto& Cv = C[static_cast<size_t>(chunk)];
            auto& Dv = D2[static_cast<size_t>(chunk)];
            Cv.assign(static_cast<size_t>(M) + 1, 0.0);
            Dv.assign(static_cast<size_t>(M) + 1, 0.0);
            const size_t len = static_cast<size_t>(hi - lo);
            std::vector<double> w(len), w2(len), k2(len), cprev(len), ccur(len);
            for (size_t i = 0; i < len; ++i) {
                w[i] = A[static_cast<size_t>(lo) + i];
                w2[i] = w[i] * w[i];
                k2[i] = 2.0 * std::cos(2.0 * M_PI * a.angles[static_cast<size_t>(lo) + i]);
                cprev[i] = 1.0;          // cos(0)
                ccur[i] = 0.5 * k2[i];   // cos(2 pi theta)
            }
            for (long long m = 0; m <= M; ++m) {
                double cs = 0.0, ds = 0.0;
                if (m == 0) {
                    for (size_t i = 0; i < len; ++i) cs += w[i];
                    for (size_t i = 0; i < len; ++i) ds += w2[i];
                } else if (m == 1) {
                    for (size_t i = 0; i < len; ++i) cs += w[i] * ccur[i];
                    for (size_t i = 0; i < len; ++i) ds += w2[i] * ccur[i] * ccur[i];
                } else {
                    for (size_t i = 0; i < len; ++i) {
                        const double cm = k2[i] * ccur[i] - cprev[i];
                        cprev[i] = ccur[i];
                        ccur[i] = cm;
                        cs += w[i] * cm;
                        ds += w2[i] * cm * cm;
                    }
                }
                Cv[static_cast<size_t>(m)] += cs;
                Dv[static_cast<size_t>(m)] += ds;
            }
        });
        for (int c2 = 1; c2 < chunks; ++c2) {
            if (C[static_cast<size_t>(c2)].empty()) continue;
            for (long long m = 0; m <= M; ++m) {
                C[0][static_cast<size_t>(m)] += C[static_cast<size_t>(c2)][static_cast<size_t>(m)];
                D2[0][static_cast<size_t>(m)] += D2[static_cast<size_t>(c2)][static_cast<size_t>(m)];
            }
        }
        for (long long m = 0; m <= M; ++m) {
            const double w = (m == 0) ? 4.0 : 8.0;
            const double Cm = C[0][static_cast<size_t>(m)];
            pair_sum += w * cg[static_cast<size_t>(m)] * (Cm * Cm - D2[0][static_cast<size_t>(m)]);
        }
    }
    return static_cast<double>(c.L) / (8.0 * static_cast<double>(n)) * pair_sum;
}

// Series route: R2 = 1/(8 pi^2 L) sum_{p != q} T1(p) T2(q) T3(p,q), every
// eigenvalue power via the Chebyshev recurrence. Must equal r2_smooth when
// the n-sum is uncapped; a cap changes the statistic and is echoed in reports.
inline double r2_series(const AngleSet& a, const PairCorrConfig& c) {
    const long long n = a.window.count();
    if (n == 0) return 0.0;
    const detail::SeriesContext ctx = detail::make_series_context(a, c);
    std::vector<double> partials(static_cast<size_t>(std::max(1, c.threads)), 0.0);
    detail::parallel_chunks(n, c.threads, [&](int chunk, long long lo, long long hi) {
        double acc = 0.0;
        for (long long i = lo; i < hi; ++i)
            for (long long j = i + 1; j < n; ++j)
                acc += 2.0 * ctx.V[static_cast<size_t>(i)] * ctx.V[static_cast<size_t>(j)] *
                       ctx.t3(static_cast<size_t>(i), static_cast<size_t>(j));
        partials[static_cast<size_t>(chunk)] = acc;
    });
    const double total = pairwise_sum(partials);
    return total / (8.0 * static_cast<double>(n) * static_cast<double>(n) *
                    static_cast<double>(c.L));
}

// R2^2 = K + L + M split by the coincidence pattern of (p,q) x (r,s), each
// part carrying its printed prefactor over 64 pi^4 L^2; the 1/2/4 sub-splits
// separate the G(0) and n >= 1 parts of each T3 factor.
struct KlmDecomposition {
    double k = 0, l = 0, m = 0;
    double k1 = 0, k2 = 0, k4 = 0;
    double l1 = 0, l2 = 0, l4 = 0;
    double m1 = 0, m2 = 0, m4 = 0;
    double total() const { return k + l + m; }
};

inline KlmDecomposition klm_decomposition(const AngleSet& a, const PairCorrConfig& c) {
    KlmDecomposition out;
    const long long n = a.window.count();
    if (n == 0) return out;
    const detail::SeriesContext ctx = detail::make_series_context(a, c);
    const size_t nn = static_cast<size_t>(n);
    const double g0 = 4.0 * ctx.table.G[0];

    std::vector<double> T3(nn * nn, 0.0);
    detail::parallel_chunks(n, c.threads, [&](int, long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i)
            for (long long j = 0; j < n; ++j)
                if (i != j)
                    T3[static_cast<size_t>(i) * nn + static_cast<size_t>(j)] =
                        ctx.t3(static_cast<size_t>(i), static_cast<size_t>(j));
    });
    auto t3 = [&](size_t p, size_t q) { return T3[p * nn + q]; };
    const auto& V = ctx.V;

    const double piN = static_cast<double>(n);
    const double pref = 1.0 / (64.0 * piN * piN * piN * piN *
                               static_cast<double>(c.L) * static_cast<double>(c.L));

    // K over ordered pairs
    {
        detail::KahanSum k, k1, k2, k4;
        for (size_t p = 0; p < nn; ++p) {
            for (size_t q = 0; q < nn; ++q) {
                if (p == q) continue;
                const double vv = V[p] * V[p] * V[q] * V[q];
                const double full = t3(p, q);
                const double plus = full - g0;
                k.add(2.0 * vv * full * full);
                k1.add(2.0 * vv * g0 * g0);
                k2.add(2.0 * vv * g0 * plus);
                k4.add(2.0 * vv * plus * plus);
            }
        }
        out.k = k.sum; out.k1 = k1.sum; out.k2 = k2.sum; out.k4 = k4.sum;
    }
    // L over distinct triples
    {
        detail::KahanSum l, l1, l2, l4;
        for (size_t p = 0; p < nn; ++p) {
            for (size_t q = 0; q < nn; ++q) {
                if (q == p) continue;
                for (size_t r = 0; r < nn; ++r) {
                    if (r == p || r == q) continue;
                    const double vv = V[p] * V[p] * V[q] * V[r];
                    const double fq = t3(p, q), fr = t3(p, r);
                    l.add(4.0 * vv * fq * fr);
                    l1.add(4.0 * vv * g0 * g0);
                    l2.add(4.0 * vv * (fq - g0) * g0);
                    l4.add(4.0 * vv * (fq - g0) * (fr - g0));
                }
            }
        }
        out.l = l.sum; out.l1 = l1.sum; out.l2 = l2.sum; out.l4 = l4.sum;
    }
    // M over distinct quadruples; S(p,q) = V(p)V(q)T3(p,q)
    {
        std::vector<double> partials(9 * static_cast<size_t>(std::max(1, c.threads)), 0.0);
        detail::parallel_chunks(n, c.threads, [&](int chunk, long long lo, long long hi) {
            detail::KahanSum m, m1, m2, m4;
            for (long long pi = lo; pi < hi; ++pi) {
                const size_t p = static_cast<size_t>(pi);
                for (size_t q = 0; q < nn; ++q) {
                    if (q == p) continue;
                    const double spq = V[p] * V[q] * t3(p, q);
                    const double spq0 = V[p] * V[q] * g0;
                    const double spqp = spq - spq0;
                    for (size_t r = 0; r < nn; ++r) {
                        if (r == p || r == q) continue;
                        for (size_t s = 0; s < nn; ++s) {
                            if (s == p || s == q || s == r) continue;
                            const double srs = V[r] * V[s] * t3(r, s);
                            const double srs0 = V[r] * V[s] * g0;
                            m.add(spq * srs);
                            m1.add(spq0 * srs0);
                            m2.add(spqp * srs0);
                            m4.add(spqp * (srs - srs0));
                        }
                    }
                }
            }
            partials[static_cast<size_t>(chunk) * 9 + 0] = m.sum;
            partials[static_cast<size_t>(chunk) * 9 + 1] = m1.sum;
            partials[static_cast<size_t>(chunk) * 9 + 2] = m2.sum;
            partials[static_cast<size_t>(chunk) * 9 + 3] = m4.sum;
        });
        for (size_t c2 = 0; c2 < partials.size() / 9; ++c2) {
            out.m += partials[c2 * 9 + 0];
            out.m1 += partials[c2 * 9 + 1];
            out.m2 += partials[c2 * 9 + 2];
            out.m4 += partials[c2 * 9 + 3];
        }
    }

    out.k *= pref; out.k1 *= pref; out.k2 *= pref; out.k4 *= pref;
    out.l *= pref; out.l1 *= pref; out.l2 *= pref; out.l4 *= pref;
    out.m *= pref; out.m1 *= pref; out.m2 *= pref; out.m4 *= pref;
    return out;
}

// #{p : theta_p in [psi - 1/(AL), psi + 1/(AL)]}, closed interval. The +-
// family count is local_count(psi) + local_count(1-psi).
inline long long local_count(const AngleSet& a, double psi, long long L) {
    const double sp = std::sin(M_PI * psi);
    const double A = 2.0 * sp * sp;
    const double half = 1.0 / (A * static_cast<double>(L));
    long long cnt = 0;
    for (double t : a.angles)
        if (t >= psi - half && t <= psi + half) ++cnt;
    return cnt;
}

namespace detail {

// sum over n of chi_[-1/A,1/A](L(t - psi + n)), i.e. integers n in
// [psi - t - 1/(AL), psi - t + 1/(AL)] (closed, ties in).
inline long long periodized_indicator(double t, double psi, double A, long long L) {
    const double half = 1.0 / (A * static_cast<double>(L));
    const double lo = psi - t - half;
    const double hi = psi - t + half;
    const long long nlo = static_cast<long long>(std::ceil(lo));
    const long long nhi = static_cast<long long>(std::floor(hi));
    return nhi >= nlo ? nhi - nlo + 1 : 0;
}

// B(chi, tp, tq, s): the six offsets listed in the counting lemma, closed
// window [-h, h]. The difference offset -2 never fires for angles in [0,1]
// with the stated windows; it is kept for fidelity with the proof.
inline int b_shift_count(double tp, double tq, double h) {
    const double d = tp - tq;
    const double sm = tp + tq;
    int cnt = 0;
    for (double v : {d - 1.0, d, d + 1.0, d - 2.0, sm, sm - 1.0})
        if (v >= -h && v <= h) ++cnt;
    return cnt;
}

} // namespace detail

// Counting pair correlation of the +- family localized to I_L(psi):
//   L/(8 pi_N(x)) sum_{ordered p != q} ind(p) ind(q) 2 B(chi, theta_p, theta_q, s)
// with ind the periodized interval indicator and B the six-shift sum over the
// mean-spacing window [-s/(2A pi_N(x)), s/(2A pi_N(x))]. The asymptotic local
// count 4 pi_N(x)/L is baked into the scale; if the observed local count is
// zero the statistic is undefined and nullopt is returned. The straightened
// variant applies the shifts to H(theta) with window s/(2 pi_N(x)).
inline std::optional<double> r_counting(const AngleSet& a, const PairCorrConfig& c) {
    const long long n = a.window.count();
    if (n == 0) return std::nullopt;
    if (local_count(a, c.psi, c.L) + local_count(a, 1.0 - c.psi, c.L) == 0)
        return std::nullopt;
    const double sp = std::sin(M_PI * c.psi);
    const double A = 2.0 * sp * sp;
    const double h = c.straightened_counting
                         ? c.s / (2.0 * static_cast<double>(n))
                         : c.s / (2.0 * A * static_cast<double>(n));
    std::vector<long long> ind(static_cast<size_t>(n));
    std::vector<double> pos(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const double t = a.angles[static_cast<size_t>(i)];
        ind[static_cast<size_t>(i)] = detail::periodized_indicator(t, c.psi, A, c.L) +
                                      detail::periodized_indicator(-t, c.psi, A, c.L);
        pos[static_cast<size_t>(i)] = c.straightened_counting ? straighten(t) : t;
    }
    std::vector<double> partials(static_cast<size_t>(std::max(1, c.threads)), 0.0);
    detail::parallel_chunks(n, c.threads, [&](int chunk, long long lo, long long hi) {
        double acc = 0.0;
        for (long long i = lo; i < hi; ++i) {
            if (ind[static_cast<size_t>(i)] == 0) continue;
            for (long long j = 0; j < n; ++j) {
                if (j == i || ind[static_cast<size_t>(j)] == 0) continue;
                acc += static_cast<double>(ind[static_cast<size_t>(i)] *
                                           ind[static_cast<size_t>(j)]) *
                       2.0 *
                       detail::b_shift_count(pos[static_cast<size_t>(i)],
                                             pos[static_cast<size_t>(j)], h);
            }
        }
        partials[static_cast<size_t>(chunk)] = acc;
    });
    return static_cast<double>(c.L) / (8.0 * static_cast<double>(n)) *
           pairwise_sum(partials);
}

// (N_{rho,L,f}(x)/(2 pi_N(x)), U(0)/(2L), series form); the first and third
// agree up to rounding, the first two agree asymptotically.
struct NRhoStatistic {
    double direct_norm = 0.0;
    double mass = 0.0;
    double series_norm = 0.0;
};

inline NRhoStatistic n_rho_statistic(const AngleSet& a, const PairCorrConfig& c) {
    NRhoStatistic out;
    const long long n = a.window.count();
    const std::vector<double> U = u_table(c.rho, c.L, c.psi);
    out.mass = U[0] / (2.0 * static_cast<double>(c.L));
    if (n == 0) return out;
    const PeriodizedKernel rk = make_kernel(c.rho, c.L);
    double direct = 0.0;
    for (double t : a.angles)
        direct += eval_kernel(rk, t - c.psi) + eval_kernel(rk, -t - c.psi);
    out.direct_norm = direct / (2.0 * static_cast<double>(n));
    double series = 0.0;
    for (size_t l = 0; l < U.size(); ++l) {
        double ps = 0.0;
        for (double t : a.angles) ps += chebyshev_eigenvalue(t, 2 * static_cast<int>(l));
        series += U[l] / static_cast<double>(c.L) * ps;
    }
    out.series_norm = series / (2.0 * static_cast<double>(n));
    return out;
}

// S(l) = sum_{p <= x, (p,N)=1} a_f(p^{2l}) with trend normalizations.
struct PowerSumDiagnostic {
    long long l = 0;
    double sum = 0.0;
    double per_prime = 0.0;      // S / pi_N(x)
    double per_sqrtx_logx = 0.0; // S / (sqrt(x) log x)
};

inline PowerSumDiagnostic power_sum_diagnostic(const AngleSet& a, long long l) {
    if (l < 1) throw std::invalid_argument("power_sum_diagnostic: l >= 1 required");
    PowerSumDiagnostic out;
    out.l = l;
    for (double t : a.angles) out.sum += chebyshev_eigenvalue(t, static_cast<int>(2 * l));
    const long long n = a.window.count();
    out.per_prime = n > 0 ? out.sum / static_cast<double>(n)
                          : std::numeric_limits<double>::quiet_NaN();
    const double x = static_cast<double>(a.window.x);
    out.per_sqrtx_logx = (x >= 3.0) ? out.sum / (std::sqrt(x) * std::log(x))
                                    : std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace stpc
