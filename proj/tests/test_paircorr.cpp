#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stpc/data.hpp"
#include "stpc/montecarlo.hpp"
#include "stpc/paircorr.hpp"
#include "stpc/rng.hpp"

using namespace stpc;

namespace {

AngleSet synthetic_set(long long n, uint64_t seed, SampleModel model = SampleModel::kSatoTate) {
    SampleConfig c;
    c.n = n;
    c.seed = seed;
    c.model = model;
    return sample_angles(c);
}

PairCorrConfig config(double psi = 0.25, long long L = 4) {
    PairCorrConfig c;
    c.psi = psi;
    c.L = L;
    return c;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-30, std::abs(b)); }

} // namespace

TEST_CASE("degenerate windows") {
    const auto c = config();
    AngleSet empty = make_angle_set("empty", prime_window(1, 1), {});
    CHECK(r2_smooth(empty, c) == 0.0);
    CHECK(r2_series(empty, c) == 0.0);

    AngleSet one = make_angle_set("one", prime_window(2, 1), {0.3});
    CHECK(r2_smooth(one, c) == 0.0);  // no pairs p != q
    CHECK(r2_series(one, c) == 0.0);

    CHECK_THROWS_AS(make_angle_set("bad", prime_window(10, 1), {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(make_angle_set("bad", prime_window(3, 1), {0.1, 1.5}),
                    std::invalid_argument);
}

TEST_CASE("two-prime window against the hand-expanded sign sum") {
    // theta_p = theta_q = 1/4, psi = 1/4, triangle/triangle, L = 2, M = 2
    AngleSet a = make_angle_set("pair", prime_window(3, 1), {0.25, 0.25});
    auto c = config(0.25, 2);

    // scalar oracle: evaluate eq. R2 = L/(8 pi) sum over the two ordered pairs
    const auto rk = make_kernel(fejer_function(), 2);
    const auto gk = make_kernel(fejer_function(), 2);
    auto pm = [&](double t) { return eval_kernel(rk, t - 0.25) + eval_kernel(rk, -t - 0.25); };
    auto g4 = [&](double tp, double tq) {
        return eval_kernel(gk, tp + tq) + eval_kernel(gk, tp - tq) +
               eval_kernel(gk, -tp + tq) + eval_kernel(gk, -tp - tq);
    };
    const double oracle = 2.0 / (8.0 * 2.0) * 2.0 * pm(0.25) * pm(0.25) * g4(0.25, 0.25);

    CHECK(r2_smooth(a, c, SmoothStrategy::kNaivePairs) == Catch::Approx(oracle).margin(1e-14));
    CHECK(r2_series(a, c) == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("route equivalence and strategy agreement") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        for (long long n : {2ll, 5ll, 23ll, 80ll}) {
            const auto a = synthetic_set(n, seed);
            const auto c = config(0.3, 6);
            const double naive = r2_smooth(a, c, SmoothStrategy::kNaivePairs);
            const double grouped = r2_smooth(a, c, SmoothStrategy::kGrouped);
            const double series = r2_series(a, c);
            CHECK(rel_err(naive, series) < 1e-9);
            CHECK(rel_err(grouped, naive) < 1e-11);
        }
    }

    // delta data at x = 200
    const auto a = angles_from_series(delta_series(200), 200);
    for (double psi : {0.25, 0.3}) {
        const auto c = config(psi, 4);
        CHECK(rel_err(r2_smooth(a, c, SmoothStrategy::kNaivePairs), r2_series(a, c)) < 1e-9);
    }
}

TEST_CASE("series T1 structure") {
    // U = (2, 0, ..., 0) means T1(p) = 2 for every p: build via L=1 fejer at
    // psi where the l=1 coefficient vanishes identically (rhohat(1) = 0), so
    // only U(0) = 2 rhohat(0) survives.
    const auto U = u_table(fejer_function(), 1, 0.25);
    REQUIRE(U.size() == 2);
    CHECK(U[0] == Catch::Approx(2.0));
    CHECK(U[1] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("series cap changes the statistic and is opt-in") {
    const auto a = synthetic_set(40, 9);
    auto c = config(0.3, 8);
    const double full = r2_series(a, c);
    c.series_n_cap = 3;
    const double capped = r2_series(a, c);
    CHECK(full != capped);
}

TEST_CASE("K+L+M decomposition") {
    // 2-prime window: L = M = 0 and K = R2^2
    {
        const auto a = synthetic_set(2, 4);
        const auto c = config();
        const auto d = klm_decomposition(a, c);
        const double r2 = r2_series(a, c);
        CHECK(d.l == 0.0);
        CHECK(d.m == 0.0);
        CHECK(rel_err(d.k, r2 * r2) < 1e-12);
    }
    // 3-prime window: M = 0
    {
        const auto a = synthetic_set(3, 5);
        const auto c = config();
        const auto d = klm_decomposition(a, c);
        const double r2 = r2_series(a, c);
        CHECK(d.m == 0.0);
        CHECK(rel_err(d.k + d.l, r2 * r2) < 1e-11);
    }
    // delta at x = 200 plus synthetic sets: identity and sub-splits
    const auto check_set = [&](const AngleSet& a, const PairCorrConfig& c) {
        const auto d = klm_decomposition(a, c);
        const double r2 = r2_series(a, c);
        CHECK(rel_err(d.total(), r2 * r2) < 1e-9);
        CHECK(rel_err(d.k1 + 2.0 * d.k2 + d.k4, d.k) < 1e-9);
        CHECK(rel_err(d.l1 + 2.0 * d.l2 + d.l4, d.l) < 1e-9);
        CHECK(rel_err(d.m1 + 2.0 * d.m2 + d.m4, d.m) < 1e-9);
    };
    check_set(angles_from_series(delta_series(200), 200), config(0.25, 4));
    for (uint64_t seed = 0; seed < 6; ++seed)
        check_set(synthetic_set(4 + 7 * static_cast<long long>(seed), 100 + seed),
                  config(0.3, 5));
}

TEST_CASE("permutation and reflection symmetry") {
    auto a = synthetic_set(31, 11);
    const auto c = config(0.3, 6);
    const double base = r2_smooth(a, c, SmoothStrategy::kNaivePairs);

    // permuting the prime order leaves every statistic unchanged
    AngleSet shuffled = a;
    std::reverse(shuffled.angles.begin(), shuffled.angles.end());
    CHECK(rel_err(r2_smooth(shuffled, c, SmoothStrategy::kNaivePairs), base) < 1e-12);
    CHECK(rel_err(r2_series(shuffled, c), r2_series(a, c)) < 1e-12);

    // theta -> 1-theta matches psi -> 1-psi
    AngleSet mirrored = a;
    for (double& t : mirrored.angles) t = 1.0 - t;
    auto cm = c;
    cm.psi = 1.0 - c.psi;
    CHECK(rel_err(r2_smooth(mirrored, cm, SmoothStrategy::kNaivePairs), base) < 1e-10);
}

TEST_CASE("local count") {
    const auto c = config();
    AngleSet empty = make_angle_set("empty", prime_window(1, 1), {});
    CHECK(local_count(empty, 0.25, 10) == 0);

    AngleSet all = make_angle_set("all", prime_window(20, 1),
                                  std::vector<double>(8, 0.25));
    CHECK(local_count(all, 0.25, 10) == all.window.count());

    // Sato-Tate sample: count/n near the mu-mass of the window
    const auto a = synthetic_set(10000, 21);
    const double mass = integrate([](double t) { return st_density(t); }, 0.25 - 0.1,
                                  0.25 + 0.1, 1e-12);
    const double frac =
        static_cast<double>(local_count(a, 0.25, 10)) / static_cast<double>(a.window.count());
    const double se = std::sqrt(mass * (1.0 - mass) / 10000.0);
    CHECK(std::abs(frac - mass) < 3.0 * se);
}

TEST_CASE("counting pair correlation") {
    // undefined without local points
    {
        AngleSet empty = make_angle_set("empty", prime_window(1, 1), {});
        CHECK(!r_counting(empty, config()).has_value());
        AngleSet off = make_angle_set("off", prime_window(5, 1), {0.9, 0.9, 0.9});
        auto c = config(0.25, 50);  // narrow window far from 0.9 and 0.1
        CHECK(!r_counting(off, c).has_value());
    }
    // s = 0 with distinct angles: no pair fires
    {
        AngleSet a = make_angle_set("d", prime_window(7, 1), {0.24, 0.25, 0.26, 0.27});
        auto c = config(0.25, 2);
        c.s = 0.0;
        CHECK(*r_counting(a, c) == 0.0);
    }
    // hand count: two equal angles at psi = 0.3 (no boundary ties), L = 5:
    // ind = 1 per prime (only the n=0 shift of the + sign lands in the
    // window), B = 1 (the unshifted difference), so the statistic is
    // L/(8 pi) * 2 ordered pairs * 1 * 1 * 2 = 5/16 * 4 = 1.25
    {
        AngleSet a = make_angle_set("eq", prime_window(3, 1), {0.3, 0.3});
        auto c = config(0.3, 5);
        c.s = 1.0;
        CHECK(*r_counting(a, c) == Catch::Approx(1.25).margin(1e-14));
    }
    // independent enumeration oracle: literal loops over the +- signs, the
    // wrap index n in [-3,3], and the six B shifts
    {
        const auto a = synthetic_set(40, 1234);
        auto c = config(0.3, 5);
        c.s = 2.0;
        const long long n = a.window.count();
        const double A = 2.0 * std::sin(M_PI * c.psi) * std::sin(M_PI * c.psi);
        const double h = c.s / (2.0 * A * static_cast<double>(n));
        auto ind = [&](double t) {
            int cnt = 0;
            for (double sign : {1.0, -1.0})
                for (int m = -3; m <= 3; ++m) {
                    const double v = static_cast<double>(c.L) * (sign * t - c.psi + m);
                    if (v >= -1.0 / A && v <= 1.0 / A) ++cnt;
                }
            return cnt;
        };
        double total = 0.0;
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < n; ++j) {
                if (i == j) continue;
                const double tp = a.angles[static_cast<size_t>(i)];
                const double tq = a.angles[static_cast<size_t>(j)];
                int b = 0;
                for (double v : {tp - tq - 1.0, tp - tq, tp - tq + 1.0, tp - tq - 2.0,
                                 tp + tq, tp + tq - 1.0})
                    if (v >= -h && v <= h) ++b;
                total += static_cast<double>(ind(tp) * ind(tq)) * 2.0 * b;
            }
        const double oracle =
            static_cast<double>(c.L) / (8.0 * static_cast<double>(n)) * total;
        CHECK(*r_counting(a, c) == Catch::Approx(oracle).margin(1e-12));
    }
    // i.i.d. uniform at psi=1/4 (A=1): statistic near 2s
    {
        std::vector<double> vals;
        for (uint64_t seed = 0; seed < 12; ++seed) {
            const auto a = synthetic_set(6000, 300 + seed, SampleModel::kUniform);
            auto c = config(0.25, 10);
            c.s = 1.0;
            vals.push_back(*r_counting(a, c));
        }
        const double mean = pairwise_mean(vals);
        double sd = 0.0;
        for (double v : vals) sd += (v - mean) * (v - mean);
        sd = std::sqrt(sd / (vals.size() - 1.0));
        const double se = sd / std::sqrt(static_cast<double>(vals.size()));
        CHECK(std::abs(mean - 2.0) < 3.5 * se);
    }
    // Sato-Tate at generic psi: also near 2s (the A-scalings cancel)
    {
        std::vector<double> vals;
        for (uint64_t seed = 0; seed < 12; ++seed) {
            const auto a = synthetic_set(6000, 400 + seed);
            auto c = config(0.3, 10);
            c.s = 1.5;
            vals.push_back(*r_counting(a, c));
        }
        const double mean = pairwise_mean(vals);
        CHECK(std::abs(mean - 3.0) < 0.45);
        // straightened-difference variant agrees in expectation
        std::vector<double> vals2;
        for (uint64_t seed = 0; seed < 12; ++seed) {
            const auto a = synthetic_set(6000, 400 + seed);
            auto c = config(0.3, 10);
            c.s = 1.5;
            c.straightened_counting = true;
            vals2.push_back(*r_counting(a, c));
        }
        CHECK(std::abs(pairwise_mean(vals2) - 3.0) < 0.45);
    }
}

TEST_CASE("N_rho statistic") {
    // zero rho: all zeros
    {
        AngleSet a = synthetic_set(5, 1);
        PairCorrConfig c = config();
        c.rho.fourier_eval = [](double) { return 0.0; };
        const auto nr = n_rho_statistic(a, c);
        CHECK(nr.direct_norm == 0.0);
        CHECK(nr.mass == 0.0);
        CHECK(nr.series_norm == Catch::Approx(0.0).margin(1e-15));
    }
    // one prime at theta = psi: direct sum is (rho_L(0) + rho_L(-2 psi))/2
    {
        AngleSet a = make_angle_set("one", prime_window(2, 1), {0.25});
        const auto c = config(0.25, 4);
        const auto rk = make_kernel(c.rho, c.L);
        const double want = (eval_kernel(rk, 0.0) + eval_kernel(rk, -0.5)) / 2.0;
        const auto nr = n_rho_statistic(a, c);
        CHECK(nr.direct_norm == Catch::Approx(want).margin(1e-13));
        CHECK(nr.series_norm == Catch::Approx(nr.direct_norm).margin(1e-9));
    }
    // delta: deviation shrinks from x=1e3 to x=1e5 (regression snapshot lives
    // in the acceptance suite; here just the series/direct identity)
    {
        const auto a = angles_from_series(delta_series(1000), 1000);
        const auto c = config(0.25, 10);
        const auto nr = n_rho_statistic(a, c);
        CHECK(rel_err(nr.series_norm, nr.direct_norm) < 1e-9);
    }
}

TEST_CASE("power sum diagnostics") {
    // all angles at 0: a(p^{2l}) = 2l+1
    AngleSet zeros = make_angle_set("z", prime_window(13, 1), std::vector<double>(6, 0.0));
    for (long long l : {1ll, 2ll, 5ll}) {
        const auto ps = power_sum_diagnostic(zeros, l);
        CHECK(ps.sum == Catch::Approx(static_cast<double>((2 * l + 1) * 6)).margin(1e-9));
    }
    CHECK_THROWS_AS(power_sum_diagnostic(zeros, 0), std::invalid_argument);

    // Sato-Tate: S/n within 3 standard errors of 0 (unit variance)
    const auto a = synthetic_set(10000, 77);
    const auto ps = power_sum_diagnostic(a, 1);
    CHECK(std::abs(ps.per_prime) < 3.0 / std::sqrt(10000.0));
}

TEST_CASE("statistics stay finite") {
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const auto a = synthetic_set(17, 500 + seed);
        const auto c = config(0.1 + 0.15 * static_cast<double>(seed), 3 + seed);
        for (double v : {r2_smooth(a, c), r2_series(a, c), klm_decomposition(a, c).total(),
                         n_rho_statistic(a, c).direct_norm, power_sum_diagnostic(a, 2).sum})
            CHECK(std::isfinite(v));
        const auto rc = r_counting(a, c);
        if (rc) CHECK(std::isfinite(*rc));
    }
}

TEST_CASE("threaded runs reproduce single-threaded values") {
    const auto a = synthetic_set(120, 8);
    auto c1 = config(0.3, 8);
    auto c4 = c1;
    c4.threads = 4;
    CHECK(r2_smooth(a, c4, SmoothStrategy::kGrouped) ==
          Catch::Approx(r2_smooth(a, c1, SmoothStrategy::kGrouped)).epsilon(1e-12));
    CHECK(r2_series(a, c4) == Catch::Approx(r2_series(a, c1)).epsilon(1e-12));
    const auto d1 = klm_decomposition(a, c1);
    const auto d4 = klm_decomposition(a, c4);
    CHECK(d4.total() == Catch::Approx(d1.total()).epsilon(1e-12));
}
