#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "stpc/arith.hpp"
#include "stpc/quadrature.hpp"
#include "stpc/rng.hpp"

using namespace stpc;

TEST_CASE("Sato-Tate density") {
    CHECK(st_density(0.0) == 0.0);
    CHECK(st_density(0.5) == Catch::Approx(2.0).margin(1e-15));
    CHECK(st_density(0.25) == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(st_density(-0.01), std::domain_error);
    CHECK_THROWS_AS(st_density(1.01), std::domain_error);

    // unit mass and symmetry
    const double mass = integrate([](double t) { return st_density(t); }, 0.0, 1.0, 1e-12);
    CHECK(mass == Catch::Approx(1.0).margin(1e-10));
    for (double t : {0.05, 0.3, 0.49, 0.77})
        CHECK(st_density(t) == Catch::Approx(st_density(1.0 - t)).margin(1e-14));
}

TEST_CASE("straightening map") {
    CHECK(straighten(0.0) == 0.0);
    CHECK(straighten(1.0) == Catch::Approx(1.0).margin(1e-15));
    // quadrature of mu on [0, 1/4] as the oracle for the closed form
    const double q = integrate([](double t) { return st_density(t); }, 0.0, 0.25, 1e-12);
    CHECK(straighten(0.25) == Catch::Approx(q).margin(1e-10));
    CHECK(straighten(0.25) == Catch::Approx(0.25 - 1.0 / (2.0 * M_PI)).margin(1e-14));

    // strictly increasing on a grid, with the reflection symmetry
    double prev = straighten(0.0);
    for (int i = 1; i <= 10000; ++i) {
        const double t = static_cast<double>(i) / 10000.0;
        const double h = straighten(t);
        CHECK(h > prev);
        prev = h;
    }
    for (double t : {0.1, 0.33, 0.5, 0.9})
        CHECK(straighten(1.0 - t) == Catch::Approx(1.0 - straighten(t)).margin(1e-12));
}

TEST_CASE("angle from eigenvalue") {
    CHECK(angle_from_eigenvalue(2.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(angle_from_eigenvalue(0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(angle_from_eigenvalue(-2.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK_NOTHROW(angle_from_eigenvalue(2.0 + 0.5e-9));  // inside the slack
    CHECK_THROWS_AS(angle_from_eigenvalue(2.0 + 1e-6), std::domain_error);

    // round trip theta -> 2cos(pi theta) -> theta
    for (int i = 0; i <= 100; ++i) {
        const double theta = static_cast<double>(i) / 100.0;
        const double a = 2.0 * std::cos(M_PI * theta);
        CHECK(angle_from_eigenvalue(a) == Catch::Approx(theta).margin(1e-12));
    }
}

TEST_CASE("chebyshev eigenvalue values") {
    for (double theta : {0.0, 0.1, 0.77}) CHECK(chebyshev_eigenvalue(theta, 0) == 1.0);
    CHECK(chebyshev_eigenvalue(0.0, 5) == Catch::Approx(6.0).margin(1e-12));
    // closed-form ratio as oracle away from the endpoints
    const double theta = 0.3;
    const double want = std::sin(5.0 * theta * M_PI) / std::sin(theta * M_PI);
    CHECK(chebyshev_eigenvalue(theta, 4) == Catch::Approx(want).margin(1e-12));

    // |a(p^m)| <= m+1
    const CounterRng rng{7};
    for (int c = 0; c < 500; ++c) {
        const double t = rng.uniform01(static_cast<uint64_t>(c));
        const int m = static_cast<int>(rng.uniform01(1000 + static_cast<uint64_t>(c)) * 40);
        CHECK(std::abs(chebyshev_eigenvalue(t, m)) <= m + 1 + 1e-9);
    }
}

TEST_CASE("cosine identity") {
    auto [l0, r0] = check_cosine_identity(0.4217, 0);
    CHECK(l0 == 2.0);
    CHECK(r0 == 2.0);
    auto [l7, r7] = check_cosine_identity(0.0, 7);
    CHECK(l7 == Catch::Approx(2.0).margin(1e-12));
    CHECK(r7 == Catch::Approx(2.0).margin(1e-12));
    auto [la, ra] = check_cosine_identity(0.137, 12);
    CHECK(la == Catch::Approx(ra).margin(1e-10));

    const CounterRng rng{42};
    double worst = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const double t = rng.uniform01(static_cast<uint64_t>(c));
        const int l = static_cast<int>(rng.uniform01(5000 + static_cast<uint64_t>(c)) * 25);
        const auto [lhs, rhs] = check_cosine_identity(t, l);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("hecke product identities") {
    // i = j = 0: product 1*1 equals the single term of the sum
    CHECK(check_hecke_products(0.3, 0.6, 0, 0, 0, 1));
    // theta = 0 reduces to the integer identity (i+1)(j+1) = sum of an
    // arithmetic progression
    CHECK(check_hecke_products(0.0, 0.0, 7, 4, 3, 2));

    const CounterRng rng{1234};
    double worst = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const double t = rng.uniform01(static_cast<uint64_t>(c));
        const int i = static_cast<int>(rng.uniform01(10000 + static_cast<uint64_t>(c)) * 21);
        const int j = static_cast<int>(rng.uniform01(20000 + static_cast<uint64_t>(c)) * 21);
        const int l = static_cast<int>(rng.uniform01(30000 + static_cast<uint64_t>(c)) * 21);
        const int n = 1 + static_cast<int>(rng.uniform01(40000 + static_cast<uint64_t>(c)) * 20);
        worst = std::max(worst, hecke_product_residual(t, i, j, l, n));
    }
    CHECK(worst < 1e-9);
}

namespace {
// independent naive sieve used only as oracle
long long count_primes_naive(long long x) {
    long long cnt = 0;
    for (long long n = 2; n <= x; ++n) {
        bool prime = true;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        if (prime) ++cnt;
    }
    return cnt;
}
} // namespace

TEST_CASE("prime windows") {
    const auto w1 = prime_window(10, 1);
    CHECK(w1.primes == std::vector<long long>{2, 3, 5, 7});
    CHECK(w1.count() == 4);

    const auto w6 = prime_window(10, 6);
    CHECK(w6.primes == std::vector<long long>{5, 7});

    CHECK(prime_window(1, 1).count() == 0);

    const auto big = prime_window(100000, 1);
    CHECK(big.count() == 9592);
    CHECK(big.count() == count_primes_naive(100000));

    // ascending, no duplicates, all coprime to the level
    const auto w30 = prime_window(200, 30);
    for (size_t i = 1; i < w30.primes.size(); ++i) CHECK(w30.primes[i] > w30.primes[i - 1]);
    for (long long p : w30.primes) CHECK(std::gcd(p, 30ll) == 1);
}
