#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpc/arith.hpp"
#include "stpc/paircorr.hpp"
#include "stpc/rng.hpp"

namespace stpc {

enum class SampleModel { kSatoTate, kUniform };

inline SampleModel sample_model_by_name(const std::string& s) {
    if (s == "sato_tate" || s == "st") return SampleModel::kSatoTate;
    if (s == "uniform") return SampleModel::kUniform;
    throw std::invalid_argument("unknown sample model '" + s + "'");
}

struct SampleConfig {
    long long n = 1;
    uint64_t seed = 0;
    SampleModel model = SampleModel::kSatoTate;
};

namespace detail {

// Inverse of H(theta) = theta - sin(2 pi theta)/(2 pi). Seeds come from a
// table of H^{-1} at 4096+1 Chebyshev-spaced u nodes, refined per query by
// safeguarded Newton; inversion residual stays below 1e-12 (budget 1e-10).
class StraightenInverse {
  public:
    StraightenInverse() {
        constexpr int kNodes = 4096;
        us_.resize(kNodes + 1);
        thetas_.resize(kNodes + 1);
        for (int j = 0; j <= kNodes; ++j) {
            const double u = 0.5 * (1.0 - std::cos(M_PI * j / kNodes));
            us_[j] = u;
            thetas_[j] = solve(u, 0.0, 1.0);
        }
    }

    double operator()(double u) const {
        if (!(u >= 0.0 && u <= 1.0))
            throw std::domain_error("StraightenInverse: u outside [0,1]");
        const auto it = std::lower_bound(us_.begin(), us_.end(), u);
        size_t hi = static_cast<size_t>(it - us_.begin());
        if (hi == 0) return solve(u, 0.0, thetas_[0] > 0 ? thetas_[0] : 1.0);
        if (hi >= us_.size()) return solve(u, thetas_.back(), 1.0);
        return solve(u, thetas_[hi - 1], thetas_[hi]);
    }

  private:
    static double solve(double u, double lo, double hi) {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        // cube-root asymptotics near the endpoints where mu vanishes
        double t = (u < 1e-3)   ? std::cbrt(3.0 * u / (2.0 * M_PI * M_PI))
                   : (u > 1.0 - 1e-3)
                       ? 1.0 - std::cbrt(3.0 * (1.0 - u) / (2.0 * M_PI * M_PI))
                       : 0.5 * (lo + hi);
        t = std::clamp(t, lo, hi);
        for (int it = 0; it < 200; ++it) {
            const double f = straighten(t) - u;
            if (std::abs(f) <= 1e-13) break;
            if (f > 0)
                hi = t;
            else
                lo = t;
            const double d = st_density(t);
            double next = (d > 1e-12) ? t - f / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            t = next;
        }
        return t;
    }

    std::vector<double> us_;
    std::vector<double> thetas_;
};

inline const StraightenInverse& straighten_inverse() {
    static const StraightenInverse inv;
    return inv;
}

inline long long nth_prime_upper_bound(long long n) {
    if (n < 6) return 13;
    const double nd = static_cast<double>(n);
    return static_cast<long long>(nd * (std::log(nd) + std::log(std::log(nd))) ) + 16;
}

} // namespace detail

// n i.i.d. angles from mu(t)dt (inverted H) or from the uniform density,
// attached to a synthetic window of the first n primes. Identical
// (seed, n, model) always reproduces the identical sample.
inline AngleSet sample_angles(const SampleConfig& c) {
    if (c.n < 1) throw std::invalid_argument("sample_angles: n >= 1 required");
    long long bound = detail::nth_prime_upper_bound(c.n);
    PrimeWindow w = prime_window(bound, 1);
    while (w.count() < c.n) {
        bound *= 2;
        w = prime_window(bound, 1);
    }
    w.primes.resize(static_cast<size_t>(c.n));
    w.x = w.primes.back();

    const CounterRng rng{c.seed};
    std::vector<double> angles(static_cast<size_t>(c.n));
    for (long long i = 0; i < c.n; ++i) {
        const double u = rng.uniform01(static_cast<uint64_t>(i));
        angles[static_cast<size_t>(i)] =
            (c.model == SampleModel::kUniform) ? u : detail::straighten_inverse()(u);
    }
    const char* tag = (c.model == SampleModel::kUniform) ? "uniform" : "sato_tate";
    return make_angle_set(std::string("mc:") + tag, std::move(w), std::move(angles));
}

struct TrialSummary {
    long long trials = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    double target = 0.0;
};

// r2_smooth over independent Sato-Tate samples; per-trial substreams keep the
// run reproducible with any thread count. stderr is the sample standard
// deviation over trials divided by sqrt(trials).
inline TrialSummary poisson_expectation_experiment(const PairCorrConfig& c,
                                                   const SampleConfig& base,
                                                   long long trials) {
    if (trials < 2)
        throw std::invalid_argument("poisson_expectation_experiment: trials >= 2");
    std::vector<double> vals(static_cast<size_t>(trials), 0.0);
    const CounterRng root{base.seed};
    detail::parallel_chunks(trials, c.threads, [&](int, long long lo, long long hi) {
        for (long long t = lo; t < hi; ++t) {
            SampleConfig sc = base;
            sc.model = SampleModel::kSatoTate;
            sc.seed = root.substream(static_cast<uint64_t>(t)).seed;
            const AngleSet a = sample_angles(sc);
            PairCorrConfig cc = c;
            cc.threads = 1;
            vals[static_cast<size_t>(t)] = r2_smooth(a, cc, SmoothStrategy::kGrouped);
        }
    });
    TrialSummary out;
    out.trials = trials;
    out.mean = pairwise_mean(vals);
    double ss = 0.0;
    for (double v : vals) ss += (v - out.mean) * (v - out.mean);
    out.stderr_mean = std::sqrt(ss / static_cast<double>(trials - 1)) /
                      std::sqrt(static_cast<double>(trials));
    out.target = poisson_limit(c.psi, c.g, c.rho);
    return out;
}

// Empirical (population) variance of R2 over forms_per_size Sato-Tate samples
// at each size; the variance-vanishing trend shows as variance(largest) <
// variance(smallest).
inline std::vector<std::pair<long long, double>> variance_trend_experiment(
    const PairCorrConfig& c, const std::vector<long long>& sizes, long long forms_per_size,
    uint64_t seed) {
    if (forms_per_size < 1)
        throw std::invalid_argument("variance_trend_experiment: forms_per_size >= 1");
    for (size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("variance_trend_experiment: sizes must ascend");
    std::vector<std::pair<long long, double>> out;
    const CounterRng root{seed};
    for (size_t si = 0; si < sizes.size(); ++si) {
        std::vector<double> vals(static_cast<size_t>(forms_per_size), 0.0);
        detail::parallel_chunks(forms_per_size, c.threads, [&](int, long long lo,
                                                               long long hi) {
            for (long long f = lo; f < hi; ++f) {
                SampleConfig sc;
                sc.n = sizes[si];
                sc.model = SampleModel::kSatoTate;
                sc.seed = root.substream(static_cast<uint64_t>(si) * 0x10000ULL +
                                         static_cast<uint64_t>(f))
                              .seed;
                const AngleSet a = sample_angles(sc);
                PairCorrConfig cc = c;
                cc.threads = 1;
                vals[static_cast<size_t>(f)] = r2_smooth(a, cc, SmoothStrategy::kGrouped);
            }
        });
        const double mean = pairwise_mean(vals);
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        out.emplace_back(sizes[si], ss / static_cast<double>(forms_per_size));
    }
    return out;
}

} // namespace stpc
