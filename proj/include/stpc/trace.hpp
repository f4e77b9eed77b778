#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "stpc/paircorr.hpp"

namespace stpc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// 113-bit mantissa; normalizations by n^{(k-1)/2} stay accurate up to k ~ 1000
using QuadFloat = boost::multiprecision::cpp_bin_float_quad;

// ---------------------------------------------------------------------------
// small multiplicative arithmetic
// ---------------------------------------------------------------------------

inline std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n < 1) throw std::invalid_argument("factorize: n >= 1 required");
    std::vector<std::pair<long long, int>> out;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            out.emplace_back(d, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<long long> divisors(long long n) {
    std::vector<long long> ds{1};
    for (auto [p, e] : factorize(n)) {
        const size_t sz = ds.size();
        long long pw = 1;
        for (int i = 1; i <= e; ++i) {
            pw *= p;
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pw);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline long long euler_phi(long long n) {
    long long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

// [SL2(Z) : Gamma0(N)] = N prod_{p|N} (1 + 1/p)
inline long long psi_index(long long n) {
    long long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p + 1);
    return r;
}

inline long long nu_distinct_primes(long long n) {
    return static_cast<long long>(factorize(n).size());
}

inline long long sigma0(long long n) {
    long long r = 1;
    for (auto [p, e] : factorize(n)) r *= e + 1;
    return r;
}

inline long long sigma1(long long n) {
    long long r = 1;
    for (auto [p, e] : factorize(n)) {
        long long s = 1, pw = 1;
        for (int i = 0; i < e; ++i) {
            pw *= p;
            s += pw;
        }
        r *= s;
    }
    return r;
}

inline long long isqrt_ll(long long n) {
    if (n < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square_ll(long long n) {
    if (n < 0) return false;
    const long long r = isqrt_ll(n);
    return r * r == n;
}

// ---------------------------------------------------------------------------
// class numbers
// ---------------------------------------------------------------------------

namespace detail {

// 12 * (weighted count of reduced forms (a,b,c), b^2-4ac = -n, primitive
// filter optional). Weights: (a,a,a) -> 1/3, (a,0,a) -> 1/2, boundary forms
// (b=0, b=a or a=c) once, interior forms twice (for +-b).
inline long long reduced_form_count12(long long n, bool primitive_only) {
    if (n <= 0) return 0;
    if (n % 4 == 1 || n % 4 == 2) return 0;
    long long total = 0;
    for (long long b = (n & 1); 3 * b * b <= n; b += 2) {
        const long long m4 = n + b * b;
        if (m4 % 4 != 0) continue;
        const long long m = m4 / 4;
        for (long long a = std::max<long long>(b, 1); a * a <= m; ++a) {
            if (m % a != 0) continue;
            const long long c = m / a;
            if (primitive_only && std::gcd(std::gcd(a, b), c) != 1) continue;
            if (a == b && b == c)
                total += 4;
            else if (b == 0 && a == c)
                total += 6;
            else if (b == 0 || b == a || a == c)
                total += 12;
            else
                total += 24;
        }
    }
    return total;
}

} // namespace detail

// 12 * h_w(d) for a negative discriminant d: primitive reduced forms with the
// usual 1/2, 1/3 weights at d = -4, -3.
inline long long hw12_primitive(long long d) {
    if (d >= 0 || ((d % 4 + 4) % 4 != 0 && (d % 4 + 4) % 4 != 1))
        throw std::invalid_argument("hw12_primitive: d must be a negative discriminant");
    static std::unordered_map<long long, long long> cache;
    static std::shared_mutex mu;
    {
        std::shared_lock lk(mu);
        auto it = cache.find(d);
        if (it != cache.end()) return it->second;
    }
    const long long v = detail::reduced_form_count12(-d, true);
    std::unique_lock lk(mu);
    cache.emplace(d, v);
    return v;
}

// Hurwitz class numbers as 12 H(n): H(0) = -1/12, H(n) = 0 for n = 1,2 mod 4,
// otherwise the weighted count of all (not necessarily primitive) reduced
// forms of discriminant -n. Dense table plus isolated values; reads share a
// lock, misses compute outside the lock and commit (duplicated computation is
// allowed, torn values are not).
class HurwitzCache {
  public:
    static HurwitzCache& instance() {
        static HurwitzCache c;
        return c;
    }

    long long get12(long long n) {
        if (n < 0) throw std::invalid_argument("hurwitz: n >= 0 required");
        if (n == 0) return -1;
        if (n % 4 == 1 || n % 4 == 2) return 0;
        {
            std::shared_lock lk(mu_);
            if (n < static_cast<long long>(dense_.size())) return dense_[static_cast<size_t>(n)];
            auto it = sparse_.find(n);
            if (it != sparse_.end()) return it->second;
        }
        const long long v = detail::reduced_form_count12(n, false);
        std::unique_lock lk(mu_);
        sparse_.emplace(n, v);
        return v;
    }

    // Sieve-style dense fill over reduced triples, O(max_n^{3/2}) overall.
    void warm(long long max_n) {
        std::unique_lock lk(mu_);
        if (max_n < static_cast<long long>(dense_.size())) return;
        std::vector<long long> t(static_cast<size_t>(max_n) + 1, 0);
        t[0] = -1;
        for (long long a = 1; 3 * a * a <= max_n; ++a) {  // n = 4ac-b^2 >= 3a^2
            for (long long b = 0; b <= a; ++b) {
                for (long long c = a;; ++c) {
                    const long long n = 4 * a * c - b * b;
                    if (n > max_n) break;
                    if (n <= 0) continue;
                    long long w;
                    if (a == b && b == c)
                        w = 4;
                    else if (b == 0 && a == c)
                        w = 6;
                    else if (b == 0 || b == a || a == c)
                        w = 12;
                    else
                        w = 24;
                    t[static_cast<size_t>(n)] += w;
                }
            }
        }
        dense_ = std::move(t);
    }

    long long dense_limit() const {
        std::shared_lock lk(mu_);
        return static_cast<long long>(dense_.size()) - 1;
    }

    // Line-oriented cache file: "# hurwitz12 v1", then "n<TAB>12H(n)",
    // ascending n from 0.
    void save(const std::string& path) const {
        std::shared_lock lk(mu_);
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw std::runtime_error("hurwitz cache: cannot write " + path);
        out << "# hurwitz12 v1\n";
        for (size_t n = 0; n < dense_.size(); ++n) out << n << '\t' << dense_[n] << '\n';
    }

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("hurwitz cache: cannot read " + path);
        std::string header;
        std::getline(in, header);
        if (header != "# hurwitz12 v1")
            throw std::runtime_error("hurwitz cache: bad header in " + path);
        std::vector<long long> t;
        long long n, v;
        long long expect = 0;
        while (in >> n >> v) {
            if (n != expect)
                throw std::runtime_error("hurwitz cache: non-monotone entry in " + path);
            if (n == 0 && v != -1)
                throw std::runtime_error("hurwitz cache: H(0) must be -1/12");
            if (n > 0 && (n % 4 == 1 || n % 4 == 2) && v != 0)
                throw std::runtime_error("hurwitz cache: nonzero at n = 1,2 mod 4");
            if (n > 0 && v < 0)
                throw std::runtime_error("hurwitz cache: negative value");
            t.push_back(v);
            ++expect;
        }
        if (t.empty()) throw std::runtime_error("hurwitz cache: empty file " + path);
        std::unique_lock lk(mu_);
        if (t.size() > dense_.size()) dense_ = std::move(t);
    }

  private:
    mutable std::shared_mutex mu_;
    std::vector<long long> dense_;
    std::unordered_map<long long, long long> sparse_;
};

inline long long hurwitz12(long long n) { return HurwitzCache::instance().get12(n); }

inline Rational hurwitz(long long n) { return Rational(hurwitz12(n), 12); }

// ---------------------------------------------------------------------------
// Eichler-Selberg / Hijikata trace formula
// ---------------------------------------------------------------------------

namespace detail {

// P_k(t,n) = G_{k-2} with G_0 = 1, G_1 = t, G_j = t G_{j-1} - n G_{j-2};
// equivalently (rho^{k-1} - rhobar^{k-1})/(rho - rhobar) for x^2 - tx + n.
inline BigInt gegenbauer_like(long long t, long long n, long long k) {
    BigInt a = 1, b = t;
    if (k == 2) return a;
    for (long long j = 0; j < k - 3; ++j) {
        BigInt next = t * b - n * a;
        a = b;
        b = next;
    }
    return b;
}

// Hijikata's elliptic local count for ell^nu || N, rho = v_ell(f):
//   A = {x mod ell^(nu+rho): x^2-tx+n == 0 mod ell^(nu+2rho),   2x == t mod ell^rho}
//   B = {x mod ell^(nu+rho): x^2-tx+n == 0 mod ell^(nu+2rho+1), 2x == t mod ell^(rho+1)}
// The 2x-t congruences make both counts independent of the chosen lifts.
inline long long hijikata_local(long long ell, int nu, long long t, long long n, int rho) {
    long long m = 1;
    for (int i = 0; i < nu + rho; ++i) m *= ell;
    long long mA = m;
    for (int i = 0; i < rho; ++i) mA *= ell;
    const long long mB = mA * ell;
    long long lr = 1;
    for (int i = 0; i < rho; ++i) lr *= ell;
    const long long lr1 = lr * ell;
    auto mod = [](long long v, long long q) { return ((v % q) + q) % q; };
    long long cnt = 0;
    for (long long x = 0; x < m; ++x) {
        const long long v = x * x - t * x + n;
        if (mod(2 * x - t, lr) == 0 && mod(v, mA) == 0) ++cnt;
        if (mod(2 * x - t, lr1) == 0 && mod(v, mB) == 0) ++cnt;
    }
    return cnt;
}

inline long long elliptic_weight(const std::vector<std::pair<long long, int>>& level_fac,
                                 long long t, long long n, long long f) {
    long long w = 1;
    for (auto [ell, nu] : level_fac) {
        int rho = 0;
        long long ff = f;
        while (ff % ell == 0) {
            ++rho;
            ff /= ell;
        }
        w *= hijikata_local(ell, nu, t, n, rho);
        if (w == 0) return 0;
    }
    return w;
}

} // namespace detail

// Tr T_n on S_k(Gamma0(N)) as an exact integer; k even >= 2, gcd(n,N) = 1.
// Assembled from the identity, elliptic (Hurwitz-weighted with Hijikata local
// factors), hyperbolic (divisor) and k=2 correction terms, all in exact
// rational arithmetic; integrality of the result is asserted.
inline BigInt trace_tn_full(long long N, long long k, long long n) {
    if (N < 1 || n < 1) throw std::invalid_argument("trace_tn_full: N, n >= 1 required");
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("trace_tn_full: k must be even >= 2");
    if (std::gcd(n, N) != 1)
        throw std::invalid_argument("trace_tn_full: gcd(n,N) > 1 not supported");

    const auto level_fac = factorize(N);
    Rational total = 0;

    // identity term
    if (is_square_ll(n)) {
        BigInt npow = 1;
        for (long long i = 0; i < k / 2 - 1; ++i) npow *= n;
        total += Rational(BigInt(k - 1) * psi_index(N) * npow, 12);
    }

    // elliptic term: -(1/2) sum_{t^2<4n} P_k(t,n) sum_f h_w((t^2-4n)/f^2) c(t,f)
    const long long tmax = isqrt_ll(4 * n - 1);
    for (long long t = 0; t <= tmax; ++t) {
        const long long D = t * t - 4 * n;
        Rational fsum = 0;
        for (long long f = 1; f * f <= -D; ++f) {
            if (D % (f * f) != 0) continue;
            const long long d = D / (f * f);
            const long long dm = ((d % 4) + 4) % 4;
            if (dm != 0 && dm != 1) continue;
            const long long cw = detail::elliptic_weight(level_fac, t, n, f);
            if (cw != 0) fsum += Rational(hw12_primitive(d) * cw, 12);
        }
        if (fsum == 0) continue;
        const BigInt P = detail::gegenbauer_like(t, n, k);
        // P_k(-t,n) = P_k(t,n) for even k, and the local counts match under
        // x -> -x, so t and -t contribute equally.
        const int mult = (t == 0) ? 1 : 2;
        total -= Rational(P * mult, 2) * fsum;
    }

    // hyperbolic term: - sum'_{d | n, d <= sqrt(n)} d^{k-1} c(d, n/d)
    for (long long d : divisors(n)) {
        if (d * d > n) break;
        long long cdd = 0;
        const long long dd = n / d;
        for (long long cdiv : divisors(N)) {
            const long long g = std::gcd(cdiv, N / cdiv);
            if ((dd - d) % g == 0) cdd += euler_phi(g);
        }
        BigInt dpow = 1;
        for (long long i = 0; i < k - 1; ++i) dpow *= d;
        Rational term = Rational(dpow * cdd);
        if (d * d == n) term /= 2;
        total -= term;
    }

    if (k == 2) total += sigma1(n);

    if (denominator(total) != 1)
        throw std::logic_error("trace_tn_full: non-integral trace (engine bug)");
    return numerator(total);
}

// Newspace trace by Moebius-type inversion over divisors of N: weight -2 at
// primes, +1 at prime squares, 0 at higher powers.
inline long long inversion_weight(long long d) {
    long long w = 1;
    for (auto [p, e] : factorize(d)) {
        if (e == 1)
            w *= -2;
        else if (e == 2)
            w *= 1;
        else
            return 0;
    }
    return w;
}

inline BigInt trace_tn_new(long long N, long long k, long long n) {
    BigInt total = 0;
    for (long long d : divisors(N)) {
        const long long w = inversion_weight(d);
        if (w != 0) total += w * trace_tn_full(N / d, k, n);
    }
    return total;
}

inline long long newspace_dim(long long N, long long k) {
    const BigInt d = trace_tn_new(N, k, 1);
    if (d < 0) throw std::logic_error("newspace_dim: negative dimension (engine bug)");
    return d.convert_to<long long>();
}

// ---------------------------------------------------------------------------
// dimension formula B1(N) and the newspace bound
// ---------------------------------------------------------------------------

inline Rational b1_multiplicative(long long N) {
    Rational b = 1;
    for (auto [q, r] : factorize(N)) {
        if (r == 1)
            b *= Rational(q - 1, q);
        else if (r == 2)
            b *= Rational(q * q - q - 1, q * q);
        else
            b *= Rational((q - 1) * (q * q - 1), q * q * q);
    }
    return b;
}

struct NewspaceSummary {
    long long N = 1, k = 2;
    long long dim = 0;
    Rational b1;
    Rational main_term;       // N B1(N) (k-1)/12
    long long nu = 0;         // distinct prime factors of N
    bool bound_holds = false; // |dim - main| <= sqrt(N)/2 + (7/12)2^nu + 1, checked exactly
    double bound_value = 0.0;
};

inline NewspaceSummary b1_and_dims(long long N, long long k) {
    NewspaceSummary s;
    s.N = N;
    s.k = k;
    s.dim = newspace_dim(N, k);
    s.b1 = b1_multiplicative(N);
    s.main_term = Rational(N) * s.b1 * Rational(k - 1, 12);
    s.nu = nu_distinct_primes(N);
    const Rational gap = abs(Rational(s.dim) - s.main_term);
    const Rational rest = gap - Rational(7 * (1LL << s.nu), 12) - 1;
    // rest <= sqrt(N)/2  <=>  rest <= 0 or rest^2 <= N/4
    s.bound_holds = (rest <= 0) || (rest * rest <= Rational(N, 4));
    s.bound_value = std::sqrt(static_cast<double>(N)) / 2.0 +
                    7.0 / 12.0 * static_cast<double>(1LL << s.nu) + 1.0;
    if (!s.bound_holds)
        throw std::logic_error("b1_and_dims: dimension bound violated (engine bug)");
    return s;
}

// ---------------------------------------------------------------------------
// family averages and eigenvalue extraction
// ---------------------------------------------------------------------------

namespace detail {

// n^{(k-1)/2} in quad precision (k even, so the exponent is half-integral)
inline QuadFloat half_power(long long n, long long k_minus_1) {
    using std::exp;
    using std::log;
    const QuadFloat ln = log(QuadFloat(n));
    return exp(ln * QuadFloat(k_minus_1) / 2);
}

inline double normalized_new_trace(long long N, long long k, long long n) {
    const BigInt tr = trace_tn_new(N, k, n);
    const QuadFloat v = QuadFloat(tr) / half_power(n, k - 1);
    return v.convert_to<double>();
}

} // namespace detail

// <a_f(n)> over the newspace, exact integer numerator normalized at the end.
inline double family_avg(long long N, long long k, long long n) {
    const long long dim = newspace_dim(N, k);
    if (dim == 0) throw std::runtime_error("family_avg: empty family (dim 0)");
    if (n == 1) return 1.0;
    return detail::normalized_new_trace(N, k, n) / static_cast<double>(dim);
}

struct TraceEstimate {
    long long N = 0, k = 0, n = 0;
    long long dim = 0;
    double sum_af = 0.0;        // sum_f a_f(n) = new_trace / n^{(k-1)/2}
    double main_term = 0.0;     // |F|/sqrt(n) when n is a square, else 0
    double residual = 0.0;      // sum_af - main_term
    double residual_norm = 0.0; // residual / (n sigma0(n) sqrt(N))  [or 4^nu toggle]
    bool squarefree_norm = false;
};

// Diagnostic for the trace estimate: no constant is asserted, the normalized
// residual is simply reported. squarefree_norm swaps sqrt(N) for 4^{nu(N)}.
inline TraceEstimate check_trace_estimate(long long N, long long k, long long n,
                                          bool squarefree_norm = false) {
    TraceEstimate e;
    e.N = N;
    e.k = k;
    e.n = n;
    e.dim = newspace_dim(N, k);
    e.sum_af = (n == 1) ? static_cast<double>(e.dim) : detail::normalized_new_trace(N, k, n);
    e.main_term = is_square_ll(n) ? static_cast<double>(e.dim) / std::sqrt(static_cast<double>(n))
                                  : 0.0;
    e.residual = e.sum_af - e.main_term;
    e.squarefree_norm = squarefree_norm;
    const double denom =
        static_cast<double>(n) * static_cast<double>(sigma0(n)) *
        (squarefree_norm ? std::pow(4.0, static_cast<double>(nu_distinct_primes(N)))
                         : std::sqrt(static_cast<double>(N)));
    e.residual_norm = e.residual / denom;
    return e;
}

struct ExtractCaps {
    long long d_max = 3;
    long long p_max = 20;
};

namespace detail {

// lambda^m expanded in the basis u_i = normalized a(p^i):
// lambda u_0 = u_1, lambda u_i = u_{i+1} + u_{i-1}.
inline std::vector<QuadFloat> monomial_in_chebyshev(int m) {
    std::vector<QuadFloat> c(static_cast<size_t>(m) + 1, QuadFloat(0));
    c[0] = 1;
    for (int step = 0; step < m; ++step) {
        std::vector<QuadFloat> next(c.size(), QuadFloat(0));
        for (size_t i = 0; i + 1 < c.size(); ++i) {
            if (c[i] == 0) continue;
            next[i + 1] += c[i];
            if (i >= 1) next[i - 1] += c[i];
        }
        c = std::move(next);
    }
    return c;
}

inline double polish_root(const std::vector<double>& coef, double x) {
    // coef: monic polynomial, coef[i] multiplies x^i, coef.back() = 1
    for (int it = 0; it < 40; ++it) {
        double p = 0.0, dp = 0.0;
        for (size_t i = coef.size(); i-- > 0;) {
            dp = dp * x + p;
            p = p * x + coef[i];
        }
        if (std::abs(dp) < 1e-14) break;
        const double step = p / dp;
        x -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return x;
}

} // namespace detail

// Multiset {a_f(p)} over the newspace of dimension d: power sums of the
// normalized eigenvalues from Tr T_{p^j}, Newton's identities, then the real
// roots of the degree-d characteristic polynomial (closed forms for d <= 3
// with a Newton polish). Roots must land in [-2,2] and reproduce the traces.
inline std::vector<double> extract_eigenvalues(long long N, long long k, long long p,
                                               long long d, ExtractCaps caps = {}) {
    if (d > caps.d_max)
        throw std::invalid_argument(
            "extract_eigenvalues: dim exceeds d_max (trace indices grow like p^d; raise "
            "the cap explicitly if the cost is acceptable)");
    if (p > caps.p_max)
        throw std::invalid_argument(
            "extract_eigenvalues: p exceeds p_max (Hurwitz arguments grow like 4 p^{2d}; "
            "raise the cap explicitly if the cost is acceptable)");
    if (std::gcd(p, N) != 1)
        throw std::invalid_argument("extract_eigenvalues: p must be coprime to N");
    const long long dim = newspace_dim(N, k);
    if (dim != d)
        throw std::invalid_argument("extract_eigenvalues: newspace dimension is " +
                                    std::to_string(dim) + ", not " + std::to_string(d));
    if (d == 0) return {};

    // s[j] = sum_f a_f(p^j), normalized
    std::vector<QuadFloat> s(static_cast<size_t>(d) + 1);
    s[0] = QuadFloat(dim);
    long long pj = 1;
    for (long long j = 1; j <= d; ++j) {
        pj *= p;
        s[static_cast<size_t>(j)] =
            QuadFloat(trace_tn_new(N, k, pj)) / detail::half_power(pj, k - 1);
    }

    // monomial power sums P_m = sum_f lambda_f^m
    std::vector<QuadFloat> P(static_cast<size_t>(d) + 1);
    P[0] = QuadFloat(dim);
    for (int m = 1; m <= d; ++m) {
        const auto c = detail::monomial_in_chebyshev(m);
        QuadFloat acc = 0;
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0) acc += c[i] * s[i];
        P[static_cast<size_t>(m)] = acc;
    }

    // Newton's identities: e_m = (1/m) sum_{i=1}^{m} (-1)^{i-1} e_{m-i} P_i
    std::vector<QuadFloat> e(static_cast<size_t>(d) + 1);
    e[0] = 1;
    for (int m = 1; m <= d; ++m) {
        QuadFloat acc = 0;
        int sign = 1;
        for (int i = 1; i <= m; ++i) {
            acc += sign * e[static_cast<size_t>(m - i)] * P[static_cast<size_t>(i)];
            sign = -sign;
        }
        e[static_cast<size_t>(m)] = acc / m;
    }

    const double e1 = (d >= 1) ? e[1].convert_to<double>() : 0.0;
    const double e2 = (d >= 2) ? e[2].convert_to<double>() : 0.0;
    const double e3 = (d >= 3) ? e[3].convert_to<double>() : 0.0;

    std::vector<double> roots;
    constexpr double kClusterTol = 1e-7;
    if (d == 1) {
        roots = {e1};
    } else if (d == 2) {
        double disc = e1 * e1 - 4.0 * e2;
        if (disc < -kClusterTol)
            throw std::runtime_error("extract_eigenvalues: complex eigenvalue pair "
                                     "(Deligne bound violated; engine bug)");
        disc = std::max(disc, 0.0);
        const double rt = std::sqrt(disc);
        roots = {(e1 + rt) / 2.0, (e1 - rt) / 2.0};
    } else {
        // depressed cubic y^3 + py + q, lambda = y + e1/3
        const double sh = e1 / 3.0;
        const double pc = e2 - e1 * e1 / 3.0;
        const double qc = -2.0 * e1 * e1 * e1 / 27.0 + e1 * e2 / 3.0 - e3;
        const double discr = -4.0 * pc * pc * pc - 27.0 * qc * qc;
        if (discr < -kClusterTol)
            throw std::runtime_error("extract_eigenvalues: complex cubic roots "
                                     "(Deligne bound violated; engine bug)");
        if (pc >= -kClusterTol) {
            // triple/near-triple root
            roots = {sh, sh, sh};
        } else {
            const double m2 = 2.0 * std::sqrt(-pc / 3.0);
            double arg = 3.0 * qc / (pc * m2);
            arg = std::clamp(arg, -1.0, 1.0);
            const double phi = std::acos(arg) / 3.0;
            roots = {sh + m2 * std::cos(phi), sh + m2 * std::cos(phi - 2.0 * M_PI / 3.0),
                     sh + m2 * std::cos(phi - 4.0 * M_PI / 3.0)};
        }
    }

    // Newton polish on the monic characteristic polynomial
    std::vector<double> coef(static_cast<size_t>(d) + 1, 0.0);
    coef[static_cast<size_t>(d)] = 1.0;
    if (d >= 1) coef[static_cast<size_t>(d - 1)] = -e1;
    if (d >= 2) coef[static_cast<size_t>(d - 2)] = e2;
    if (d >= 3) coef[static_cast<size_t>(d - 3)] = -e3;
    for (double& r : roots) r = detail::polish_root(coef, r);
    std::sort(roots.begin(), roots.end(), std::greater<>());

    for (double& r : roots) {
        if (std::abs(r) > 2.0 + 1e-6)
            throw std::runtime_error(
                "extract_eigenvalues: root outside [-2,2] (Deligne bound violated)");
        r = std::clamp(r, -2.0, 2.0);
    }

    // round trip: the returned multiset must reproduce Tr T_{p^j}
    for (long long j = 1; j <= d; ++j) {
        double acc = 0.0;
        for (double r : roots)
            acc += chebyshev_eigenvalue(angle_from_eigenvalue(r), static_cast<int>(j));
        const double want = s[static_cast<size_t>(j)].convert_to<double>();
        if (std::abs(acc - want) > 1e-9 * std::max(1.0, std::abs(want)))
            throw std::runtime_error("extract_eigenvalues: trace round-trip failed");
    }
    return roots;
}

struct FamilyMoment {
    long long N = 1, k = 2;
    double mean_r2 = 0.0;
    double mean_r2_sq = 0.0;
    double variance = 0.0;
    double main_term = 0.0;  // T(g,rho)/(4L) at M = pi_N(x)
    long long forms_used = 0;
};

// Per-form R2 statistics across the whole (small) newspace. Roots at each
// prime are matched to forms through the cross trace Tr T_{p0 q}: for dim <= 3
// the permutation minimizing |sum_f a_f(p0) a_f(q) - trace| is unique up to
// root clusters, where the choice does not matter.
//
// The paper's asymptotic regime (log(k sqrt(N)/4^nu)/x -> infinity) is
// qualitative at desk scale; these exact moments feed trend reports only.
inline FamilyMoment family_moments(long long N, long long k, const PairCorrConfig& c,
                                   long long x_cap, long long p_cap, long long d_cap,
                                   ExtractCaps caps = {}) {
    const long long dim = newspace_dim(N, k);
    if (dim == 0) throw std::runtime_error("family_moments: empty family (dim 0)");
    if (dim > d_cap)
        throw std::invalid_argument("family_moments: dim " + std::to_string(dim) +
                                    " exceeds d_cap");
    PrimeWindow w = prime_window(x_cap, N);
    if (!w.primes.empty() && w.primes.back() > p_cap)
        throw std::invalid_argument(
            "family_moments: window contains primes above p_cap (trace indices grow "
            "like (p_max)^dim; raise p_cap explicitly if intended)");
    caps.d_max = std::max(caps.d_max, d_cap);
    caps.p_max = std::max(caps.p_max, p_cap);

    const size_t nforms = static_cast<size_t>(dim);
    const size_t nprimes = w.primes.size();
    std::vector<std::vector<double>> af(nforms, std::vector<double>(nprimes, 0.0));

    std::vector<double> anchor;
    for (size_t pi = 0; pi < nprimes; ++pi) {
        const long long p = w.primes[pi];
        std::vector<double> roots = extract_eigenvalues(N, k, p, dim, caps);
        if (pi == 0 || dim == 1) {
            for (size_t f = 0; f < nforms; ++f) af[f][pi] = roots[f];
            anchor = roots;
            continue;
        }
        const long long p0 = w.primes[0];
        const double cross = detail::normalized_new_trace(N, k, p0 * p);
        std::vector<size_t> perm(nforms), best(nforms);
        for (size_t i = 0; i < nforms; ++i) perm[i] = i;
        double best_err = std::numeric_limits<double>::infinity();
        do {
            double acc = 0.0;
            for (size_t f = 0; f < nforms; ++f) acc += anchor[f] * roots[perm[f]];
            const double err = std::abs(acc - cross);
            if (err < best_err) {
                best_err = err;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (best_err > 1e-6 * static_cast<double>(dim))
            throw std::runtime_error("family_moments: root-to-form matching failed");
        for (size_t f = 0; f < nforms; ++f) af[f][pi] = roots[best[f]];
    }

    std::vector<double> r2s(nforms, 0.0);
    for (size_t f = 0; f < nforms; ++f) {
        std::vector<double> angles(nprimes);
        for (size_t pi = 0; pi < nprimes; ++pi)
            angles[pi] = angle_from_eigenvalue(af[f][pi]);
        const AngleSet a = make_angle_set("family:" + std::to_string(N) + "." +
                                              std::to_string(k) + "." + std::to_string(f),
                                          w, std::move(angles));
        r2s[f] = r2_series(a, c);
    }

    FamilyMoment out;
    out.N = N;
    out.k = k;
    out.forms_used = dim;
    out.mean_r2 = pairwise_mean(r2s);
    std::vector<double> sq(r2s.size());
    for (size_t i = 0; i < r2s.size(); ++i) sq[i] = r2s[i] * r2s[i];
    out.mean_r2_sq = pairwise_mean(sq);
    out.variance = out.mean_r2_sq - out.mean_r2 * out.mean_r2;
    if (w.count() > 0) {
        const CoefficientTable t = make_coefficient_table(c.rho, c.g, c.L, w.count(), c.psi);
        out.main_term = t_g_rho(t) / (4.0 * static_cast<double>(c.L));
    }
    return out;
}

} // namespace stpc
