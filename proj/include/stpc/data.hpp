#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "stpc/arith.hpp"
#include "stpc/paircorr.hpp"

namespace stpc {

// Unnormalized Hecke eigenvalues a(n), exact integers, 1-indexed.
struct CoefficientSeries {
    std::string label;
    long long k = 0;
    long long N = 1;
    long long n_max = 0;
    std::vector<boost::multiprecision::cpp_int> a;  // a[0] unused

    const boost::multiprecision::cpp_int& at(long long n) const {
        if (n < 1 || n > n_max)
            throw std::out_of_range("CoefficientSeries: index outside [1, n_max]");
        return a[static_cast<size_t>(n)];
    }
};

namespace detail {

inline void checked_add(__int128& dst, __int128 v) {
    __int128 out;
    if (__builtin_add_overflow(dst, v, &out))
        throw std::overflow_error("eta expansion: 128-bit overflow");
    dst = out;
}

inline __int128 checked_mul(__int128 a, long long b) {
    __int128 out;
    if (__builtin_mul_overflow(a, static_cast<__int128>(b), &out))
        throw std::overflow_error("eta expansion: 128-bit overflow");
    return out;
}

inline boost::multiprecision::cpp_int int128_to_cpp(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u =
        neg ? ~static_cast<unsigned __int128>(v) + 1 : static_cast<unsigned __int128>(v);
    boost::multiprecision::cpp_int out = static_cast<uint64_t>(u >> 64);
    out <<= 64;
    out += static_cast<uint64_t>(u);
    return neg ? -out : out;
}

} // namespace detail

// tau-coefficients: q prod (1-q^n)^24 through eight sparse convolutions with
// the eta^3 series sum_m (-1)^m (2m+1) q^{m(m+1)/2} (Jacobi).
inline CoefficientSeries delta_series(long long n_max) {
    if (n_max < 1) throw std::invalid_argument("delta_series: n_max >= 1 required");
    std::vector<std::pair<long long, long long>> eta3;  // (offset, weight)
    for (long long m = 0;; ++m) {
        const long long off = m * (m + 1) / 2;
        if (off > n_max - 1) break;
        eta3.emplace_back(off, (m % 2 == 0 ? 1 : -1) * (2 * m + 1));
    }
    std::vector<__int128> cur(static_cast<size_t>(n_max), 0);
    cur[0] = 1;
    std::vector<__int128> next(static_cast<size_t>(n_max), 0);
    for (int pass = 0; pass < 8; ++pass) {
        std::fill(next.begin(), next.end(), static_cast<__int128>(0));
        for (auto [off, w] : eta3) {
            for (long long i = 0; i + off < n_max; ++i) {
                if (cur[static_cast<size_t>(i)] == 0) continue;
                detail::checked_add(next[static_cast<size_t>(i + off)],
                                    detail::checked_mul(cur[static_cast<size_t>(i)], w));
            }
        }
        cur.swap(next);
    }
    CoefficientSeries s;
    s.label = "delta";
    s.k = 12;
    s.N = 1;
    s.n_max = n_max;
    s.a.resize(static_cast<size_t>(n_max) + 1);
    for (long long n = 1; n <= n_max; ++n)
        s.a[static_cast<size_t>(n)] = detail::int128_to_cpp(cur[static_cast<size_t>(n - 1)]);
    return s;
}

// theta_p = angle of a(p)/p^{(k-1)/2} for p <= x coprime to the level; the
// division runs in 113-bit floats before the acos. A Deligne violation after
// the rounding slack aborts (data corruption signal).
inline AngleSet angles_from_series(const CoefficientSeries& s, long long x) {
    PrimeWindow w = prime_window(x, s.N);
    if (!w.primes.empty() && w.primes.back() > s.n_max)
        throw std::invalid_argument("angles_from_series: x exceeds the series range");
    using QF = boost::multiprecision::cpp_bin_float_quad;
    std::vector<double> angles(w.primes.size());
    for (size_t i = 0; i < w.primes.size(); ++i) {
        const long long p = w.primes[i];
        const QF norm = QF(s.at(p)) /
                        exp(log(QF(p)) * QF(s.k - 1) / 2);
        angles[i] = angle_from_eigenvalue(norm.convert_to<double>());
    }
    return make_angle_set(s.label, std::move(w), std::move(angles));
}

// ---------------------------------------------------------------------------
// checksummed cache entries (write-temp-then-rename)
// ---------------------------------------------------------------------------

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failure");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

// Payloads are text (the remote API speaks JSON); entries are versioned and
// checksummed, and land via temp-file + rename so readers never see a torn
// entry.
inline void write_cache_entry(const std::string& path, const std::string& payload) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    nlohmann::json j;
    j["schema"] = "stpc-cache/1";
    j["sha256"] = sha256_hex(payload);
    j["payload"] = payload;
    const std::string body = j.dump();
    const fs::path tmp = p.parent_path() / (p.filename().string() + ".tmp." +
                                            std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
        out << body;
    }
    fs::rename(tmp, p);
}

// nullopt when absent. A corrupt entry (bad json, schema, or checksum) is
// quarantined to <path>.corrupt and reported absent so callers recompute.
inline std::optional<std::string> read_cache_entry(const std::string& path) {
    namespace fs = std::filesystem;
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string body = ss.str();
    try {
        const nlohmann::json j = nlohmann::json::parse(body);
        if (j.at("schema") != "stpc-cache/1") throw std::runtime_error("schema");
        const std::string payload = j.at("payload").get<std::string>();
        if (j.at("sha256") != sha256_hex(payload)) throw std::runtime_error("checksum");
        return payload;
    } catch (const std::exception&) {
        std::error_code ec;
        fs::rename(path, path + ".corrupt", ec);
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// remote newform coefficients
// ---------------------------------------------------------------------------

struct RemoteFormRef {
    long long level = 1;
    long long weight = 12;
    long long index = 1;  // 1-based orbit index in label order
    long long count = 100;
};

struct FetchStats {
    long long network_calls = 0;
    long long cache_hits = 0;
};

// Client for a classical-modular-forms JSON API (LMFDB-compatible layout:
// data[] objects carrying label/dim/traces). Raw response bodies are cached
// pre-parse so upstream schema drift never corrupts stored results; cache
// hits never touch the network. v1 restriction: trace data is only a
// q-expansion when the orbit has dimension 1, and coefficients must fit the
// JSON integer range.
class LmfdbClient {
  public:
    LmfdbClient();
    LmfdbClient(std::string base_url, std::string cache_dir)
        : base_url_(std::move(base_url)), cache_dir_(std::move(cache_dir)) {}

    const std::string& base_url() const { return base_url_; }
    const std::string& cache_dir() const { return cache_dir_; }
    const FetchStats& stats() const { return stats_; }

    std::string cache_path(const RemoteFormRef& r) const {
        std::ostringstream os;
        os << cache_dir_ << "/lmfdb/" << r.level << "." << r.weight << "." << r.index << "."
           << r.count << ".json";
        return os.str();
    }

    std::string query_path(const RemoteFormRef& r) const {
        std::ostringstream os;
        os << "/api/mf_newforms/?level=i" << r.level << "&weight=i" << r.weight
           << "&char_order=i1&_format=json&_fields=label,level,weight,dim,traces"
           << "&_sort=label";
        return os.str();
    }

    CoefficientSeries fetch(const RemoteFormRef& r) {
        const std::string path = cache_path(r);
        if (auto cached = read_cache_entry(path)) {
            ++stats_.cache_hits;
            return parse_payload(*cached, r);
        }
        const std::string body = http_get(query_path(r));
        CoefficientSeries s = parse_payload(body, r);  // validate before caching
        write_cache_entry(path, body);
        return s;
    }

    CoefficientSeries parse_payload(const std::string& body, const RemoteFormRef& r) const {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("lmfdb: response is not JSON: ") + e.what());
        }
        if (!j.contains("data"))
            throw std::runtime_error("lmfdb: schema mismatch, missing field 'data'");
        const auto& data = j["data"];
        if (!data.is_array() || static_cast<long long>(data.size()) < r.index)
            throw std::runtime_error("lmfdb: no orbit with index " +
                                     std::to_string(r.index) + " at this level/weight");
        const auto& form = data[static_cast<size_t>(r.index - 1)];
        for (const char* field : {"dim", "traces", "label"})
            if (!form.contains(field))
                throw std::runtime_error(std::string("lmfdb: schema mismatch, missing field '") +
                                         field + "'");
        if (form["dim"].get<long long>() != 1)
            throw std::runtime_error(
                "lmfdb: orbit dimension > 1; traces are not a q-expansion (v1 supports "
                "dimension-1 orbits only)");
        const auto& traces = form["traces"];
        if (!traces.is_array() || static_cast<long long>(traces.size()) < r.count)
            throw std::runtime_error("lmfdb: fewer than the requested " +
                                     std::to_string(r.count) + " coefficients");
        CoefficientSeries s;
        s.label = form["label"].get<std::string>();
        s.N = r.level;
        s.k = r.weight;
        s.n_max = r.count;
        s.a.resize(static_cast<size_t>(r.count) + 1);
        for (long long n = 1; n <= r.count; ++n) {
            const auto& v = traces[static_cast<size_t>(n - 1)];
            if (!v.is_number_integer())
                throw std::runtime_error("lmfdb: schema mismatch, field 'traces' entry " +
                                         std::to_string(n) + " is not an exact integer");
            s.a[static_cast<size_t>(n)] = boost::multiprecision::cpp_int(v.get<long long>());
        }
        if (s.a[1] != 1) throw std::runtime_error("lmfdb: a(1) != 1, rejecting payload");
        validate_deligne(s);
        return s;
    }

  private:
    static void validate_deligne(const CoefficientSeries& s) {
        using boost::multiprecision::cpp_int;
        for (long long p : prime_window(s.n_max, s.N).primes) {
            cpp_int pk = 1;
            for (long long i = 0; i < s.k - 1; ++i) pk *= p;
            // |a_p|^2 <= 4 p^{k-1}, exact
            if (s.at(p) * s.at(p) > 4 * pk)
                throw std::runtime_error("lmfdb: Deligne bound violated at p = " +
                                         std::to_string(p));
        }
    }

    std::string http_get(const std::string& path);

    std::string base_url_;
    std::string cache_dir_;
    FetchStats stats_;
};

} // namespace stpc

// httplib pulls in OpenSSL; keep it at the end of the header and behind the
// class so only translation units using the client pay for it.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace stpc {

inline LmfdbClient::LmfdbClient() {
    const char* base = std::getenv("STPC_LMFDB_BASE");
    base_url_ = base ? base : "https://www.lmfdb.org";
    const char* cache = std::getenv("STPC_CACHE_DIR");
    cache_dir_ = cache ? cache : "cache";
}

inline std::string LmfdbClient::http_get(const std::string& path) {
    httplib::Client cli(base_url_);  // handles http:// and https:// URLs
    cli.set_connection_timeout(20, 0);
    cli.set_read_timeout(60, 0);
    cli.set_follow_location(true);
    auto res = cli.Get(path.c_str());
    if (!res)
        throw std::runtime_error("lmfdb: network failure and no cached copy (" +
                                 httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw std::runtime_error("lmfdb: HTTP status " + std::to_string(res->status));
    ++stats_.network_calls;
    return res->body;
}

} // namespace stpc
