// Command-line surface for the pair-correlation library: every experiment in
// the verification suite is reachable as a subcommand, and every run echoes
// its merged configuration back into the report for reproducibility.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stpc/data.hpp"
#include "stpc/kernels.hpp"
#include "stpc/montecarlo.hpp"
#include "stpc/paircorr.hpp"
#include "stpc/report.hpp"
#include "stpc/rng.hpp"
#include "stpc/trace.hpp"
#include "stpc/version.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
    int threads = 1;
    std::string format = "json";
    std::string out;
    bool timing = false;
};

void write_report(const stpc::Report& r, const GlobalOpts& g) {
    const std::string body = (g.format == "csv") ? stpc::emit_csv(r) : stpc::emit_json(r);
    if (g.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(g.out, std::ios::trunc | std::ios::binary);
        if (!f) throw std::runtime_error("cannot write output file " + g.out);
        f << body;
    }
}

json global_config(const GlobalOpts& g) {
    json j;
    j["threads"] = g.threads;
    j["format"] = g.format;
    if (!g.out.empty()) j["out"] = g.out;
    return j;
}

struct PairCorrOpts {
    double psi = 0.25;
    long long L = 10;
    std::string rho = "fejer";
    std::string g = "fejer";
    double s = 1.0;
    long long series_cap = -1;
    bool straightened = false;

    stpc::PairCorrConfig build(int threads) const {
        stpc::PairCorrConfig c;
        c.psi = psi;
        c.L = L;
        c.rho = stpc::test_function_by_name(rho);
        c.g = stpc::test_function_by_name(g);
        c.s = s;
        c.series_n_cap = series_cap;
        c.threads = threads;
        c.straightened_counting = straightened;
        return c;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--psi", psi, "localization point in (0,1), != 1/2");
        cmd->add_option("--L", L, "localization scale L >= 1");
        cmd->add_option("--rho", rho, "interval test function (fejer|cosine2)");
        cmd->add_option("--g", g, "pair test function (fejer|cosine2)");
        cmd->add_option("--s", s, "counting-statistic window parameter");
        cmd->add_option("--series-cap", series_cap,
                        "cap the T3 n-sum of the series route (changes the statistic; "
                        "echoed in the report)");
        cmd->add_flag("--straightened", straightened,
                      "counting statistic on straightened angle differences");
    }

    json echo() const {
        json j;
        j["psi"] = psi;
        j["L"] = L;
        j["rho"] = rho;
        j["g"] = g;
        j["s"] = s;
        j["series_cap"] = series_cap;
        j["straightened"] = straightened;
        return j;
    }
};

std::string bigint_str(const stpc::BigInt& v) { return v.str(); }

json klm_json(const stpc::KlmDecomposition& d) {
    json j;
    j["k"] = d.k;
    j["l"] = d.l;
    j["m"] = d.m;
    j["k1"] = d.k1;
    j["k2"] = d.k2;
    j["k4"] = d.k4;
    j["l1"] = d.l1;
    j["l2"] = d.l2;
    j["l4"] = d.l4;
    j["m1"] = d.m1;
    j["m2"] = d.m2;
    j["m4"] = d.m4;
    return j;
}

int run_identities(const GlobalOpts& g, long long trials, uint64_t seed, double tol) {
    const stpc::CounterRng rng{seed};
    uint64_t ctr = 0;
    auto uni = [&] { return rng.uniform01(ctr++); };

    double worst_cosine = 0.0;
    for (long long t = 0; t < trials; ++t) {
        const double theta = uni();
        const int l = static_cast<int>(uni() * 20);
        const auto [lhs, rhs] = stpc::check_cosine_identity(theta, l);
        worst_cosine = std::max(worst_cosine, std::abs(lhs - rhs));
    }
    double worst_products = 0.0;
    for (long long t = 0; t < trials; ++t) {
        const double theta = uni();
        const int i = static_cast<int>(uni() * 20);
        const int j = static_cast<int>(uni() * 20);
        const int l = static_cast<int>(uni() * 20);
        const int n = 1 + static_cast<int>(uni() * 19);
        worst_products =
            std::max(worst_products, stpc::hecke_product_residual(theta, i, j, l, n));
    }
    double worst_mass = 0.0;
    for (long long L : {2ll, 10ll, 50ll}) {
        for (double psi : {0.1, 0.25, 0.3, 0.4}) {
            const auto table = stpc::make_coefficient_table(stpc::fejer_function(),
                                                            stpc::fejer_function(), L, 100, psi);
            const auto kern = stpc::make_kernel(stpc::fejer_function(), L);
            const auto [lhs, rhs] = stpc::mean_mass_identity(table, kern);
            worst_mass = std::max(worst_mass, std::abs(lhs - rhs));
        }
    }
    const bool ok = worst_cosine < tol && worst_products < tol && worst_mass < 1e-8;

    stpc::Report r;
    r.config = global_config(g);
    r.config["trials"] = trials;
    r.config["seed"] = seed;
    r.config["tol"] = tol;
    r.results["max_residual_cosine"] = worst_cosine;
    r.results["max_residual_hecke_products"] = worst_products;
    r.results["max_residual_mean_mass"] = worst_mass;
    r.results["pass"] = ok;
    write_report(r, g);
    return ok ? 0 : 1;
}

int run_kernel(const GlobalOpts& g, const std::string& schedule, double psi,
               const std::string& rho_name, const std::string& g_name) {
    const auto& rho = stpc::test_function_by_name(rho_name);
    const auto& gf = stpc::test_function_by_name(g_name);
    const double limit = stpc::poisson_limit(psi, gf, rho);

    json table = json::array();
    double prev = -1.0;
    bool decreasing = true;
    std::stringstream ss(schedule);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad --schedule entry '" + item +
                                        "' (expected L:M pairs like 50:1000)");
        const long long L = std::stoll(item.substr(0, colon));
        const long long M = std::stoll(item.substr(colon + 1));
        const auto t = stpc::make_coefficient_table(rho, gf, L, M, psi);
        const double t4l = stpc::t_g_rho(t) / (4.0 * static_cast<double>(L));
        const double err = std::abs(t4l - limit);
        if (prev >= 0.0 && err >= prev) decreasing = false;
        prev = err;
        json row;
        row["L"] = L;
        row["M"] = M;
        row["t_over_4l"] = t4l;
        row["abs_err"] = err;
        table.push_back(row);
    }

    stpc::Report r;
    r.config = global_config(g);
    r.config["schedule"] = schedule;
    r.config["psi"] = psi;
    r.config["rho"] = rho_name;
    r.config["g"] = g_name;
    r.results["poisson_limit"] = limit;
    r.results["table"] = table;
    r.results["error_decreasing"] = decreasing;
    write_report(r, g);
    return 0;
}

stpc::AngleSet load_form(const std::string& form, long long x) {
    if (form == "delta") {
        const auto series = stpc::delta_series(x);
        return stpc::angles_from_series(series, x);
    }
    if (form.rfind("lmfdb:", 0) == 0) {
        const std::string spec = form.substr(6);
        stpc::RemoteFormRef ref;
        if (std::sscanf(spec.c_str(), "%lld.%lld.%lld", &ref.level, &ref.weight,
                        &ref.index) != 3)
            throw std::invalid_argument("bad --form '" + form +
                                        "' (expected lmfdb:<level>.<weight>.<index>)");
        ref.count = x;
        stpc::LmfdbClient client;
        const auto series = client.fetch(ref);
        return stpc::angles_from_series(series, x);
    }
    throw std::invalid_argument("unknown --form '" + form +
                                "' (expected delta or lmfdb:<N>.<k>.<i>)");
}

int run_single(const GlobalOpts& g, const std::string& form, long long x,
               const PairCorrOpts& pc, long long klm_max, long long series_max) {
    const stpc::PairCorrConfig c = pc.build(g.threads);
    const stpc::AngleSet a = load_form(form, x);
    const long long n = a.window.count();
    if (n == 0) std::cerr << "warning: empty prime window, statistics are all zero\n";

    stpc::Report r;
    r.config = global_config(g);
    r.config["form"] = form;
    r.config["x"] = x;
    r.config.update(pc.echo());
    r.config["klm_max_primes"] = klm_max;
    r.config["series_max_primes"] = series_max;

    r.results["label"] = a.label;
    r.results["pi_n_x"] = n;
    const double r2 = stpc::r2_smooth(a, c);
    r.results["r2"] = r2;

    bool ok = true;
    const bool do_series = n <= series_max || c.series_n_cap >= 0;
    if (do_series) {
        const double r2s = stpc::r2_series(a, c);
        r.results["r2_series"] = r2s;
        if (c.series_n_cap < 0) {
            const double rel = std::abs(r2 - r2s) / std::max(1e-30, std::abs(r2s));
            r.results["route_rel_err"] = rel;
            ok = ok && rel < 1e-9;
        }
    } else {
        r.results["r2_series"] = nullptr;
        r.results["r2_series_skipped"] =
            "window too large for the uncapped series route; set --series-cap";
    }
    if (n <= klm_max) {
        const auto d = stpc::klm_decomposition(a, c);
        r.results["klm"] = klm_json(d);
        if (do_series && c.series_n_cap < 0) {
            const double r2s = r.results["r2_series"].get<double>();
            const double rel =
                std::abs(d.total() - r2s * r2s) / std::max(1e-30, r2s * r2s);
            r.results["klm_rel_err"] = rel;
            ok = ok && rel < 1e-9;
        }
    }
    if (auto rc = stpc::r_counting(a, c))
        r.results["r_counting"] = *rc;
    else
        r.results["r_counting"] = nullptr;

    const long long lc_psi = stpc::local_count(a, c.psi, c.L);
    const long long lc_mirror = stpc::local_count(a, 1.0 - c.psi, c.L);
    r.results["local_count"] = lc_psi + lc_mirror;
    r.results["local_count_psi"] = lc_psi;
    r.results["local_count_mirror"] = lc_mirror;

    const auto nr = stpc::n_rho_statistic(a, c);
    r.results["n_rho"]["direct"] = nr.direct_norm;
    r.results["n_rho"]["mass"] = nr.mass;
    r.results["n_rho"]["series"] = nr.series_norm;
    r.results["n_rho"]["deviation"] = std::abs(nr.direct_norm - nr.mass);

    for (long long l : {1ll, 2ll, 3ll}) {
        const auto ps = stpc::power_sum_diagnostic(a, l);
        json pj;
        pj["sum"] = ps.sum;
        pj["per_prime"] = ps.per_prime;
        pj["per_sqrtx_logx"] = ps.per_sqrtx_logx;
        r.results["power_sums"][std::to_string(l)] = pj;
    }

    if (n >= 1) {
        const auto table = stpc::make_coefficient_table(c.rho, c.g, c.L, n, c.psi);
        r.results["main_term"] = stpc::t_g_rho(table) / (4.0 * static_cast<double>(c.L));
    }
    r.results["poisson_limit"] = stpc::poisson_limit(c.psi, c.g, c.rho);
    r.results["pass"] = ok;
    write_report(r, g);
    return ok ? 0 : 1;
}

int run_family(const GlobalOpts& g, const std::string& op, long long level, long long weight,
               long long n, const PairCorrOpts& pc, long long x_cap, long long p_cap,
               long long d_cap) {
    stpc::Report r;
    r.config = global_config(g);
    r.config["op"] = op;
    r.config["level"] = level;
    r.config["weight"] = weight;
    bool ok = true;
    if (op == "avg") {
        r.config["n"] = n;
        r.results["family_avg"] = stpc::family_avg(level, weight, n);
        r.results["dim"] = stpc::newspace_dim(level, weight);
    } else if (op == "estimate") {
        r.config["n"] = n;
        const auto e = stpc::check_trace_estimate(level, weight, n);
        r.results["dim"] = e.dim;
        r.results["sum_af"] = e.sum_af;
        r.results["main_term"] = e.main_term;
        r.results["residual"] = e.residual;
        r.results["residual_norm"] = e.residual_norm;
    } else if (op == "moments") {
        r.config.update(pc.echo());
        r.config["x_cap"] = x_cap;
        r.config["p_cap"] = p_cap;
        r.config["d_cap"] = d_cap;
        const auto m =
            stpc::family_moments(level, weight, pc.build(g.threads), x_cap, p_cap, d_cap);
        r.results["forms_used"] = m.forms_used;
        r.results["mean_r2"] = m.mean_r2;
        r.results["mean_r2_sq"] = m.mean_r2_sq;
        r.results["variance"] = m.variance;
        r.results["main_term"] = m.main_term;
        ok = m.variance >= -1e-9;
        r.results["variance_nonnegative"] = ok;
    } else {
        throw std::invalid_argument("unknown --op '" + op +
                                    "' (expected avg, estimate or moments)");
    }
    r.results["pass"] = ok;
    write_report(r, g);
    return ok ? 0 : 1;
}

int run_mc(const GlobalOpts& g, const std::string& experiment, long long nn, uint64_t seed,
           long long trials, const std::string& sizes_str, long long forms,
           const std::string& model, const PairCorrOpts& pc) {
    stpc::Report r;
    r.config = global_config(g);
    r.config["experiment"] = experiment;
    r.config["seed"] = seed;
    bool ok = true;
    if (experiment == "poisson") {
        r.config["n"] = nn;
        r.config["trials"] = trials;
        r.config.update(pc.echo());
        stpc::SampleConfig sc;
        sc.n = nn;
        sc.seed = seed;
        const auto t = stpc::poisson_expectation_experiment(pc.build(g.threads), sc, trials);
        r.results["mean"] = t.mean;
        r.results["stderr"] = t.stderr_mean;
        r.results["target"] = t.target;
        r.results["within_3_stderr"] = std::abs(t.mean - t.target) <= 3.0 * t.stderr_mean;
    } else if (experiment == "variance") {
        r.config["forms_per_size"] = forms;
        r.config["sizes"] = sizes_str;
        r.config.update(pc.echo());
        std::vector<long long> sizes;
        std::stringstream ss(sizes_str);
        std::string item;
        while (std::getline(ss, item, ',')) sizes.push_back(std::stoll(item));
        const auto rows = stpc::variance_trend_experiment(pc.build(g.threads), sizes, forms, seed);
        json table = json::array();
        for (auto [size, var] : rows) {
            json row;
            row["size"] = size;
            row["variance"] = var;
            table.push_back(row);
        }
        r.results["table"] = table;
        r.results["decreasing"] = rows.size() < 2 || rows.back().second < rows.front().second;
    } else if (experiment == "sample") {
        r.config["n"] = nn;
        r.config["model"] = model;
        stpc::SampleConfig sc;
        sc.n = nn;
        sc.seed = seed;
        sc.model = stpc::sample_model_by_name(model);
        const auto a = stpc::sample_angles(sc);
        std::vector<double> u(a.angles.size());
        for (size_t i = 0; i < u.size(); ++i)
            u[i] = (sc.model == stpc::SampleModel::kSatoTate) ? stpc::straighten(a.angles[i])
                                                              : a.angles[i];
        std::sort(u.begin(), u.end());
        double ks = 0.0;
        for (size_t i = 0; i < u.size(); ++i) {
            const double f_lo = static_cast<double>(i) / u.size();
            const double f_hi = static_cast<double>(i + 1) / u.size();
            ks = std::max({ks, std::abs(u[i] - f_lo), std::abs(u[i] - f_hi)});
        }
        r.results["ks_distance"] = ks;
        r.results["ks_threshold_1pct"] = 1.63 / std::sqrt(static_cast<double>(nn));
        r.results["uniform_after_straightening"] =
            ks < 1.63 / std::sqrt(static_cast<double>(nn));
    } else {
        throw std::invalid_argument("unknown --experiment '" + experiment +
                                    "' (expected poisson, variance or sample)");
    }
    r.results["pass"] = ok;
    write_report(r, g);
    return ok ? 0 : 1;
}

int run_trace(const GlobalOpts& g, long long level, long long weight, long long n) {
    stpc::Report r;
    r.config = global_config(g);
    r.config["level"] = level;
    r.config["weight"] = weight;
    r.config["n"] = n;
    r.results["trace_full"] = bigint_str(stpc::trace_tn_full(level, weight, n));
    r.results["trace_new"] = bigint_str(stpc::trace_tn_new(level, weight, n));
    write_report(r, g);
    return 0;
}

int run_dims(const GlobalOpts& g, long long level, long long weight) {
    stpc::Report r;
    r.config = global_config(g);
    r.config["level"] = level;
    r.config["weight"] = weight;
    const auto s = stpc::b1_and_dims(level, weight);
    r.results["dim"] = s.dim;
    {
        std::ostringstream b1;
        b1 << s.b1;
        r.results["b1"] = b1.str();
    }
    r.results["main_term"] = static_cast<double>(s.main_term.convert_to<double>());
    r.results["bound"] = s.bound_value;
    r.results["nu"] = s.nu;
    r.results["bound_holds"] = s.bound_holds;
    write_report(r, g);
    return s.bound_holds ? 0 : 1;
}

int run_fetch(const GlobalOpts& g, long long level, long long weight, long long index,
              long long count) {
    stpc::LmfdbClient client;
    stpc::RemoteFormRef ref;
    ref.level = level;
    ref.weight = weight;
    ref.index = index;
    ref.count = count;
    const auto s = client.fetch(ref);
    stpc::Report r;
    r.config = global_config(g);
    r.config["level"] = level;
    r.config["weight"] = weight;
    r.config["index"] = index;
    r.config["count"] = count;
    r.config["base_url"] = client.base_url();
    r.results["label"] = s.label;
    r.results["n_max"] = s.n_max;
    r.results["cache_path"] = client.cache_path(ref);
    r.results["network_calls"] = client.stats().network_calls;
    r.results["cache_hits"] = client.stats().cache_hits;
    r.results["a2"] = s.n_max >= 2 ? s.at(2).str() : "";
    write_report(r, g);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"local pair correlation statistics of Hecke angles"};
    app.set_config("--config", "", "flat key=value config file (dotted keys or [sections] "
                                   "for subcommands); flags override config values");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--threads", g.threads, "worker threads; 1 guarantees bit-exact output");
    app.add_option("--format", g.format, "report format (json|csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", g.out, "write the report to a file instead of stdout");
    app.add_flag("--timing", g.timing, "print wall-clock to stderr (never in the report)");
    std::string hurwitz_cache;
    app.add_option("--hurwitz-cache", hurwitz_cache,
                   "Hurwitz table file ('# hurwitz12 v1' format); loaded before the run "
                   "when present, rewritten afterwards");
    long long hurwitz_warm = 0;
    app.add_option("--hurwitz-warm", hurwitz_warm,
                   "densely precompute 12H(n) up to this bound before the run");

    // identities
    auto* c_id = app.add_subcommand("identities", "randomized eigenvalue-identity suites");
    long long id_trials = 1000;
    uint64_t id_seed = 42;
    double id_tol = 1e-9;
    c_id->add_option("--trials", id_trials, "randomized cases per suite");
    c_id->add_option("--seed", id_seed, "RNG seed");
    c_id->add_option("--tol", id_tol, "max residual accepted");

    // kernel
    auto* c_k = app.add_subcommand("kernel", "T(g,rho)/4L vs Poisson-limit convergence table");
    std::string k_schedule = "50:1000,100:10000,200:100000,400:1000000";
    double k_psi = 0.25;
    std::string k_rho = "fejer", k_g = "fejer";
    c_k->add_option("--schedule", k_schedule, "comma list of L:M pairs");
    c_k->add_option("--psi", k_psi, "localization point");
    c_k->add_option("--rho", k_rho, "interval test function");
    c_k->add_option("--g", k_g, "pair test function");

    // single
    auto* c_s = app.add_subcommand("single", "per-form pair correlation report");
    std::string s_form = "delta";
    long long s_x = 1000, s_klm_max = 400, s_series_max = 2500;
    PairCorrOpts s_pc;
    c_s->add_option("--form", s_form, "delta or lmfdb:<level>.<weight>.<index>");
    c_s->add_option("--x", s_x, "prime cutoff");
    s_pc.attach(c_s);
    c_s->add_option("--klm-max-primes", s_klm_max, "skip the K/L/M split above this window size");
    c_s->add_option("--series-max-primes", s_series_max,
                    "skip the uncapped series route above this window size");

    // family
    auto* c_f = app.add_subcommand("family", "trace-formula family statistics");
    std::string f_op = "moments";
    long long f_level = 1, f_weight = 12, f_n = 1, f_xcap = 20, f_pcap = 20, f_dcap = 3;
    PairCorrOpts f_pc;
    c_f->add_option("--op", f_op, "avg | estimate | moments");
    c_f->add_option("--level", f_level, "level N");
    c_f->add_option("--weight", f_weight, "even weight k");
    c_f->add_option("--n", f_n, "Hecke index for avg/estimate");
    c_f->add_option("--x-cap", f_xcap, "prime window cutoff for moments");
    c_f->add_option("--p-cap", f_pcap, "largest prime allowed in the window");
    c_f->add_option("--d-cap", f_dcap, "largest newspace dimension allowed");
    f_pc.attach(c_f);

    // mc
    auto* c_m = app.add_subcommand("mc", "Monte Carlo oracles");
    std::string m_exp = "poisson", m_sizes = "100,10000", m_model = "sato_tate";
    long long m_n = 10000, m_trials = 100, m_forms = 200;
    uint64_t m_seed = 42;
    PairCorrOpts m_pc;
    m_pc.L = 50;
    c_m->add_option("--experiment", m_exp, "poisson | variance | sample");
    c_m->add_option("--n", m_n, "sample size");
    c_m->add_option("--trials", m_trials, "trials (poisson experiment)");
    c_m->add_option("--sizes", m_sizes, "comma list of sizes (variance experiment)");
    c_m->add_option("--forms", m_forms, "forms per size (variance experiment)");
    c_m->add_option("--model", m_model, "sato_tate | uniform (sample experiment)");
    c_m->add_option("--seed", m_seed, "RNG seed");
    m_pc.attach(c_m);

    // trace / dims
    auto* c_t = app.add_subcommand("trace", "exact Tr T_n on S_k(Gamma0(N)) and its newspace");
    long long t_level = 1, t_weight = 12, t_n = 1;
    c_t->add_option("--level", t_level, "level N");
    c_t->add_option("--weight", t_weight, "even weight k");
    c_t->add_option("--n", t_n, "Hecke index, coprime to N");

    auto* c_d = app.add_subcommand("dims", "newspace dimension and its B1(N) bound");
    long long d_level = 1, d_weight = 12;
    c_d->add_option("--level", d_level, "level N");
    c_d->add_option("--weight", d_weight, "even weight k");

    // fetch
    auto* c_fetch = app.add_subcommand("fetch", "fetch newform coefficients into the cache");
    long long fe_level = 11, fe_weight = 2, fe_index = 1, fe_count = 100;
    c_fetch->add_option("--level", fe_level, "level N");
    c_fetch->add_option("--weight", fe_weight, "even weight k");
    c_fetch->add_option("--index", fe_index, "1-based orbit index");
    c_fetch->add_option("--count", fe_count, "number of coefficients");

    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (!hurwitz_cache.empty() && std::filesystem::exists(hurwitz_cache))
            stpc::HurwitzCache::instance().load(hurwitz_cache);
        if (hurwitz_warm > 0) stpc::HurwitzCache::instance().warm(hurwitz_warm);
        if (*c_id) rc = run_identities(g, id_trials, id_seed, id_tol);
        else if (*c_k) rc = run_kernel(g, k_schedule, k_psi, k_rho, k_g);
        else if (*c_s) rc = run_single(g, s_form, s_x, s_pc, s_klm_max, s_series_max);
        else if (*c_f) rc = run_family(g, f_op, f_level, f_weight, f_n, f_pc, f_xcap, f_pcap, f_dcap);
        else if (*c_m) rc = run_mc(g, m_exp, m_n, m_seed, m_trials, m_sizes, m_forms, m_model, m_pc);
        else if (*c_t) rc = run_trace(g, t_level, t_weight, t_n);
        else if (*c_d) rc = run_dims(g, d_level, d_weight);
        else if (*c_fetch) rc = run_fetch(g, fe_level, fe_weight, fe_index, fe_count);
        if (!hurwitz_cache.empty()) {
            // a saved table is always a valid dense table
            if (stpc::HurwitzCache::instance().dense_limit() < 1024)
                stpc::HurwitzCache::instance().warm(1024);
            stpc::HurwitzCache::instance().save(hurwitz_cache);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what()
                  << "\nhint: run with --help for valid parameter ranges\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (g.timing) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::cerr << "wall_ms=" << ms << "\n";
    }
    return rc;
}
