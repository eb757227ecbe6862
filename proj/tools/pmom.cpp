#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pmom/digit.hpp"
#include "pmom/elliptic.hpp"
#include "pmom/hor_l.hpp"
#include "pmom/moments.hpp"
#include "pmom/verify.hpp"

using json = nlohmann::ordered_json;

namespace {

// exit codes: 0 ok, 2 config, 3 reconstruction, 4 identity check, 5 property suite
constexpr int kExitConfig = 2;
constexpr int kExitReconstruction = 3;
constexpr int kExitIdentity = 4;
constexpr int kExitSuite = 5;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

pmom::CurveConfig load_curve(const std::string& spec) {
    if (spec == "11a1") return pmom::curve_11a1();
    if (spec == "37a1") return pmom::curve_37a1();
    return pmom::CurveConfig::from_json(slurp(spec));
}

std::string default_cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("PMOM_CACHE_DIR");
    return env ? env : "";
}

void emit(const std::string& text, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream o(out_file);
        o << text << "\n";
    }
}

std::vector<long> parse_longs(const std::vector<std::string>& v) {
    std::vector<long> out;
    for (const auto& s : v) out.push_back(std::stol(s));
    return out;
}

int cmd_tw_scan(const std::string& curve_spec, long p, long bound, const std::string& format,
                const std::string& out_file) {
    pmom::EllipticCurve E(load_curve(curve_spec));
    json rows = json::array();
    std::ostringstream csv;
    csv << "ell,m,a_ell,status\n";
    long total = 0, tw = 0;
    std::vector<long> usable;
    for (long ell = 2; ell <= bound; ++ell) {
        bool prime = ell >= 2;
        for (long d = 2; d * d <= ell; ++d)
            if (ell % d == 0) { prime = false; break; }
        if (!prime || ell % p != 1) continue;
        ++total;
        long m = 0, t = ell - 1;
        while (t % p == 0) { t /= p; ++m; }
        std::string status;
        long a = 0;
        if (E.conductor() % ell == 0) {
            status = "divides-conductor";
        } else {
            a = E.ap(ell);
            if (E.is_taylor_wiles(p, ell)) {
                status = "taylor-wiles";
                ++tw;
                usable.push_back(ell);
            } else {
                status = "non-taylor-wiles";
            }
        }
        rows.push_back({{"ell", ell}, {"m", m}, {"a_ell", a}, {"status", status}});
        csv << ell << "," << m << "," << a << "," << status << "\n";
    }
    json doc;
    doc["curve"] = E.config().label;
    doc["p"] = p;
    doc["bound"] = bound;
    doc["candidates"] = total;
    doc["taylor_wiles"] = tw;
    doc["fraction"] = total ? json(std::to_string(tw) + "/" + std::to_string(total)) : json("0/0");
    doc["first_usable"] = usable;
    doc["rows"] = std::move(rows);
    emit(format == "csv" ? csv.str() : doc.dump(2), out_file);
    return 0;
}

struct MomentArgs {
    std::string config_path;
    std::vector<std::string> curves;
    long p = 3;
    std::vector<std::string> primes, generators, levels;
    int r = 0;
    unsigned m = 1;
    int digits = 12;
    std::string den_bound = "0";
    std::string cache, format = "json", out_file;
    bool synthetic = false;
    long mu = 0, lambda = 0, e = 1;
    unsigned factors = 4;
    uint64_t seed = 1;
};

int cmd_moment_run(const MomentArgs& a) {
    if (a.synthetic) {
        pmom::SyntheticRunConfig cfg;
        cfg.p = a.p;
        cfg.m = a.m;
        cfg.factors = a.factors;
        cfg.mu = a.mu;
        cfg.lambda = a.lambda;
        cfg.e = a.e;
        cfg.seed = a.seed;
        for (const auto& s : a.levels) cfg.levels.push_back(static_cast<unsigned>(std::stoul(s)));
        pmom::SyntheticRunResult res = pmom::run_synthetic_moments(cfg);
        emit(res.json, a.out_file);
        return res.all_identities_ok ? 0 : kExitIdentity;
    }
    pmom::ArithmeticRunConfig cfg;
    if (!a.config_path.empty()) {
        json j = json::parse(slurp(a.config_path));
        for (const auto& c : j.value("curves", std::vector<std::string>{}))
            cfg.curves.push_back(load_curve(c));
        if (j.contains("curve_objects"))
            for (const auto& co : j.at("curve_objects"))
                cfg.curves.push_back(pmom::CurveConfig::from_json(co.dump()));
        cfg.p = j.at("p").get<long>();
        cfg.primes = j.at("primes").get<std::vector<long>>();
        if (j.contains("generators")) cfg.generators = j.at("generators").get<std::vector<long>>();
        cfg.r = j.value("r", 0);
        cfg.levels = j.at("levels").get<std::vector<unsigned>>();
        cfg.m = j.value("m", 1u);
        cfg.digits = j.value("digits", 12);
        cfg.den_bound = pmom::Int(j.value("denominator_bound", std::string("0")));
        cfg.cache_dir = default_cache_dir(j.value("cache_dir", std::string()));
    } else {
        for (const auto& c : a.curves) cfg.curves.push_back(load_curve(c));
        cfg.p = a.p;
        cfg.primes = parse_longs(a.primes);
        cfg.generators = parse_longs(a.generators);
        cfg.r = a.r;
        for (const auto& s : a.levels) cfg.levels.push_back(static_cast<unsigned>(std::stoul(s)));
        cfg.m = a.m;
        cfg.digits = a.digits;
        cfg.den_bound = pmom::Int(a.den_bound);
        cfg.cache_dir = default_cache_dir(a.cache);
    }
    if (cfg.curves.empty() || cfg.levels.empty())
        throw CLI::ValidationError("moment-run", "need at least one curve and one level");
    pmom::ArithmeticRunResult res = pmom::run_arithmetic_moments(cfg);
    if (a.format == "csv") {
        std::ostringstream csv;
        csv << "n,valuation,identity_ok,predicted\n";
        for (const auto& r : res.reports)
            csv << r.n << "," << r.valuation.str() << "," << (r.identity_ok ? 1 : 0) << ","
                << (r.predicted_valuation ? r.predicted_valuation->get_str() : "") << "\n";
        emit(csv.str(), a.out_file);
    } else {
        emit(res.json, a.out_file);
    }
    return res.all_identities_ok ? 0 : kExitIdentity;
}

int cmd_kurihara_search(const std::string& curve_spec, long p, long bound, int digits,
                        bool run_moments, bool hypotheses_met, const std::string& out_file) {
    pmom::EllipticCurve E(load_curve(curve_spec));
    pmom::LstarOptions opt;
    opt.digits = digits;
    json doc;
    doc["curve"] = E.config().label;
    doc["p"] = p;
    doc["bound"] = bound;
    doc["hypotheses_met"] = hypotheses_met;
    if (!hypotheses_met)
        doc["note"] = "rank-1/ordinary hypotheses not asserted by the user; "
                      "search results are unconditional data";
    json scanned = json::array();
    long witness = 0, wgen = 0;
    for (long q1 = 2; q1 <= bound && witness == 0; ++q1) {
        bool prime = q1 >= 2;
        for (long d = 2; d * d <= q1; ++d)
            if (q1 % d == 0) { prime = false; break; }
        if (!prime || (q1 - 1) % p != 0 || E.conductor() % q1 == 0 || q1 == p) continue;
        long g = pmom::smallest_primitive_root(q1);
        pmom::KuriharaResult kr = pmom::kurihara_check(E, p, q1, g, opt);
        scanned.push_back({{"q1", q1},
                           {"generator", g},
                           {"sum", kr.sum.get_str()},
                           {"nonvanishing", kr.nonvanishing}});
        if (kr.nonvanishing) { witness = q1; wgen = g; }
    }
    doc["scanned"] = std::move(scanned);
    doc["witness"] = witness;
    if (witness && run_moments) {
        // append two Taylor-Wiles primes with m = 1 and fit the invariants
        std::vector<long> primes{witness};
        for (long ell = 2; primes.size() < 3; ++ell) {
            bool prime = ell >= 2;
            for (long d = 2; d * d <= ell; ++d)
                if (ell % d == 0) { prime = false; break; }
            if (!prime || ell % p != 1 || ell == witness || E.conductor() % ell == 0) continue;
            if ((ell - 1) % (p * p) == 0) continue;  // keep m = 1
            if (E.is_taylor_wiles(p, ell)) primes.push_back(ell);
        }
        pmom::ArithmeticRunConfig cfg;
        cfg.curves = {E.config()};
        cfg.p = p;
        cfg.primes = primes;
        cfg.r = 1;
        cfg.levels = {2, 3};
        cfg.digits = digits;
        pmom::ArithmeticRunResult res = pmom::run_arithmetic_moments(cfg);
        doc["moment_run"] = json::parse(res.json);
        (void)wgen;
    }
    emit(doc.dump(2), out_file);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact p-adic moments of twisted L-values"};
    app.require_subcommand(1);

    // tw-scan
    auto* tw = app.add_subcommand("tw-scan", "classify Taylor-Wiles primes up to a bound");
    std::string tw_curve = "11a1", tw_format = "json", tw_out;
    long tw_p = 3, tw_bound = 100;
    tw->add_option("--curve", tw_curve, "curve label (11a1, 37a1) or config path");
    tw->add_option("--p", tw_p, "the prime p")->required();
    tw->add_option("--bound", tw_bound, "scan primes up to this bound")->required();
    tw->add_option("--out", tw_format, "output format: json or csv");
    tw->add_option("--out-file", tw_out, "write output here instead of stdout");

    // moment-run
    auto* mr = app.add_subcommand("moment-run", "build measures and compute weighted moments");
    MomentArgs ma;
    mr->add_option("--config", ma.config_path, "run configuration (JSON)");
    mr->add_option("--curve", ma.curves, "curve label or config path (repeatable)");
    mr->add_option("--p", ma.p, "the prime p");
    mr->add_option("--primes", ma.primes, "auxiliary primes ell_i")->delimiter(',');
    mr->add_option("--generators", ma.generators, "generators b_i (default: smallest primitive roots)")
        ->delimiter(',');
    mr->add_option("--r", ma.r, "number of leading non-Taylor-Wiles primes");
    mr->add_option("--levels", ma.levels, "tower levels n to report")->delimiter(',');
    mr->add_option("--m", ma.m, "digit exponent m");
    mr->add_option("--precision", ma.digits, "working precision in decimal digits");
    mr->add_option("--den-bound", ma.den_bound, "denominator bound for symbol reconstruction");
    mr->add_option("--cache", ma.cache, "symbol cache directory (or PMOM_CACHE_DIR)");
    mr->add_option("--out", ma.format, "output format: json or csv");
    mr->add_option("--out-file", ma.out_file, "write output here instead of stdout");
    mr->add_flag("--synthetic", ma.synthetic, "run on a synthetic measure with planted invariants");
    mr->add_option("--mu", ma.mu, "planted mu (synthetic)");
    mr->add_option("--lambda", ma.lambda, "planted lambda (synthetic)");
    mr->add_option("--e", ma.e, "valuation scale e (synthetic)");
    mr->add_option("--factors", ma.factors, "number of shape factors (synthetic)");
    mr->add_option("--seed", ma.seed, "seed for synthetic randomness");

    // kurihara-search
    auto* ks = app.add_subcommand("kurihara-search", "scan for a Kurihara nonvanishing witness");
    std::string ks_curve = "37a1", ks_out;
    long ks_p = 5, ks_bound = 200;
    int ks_digits = 12;
    bool ks_run = false, ks_hyp = false;
    ks->add_option("--curve", ks_curve, "curve label or config path");
    ks->add_option("--p", ks_p, "the prime p")->required();
    ks->add_option("--bound", ks_bound, "scan q1 up to this bound");
    ks->add_option("--precision", ks_digits, "working precision in decimal digits");
    ks->add_flag("--run-moments", ks_run, "on success, run the r=1 moment pipeline");
    ks->add_flag("--hypotheses-met", ks_hyp, "assert the rank-1/ordinary hypotheses hold");
    ks->add_option("--out-file", ks_out, "write output here instead of stdout");

    // verify
    auto* vf = app.add_subcommand("verify", "run the exact property suites");
    std::string vf_suite = "all";
    uint64_t vf_seed = 1;
    vf->add_option("suite", vf_suite, "digit, measure, symbols, or all");
    vf->add_option("--seed", vf_seed, "seed for randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tw->parsed()) return cmd_tw_scan(tw_curve, tw_p, tw_bound, tw_format, tw_out);
        if (mr->parsed()) return cmd_moment_run(ma);
        if (ks->parsed())
            return cmd_kurihara_search(ks_curve, ks_p, ks_bound, ks_digits, ks_run, ks_hyp, ks_out);
        if (vf->parsed()) {
            std::vector<pmom::SuiteResult> results;
            if (vf_suite == "all") {
                results = pmom::verify_all(vf_seed);
            } else if (vf_suite == "digit") {
                results = {pmom::verify_digit(vf_seed)};
            } else if (vf_suite == "measure") {
                results = {pmom::verify_measure(vf_seed)};
            } else if (vf_suite == "symbols") {
                results = {pmom::verify_symbols(vf_seed)};
            } else {
                std::cerr << "unknown suite: " << vf_suite << "\n";
                return kExitConfig;
            }
            bool ok = true;
            for (const auto& r : results) {
                std::cout << (r.ok() ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.passed
                          << " checks passed, " << r.failed << " failed\n";
                for (const auto& f : r.failures) std::cout << "       " << f << "\n";
                ok = ok && r.ok();
            }
            return ok ? 0 : kExitSuite;
        }
    } catch (const pmom::ReconstructionError& e) {
        std::cerr << "reconstruction failure: " << e.what() << " (value " << e.approx << ")\n";
        return kExitReconstruction;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
