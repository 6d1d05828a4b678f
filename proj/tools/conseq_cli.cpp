#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "conseq/coefficients.hpp"
#include "conseq/correlation.hpp"
#include "conseq/counting.hpp"
#include "conseq/errors.hpp"
#include "conseq/growth.hpp"
#include "conseq/montecarlo.hpp"
#include "conseq/pattern.hpp"
#include "conseq/rational.hpp"
#include "conseq/recursion.hpp"
#include "conseq/selftest.hpp"
#include "conseq/wilf.hpp"

namespace {

using nlohmann::ordered_json;
using namespace conseq;

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

ordered_json envelope(const std::string& command, bool deterministic) {
    ordered_json j;
    j["tool"] = "conseq";
    j["version"] = kVersion;
    j["command"] = command;
    if (!deterministic) j["generated_at"] = iso_now();
    return j;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text << "\n";
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("range must look like lo..hi, got: " + s);
    const int lo = std::stoi(s.substr(0, dots));
    const int hi = std::stoi(s.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range: " + s);
    return {lo, hi};
}

Word parse_word(const std::string& s, int k) {
    std::vector<int> letters;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) letters.push_back(std::stoi(tok));
    } else {
        for (char c : s) {
            if (c < '1' || c > '9')
                throw std::invalid_argument("word letters must be digits 1-9: " + s);
            letters.push_back(c - '0');
        }
    }
    for (int x : letters)
        if (x < 1 || x > k)
            throw std::invalid_argument("word letter outside the alphabet [" +
                                        std::to_string(k) + "]: " + s);
    return Word(letters, k);
}

Rat parse_alpha(const std::string& s) {
    Rat a = parse_rational(s);
    if (!(a > 0) || !(a < 1))
        throw std::invalid_argument("alpha must be a rational in (0,1), got: " + s);
    return a;
}

ordered_json rational_entry(const Rat& q) {
    ordered_json j;
    j["rational"] = rat_string(q);
    j["decimal"] = rat_decimal(q, 30);
    return j;
}

// ---------------------------------------------------------------- count

struct CountArgs {
    std::string pattern;
    std::string universe = "perms";
    int k = 0;
    int n_max = 0;
    int r_max = 3;
    bool verify = false;
    int oracle_cap = EnumLimits{}.brute_perm_cap;
    std::string format = "csv";
    std::string output;
    bool deterministic = false;
};

int cmd_count(const CountArgs& a) {
    const Pattern v = parse_pattern(a.pattern);
    const Universe uni = parse_universe(a.universe);
    if (uni == Universe::words && a.k < 1)
        throw std::invalid_argument("--k is required for the word universe");

    CountTable table = uni == Universe::perms
                           ? perm_counts_cached(v, a.n_max, a.r_max)
                           : word_counts_cached(v, a.k, a.n_max, a.r_max);
    table.check_invariants();

    // cross-check against the exhaustive engine on the range inside the cap
    int verified_to = -1;
    if (a.verify) {
        EnumLimits limits;
        limits.brute_perm_cap = a.oracle_cap;
        int vn = 0;
        if (uni == Universe::perms) {
            vn = std::min(a.n_max, limits.brute_perm_cap);
        } else {
            const Int cap(static_cast<long>(limits.brute_word_cap));
            Int total = 0, pw = 1;
            vn = -1;
            for (int n = 0; n <= a.n_max; ++n) {
                total += pw;
                if (total > cap) break;
                vn = n;
                pw *= a.k;
            }
            if (vn < 0) vn = 0;
        }
        CountTable oracle = uni == Universe::perms
                                ? brute_perm_counts(v, vn, a.r_max, limits)
                                : brute_word_counts(v, a.k, vn, a.r_max, limits);
        for (int n = 0; n <= vn; ++n) {
            for (int r = 0; r <= a.r_max + 1; ++r) {
                if (oracle.count(n, r) != table.count(n, r)) {
                    std::ostringstream msg;
                    msg << "count cross-check failed for " << pattern_str(v) << " at n="
                        << n << " r=" << r << ": dp " << table.count(n, r).get_str()
                        << " vs exhaustive " << oracle.count(n, r).get_str();
                    throw verification_error(msg.str());
                }
            }
        }
        verified_to = vn;
    }

    if (a.format == "csv") {
        std::string text = table.to_csv();
        if (verified_to >= 0)
            text += "# verified against exhaustive enumeration for n <= " +
                    std::to_string(verified_to) + "\n";
        while (!text.empty() && text.back() == '\n') text.pop_back();
        write_out(a.output, text);
        return 0;
    }
    ordered_json j = envelope("count", a.deterministic);
    ordered_json cfg;
    cfg["pattern"] = pattern_str(v);
    cfg["universe"] = universe_str(uni);
    if (uni == Universe::words) cfg["k"] = a.k;
    cfg["n_max"] = a.n_max;
    cfg["r_max"] = a.r_max;
    cfg["verify"] = a.verify;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"counts are exact integers"};
    ordered_json result;
    result["counts"] = ordered_json::parse(table.to_json());
    if (a.verify)
        result["verified"] = "exhaustive cross-check passed for n <= " +
                             std::to_string(verified_to);
    else
        result["verified"] = false;
    j["result"] = std::move(result);
    write_out(a.output, j.dump(2));
    return 0;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
    int d = 3;
    std::string universe = "perms";
    int n_max = 8;
    int r_max = 3;
    int k_max = 5;
    int workers = 0;
    std::string output;
    bool deterministic = false;
};

int cmd_classify(const ClassifyArgs& a) {
    worker_count() = a.workers;
    const Universe uni = parse_universe(a.universe);
    WilfPartition part = classify(a.d, uni, a.n_max, a.r_max, a.k_max);
    ordered_json j = envelope("classify", a.deterministic);
    ordered_json cfg;
    cfg["d"] = a.d;
    cfg["universe"] = universe_str(uni);
    cfg["n_max"] = a.n_max;
    cfg["r_max"] = a.r_max;
    if (uni == Universe::words) cfg["k_max"] = a.k_max;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"signatures are exact count tables"};
    j["result"] = ordered_json::parse(part.to_json());
    write_out(a.output, j.dump(2));
    return 0;
}

// ---------------------------------------------------------------- recursion

struct RecursionArgs {
    std::string theorem;
    std::string pattern;
    std::string range = "1..20";
    int k = 0;
    int ell = 0;
    std::string universe = "perms";
    std::string coefficients = "oracle";
    std::string output;
    bool deterministic = false;
};

int cmd_recursion(const RecursionArgs& a) {
    const Pattern v = parse_pattern(a.pattern);
    const auto [lo, hi] = parse_range(a.range);

    RecursionReport rep;
    bool ok = false;
    if (a.theorem == "nonoverlap") {
        const CoefSource src =
            a.coefficients == "closed" ? CoefSource::closed : CoefSource::oracle;
        rep = verify_nonoverlapping_recursion(v, lo, hi, src);
        ok = rep.all_hold();
    } else if (a.theorem == "word") {
        if (a.k < 1) throw std::invalid_argument("--k is required for the word recursion");
        rep = verify_word_recursion(v, a.k, lo, hi);
        ok = !rep.rows.empty() && rep.rows.back().holds;
        for (const auto& row : rep.rows)
            if (rep.detected_n0 && row.n >= *rep.detected_n0 && !row.holds) ok = false;
    } else if (a.theorem == "monotone") {
        rep = verify_monotone_recursion(v, lo, hi);
        ok = rep.all_hold() && rep.sign_convention != "neither convention holds";
    } else if (a.theorem == "sandwich") {
        if (a.ell < 2) throw std::invalid_argument("--ell >= 2 is required for sandwich");
        const Universe uni = parse_universe(a.universe);
        if (uni == Universe::words && a.k < 1)
            throw std::invalid_argument("--k is required for the word universe");
        rep = verify_sandwich(v, a.ell, lo, hi, uni, a.k);
        ok = rep.all_hold();
    } else {
        throw std::invalid_argument(
            "--theorem must be one of nonoverlap, word, monotone, sandwich");
    }

    ordered_json j = envelope("recursion", a.deterministic);
    ordered_json cfg;
    cfg["theorem"] = a.theorem;
    cfg["pattern"] = pattern_str(v);
    cfg["n"] = a.range;
    if (a.k > 0) cfg["k"] = a.k;
    if (a.ell > 0) cfg["ell"] = a.ell;
    if (a.theorem == "nonoverlap") cfg["coefficients"] = a.coefficients;
    if (a.theorem == "sandwich") cfg["universe"] = a.universe;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"probabilities and residuals are exact rationals",
                       "decimal fields are 30-digit renderings"};
    j["result"] = ordered_json::parse(rep.to_json());
    j["result"]["verified"] = ok;
    write_out(a.output, j.dump(2));
    if (!ok) std::cerr << "recursion check failed: see the report rows\n";
    return ok ? 0 : 2;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    std::string pattern;
    int ell = 4;
    int alpha_int = 2;
    int n_max = 30;
    std::string output;
    bool deterministic = false;
};

int cmd_bounds(const BoundsArgs& a) {
    const Pattern v = parse_pattern(a.pattern);
    const RhoEstimate re = rho_estimate(v, a.n_max);
    const PolyBounds pb = poly_bounds(v, a.ell);
    const double block = upper_bound_block(v, a.alpha_int);

    ordered_json j = envelope("bounds", a.deterministic);
    ordered_json cfg;
    cfg["pattern"] = pattern_str(v);
    cfg["ell"] = a.ell;
    cfg["alpha_int"] = a.alpha_int;
    cfg["n_max"] = a.n_max;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"beta is an exact rational",
                       "growth estimates and root moduli are IEEE doubles"};

    ordered_json result;
    result["pattern"] = pattern_str(v);
    ordered_json rho;
    rho["value"] = re.accelerated;
    rho["method"] = "ratios a(n+1)/a(n), tail window of 5, Aitken delta-squared";
    rho["n_max"] = re.n_max;
    rho["raw"] = re.raw;
    result["rho_estimate"] = std::move(rho);

    ordered_json bounds = ordered_json::array();
    {
        ordered_json b;
        b["source"] = "characteristic polynomial, short form";
        b["kind"] = "lower";
        b["value"] = pb.rho_l;
        ordered_json p;
        p["ell"] = a.ell;
        p["beta"] = rat_string(pb.beta);
        p["dominant_real"] = pb.poly1_dominant_real;
        b["params"] = std::move(p);
        bounds.push_back(std::move(b));
    }
    {
        ordered_json b;
        b["source"] = "characteristic polynomial, long form";
        b["kind"] = "upper";
        b["value"] = pb.rho_u;
        ordered_json p;
        p["ell"] = a.ell;
        p["beta"] = rat_string(pb.beta);
        p["dominant_real"] = pb.poly2_dominant_real;
        b["params"] = std::move(p);
        bounds.push_back(std::move(b));
    }
    {
        ordered_json b;
        b["source"] = "block count";
        b["kind"] = "upper";
        b["value"] = block;
        ordered_json p;
        p["alpha"] = a.alpha_int;
        b["params"] = std::move(p);
        bounds.push_back(std::move(b));
    }
    try {
        const ClosedLower cl = lower_bound_closed(v, a.ell);
        ordered_json b;
        b["source"] = "closed-form certificate";
        b["kind"] = "lower";
        b["value"] = cl.delta;
        ordered_json p;
        p["alpha_exponent"] = cl.alpha_used;
        if (cl.gamma_vacuous)
            p["gamma"] = "vacuous";
        else
            p["gamma"] = cl.gamma;
        b["params"] = std::move(p);
        bounds.push_back(std::move(b));
    } catch (const std::runtime_error& e) {
        result["certificate"] = e.what();
    }
    result["bounds"] = std::move(bounds);
    ordered_json res;
    res["poly1"] = pb.poly1_residual;
    res["poly2"] = pb.poly2_residual;
    result["residuals"] = std::move(res);

    // bracket invariant: lower <= estimate <= upper within 1e-6 on the estimate
    bool ok = pb.poly1_residual <= 1e-10 && pb.poly2_residual <= 1e-10;
    for (const auto& b : result["bounds"]) {
        const double val = b["value"].get<double>();
        if (b["kind"] == "lower" && val > re.accelerated + 1e-6) ok = false;
        if (b["kind"] == "upper" && val < re.accelerated - 1e-6) ok = false;
    }
    result["bracket_holds"] = ok;
    j["result"] = std::move(result);
    write_out(a.output, j.dump(2));
    if (!ok)
        std::cerr << "bracket invariant failed: a reported bound crosses the growth "
                     "estimate (see result.bounds)\n";
    return ok ? 0 : 2;
}

// ---------------------------------------------------------------- correlation

struct CorrelationArgs {
    std::string pattern;
    int k = 0;
    std::string alpha;
    int r = -1;
    std::string start;
    std::string output;
    bool deterministic = false;
};

int cmd_correlation(const CorrelationArgs& a) {
    const Pattern v = parse_pattern(a.pattern);
    const Rat alpha = parse_alpha(a.alpha);
    const CorrMatrix R = build_R(v, a.k, alpha);
    Word t({}, a.k);
    if (!a.start.empty()) {
        t = parse_word(a.start, a.k);
        R.position_of(t);  // must be an instance word
    }
    const T1Solution sol = expected_alpha_T1(v, a.k, alpha, t);
    const T1SystemReport check = verify_T1_system(v, a.k, alpha, t);

    ordered_json j = envelope("correlation", a.deterministic);
    ordered_json cfg;
    cfg["pattern"] = pattern_str(v);
    cfg["k"] = a.k;
    cfg["alpha"] = rat_string(alpha);
    cfg["start"] = a.start.empty() ? "empty" : a.start;
    if (a.r >= 0) cfg["r"] = a.r;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"all transforms are exact rationals",
                       "decimal fields are 30-digit renderings"};

    ordered_json result;
    result["matrix"] = ordered_json::parse(R.to_json());
    ordered_json tr;
    tr["start"] = a.start.empty() ? "empty" : a.start;
    tr["e"] = rational_entry(sol.e);
    ordered_json per = ordered_json::array();
    for (std::size_t i = 0; i < sol.index.size(); ++i) {
        ordered_json row;
        row["word"] = word_str(sol.index[i]);
        row["value"] = rational_entry(sol.x[i]);
        per.push_back(std::move(row));
    }
    tr["per_instance"] = std::move(per);
    result["transform"] = std::move(tr);
    ordered_json sys;
    sys["all_zero"] = check.all_zero;
    ordered_json resids = ordered_json::array();
    for (const Rat& q : check.residuals) resids.push_back(rat_string(q));
    sys["residuals"] = std::move(resids);
    sys["sum_residual"] = rat_string(check.sum_residual);
    result["system_check"] = std::move(sys);

    bool ok = check.all_zero;
    if (a.r >= 0) {
        const GenfuncResult g = genfunc_value(v, a.k, alpha, a.r);
        ordered_json gf;
        gf["r"] = a.r;
        gf["value"] = rational_entry(g.value);
        gf["series"] = rational_entry(g.series);
        gf["tail_bound"] = rat_decimal(g.tail_bound, 30);
        gf["truncation"] = g.truncation;
        gf["within"] = g.within;
        result["genfunc"] = std::move(gf);
        if (!g.within) ok = false;
    }
    j["result"] = std::move(result);
    j["result"]["verified"] = ok;
    write_out(a.output, j.dump(2));
    if (!ok) std::cerr << "correlation cross-check failed\n";
    return ok ? 0 : 2;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::string pattern;
    int n_max = 12;
    int r_max = 3;
    int ell = 4;
    int alpha_int = 2;
    int k = 0;
    std::string alpha;
    std::string output;
    bool deterministic = false;
};

int cmd_report(const ReportArgs& a) {
    const Pattern v = parse_pattern(a.pattern);
    const int d = v.size();

    ordered_json j = envelope("report", a.deterministic);
    ordered_json cfg;
    cfg["pattern"] = pattern_str(v);
    cfg["n_max"] = a.n_max;
    cfg["r_max"] = a.r_max;
    cfg["ell"] = a.ell;
    cfg["alpha_int"] = a.alpha_int;
    if (a.k > 0) cfg["k"] = a.k;
    if (!a.alpha.empty()) cfg["alpha"] = a.alpha;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"counts, probabilities and residuals are exact",
                       "growth estimates and root moduli are IEEE doubles"};

    ordered_json result;
    ordered_json props;
    {
        std::ostringstream ov;
        bool first = true;
        for (int i : overlap_set(v)) {
            ov << (first ? "" : ",") << i;
            first = false;
        }
        props["overlap_set"] = "{" + ov.str() + "}";
        props["nonoverlapping"] = d >= 3 && is_nonoverlapping(v);
        props["monotone"] = d >= 3 && is_monotone(v);
        props["standard_form"] = is_standard_form(v);
        props["standardized"] = pattern_str(standardize(v));
    }
    result["properties"] = std::move(props);

    CountTable table = perm_counts_cached(v, a.n_max, a.r_max);
    table.check_invariants();
    result["counts"] = ordered_json::parse(table.to_json());
    if (a.k > 0) {
        CountTable wt = word_counts_cached(v, a.k, a.n_max, a.r_max);
        wt.check_invariants();
        result["word_counts"] = ordered_json::parse(wt.to_json());
    }

    {
        WilfPartition part = classify(d, Universe::perms, std::min(a.n_max, 8), 2);
        ordered_json cls;
        cls["block"] = part.block_of(v);
        cls["partition"] = ordered_json::parse(part.to_json());
        result["classification"] = std::move(cls);
    }

    bool ok = true;
    const int rec_hi = 16;
    if (d >= 3 && is_nonoverlapping(v)) {
        RecursionReport rep = verify_nonoverlapping_recursion(v, 1, rec_hi, CoefSource::oracle);
        result["recursion"] = ordered_json::parse(rep.to_json());
        if (!rep.all_hold()) ok = false;
    } else if (d >= 3 && is_monotone(v)) {
        RecursionReport rep = verify_monotone_recursion(v, 1, rec_hi);
        result["recursion"] = ordered_json::parse(rep.to_json());
        if (!rep.all_hold()) ok = false;
    } else {
        result["recursion"] =
            "no avoidance recursion for this overlap class; sandwich bounds only";
    }
    if (d >= 3) {
        RecursionReport sw = verify_sandwich(v, a.ell, 1, rec_hi, Universe::perms);
        result["sandwich"] = ordered_json::parse(sw.to_json());
        if (!sw.all_hold()) ok = false;
    }

    if (d <= 4) {
        const RhoEstimate re = rho_estimate(v, 30);
        const PolyBounds pb = poly_bounds(v, a.ell);
        ordered_json growth;
        growth["rho_estimate"] = re.accelerated;
        growth["rho_raw"] = re.raw;
        growth["n_max"] = re.n_max;
        growth["poly_lower"] = pb.rho_l;
        growth["poly_upper"] = pb.rho_u;
        growth["poly1_dominant_real"] = pb.poly1_dominant_real;
        growth["poly2_dominant_real"] = pb.poly2_dominant_real;
        growth["block_upper"] = upper_bound_block(v, a.alpha_int);
        growth["bracket_holds"] =
            pb.rho_l <= re.accelerated + 1e-6 && re.accelerated <= pb.rho_u + 1e-6;
        result["growth"] = std::move(growth);
    } else {
        result["growth"] = "skipped for d > 4 (growth estimation is desk-scale only)";
    }

    if (a.k > 0 && !a.alpha.empty()) {
        const Rat alpha = parse_alpha(a.alpha);
        const Word eps({}, a.k);
        const T1Solution sol = expected_alpha_T1(v, a.k, alpha, eps);
        const T1SystemReport check = verify_T1_system(v, a.k, alpha, eps);
        const GenfuncResult g = genfunc_value(v, a.k, alpha, 0);
        ordered_json corr;
        corr["e"] = rational_entry(sol.e);
        corr["system_all_zero"] = check.all_zero;
        corr["genfunc_r0"] = rational_entry(g.value);
        corr["genfunc_within_tail"] = g.within;
        result["correlation"] = std::move(corr);
        if (!check.all_zero || !g.within) ok = false;
    }

    result["verified"] = ok;
    j["result"] = std::move(result);
    write_out(a.output, j.dump(2));
    if (!ok) std::cerr << "report: at least one embedded check failed\n";
    return ok ? 0 : 2;
}

// ---------------------------------------------------------------- mc

struct McArgs {
    std::string pattern;
    int n = 0;
    long long samples = 0;
    std::uint64_t seed = 0;
    bool compare_exact = false;
    std::string output;
    bool deterministic = false;
};

int cmd_mc(const McArgs& a) {
    const Pattern v = parse_pattern(a.pattern);
    const McResult m = monte_carlo_a(v, a.n, a.samples, a.seed);

    ordered_json j = envelope("mc", a.deterministic);
    ordered_json cfg;
    cfg["pattern"] = pattern_str(v);
    cfg["n"] = a.n;
    cfg["samples"] = a.samples;
    cfg["seed"] = a.seed;
    j["config"] = std::move(cfg);
    j["arithmetic"] = {"estimate is a double; the (seed, samples) pair pins it bit for bit"};

    ordered_json result;
    result["estimate"] = m.estimate;
    result["stderr"] = m.stderr_;
    result["hits"] = m.hits;
    result["samples"] = m.samples;
    result["seed"] = m.seed;
    if (a.compare_exact) {
        const int d = v.size();
        CountTable table = dp_perm_counts(v, a.n + d - 1, 0);
        const Rat exact = prefix_prob(table, a.n, 1);
        result["exact"] = rational_entry(exact);
        const double dev = m.estimate - rat_double(exact);
        result["deviation"] = dev;
        result["deviation_over_stderr"] = m.stderr_ > 0 ? dev / m.stderr_ : 0.0;
    }
    j["result"] = std::move(result);
    write_out(a.output, j.dump(2));
    return 0;
}

// ---------------------------------------------------------------- selftest

int cmd_selftest(int criterion) {
    std::vector<CriterionResult> results;
    if (criterion > 0)
        results.push_back(run_criterion(criterion));
    else
        results = run_all();
    int passed = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": "
                  << r.detail << "\n";
        if (r.pass) ++passed;
    }
    std::cout << "summary: " << passed << "/" << results.size() << " criteria passed\n";
    return passed == static_cast<int>(results.size()) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact enumeration and verification toolkit for consecutive patterns "
                 "in permutations and words"};
    app.require_subcommand(1);

    CountArgs count_args;
    auto* count = app.add_subcommand("count", "occurrence-count tables (CSV or JSON)");
    count->add_option("--pattern", count_args.pattern, "pattern, e.g. 132")->required();
    count->add_option("--universe", count_args.universe, "perms or words")
        ->check(CLI::IsMember({"perms", "words"}));
    count->add_option("--k", count_args.k, "alphabet size (words)")->check(CLI::Range(1, 62));
    count->add_option("--n-max", count_args.n_max, "largest object size")
        ->required()
        ->check(CLI::Range(0, 62));
    count->add_option("--r-max", count_args.r_max, "largest exact occurrence count")
        ->check(CLI::Range(0, 64));
    count->add_flag("--verify", count_args.verify,
                    "cross-check against exhaustive enumeration inside the cap");
    count->add_option("--oracle-cap", count_args.oracle_cap,
                      "largest n for the exhaustive permutation sweep")
        ->check(CLI::Range(0, 12));
    count->add_option("--format", count_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    count->add_option("--output", count_args.output, "output path (default stdout)");
    count->add_flag("--deterministic", count_args.deterministic,
                    "omit timestamps for byte-identical reruns");

    ClassifyArgs classify_args;
    auto* cls = app.add_subcommand("classify", "candidate equivalence partition of S_d");
    cls->add_option("--d", classify_args.d, "pattern length")->required()->check(CLI::Range(2, 8));
    cls->add_option("--universe", classify_args.universe, "perms or words")
        ->check(CLI::IsMember({"perms", "words"}));
    cls->add_option("--n-max", classify_args.n_max, "signature depth in object size")
        ->check(CLI::Range(1, 62));
    cls->add_option("--r-max", classify_args.r_max, "signature depth in occurrence count")
        ->check(CLI::Range(0, 64));
    cls->add_option("--k-max", classify_args.k_max, "largest alphabet (words)")
        ->check(CLI::Range(1, 62));
    cls->add_option("--workers", classify_args.workers,
                    "worker threads for signatures (0 = logical processors)")
        ->check(CLI::Range(0, 256));
    cls->add_option("--output", classify_args.output, "output path (default stdout)");
    cls->add_flag("--deterministic", classify_args.deterministic,
                  "omit timestamps for byte-identical reruns");

    RecursionArgs rec_args;
    auto* rec = app.add_subcommand("recursion", "avoidance recursions and sandwich bounds");
    rec->add_option("--theorem", rec_args.theorem,
                    "nonoverlap, word, monotone, or sandwich")
        ->required()
        ->check(CLI::IsMember({"nonoverlap", "word", "monotone", "sandwich"}));
    rec->add_option("--pattern", rec_args.pattern, "pattern, e.g. 132")->required();
    rec->add_option("--n", rec_args.range, "size range lo..hi (default 1..20)");
    rec->add_option("--k", rec_args.k, "alphabet size (word recursion / word sandwich)")
        ->check(CLI::Range(1, 62));
    rec->add_option("--ell", rec_args.ell, "sandwich offset (>= 2)")->check(CLI::Range(2, 40));
    rec->add_option("--universe", rec_args.universe, "perms or words (sandwich)")
        ->check(CLI::IsMember({"perms", "words"}));
    rec->add_option("--coefficients", rec_args.coefficients,
                    "oracle or closed (nonoverlap only)")
        ->check(CLI::IsMember({"oracle", "closed"}));
    rec->add_option("--output", rec_args.output, "output path (default stdout)");
    rec->add_flag("--deterministic", rec_args.deterministic,
                  "omit timestamps for byte-identical reruns");

    BoundsArgs bounds_args;
    auto* bnd = app.add_subcommand("bounds", "growth-rate estimate and bracketing bounds");
    bnd->add_option("--pattern", bounds_args.pattern, "pattern, e.g. 123")->required();
    bnd->add_option("--ell", bounds_args.ell, "characteristic polynomial offset")
        ->check(CLI::Range(2, 40));
    bnd->add_option("--alpha-int", bounds_args.alpha_int, "block size multiplier")
        ->check(CLI::Range(2, 6));
    bnd->add_option("--n-max", bounds_args.n_max, "depth of the growth estimate")
        ->check(CLI::Range(8, 60));
    bnd->add_option("--output", bounds_args.output, "output path (default stdout)");
    bnd->add_flag("--deterministic", bounds_args.deterministic,
                  "omit timestamps for byte-identical reruns");

    CorrelationArgs corr_args;
    auto* corr = app.add_subcommand("correlation",
                                    "correlation matrix and waiting-time transforms");
    corr->add_option("--pattern", corr_args.pattern, "pattern, e.g. 132")->required();
    corr->add_option("--k", corr_args.k, "alphabet size")->required()->check(CLI::Range(1, 20));
    corr->add_option("--alpha", corr_args.alpha, "rational in (0,1), e.g. 1/2")->required();
    corr->add_option("--r", corr_args.r, "also evaluate the r-occurrence series")
        ->check(CLI::Range(0, 40));
    corr->add_option("--t", corr_args.start, "start word (an instance; default empty)");
    corr->add_option("--output", corr_args.output, "output path (default stdout)");
    corr->add_flag("--deterministic", corr_args.deterministic,
                   "omit timestamps for byte-identical reruns");

    ReportArgs report_args;
    auto* rep = app.add_subcommand("report", "one JSON bundle for a single pattern");
    rep->add_option("--pattern", report_args.pattern, "pattern, e.g. 132")->required();
    rep->add_option("--n-max", report_args.n_max, "count table depth")->check(CLI::Range(4, 40));
    rep->add_option("--r-max", report_args.r_max, "count table occurrence depth")
        ->check(CLI::Range(0, 40));
    rep->add_option("--ell", report_args.ell, "sandwich/bracket offset")->check(CLI::Range(2, 40));
    rep->add_option("--alpha-int", report_args.alpha_int, "block size multiplier")
        ->check(CLI::Range(2, 6));
    rep->add_option("--k", report_args.k, "alphabet size for the word sections")
        ->check(CLI::Range(1, 20));
    rep->add_option("--alpha", report_args.alpha, "rational in (0,1) for the transform section");
    rep->add_option("--output", report_args.output, "output path (default stdout)");
    rep->add_flag("--deterministic", report_args.deterministic,
                  "omit timestamps for byte-identical reruns");

    McArgs mc_args;
    auto* mc = app.add_subcommand("mc", "seeded Monte Carlo estimate of the avoidance probability");
    mc->add_option("--pattern", mc_args.pattern, "pattern, e.g. 132")->required();
    mc->add_option("--n", mc_args.n, "probability index (object size is n + d - 1)")
        ->required()
        ->check(CLI::Range(1, 1000));
    mc->add_option("--samples", mc_args.samples, "sample count")
        ->required()
        ->check(CLI::Range(1LL, 1000000000LL));
    auto* seed_opt = mc->add_option("--seed", mc_args.seed, "PRNG seed (required)");
    seed_opt->required();
    mc->add_flag("--compare-exact", mc_args.compare_exact,
                 "also compute the exact value and the deviation");
    mc->add_option("--output", mc_args.output, "output path (default stdout)");
    mc->add_flag("--deterministic", mc_args.deterministic,
                 "omit timestamps for byte-identical reruns");

    int criterion = 0;
    auto* st = app.add_subcommand("selftest", "run the acceptance suite");
    st->add_option("--criterion", criterion, "run a single criterion (1..12)")
        ->check(CLI::Range(1, 12));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (count->parsed()) return cmd_count(count_args);
        if (cls->parsed()) return cmd_classify(classify_args);
        if (rec->parsed()) return cmd_recursion(rec_args);
        if (bnd->parsed()) return cmd_bounds(bounds_args);
        if (corr->parsed()) return cmd_correlation(corr_args);
        if (rep->parsed()) return cmd_report(report_args);
        if (mc->parsed()) return cmd_mc(mc_args);
        if (st->parsed()) return cmd_selftest(criterion);
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const verification_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
