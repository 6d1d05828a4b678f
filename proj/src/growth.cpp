#include "conseq/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "conseq/counting.hpp"
#include "conseq/errors.hpp"
#include "conseq/recursion.hpp"
#include "conseq/wilf.hpp"

namespace conseq {

RhoEstimate rho_estimate(const Pattern& v, int n_max) {
    const int d = v.size();
    if (n_max < d + 2)
        throw std::invalid_argument("n_max too small for a growth estimate");
    ProbTable a(dp_perm_counts(v, n_max + d - 1, 0));
    std::vector<double> ratios;
    for (int n = 1; n < n_max; ++n) {
        Rat q = a.at(n + 1) / a.at(n);
        q.canonicalize();
        ratios.push_back(rat_double(q));
    }
    const double raw = ratios.back();
    const std::size_t w = std::min<std::size_t>(5, ratios.size());
    std::vector<double> tail(ratios.end() - w, ratios.end());
    double accelerated = raw;
    for (std::size_t i = 0; i + 2 < tail.size(); ++i) {
        const double x0 = tail[i], x1 = tail[i + 1], x2 = tail[i + 2];
        const double den = x2 - 2 * x1 + x0;
        accelerated = den != 0.0 ? x2 - (x2 - x1) * (x2 - x1) / den : x2;
    }
    return RhoEstimate{raw, accelerated, n_max};
}

bool MineqReport::all_hold() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const MineqRow& r) { return r.holds; });
}

MineqReport verify_mineq(const Pattern& v, int alpha, int k_lo, int k_hi) {
    if (alpha < 2) throw std::invalid_argument("alpha must be >= 2");
    if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("bad k range");
    const int d = v.size();
    const int lambda = 1 + d * (alpha - 1);
    const int need = std::max(alpha * k_hi * d, lambda);
    ProbTable a(dp_perm_counts(v, need + d - 1, 0));

    MineqReport rep;
    rep.pattern = pattern_str(v);
    rep.alpha = alpha;
    const Rat al = a.at(lambda);
    for (int k = k_lo; k <= k_hi; ++k) {
        Rat lhs = a.at(alpha * k * d) - rat_pow(al, k);
        if (lhs < 0) lhs = -lhs;
        Rat rhs = Rat(k + 2) * rat_pow(al, k - 1);
        lhs.canonicalize();
        rhs.canonicalize();
        rep.rows.push_back({k, lhs, rhs, lhs <= rhs});
    }
    return rep;
}

double upper_bound_block(const Pattern& v, int alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    const int d = v.size();
    const int n = alpha * d;
    CountTable t = dp_perm_counts(v, n, 0);
    Rat q(t.count(n, 0), factorial(static_cast<unsigned long>(n)));
    q.canonicalize();
    return std::pow(rat_double(q), 1.0 / static_cast<double>(n));
}

namespace {

std::complex<double> peval(const std::vector<std::complex<double>>& c,
                           std::complex<double> x) {
    std::complex<double> r = 0;
    for (const auto& ci : c) r = r * x + ci;
    return r;
}

double peval_real(const std::vector<double>& c, double x) {
    double r = 0;
    for (double ci : c) r = r * x + ci;
    return r;
}

}  // namespace

std::vector<std::complex<double>> all_roots(const std::vector<double>& coeffs) {
    if (coeffs.size() < 2 || coeffs.front() == 0.0)
        throw std::invalid_argument("polynomial must have nonzero leading coefficient");
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<std::complex<double>> c(coeffs.begin(), coeffs.end());
    for (auto& ci : c) ci /= coeffs.front();

    std::vector<std::complex<double>> roots(n);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> p = 1.0;
    for (int i = 0; i < n; ++i) {
        roots[i] = p;
        p *= seed;
    }
    for (int iter = 0; iter < 10000; ++iter) {
        double maxd = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= roots[i] - roots[j];
            const std::complex<double> delta = peval(c, roots[i]) / den;
            roots[i] -= delta;
            maxd = std::max(maxd, std::abs(delta));
        }
        if (maxd < 1e-14) break;
    }
    return roots;
}

namespace {

// exact threshold (m-1)^(m-1)/m^m separating the real-root regime of poly1
Rat degenerate_beta(int m) {
    Int num, den;
    mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(m - 1),
                  static_cast<unsigned long>(m - 1));
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(m),
                  static_cast<unsigned long>(m));
    Rat q(num, den);
    q.canonicalize();
    return q;
}

bool nearly_real(std::complex<double> z) {
    return std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z));
}

// Newton polish on the real axis for a root already close to x0
double polish_real_root(const std::vector<double>& c, double x0) {
    double x = x0;
    for (int i = 0; i < 64; ++i) {
        double f = 0.0, df = 0.0;
        for (double ci : c) {
            df = df * x + f;
            f = f * x + ci;
        }
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace

PolyBounds poly_bounds(const Pattern& v, int ell) {
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    const int d = v.size();
    const int m = d + ell - 1;
    const Rat b = beta(v, ell);
    if (b == degenerate_beta(m))
        throw std::invalid_argument("degenerate beta, choose different ell");
    const double bf = rat_double(b);

    PolyBounds out;
    out.beta = b;
    out.ell = ell;

    // poly1: x^m - x^(m-1) + beta
    std::vector<double> c1(m + 1, 0.0);
    c1[0] = 1.0;
    c1[1] = -1.0;
    c1[m] = bf;
    auto roots1 = all_roots(c1);
    auto dom1 = *std::max_element(roots1.begin(), roots1.end(),
                                  [](auto x, auto y) { return std::abs(x) < std::abs(y); });
    out.poly1_dominant_real = nearly_real(dom1);
    if (out.poly1_dominant_real) {
        double x = polish_real_root(c1, dom1.real());
        // when the sign test admits a root in ((m-1)/m, 1), bisection there
        // is authoritative
        const double knee = static_cast<double>(m - 1) / m;
        if (peval_real(c1, knee) < 0.0) {
            double lo = knee, hi = 1.0;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                (peval_real(c1, mid) < 0.0 ? lo : hi) = mid;
            }
            x = 0.5 * (lo + hi);
        }
        dom1 = x;
    }
    out.poly1_dominant = dom1;
    out.rho_l = std::abs(dom1);
    out.poly1_residual = std::abs(peval(std::vector<std::complex<double>>(c1.begin(), c1.end()), dom1));

    // poly2: x^(ell+2d-2) - x^(ell+2d-3) + beta x^(d-1) - (d-1)/d!
    const int deg2 = ell + 2 * d - 2;
    std::vector<double> c2(deg2 + 1, 0.0);
    c2[0] = 1.0;
    c2[1] = -1.0;
    c2[deg2 - (d - 1)] += bf;
    Rat tailc(Int(d - 1), factorial(static_cast<unsigned long>(d)));
    tailc.canonicalize();
    c2[deg2] -= rat_double(tailc);
    auto roots2 = all_roots(c2);
    auto dom2 = *std::max_element(roots2.begin(), roots2.end(),
                                  [](auto x, auto y) { return std::abs(x) < std::abs(y); });
    out.poly2_dominant_real = nearly_real(dom2);
    if (out.poly2_dominant_real) dom2 = polish_real_root(c2, dom2.real());
    out.poly2_dominant = dom2;
    out.rho_u = std::abs(dom2);
    out.poly2_residual = std::abs(peval(std::vector<std::complex<double>>(c2.begin(), c2.end()), dom2));
    return out;
}

ClosedLower lower_bound_closed(const Pattern& v, int ell) {
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    const int d = v.size();
    const int m = d + ell - 1;
    const Rat b = beta(v, ell);
    if (!(b > 0) || b >= degenerate_beta(m)) {
        std::ostringstream msg;
        msg << "no certificate found: beta = " << rat_string(b)
            << " outside the certificate regime (0, "
            << rat_string(degenerate_beta(m)) << ")";
        throw std::runtime_error(msg.str());
    }
    const double bf = rat_double(b);

    ClosedLower best;
    bool found = false;
    for (int i = 1; i <= 2000; ++i) {
        const double ap = 0.01 * std::pow(1.005, i);
        const double delta = std::pow(bf, 1.0 / ((m - 1) * (1.0 + ap)));
        const bool feasible = 1.0 < (1.0 - delta) * std::pow(1.0 / bf, ap / (1.0 + ap));
        if (feasible && (!found || delta > best.delta)) {
            best.delta = delta;
            best.alpha_used = ap;
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error("no certificate found: no feasible exponent on the grid");

    const double head = 1.0 - bf - best.delta;
    if (head > 0.0) {
        best.gamma = std::log(head) / std::log(bf);
        best.gamma_vacuous = false;
        best.lower_value = 1.0 - bf - std::pow(bf, best.gamma);
    } else {
        best.gamma = 0.0;
        best.gamma_vacuous = true;
        best.lower_value = 0.0;
    }
    return best;
}

std::string ExtremalReport::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["d"] = d;
    j["n_max"] = n_max;
    j["tolerance"] = tolerance;
    j["estimates"] = nlohmann::ordered_json::array();
    for (const auto& [pat, est] : estimates) {
        nlohmann::ordered_json e;
        e["pattern"] = pat;
        e["estimate"] = est;
        j["estimates"].push_back(std::move(e));
    }
    j["expected_min"] = expected_min;
    j["expected_max"] = expected_max;
    j["ordering_holds"] = ordering_holds;
    return pretty ? j.dump(2) : j.dump();
}

ExtremalReport extremal_ordering(int d, int n_max) {
    if (d != 3 && d != 4)
        throw std::invalid_argument("extremal ordering implemented for d in {3,4}");
    ExtremalReport rep;
    rep.d = d;
    rep.n_max = n_max;
    rep.tolerance = 1e-9;

    std::vector<int> bottom(d), top(d);
    for (int i = 0; i < d; ++i) top[i] = i + 1;
    bottom = top;
    std::swap(bottom[d - 2], bottom[d - 1]);  // 1...(d-2) d (d-1)
    rep.expected_min = pattern_str(Pattern(bottom));
    rep.expected_max = pattern_str(Pattern(top));

    double min_est = 2.0, max_est = -1.0;
    double bottom_est = 0.0, top_est = 0.0;
    for (const Pattern& v : all_patterns(d)) {
        const double est = rho_estimate(v, n_max).accelerated;
        rep.estimates.emplace_back(pattern_str(v), est);
        min_est = std::min(min_est, est);
        max_est = std::max(max_est, est);
        if (v.entries() == bottom) bottom_est = est;
        if (v.entries() == top) top_est = est;
    }
    rep.ordering_holds = bottom_est <= min_est + rep.tolerance &&
                         top_est >= max_est - rep.tolerance;
    return rep;
}

}  // namespace conseq
