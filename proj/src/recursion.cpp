#include "conseq/recursion.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace conseq {

ProbTable::ProbTable(const CountTable& table, int r)
    : pat_(table.pattern()), r_(r) {
    const int d = pat_.size();
    n_max_ = table.n_max() - (d - 1);
    if (n_max_ < 1)
        throw std::invalid_argument("count table too small to derive probabilities");
    vals_.reserve(n_max_);
    for (int n = 1; n <= n_max_; ++n) vals_.push_back(prefix_prob(table, n, r));
}

Rat ProbTable::at(long n) const {
    if (n <= 0) return Rat(1);
    if (n > n_max_) throw std::invalid_argument("probability index out of range");
    return vals_[static_cast<std::size_t>(n - 1)];
}

Rat beta_from(const ProbTable& probs, int ell) {
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    Rat b = probs.at(ell - 1) - probs.at(ell);
    b.canonicalize();
    return b;
}

Rat beta(const Pattern& v, int ell) {
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    const int d = v.size();
    ProbTable probs(dp_perm_counts(v, ell + d - 1, 0));
    return beta_from(probs, ell);
}

Rat beta_w(const Pattern& v, int k, int ell) {
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    const int d = v.size();
    ProbTable probs(dp_word_counts(v, k, ell + d - 1, 0));
    return beta_from(probs, ell);
}

bool RecursionReport::all_hold() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const ResidualRow& r) { return r.holds; });
}

void RecursionReport::add_param(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
}

std::string RecursionReport::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["theorem"] = theorem;
    j["pattern"] = pattern;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = std::move(p);
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["n"] = row.n;
        r["residual"] = rat_string(row.residual);
        r["decimal"] = rat_decimal(row.residual, 30);
        r["holds"] = row.holds;
        j["rows"].push_back(std::move(r));
    }
    if (!sign_convention.empty()) j["sign_convention"] = sign_convention;
    if (detected_n0) j["detected_n0"] = *detected_n0;
    return pretty ? j.dump(2) : j.dump();
}

namespace {

std::string range_note(int requested_lo, int effective_lo) {
    if (requested_lo >= effective_lo) return {};
    std::ostringstream out;
    out << "n < " << effective_lo << " skipped (outside the recursion's range)";
    return out.str();
}

}  // namespace

RecursionReport verify_nonoverlapping_recursion(const Pattern& v, int n_lo, int n_hi,
                                                CoefSource coefficients) {
    if (!is_nonoverlapping(v))
        throw std::invalid_argument("pattern not non-overlapping");
    if (n_hi < n_lo) throw std::invalid_argument("empty n range");
    const int d = v.size();
    ProbTable a(dp_perm_counts(v, n_hi + d - 1, 0));

    const bool closed = coefficients == CoefSource::closed;
    std::map<int, Rat> L;
    auto coef = [&](int j) -> const Rat& {
        auto it = L.find(j);
        if (it == L.end())
            it = L.emplace(j, closed ? L_closed(v, j) : L_oracle(v, j)).first;
        return it->second;
    };

    RecursionReport rep;
    rep.theorem = "nonoverlap";
    rep.pattern = pattern_str(v);
    rep.add_param("coefficients", closed ? "closed" : "oracle");
    const int start = std::max(n_lo, d);
    if (auto note = range_note(n_lo, start); !note.empty()) rep.add_param("skipped", note);

    const Rat L0(1, factorial(static_cast<unsigned long>(d)));
    for (int n = start; n <= n_hi; ++n) {
        const int m = (n - 1) / (d - 1);
        Rat res = a.at(n - 1) - a.at(n) - L0 * a.at(n - d);
        for (int j = 1; j <= m; ++j) {
            Rat term = coef(j) * a.at(n - j * (d - 1) - d);
            if (j % 2 == 0)
                res -= term;
            else
                res += term;  // subtracting (-1)^j L_j a(...) for odd j
        }
        res.canonicalize();
        rep.rows.push_back({n, res, res == 0});
    }
    rep.sign_convention =
        "r(n) = a(n-1) - a(n) - L0*a(n-d) - sum_{j=1..m} (-1)^j L_j a(n-j(d-1)-d), "
        "m = floor((n-1)/(d-1)), L0 = 1/d!, a(n) = 1 for n <= 0; the opposite "
        "first difference a(n) - a(n-1) does not produce vanishing residuals";
    return rep;
}

RecursionReport verify_word_recursion(const Pattern& v, int k, int n_lo, int n_hi) {
    if (!is_nonoverlapping(v))
        throw std::invalid_argument("pattern not non-overlapping");
    const int d = v.size();
    if (k < d) throw std::invalid_argument("alphabet smaller than pattern");
    if (n_hi < n_lo) throw std::invalid_argument("empty n range");
    ProbTable h(dp_word_counts(v, k, n_hi + d - 1, 0));

    std::map<int, Rat> H;
    for (int j = 1; j <= k; ++j) H.emplace(j, H_oracle(v, k, j));
    Int kd;
    mpz_ui_pow_ui(kd.get_mpz_t(), static_cast<unsigned long>(k),
                  static_cast<unsigned long>(d));
    Rat H0(binomial(k, d), kd);
    H0.canonicalize();

    RecursionReport rep;
    rep.theorem = "word";
    rep.pattern = pattern_str(v);
    rep.add_param("k", std::to_string(k));
    rep.add_param("H0", rat_string(H0));
    const int start = std::max(n_lo, d);
    if (auto note = range_note(n_lo, start); !note.empty()) rep.add_param("skipped", note);

    for (int n = start; n <= n_hi; ++n) {
        Rat res = h.at(n - 1) - h.at(n) - H0 * h.at(n - d);
        for (int j = 1; j <= k; ++j) {
            Rat term = H.at(j) * h.at(n - j * (d - 1) - d);
            if (j % 2 == 0)
                res -= term;
            else
                res += term;
        }
        res.canonicalize();
        rep.rows.push_back({n, res, res == 0});
    }
    int n0 = start;
    for (const auto& row : rep.rows)
        if (!row.holds) n0 = row.n + 1;
    rep.detected_n0 = n0;
    rep.sign_convention =
        "r(n) = h(n-1) - h(n) - H0*h(n-d) - sum_{j=1..k} (-1)^j H_j h(n-j(d-1)-d), "
        "H0 = C(k,d)/k^d, h(n) = 1 for n <= 0; residuals vanish for all "
        "n >= detected_n0 in the scanned range";
    return rep;
}

RecursionReport verify_monotone_recursion(const Pattern& v, int n_lo, int n_hi) {
    if (!is_monotone(v)) throw std::invalid_argument("pattern not monotone");
    if (n_hi < n_lo) throw std::invalid_argument("empty n range");
    const int d = v.size();
    ProbTable a(dp_perm_counts(v, n_hi + d - 1, 0));

    const int m_top = (n_hi - 1) / d + 1;
    std::map<int, Rat> M, Mt;
    for (int j = 1; j <= m_top; ++j) M.emplace(j, M_oracle(d, j));
    for (int j = 1; j <= std::max(1, (n_hi - 1) / d); ++j)
        Mt.emplace(j, Mtilde_oracle(d, j));

    const std::string form_a =
        "A: r(n) = a(n-1) - a(n) + sum_{k=1..m} (-1)^k M_k a(n-kd-1) + Mtilde_m, "
        "m = floor((n-1)/d)";
    const std::string form_b =
        "B: r(n) = a(n) - a(n-1) + sum_{k=1..m} (-1)^(k-1) M_k a(n-kd-1) + "
        "(-1)^m T(n), T(n) = Mtilde_m when d divides n-1 else M_(m+1), "
        "m = floor((n-1)/d)";

    RecursionReport rep;
    rep.theorem = "monotone";
    rep.pattern = pattern_str(v);
    rep.add_param("convention_A", form_a);
    rep.add_param("convention_B", form_b);
    const int start = std::max(n_lo, d + 1);
    if (auto note = range_note(n_lo, start); !note.empty()) rep.add_param("skipped", note);

    std::vector<ResidualRow> rows_a, rows_b;
    for (int n = start; n <= n_hi; ++n) {
        const int m = (n - 1) / d;
        Rat alt = 0;  // sum_{k=1..m} (-1)^(k-1) M_k a(n-kd-1)
        for (int kk = 1; kk <= m; ++kk) {
            Rat term = M.at(kk) * a.at(n - kk * d - 1);
            if (kk % 2 == 1)
                alt += term;
            else
                alt -= term;
        }
        Rat ra = a.at(n - 1) - a.at(n) - alt + Mt.at(m);  // m >= 1 since n > d
        const Rat close = (n - 1) % d == 0 ? Mt.at(m) : M.at(m + 1);
        Rat rb = a.at(n) - a.at(n - 1) + alt + (m % 2 == 0 ? close : -close);
        ra.canonicalize();
        rb.canonicalize();
        rows_a.push_back({n, ra, ra == 0});
        rows_b.push_back({n, rb, rb == 0});
    }
    const bool a_holds = std::all_of(rows_a.begin(), rows_a.end(),
                                     [](const ResidualRow& r) { return r.holds; });
    const bool b_holds = std::all_of(rows_b.begin(), rows_b.end(),
                                     [](const ResidualRow& r) { return r.holds; });
    rep.add_param("convention_A_holds", a_holds ? "true" : "false");
    rep.add_param("convention_B_holds", b_holds ? "true" : "false");
    if (b_holds && !a_holds) {
        rep.rows = std::move(rows_b);
        rep.sign_convention = form_b;
    } else if (a_holds && !b_holds) {
        rep.rows = std::move(rows_a);
        rep.sign_convention = form_a;
    } else {
        rep.rows = std::move(rows_b);
        rep.sign_convention = b_holds ? "both conventions hold" : "neither convention holds";
    }
    return rep;
}

RecursionReport verify_sandwich(const Pattern& v, int ell, int n_lo, int n_hi,
                                Universe universe, int k) {
    if (ell < 2) throw std::invalid_argument("ell must be >= 2");
    if (n_hi < n_lo) throw std::invalid_argument("empty n range");
    const int d = v.size();
    const bool words = universe == Universe::words;
    if (words && k < 1) throw std::invalid_argument("alphabet size must be >= 1");

    CountTable table = words ? dp_word_counts(v, k, n_hi + d - 1, 0)
                             : dp_perm_counts(v, n_hi + d - 1, 0);
    ProbTable a(table);
    const Rat b = beta_from(a, ell);
    Rat upper_coeff;
    if (words) {
        Int kd;
        mpz_ui_pow_ui(kd.get_mpz_t(), static_cast<unsigned long>(k),
                      static_cast<unsigned long>(d));
        upper_coeff = Rat(Int(d - 1), kd);
    } else {
        upper_coeff = Rat(Int(d - 1), factorial(static_cast<unsigned long>(d)));
    }
    upper_coeff.canonicalize();

    RecursionReport rep;
    rep.theorem = "sandwich";
    rep.pattern = pattern_str(v);
    rep.add_param("universe", universe_str(universe));
    if (words) rep.add_param("k", std::to_string(k));
    rep.add_param("ell", std::to_string(ell));
    rep.add_param("beta", rat_string(b));
    rep.add_param("upper_coeff", rat_string(upper_coeff));
    const int start = std::max(n_lo, ell + 2 * d + 1);
    if (n_lo < start) {
        std::ostringstream note;
        note << "n <= " << ell + 2 * d << " skipped (inequality stated for n > ell + 2d)";
        rep.add_param("skipped", note.str());
    }

    for (int n = start; n <= n_hi; ++n) {
        Rat mid = a.at(n) - a.at(n - 1) + b * a.at(n - ell - d + 1);
        Rat ub = upper_coeff * a.at(n - ell - 2 * d + 2);
        mid.canonicalize();
        rep.rows.push_back({n, mid, mid >= 0 && mid <= ub});
    }
    rep.sign_convention =
        "row residual is a(n) - a(n-1) + beta_(ell-1) a(n-ell-d+1); holds means "
        "0 <= residual <= upper_coeff * a(n-ell-2d+2)";
    return rep;
}

}  // namespace conseq
