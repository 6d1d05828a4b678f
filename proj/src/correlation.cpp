#include "conseq/correlation.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "conseq/counting.hpp"
#include "conseq/errors.hpp"

namespace conseq {

InstanceSet instances(const Pattern& v, int k) {
    const int d = v.size();
    if (k < d) throw std::invalid_argument("alphabet smaller than pattern");
    InstanceSet out{v, k, {}};
    std::vector<int> subset(d);
    // iterate d-element subsets of [k] in lexicographic order
    for (int i = 0; i < d; ++i) subset[i] = i + 1;
    while (true) {
        std::vector<int> letters(d);
        for (int i = 0; i < d; ++i) letters[i] = subset[v[i] - 1];
        out.words.emplace_back(letters, k);
        int i = d - 1;
        while (i >= 0 && subset[i] == k - (d - 1 - i)) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < d; ++j) subset[j] = subset[j - 1] + 1;
    }
    std::sort(out.words.begin(), out.words.end(),
              [](const Word& a, const Word& b) { return a.letters < b.letters; });
    return out;
}

Rat alpha_correlation(const Word& u, const Word& s, const Rat& alpha, int k) {
    if (!(alpha > 0) || !(alpha < 1))
        throw std::invalid_argument("alpha must lie in (0,1)");
    if (u.letters.empty()) return Rat(0);  // (eps * s) = 0
    if (u.letters.size() != s.letters.size())
        throw std::invalid_argument("length mismatch");
    const int d = static_cast<int>(s.letters.size());
    Rat base = Rat(k) / alpha;
    base.canonicalize();
    Rat tot(0);
    for (int i = 1; i <= d; ++i) {
        bool match = true;
        for (int j = 0; j < i && match; ++j)
            match = u.letters[d - i + j] == s.letters[j];
        if (match) tot += rat_pow(base, i);
    }
    tot.canonicalize();
    return tot;
}

int CorrMatrix::position_of(const Word& w) const {
    for (std::size_t i = 0; i < index.size(); ++i)
        if (index[i].letters == w.letters) return static_cast<int>(i);
    throw std::invalid_argument("word not in the index set");
}

std::string CorrMatrix::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["pattern"] = pattern_str(v);
    j["k"] = k;
    j["alpha"] = rat_string(alpha);
    j["index"] = nlohmann::ordered_json::array();
    for (const auto& w : index) j["index"].push_back(word_str(w));
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& row : entries) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& x : row) r.push_back(rat_string(x));
        j["entries"].push_back(std::move(r));
    }
    return pretty ? j.dump(2) : j.dump();
}

CorrMatrix build_R(const Pattern& v, int k, const Rat& alpha) {
    InstanceSet I = instances(v, k);
    CorrMatrix m{v, k, alpha, I.words, {}};
    const std::size_t n = m.index.size();
    m.entries.assign(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.entries[i][j] = alpha_correlation(m.index[i], m.index[j], alpha, k);
    return m;
}

CorrMatrix build_R_modified(const CorrMatrix& base, ModVariant variant,
                            const Word& u, const Word& s, const Word& t) {
    CorrMatrix m = base;
    const std::size_t n = m.index.size();
    if (variant == ModVariant::row_u || variant == ModVariant::both) {
        const int r = m.position_of(u);
        for (std::size_t j = 0; j < n; ++j) m.entries[r][j] = Rat(1);
    }
    if (variant == ModVariant::col_u_t || variant == ModVariant::both) {
        const int c = m.position_of(variant == ModVariant::both ? s : u);
        for (std::size_t i = 0; i < n; ++i)
            m.entries[i][c] = alpha_correlation(t, m.index[i], m.alpha, m.k);
    }
    return m;
}

Rat det_rational(const std::vector<std::vector<Rat>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return Rat(1);
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("matrix not square");

    // clear denominators per row, tracking the product of the multipliers
    std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
    Int scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Int lcm = 1;
        for (const Rat& x : m[i]) {
            Int den = x.get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
        for (std::size_t j = 0; j < n; ++j) {
            Rat scaled = m[i][j] * Rat(lcm);
            scaled.canonicalize();
            a[i][j] = scaled.get_num();  // denominator is 1 after scaling
        }
        scale *= lcm;
    }

    // fraction-free Bareiss elimination
    int sign = 1;
    Int prev = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            sign = -sign;
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                Int t = a[i][j] * a[c][c] - a[i][c] * a[c][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[c][c];
    }
    Rat det(sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1], scale);
    det.canonicalize();
    return det;
}

namespace {

Rat kd_weight(const Rat& alpha, int k, int d) {
    Rat base = Rat(k) / alpha;
    base.canonicalize();
    return rat_pow(base, d);
}

// right-hand side of the linear system for start word t:
// rhs[q] = 1/(1-alpha) + (t*q) - (k/alpha)^d 1{t=q}
std::vector<Rat> system_rhs(const CorrMatrix& R, const Word& t) {
    const Rat g = Rat(1) / (Rat(1) - R.alpha);
    const Rat kd = kd_weight(R.alpha, R.k, R.v.size());
    std::vector<Rat> rhs;
    rhs.reserve(R.index.size());
    for (const auto& q : R.index) {
        Rat b = g + alpha_correlation(t, q, R.alpha, R.k);
        if (t.letters == q.letters) b -= kd;
        b.canonicalize();
        rhs.push_back(b);
    }
    return rhs;
}

// coefficient matrix C[q][s] = (s*q) + 1/(1-alpha)
std::vector<std::vector<Rat>> system_matrix(const CorrMatrix& R) {
    const std::size_t n = R.index.size();
    const Rat g = Rat(1) / (Rat(1) - R.alpha);
    std::vector<std::vector<Rat>> C(n, std::vector<Rat>(n));
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t s = 0; s < n; ++s) C[q][s] = R.entries[s][q] + g;
    return C;
}

}  // namespace

T1Solution expected_alpha_T1(const Pattern& v, int k, const Rat& alpha, const Word& t) {
    const CorrMatrix R = build_R(v, k, alpha);
    const std::size_t n = R.index.size();
    const Rat one_minus = Rat(1) - alpha;

    const Rat dR = det_rational(R.entries);
    std::vector<Rat> dRu(n);
    for (std::size_t u = 0; u < n; ++u) {
        auto M = R.entries;
        for (std::size_t j = 0; j < n; ++j) M[u][j] = Rat(1);
        dRu[u] = det_rational(M);
    }
    Rat denom = one_minus * dR;
    for (const Rat& x : dRu) denom += x;
    denom.canonicalize();
    if (denom == 0) {
        throw std::runtime_error("singular system at alpha = " + rat_string(alpha));
    }

    T1Solution sol;
    sol.index = R.index;
    sol.x.resize(n);
    if (t.letters.empty()) {
        sol.e = Rat(1) - one_minus * dR / denom;
        for (std::size_t s = 0; s < n; ++s) sol.x[s] = dRu[s] / denom;
    } else {
        // numerator rows carry (t*q) - (k/alpha)^d 1{t=q}
        const Rat kd = kd_weight(alpha, k, v.size());
        std::vector<Rat> w(n);
        for (std::size_t q = 0; q < n; ++q) {
            w[q] = alpha_correlation(t, R.index[q], alpha, k);
            if (t.letters == R.index[q].letters) w[q] -= kd;
        }
        Rat sum_t(0);
        for (std::size_t u = 0; u < n; ++u) {
            auto M = R.entries;
            M[u] = w;
            sum_t += det_rational(M);
        }
        sol.e = Rat(1) - one_minus * (dR - sum_t) / denom;

        // per-instance split by Cramer on the defining system
        const auto C = system_matrix(R);
        const auto rhs = system_rhs(R, t);
        const Rat D = det_rational(C);
        if (D == 0)
            throw std::runtime_error("singular system at alpha = " + rat_string(alpha));
        for (std::size_t j = 0; j < n; ++j) {
            auto M = C;
            for (std::size_t q = 0; q < n; ++q) M[q][j] = rhs[q];
            sol.x[j] = det_rational(M) / D;
            sol.x[j].canonicalize();
        }
    }
    sol.e.canonicalize();
    Rat total(0);
    for (auto& x : sol.x) {
        x.canonicalize();
        total += x;
    }
    if (total != sol.e)
        throw verification_error("per-instance transforms do not sum to the total");
    return sol;
}

Rat expected_alpha_Tr(const Pattern& v, int k, const Rat& alpha, int r) {
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    const Word eps({}, k);
    const T1Solution from_eps = expected_alpha_T1(v, k, alpha, eps);
    if (r == 1) return from_eps.e;

    const std::size_t n = from_eps.index.size();
    std::vector<Rat> y(n);                   // y[u] = E[alpha^{T^(j)}] from start u
    std::vector<std::vector<Rat>> Q(n);      // Q[u][s] per-instance splits from u
    for (std::size_t u = 0; u < n; ++u) {
        T1Solution s = expected_alpha_T1(v, k, alpha, from_eps.index[u]);
        y[u] = s.e;
        Q[u] = s.x;
    }
    for (int step = 0; step < r - 2; ++step) {
        std::vector<Rat> next(n);
        for (std::size_t u = 0; u < n; ++u) {
            Rat acc(0);
            for (std::size_t s = 0; s < n; ++s) acc += Q[u][s] * y[s];
            acc.canonicalize();
            next[u] = acc;
        }
        y = std::move(next);
    }
    Rat out(0);
    for (std::size_t s = 0; s < n; ++s) out += from_eps.x[s] * y[s];
    out.canonicalize();
    return out;
}

GenfuncResult genfunc_value(const Pattern& v, int k, const Rat& alpha, int r,
                            double tolerance) {
    if (r < 0) throw std::invalid_argument("r must be >= 0");
    GenfuncResult res;
    const Rat Er = r == 0 ? Rat(1) : expected_alpha_Tr(v, k, alpha, r);
    const Rat Er1 = expected_alpha_Tr(v, k, alpha, r + 1);
    res.value = alpha / (Rat(1) - alpha) * (Er - Er1);
    res.value.canonicalize();

    // smallest truncation with alpha^(N+2)/(1-alpha) <= tolerance
    constexpr int kMaxN = 400;
    int N = -1;
    Rat tail = rat_pow(alpha, 2) / (Rat(1) - alpha);
    for (int cand = 0; cand <= kMaxN; ++cand) {
        if (rat_double(tail) <= tolerance) {
            N = cand;
            break;
        }
        tail *= alpha;
    }
    if (N < 0) {
        std::ostringstream msg;
        msg << "series truncation beyond " << kMaxN
            << " terms required for tolerance " << tolerance;
        throw budget_error(msg.str());
    }
    res.truncation = N;
    res.tail_bound = tail;
    res.tail_bound.canonicalize();

    CountTable t = dp_word_counts(v, k, N, r);
    Rat series = r == 0 ? alpha : Rat(0);
    const Rat step = alpha / Rat(k);
    Rat power(1);
    for (int l = 1; l <= N; ++l) {
        power *= step;
        series += Rat(t.count(l, r)) * power * alpha;
    }
    series.canonicalize();
    res.series = series;
    Rat diff = res.value - series;
    if (diff < 0) diff = -diff;
    res.within = diff <= res.tail_bound;
    return res;
}

T1SystemReport verify_T1_system(const Pattern& v, int k, const Rat& alpha, const Word& t) {
    const CorrMatrix R = build_R(v, k, alpha);
    const T1Solution sol = expected_alpha_T1(v, k, alpha, t);
    const auto C = system_matrix(R);
    const auto rhs = system_rhs(R, t);
    const Rat g = Rat(1) / (Rat(1) - alpha);
    const std::size_t n = R.index.size();

    T1SystemReport rep;
    rep.all_zero = true;
    for (std::size_t q = 0; q < n; ++q) {
        Rat lhs = g * sol.e;
        for (std::size_t s = 0; s < n; ++s) lhs += C[q][s] * sol.x[s] - g * sol.x[s];
        Rat resq = lhs - rhs[q];
        resq.canonicalize();
        if (resq != 0) rep.all_zero = false;
        rep.residuals.push_back(resq);
    }
    Rat total(0);
    for (const Rat& x : sol.x) total += x;
    rep.sum_residual = sol.e - total;
    rep.sum_residual.canonicalize();
    if (rep.sum_residual != 0) rep.all_zero = false;
    return rep;
}

}  // namespace conseq
