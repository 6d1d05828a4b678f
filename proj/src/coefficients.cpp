#include "conseq/coefficients.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "conseq/errors.hpp"

namespace conseq {

namespace {

constexpr int kFieldBits = 6;
constexpr std::uint64_t kFieldMask = (1u << kFieldBits) - 1;

std::uint64_t pack_fields(const std::vector<int>& f) {
    std::uint64_t key = 0;
    for (int x : f) key = (key << kFieldBits) | static_cast<std::uint64_t>(x);
    return key;
}

std::vector<int> unpack_fields(std::uint64_t key, int m) {
    std::vector<int> f(m);
    for (int i = m - 1; i >= 0; --i) {
        f[i] = static_cast<int>(key & kFieldMask);
        key >>= kFieldBits;
    }
    return f;
}

std::set<int> completion_indices(int d, const std::vector<int>& starts) {
    std::set<int> done;
    for (int s : starts) {
        if (s < 0) throw std::invalid_argument("window start must be >= 0");
        done.insert(s + d - 1);
    }
    return done;
}

}  // namespace

Int count_constrained_perms(const Pattern& v, int N, const std::vector<int>& starts) {
    if (N > 62)
        throw budget_error("oracle cap exceeded: constrained enumeration limited to N <= 62");
    const int d = v.size();
    const int m = d - 1;
    const auto pos = value_positions(v);
    const std::set<int> done = completion_indices(d, starts);
    if (!done.empty() && *done.rbegin() >= N)
        throw std::invalid_argument("required window extends past the end");

    std::unordered_map<std::uint64_t, Int> cur;
    cur.emplace(0, Int(1));
    std::vector<int> window(d);
    for (int t = 0; t < N; ++t) {
        const int span = std::min(t, m);
        const bool must_match = done.count(t) != 0;
        if (must_match && t + 1 < d)
            throw std::logic_error("window completion before enough entries");
        std::unordered_map<std::uint64_t, Int> next;
        next.reserve(cur.size());
        for (const auto& [key, cnt] : cur) {
            std::vector<int> ranks = unpack_fields(key, span);
            for (int rp = 1; rp <= t + 1; ++rp) {
                std::vector<int> adj(ranks);
                for (int& q : adj)
                    if (q >= rp) ++q;
                if (must_match) {
                    for (int i = 0; i < m; ++i) window[i] = adj[i];
                    window[m] = rp;
                    if (!window_ordered(window, 0, pos)) continue;
                }
                std::vector<int> nstate;
                nstate.reserve(std::min(t + 1, m));
                for (int i = (span == m && m > 0) ? 1 : 0; i < span; ++i)
                    nstate.push_back(adj[i]);
                if (m > 0) nstate.push_back(rp);
                next[pack_fields(nstate)] += cnt;
            }
        }
        cur = std::move(next);
    }
    Int total = 0;
    for (const auto& [key, cnt] : cur) total += cnt;
    return total;
}

Int count_constrained_words(const Pattern& v, int k, int N,
                            const std::vector<int>& starts) {
    if (k < 1) throw std::invalid_argument("alphabet size must be >= 1");
    if (k > 62)
        throw std::invalid_argument("constrained word enumeration supports k <= 62");
    const int d = v.size();
    const int m = d - 1;
    const auto pos = value_positions(v);
    const std::set<int> done = completion_indices(d, starts);
    if (!done.empty() && *done.rbegin() >= N)
        throw std::invalid_argument("required window extends past the end");

    std::unordered_map<std::uint64_t, Int> cur;
    cur.emplace(0, Int(1));
    std::vector<int> window(d);
    for (int t = 0; t < N; ++t) {
        const int span = std::min(t, m);
        const bool must_match = done.count(t) != 0;
        if (must_match && t + 1 < d)
            throw std::logic_error("window completion before enough entries");
        std::unordered_map<std::uint64_t, Int> next;
        next.reserve(cur.size());
        for (const auto& [key, cnt] : cur) {
            std::vector<int> suffix = unpack_fields(key, span);
            for (int c = 1; c <= k; ++c) {
                if (must_match) {
                    for (int i = 0; i < m; ++i) window[i] = suffix[i];
                    window[m] = c;
                    if (!window_ordered(window, 0, pos)) continue;
                }
                std::vector<int> nstate;
                nstate.reserve(std::min(t + 1, m));
                for (int i = (span == m && m > 0) ? 1 : 0; i < span; ++i)
                    nstate.push_back(suffix[i]);
                if (m > 0) nstate.push_back(c);
                next[pack_fields(nstate)] += cnt;
            }
        }
        cur = std::move(next);
    }
    Int total = 0;
    for (const auto& [key, cnt] : cur) total += cnt;
    return total;
}

Int count_updown_perms(int N, const std::vector<int>& step) {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (static_cast<int>(step.size()) != N - 1)
        throw std::invalid_argument("step vector must have length N - 1");
    // state: rank of the last entry within the prefix
    std::unordered_map<int, Int> cur;
    cur.emplace(1, Int(1));
    for (int t = 1; t < N; ++t) {
        std::unordered_map<int, Int> next;
        for (const auto& [r, cnt] : cur) {
            for (int rp = 1; rp <= t + 1; ++rp) {
                int radj = r >= rp ? r + 1 : r;
                if (step[t - 1] > 0 && !(rp > radj)) continue;
                if (step[t - 1] < 0 && !(rp < radj)) continue;
                next[rp] += cnt;
            }
        }
        cur = std::move(next);
    }
    Int total = 0;
    for (const auto& [r, cnt] : cur) total += cnt;
    return total;
}

Rat L_oracle(const Pattern& v, int k) {
    if (k < 0) throw std::invalid_argument("chain index must be >= 0");
    if (!is_nonoverlapping(v))
        throw std::invalid_argument("pattern not non-overlapping");
    const int d = v.size();
    const int N = (k + 1) * d - k;
    std::vector<int> starts;
    for (int j = 0; j <= k; ++j) starts.push_back(j * (d - 1));
    Rat p(count_constrained_perms(v, N, starts),
          factorial(static_cast<unsigned long>(N)));
    p.canonicalize();
    return p;
}

Rat H_oracle(const Pattern& v, int k_alphabet, int j) {
    if (j < 0) throw std::invalid_argument("chain index must be >= 0");
    if (!is_nonoverlapping(v))
        throw std::invalid_argument("pattern not non-overlapping");
    const int d = v.size();
    if (k_alphabet < d)
        throw std::invalid_argument("alphabet smaller than pattern");
    const int N = (j + 1) * d - j;
    std::vector<int> starts;
    for (int i = 0; i <= j; ++i) starts.push_back(i * (d - 1));
    Int denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(k_alphabet),
                  static_cast<unsigned long>(N));
    Rat p(count_constrained_words(v, k_alphabet, N, starts), denom);
    p.canonicalize();
    return p;
}

namespace {

// Shared chain-sum skeleton for the closed forms of L and H: iterates the
// lattice points (x_0, ..., x_{k+1}) within the printed summation limits and
// accumulates a per-link binomial product supplied by the caller.
template <typename LinkProduct>
Int closed_chain_sum(const Pattern& v, int k, LinkProduct link) {
    const int d = v.size();
    const int v1 = v[0], vd = v[d - 1];
    Int total = 0;
    std::vector<int> xs(k + 2, 0);

    // recursion over the middle indices x_1..x_k
    auto rec = [&](auto&& self, int i) -> void {
        if (i == k + 1) {
            Int prod = 1;
            for (int jj = 1; jj <= k + 1 && prod != 0; ++jj) prod *= link(xs, jj);
            total += prod;
            return;
        }
        const int lo = xs[i - 1] + vd - v1;
        const int hi = xs[k + 1] - (k + 1 - i) * (d - v1);
        for (int xi = lo; xi <= hi; ++xi) {
            xs[i] = xi;
            self(self, i + 1);
        }
    };

    for (int x0 = v1; x0 <= (k + 1) * v1 - k; ++x0) {
        for (int xk1 = x0 + (k + 1) * (vd - 1); xk1 <= k * (d - 1) + vd; ++xk1) {
            xs[0] = x0;
            xs[k + 1] = xk1;
            rec(rec, 1);
        }
    }
    return total;
}

}  // namespace

Rat L_closed(const Pattern& v, int k) {
    if (k < 0) throw std::invalid_argument("chain index must be >= 0");
    const int d = v.size();
    const int v1 = v[0], vd = v[d - 1];
    if (v1 >= vd)
        throw std::invalid_argument("closed form requires v_1 < v_d");
    const int N = (k + 1) * d - k;
    Int total = closed_chain_sum(v, k, [&](const std::vector<int>& xs, int i) {
        Int p = binomial_empty_choice(xs[i] - xs[i - 1] - 1, vd - v1 - 1);
        p *= binomial_empty_choice((i + 1) * d + (k - i) * v1 - k - xs[i], d - vd - 1);
        p *= binomial_empty_choice(xs[i - 1] - (vd - 1) * i - 1, v1 - 1);
        return p;
    });
    Rat out(total, factorial(static_cast<unsigned long>(N)));
    out.canonicalize();
    return out;
}

Rat H_closed(const Pattern& v, int k_alphabet, int j) {
    if (j < 0) throw std::invalid_argument("chain index must be >= 0");
    const int d = v.size();
    const int v1 = v[0], vd = v[d - 1];
    if (v1 >= vd)
        throw std::invalid_argument("closed form requires v_1 < v_d");
    if (k_alphabet < d)
        throw std::invalid_argument("alphabet smaller than pattern");
    const int N = (j + 1) * d - j;
    const int k = j;
    Int total = closed_chain_sum(v, k, [&](const std::vector<int>& xs, int i) {
        Int p = binomial_empty_choice(xs[i] - xs[i - 1] - 1, vd - v1 - 1);
        p *= binomial_empty_choice((k_alphabet - xs[i - 1]) - (k - i) * (d - v1 - 1) - 1,
                                   d - vd - 1);
        p *= binomial_empty_choice(xs[i - 1] - (vd - 1) * i - 1, v1 - 1);
        return p;
    });
    Int denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(k_alphabet),
                  static_cast<unsigned long>(N));
    Rat out(total, denom);
    out.canonicalize();
    return out;
}

namespace {

// comparison constraints for j leading blocks of d ascending positions, each
// (except possibly the last) followed by one forced descent
std::vector<int> block_steps(int d, int blocks, bool final_ascending_block) {
    const int N = final_ascending_block ? (blocks + 1) * d : blocks * d + 1;
    std::vector<int> step(N - 1, 0);
    for (int b = 0; b < blocks; ++b) {
        const int w = b * d;
        for (int i = w; i < w + d - 1; ++i) step[i] = +1;
        step[w + d - 1] = -1;
    }
    if (final_ascending_block) {
        const int w = blocks * d;
        for (int i = w; i < w + d - 1; ++i) step[i] = +1;
    }
    return step;
}

}  // namespace

Rat M_oracle(int d, int k) {
    if (d < 2) throw std::invalid_argument("block length must be >= 2");
    if (k < 1) throw std::invalid_argument("block count must be >= 1");
    const int N = k * d + 1;
    Rat p(count_updown_perms(N, block_steps(d, k, false)),
          factorial(static_cast<unsigned long>(N)));
    p.canonicalize();
    return p;
}

Rat Mtilde_oracle(int d, int m) {
    if (d < 2) throw std::invalid_argument("block length must be >= 2");
    if (m < 1) throw std::invalid_argument("block count must be >= 1");
    const int N = (m + 1) * d;
    Rat p(count_updown_perms(N, block_steps(d, m, true)),
          factorial(static_cast<unsigned long>(N)));
    p.canonicalize();
    return p;
}

namespace {

// chain of nested y/x sums shared by the closed monotone forms; the final
// factor distinguishes M (an extra count of y_last - 1) from Mtilde (bare)
Int monotone_chain_sum(int d, int levels, bool tail_count) {
    auto recy = [&](auto&& self, int i, int xprev) -> Int {
        const int lo = i == 1 ? d : xprev + d - 2;
        Int s = 0;
        for (int y = lo; y <= d + 1; ++y) {
            Int fac = i == 1 ? binomial_empty_choice(y - 1, d - 1)
                             : binomial_empty_choice(y - xprev - 1, d - 2);
            if (fac == 0) continue;
            if (i == levels) {
                s += fac * (tail_count ? Int(y - 1) : Int(1));
            } else {
                Int inner = 0;
                for (int x = 1; x < y; ++x) inner += self(self, i + 1, x);
                s += fac * inner;
            }
        }
        return s;
    };
    return recy(recy, 1, 0);
}

}  // namespace

Rat M_closed(int d, int k) {
    if (d < 2) throw std::invalid_argument("block length must be >= 2");
    if (k < 1) throw std::invalid_argument("block count must be >= 1");
    Rat out(monotone_chain_sum(d, k, true),
            factorial(static_cast<unsigned long>(k * d + 1)));
    out.canonicalize();
    return out;
}

Rat Mtilde_closed(int d, int m) {
    if (d < 2) throw std::invalid_argument("block length must be >= 2");
    if (m < 1) throw std::invalid_argument("block count must be >= 1");
    Rat out(monotone_chain_sum(d, m, false),
            factorial(static_cast<unsigned long>(m * d + 1)));
    out.canonicalize();
    return out;
}

}  // namespace conseq
