#include "conseq/counting.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace conseq {

std::string universe_str(Universe u) {
    return u == Universe::perms ? "perms" : "words";
}

Universe parse_universe(const std::string& s) {
    if (s == "perms" || s == "permutations") return Universe::perms;
    if (s == "words") return Universe::words;
    throw std::invalid_argument("unknown universe: " + s);
}

namespace {

template <typename Seq>
int chain_occurrences(const Seq& w, int n, const std::vector<int>& pos) {
    const int d = static_cast<int>(pos.size());
    int r = 0;
    for (int i = 0; i + d <= n; ++i) {
        if (window_ordered(w, i, pos)) ++r;
    }
    return r;
}

}  // namespace

CountTable::CountTable(Pattern v, Universe u, int k, int n_max, int r_max)
    : pat_(std::move(v)), uni_(u), k_(u == Universe::words ? k : 0),
      n_max_(n_max), r_max_(r_max) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    if (r_max < 0) throw std::invalid_argument("r_max must be >= 0");
    if (uni_ == Universe::words && k_ < 1)
        throw std::invalid_argument("alphabet size must be >= 1");
    rows_.assign(n_max_ + 1, std::vector<Int>(r_max_ + 2, Int(0)));
}

const Int& CountTable::count(int n, int r) const {
    if (n < 0 || n > n_max_) throw std::invalid_argument("n out of range");
    if (r < 0 || r > r_max_ + 1) throw std::invalid_argument("r out of range");
    return rows_[n][r];
}

Int& CountTable::at(int n, int r) {
    if (n < 0 || n > n_max_) throw std::invalid_argument("n out of range");
    if (r < 0 || r > r_max_ + 1) throw std::invalid_argument("r out of range");
    return rows_[n][r];
}

Int CountTable::row_sum(int n) const {
    if (n < 0 || n > n_max_) throw std::invalid_argument("n out of range");
    Int s = 0;
    for (const Int& c : rows_[n]) s += c;
    return s;
}

Int CountTable::total_objects(int n) const {
    if (uni_ == Universe::perms) return factorial(static_cast<unsigned long>(n));
    Int t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(k_),
                  static_cast<unsigned long>(n));
    return t;
}

void CountTable::check_invariants() const {
    const int d = pat_.size();
    for (int n = 0; n <= n_max_; ++n) {
        if (row_sum(n) != total_objects(n))
            throw verification_error("count table row " + std::to_string(n) +
                                     " does not sum to the universe size");
        // at most n - d + 1 windows exist, so counts vanish for larger r
        // (r = 0 is always feasible: short objects contain nothing)
        for (int r = std::max(1, n - d + 2); r <= r_max_; ++r) {
            if (rows_[n][r] != 0)
                throw verification_error("count table has impossible occurrence count at n=" +
                                         std::to_string(n) + " r=" + std::to_string(r));
        }
        if (n - d + 1 <= r_max_ && rows_[n][r_max_ + 1] != 0)
            throw verification_error("count table overflow bucket should be empty at n=" +
                                     std::to_string(n));
    }
}

std::string CountTable::to_csv() const {
    std::ostringstream out;
    out << "n,r,count\n";
    for (int n = 0; n <= n_max_; ++n) {
        for (int r = 0; r <= r_max_; ++r) {
            out << n << ',' << r << ',' << rows_[n][r].get_str() << '\n';
        }
    }
    return out.str();
}

CountTable CountTable::from_csv(Pattern v, Universe u, int k, const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "n,r,count")
        throw std::invalid_argument("count table CSV must start with header n,r,count");
    struct Cell { int n, r; Int c; };
    std::vector<Cell> cells;
    int n_max = -1, r_max = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw std::invalid_argument("malformed count table CSV row: " + line);
        Cell cell{std::stoi(a), std::stoi(b), Int(c)};
        n_max = std::max(n_max, cell.n);
        r_max = std::max(r_max, cell.r);
        cells.push_back(std::move(cell));
    }
    if (n_max < 0) throw std::invalid_argument("count table CSV has no rows");
    CountTable t(std::move(v), u, k, n_max, r_max);
    for (auto& cell : cells) t.at(cell.n, cell.r) = cell.c;
    for (int n = 0; n <= n_max; ++n) {
        Int exact = 0;
        for (int r = 0; r <= r_max; ++r) exact += t.count(n, r);
        t.at(n, r_max + 1) = t.total_objects(n) - exact;
    }
    t.check_invariants();
    return t;
}

std::string CountTable::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["pattern"] = pattern_str(pat_);
    j["universe"] = universe_str(uni_);
    if (uni_ == Universe::words) j["k"] = k_;
    j["rows"] = nlohmann::ordered_json::array();
    for (int n = 0; n <= n_max_; ++n) {
        for (int r = 0; r <= r_max_; ++r) {
            nlohmann::ordered_json row;
            row["n"] = n;
            row["r"] = r;
            row["count"] = rows_[n][r].get_str();
            j["rows"].push_back(std::move(row));
        }
    }
    return pretty ? j.dump(2) : j.dump();
}

CountTable brute_perm_counts(const Pattern& v, int n_max, int r_max,
                             const EnumLimits& limits) {
    if (n_max > limits.brute_perm_cap)
        throw budget_error("oracle cap exceeded: brute_perm_counts limited to n <= " +
                           std::to_string(limits.brute_perm_cap));
    CountTable t(v, Universe::perms, 0, n_max, r_max);
    const auto pos = value_positions(v);
    t.at(0, 0) = 1;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 1);
        do {
            int r = chain_occurrences(p, n, pos);
            t.at(n, std::min(r, r_max + 1)) += 1;
        } while (std::next_permutation(p.begin(), p.end()));
    }
    t.check_invariants();
    return t;
}

CountTable brute_word_counts(const Pattern& v, int k, int n_max, int r_max,
                             const EnumLimits& limits) {
    if (k < 1) throw std::invalid_argument("alphabet size must be >= 1");
    Int total = 0;
    for (int n = 1; n <= n_max; ++n) {
        Int pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(k),
                      static_cast<unsigned long>(n));
        total += pw;
    }
    const Int cap(static_cast<long>(limits.brute_word_cap));
    if (total > cap)
        throw budget_error("oracle cap exceeded: brute_word_counts would enumerate " +
                           total.get_str() + " words");
    CountTable t(v, Universe::words, k, n_max, r_max);
    const auto pos = value_positions(v);
    t.at(0, 0) = 1;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<int> w(n, 1);
        while (true) {
            int r = chain_occurrences(w, n, pos);
            t.at(n, std::min(r, r_max + 1)) += 1;
            int i = n - 1;
            while (i >= 0 && w[i] == k) w[i--] = 1;
            if (i < 0) break;
            ++w[i];
        }
    }
    t.check_invariants();
    return t;
}

namespace {

// State key layout for the suffix DP: the exact ranks (permutations) or
// letters (words) of the last d-1 entries, packed 6 bits each, scaled by the
// number of occurrence buckets plus the current bucket.
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

}  // namespace

CountTable dp_perm_counts(const Pattern& v, int n_max, int r_max) {
    if (n_max > 62)
        throw std::invalid_argument("dp_perm_counts state encoding supports n <= 62");
    const int d = v.size();
    const int m = d - 1;
    const auto pos = value_positions(v);
    const std::uint64_t buckets = static_cast<std::uint64_t>(r_max) + 2;
    CountTable t(v, Universe::perms, 0, n_max, r_max);
    t.at(0, 0) = 1;

    // states: ranks of the last min(n, d-1) prefix entries within the whole
    // prefix, plus the capped occurrence count so far
    std::unordered_map<std::uint64_t, Int> cur;
    cur.emplace(0, Int(1));
    std::vector<int> window(d);
    for (int n = 0; n < n_max; ++n) {
        const int span = std::min(n, m);       // tracked suffix length
        const int nspan = std::min(n + 1, m);  // tracked after the insertion
        std::unordered_map<std::uint64_t, Int> next;
        next.reserve(cur.size() * 2);
        for (const auto& [key, cnt] : cur) {
            const int rb = static_cast<int>(key % buckets);
            std::vector<int> ranks = unpack_fields(key / buckets, span);
            for (int rp = 1; rp <= n + 1; ++rp) {
                // ranks of the old suffix entries within the extended prefix
                std::vector<int> adj(ranks);
                for (int& q : adj)
                    if (q >= rp) ++q;
                int occ = 0;
                if (n + 1 >= d) {
                    for (int i = 0; i < m; ++i) window[i] = adj[i];
                    window[m] = rp;
                    occ = window_ordered(window, 0, pos) ? 1 : 0;
                }
                int rb2 = std::min(rb + occ, r_max + 1);
                std::vector<int> nstate;
                nstate.reserve(nspan);
                for (int i = (span == m && m > 0) ? 1 : 0; i < span; ++i)
                    nstate.push_back(adj[i]);
                if (m > 0) nstate.push_back(rp);
                std::uint64_t nkey = pack_fields(nstate) * buckets +
                                     static_cast<std::uint64_t>(rb2);
                next[nkey] += cnt;
            }
        }
        cur = std::move(next);
        for (const auto& [key, cnt] : cur)
            t.at(n + 1, static_cast<int>(key % buckets)) += cnt;
    }
    t.check_invariants();
    return t;
}

CountTable dp_word_counts(const Pattern& v, int k, int n_max, int r_max) {
    if (k > 62)
        throw std::invalid_argument("dp_word_counts state encoding supports k <= 62");
    const int d = v.size();
    const int m = d - 1;
    const auto pos = value_positions(v);
    const std::uint64_t buckets = static_cast<std::uint64_t>(r_max) + 2;
    CountTable t(v, Universe::words, k, n_max, r_max);
    t.at(0, 0) = 1;

    // states: the last min(n, d-1) letters plus the capped occurrence count
    std::unordered_map<std::uint64_t, Int> cur;
    cur.emplace(0, Int(1));
    std::vector<int> window(d);
    for (int n = 0; n < n_max; ++n) {
        const int span = std::min(n, m);
        std::unordered_map<std::uint64_t, Int> next;
        next.reserve(cur.size() * 2);
        for (const auto& [key, cnt] : cur) {
            const int rb = static_cast<int>(key % buckets);
            std::vector<int> suffix = unpack_fields(key / buckets, span);
            for (int c = 1; c <= k; ++c) {
                int occ = 0;
                if (n + 1 >= d) {
                    for (int i = 0; i < m; ++i) window[i] = suffix[i];
                    window[m] = c;
                    occ = window_ordered(window, 0, pos) ? 1 : 0;
                }
                int rb2 = std::min(rb + occ, r_max + 1);
                std::vector<int> nstate;
                nstate.reserve(std::min(n + 1, m));
                for (int i = (span == m && m > 0) ? 1 : 0; i < span; ++i)
                    nstate.push_back(suffix[i]);
                if (m > 0) nstate.push_back(c);
                std::uint64_t nkey = pack_fields(nstate) * buckets +
                                     static_cast<std::uint64_t>(rb2);
                next[nkey] += cnt;
            }
        }
        cur = std::move(next);
        for (const auto& [key, cnt] : cur)
            t.at(n + 1, static_cast<int>(key % buckets)) += cnt;
    }
    t.check_invariants();
    return t;
}

Int perms_from_words(const Pattern& v, int n, int r) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (n == 0) return r == 0 ? Int(1) : Int(0);
    // inclusion-exclusion over the set of letters actually used:
    // g_r(S_n) = sum_{k=1}^{n} (-1)^{n-k} C(n,k) g_r([k]^n)
    Int acc = 0;
    for (int k = 1; k <= n; ++k) {
        CountTable wt = dp_word_counts(v, k, n, r);
        Int term = binomial(n, k) * wt.count(n, r);
        if ((n - k) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

Rat prefix_prob(const CountTable& table, long n, int r) {
    if (r < 1) throw std::invalid_argument("occurrence threshold must be >= 1");
    if (n <= 0) return Rat(1);
    const int d = table.pattern().size();
    const long big = n + d - 1;
    if (big > table.n_max())
        throw std::invalid_argument("count table too small for requested n");
    if (r - 1 > table.r_max())
        throw std::invalid_argument("count table too small for requested r");
    Int favorable = 0;
    for (int j = 0; j < r; ++j) favorable += table.count(static_cast<int>(big), j);
    Rat p(favorable, table.total_objects(static_cast<int>(big)));
    p.canonicalize();
    return p;
}

namespace {

std::optional<std::filesystem::path> cache_dir() {
    const char* env = std::getenv("CONSEQ_LAB_CACHE_DIR");
    if (env == nullptr || *env == '\0') return std::nullopt;
    return std::filesystem::path(env);
}

std::string cache_name(const Pattern& v, Universe u, int k,
                       const std::string& engine, int n_max, int r_max) {
    std::string pat = pattern_str(v);
    std::replace(pat.begin(), pat.end(), ',', '-');
    std::ostringstream name;
    name << pat << '_' << universe_str(u);
    if (u == Universe::words) name << k;
    name << '_' << engine << "_n" << n_max << "_r" << r_max << "_v" << kVersion
         << ".csv";
    return name.str();
}

}  // namespace

std::optional<CountTable> cache_load(const Pattern& v, Universe u, int k,
                                     const std::string& engine, int n_max, int r_max) {
    auto dir = cache_dir();
    if (!dir) return std::nullopt;
    auto path = *dir / cache_name(v, u, k, engine, n_max, r_max);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        CountTable t = CountTable::from_csv(v, u, k, buf.str());
        if (t.n_max() != n_max || t.r_max() != r_max) return std::nullopt;
        return t;
    } catch (const std::exception&) {
        return std::nullopt;  // corrupt cache entries are ignored, not fatal
    }
}

void cache_store(const CountTable& table, const std::string& engine) {
    auto dir = cache_dir();
    if (!dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    if (ec) return;
    auto path = *dir / cache_name(table.pattern(), table.universe(), table.alphabet(),
                                  engine, table.n_max(), table.r_max());
    std::ofstream out(path);
    out << table.to_csv();
}

CountTable perm_counts_cached(const Pattern& v, int n_max, int r_max) {
    if (auto hit = cache_load(v, Universe::perms, 0, "dp", n_max, r_max)) return *hit;
    CountTable t = dp_perm_counts(v, n_max, r_max);
    cache_store(t, "dp");
    return t;
}

CountTable word_counts_cached(const Pattern& v, int k, int n_max, int r_max) {
    if (auto hit = cache_load(v, Universe::words, k, "dp", n_max, r_max)) return *hit;
    CountTable t = dp_word_counts(v, k, n_max, r_max);
    cache_store(t, "dp");
    return t;
}

}  // namespace conseq
