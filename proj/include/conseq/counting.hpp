#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conseq/errors.hpp"
#include "conseq/pattern.hpp"
#include "conseq/rational.hpp"

namespace conseq {

enum class Universe { perms, words };

std::string universe_str(Universe u);
Universe parse_universe(const std::string& s);

// Caps for the enumeration engines.  The brute-force engines refuse to run
// past their caps unless the caller raises them explicitly.
struct EnumLimits {
    int brute_perm_cap = 10;            // max n for next_permutation sweep
    long long brute_word_cap = 100000000;  // max total words k^1 + ... + k^n
};

// Occurrence-count table: rows[n][r] = number of objects of size n whose
// number of consecutive occurrences of the pattern is exactly r, for
// r = 0..r_max.  rows[n][r_max + 1] aggregates everything with more than
// r_max occurrences so each row still sums to n! (or k^n).
class CountTable {
public:
    CountTable(Pattern v, Universe u, int k, int n_max, int r_max);

    const Pattern& pattern() const { return pat_; }
    Universe universe() const { return uni_; }
    int alphabet() const { return k_; }  // 0 for permutations
    int n_max() const { return n_max_; }
    int r_max() const { return r_max_; }

    const Int& count(int n, int r) const;
    const Int& overflow(int n) const { return count(n, r_max_ + 1); }
    Int& at(int n, int r);
    Int row_sum(int n) const;
    Int total_objects(int n) const;  // n! or k^n

    // checks row sums and the vanishing tail r >= n - d + 2
    void check_invariants() const;

    std::string to_csv() const;
    static CountTable from_csv(Pattern v, Universe u, int k, const std::string& csv);
    std::string to_json(bool pretty = true) const;

private:
    Pattern pat_;
    Universe uni_;
    int k_;
    int n_max_;
    int r_max_;
    std::vector<std::vector<Int>> rows_;
};

// Exhaustive engines (oracles).
CountTable brute_perm_counts(const Pattern& v, int n_max, int r_max,
                             const EnumLimits& limits = {});
CountTable brute_word_counts(const Pattern& v, int k, int n_max, int r_max,
                             const EnumLimits& limits = {});

// Dynamic-programming engines over suffix states.
CountTable dp_perm_counts(const Pattern& v, int n_max, int r_max);
CountTable dp_word_counts(const Pattern& v, int k, int n_max, int r_max);

// Recovers g_r(v; S_n) from word tables across alphabet sizes via
// inclusion-exclusion over the set of letters actually used.
Int perms_from_words(const Pattern& v, int n, int r);

// Probability that a uniform object of size n + d - 1 has fewer than r
// occurrences; equals 1 for n <= 0 by convention.  The table must cover
// sizes up to n + d - 1 and occurrence counts up to r - 1.
Rat prefix_prob(const CountTable& table, long n, int r = 1);

// File cache keyed by (pattern, universe, k, engine, n_max, r_max, version).
// Enabled when the CONSEQ_LAB_CACHE_DIR environment variable is set.
std::optional<CountTable> cache_load(const Pattern& v, Universe u, int k,
                                     const std::string& engine, int n_max, int r_max);
void cache_store(const CountTable& table, const std::string& engine);

// cache-aware wrappers used by the CLI
CountTable perm_counts_cached(const Pattern& v, int n_max, int r_max);
CountTable word_counts_cached(const Pattern& v, int k, int n_max, int r_max);

}  // namespace conseq
