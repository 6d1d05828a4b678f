#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conseq/coefficients.hpp"
#include "conseq/counting.hpp"

namespace conseq {

// Threshold probabilities derived from a count table: entry n is the
// probability that a uniform object of size n + d - 1 contains the pattern
// fewer than r times, extended by the convention value 1 for n <= 0.
class ProbTable {
public:
    explicit ProbTable(const CountTable& table, int r = 1);

    Rat at(long n) const;
    int n_max() const { return n_max_; }
    int threshold() const { return r_; }
    const Pattern& pattern() const { return pat_; }

private:
    Pattern pat_;
    int n_max_;
    int r_;
    std::vector<Rat> vals_;  // indices 1..n_max
};

// first difference of consecutive avoidance probabilities at index ell
Rat beta_from(const ProbTable& probs, int ell);
Rat beta(const Pattern& v, int ell);
Rat beta_w(const Pattern& v, int k, int ell);

enum class CoefSource { oracle, closed };

struct ResidualRow {
    int n;
    Rat residual;
    bool holds;
};

struct RecursionReport {
    std::string theorem;  // "nonoverlap" | "word" | "monotone" | "sandwich"
    std::string pattern;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<ResidualRow> rows;
    std::string sign_convention;
    std::optional<int> detected_n0;

    bool all_hold() const;
    void add_param(const std::string& key, const std::string& value);
    std::string to_json(bool pretty = true) const;
};

// Avoidance recursion for non-overlapping patterns, driven by the chain
// coefficients L_j; residuals are exact rationals and "holds" means exactly
// zero.  Coefficients come from the enumeration oracle or the closed form.
RecursionReport verify_nonoverlapping_recursion(const Pattern& v, int n_lo, int n_hi,
                                                CoefSource coefficients);

// Word analogue over alphabet [k]; the recursion only holds from some
// threshold length onward, which is detected by scanning and reported.
RecursionReport verify_word_recursion(const Pattern& v, int k, int n_lo, int n_hi);

// Monotone-pattern recursion; two competing sign conventions are evaluated
// and the report names the one whose residuals vanish.
RecursionReport verify_monotone_recursion(const Pattern& v, int n_lo, int n_hi);

// Two-sided sandwich inequality on the first difference of avoidance
// probabilities; rows carry the middle expression, holds means it lies in
// [0, upper bound].  For the word universe an alphabet size k is required.
RecursionReport verify_sandwich(const Pattern& v, int ell, int n_lo, int n_hi,
                                Universe universe, int k = 0);

}  // namespace conseq
