#pragma once

#include <string>
#include <vector>

#include "conseq/pattern.hpp"
#include "conseq/rational.hpp"

namespace conseq {

// Instance set I_v(k): every word obtained by writing v over a d-element
// subset of [k]; each instance has distinct letters and reduces to v.
struct InstanceSet {
    Pattern v;
    int k;
    std::vector<Word> words;  // lexicographic order (serialization contract)
};

InstanceSet instances(const Pattern& v, int k);

// (u*s)_{alpha,k} = sum_{i=1}^d (k/alpha)^i [last i letters of u == first i
// letters of s]; the empty word correlates to 0 with everything.
Rat alpha_correlation(const Word& u, const Word& s, const Rat& alpha, int k);

struct CorrMatrix {
    Pattern v;
    int k = 0;
    Rat alpha;
    std::vector<Word> index;
    std::vector<std::vector<Rat>> entries;  // entries[i][j] = (index_i * index_j)

    int position_of(const Word& w) const;  // throws when absent
    std::string to_json(bool pretty = true) const;
};

CorrMatrix build_R(const Pattern& v, int k, const Rat& alpha);

enum class ModVariant { row_u, col_u_t, both };

// row_u: row of u becomes all ones; col_u_t: column of u becomes the vector
// of correlations (t * w) over the index words w; both: row of u becomes
// ones, then the column of s becomes the t-correlations (the shared cell
// takes the column value).
CorrMatrix build_R_modified(const CorrMatrix& base, ModVariant variant,
                            const Word& u, const Word& s, const Word& t);

// exact determinant by fraction-free Bareiss elimination after clearing row
// denominators
Rat det_rational(const std::vector<std::vector<Rat>>& m);

// Waiting-time transform of the first instance window completed after an
// initial prefix t (t empty = cold start): e = E[alpha^T] plus the
// per-instance split x_s = E[alpha^T 1{the completing window is s}].
struct T1Solution {
    Rat e;
    std::vector<Rat> x;
    std::vector<Word> index;
};

T1Solution expected_alpha_T1(const Pattern& v, int k, const Rat& alpha, const Word& t);

// E[alpha^{T^(r)}} for the r-th completed instance window (windows may
// overlap), from a cold start; computed by the instance-set recursion.
Rat expected_alpha_Tr(const Pattern& v, int k, const Rat& alpha, int r);

// W_r = (alpha/(1-alpha)) (E[alpha^{T^(r)}] - E[alpha^{T^(r+1)}]), with
// E[alpha^{T^(0)}] := 1; cross-checked against the truncated series
// sum_n P(exactly r occurrences in n letters) alpha^(n+1) with a certified
// geometric tail bound.
struct GenfuncResult {
    Rat value;
    Rat series;
    Rat tail_bound;
    bool within = false;
    int truncation = 0;
};

GenfuncResult genfunc_value(const Pattern& v, int k, const Rat& alpha, int r,
                            double tolerance = 1e-15);

// Substitutes the transform solution back into the defining linear system;
// every residual must be the exact rational zero.
struct T1SystemReport {
    std::vector<Rat> residuals;  // one per system equation
    Rat sum_residual;            // e - sum_s x_s
    bool all_zero = false;
};

T1SystemReport verify_T1_system(const Pattern& v, int k, const Rat& alpha, const Word& t);

}  // namespace conseq
