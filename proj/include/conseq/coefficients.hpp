#pragma once

#include "conseq/pattern.hpp"
#include "conseq/rational.hpp"

namespace conseq {

// Chain coefficients for the avoidance recursions.  Each L/H/M value is the
// probability of a prescribed chain of occurrences (or ascent/descent runs)
// at fixed positions; the *_oracle functions compute that probability by
// exact constrained enumeration and are authoritative.  The *_closed
// functions evaluate nested-sum formulas verbatim so they can be graded
// against the oracles; several of them are known not to match and callers
// must treat the oracle as the source of truth.

// P(windows starting at positions 1, d, 2d-1, ..., k(d-1)+1 all form
// occurrences of v) over uniform permutations of length (k+1)d - k.
// Requires a non-overlapping pattern: consecutive required windows share
// exactly one position.
Rat L_oracle(const Pattern& v, int k);

// Nested-sum formula for the same quantity; requires v_1 < v_d.  Empty
// binomial choices C(n, 0) count as 1 for every n.
Rat L_closed(const Pattern& v, int k);

// Word analogue of L over [k_alphabet]^((j+1)d - j).
Rat H_oracle(const Pattern& v, int k_alphabet, int j);
Rat H_closed(const Pattern& v, int k_alphabet, int j);

// Monotone-chain coefficients (pattern 12...d).  M_k is the probability,
// over uniform permutations of length kd + 1, that k consecutive blocks of
// d positions are each increasing with a descent joining one block to the
// next.  Mtilde_m appends one final fully increasing block (length (m+1)d)
// instead of a trailing descent.
Rat M_oracle(int d, int k);
Rat Mtilde_oracle(int d, int m);
Rat M_closed(int d, int k);
Rat Mtilde_closed(int d, int m);

// Exact count of permutations of [N] whose windows at the given 0-based
// start positions all form occurrences of v (no constraint elsewhere).
Int count_constrained_perms(const Pattern& v, int N, const std::vector<int>& starts);

// Same over words in [k]^N.
Int count_constrained_words(const Pattern& v, int k, int N,
                            const std::vector<int>& starts);

// Permutations of [N] with a forced comparison at selected adjacent pairs:
// step[i] = +1 forces p[i] < p[i+1], -1 forces p[i] > p[i+1], 0 leaves the
// pair free.  step has length N-1.
Int count_updown_perms(int N, const std::vector<int>& step);

}  // namespace conseq
