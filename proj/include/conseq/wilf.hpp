#pragma once

#include <string>
#include <vector>

#include "conseq/counting.hpp"
#include "conseq/pattern.hpp"

namespace conseq {

// Sufficient condition for two same-length patterns to have identical
// containment statistics in words: equal overlap sets, and for every overlap
// index the prefix and suffix letter SETS agree between the patterns.
bool khor_condition(const Pattern& v, const Pattern& w);

// Partition of S_d by equality of count signatures up to the stated depth.
// This is a necessary-condition partition: blocks are candidate equivalence
// classes, and deeper signatures can only split blocks, never merge them.
struct WilfPartition {
    int d = 0;
    Universe universe = Universe::perms;
    int n_max = 0;
    int r_max = 0;
    int k_max = 0;  // words only; 0 for permutations
    std::vector<std::vector<Pattern>> blocks;
    std::vector<std::string> block_hashes;  // FNV-1a of the shared signature

    int block_of(const Pattern& v) const;  // -1 when absent
    std::string to_json(bool pretty = true) const;
};

WilfPartition classify(int d, Universe universe, int n_max, int r_max, int k_max = 5);

// For every pair satisfying khor_condition, checks that the pair shares a
// block in both the permutation and the word partitions at the given depth.
struct SufficiencyReport {
    int d = 0;
    int n_max = 0;
    int r_max = 0;
    int k_max = 0;
    std::vector<std::pair<std::string, std::string>> pairs;  // condition holds
    std::vector<std::string> violations;                     // expected empty

    std::string to_json(bool pretty = true) const;
};

SufficiencyReport check_sufficiency(int d, int n_max, int r_max, int k_max = 5);

// Restricted to non-overlapping standard-form patterns: checks that sharing
// the boundary pair (v_1, v_d) is equivalent to sharing an avoidance
// signature at the tested depth.
struct SignatureCheckReport {
    int d = 0;
    int n_max = 0;
    std::vector<std::string> groups;      // "(v1,vd): patterns..." summaries
    std::vector<std::string> violations;  // expected empty

    std::string to_json(bool pretty = true) const;
};

SignatureCheckReport nonoverlapping_signature_check(int d, int n_max);

// fraction of S_d that is non-overlapping
Rat nonoverlapping_fraction(int d);

// all patterns of S_d in lexicographic order
std::vector<Pattern> all_patterns(int d);

// process-wide worker count for the signature computations in classify;
// 0 (the default) means one worker per logical processor
int& worker_count();

}  // namespace conseq
