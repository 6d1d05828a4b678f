#pragma once

#include <set>
#include <string>
#include <vector>

namespace conseq {

// permutation pattern over [d], one-line notation, d >= 2
class Pattern {
public:
    explicit Pattern(std::vector<int> entries);
    const std::vector<int>& entries() const { return v_; }
    int size() const { return static_cast<int>(v_.size()); }
    int operator[](int i) const { return v_[i]; }  // 0-based
    bool operator==(const Pattern& o) const { return v_ == o.v_; }
    bool operator<(const Pattern& o) const { return v_ < o.v_; }

private:
    std::vector<int> v_;
};

// word over alphabet [k]; the alphabet size travels with the letters
struct Word {
    std::vector<int> letters;
    int k = 1;
    Word() = default;
    Word(std::vector<int> l, int alphabet);
    int size() const { return static_cast<int>(letters.size()); }
    bool operator==(const Word& o) const { return letters == o.letters && k == o.k; }
};

// tie-preserving rank map; throws on empty input
std::vector<int> reduce(const std::vector<int>& w);

// number of length-d windows of w reducing to v; 0 when |w| < d
long long count_consecutive(const Pattern& v, const std::vector<int>& w);

// {i in [d-1] : reduce(prefix_i) == reduce(suffix_i)}; always contains 1
std::set<int> overlap_set(const Pattern& v);

bool is_nonoverlapping(const Pattern& v);  // d >= 3 required
bool is_monotone(const Pattern& v);        // d >= 3 required

Pattern reversed(const Pattern& v);
Pattern complement_of(const Pattern& v);
bool is_standard_form(const Pattern& v);   // v_1 < v_d and v_1 + v_d <= d+1
Pattern standardize(const Pattern& v);     // lex-smallest standard orbit member

// text form: digit string for d <= 9, comma-separated otherwise
Pattern parse_pattern(const std::string& s);
std::string pattern_str(const Pattern& v);
std::string word_str(const Word& w);

// pos[j] is the index of value j+1 in v; a window w[i..i+d-1] is an
// occurrence of v exactly when w[i+pos[0]] < w[i+pos[1]] < ... holds
// strictly (strictness also rejects windows with repeated letters)
std::vector<int> value_positions(const Pattern& v);

template <typename Seq>
bool window_ordered(const Seq& w, int start, const std::vector<int>& pos) {
    for (std::size_t j = 0; j + 1 < pos.size(); ++j) {
        if (!(w[start + pos[j]] < w[start + pos[j + 1]])) return false;
    }
    return true;
}

}  // namespace conseq
