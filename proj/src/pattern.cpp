#include "conseq/pattern.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace conseq {

Pattern::Pattern(std::vector<int> entries) : v_(std::move(entries)) {
    const int d = static_cast<int>(v_.size());
    if (d < 2) throw std::invalid_argument("pattern length must be >= 2");
    std::vector<char> seen(d + 1, 0);
    for (int x : v_) {
        if (x < 1 || x > d || seen[x])
            throw std::invalid_argument("pattern must be a permutation of [d]");
        seen[x] = 1;
    }
}

Word::Word(std::vector<int> l, int alphabet) : letters(std::move(l)), k(alphabet) {
    if (k < 1) throw std::invalid_argument("alphabet size must be >= 1");
    for (int c : letters)
        if (c < 1 || c > k)
            throw std::invalid_argument("letter outside alphabet");
}

std::vector<int> reduce(const std::vector<int>& w) {
    if (w.empty()) throw std::invalid_argument("empty sequence");
    std::vector<int> sorted(w);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        out[i] = 1 + static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), w[i]) - sorted.begin());
    }
    return out;
}

namespace {

// does w[from..from+d) reduce to v? tie-aware order-isomorphism check
bool window_matches(const std::vector<int>& v, const std::vector<int>& w, size_t from) {
    const size_t d = v.size();
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i + 1; j < d; ++j) {
            const int cv = (v[i] < v[j]) - (v[i] > v[j]);
            const int cw = (w[from + i] < w[from + j]) - (w[from + i] > w[from + j]);
            if (cv != cw) return false;
        }
    return true;
}

}  // namespace

std::vector<int> value_positions(const Pattern& v) {
    const int d = v.size();
    std::vector<int> pos(d, -1);
    for (int i = 0; i < d; ++i) pos[v[i] - 1] = i;
    return pos;
}

long long count_consecutive(const Pattern& v, const std::vector<int>& w) {
    const size_t d = static_cast<size_t>(v.size());
    if (w.size() < d) return 0;
    long long c = 0;
    for (size_t s = 0; s + d <= w.size(); ++s)
        if (window_matches(v.entries(), w, s)) ++c;
    return c;
}

std::set<int> overlap_set(const Pattern& v) {
    const int d = v.size();
    std::set<int> out;
    const auto& e = v.entries();
    for (int i = 1; i <= d - 1; ++i) {
        std::vector<int> pre(e.begin(), e.begin() + i);
        std::vector<int> suf(e.end() - i, e.end());
        if (reduce(pre) == reduce(suf)) out.insert(i);
    }
    return out;
}

bool is_nonoverlapping(const Pattern& v) {
    if (v.size() < 3) throw std::invalid_argument("classification undefined for d<3");
    auto o = overlap_set(v);
    return o.size() == 1 && *o.begin() == 1;
}

bool is_monotone(const Pattern& v) {
    if (v.size() < 3) throw std::invalid_argument("classification undefined for d<3");
    const auto& e = v.entries();
    bool inc = true, dec = true;
    for (size_t i = 1; i < e.size(); ++i) {
        inc &= e[i] == e[i - 1] + 1;
        dec &= e[i] == e[i - 1] - 1;
    }
    return (inc && e.front() == 1) || (dec && e.front() == v.size());
}

Pattern reversed(const Pattern& v) {
    std::vector<int> e(v.entries().rbegin(), v.entries().rend());
    return Pattern(e);
}

Pattern complement_of(const Pattern& v) {
    const int d = v.size();
    std::vector<int> e;
    e.reserve(d);
    for (int x : v.entries()) e.push_back(d + 1 - x);
    return Pattern(e);
}

bool is_standard_form(const Pattern& v) {
    const int d = v.size();
    const int a = v[0], b = v[d - 1];
    return a < b && a + b <= d + 1;
}

Pattern standardize(const Pattern& v) {
    std::vector<Pattern> orbit = {v, reversed(v), complement_of(v),
                                  reversed(complement_of(v))};
    const Pattern* best = nullptr;
    for (const auto& p : orbit) {
        if (!is_standard_form(p)) continue;
        if (!best || p < *best) best = &p;
    }
    if (!best)
        throw std::runtime_error("no standard-form member in orbit");  // cannot happen
    return *best;
}

Pattern parse_pattern(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty pattern");
    std::vector<int> e;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw std::invalid_argument("bad pattern: " + s);
            e.push_back(std::stoi(tok));
        }
    } else {
        for (char c : s) {
            if (c < '1' || c > '9') throw std::invalid_argument("bad pattern: " + s);
            e.push_back(c - '0');
        }
    }
    return Pattern(e);
}

std::string pattern_str(const Pattern& v) {
    std::string out;
    const bool digits = v.size() <= 9;
    for (int i = 0; i < v.size(); ++i) {
        if (digits) {
            out += static_cast<char>('0' + v[i]);
        } else {
            if (i) out += ',';
            out += std::to_string(v[i]);
        }
    }
    return out;
}

std::string word_str(const Word& w) {
    std::string out;
    const bool digits = w.k <= 9;
    for (size_t i = 0; i < w.letters.size(); ++i) {
        if (digits) {
            out += static_cast<char>('0' + w.letters[i]);
        } else {
            if (i) out += ',';
            out += std::to_string(w.letters[i]);
        }
    }
    return out;
}

}  // namespace conseq
