#include "conseq/wilf.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "conseq/errors.hpp"

namespace conseq {

bool khor_condition(const Pattern& v, const Pattern& w) {
    if (v.size() != w.size()) throw std::invalid_argument("length mismatch");
    const int d = v.size();
    const auto ov = overlap_set(v);
    if (ov != overlap_set(w)) return false;
    for (int i : ov) {
        std::set<int> vpre(v.entries().begin(), v.entries().begin() + (d - i));
        std::set<int> wpre(w.entries().begin(), w.entries().begin() + (d - i));
        if (vpre != wpre) return false;
        std::set<int> vsuf(v.entries().begin() + i, v.entries().end());
        std::set<int> wsuf(w.entries().begin() + i, w.entries().end());
        if (vsuf != wsuf) return false;
    }
    return true;
}

std::vector<Pattern> all_patterns(int d) {
    if (d < 2) throw std::invalid_argument("pattern length must be >= 2");
    if (d > 8) throw budget_error("pattern enumeration limited to d <= 8");
    std::vector<int> e(d);
    std::iota(e.begin(), e.end(), 1);
    std::vector<Pattern> out;
    do {
        out.emplace_back(e);
    } while (std::next_permutation(e.begin(), e.end()));
    return out;
}

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

void append_table(std::string& sig, const CountTable& t) {
    for (int n = 0; n <= t.n_max(); ++n) {
        for (int r = 0; r <= t.r_max(); ++r) {
            sig += t.count(n, r).get_str();
            sig += ',';
        }
        sig += ';';
    }
}

std::string signature_of(const Pattern& v, Universe u, int n_max, int r_max, int k_max) {
    std::string sig;
    if (u == Universe::perms) {
        append_table(sig, dp_perm_counts(v, n_max, r_max));
    } else {
        for (int k = 1; k <= k_max; ++k) {
            sig += 'k';
            sig += std::to_string(k);
            sig += ':';
            append_table(sig, dp_word_counts(v, k, n_max, r_max));
        }
    }
    return sig;
}

// Deterministic parallel map: results land at their input index, so the
// assembled output does not depend on completion order.  The first entry is
// computed on the calling thread so parameter errors surface as exceptions
// instead of terminating a worker.
std::vector<std::string> signatures_of(const std::vector<Pattern>& pats, Universe u,
                                       int n_max, int r_max, int k_max) {
    std::vector<std::string> sigs(pats.size());
    if (pats.empty()) return sigs;
    sigs[0] = signature_of(pats[0], u, n_max, r_max, k_max);
    int w = worker_count();
    if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
    w = std::max(1, std::min<int>(w, static_cast<int>(pats.size()) - 1));
    if (w <= 1 || pats.size() <= 2) {
        for (std::size_t i = 1; i < pats.size(); ++i)
            sigs[i] = signature_of(pats[i], u, n_max, r_max, k_max);
        return sigs;
    }
    std::atomic<std::size_t> next{1};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < pats.size(); i = next++)
                sigs[i] = signature_of(pats[i], u, n_max, r_max, k_max);
        });
    }
    for (auto& th : workers) th.join();
    return sigs;
}

}  // namespace

int& worker_count() {
    static int workers = 0;
    return workers;
}

int WilfPartition::block_of(const Pattern& v) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (std::find(blocks[b].begin(), blocks[b].end(), v) != blocks[b].end())
            return static_cast<int>(b);
    }
    return -1;
}

std::string WilfPartition::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["d"] = d;
    j["universe"] = universe_str(universe);
    nlohmann::ordered_json depth;
    depth["n_max"] = n_max;
    depth["r_max"] = r_max;
    if (universe == Universe::words) depth["k_max"] = k_max;
    j["depth"] = std::move(depth);
    j["note"] = "candidate partition at the stated depth; deeper signatures can only split blocks";
    j["blocks"] = nlohmann::ordered_json::array();
    for (const auto& block : blocks) {
        nlohmann::ordered_json b = nlohmann::ordered_json::array();
        for (const auto& p : block) b.push_back(pattern_str(p));
        j["blocks"].push_back(std::move(b));
    }
    j["signature_hash_per_block"] = block_hashes;
    return pretty ? j.dump(2) : j.dump();
}

WilfPartition classify(int d, Universe universe, int n_max, int r_max, int k_max) {
    if (universe == Universe::words && k_max < 1)
        throw std::invalid_argument("k_max must be >= 1 for the word universe");
    WilfPartition part;
    part.d = d;
    part.universe = universe;
    part.n_max = n_max;
    part.r_max = r_max;
    part.k_max = universe == Universe::words ? k_max : 0;

    const auto pats = all_patterns(d);
    const auto sigs = signatures_of(pats, universe, n_max, r_max, k_max);
    std::map<std::string, std::vector<Pattern>> by_sig;
    for (std::size_t i = 0; i < pats.size(); ++i) by_sig[sigs[i]].push_back(pats[i]);

    // deterministic block order: by the lexicographically smallest member
    std::vector<std::pair<Pattern, std::string>> order;
    for (const auto& [sig, block] : by_sig)
        order.emplace_back(*std::min_element(block.begin(), block.end()), sig);
    std::sort(order.begin(), order.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [leader, sig] : order) {
        auto block = by_sig.at(sig);
        std::sort(block.begin(), block.end());
        part.blocks.push_back(std::move(block));
        part.block_hashes.push_back(fnv1a_hex(sig));
    }
    return part;
}

std::string SufficiencyReport::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["d"] = d;
    nlohmann::ordered_json depth;
    depth["n_max"] = n_max;
    depth["r_max"] = r_max;
    depth["k_max"] = k_max;
    j["depth"] = std::move(depth);
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : pairs) j["pairs"].push_back({a, b});
    j["violations"] = violations;
    return pretty ? j.dump(2) : j.dump();
}

SufficiencyReport check_sufficiency(int d, int n_max, int r_max, int k_max) {
    SufficiencyReport rep;
    rep.d = d;
    rep.n_max = n_max;
    rep.r_max = r_max;
    rep.k_max = k_max;

    const WilfPartition perms = classify(d, Universe::perms, n_max, r_max);
    const WilfPartition words = classify(d, Universe::words, n_max, r_max, k_max);
    const auto pats = all_patterns(d);
    for (std::size_t i = 0; i < pats.size(); ++i) {
        for (std::size_t j = i + 1; j < pats.size(); ++j) {
            if (!khor_condition(pats[i], pats[j])) continue;
            rep.pairs.emplace_back(pattern_str(pats[i]), pattern_str(pats[j]));
            if (perms.block_of(pats[i]) != perms.block_of(pats[j]))
                rep.violations.push_back("(" + pattern_str(pats[i]) + "," +
                                         pattern_str(pats[j]) +
                                         ") split in the permutation partition");
            if (words.block_of(pats[i]) != words.block_of(pats[j]))
                rep.violations.push_back("(" + pattern_str(pats[i]) + "," +
                                         pattern_str(pats[j]) +
                                         ") split in the word partition");
        }
    }
    return rep;
}

std::string SignatureCheckReport::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["d"] = d;
    j["n_max"] = n_max;
    j["groups"] = groups;
    j["violations"] = violations;
    return pretty ? j.dump(2) : j.dump();
}

SignatureCheckReport nonoverlapping_signature_check(int d, int n_max) {
    if (d < 3) throw std::invalid_argument("classification undefined for d < 3");
    SignatureCheckReport rep;
    rep.d = d;
    rep.n_max = n_max;

    std::vector<Pattern> pats;
    for (const Pattern& v : all_patterns(d))
        if (is_nonoverlapping(v) && is_standard_form(v)) pats.push_back(v);

    std::map<std::pair<int, int>, std::vector<std::size_t>> by_ends;
    std::vector<std::string> sigs;
    for (std::size_t i = 0; i < pats.size(); ++i) {
        sigs.push_back(signature_of(pats[i], Universe::perms, n_max, 0, 0));
        by_ends[{pats[i][0], pats[i][d - 1]}].push_back(i);
    }

    for (const auto& [ends, members] : by_ends) {
        std::ostringstream line;
        line << "(" << ends.first << "," << ends.second << "):";
        for (std::size_t i : members) line << " " << pattern_str(pats[i]);
        rep.groups.push_back(line.str());
        for (std::size_t i : members) {
            if (sigs[i] != sigs[members.front()])
                rep.violations.push_back("equal ends but distinct signatures: " +
                                         pattern_str(pats[members.front()]) + " vs " +
                                         pattern_str(pats[i]));
        }
    }
    // same signature must imply the same (v_1, v_d)
    for (std::size_t i = 0; i < pats.size(); ++i) {
        for (std::size_t j = i + 1; j < pats.size(); ++j) {
            if (sigs[i] == sigs[j] &&
                (pats[i][0] != pats[j][0] || pats[i][d - 1] != pats[j][d - 1]))
                rep.violations.push_back("equal signatures but distinct ends: " +
                                         pattern_str(pats[i]) + " vs " + pattern_str(pats[j]));
        }
    }
    return rep;
}

Rat nonoverlapping_fraction(int d) {
    long count = 0;
    const auto pats = all_patterns(d);
    for (const Pattern& v : pats)
        if (is_nonoverlapping(v)) ++count;
    Rat f(Int(count), factorial(static_cast<unsigned long>(d)));
    f.canonicalize();
    return f;
}

}  // namespace conseq
