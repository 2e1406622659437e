#pragma once

// Independent reference implementations used only by tests. These follow
// the definitions directly (recursive enumeration, multiset mark walks)
// and deliberately share no code with the library paths they check.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "delchan/delpat.hpp"
#include "delchan/querydist.hpp"

namespace oracle {

struct Counts {
    std::map<std::string, std::uint64_t> hits;
    std::uint64_t err = 0;
    std::uint64_t total = 0;
};

// Counter realization written against a multiset of marked positions.
inline std::vector<std::size_t> realize(const std::vector<std::size_t>& marked,
                                        std::size_t nu) {
    std::vector<std::size_t> per_index(nu + 1, 0);
    for (std::size_t pos : marked) per_index[pos] += 1;
    std::vector<std::size_t> deleted;
    std::size_t counter = 0;
    for (std::size_t i = 1; i <= nu; ++i) {
        counter += per_index[i];
        if (counter > 0) {
            deleted.push_back(i);
            --counter;
        }
    }
    return deleted;
}

// Recursively enumerates every per-chunk draw of the pattern, calling
// fn(deleted) once per equiprobable instance.
template <class Fn>
void for_each_deletion_set(const delchan::LayeredPattern& pattern, std::size_t nu,
                           Fn&& fn) {
    struct Slot {
        std::size_t start;
        std::uint64_t bound;
    };
    std::vector<Slot> slots;
    for (std::size_t layer = 1; layer <= pattern.depth(); ++layer) {
        std::size_t chunk_len = delchan::ipow(pattern.kappa, layer);
        std::uint64_t bound = pattern.mark_bound(layer);
        for (std::size_t c = 0; c < nu / chunk_len; ++c)
            slots.push_back(Slot{c * chunk_len + 1, bound});
    }
    std::vector<std::size_t> marked;
    auto recurse = [&](auto&& self, std::size_t slot_index) -> void {
        if (slot_index == slots.size()) {
            fn(realize(marked, nu));
            return;
        }
        const Slot& slot = slots[slot_index];
        for (std::uint64_t draw = 0; draw <= slot.bound; ++draw) {
            std::size_t before = marked.size();
            for (std::uint64_t j = 0; j < draw; ++j) marked.push_back(slot.start + j);
            self(self, slot_index + 1);
            marked.resize(before);
        }
    };
    recurse(recurse, 0);
}

// freq / err by direct definition: average over shifts and instances.
inline Counts freq_counts(std::string_view s, const std::vector<std::size_t>& diffs,
                          const delchan::LayeredPattern& pattern) {
    std::size_t nu = s.size();
    Counts counts;
    for_each_deletion_set(pattern, nu, [&](const std::vector<std::size_t>& deleted) {
        std::string corrupted;
        std::size_t d = 0;
        for (std::size_t i = 1; i <= nu; ++i) {
            if (d < deleted.size() && deleted[d] == i) {
                ++d;
            } else {
                corrupted.push_back(s[i - 1]);
            }
        }
        for (std::size_t shift = 1; shift <= nu; ++shift) {
            std::string outcome;
            bool ok = true;
            std::size_t pos = shift;
            outcome.push_back(pos <= corrupted.size() ? corrupted[pos - 1] : '?');
            if (pos > corrupted.size()) ok = false;
            for (std::size_t diff : diffs) {
                pos += diff;
                if (pos > corrupted.size()) {
                    ok = false;
                    break;
                }
                outcome.push_back(corrupted[pos - 1]);
            }
            if (ok) {
                counts.hits[outcome] += 1;
            } else {
                counts.err += 1;
            }
            counts.total += 1;
        }
    });
    return counts;
}

inline delchan::Rational freq(std::string_view s, const std::vector<std::size_t>& diffs,
                              const delchan::LayeredPattern& pattern, std::string_view b) {
    Counts counts = freq_counts(s, diffs, pattern);
    auto it = counts.hits.find(std::string(b));
    std::uint64_t hit = it == counts.hits.end() ? 0 : it->second;
    return delchan::Rational(hit) / delchan::Rational(counts.total);
}

inline delchan::Rational err(std::string_view s, const std::vector<std::size_t>& diffs,
                             const delchan::LayeredPattern& pattern) {
    Counts counts = freq_counts(s, diffs, pattern);
    return delchan::Rational(counts.err) / delchan::Rational(counts.total);
}

// Seeded random binary string, independent of the library generator.
inline std::string random_binary(std::size_t length, std::uint64_t seed) {
    std::string out;
    out.reserve(length);
    std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
    for (std::size_t i = 0; i < length; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        out.push_back(((state >> 62) & 1) ? '1' : '0');
    }
    return out;
}

}  // namespace oracle
