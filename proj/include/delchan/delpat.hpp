#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "delchan/codeword.hpp"

namespace delchan {

// Layered deletion process: at each layer alpha the string splits into
// chunks of length kappa^alpha and every chunk independently marks a
// uniform number of its leading indices, up to floor(f_del(alpha) *
// kappa^alpha). Marks are realized left to right with a draining counter.
struct LayeredPattern {
    std::size_t kappa = 2;
    std::vector<double> max_fraction;  // f_del, layer alpha -> max_fraction[alpha-1]

    std::size_t depth() const { return max_fraction.size(); }
    double fraction(std::size_t layer) const { return max_fraction[layer - 1]; }
    // Upper bound on the deleted fraction of any realization.
    double total_corruption_bound() const;
    // Largest mark count a single chunk of layer alpha may receive.
    std::uint64_t mark_bound(std::size_t layer) const;
    // The pattern with layers above max_layer dropped (del_{a|A} reading:
    // deeper strings keep only the retained layers' deletions).
    LayeredPattern restricted(std::size_t max_layer) const;
    // True if no chunk can mark anything (single deterministic instance).
    bool deterministic() const;
    void validate() const;
};

struct Mark {
    std::size_t layer = 0;
    std::size_t chunk = 0;  // 1-based chunk index within the layer
    std::uint64_t count = 0;
};

struct PatternInstance {
    std::size_t length = 0;
    std::vector<Mark> marks;                // nonzero marks only
    std::vector<std::size_t> deleted;       // sorted original indices, 1-based
    std::vector<std::size_t> survivor_map;  // entry j-1 = original index of survivor j
};

// Draws one instance; deterministic in (pattern, nu, seed) and
// order-independent across chunks. nu must be a power of kappa with
// nu >= kappa^depth (any positive nu when the pattern has no layers).
PatternInstance sample_instance(const LayeredPattern& pattern, std::size_t nu,
                                std::uint64_t seed);

// Left-to-right counter realization of a mark multiset; the residual
// counter at the string end is discarded.
std::vector<std::size_t> realize_deletions(const std::vector<Mark>& marks, std::size_t nu,
                                           std::size_t kappa);

std::vector<std::size_t> survivors_of(const std::vector<std::size_t>& deleted,
                                      std::size_t nu);

// Corrupted string plus the survivor map.
std::pair<Codeword, std::vector<std::size_t>> apply(const Codeword& z,
                                                    const PatternInstance& instance);
std::string apply_deletions(std::string_view z, const std::vector<std::size_t>& deleted);

// Maps query positions in the corrupted string to original positions;
// nullopt is the err outcome (some query beyond the survivors).
std::optional<std::vector<std::size_t>> induced_indices(
    const PatternInstance& instance, const std::vector<std::size_t>& queries);

// Overview process: delete a uniformly random prefix, then every
// floor(1/eps2)'th remaining position.
struct PrefixPeriodicPattern {
    double eps = 0.1;
    void validate() const;
};

// One realized draw in closed form; induced() costs O(1) per query.
struct PrefixPeriodicDraw {
    std::size_t length = 0;
    std::size_t prefix = 0;  // positions 1..prefix deleted
    std::size_t period = 0;  // 0 = no periodic deletions
    std::size_t survivor_count() const;
    std::optional<std::size_t> induced(std::size_t query) const;
};

PrefixPeriodicDraw make_prefix_periodic_draw(std::size_t length, double eps1, double eps2);
PrefixPeriodicDraw sample_prefix_periodic_draw(std::size_t length, double eps,
                                               std::uint64_t seed);
std::vector<std::size_t> prefix_periodic_deletions(std::size_t length, double eps1,
                                                   double eps2);
std::vector<std::size_t> sample_prefix_periodic(std::size_t length, double eps,
                                                std::uint64_t seed);

using Pattern = std::variant<LayeredPattern, PrefixPeriodicPattern>;

// Deleted-index set of one realization of either pattern kind.
std::vector<std::size_t> sample_deletions(const Pattern& pattern, std::size_t nu,
                                          std::uint64_t seed);

}  // namespace delchan
