#include "delchan/delpat.hpp"

#include <algorithm>
#include <cmath>

#include "delchan/errors.hpp"
#include "delchan/rng.hpp"

namespace delchan {

void LayeredPattern::validate() const {
    if (kappa < 2) throw BadParams("layered pattern base must be >= 2");
    for (double f : max_fraction)
        if (f < 0.0 || f > 1.0) throw BadParams("deletion fractions must lie in [0,1]");
}

double LayeredPattern::total_corruption_bound() const {
    double total = 0.0;
    for (double f : max_fraction) total += f;
    return total;
}

std::uint64_t LayeredPattern::mark_bound(std::size_t layer) const {
    double scale = static_cast<double>(ipow(kappa, layer));
    return static_cast<std::uint64_t>(std::floor(fraction(layer) * scale));
}

LayeredPattern LayeredPattern::restricted(std::size_t max_layer) const {
    LayeredPattern out = *this;
    if (out.max_fraction.size() > max_layer) out.max_fraction.resize(max_layer);
    return out;
}

bool LayeredPattern::deterministic() const {
    for (std::size_t layer = 1; layer <= depth(); ++layer)
        if (mark_bound(layer) > 0) return false;
    return true;
}

PatternInstance sample_instance(const LayeredPattern& pattern, std::size_t nu,
                                std::uint64_t seed) {
    pattern.validate();
    if (nu == 0) throw BadLength("string length must be positive");
    if (pattern.depth() > 0) {
        if (!is_power_of(pattern.kappa, nu))
            throw BadLength("length " + std::to_string(nu) + " is not a power of " +
                            std::to_string(pattern.kappa));
        if (nu < ipow(pattern.kappa, pattern.depth()))
            throw BadLength("length " + std::to_string(nu) + " below the deepest layer");
    }

    PatternInstance inst;
    inst.length = nu;
    for (std::size_t layer = 1; layer <= pattern.depth(); ++layer) {
        std::uint64_t bound = pattern.mark_bound(layer);
        if (bound == 0) continue;
        std::size_t chunk_len = ipow(pattern.kappa, layer);
        std::size_t chunks = nu / chunk_len;
        for (std::size_t c = 1; c <= chunks; ++c) {
            std::uint64_t draw = uniform_upto(derive(seed, layer, c), bound);
            if (draw > 0) inst.marks.push_back(Mark{layer, c, draw});
        }
    }
    inst.deleted = realize_deletions(inst.marks, nu, pattern.kappa);
    inst.survivor_map = survivors_of(inst.deleted, nu);
    return inst;
}

std::vector<std::size_t> realize_deletions(const std::vector<Mark>& marks, std::size_t nu,
                                           std::size_t kappa) {
    // A mark of count t covers the first t indices of its chunk, one mark
    // each; overlapping layers stack.
    std::vector<std::uint64_t> mark_count(nu + 1, 0);
    for (const Mark& m : marks) {
        if (m.layer == 0 || m.chunk == 0) throw BadParams("marks are 1-based");
        std::size_t chunk_len = ipow(kappa, m.layer);
        std::size_t start = (m.chunk - 1) * chunk_len + 1;
        if (m.count > chunk_len || start + chunk_len - 1 > nu)
            throw BadParams("mark outside the string");
        for (std::uint64_t j = 0; j < m.count; ++j) mark_count[start + j] += 1;
    }
    std::vector<std::size_t> deleted;
    std::uint64_t counter = 0;
    for (std::size_t i = 1; i <= nu; ++i) {
        counter += mark_count[i];
        if (counter > 0) {
            deleted.push_back(i);
            --counter;
        }
    }
    return deleted;
}

std::vector<std::size_t> survivors_of(const std::vector<std::size_t>& deleted,
                                      std::size_t nu) {
    std::vector<std::size_t> survivors;
    survivors.reserve(nu - deleted.size());
    std::size_t d = 0;
    for (std::size_t i = 1; i <= nu; ++i) {
        if (d < deleted.size() && deleted[d] == i) {
            ++d;
        } else {
            survivors.push_back(i);
        }
    }
    return survivors;
}

std::pair<Codeword, std::vector<std::size_t>> apply(const Codeword& z,
                                                    const PatternInstance& instance) {
    if (z.length() != instance.length)
        throw LengthMismatch("codeword length " + std::to_string(z.length()) +
                             " vs instance length " + std::to_string(instance.length));
    Codeword out;
    out.alphabet = z.alphabet;
    out.symbols.reserve(instance.survivor_map.size());
    for (std::size_t original : instance.survivor_map)
        out.symbols.push_back(z.symbols[original - 1]);
    return {std::move(out), instance.survivor_map};
}

std::string apply_deletions(std::string_view z, const std::vector<std::size_t>& deleted) {
    std::string out;
    out.reserve(z.size() - deleted.size());
    std::size_t d = 0;
    for (std::size_t i = 1; i <= z.size(); ++i) {
        if (d < deleted.size() && deleted[d] == i) {
            ++d;
        } else {
            out.push_back(z[i - 1]);
        }
    }
    return out;
}

std::optional<std::vector<std::size_t>> induced_indices(
    const PatternInstance& instance, const std::vector<std::size_t>& queries) {
    std::vector<std::size_t> out;
    out.reserve(queries.size());
    for (std::size_t q : queries) {
        if (q == 0) throw BadParams("query positions are 1-based");
        if (q > instance.survivor_map.size()) return std::nullopt;
        out.push_back(instance.survivor_map[q - 1]);
    }
    return out;
}

void PrefixPeriodicPattern::validate() const {
    if (eps <= 0.0 || eps >= 1.0)
        throw BadParams("prefix+periodic resilience must lie in (0,1)");
}

std::size_t PrefixPeriodicDraw::survivor_count() const {
    std::size_t remaining = length - prefix;
    if (period == 0) return remaining;
    return remaining - remaining / period;
}

std::optional<std::size_t> PrefixPeriodicDraw::induced(std::size_t query) const {
    if (query == 0) throw BadParams("query positions are 1-based");
    if (query > survivor_count()) return std::nullopt;
    std::size_t offset = query;
    if (period >= 2) offset += (query - 1) / (period - 1);
    return prefix + offset;
}

PrefixPeriodicDraw make_prefix_periodic_draw(std::size_t length, double eps1, double eps2) {
    if (length == 0) throw BadLength("string length must be positive");
    if (eps1 < 0 || eps2 < 0 || eps1 >= 1.0 || eps2 >= 0.5)
        throw BadParams("prefix+periodic rates out of range");
    PrefixPeriodicDraw draw;
    draw.length = length;
    draw.prefix = static_cast<std::size_t>(std::floor(eps1 * static_cast<double>(length)));
    if (draw.prefix > length) draw.prefix = length;
    // No periodic deletion when the period would exceed the string.
    if (eps2 >= 1.0 / static_cast<double>(length)) {
        draw.period = static_cast<std::size_t>(std::floor(1.0 / eps2));
        if (draw.period > length) draw.period = 0;
    }
    return draw;
}

PrefixPeriodicDraw sample_prefix_periodic_draw(std::size_t length, double eps,
                                               std::uint64_t seed) {
    PrefixPeriodicPattern{eps}.validate();
    double eps1 = unit_real(derive(seed, 0xA11CE)) * eps / 2.0;
    double eps2 = unit_real(derive(seed, 0xB0B)) * eps / 2.0;
    return make_prefix_periodic_draw(length, eps1, eps2);
}

std::vector<std::size_t> prefix_periodic_deletions(std::size_t length, double eps1,
                                                   double eps2) {
    PrefixPeriodicDraw draw = make_prefix_periodic_draw(length, eps1, eps2);
    std::vector<std::size_t> deleted;
    for (std::size_t i = 1; i <= draw.prefix; ++i) deleted.push_back(i);
    if (draw.period >= 1) {
        std::size_t remaining = length - draw.prefix;
        for (std::size_t offset = draw.period; offset <= remaining; offset += draw.period)
            deleted.push_back(draw.prefix + offset);
    }
    return deleted;
}

std::vector<std::size_t> sample_prefix_periodic(std::size_t length, double eps,
                                                std::uint64_t seed) {
    PrefixPeriodicDraw draw = sample_prefix_periodic_draw(length, eps, seed);
    std::vector<std::size_t> deleted;
    for (std::size_t i = 1; i <= draw.prefix; ++i) deleted.push_back(i);
    if (draw.period >= 1) {
        std::size_t remaining = length - draw.prefix;
        for (std::size_t offset = draw.period; offset <= remaining; offset += draw.period)
            deleted.push_back(draw.prefix + offset);
    }
    return deleted;
}

std::vector<std::size_t> sample_deletions(const Pattern& pattern, std::size_t nu,
                                          std::uint64_t seed) {
    if (const auto* layered = std::get_if<LayeredPattern>(&pattern))
        return sample_instance(*layered, nu, seed).deleted;
    const auto& pp = std::get<PrefixPeriodicPattern>(pattern);
    return sample_prefix_periodic(nu, pp.eps, seed);
}

}  // namespace delchan
