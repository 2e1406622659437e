#include "delchan/querydist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "delchan/errors.hpp"
#include "delchan/rng.hpp"

namespace delchan {

std::size_t DiffList::span() const {
    std::size_t total = 0;
    for (std::size_t d : diffs) total += d;
    return total;
}

std::vector<std::size_t> DiffList::offsets() const {
    std::vector<std::size_t> out;
    out.reserve(query_count());
    std::size_t acc = 0;
    out.push_back(0);
    for (std::size_t d : diffs) {
        acc += d;
        out.push_back(acc);
    }
    return out;
}

void DiffList::validate() const {
    for (std::size_t d : diffs)
        if (d == 0) throw BadDiffList("query differences must be >= 1");
}

double OutputDist::mass() const {
    double total = err;
    for (const auto& [_, p] : probs) total += p;
    return total;
}

Rational ExactDist::mass() const {
    Rational total = err;
    for (const auto& [_, p] : probs) total += p;
    return total;
}

Rational ExactDist::prob(std::string_view b) const {
    auto it = probs.find(std::string(b));
    return it == probs.end() ? Rational(0) : it->second;
}

OutputDist ExactDist::to_double() const {
    OutputDist out;
    out.query_count = query_count;
    out.err = static_cast<double>(err);
    for (const auto& [b, p] : probs) out.probs[b] = static_cast<double>(p);
    return out;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

// A slot is one independent uniform draw: (layer, chunk) with its bound.
struct DrawSlot {
    std::size_t layer;
    std::size_t chunk;
    std::uint64_t bound;
};

std::vector<DrawSlot> draw_slots(const LayeredPattern& pattern, std::size_t nu) {
    std::vector<DrawSlot> slots;
    for (std::size_t layer = 1; layer <= pattern.depth(); ++layer) {
        std::uint64_t bound = pattern.mark_bound(layer);
        if (bound == 0) continue;
        std::size_t chunks = nu / ipow(pattern.kappa, layer);
        for (std::size_t c = 1; c <= chunks; ++c) slots.push_back({layer, c, bound});
    }
    return slots;
}

std::uint64_t instance_count(const std::vector<DrawSlot>& slots) {
    std::uint64_t total = 1;
    for (const DrawSlot& s : slots) total = saturating_mul(total, s.bound + 1);
    return total;
}

void check_pattern_length(const LayeredPattern& pattern, std::size_t nu) {
    pattern.validate();
    if (nu == 0) throw BadLength("string length must be positive");
    if (pattern.depth() > 0) {
        if (!is_power_of(pattern.kappa, nu))
            throw BadLength("length " + std::to_string(nu) + " is not a power of " +
                            std::to_string(pattern.kappa));
        if (nu < ipow(pattern.kappa, pattern.depth()))
            throw BadLength("length below the deepest layer");
    }
}

// Enumerates all equiprobable instances, invoking fn(survivor_map).
template <class Fn>
void for_each_instance(const LayeredPattern& pattern, std::size_t nu, Fn&& fn) {
    std::vector<DrawSlot> slots = draw_slots(pattern, nu);
    std::vector<std::uint64_t> value(slots.size(), 0);
    std::vector<Mark> marks;
    while (true) {
        marks.clear();
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (value[i] > 0) marks.push_back(Mark{slots[i].layer, slots[i].chunk, value[i]});
        std::vector<std::size_t> deleted = realize_deletions(marks, nu, pattern.kappa);
        fn(survivors_of(deleted, nu));
        std::size_t pos = 0;
        while (pos < slots.size() && value[pos] == slots[pos].bound) value[pos++] = 0;
        if (pos == slots.size()) break;
        ++value[pos];
    }
}

struct CountTable {
    std::map<std::string, std::uint64_t> hits;
    std::uint64_t err = 0;
    std::uint64_t total = 0;
};

// Outcome of one shifted read against a survivor map; true when in bounds.
bool read_outcome(std::string_view s, const std::vector<std::size_t>& survivors,
                  std::size_t shift, const std::vector<std::size_t>& offsets,
                  std::string& out) {
    out.clear();
    for (std::size_t off : offsets) {
        std::size_t pos = shift + off;
        if (pos > survivors.size()) return false;
        out.push_back(s[survivors[pos - 1] - 1]);
    }
    return true;
}

ExactDist counts_to_exact(const CountTable& table, std::size_t query_count) {
    ExactDist dist;
    dist.query_count = query_count;
    Rational denom(table.total);
    for (const auto& [b, c] : table.hits) dist.probs[b] = Rational(c) / denom;
    dist.err = Rational(table.err) / denom;
    return dist;
}

OutputDist counts_to_double(const CountTable& table, std::size_t query_count) {
    OutputDist dist;
    dist.query_count = query_count;
    double denom = static_cast<double>(table.total);
    for (const auto& [b, c] : table.hits) dist.probs[b] = static_cast<double>(c) / denom;
    dist.err = static_cast<double>(table.err) / denom;
    return dist;
}

// Deterministic sampling harness: outcome i depends only on (seed, i), so
// the merged table is identical for every worker count.
template <class PerSample>
CountTable sampled_counts(std::size_t samples, unsigned workers, PerSample&& per_sample) {
    if (samples == 0) throw BadParams("sample count must be positive");
    workers = std::max(1u, workers);
    std::size_t thread_count = std::min<std::size_t>(workers, samples);
    std::vector<CountTable> parts(thread_count);
    auto run = [&](std::size_t t) {
        CountTable& local = parts[t];
        std::string outcome;
        std::size_t begin = samples * t / thread_count;
        std::size_t end = samples * (t + 1) / thread_count;
        for (std::size_t i = begin; i < end; ++i) {
            if (per_sample(i, outcome)) {
                local.hits[outcome] += 1;
            } else {
                local.err += 1;
            }
            local.total += 1;
        }
    };
    if (thread_count == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(run, t);
        for (auto& th : pool) th.join();
    }
    CountTable merged;
    for (const CountTable& part : parts) {
        for (const auto& [b, c] : part.hits) merged.hits[b] += c;
        merged.err += part.err;
        merged.total += part.total;
    }
    return merged;
}

}  // namespace

std::uint64_t joint_state_count(const LayeredPattern& pattern, std::size_t nu) {
    check_pattern_length(pattern, nu);
    return saturating_mul(instance_count(draw_slots(pattern, nu)), nu);
}

ExactDist exact_freq_table(std::string_view s, const DiffList& diffs,
                           const LayeredPattern& pattern, const EnumerationCaps& caps) {
    diffs.validate();
    std::size_t nu = s.size();
    std::uint64_t joint = joint_state_count(pattern, nu);
    if (joint > caps.max_joint_states)
        throw CapExceeded("joint space " + std::to_string(joint) + " exceeds cap " +
                          std::to_string(caps.max_joint_states) + "; use the mc estimator");
    std::vector<std::size_t> offsets = diffs.offsets();
    CountTable table;
    std::string outcome;
    for_each_instance(pattern, nu, [&](const std::vector<std::size_t>& survivors) {
        for (std::size_t shift = 1; shift <= nu; ++shift) {
            if (read_outcome(s, survivors, shift, offsets, outcome)) {
                table.hits[outcome] += 1;
            } else {
                table.err += 1;
            }
            table.total += 1;
        }
    });
    return counts_to_exact(table, diffs.query_count());
}

Rational exact_freq(std::string_view s, const DiffList& diffs, const LayeredPattern& pattern,
                    std::string_view b, const EnumerationCaps& caps) {
    if (b.size() != diffs.query_count())
        throw SupportMismatch("pattern b has length " + std::to_string(b.size()) +
                              ", expected " + std::to_string(diffs.query_count()));
    return exact_freq_table(s, diffs, pattern, caps).prob(b);
}

Rational err_prob(std::string_view s, const DiffList& diffs, const LayeredPattern& pattern,
                  const EnumerationCaps& caps) {
    return exact_freq_table(s, diffs, pattern, caps).err;
}

OutputDist mc_freq_table(std::string_view s, const DiffList& diffs, const Pattern& pattern,
                         std::size_t samples, std::uint64_t seed, unsigned workers) {
    diffs.validate();
    std::size_t nu = s.size();
    std::vector<std::size_t> offsets = diffs.offsets();
    CountTable table;
    if (const auto* layered = std::get_if<LayeredPattern>(&pattern)) {
        check_pattern_length(*layered, nu);
        table = sampled_counts(samples, workers, [&](std::size_t i, std::string& out) {
            std::uint64_t si = derive(seed, i);
            std::size_t shift = 1 + uniform_upto(derive(si, 0x5348), nu - 1);
            PatternInstance inst = sample_instance(*layered, nu, si);
            return read_outcome(s, inst.survivor_map, shift, offsets, out);
        });
    } else {
        const auto& pp = std::get<PrefixPeriodicPattern>(pattern);
        pp.validate();
        table = sampled_counts(samples, workers, [&](std::size_t i, std::string& out) {
            std::uint64_t si = derive(seed, i);
            std::size_t shift = 1 + uniform_upto(derive(si, 0x5348), nu - 1);
            PrefixPeriodicDraw draw = sample_prefix_periodic_draw(nu, pp.eps, si);
            out.clear();
            for (std::size_t off : offsets) {
                auto original = draw.induced(shift + off);
                if (!original) return false;
                out.push_back(s[*original - 1]);
            }
            return true;
        });
    }
    return counts_to_double(table, diffs.query_count());
}

ExactDist exact_output_dist(std::string_view z, const std::vector<std::size_t>& queries,
                            const LayeredPattern& pattern, const EnumerationCaps& caps) {
    if (queries.empty()) throw BadParams("query list must be nonempty");
    if (!std::is_sorted(queries.begin(), queries.end()) ||
        std::adjacent_find(queries.begin(), queries.end()) != queries.end() ||
        queries.front() == 0)
        throw BadParams("query positions must be strictly increasing and 1-based");
    std::size_t nu = z.size();
    check_pattern_length(pattern, nu);
    std::uint64_t instances = instance_count(draw_slots(pattern, nu));
    if (instances > caps.max_joint_states)
        throw CapExceeded("instance space " + std::to_string(instances) + " exceeds cap");
    CountTable table;
    std::string outcome;
    for_each_instance(pattern, nu, [&](const std::vector<std::size_t>& survivors) {
        outcome.clear();
        bool ok = true;
        for (std::size_t q : queries) {
            if (q > survivors.size()) {
                ok = false;
                break;
            }
            outcome.push_back(z[survivors[q - 1] - 1]);
        }
        if (ok) {
            table.hits[outcome] += 1;
        } else {
            table.err += 1;
        }
        table.total += 1;
    });
    return counts_to_exact(table, queries.size());
}

OutputDist mc_output_dist(std::string_view z, const std::vector<std::size_t>& queries,
                          const Pattern& pattern, std::size_t samples, std::uint64_t seed,
                          unsigned workers) {
    if (queries.empty()) throw BadParams("query list must be nonempty");
    if (!std::is_sorted(queries.begin(), queries.end()) || queries.front() == 0)
        throw BadParams("query positions must be increasing and 1-based");
    std::size_t nu = z.size();
    CountTable table;
    if (const auto* layered = std::get_if<LayeredPattern>(&pattern)) {
        check_pattern_length(*layered, nu);
        table = sampled_counts(samples, workers, [&](std::size_t i, std::string& out) {
            PatternInstance inst = sample_instance(*layered, nu, derive(seed, i));
            out.clear();
            for (std::size_t q : queries) {
                if (q > inst.survivor_map.size()) return false;
                out.push_back(z[inst.survivor_map[q - 1] - 1]);
            }
            return true;
        });
    } else {
        const auto& pp = std::get<PrefixPeriodicPattern>(pattern);
        pp.validate();
        table = sampled_counts(samples, workers, [&](std::size_t i, std::string& out) {
            PrefixPeriodicDraw draw = sample_prefix_periodic_draw(nu, pp.eps, derive(seed, i));
            out.clear();
            for (std::size_t q : queries) {
                auto original = draw.induced(q);
                if (!original) return false;
                out.push_back(z[*original - 1]);
            }
            return true;
        });
    }
    return counts_to_double(table, queries.size());
}

double tv_distance(const OutputDist& a, const OutputDist& b) {
    if (a.query_count != b.query_count)
        throw SupportMismatch("distributions over different query counts");
    double total = std::abs(a.err - b.err);
    std::set<std::string> keys;
    for (const auto& [k, _] : a.probs) keys.insert(k);
    for (const auto& [k, _] : b.probs) keys.insert(k);
    for (const std::string& k : keys) {
        auto ia = a.probs.find(k);
        auto ib = b.probs.find(k);
        double pa = ia == a.probs.end() ? 0.0 : ia->second;
        double pb = ib == b.probs.end() ? 0.0 : ib->second;
        total += std::abs(pa - pb);
    }
    return total / 2.0;
}

Rational tv_distance(const ExactDist& a, const ExactDist& b) {
    if (a.query_count != b.query_count)
        throw SupportMismatch("distributions over different query counts");
    Rational total = abs(a.err - b.err);
    std::set<std::string> keys;
    for (const auto& [k, _] : a.probs) keys.insert(k);
    for (const auto& [k, _] : b.probs) keys.insert(k);
    for (const std::string& k : keys) total += abs(a.prob(k) - b.prob(k));
    return total / 2;
}

ApproxReport ExactApproxReport::to_double() const {
    ApproxReport out;
    out.gap = static_cast<double>(gap);
    out.sum_ok = sum_ok;
    out.err_a = static_cast<double>(err_a);
    out.err_b = static_cast<double>(err_b);
    for (const auto& [b, v] : per_b) out.per_b[b] = static_cast<double>(v);
    return out;
}

namespace {

void check_gap_inputs(std::string_view z, std::size_t nu, const DiffList& candidate,
                      const DiffList& target) {
    candidate.validate();
    target.validate();
    if (candidate.query_count() != target.query_count())
        throw SupportMismatch("difference lists must have the same query count");
    if (nu == 0 || z.size() % nu != 0)
        throw NonDividing("chunk length must divide the string length");
}

template <class Dist, class Num>
void accumulate_gap(const Dist& ta, const Dist& tb, std::map<std::string, Num>& per_b,
                    Num& err_a, Num& err_b) {
    err_a += ta.err;
    err_b += tb.err;
    std::set<std::string> keys;
    for (const auto& [k, _] : ta.probs) keys.insert(k);
    for (const auto& [k, _] : tb.probs) keys.insert(k);
    for (const std::string& k : keys) {
        auto ia = ta.probs.find(k);
        auto ib = tb.probs.find(k);
        Num pa = ia == ta.probs.end() ? Num(0) : Num(ia->second);
        Num pb = ib == tb.probs.end() ? Num(0) : Num(ib->second);
        per_b[k] += pa > pb ? pa - pb : pb - pa;
    }
}

}  // namespace

ExactApproxReport approx_gap_exact(std::string_view z, std::size_t nu,
                                   const DiffList& candidate, const DiffList& target,
                                   const LayeredPattern& pattern,
                                   const EnumerationCaps& caps) {
    check_gap_inputs(z, nu, candidate, target);
    std::size_t chunks = z.size() / nu;
    ExactApproxReport report;
    report.sum_ok = candidate.span() <= target.span();
    for (std::size_t i = 1; i <= chunks; ++i) {
        std::string_view piece = chunk_view(z, nu, i);
        ExactDist ta = exact_freq_table(piece, candidate, pattern, caps);
        ExactDist tb = exact_freq_table(piece, target, pattern, caps);
        accumulate_gap(ta, tb, report.per_b, report.err_a, report.err_b);
    }
    Rational count(chunks);
    for (auto& [_, v] : report.per_b) v /= count;
    report.err_a /= count;
    report.err_b /= count;
    Rational worst = 0;
    for (const auto& [_, v] : report.per_b) worst = std::max(worst, v);
    report.gap = worst + report.err_a + report.err_b;
    return report;
}

ApproxReport approx_gap_mc(std::string_view z, std::size_t nu, const DiffList& candidate,
                           const DiffList& target, const Pattern& pattern,
                           std::size_t samples, std::uint64_t seed, unsigned workers) {
    check_gap_inputs(z, nu, candidate, target);
    std::size_t chunks = z.size() / nu;
    ApproxReport report;
    report.sum_ok = candidate.span() <= target.span();
    for (std::size_t i = 1; i <= chunks; ++i) {
        std::string_view piece = chunk_view(z, nu, i);
        OutputDist ta = mc_freq_table(piece, candidate, pattern, samples,
                                      derive(seed, i, 0xA), workers);
        OutputDist tb = mc_freq_table(piece, target, pattern, samples,
                                      derive(seed, i, 0xB), workers);
        accumulate_gap(ta, tb, report.per_b, report.err_a, report.err_b);
    }
    double count = static_cast<double>(chunks);
    for (auto& [_, v] : report.per_b) v /= count;
    report.err_a /= count;
    report.err_b /= count;
    double worst = 0;
    for (const auto& [_, v] : report.per_b) worst = std::max(worst, v);
    report.gap = worst + report.err_a + report.err_b;
    return report;
}

OutputDist freq_table(std::string_view s, const DiffList& diffs,
                      const LayeredPattern& pattern, const EvalPolicy& policy) {
    switch (policy.mode) {
        case EvalPolicy::Mode::exact:
            return exact_freq_table(s, diffs, pattern, policy.caps).to_double();
        case EvalPolicy::Mode::mc:
            return mc_freq_table(s, diffs, pattern, policy.samples, policy.seed,
                                 policy.workers);
        case EvalPolicy::Mode::hybrid:
            if (joint_state_count(pattern, s.size()) <= policy.caps.max_joint_states)
                return exact_freq_table(s, diffs, pattern, policy.caps).to_double();
            return mc_freq_table(s, diffs, pattern, policy.samples, policy.seed,
                                 policy.workers);
    }
    throw BadParams("unknown evaluation mode");
}

}  // namespace delchan
