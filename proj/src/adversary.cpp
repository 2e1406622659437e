#include "delchan/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "delchan/errors.hpp"
#include "delchan/rng.hpp"

namespace delchan {

void AdversaryParams::validate() const {
    if (kappa < 2) throw BadParams("kappa must be >= 2");
    if (depth < 2) throw BadParams("depth must be >= 2");
    if (max_queries < 1) throw BadParams("max_queries must be >= 1");
    for (double f : {preliminary_fraction, significant_fraction, final_fraction})
        if (f <= 0.0 || f >= 1.0) throw BadParams("layer fractions must lie in (0,1)");
    if (budget <= 0.0 || budget > 1.0) throw BadParams("budget must lie in (0,1]");
    if (rho <= 0.0) throw BadParams("rho must be positive");
    if (grid < 2) throw BadParams("grid must be >= 2");
    if (window < 1) throw BadParams("window must be >= 1");
    if (preliminary_depth <= zero_depth || preliminary_depth > depth)
        throw BadParams("preliminary_depth must lie in (zero_depth, depth]");
    if (stride_exponent >= 0 || depth + stride_exponent < 1)
        throw BadParams("stride exponent must keep the stride inside the string");
    if (image_cap == 0 || mc_samples == 0 || family_cap == 0 || q_cap == 0)
        throw BadParams("caps must be positive");
}

std::size_t AdversaryParams::stride() const {
    return ipow(kappa, static_cast<std::size_t>(static_cast<long>(depth) + stride_exponent));
}

namespace {

// All outcome patterns b in Sigma^r, lexicographic in alphabet order.
std::vector<std::string> all_patterns(const Alphabet& alphabet, std::size_t r) {
    std::vector<std::string> out{""};
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<std::string> next;
        next.reserve(out.size() * alphabet.size());
        for (const std::string& prefix : out)
            for (char c : alphabet.symbols) next.push_back(prefix + c);
        out = std::move(next);
    }
    return out;
}

std::string pad_to_exact(const Codeword& word, std::size_t target) {
    if (word.length() > target)
        throw BadParams("codeword length " + std::to_string(word.length()) +
                        " exceeds kappa^depth = " + std::to_string(target));
    std::string out = word.symbols;
    out.append(target - out.size(), word.alphabet.zero());
    return out;
}

// Deduplicating, insertion-ordered family with a growth cap.
struct FamilySet {
    std::vector<DiffList> lists;
    std::set<std::vector<std::size_t>> seen;
    bool add(const DiffList& d, std::size_t cap) {
        if (lists.size() >= cap) return false;
        if (!seen.insert(d.diffs).second) return true;
        lists.push_back(d);
        return true;
    }
};

// Grid of important differences around the given scales: every
// kappa^a * (1 + i/grid) for a in [lo, hi], i in [1, grid].
std::vector<std::size_t> scale_grid(std::size_t kappa, std::size_t lo, std::size_t hi,
                                    std::size_t grid) {
    std::set<std::size_t> values;
    for (std::size_t a = lo; a <= hi; ++a) {
        double base = static_cast<double>(ipow(kappa, a));
        for (std::size_t i = 1; i <= grid; ++i) {
            double v = base * (1.0 + static_cast<double>(i) / static_cast<double>(grid));
            values.insert(static_cast<std::size_t>(std::llround(v)));
        }
    }
    return {values.begin(), values.end()};
}

// Splices existing family lists with single grid differences:
// block? s block? s ... block?, at least one s, total length `length`.
struct InterleaveBudget {
    std::size_t emitted = 0;
    std::size_t nodes = 0;
    bool exhausted = false;
};

void interleave(std::vector<std::size_t>& current, std::size_t remaining,
                bool last_was_block, bool used_grid,
                const std::vector<std::size_t>& grid_diffs,
                const std::vector<const DiffList*>& blocks, FamilySet& target,
                std::size_t cap, InterleaveBudget& budget) {
    if (budget.exhausted) return;
    if (++budget.nodes > 200000 || target.lists.size() >= cap) {
        budget.exhausted = true;
        return;
    }
    if (remaining == 0) {
        if (used_grid) {
            ++budget.emitted;
            target.add(DiffList{current}, cap);
        }
        return;
    }
    for (std::size_t s : grid_diffs) {
        current.push_back(s);
        interleave(current, remaining - 1, false, true, grid_diffs, blocks, target, cap,
                   budget);
        current.pop_back();
        if (budget.exhausted) return;
    }
    if (!last_was_block) {
        for (const DiffList* block : blocks) {
            if (block->diffs.empty() || block->diffs.size() > remaining) continue;
            current.insert(current.end(), block->diffs.begin(), block->diffs.end());
            interleave(current, remaining - block->diffs.size(), true, used_grid,
                       grid_diffs, blocks, target, cap, budget);
            current.resize(current.size() - block->diffs.size());
            if (budget.exhausted) return;
        }
    }
}

struct ScanState {
    std::size_t tau = 1;
    std::map<std::string, std::size_t> last;  // per outcome pattern b
};

// Per-chunk freq tables of z at one scale under the restricted pattern.
std::vector<OutputDist> tables_at_scale(std::string_view z, const DiffList& diffs,
                                        const LayeredPattern& restricted,
                                        std::size_t chunk_len, const EvalPolicy& policy,
                                        std::uint64_t salt) {
    std::size_t chunks = z.size() / chunk_len;
    std::vector<OutputDist> tables;
    tables.reserve(chunks);
    for (std::size_t i = 1; i <= chunks; ++i) {
        EvalPolicy local = policy;
        local.seed = derive(policy.seed, salt, i);
        tables.push_back(freq_table(chunk_view(z, chunk_len, i), diffs, restricted, local));
    }
    return tables;
}

double dist_prob(const OutputDist& t, const std::string& b) {
    auto it = t.probs.find(b);
    return it == t.probs.end() ? 0.0 : it->second;
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> derive_g_q(
    const std::vector<std::vector<DiffList>>& families, std::size_t max_queries,
    std::size_t stride, std::size_t total_length, std::size_t q_cap) {
    std::set<std::size_t> g;
    for (const auto& family : families)
        for (const DiffList& list : family)
            for (std::size_t d : list.diffs) g.insert(d);
    if (stride == 0 || stride > total_length)
        throw BadParams("stride must lie within the string");
    for (std::size_t v = stride; v <= total_length; v += stride) g.insert(v);
    std::vector<std::size_t> differences(g.begin(), g.end());

    std::uint64_t q_count = 1;
    for (std::size_t i = 0; i < max_queries; ++i) {
        q_count *= differences.size();
        if (q_count > q_cap)
            throw QTooLarge("|Q| would reach " + std::to_string(q_count) + " > cap " +
                            std::to_string(q_cap) + "; raise the stride");
    }

    std::vector<std::vector<std::size_t>> queries;
    queries.reserve(static_cast<std::size_t>(q_count));
    std::vector<std::size_t> pick(max_queries, 0);
    while (true) {
        std::vector<std::size_t> positions;
        positions.reserve(max_queries);
        std::size_t acc = 0;
        for (std::size_t j = 0; j < max_queries; ++j) {
            acc += differences[pick[j]];
            positions.push_back(acc);
        }
        queries.push_back(std::move(positions));
        std::size_t pos = 0;
        while (pos < max_queries && pick[pos] == differences.size() - 1) pick[pos++] = 0;
        if (pos == max_queries) break;
        ++pick[pos];
    }
    return {std::move(differences), std::move(queries)};
}

RepFamily build_adversary(const Code& code, const AdversaryParams& params) {
    params.validate();
    code.validate();
    const std::size_t kappa = params.kappa;
    const std::size_t m = params.depth;
    const std::size_t total = params.total_length();
    const std::size_t family_count = params.max_queries + 1;

    RepFamily rep;
    rep.params = params;

    MessageSample sample = message_sample(code, params.image_cap, derive(params.seed, 0x1A));
    rep.log.image_exhaustive = sample.exhaustive;
    std::vector<std::string> image;
    image.reserve(sample.messages.size());
    for (const std::string& msg : sample.messages)
        image.push_back(pad_to_exact(encode(code, msg), total));

    // Phase 1: preliminary fractions and the seed set S of differences.
    std::vector<double> fractions(m, 0.0);
    for (std::size_t a = params.zero_depth + 1; a <= params.preliminary_depth && a <= m; ++a)
        fractions[a - 1] = params.preliminary_fraction;

    std::vector<std::size_t> seed_diffs;
    for (std::size_t d = 1; d <= params.small_cap; ++d) seed_diffs.push_back(d);
    for (std::size_t d :
         scale_grid(kappa, params.zero_depth + 1, params.preliminary_depth, params.grid))
        seed_diffs.push_back(d);
    std::sort(seed_diffs.begin(), seed_diffs.end());
    seed_diffs.erase(std::unique(seed_diffs.begin(), seed_diffs.end()), seed_diffs.end());

    std::vector<FamilySet> families(family_count);
    families[0].add(DiffList{}, params.family_cap);  // the empty list seeds F_1
    for (std::size_t r = 2; r <= family_count; ++r) {
        std::vector<std::size_t> pick(r - 1, 0);
        while (true) {
            DiffList list;
            list.diffs.reserve(r - 1);
            for (std::size_t p : pick) list.diffs.push_back(seed_diffs[p]);
            if (!families[r - 1].add(list, params.family_cap))
                rep.log.family_truncated = true;
            std::size_t pos = 0;
            while (pos < r - 1 && pick[pos] == seed_diffs.size() - 1) pick[pos++] = 0;
            if (pos == r - 1) break;
            ++pick[pos];
        }
    }

    // Phase 2: sweep the middle layers, corrupting where the image shows
    // scale structure and growing the families correspondingly.
    std::map<std::vector<std::size_t>, ScanState> states;
    EvalPolicy policy;
    policy.mode = EvalPolicy::Mode::hybrid;
    policy.caps = params.caps;
    policy.samples = params.mc_samples;
    policy.workers = 1;

    std::size_t sweep_begin =
        params.sweep_begin ? params.sweep_begin : params.preliminary_depth + 1;
    std::size_t sweep_end =
        params.sweep_end ? params.sweep_end : (m > params.window ? m - params.window : 1);

    for (std::size_t a = sweep_begin; a <= sweep_end; ++a) {
        LayeredPattern so_far{kappa, fractions};
        std::vector<SignificanceEvent> events;

        for (std::size_t r = 1; r <= family_count; ++r) {
            std::size_t tested = 0;
            for (const DiffList& list : families[r - 1].lists) {
                if (tested >= params.significance_list_cap) break;
                std::size_t span = list.span();
                if (span > ipow(kappa, a - 1)) continue;  // only well-contained lists
                ++tested;

                ScanState& state = states[list.diffs];
                if (state.last.empty()) {
                    state.tau = std::max<std::size_t>(
                        1, span == 0 ? 1 : floor_log(kappa, std::max<std::size_t>(span, 1)));
                    std::size_t start = std::min(state.tau + params.window - 1, m);
                    for (const std::string& b : all_patterns(code.alphabet, r))
                        state.last[b] = start;
                }
                LayeredPattern restricted = so_far.restricted(state.tau);

                // Group the b patterns by their scan position so each scale's
                // tables are computed once.
                std::map<std::size_t, std::vector<std::string>> by_scale;
                for (const auto& [b, last] : state.last)
                    if (a > last) by_scale[last].push_back(b);
                if (by_scale.empty()) continue;

                std::size_t big_len = ipow(kappa, a);
                std::map<std::string, double> diff_sum;
                std::map<std::string, std::size_t> diff_terms;
                for (std::size_t zi = 0; zi < image.size(); ++zi) {
                    EvalPolicy local = policy;
                    local.seed = derive(params.seed, a, zi, 0xB16);
                    std::vector<OutputDist> big =
                        tables_at_scale(image[zi], list, restricted, big_len, local, r);
                    for (const auto& [small_scale, bs] : by_scale) {
                        std::size_t small_len = ipow(kappa, small_scale);
                        EvalPolicy small_policy = policy;
                        small_policy.seed = derive(params.seed, small_scale, zi, 0x5A);
                        std::vector<OutputDist> small = tables_at_scale(
                            image[zi], list, restricted, small_len, small_policy, r);
                        std::size_t ratio = big_len / small_len;
                        for (const std::string& b : bs) {
                            double acc = 0;
                            for (std::size_t j = 0; j < small.size(); ++j)
                                acc += std::abs(dist_prob(big[j / ratio], b) -
                                                dist_prob(small[j], b));
                            diff_sum[b] += acc;
                            diff_terms[b] += small.size();
                        }
                    }
                }
                for (auto& [b, sum] : diff_sum) {
                    double mean = sum / static_cast<double>(diff_terms[b]);
                    if (mean > params.rho) {
                        events.push_back(SignificanceEvent{a, r, b, list, mean});
                        state.last[b] = a;
                    }
                }
            }
        }

        if (events.empty()) continue;
        rep.log.events.insert(rep.log.events.end(), events.begin(), events.end());
        std::size_t r_star = events.front().query_count;
        for (const SignificanceEvent& e : events)
            r_star = std::min(r_star, e.query_count);

        std::size_t reach_lo = a > params.window ? a - params.window + 1 : 1;
        std::size_t reach_hi = std::min(m, a + params.window - 1);
        for (std::size_t layer = reach_lo; layer <= reach_hi; ++layer)
            fractions[layer - 1] =
                std::max(fractions[layer - 1], params.significant_fraction);

        std::vector<std::size_t> grid_diffs =
            scale_grid(kappa, reach_lo, std::min(reach_hi, m - 1), params.grid);
        std::vector<const DiffList*> blocks;
        for (const auto& family : families)
            for (const DiffList& list : family.lists) blocks.push_back(&list);
        for (std::size_t r_prime = r_star + 1; r_prime <= family_count; ++r_prime) {
            InterleaveBudget budget;
            std::vector<std::size_t> scratch;
            interleave(scratch, r_prime - 1, false, false, grid_diffs, blocks,
                       families[r_prime - 1], params.family_cap, budget);
            if (budget.exhausted) rep.log.family_truncated = true;
        }
    }

    // Phase 3: the top window and the top layer.
    std::size_t top_lo = m > params.window ? m - params.window : 1;
    for (std::size_t layer = top_lo; layer <= m; ++layer)
        fractions[layer - 1] = std::max(fractions[layer - 1], params.final_fraction);

    double assigned = 0;
    for (double f : fractions) assigned += f;
    if (assigned > params.budget)
        throw BudgetExceeded("constructed pattern deletes up to " + std::to_string(assigned) +
                             " > budget " + std::to_string(params.budget) +
                             "; shrink the layer fractions");

    rep.pattern = LayeredPattern{kappa, fractions};
    for (FamilySet& family : families) rep.families.push_back(std::move(family.lists));
    std::tie(rep.differences, rep.query_lists) =
        derive_g_q(rep.families, params.max_queries, params.stride(), total, params.q_cap);
    return rep;
}

CompressedRecord compress(std::string_view z, const RepFamily& rep, std::uint64_t seed) {
    if (z.size() != rep.params.total_length())
        throw LengthMismatch("string length " + std::to_string(z.size()) +
                             ", pattern expects " +
                             std::to_string(rep.params.total_length()));
    PatternInstance inst = sample_instance(rep.pattern, z.size(), seed);
    CompressedRecord record;
    record.seed = seed;
    record.outputs.reserve(rep.query_lists.size());
    for (const auto& queries : rep.query_lists) {
        std::string outcome;
        bool ok = true;
        for (std::size_t q : queries) {
            if (q > inst.survivor_map.size()) {
                ok = false;
                break;
            }
            outcome.push_back(z[inst.survivor_map[q - 1] - 1]);
        }
        if (ok) {
            record.outputs.emplace_back(std::move(outcome));
        } else {
            record.outputs.emplace_back(std::nullopt);
        }
    }
    return record;
}

QueryMatcher::QueryMatcher(const RepFamily& rep, const Code& code, std::size_t mc_samples,
                           std::uint64_t seed)
    : rep_(rep), mc_samples_(mc_samples), seed_(seed) {
    MessageSample sample =
        message_sample(code, rep.params.image_cap, derive(rep.params.seed, 0x1A));
    image_.reserve(sample.messages.size());
    for (const std::string& msg : sample.messages)
        image_.push_back(encode(code, msg).symbols);
    for (std::string& z : image_) {
        if (z.size() > rep.params.total_length())
            throw BadParams("codeword longer than the pattern length");
        z.append(rep.params.total_length() - z.size(), code.alphabet.zero());
    }
}

const OutputDist& QueryMatcher::table_for(const std::vector<std::size_t>& diffs) {
    auto it = cache_.find(diffs);
    if (it != cache_.end()) return it->second;
    DiffList list{diffs};
    OutputDist averaged;
    averaged.query_count = list.query_count();
    for (std::size_t zi = 0; zi < image_.size(); ++zi) {
        OutputDist t = mc_freq_table(image_[zi], list, Pattern{rep_.pattern}, mc_samples_,
                                     derive(seed_, zi));
        averaged.err += t.err;
        for (const auto& [b, p] : t.probs) averaged.probs[b] += p;
    }
    averaged.err /= static_cast<double>(image_.size());
    for (auto& [_, p] : averaged.probs) p /= static_cast<double>(image_.size());
    return cache_.emplace(diffs, std::move(averaged)).first->second;
}

namespace {

std::vector<std::size_t> diffs_of(const std::vector<std::size_t>& queries) {
    std::vector<std::size_t> out;
    out.reserve(queries.size() - 1);
    for (std::size_t i = 1; i < queries.size(); ++i)
        out.push_back(queries[i] - queries[i - 1]);
    return out;
}

double table_gap(const OutputDist& a, const OutputDist& b) {
    double worst = 0;
    std::set<std::string> keys;
    for (const auto& [k, _] : a.probs) keys.insert(k);
    for (const auto& [k, _] : b.probs) keys.insert(k);
    for (const std::string& k : keys) {
        auto ia = a.probs.find(k);
        auto ib = b.probs.find(k);
        double pa = ia == a.probs.end() ? 0.0 : ia->second;
        double pb = ib == b.probs.end() ? 0.0 : ib->second;
        worst = std::max(worst, std::abs(pa - pb));
    }
    return worst + a.err + b.err;
}

double structural_score(const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
    // Compare starting position and each difference on a log scale.
    double score = std::abs(std::log2(static_cast<double>(a[0])) -
                            std::log2(static_cast<double>(b[0])));
    for (std::size_t i = 1; i < a.size(); ++i) {
        double da = static_cast<double>(a[i] - a[i - 1]);
        double db = static_cast<double>(b[i] - b[i - 1]);
        score += std::abs(std::log2(da) - std::log2(db));
    }
    return score;
}

void check_query_list(const std::vector<std::size_t>& queries, std::size_t expected) {
    if (queries.size() != expected)
        throw BadParams("query list must have exactly " + std::to_string(expected) +
                        " positions");
    if (queries.front() == 0 || !std::is_sorted(queries.begin(), queries.end()) ||
        std::adjacent_find(queries.begin(), queries.end()) != queries.end())
        throw BadParams("query positions must be strictly increasing and 1-based");
}

}  // namespace

std::size_t QueryMatcher::match(const std::vector<std::size_t>& queries, MatchMode mode) {
    if (rep_.query_lists.empty()) throw NoMatch("the representative query set is empty");
    check_query_list(queries, rep_.params.max_queries);

    std::size_t best = 0;
    double best_score = 0;
    double best_tiebreak = 0;
    bool first = true;
    for (std::size_t i = 0; i < rep_.query_lists.size(); ++i) {
        const auto& candidate = rep_.query_lists[i];
        double score;
        if (mode == MatchMode::structural) {
            score = structural_score(queries, candidate);
        } else {
            score = table_gap(table_for(diffs_of(queries)), table_for(diffs_of(candidate)));
        }
        double tiebreak = std::abs(static_cast<double>(queries[0]) -
                                   static_cast<double>(candidate[0]));
        if (first || score < best_score ||
            (score == best_score && tiebreak < best_tiebreak)) {
            best = i;
            best_score = score;
            best_tiebreak = tiebreak;
            first = false;
        }
    }
    return best;
}

std::optional<std::string> simulate_query(const CompressedRecord& record,
                                          const std::vector<std::size_t>& queries,
                                          const RepFamily& rep, MatchMode mode,
                                          QueryMatcher* matcher) {
    if (record.outputs.size() != rep.query_lists.size())
        throw BadParams("record and family disagree on |Q|");
    if (rep.query_lists.empty()) throw NoMatch("the representative query set is empty");
    std::size_t index;
    if (matcher) {
        index = matcher->match(queries, mode);
    } else {
        if (mode == MatchMode::empirical)
            throw BadParams("empirical matching needs a QueryMatcher built on the code");
        check_query_list(queries, rep.params.max_queries);
        std::size_t best = 0;
        double best_score = 0;
        bool first = true;
        for (std::size_t i = 0; i < rep.query_lists.size(); ++i) {
            double score = structural_score(queries, rep.query_lists[i]);
            if (first || score < best_score) {
                best = i;
                best_score = score;
                first = false;
            }
        }
        index = best;
    }
    return record.outputs[index];
}

}  // namespace delchan
