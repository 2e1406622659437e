#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "delchan/codeword.hpp"
#include "delchan/delpat.hpp"
#include "delchan/querydist.hpp"

namespace delchan {

// Desk-scale stand-ins for the construction's tower-of-kappa constants.
// Each field documents the theory value it replaces; the construction's
// logic, not its constants, is what is exercised here.
struct AdversaryParams {
    std::size_t kappa = 4;
    std::size_t depth = 6;        // m; codewords live at length kappa^depth
    std::size_t max_queries = 2;  // k

    double preliminary_fraction = 0.004;  // theory kappa^{-kappa^2}
    double significant_fraction = 0.008;  // theory kappa^{-kappa^3 r^r}
    double final_fraction = 0.012;        // theory kappa^{-kappa^3} and kappa^{-5}

    std::size_t zero_depth = 1;         // layers left uncorrupted (theory kappa^3)
    std::size_t preliminary_depth = 2;  // last preliminary layer (theory 2 kappa^kappa)
    std::size_t small_cap = 2;          // direct differences 1..small_cap (theory kappa^3)
    std::size_t grid = 4;               // subdivisions per scale (theory kappa^{2 kappa^2})
    std::size_t window = 2;             // one-sided corruption reach (theory kappa^kappa)

    double rho = 0.1;     // significance threshold (theory 2^-kappa)
    double budget = 0.1;  // corruption cap, checked before returning

    long stride_exponent = -2;  // coarse stride kappa^{depth+this} (theory m-1.75 kappa^kappa)

    std::size_t sweep_begin = 0;  // 0 = preliminary_depth + 1
    std::size_t sweep_end = 0;    // 0 = depth - window

    std::size_t family_cap = 2048;            // per-r growth limit
    std::size_t significance_list_cap = 16;   // lists tested per (r, layer)
    std::size_t q_cap = 20000;                // limit on |Q|
    std::size_t image_cap = 12;               // image strings used while sweeping
    std::size_t mc_samples = 256;             // per-chunk samples past the exact cap
    std::uint64_t seed = 1;
    EnumerationCaps caps{262144};

    void validate() const;
    std::size_t total_length() const { return ipow(kappa, depth); }
    std::size_t stride() const;
};

struct SignificanceEvent {
    std::size_t layer = 0;
    std::size_t query_count = 0;
    std::string b;
    DiffList diffs;
    double difference = 0.0;
};

struct BuildLog {
    std::vector<SignificanceEvent> events;
    bool family_truncated = false;
    bool image_exhaustive = false;
};

// The finished construction: per-r families of difference lists, the
// derived difference and query sets, and the deletion pattern itself.
struct RepFamily {
    AdversaryParams params;
    std::vector<std::vector<DiffList>> families;        // index r-1 -> F_r, r in [k+1]
    std::vector<std::size_t> differences;               // sorted G
    std::vector<std::vector<std::size_t>> query_lists;  // Q, k positions each
    LayeredPattern pattern;
    BuildLog log;

    std::size_t kbar() const { return query_lists.size() * params.max_queries; }
};

RepFamily build_adversary(const Code& code, const AdversaryParams& params);

// G = every difference appearing in some family list plus the multiples of
// the coarse stride; Q = all max_queries-fold prefix sums over G.
std::pair<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> derive_g_q(
    const std::vector<std::vector<DiffList>>& families, std::size_t max_queries,
    std::size_t stride, std::size_t total_length, std::size_t q_cap);

// Outputs of every representative query list against one shared pattern
// realization; nullopt entries are err.
struct CompressedRecord {
    std::vector<std::optional<std::string>> outputs;
    std::uint64_t seed = 0;

    std::size_t kbar_symbols(std::size_t max_queries) const {
        return outputs.size() * max_queries;
    }
};

CompressedRecord compress(std::string_view z, const RepFamily& rep, std::uint64_t seed);

enum class MatchMode { empirical, structural };

// Selects the representative list standing in for an arbitrary query list.
// Structural matching compares starting position and differences scale by
// scale; empirical matching compares measured freq tables on the code
// image (cached per difference list).
class QueryMatcher {
public:
    QueryMatcher(const RepFamily& rep, const Code& code,
                 std::size_t mc_samples = 4000, std::uint64_t seed = 99);

    std::size_t match(const std::vector<std::size_t>& queries, MatchMode mode);

private:
    const OutputDist& table_for(const std::vector<std::size_t>& diffs);

    const RepFamily& rep_;
    std::vector<std::string> image_;
    std::size_t mc_samples_;
    std::uint64_t seed_;
    std::map<std::vector<std::size_t>, OutputDist> cache_;
};

std::optional<std::string> simulate_query(const CompressedRecord& record,
                                          const std::vector<std::size_t>& queries,
                                          const RepFamily& rep, MatchMode mode,
                                          QueryMatcher* matcher = nullptr);

}  // namespace delchan
