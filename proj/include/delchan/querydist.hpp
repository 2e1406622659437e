#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "delchan/delpat.hpp"

namespace delchan {

using Rational = boost::multiprecision::cpp_rational;

// Successive differences between non-adaptive query positions. The empty
// list is the single-query case.
struct DiffList {
    std::vector<std::size_t> diffs;

    std::size_t query_count() const { return diffs.size() + 1; }
    std::size_t span() const;
    // Per-query offsets from the shift position: 0, d1, d1+d2, ...
    std::vector<std::size_t> offsets() const;
    void validate() const;

    auto operator<=>(const DiffList&) const = default;
};

// Distribution over Sigma^r plus the explicit err outcome. Outcomes with
// zero mass are omitted from probs.
struct OutputDist {
    std::map<std::string, double> probs;
    double err = 0.0;
    std::size_t query_count = 1;

    double mass() const;
};

struct ExactDist {
    std::map<std::string, Rational> probs;
    Rational err = 0;
    std::size_t query_count = 1;

    Rational mass() const;
    Rational prob(std::string_view b) const;
    OutputDist to_double() const;
};

struct EnumerationCaps {
    std::uint64_t max_joint_states = 10'000'000;
};

// Exact shift-invariant frequency table: average over all shifts in
// [len(s)] and all equiprobable pattern instances, computed in rational
// arithmetic. Throws CapExceeded when shifts x instances exceeds the cap.
ExactDist exact_freq_table(std::string_view s, const DiffList& diffs,
                           const LayeredPattern& pattern,
                           const EnumerationCaps& caps = {});
Rational exact_freq(std::string_view s, const DiffList& diffs,
                    const LayeredPattern& pattern, std::string_view b,
                    const EnumerationCaps& caps = {});
Rational err_prob(std::string_view s, const DiffList& diffs,
                  const LayeredPattern& pattern, const EnumerationCaps& caps = {});

// Monte Carlo counterpart; samples shift and instance jointly. Output is a
// pure function of (inputs, samples, seed) regardless of worker count.
OutputDist mc_freq_table(std::string_view s, const DiffList& diffs,
                         const Pattern& pattern, std::size_t samples,
                         std::uint64_t seed, unsigned workers = 1);

// Output distribution of a fixed query-position list (no shift).
ExactDist exact_output_dist(std::string_view z, const std::vector<std::size_t>& queries,
                            const LayeredPattern& pattern,
                            const EnumerationCaps& caps = {});
OutputDist mc_output_dist(std::string_view z, const std::vector<std::size_t>& queries,
                          const Pattern& pattern, std::size_t samples,
                          std::uint64_t seed, unsigned workers = 1);

// Half L1 distance including the err coordinate.
double tv_distance(const OutputDist& a, const OutputDist& b);
Rational tv_distance(const ExactDist& a, const ExactDist& b);

// Chunk-averaged approximation gap between two difference lists: for each b
// the mean absolute freq difference over length-nu chunks, plus both
// chunk-averaged err terms; the gap takes the worst b. The candidate list
// approximates the target at level delta iff sum_ok and gap < delta.
struct ApproxReport {
    double gap = 0.0;
    bool sum_ok = false;
    std::map<std::string, double> per_b;
    double err_a = 0.0;
    double err_b = 0.0;
};

struct ExactApproxReport {
    Rational gap = 0;
    bool sum_ok = false;
    std::map<std::string, Rational> per_b;
    Rational err_a = 0;
    Rational err_b = 0;

    ApproxReport to_double() const;
};

ExactApproxReport approx_gap_exact(std::string_view z, std::size_t nu,
                                   const DiffList& candidate, const DiffList& target,
                                   const LayeredPattern& pattern,
                                   const EnumerationCaps& caps = {});
ApproxReport approx_gap_mc(std::string_view z, std::size_t nu, const DiffList& candidate,
                           const DiffList& target, const Pattern& pattern,
                           std::size_t samples, std::uint64_t seed,
                           unsigned workers = 1);

// Evaluation policy shared by the multi-scale modules: exact refuses
// configurations above the cap, mc always samples, hybrid enumerates when
// the joint space fits and samples otherwise.
struct EvalPolicy {
    enum class Mode { exact, mc, hybrid };
    Mode mode = Mode::exact;
    EnumerationCaps caps;
    std::size_t samples = 20000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

OutputDist freq_table(std::string_view s, const DiffList& diffs,
                      const LayeredPattern& pattern, const EvalPolicy& policy);

// Shifts x instances of the pattern on a length-nu string (saturating).
std::uint64_t joint_state_count(const LayeredPattern& pattern, std::size_t nu);

}  // namespace delchan
