#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "delchan/codeword.hpp"
#include "delchan/querydist.hpp"

namespace delchan {

// How a code's image is summarized: exhaustive when the message space is
// small, a seeded uniform sample otherwise. Every report records which.
struct ImagePolicy {
    std::size_t exhaustive_cap = 4096;
    std::size_t sample_size = 1024;
    std::uint64_t seed = 7;
};

MessageSample image_messages(const Code& code, const ImagePolicy& policy);

// Layer-ell weight of a string: mean squared freq over its length-kappa^ell
// chunks, the pattern restricted to layers <= ell.
Rational weight_exact(std::string_view z, std::string_view b, const DiffList& diffs,
                      const LayeredPattern& pattern, std::size_t ell,
                      const EnumerationCaps& caps = {});
double weight(std::string_view z, std::string_view b, const DiffList& diffs,
              const LayeredPattern& pattern, std::size_t ell, const EvalPolicy& policy);

// Mean weight over the code image.
Rational cumulative_weight_exact(const Code& code, std::string_view b,
                                 const DiffList& diffs, const LayeredPattern& pattern,
                                 std::size_t ell, const EnumerationCaps& caps = {},
                                 const ImagePolicy& image = {});
double cumulative_weight(const Code& code, std::string_view b, const DiffList& diffs,
                         const LayeredPattern& pattern, std::size_t ell,
                         const EvalPolicy& policy, const ImagePolicy& image = {});

// Per-layer cumulative weights 1..top with the sentinel convention
// (2 at or below layer 0, -1 above the top).
struct WeightProfile {
    std::string b;
    DiffList diffs;
    std::size_t kappa = 2;
    std::size_t top = 0;
    std::vector<double> values;
    bool exhaustive_image = true;

    double at(long ell) const;
};

WeightProfile weight_profile(const Code& code, std::string_view b, const DiffList& diffs,
                             const LayeredPattern& pattern, const EvalPolicy& policy,
                             const ImagePolicy& image = {});

// Layers where the decreasing single-query no-deletion profile crosses a
// multiple of delta = 1/delta_inverse: W(t+1) < k*delta <= W(t). The
// sentinels make 0 and the top layer always critical.
std::vector<std::size_t> critical_layers(const Code& code, char b,
                                         std::size_t delta_inverse, std::size_t kappa,
                                         const ImagePolicy& image = {});

// Upward scan for scales at which chunk refinement visibly changes the
// freq table: the first `window` layers from `base` are unconditional,
// afterwards a layer is added when the mean absolute freq difference
// against the previous found layer exceeds rho.
struct LayerScan {
    std::size_t base = 1;
    std::size_t window = 1;
    double rho = 0.0;
    std::vector<std::size_t> found;
    bool exhaustive_image = true;
};

LayerScan significant_layers(const Code& code, std::string_view b, const DiffList& diffs,
                             const LayeredPattern& pattern, double rho, std::size_t base,
                             std::size_t window, const EvalPolicy& policy,
                             const ImagePolicy& image = {});

// The chunk-refinement expectation the scan thresholds against rho.
double refinement_difference(const Code& code, std::string_view b, const DiffList& diffs,
                             const LayeredPattern& pattern, std::size_t tau,
                             std::size_t ell_small, std::size_t ell_big,
                             const EvalPolicy& policy, const ImagePolicy& image = {});

// Both sides of the variance identity: the mean within-chunk variance of
// sub-chunk freqs against the cumulative-weight drop. Equality is exact in
// the single-query no-deletion case.
struct TelescopingReport {
    Rational cw_low = 0;
    Rational cw_high = 0;
    Rational mean_variance = 0;

    Rational weight_drop() const { return cw_low - cw_high; }
};

TelescopingReport weight_telescoping_exact(const Code& code, std::string_view b,
                                           const DiffList& diffs,
                                           const LayeredPattern& pattern,
                                           std::size_t ell_lo, std::size_t ell_hi,
                                           const EnumerationCaps& caps = {},
                                           const ImagePolicy& image = {});

}  // namespace delchan
