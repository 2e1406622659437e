#include "delchan/layers.hpp"

#include <algorithm>
#include <cmath>

#include "delchan/errors.hpp"
#include "delchan/rng.hpp"

namespace delchan {

MessageSample image_messages(const Code& code, const ImagePolicy& policy) {
    double log_total =
        static_cast<double>(code.n) * std::log2(static_cast<double>(code.alphabet.size()));
    bool small = log_total <= 40 &&
                 ipow(code.alphabet.size(), code.n) <= policy.exhaustive_cap;
    return message_sample(code, small ? policy.exhaustive_cap : policy.sample_size,
                          policy.seed);
}

namespace {

std::size_t checked_chunk_count(std::string_view z, std::size_t chunk_len,
                                const char* what) {
    if (chunk_len == 0 || z.size() % chunk_len != 0)
        throw NonDividing(std::string(what) + ": chunk length " + std::to_string(chunk_len) +
                          " does not divide " + std::to_string(z.size()));
    return z.size() / chunk_len;
}

}  // namespace

Rational weight_exact(std::string_view z, std::string_view b, const DiffList& diffs,
                      const LayeredPattern& pattern, std::size_t ell,
                      const EnumerationCaps& caps) {
    std::size_t chunk_len = ipow(pattern.kappa, ell);
    std::size_t chunks = checked_chunk_count(z, chunk_len, "weight");
    LayeredPattern restricted = pattern.restricted(ell);
    Rational total = 0;
    for (std::size_t i = 1; i <= chunks; ++i) {
        Rational f = exact_freq(chunk_view(z, chunk_len, i), diffs, restricted, b, caps);
        total += f * f;
    }
    return total / Rational(chunks);
}

double weight(std::string_view z, std::string_view b, const DiffList& diffs,
              const LayeredPattern& pattern, std::size_t ell, const EvalPolicy& policy) {
    std::size_t chunk_len = ipow(pattern.kappa, ell);
    std::size_t chunks = checked_chunk_count(z, chunk_len, "weight");
    LayeredPattern restricted = pattern.restricted(ell);
    double total = 0;
    for (std::size_t i = 1; i <= chunks; ++i) {
        EvalPolicy local = policy;
        local.seed = derive(policy.seed, ell, i);
        OutputDist table = freq_table(chunk_view(z, chunk_len, i), diffs, restricted, local);
        auto it = table.probs.find(std::string(b));
        double f = it == table.probs.end() ? 0.0 : it->second;
        total += f * f;
    }
    return total / static_cast<double>(chunks);
}

namespace {

std::string padded_codeword(const Code& code, std::string_view message, std::size_t kappa) {
    Codeword word = encode(code, std::string(message));
    return pad_to_power(word, kappa).symbols;
}

}  // namespace

Rational cumulative_weight_exact(const Code& code, std::string_view b,
                                 const DiffList& diffs, const LayeredPattern& pattern,
                                 std::size_t ell, const EnumerationCaps& caps,
                                 const ImagePolicy& image) {
    MessageSample sample = image_messages(code, image);
    Rational total = 0;
    for (const std::string& msg : sample.messages)
        total += weight_exact(padded_codeword(code, msg, pattern.kappa), b, diffs, pattern,
                              ell, caps);
    return total / Rational(sample.messages.size());
}

double cumulative_weight(const Code& code, std::string_view b, const DiffList& diffs,
                         const LayeredPattern& pattern, std::size_t ell,
                         const EvalPolicy& policy, const ImagePolicy& image) {
    MessageSample sample = image_messages(code, image);
    double total = 0;
    std::size_t index = 0;
    for (const std::string& msg : sample.messages) {
        EvalPolicy local = policy;
        local.seed = derive(policy.seed, 0xC0DE, index++);
        total += weight(padded_codeword(code, msg, pattern.kappa), b, diffs, pattern, ell,
                        local);
    }
    return total / static_cast<double>(sample.messages.size());
}

double WeightProfile::at(long ell) const {
    if (ell <= 0) return 2.0;
    if (static_cast<std::size_t>(ell) > top) return -1.0;
    return values[static_cast<std::size_t>(ell) - 1];
}

WeightProfile weight_profile(const Code& code, std::string_view b, const DiffList& diffs,
                             const LayeredPattern& pattern, const EvalPolicy& policy,
                             const ImagePolicy& image) {
    WeightProfile profile;
    profile.b = std::string(b);
    profile.diffs = diffs;
    profile.kappa = pattern.kappa;
    std::size_t len = next_power(pattern.kappa, code.codeword_length());
    profile.top = floor_log(pattern.kappa, len);
    profile.exhaustive_image = image_messages(code, image).exhaustive;
    for (std::size_t ell = 1; ell <= profile.top; ++ell)
        profile.values.push_back(
            cumulative_weight(code, b, diffs, pattern, ell, policy, image));
    return profile;
}

std::vector<std::size_t> critical_layers(const Code& code, char b,
                                         std::size_t delta_inverse, std::size_t kappa,
                                         const ImagePolicy& image) {
    if (delta_inverse == 0) throw BadParams("1/delta must be a positive integer");
    std::size_t len = next_power(kappa, code.codeword_length());
    std::size_t top = floor_log(kappa, len);
    DiffList single;  // r = 1
    LayeredPattern none{kappa, {}};
    std::string pattern_b(1, b);
    std::vector<Rational> w(top + 2);
    w[0] = 2;  // sentinel below
    for (std::size_t t = 1; t <= top; ++t)
        w[t] = cumulative_weight_exact(code, pattern_b, single, none, t, {}, image);
    w[top + 1] = -1;  // sentinel above

    std::vector<std::size_t> critical;
    Rational d(delta_inverse);
    for (std::size_t t = 0; t <= top; ++t) {
        // exists k with W(t+1) < k/d <= W(t)?
        Rational scaled = w[t] * d;  // nonnegative for t <= top
        auto k_max = numerator(scaled) / denominator(scaled);
        if (Rational(k_max) / d > w[t + 1]) critical.push_back(t);
    }
    return critical;
}

namespace {

// Freq table of every chunk of z at the given scale, all outcomes at once.
std::vector<OutputDist> chunk_tables(std::string_view z, const DiffList& diffs,
                                     const LayeredPattern& pattern, std::size_t chunk_len,
                                     const EvalPolicy& policy, std::uint64_t salt) {
    std::size_t chunks = z.size() / chunk_len;
    std::vector<OutputDist> tables;
    tables.reserve(chunks);
    for (std::size_t i = 1; i <= chunks; ++i) {
        EvalPolicy local = policy;
        local.seed = derive(policy.seed, salt, i);
        tables.push_back(freq_table(chunk_view(z, chunk_len, i), diffs, pattern, local));
    }
    return tables;
}

double table_prob(const OutputDist& t, const std::string& b) {
    auto it = t.probs.find(b);
    return it == t.probs.end() ? 0.0 : it->second;
}

}  // namespace

double refinement_difference(const Code& code, std::string_view b, const DiffList& diffs,
                             const LayeredPattern& pattern, std::size_t tau,
                             std::size_t ell_small, std::size_t ell_big,
                             const EvalPolicy& policy, const ImagePolicy& image) {
    if (ell_small >= ell_big) throw BadParams("scales must satisfy ell_small < ell_big");
    MessageSample sample = image_messages(code, image);
    LayeredPattern restricted = pattern.restricted(tau);
    std::size_t small_len = ipow(pattern.kappa, ell_small);
    std::size_t big_len = ipow(pattern.kappa, ell_big);
    std::string key(b);
    double total = 0;
    std::size_t terms = 0;
    std::size_t msg_index = 0;
    for (const std::string& msg : sample.messages) {
        std::string z = padded_codeword(code, msg, pattern.kappa);
        checked_chunk_count(z, big_len, "refinement");
        EvalPolicy local = policy;
        local.seed = derive(policy.seed, msg_index, ell_big);
        std::vector<OutputDist> big = chunk_tables(z, diffs, restricted, big_len, local, 0xB);
        local.seed = derive(policy.seed, msg_index, ell_small);
        std::vector<OutputDist> small =
            chunk_tables(z, diffs, restricted, small_len, local, 0xA);
        std::size_t ratio = big_len / small_len;
        for (std::size_t j = 0; j < small.size(); ++j) {
            const OutputDist& container = big[j / ratio];
            total += std::abs(table_prob(container, key) - table_prob(small[j], key));
            ++terms;
        }
        ++msg_index;
    }
    return total / static_cast<double>(terms);
}

LayerScan significant_layers(const Code& code, std::string_view b, const DiffList& diffs,
                             const LayeredPattern& pattern, double rho, std::size_t base,
                             std::size_t window, const EvalPolicy& policy,
                             const ImagePolicy& image) {
    if (base < 1) throw BadParams("base layer must be >= 1");
    std::size_t len = next_power(pattern.kappa, code.codeword_length());
    std::size_t top = floor_log(pattern.kappa, len);
    LayerScan scan;
    scan.base = base;
    scan.window = window;
    scan.rho = rho;
    scan.exhaustive_image = image_messages(code, image).exhaustive;
    for (std::size_t ell = base; ell < base + window && ell <= top; ++ell)
        scan.found.push_back(ell);
    if (scan.found.empty()) return scan;
    std::size_t last = scan.found.back();
    for (std::size_t ell = last + 1; ell <= top; ++ell) {
        double diff =
            refinement_difference(code, b, diffs, pattern, base, last, ell, policy, image);
        if (diff > rho) {
            scan.found.push_back(ell);
            last = ell;
        }
    }
    return scan;
}

TelescopingReport weight_telescoping_exact(const Code& code, std::string_view b,
                                           const DiffList& diffs,
                                           const LayeredPattern& pattern,
                                           std::size_t ell_lo, std::size_t ell_hi,
                                           const EnumerationCaps& caps,
                                           const ImagePolicy& image) {
    if (ell_lo >= ell_hi) throw BadParams("layer pair must satisfy ell_lo < ell_hi");
    MessageSample sample = image_messages(code, image);
    std::size_t small_len = ipow(pattern.kappa, ell_lo);
    std::size_t big_len = ipow(pattern.kappa, ell_hi);
    std::size_t ratio = big_len / small_len;
    TelescopingReport report;
    Rational variance_total = 0;
    std::size_t big_total = 0;
    for (const std::string& msg : sample.messages) {
        std::string z = padded_codeword(code, msg, pattern.kappa);
        checked_chunk_count(z, big_len, "telescoping");
        report.cw_low += weight_exact(z, b, diffs, pattern, ell_lo, caps);
        report.cw_high += weight_exact(z, b, diffs, pattern, ell_hi, caps);
        LayeredPattern small_pat = pattern.restricted(ell_lo);
        std::size_t big_chunks = z.size() / big_len;
        for (std::size_t j = 1; j <= big_chunks; ++j) {
            std::vector<Rational> freqs;
            freqs.reserve(ratio);
            for (std::size_t t = 0; t < ratio; ++t) {
                std::size_t small_index = (j - 1) * ratio + t + 1;
                freqs.push_back(exact_freq(chunk_view(z, small_len, small_index), diffs,
                                           small_pat, b, caps));
            }
            Rational mean = 0;
            for (const Rational& f : freqs) mean += f;
            mean /= Rational(ratio);
            Rational var = 0;
            for (const Rational& f : freqs) var += (f - mean) * (f - mean);
            var /= Rational(ratio);
            variance_total += var;
            ++big_total;
        }
    }
    Rational count(sample.messages.size());
    report.cw_low /= count;
    report.cw_high /= count;
    report.mean_variance = variance_total / Rational(big_total);
    return report;
}

}  // namespace delchan
