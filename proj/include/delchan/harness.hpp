#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "delchan/adversary.hpp"
#include "delchan/codeword.hpp"
#include "delchan/delpat.hpp"
#include "delchan/querydist.hpp"

namespace delchan {

// Substitution control channel: each symbol is independently replaced by a
// uniformly random other symbol with the given rate. Length-preserving.
struct SubstitutionNoise {
    double rate = 0.05;
};

using Channel = std::variant<LayeredPattern, PrefixPeriodicPattern, SubstitutionNoise>;

std::string corrupt(std::string_view z, const Alphabet& alphabet, const Channel& channel,
                    std::uint64_t seed);
std::string channel_description(const Channel& channel);

// A non-adaptive decoder family: one query plan per message index. Reads
// past the end of the corrupted string return the zero symbol.
struct Decoder {
    std::size_t query_count = 1;
    std::function<std::vector<std::size_t>(std::size_t index, std::uint64_t seed)> plan;
    std::function<char(std::size_t index, const std::string& outputs)> combine;
};

Decoder direct_decoder();
Decoder hadamard_decoder(const Code& code);
Decoder constant_decoder(char guess, std::size_t query_count = 1);

struct EvalOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::size_t message_cap = 1024;
    unsigned workers = 1;
};

// Success rate of guessing x[index] per message in the evaluation set.
std::map<std::string, double> eval_decoder(const Code& code, const Decoder& decoder,
                                           const Channel& channel, std::size_t index,
                                           const EvalOptions& options);

struct AttackCell {
    std::size_t index = 0;
    std::string message;
    double rate = 0.0;
};

struct AttackReport {
    std::size_t trials = 0;
    double threshold = 0.0;  // the 1/2 + eps bar
    std::string channel;
    std::vector<AttackCell> cells;  // every (index, message) pair evaluated
    std::size_t worst_index = 0;
    std::string worst_message;
    double worst_rate = 1.0;
    bool has_failing_index = false;  // some cell below the bar
};

AttackReport attack_report(const Code& code, const Decoder& decoder, const Channel& channel,
                           double eps, const EvalOptions& options);

// Rearranged entropy bound: recovery of all indices from a K-bar-symbol
// compression is infeasible once n > kbar * log2(sigma) / eps^6.
struct FanoVerdict {
    bool feasible = true;
    double threshold = 0.0;
};

FanoVerdict fano_check(double kbar_symbols, std::size_t n, double eps,
                       std::size_t alphabet_size);

// Plug-in estimate of I(X; f(C(X))) in bits from sampled (message, record)
// pairs, the record drawn with a fresh pattern realization per sample.
double mutual_info_estimate(const Code& code, const RepFamily& rep, std::size_t samples,
                            std::uint64_t seed);

// Hamming-distance deletion attack on LCC candidates: find two codewords
// closer than eps_prime * M and delete the differing positions from each.
struct LccAttack {
    std::string message_a;
    std::string message_b;
    std::vector<std::size_t> differing;  // positions deleted from both codewords
    std::string corrupted_a;
    std::string corrupted_b;
};

std::optional<LccAttack> lcc_distance_attack(const Code& code, double eps_prime,
                                             std::size_t message_cap = 1024,
                                             std::uint64_t seed = 1);

// sqrt(n) blocks of sqrt(n) zeros / ones, alternating; n a power of 4.
std::string alternating_block_string(std::size_t n);
// Alternating blocks of length 2^beta: A blocks hold runs of 2^alpha equal
// symbols, B blocks alternate every position.
std::string ab_block_string(std::size_t n, std::size_t alpha, std::size_t beta);

struct GapDistances {
    std::size_t n = 0;
    double eps = 0.0;
    std::size_t anchor = 1;
    std::size_t samples = 0;
    std::vector<std::size_t> gaps;
    std::vector<OutputDist> dists;  // parallel to gaps
    // (gap index a, gap index b) -> tv
    std::vector<std::tuple<std::size_t, std::size_t, double>> pairwise_tv;

    double tv(std::size_t a, std::size_t b) const;
};

GapDistances block_gap_experiment(std::size_t n, double eps,
                                  const std::vector<std::size_t>& gaps,
                                  std::size_t samples, std::uint64_t seed,
                                  std::size_t anchor = 1, unsigned workers = 1);

struct FourQueryReport {
    std::size_t n = 0;
    double eps = 0.0;
    std::size_t alpha = 0;
    std::size_t beta = 0;
    std::size_t d_small = 0;
    std::size_t d_large = 0;
    std::size_t anchor = 1;
    std::size_t samples = 0;
    OutputDist dist_small;
    OutputDist dist_large;
    double tv = 0.0;
};

FourQueryReport ab_four_query_experiment(std::size_t n, double eps, std::size_t alpha,
                                         std::size_t beta, std::size_t d_small,
                                         std::size_t d_large, std::size_t samples,
                                         std::uint64_t seed, std::size_t anchor = 1,
                                         unsigned workers = 1);

}  // namespace delchan
