#include "delchan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "delchan/errors.hpp"
#include "delchan/rng.hpp"

namespace delchan {

std::string corrupt(std::string_view z, const Alphabet& alphabet, const Channel& channel,
                    std::uint64_t seed) {
    if (const auto* layered = std::get_if<LayeredPattern>(&channel)) {
        PatternInstance inst = sample_instance(*layered, z.size(), seed);
        return apply_deletions(z, inst.deleted);
    }
    if (const auto* pp = std::get_if<PrefixPeriodicPattern>(&channel)) {
        return apply_deletions(z, sample_prefix_periodic(z.size(), pp->eps, seed));
    }
    const auto& noise = std::get<SubstitutionNoise>(channel);
    if (noise.rate < 0.0 || noise.rate > 1.0)
        throw BadParams("substitution rate must lie in [0,1]");
    std::string out(z);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t h = derive(seed, i, 0x5B);
        if (unit_real(h) >= noise.rate) continue;
        std::size_t self = alphabet.index_of(out[i]);
        std::size_t pick = uniform_upto(derive(seed, i, 0x5C), alphabet.size() - 2);
        if (pick >= self) ++pick;
        out[i] = alphabet.symbols[pick];
    }
    return out;
}

std::string channel_description(const Channel& channel) {
    std::ostringstream out;
    if (const auto* layered = std::get_if<LayeredPattern>(&channel)) {
        out << "layered(kappa=" << layered->kappa << ", depth=" << layered->depth()
            << ", bound=" << layered->total_corruption_bound() << ")";
    } else if (const auto* pp = std::get_if<PrefixPeriodicPattern>(&channel)) {
        out << "prefix_periodic(eps=" << pp->eps << ")";
    } else {
        out << "substitution(rate=" << std::get<SubstitutionNoise>(channel).rate << ")";
    }
    return out.str();
}

Decoder direct_decoder() {
    Decoder d;
    d.query_count = 1;
    d.plan = [](std::size_t index, std::uint64_t) {
        return std::vector<std::size_t>{index};
    };
    d.combine = [](std::size_t, const std::string& outputs) { return outputs[0]; };
    return d;
}

Decoder hadamard_decoder(const Code& code) {
    if (code.kind != CodeKind::hadamard)
        throw BadParams("hadamard decoder expects a hadamard code");
    std::size_t n = code.n;
    Decoder d;
    d.query_count = 2;
    d.plan = [n](std::size_t index, std::uint64_t seed) {
        if (index < 1 || index > n) throw OutOfRange("message index out of range");
        std::uint64_t space = (std::uint64_t(1) << n) - 1;
        std::uint64_t y = uniform_upto(derive(seed, 0x4AD), space);
        std::uint64_t mask = std::uint64_t(1) << (n - index);
        std::vector<std::size_t> positions{static_cast<std::size_t>(y) + 1,
                                           static_cast<std::size_t>(y ^ mask) + 1};
        std::sort(positions.begin(), positions.end());
        return positions;
    };
    d.combine = [](std::size_t, const std::string& outputs) {
        unsigned acc = 0;
        for (char c : outputs) acc ^= (c == '1');
        return acc ? '1' : '0';
    };
    return d;
}

Decoder constant_decoder(char guess, std::size_t query_count) {
    Decoder d;
    d.query_count = query_count;
    d.plan = [query_count](std::size_t, std::uint64_t) {
        std::vector<std::size_t> positions(query_count);
        for (std::size_t j = 0; j < query_count; ++j) positions[j] = j + 1;
        return positions;
    };
    d.combine = [guess](std::size_t, const std::string&) { return guess; };
    return d;
}

namespace {

char read_or_zero(std::string_view corrupted, const Alphabet& alphabet, std::size_t pos) {
    // Out-of-bounds queries return the zero symbol.
    if (pos == 0) throw BadParams("query positions are 1-based");
    return pos <= corrupted.size() ? corrupted[pos - 1] : alphabet.zero();
}

}  // namespace

std::map<std::string, double> eval_decoder(const Code& code, const Decoder& decoder,
                                           const Channel& channel, std::size_t index,
                                           const EvalOptions& options) {
    code.validate();
    if (options.trials == 0) throw BadParams("trials must be positive");
    if (index < 1 || index > code.n) throw OutOfRange("message index out of range");
    MessageSample sample =
        message_sample(code, options.message_cap, derive(options.seed, 0x3E7));

    std::vector<double> rates(sample.messages.size(), 0.0);
    unsigned workers = std::max(1u, options.workers);
    std::size_t thread_count = std::min<std::size_t>(workers, sample.messages.size());
    auto run = [&](std::size_t t) {
        for (std::size_t mi = t; mi < sample.messages.size(); mi += thread_count) {
            const std::string& message = sample.messages[mi];
            std::string z = encode(code, message).symbols;
            std::size_t hits = 0;
            for (std::size_t trial = 0; trial < options.trials; ++trial) {
                std::uint64_t channel_seed = derive(options.seed, mi, trial, 0xC0);
                std::uint64_t plan_seed = derive(options.seed, mi, trial, 0xD0);
                std::string corrupted = corrupt(z, code.alphabet, channel, channel_seed);
                std::vector<std::size_t> positions = decoder.plan(index, plan_seed);
                if (positions.size() != decoder.query_count ||
                    !std::is_sorted(positions.begin(), positions.end()))
                    throw BadParams("decoder plan must emit sorted query positions");
                std::string outputs;
                outputs.reserve(positions.size());
                for (std::size_t pos : positions)
                    outputs.push_back(read_or_zero(corrupted, code.alphabet, pos));
                if (decoder.combine(index, outputs) == message[index - 1]) ++hits;
            }
            rates[mi] = static_cast<double>(hits) / static_cast<double>(options.trials);
        }
    };
    if (thread_count <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(run, t);
        for (auto& th : pool) th.join();
    }

    std::map<std::string, double> out;
    for (std::size_t mi = 0; mi < sample.messages.size(); ++mi)
        out[sample.messages[mi]] = rates[mi];
    return out;
}

AttackReport attack_report(const Code& code, const Decoder& decoder, const Channel& channel,
                           double eps, const EvalOptions& options) {
    AttackReport report;
    report.trials = options.trials;
    report.threshold = 0.5 + eps;
    report.channel = channel_description(channel);
    for (std::size_t index = 1; index <= code.n; ++index) {
        auto rates = eval_decoder(code, decoder, channel, index, options);
        for (const auto& [message, rate] : rates) {
            report.cells.push_back(AttackCell{index, message, rate});
            if (rate < report.worst_rate ||
                (report.worst_message.empty() && report.cells.size() == 1)) {
                report.worst_rate = rate;
                report.worst_index = index;
                report.worst_message = message;
            }
        }
    }
    // The bar is "at least 1/2 + eps"; a tie with the bar still passes it.
    report.has_failing_index = report.worst_rate < report.threshold;
    return report;
}

FanoVerdict fano_check(double kbar_symbols, std::size_t n, double eps,
                       std::size_t alphabet_size) {
    if (kbar_symbols < 0) throw BadParams("kbar must be nonnegative");
    if (n == 0) throw BadParams("n must be positive");
    if (eps <= 0.0 || eps > 1.0) throw BadParams("eps must lie in (0,1]");
    if (alphabet_size < 2) throw BadParams("alphabet size must be >= 2");
    FanoVerdict verdict;
    verdict.threshold = kbar_symbols * std::log2(static_cast<double>(alphabet_size)) /
                        std::pow(eps, 6.0);
    verdict.feasible = !(static_cast<double>(n) > verdict.threshold);
    return verdict;
}

double mutual_info_estimate(const Code& code, const RepFamily& rep, std::size_t samples,
                            std::uint64_t seed) {
    if (samples == 0) throw BadParams("samples must be positive");
    code.validate();
    std::size_t total = rep.params.total_length();

    std::map<std::string, std::size_t> message_counts;
    std::map<std::string, std::size_t> record_counts;
    std::map<std::pair<std::string, std::string>, std::size_t> joint_counts;
    std::map<std::string, std::string> encoded_cache;

    for (std::size_t s = 0; s < samples; ++s) {
        std::string message(code.n, '\0');
        for (std::size_t j = 0; j < code.n; ++j) {
            std::uint64_t h = derive(seed, s, j, 0xE0);
            message[j] = code.alphabet.symbols[uniform_upto(h, code.alphabet.size() - 1)];
        }
        auto cached = encoded_cache.find(message);
        if (cached == encoded_cache.end()) {
            Codeword word = encode(code, message);
            std::string padded = word.symbols;
            padded.append(total - padded.size(), code.alphabet.zero());
            cached = encoded_cache.emplace(message, std::move(padded)).first;
        }
        CompressedRecord record = compress(cached->second, rep, derive(seed, s, 0xF));
        std::string key;
        for (const auto& entry : record.outputs) {
            key += entry ? *entry : std::string("!");
            key += '|';
        }
        ++message_counts[message];
        ++record_counts[key];
        ++joint_counts[{message, key}];
    }

    double total_d = static_cast<double>(samples);
    double info = 0.0;
    for (const auto& [pair, count] : joint_counts) {
        double pxy = static_cast<double>(count) / total_d;
        double px = static_cast<double>(message_counts.at(pair.first)) / total_d;
        double py = static_cast<double>(record_counts.at(pair.second)) / total_d;
        info += pxy * std::log2(pxy / (px * py));
    }
    return info;
}

std::optional<LccAttack> lcc_distance_attack(const Code& code, double eps_prime,
                                             std::size_t message_cap, std::uint64_t seed) {
    if (eps_prime <= 0.0 || eps_prime > 1.0) throw BadParams("eps' must lie in (0,1]");
    MessageSample sample = message_sample(code, message_cap, seed);
    std::vector<std::string> codewords;
    codewords.reserve(sample.messages.size());
    for (const std::string& msg : sample.messages)
        codewords.push_back(encode(code, msg).symbols);
    std::size_t length = codewords.empty() ? 0 : codewords.front().size();
    double bar = eps_prime * static_cast<double>(length);

    for (std::size_t i = 0; i < codewords.size(); ++i) {
        for (std::size_t j = i + 1; j < codewords.size(); ++j) {
            std::vector<std::size_t> differing;
            bool over = false;
            for (std::size_t p = 0; p < length; ++p) {
                if (codewords[i][p] != codewords[j][p]) {
                    differing.push_back(p + 1);
                    if (static_cast<double>(differing.size()) >= bar) {
                        over = true;
                        break;
                    }
                }
            }
            if (over) continue;
            LccAttack attack;
            attack.message_a = sample.messages[i];
            attack.message_b = sample.messages[j];
            attack.differing = differing;
            attack.corrupted_a = apply_deletions(codewords[i], differing);
            attack.corrupted_b = apply_deletions(codewords[j], differing);
            return attack;
        }
    }
    return std::nullopt;
}

std::string alternating_block_string(std::size_t n) {
    std::size_t root = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
    if (root * root != n) throw BadParams("n must be a perfect square (a power of 4)");
    std::string out;
    out.reserve(n);
    for (std::size_t block = 0; block < root; ++block)
        out.append(root, block % 2 == 0 ? '0' : '1');
    return out;
}

std::string ab_block_string(std::size_t n, std::size_t alpha, std::size_t beta) {
    std::size_t block = std::size_t(1) << beta;
    std::size_t run = std::size_t(1) << alpha;
    if (alpha >= beta || block > n || n % (2 * block) != 0)
        throw BadParams("need alpha < beta and 2^(beta+1) | n");
    std::string out;
    out.reserve(n);
    std::size_t blocks = n / block;
    for (std::size_t b = 0; b < blocks; ++b) {
        if (b % 2 == 0) {
            // Type A: runs of 2^alpha equal symbols.
            for (std::size_t p = 0; p < block; ++p)
                out.push_back((p / run) % 2 == 0 ? '0' : '1');
        } else {
            // Type B: alternate every position.
            for (std::size_t p = 0; p < block; ++p) out.push_back(p % 2 == 0 ? '0' : '1');
        }
    }
    return out;
}

double GapDistances::tv(std::size_t a, std::size_t b) const {
    for (const auto& [x, y, v] : pairwise_tv)
        if ((x == a && y == b) || (x == b && y == a)) return v;
    throw OutOfRange("no such gap pair");
}

GapDistances block_gap_experiment(std::size_t n, double eps,
                                  const std::vector<std::size_t>& gaps,
                                  std::size_t samples, std::uint64_t seed,
                                  std::size_t anchor, unsigned workers) {
    GapDistances report;
    report.n = n;
    report.eps = eps;
    report.anchor = anchor;
    report.samples = samples;
    report.gaps = gaps;
    std::string z = alternating_block_string(n);
    Pattern channel = PrefixPeriodicPattern{eps};
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
        std::vector<std::size_t> queries{anchor, anchor + gaps[gi]};
        report.dists.push_back(
            mc_output_dist(z, queries, channel, samples, derive(seed, gi), workers));
    }
    for (std::size_t a = 0; a < gaps.size(); ++a)
        for (std::size_t b = a + 1; b < gaps.size(); ++b)
            report.pairwise_tv.emplace_back(a, b, tv_distance(report.dists[a],
                                                              report.dists[b]));
    return report;
}

FourQueryReport ab_four_query_experiment(std::size_t n, double eps, std::size_t alpha,
                                         std::size_t beta, std::size_t d_small,
                                         std::size_t d_large, std::size_t samples,
                                         std::uint64_t seed, std::size_t anchor,
                                         unsigned workers) {
    if (d_small < 2 || d_large <= d_small)
        throw BadParams("need 2 <= d_small < d_large");
    FourQueryReport report;
    report.n = n;
    report.eps = eps;
    report.alpha = alpha;
    report.beta = beta;
    report.d_small = d_small;
    report.d_large = d_large;
    report.anchor = anchor;
    report.samples = samples;
    std::string z = ab_block_string(n, alpha, beta);
    Pattern channel = PrefixPeriodicPattern{eps};
    std::vector<std::size_t> qs{anchor, anchor + 1, anchor + d_small,
                                anchor + d_small + 1};
    std::vector<std::size_t> ql{anchor, anchor + 1, anchor + d_large,
                                anchor + d_large + 1};
    report.dist_small = mc_output_dist(z, qs, channel, samples, derive(seed, 0xA), workers);
    report.dist_large = mc_output_dist(z, ql, channel, samples, derive(seed, 0xB), workers);
    report.tv = tv_distance(report.dist_small, report.dist_large);
    return report;
}

}  // namespace delchan
