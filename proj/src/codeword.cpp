#include "delchan/codeword.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "delchan/errors.hpp"
#include "delchan/rng.hpp"

namespace delchan {

std::size_t Alphabet::index_of(char c) const {
    auto pos = symbols.find(c);
    if (pos == std::string::npos)
        throw BadMessage(std::string("symbol '") + c + "' not in alphabet \"" + symbols + "\"");
    return pos;
}

void Alphabet::validate() const {
    if (symbols.size() < 2) throw BadAlphabet("alphabet needs at least 2 symbols");
    std::set<char> seen(symbols.begin(), symbols.end());
    if (seen.size() != symbols.size()) throw BadAlphabet("alphabet symbols must be distinct");
    if (zero_index >= symbols.size()) throw BadAlphabet("zero symbol must be a member");
}

void Codeword::validate() const {
    alphabet.validate();
    for (char c : symbols)
        if (!alphabet.contains(c))
            throw BadMessage(std::string("codeword symbol '") + c + "' not in alphabet");
}

std::string_view chunk_view(std::string_view s, std::size_t nu, std::size_t i) {
    if (nu == 0 || s.size() % nu != 0)
        throw NonDividing("chunk length " + std::to_string(nu) + " does not divide " +
                          std::to_string(s.size()));
    std::size_t count = s.size() / nu;
    if (i < 1 || i > count)
        throw OutOfRange("chunk index " + std::to_string(i) + " not in [1, " +
                         std::to_string(count) + "]");
    return s.substr((i - 1) * nu, nu);
}

Codeword chunk(const Codeword& z, std::size_t nu, std::size_t i) {
    return Codeword{z.alphabet, std::string(chunk_view(z.symbols, nu, i))};
}

bool is_power_of(std::size_t kappa, std::size_t len) {
    if (len == 0) return false;
    while (len % kappa == 0) len /= kappa;
    return len == 1;
}

std::size_t next_power(std::size_t kappa, std::size_t len) {
    std::size_t p = 1;
    while (p < len) p *= kappa;
    return p;
}

std::size_t floor_log(std::size_t kappa, std::size_t value) {
    std::size_t e = 0;
    std::size_t p = 1;
    while (p * kappa <= value) {
        p *= kappa;
        ++e;
    }
    return e;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

Codeword pad_to_power(const Codeword& z, std::size_t kappa) {
    if (kappa < 2) throw BadParams("padding base must be >= 2");
    if (z.symbols.empty()) throw BadLength("cannot pad an empty codeword");
    Codeword out = z;
    out.symbols.append(next_power(kappa, z.length()) - z.length(), z.alphabet.zero());
    return out;
}

std::size_t Code::codeword_length() const {
    switch (kind) {
        case CodeKind::identity: return n;
        case CodeKind::repetition: return n * repetition_factor;
        case CodeKind::hadamard: return std::size_t(1) << n;
        case CodeKind::random_uniform: return length;
    }
    return 0;
}

void Code::validate() const {
    alphabet.validate();
    if (n == 0) throw BadParams("message length must be positive");
    if (kind == CodeKind::repetition && repetition_factor == 0)
        throw BadParams("repetition factor must be positive");
    if (kind == CodeKind::hadamard) {
        if (alphabet.symbols != "01") throw BadParams("hadamard code requires alphabet \"01\"");
        if (n > 24) throw BadParams("hadamard code limited to n <= 24");
    }
    if (kind == CodeKind::random_uniform && length == 0)
        throw BadParams("random code needs a codeword length");
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

Codeword encode(const Code& code, std::string_view message) {
    code.validate();
    if (message.size() != code.n)
        throw BadMessage("message length " + std::to_string(message.size()) + ", expected " +
                         std::to_string(code.n));
    for (char c : message)
        if (!code.alphabet.contains(c))
            throw BadMessage(std::string("message symbol '") + c + "' not in alphabet");

    std::string out;
    switch (code.kind) {
        case CodeKind::identity:
            out.assign(message);
            break;
        case CodeKind::repetition:
            out.reserve(code.codeword_length());
            for (char c : message) out.append(code.repetition_factor, c);
            break;
        case CodeKind::hadamard: {
            // Position indexed by y in {0,1}^n, lexicographic: bit <x,y> mod 2.
            std::size_t total = std::size_t(1) << code.n;
            out.reserve(total);
            for (std::size_t y = 0; y < total; ++y) {
                unsigned parity = 0;
                for (std::size_t j = 0; j < code.n; ++j) {
                    unsigned xj = message[j] == '1' ? 1u : 0u;
                    unsigned yj = (y >> (code.n - 1 - j)) & 1u;
                    parity ^= xj & yj;
                }
                out.push_back(parity ? '1' : '0');
            }
            break;
        }
        case CodeKind::random_uniform: {
            std::uint64_t key = derive(code.seed, fnv1a(message));
            out.reserve(code.length);
            for (std::size_t j = 0; j < code.length; ++j) {
                std::uint64_t h = derive(key, j);
                out.push_back(code.alphabet.symbols[uniform_upto(h, code.alphabet.size() - 1)]);
            }
            break;
        }
    }
    return Codeword{code.alphabet, std::move(out)};
}

MessageSample message_sample(const Code& code, std::size_t cap, std::uint64_t seed) {
    code.validate();
    MessageSample out;
    double log_total = static_cast<double>(code.n) * std::log2(double(code.alphabet.size()));
    bool exhaustive = log_total <= 40 &&
                      ipow(code.alphabet.size(), code.n) <= cap;
    out.exhaustive = exhaustive;
    if (exhaustive) {
        std::size_t total = ipow(code.alphabet.size(), code.n);
        out.messages.reserve(total);
        std::string msg(code.n, code.alphabet.symbols[0]);
        for (std::size_t v = 0; v < total; ++v) {
            std::size_t rest = v;
            for (std::size_t j = 0; j < code.n; ++j) {
                msg[code.n - 1 - j] = code.alphabet.symbols[rest % code.alphabet.size()];
                rest /= code.alphabet.size();
            }
            out.messages.push_back(msg);
        }
    } else {
        out.messages.reserve(cap);
        for (std::size_t s = 0; s < cap; ++s) {
            std::string msg(code.n, code.alphabet.symbols[0]);
            for (std::size_t j = 0; j < code.n; ++j) {
                std::uint64_t h = derive(seed, s, j);
                msg[j] = code.alphabet.symbols[uniform_upto(h, code.alphabet.size() - 1)];
            }
            out.messages.push_back(std::move(msg));
        }
    }
    return out;
}

const char* code_kind_name(CodeKind kind) {
    switch (kind) {
        case CodeKind::identity: return "identity";
        case CodeKind::repetition: return "repetition";
        case CodeKind::hadamard: return "hadamard";
        case CodeKind::random_uniform: return "random";
    }
    return "identity";
}

CodeKind code_kind_from_name(std::string_view name) {
    if (name == "identity") return CodeKind::identity;
    if (name == "repetition") return CodeKind::repetition;
    if (name == "hadamard") return CodeKind::hadamard;
    if (name == "random") return CodeKind::random_uniform;
    throw BadParams("unknown code kind \"" + std::string(name) + "\"");
}

}  // namespace delchan
