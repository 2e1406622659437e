#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace delchan {

// Ordered finite alphabet of single-character symbols with a designated
// zero symbol used for padding and out-of-bounds reads.
struct Alphabet {
    std::string symbols = "01";
    std::size_t zero_index = 0;

    static Alphabet binary() { return Alphabet{}; }

    std::size_t size() const { return symbols.size(); }
    char zero() const { return symbols[zero_index]; }
    bool contains(char c) const { return symbols.find(c) != std::string::npos; }
    std::size_t index_of(char c) const;

    // Throws BadAlphabet unless size >= 2, symbols distinct and zero a member.
    void validate() const;
};

struct Codeword {
    Alphabet alphabet;
    std::string symbols;

    std::size_t length() const { return symbols.size(); }
    void validate() const;
};

// The i'th length-nu chunk of z, 1-based. Requires nu | len(z).
Codeword chunk(const Codeword& z, std::size_t nu, std::size_t i);
std::string_view chunk_view(std::string_view s, std::size_t nu, std::size_t i);

// Appends zero symbols until the length is the smallest power of kappa
// that is >= len(z). No-op if the length already is a power.
Codeword pad_to_power(const Codeword& z, std::size_t kappa);

std::size_t next_power(std::size_t kappa, std::size_t len);
bool is_power_of(std::size_t kappa, std::size_t len);
// Largest e with kappa^e <= value (value >= 1).
std::size_t floor_log(std::size_t kappa, std::size_t value);
std::size_t ipow(std::size_t base, std::size_t exp);

enum class CodeKind { identity, repetition, hadamard, random_uniform };

// Registry of toy codes used as attack targets. Encoding is deterministic;
// the random kind fixes its seed at construction.
struct Code {
    CodeKind kind = CodeKind::identity;
    std::size_t n = 1;
    Alphabet alphabet;
    std::size_t repetition_factor = 1;  // repetition kind
    std::size_t length = 0;             // random kind codeword length
    std::uint64_t seed = 0;             // random kind

    std::size_t codeword_length() const;
    void validate() const;
};

Codeword encode(const Code& code, std::string_view message);

// The evaluation set of messages: exhaustive when |Sigma|^n <= cap,
// otherwise a seeded uniform sample of size cap.
struct MessageSample {
    std::vector<std::string> messages;
    bool exhaustive = false;
};
MessageSample message_sample(const Code& code, std::size_t cap, std::uint64_t seed);

const char* code_kind_name(CodeKind kind);
CodeKind code_kind_from_name(std::string_view name);

}  // namespace delchan
