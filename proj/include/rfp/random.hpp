#pragma once

#include "rfp/bit_vector.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rfp {

using Seed = std::array<std::uint8_t, 32>;

Seed seed_from_hex(std::string_view hex);
std::string seed_to_hex(const Seed& seed);
/// Short hex strings are accepted for convenience and left-padded with zeros.
Seed seed_from_short_hex(std::string_view hex);

/// SHA-256(master || label || little-endian 64-bit index).
Seed derive_seed(const Seed& master, std::string_view label, std::uint64_t index);

/// SHA-256 of arbitrary bytes, lowercase hex.
std::string sha256_hex(std::string_view data);

/// Deterministic ChaCha20 keystream keyed by a 256-bit seed (zero nonce,
/// block counter from 0). Every draw consumes whole 64-bit words.
class RandomStream {
public:
    explicit RandomStream(const Seed& seed);

    std::uint64_t next_u64();
    /// Uniform in [0, bound) by rejection; bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();
    bool bernoulli(double p);
    /// n i.i.d. Bernoulli(p) bits. p = 0 and p = 1 consume nothing;
    /// p = 0.5 takes 64 raw bits per word.
    BitVector bernoulli_bits(std::size_t n, double p);
    BitVector uniform_bits(std::size_t n) { return bernoulli_bits(n, 0.5); }

private:
    void refill();

    Seed key_;
    std::uint64_t block_counter_ = 0;
    std::vector<std::uint64_t> buffer_;
    std::size_t pos_ = 0;
};

} // namespace rfp
