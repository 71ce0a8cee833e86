#include "rfp/random.hpp"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace rfp {

namespace {

constexpr std::size_t kBufferWords = 512; // 4 KiB of keystream per refill
constexpr std::size_t kChachaBlock = 64;

void ensure_sodium() {
    static const int status = sodium_init();
    if (status < 0)
        throw std::runtime_error("libsodium initialization failed");
}

int hex_value(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string bytes_to_hex(const unsigned char* data, std::size_t n) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(kDigits[data[i] >> 4]);
        out.push_back(kDigits[data[i] & 0xF]);
    }
    return out;
}

} // namespace

Seed seed_from_hex(std::string_view hex) {
    if (hex.size() != 64)
        throw std::invalid_argument("seed must be 64 hex digits, got " + std::to_string(hex.size()));
    Seed seed{};
    for (std::size_t i = 0; i < 32; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("seed contains a non-hex character");
        seed[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return seed;
}

Seed seed_from_short_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X"))
        hex.remove_prefix(2);
    if (hex.empty() || hex.size() > 64)
        throw std::invalid_argument("seed must be 1 to 64 hex digits");
    return seed_from_hex(std::string(64 - hex.size(), '0') + std::string(hex));
}

std::string seed_to_hex(const Seed& seed) { return bytes_to_hex(seed.data(), seed.size()); }

Seed derive_seed(const Seed& master, std::string_view label, std::uint64_t index) {
    ensure_sodium();
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    crypto_hash_sha256_update(&st, master.data(), master.size());
    crypto_hash_sha256_update(&st, reinterpret_cast<const unsigned char*>(label.data()), label.size());
    unsigned char le[8];
    for (int i = 0; i < 8; ++i)
        le[i] = static_cast<unsigned char>(index >> (8 * i));
    crypto_hash_sha256_update(&st, le, sizeof le);
    Seed out{};
    crypto_hash_sha256_final(&st, out.data());
    return out;
}

std::string sha256_hex(std::string_view data) {
    ensure_sodium();
    unsigned char digest[crypto_hash_sha256_BYTES];
    crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(data.data()), data.size());
    return bytes_to_hex(digest, sizeof digest);
}

RandomStream::RandomStream(const Seed& seed) : key_(seed), buffer_(kBufferWords), pos_(kBufferWords) {
    ensure_sodium();
}

void RandomStream::refill() {
    static const unsigned char kNonce[crypto_stream_chacha20_NONCEBYTES] = {};
    std::vector<unsigned char> zeros(kBufferWords * 8, 0);
    std::vector<unsigned char> ks(kBufferWords * 8);
    crypto_stream_chacha20_xor_ic(ks.data(), zeros.data(), ks.size(), kNonce, block_counter_, key_.data());
    block_counter_ += ks.size() / kChachaBlock;
    for (std::size_t i = 0; i < kBufferWords; ++i) {
        std::uint64_t w = 0;
        for (int b = 7; b >= 0; --b)
            w = (w << 8) | ks[8 * i + static_cast<std::size_t>(b)];
        buffer_[i] = w;
    }
    pos_ = 0;
}

std::uint64_t RandomStream::next_u64() {
    if (pos_ == buffer_.size())
        refill();
    return buffer_[pos_++];
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("uniform_below: bound must be positive");
    // reject the top partial bucket
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    while (true) {
        const std::uint64_t x = next_u64();
        if (x <= limit)
            return x % bound;
    }
}

double RandomStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

bool RandomStream::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Bernoulli bias must lie in [0, 1]");
    if (p == 0.0)
        return false;
    if (p == 1.0)
        return true;
    return uniform01() < p;
}

BitVector RandomStream::bernoulli_bits(std::size_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Bernoulli bias must lie in [0, 1]");
    BitVector v(n);
    if (p == 0.0)
        return v;
    if (p == 1.0) {
        for (auto& w : v.words())
            w = ~std::uint64_t{0};
        v.clear_tail();
        return v;
    }
    if (p == 0.5) {
        for (auto& w : v.words())
            w = next_u64();
        v.clear_tail();
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (uniform01() < p)
            v.set(i);
    return v;
}

} // namespace rfp
